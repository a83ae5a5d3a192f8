#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use contextlab_core::exact::write_rays;
use contextlab_core::orthospace::cabello18_rays;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Run {
    pub fn text(&self) -> String {
        String::from_utf8(self.stdout.clone()).expect("utf-8 output")
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.stdout)
            .unwrap_or_else(|e| panic!("not JSON ({e}):\n{}", String::from_utf8_lossy(&self.stdout)))
    }
}

pub fn run<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_contextlab"))
        .args(args.iter().map(AsRef::as_ref))
        .output()
        .expect("spawn contextlab");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn ok<S: AsRef<str>>(args: &[S]) -> Run {
    let r = run(args);
    let shown: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    assert_eq!(r.code, 0, "{shown:?} failed: {}", r.stderr);
    r
}

/// Input files shared by the whole-CLI tests.
pub struct Fixtures {
    _dir: tempfile::TempDir,
    pub rays: PathBuf,
    pub contexts: PathBuf,
    pub graph: PathBuf,
    pub vfile: PathBuf,
    pub hfile: PathBuf,
    pub bits: PathBuf,
    pub bytes: PathBuf,
    pub chsh_table: PathBuf,
    pub ks_table: PathBuf,
}

fn write(dir: &Path, name: &str, content: &[u8]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

pub fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rays = write(d, "cabello18.rays", write_rays(&cabello18_rays()).as_bytes());
    let contexts = write(
        d,
        "cabello18.ctx",
        b"a: A B C D\nb: D E F G\nc: G H I J\nd: J K L M\ne: M N O P\nf: P Q R A\ng: B I K R\nh: C E L N\ni: F H O Q\n",
    );
    let graph = write(d, "cabello18.json", &ok(&["graph", "build", rays.to_str().unwrap()]).stdout);
    let vfile = write(d, "chsh.v", &ok(&["poly", "vertices", "chsh"]).stdout);
    let hfile = write(d, "chsh.h", &ok(&["poly", "facets", vfile.to_str().unwrap()]).stdout);
    let bits = write(d, "fair.bits", &ok(&["qrng", "gen", "--theta", "1.5707963267948966", "--n", "20000"]).stdout);
    let bytes = write(
        d,
        "fair.bin",
        &ok(&["qrng", "gen", "--theta", "1.5707963267948966", "--n", "20000", "--format", "bytes"]).stdout,
    );
    let chsh_table = write(d, "chsh.table", &ok(&["table", "chsh", "--target", "2.8", "--n", "40"]).stdout);
    let ks_table = write(d, "ks.table", &ok(&["table", "ks", graph.to_str().unwrap(), "--n", "6"]).stdout);
    Fixtures { _dir: dir, rays, contexts, graph, vfile, hfile, bits, bytes, chsh_table, ks_table }
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

/// One invocation per subcommand and output format, all reading fixtures.
pub fn invocations(f: &Fixtures) -> Vec<Vec<String>> {
    let v = |a: &[&str]| a.iter().map(|x| x.to_string()).collect::<Vec<String>>();
    let mut out = vec![
        v(&["graph", "build", &s(&f.rays)]),
        v(&["graph", "build", &s(&f.rays), "--contexts", &s(&f.contexts)]),
        v(&["graph", "parity", "cabello18"]),
        v(&["graph", "parity", &s(&f.graph), "--format", "human"]),
        v(&["states", "enumerate", "tripods2"]),
        v(&["states", "enumerate", "twolink4", "--format", "human"]),
        v(&["states", "ks", "cabello18"]),
        v(&["states", "ks", "fourpods3"]),
        v(&["states", "contextual", "cabello18"]),
        v(&["states", "contextual", "cabello18", "--random"]),
        v(&["poly", "vertices", "pair"]),
        v(&["poly", "vertices", "chsh", "--coords", "correlation", "--format", "json"]),
        v(&["poly", "facets", &s(&f.vfile)]),
        v(&["poly", "facets", "chsh", "--coords", "correlation", "--format", "human"]),
        v(&["poly", "member", &s(&f.hfile), "0.5,0.5,0.5,0.5,0.5,0,0.5,0.5"]),
        v(&["quantum", "chsh", "--angles", "0,1.5707963267948966,3.9269908169872414,2.356194490192345"]),
        v(&["quantum", "explosion", "cabello18", "A"]),
        v(&["quantum", "expect", "--state", "singlet", "--observable", "z*z"]),
        v(&["qrng", "gen", "--theta", "1.0471975511965976", "--n", "4096"]),
        v(&["qrng", "gen", "--theta", "1.0471975511965976", "--n", "4096", "--noise", "0.1", "--extract"]),
        v(&["qrng", "gen", "--theta", "0.7", "--n", "2000", "--format", "human"]),
        v(&["qrng", "test", &s(&f.bits)]),
        v(&["qrng", "test", &s(&f.bytes), "--input", "bytes", "--format", "human"]),
        v(&["table", "chsh", "--target", "4", "--n", "20"]),
        v(&["table", "chsh", "--target", "-1.3", "--n", "25", "--format", "human"]),
        v(&["table", "ks", "cabello18", "--n", "5"]),
        v(&["table", "validate", &s(&f.chsh_table)]),
        v(&["table", "validate", &s(&f.ks_table), "--graph", &s(&f.graph)]),
    ];
    // JSON variants of every subcommand that has one.
    for cmd in [
        v(&["poly", "vertices", "pair", "--format", "json"]),
        v(&["poly", "facets", &s(&f.vfile), "--format", "json"]),
        v(&["quantum", "chsh", "--angles", "0,1,2,3", "--format", "json"]),
        v(&["quantum", "expect", "--state", "plus", "--observable", "x", "--format", "json"]),
        v(&["qrng", "gen", "--theta", "2", "--n", "512", "--format", "json"]),
        v(&["table", "chsh", "--target", "3", "--n", "10", "--format", "json"]),
        v(&["table", "ks", "cabello18", "--n", "3", "--format", "json"]),
    ] {
        out.push(cmd);
    }
    out
}

/// Subcommands that write JSON under the given arguments.
pub fn emits_json(args: &[String]) -> bool {
    let explicit = args.windows(2).find(|w| w[0] == "--format").map(|w| w[1].as_str());
    match explicit {
        Some(f) => f == "json",
        None => matches!(
            (args[0].as_str(), args[1].as_str()),
            ("graph", _)
                | ("states", _)
                | ("poly", "member")
                | ("quantum", "explosion")
                | ("qrng", "test")
                | ("table", "validate")
        ),
    }
}
