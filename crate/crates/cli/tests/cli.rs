mod common;

use common::{emits_json, fixtures, invocations, ok, run};

#[test]
fn ks_verdict_for_cabello18() {
    let r = ok(&["states", "ks", "cabello18"]);
    let v = r.json();
    assert_eq!(v["ks"], true);
    assert_eq!(v["measures"], 0);
    assert_eq!(v["witness"]["kind"], "parity");
    assert_eq!(v["witness"]["num_contexts"], 9);
}

#[test]
fn negative_verdict_is_data() {
    let v = ok(&["states", "ks", "tripods2"]).json();
    assert_eq!(v["ks"], false);
    assert!(v["measures"].as_u64().unwrap() > 0);
}

#[test]
fn enumerate_json_shape() {
    let v = ok(&["states", "enumerate", "twolink4"]).json();
    let count = v["count"].as_u64().unwrap() as usize;
    let measures = v["measures"].as_array().unwrap();
    assert_eq!(measures.len(), count);
    for m in measures {
        let s = m.as_str().unwrap();
        assert!(s.chars().all(|c| c == '0' || c == '1'));
    }
    assert!(v["separating"].is_boolean() && v["unital"].is_boolean());
}

#[test]
fn empty_v_file_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.v");
    std::fs::write(&empty, "").unwrap();
    let r = run(&["poly", "facets", empty.to_str().unwrap()]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn missing_file_names_the_path() {
    let r = run(&["qrng", "test", "/nonexistent/bits.txt"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("/nonexistent/bits.txt"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["states", "ks", "cabello18", "--bogus"],
        vec!["frobnicate"],
        vec!["qrng", "gen", "--theta", "1"],
        vec!["qrng", "gen", "--theta", "abc", "--n", "10"],
        vec!["--threads", "0", "graph", "parity", "cabello18"],
    ] {
        assert_eq!(run(&args).code, 2, "{args:?}");
    }
}

#[test]
fn domain_errors_exit_three() {
    for args in [
        vec!["states", "ks", "no-such-graph"],
        vec!["quantum", "chsh", "--angles", "0,1,2"],
        vec!["qrng", "gen", "--theta", "1", "--n", "10", "--noise", "1.5"],
        vec!["quantum", "explosion", "cabello18", "Z"],
        vec!["table", "ks", "tripods2", "--n", "3"],
    ] {
        assert_eq!(run(&args).code, 3, "{args:?}");
    }
}

#[test]
fn chsh_at_tsirelson_angles() {
    let r = ok(&["quantum", "chsh", "--angles", "0,1.5707963267948966,3.9269908169872414,2.356194490192345"]);
    let value: f64 = r.text().trim().parse().unwrap();
    assert!((value - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(r.text().trim(), "2.82842712475");
}

/// The first-quadrant angle set 0, π/2, π/4, 3π/4 has E(a1,b1) - E(a2,b2) = 0
/// and E(a1,b2) + E(a2,b1) = 0 for the singlet, so the sum vanishes.
#[test]
fn first_quadrant_angles_give_zero() {
    let r = ok(&["quantum", "chsh", "--angles", "0,1.5707963,0.7853981,2.3561944"]);
    let value: f64 = r.text().trim().parse().unwrap();
    assert!(value.abs() < 1e-6, "{value}");
}

#[test]
fn expectation_values() {
    let z = ok(&["quantum", "expect", "--state", "singlet", "--observable", "z*z"]);
    assert_eq!(z.text().trim(), "-1");
    let x = ok(&["quantum", "expect", "--state", "zero", "--observable", "x", "--format", "json"]).json();
    assert_eq!(x["value"], 0.0);
}

#[test]
fn explosion_marginals_agree() {
    let v = ok(&["quantum", "explosion", "cabello18", "A"]).json();
    for view in v.as_array().unwrap() {
        assert_eq!(view["delta"], 0.0);
        assert_eq!(view["marginal_1"], 0.25);
    }
}

#[test]
fn json_output_parses_everywhere() {
    let f = fixtures();
    let mut checked = 0;
    for args in invocations(&f) {
        let r = ok(&args);
        if emits_json(&args) {
            r.json();
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn table_json_roundtrips_through_validator() {
    let dir = tempfile::tempdir().unwrap();
    for (args, name) in [
        (vec!["table", "chsh", "--target", "2.5", "--n", "30", "--format", "json"], "chsh.json"),
        (vec!["table", "ks", "cabello18", "--n", "4", "--format", "json"], "ks.json"),
    ] {
        let r = ok(&args);
        let path = dir.path().join(name);
        std::fs::write(&path, &r.stdout).unwrap();
        let report = ok(&["table", "validate", path.to_str().unwrap()]).json();
        assert_eq!(report["valid"], true);
        assert_eq!(report["columns"], r.json()["columns"].as_array().unwrap().len());
    }
}

#[test]
fn chsh_table_means_track_target() {
    let f = fixtures();
    let report = ok(&["table", "validate", f.chsh_table.to_str().unwrap()]).json();
    assert_eq!(report["valid"], true);
    let mean = report["mean_chsh"].as_f64().unwrap();
    assert!((mean - 2.8).abs() < 0.2, "{mean}");
}

#[test]
fn ks_table_has_violations_in_every_column() {
    let f = fixtures();
    let report = ok(&["table", "validate", f.ks_table.to_str().unwrap(), "--graph", f.graph.to_str().unwrap()]).json();
    assert_eq!(report["valid"], true);
    assert!(report["min_violations"].as_u64().unwrap() >= 1);
}

#[test]
fn polytope_pipeline() {
    let f = fixtures();
    let h = std::fs::read_to_string(&f.hfile).unwrap();
    assert!(h.starts_with("H 24 8\n"), "{h}");
    let inside = ok(&["poly", "member", f.hfile.to_str().unwrap(), "0.5,0.5,0.5,0.5,0.25,0.25,0.25,0.25"]).json();
    assert_eq!(inside["location"], "inside");
    // PR box in probability coordinates: p_a = p_b = 1/2, p_ab = 1/2 except p_22 = 0.
    let pr = ok(&["poly", "member", f.hfile.to_str().unwrap(), "1/2,1/2,1/2,1/2,1/2,1/2,1/2,0"]).json();
    assert_eq!(pr["location"], "outside");
    assert_eq!(pr["violated"].as_array().unwrap().len(), 1);
}

#[test]
fn bits_and_bytes_agree() {
    let f = fixtures();
    let a = ok(&["qrng", "test", f.bits.to_str().unwrap()]).json();
    let b = ok(&["qrng", "test", f.bytes.to_str().unwrap(), "--input", "bytes"]).json();
    assert_eq!(a, b);
    assert_eq!(a["bits"], 20000);
}

#[test]
fn deterministic_theta_zero() {
    let r = ok(&["qrng", "gen", "--theta", "0", "--n", "256"]);
    assert_eq!(r.text().trim(), "0".repeat(256));
}

#[test]
fn seed_changes_output() {
    let a = ok(&["--seed", "1", "qrng", "gen", "--theta", "1.5707963267948966", "--n", "128"]).stdout;
    let b = ok(&["--seed", "2", "qrng", "gen", "--theta", "1.5707963267948966", "--n", "128"]).stdout;
    let c = ok(&["qrng", "gen", "--theta", "1.5707963267948966", "--n", "128", "--seed", "1"]).stdout;
    assert_ne!(a, b);
    assert_eq!(a, c);
}

#[test]
fn golden_outputs() {
    assert_eq!(ok(&["poly", "vertices", "pair"]).text(), "V 4 3\n0 0 0\n0 1 0\n1 0 0\n1 1 1\n");
    assert_eq!(ok(&["poly", "facets", "pair"]).text(), "H 4 3\n0 1 0 -1\n0 0 1 -1\n0 0 0 1\n1 -1 -1 1\n");
    let parity = ok(&["graph", "parity", "cabello18"]).json();
    assert_eq!(parity["num_contexts"], 9);
    assert_eq!(parity["parity_obstruction"], true);
    assert!(parity["atom_multiplicities"].as_array().unwrap().iter().all(|m| m == 2));
}

#[test]
fn clique_and_explicit_builds_agree() {
    let f = fixtures();
    let derived = ok(&["graph", "build", f.rays.to_str().unwrap()]).json();
    let explicit = ok(&["graph", "build", f.rays.to_str().unwrap(), "--contexts", f.contexts.to_str().unwrap()]).json();
    let sets = |v: &serde_json::Value| {
        let mut s: Vec<Vec<String>> = v["contexts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| {
                let atoms = c.get("atoms").unwrap_or(c);
                let mut a: Vec<String> =
                    atoms.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
                a.sort();
                a
            })
            .collect();
        s.sort();
        s
    };
    assert_eq!(sets(&derived), sets(&explicit));
    assert_eq!(sets(&derived).len(), 9);
}
