//! Resolving command-line arguments into core values.

use std::path::Path;

use contextlab_core::exact::{parse_rational, parse_rays};
use contextlab_core::orthospace::{build_from_rays, library_graph};
use contextlab_core::polytope::EventScheme;
use contextlab_core::quantum::{DensityState, Observable};
use contextlab_core::{OrthoHypergraph, Rational};

use crate::run::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

/// A library name, a hypergraph document, or a ray file whose contexts
/// are the maximal orthogonal cliques.
pub fn load_graph(arg: &str) -> Result<OrthoHypergraph, CliError> {
    if let Some(h) = library_graph(arg) {
        return Ok(h);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Other(format!("`{arg}` is neither a library hypergraph nor a readable file")));
    }
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        return Ok(OrthoHypergraph::from_json(&text)?);
    }
    let rays = parse_rays(&text)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    Ok(build_from_rays(&rays, None)?.graph.with_name(name))
}

pub fn load_scheme(arg: &str) -> Result<EventScheme, CliError> {
    if let Some(s) = EventScheme::builtin(arg) {
        return Ok(s);
    }
    Ok(EventScheme::parse(&read_text(Path::new(arg))?)?)
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim)
}

pub fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    split_list(text)
        .map(|t| {
            t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| CliError::Other(format!("bad {what} `{t}`")))
        })
        .collect()
}

pub enum Point {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Rational if every coordinate parses exactly, floating point otherwise.
pub fn parse_point(text: &str) -> Result<Point, CliError> {
    let exact: Option<Vec<Rational>> = split_list(text).map(parse_rational).collect();
    match exact {
        Some(v) => Ok(Point::Exact(v)),
        None => Ok(Point::Float(parse_floats(text, "coordinate")?)),
    }
}

pub fn parse_state(spec: &str) -> Result<DensityState<f64>, CliError> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let dim = || -> Result<usize, CliError> {
        arg.parse().map_err(|_| CliError::Other(format!("state `{spec}` needs a dimension")))
    };
    Ok(match kind {
        "zero" => DensityState::pure_real(&[1.0, 0.0])?,
        "one" => DensityState::pure_real(&[0.0, 1.0])?,
        "plus" => DensityState::pure_real(&[1.0, 1.0])?,
        "singlet" => DensityState::singlet(),
        "mixed" => DensityState::maximally_mixed(dim()?)?,
        "entangled" => DensityState::maximally_entangled(dim()?)?,
        "vector" => DensityState::pure_real(&parse_floats(arg, "amplitude")?)?,
        _ => return Err(CliError::Other(format!("unknown state `{spec}`"))),
    })
}

pub fn parse_observable(spec: &str) -> Result<Observable<f64>, CliError> {
    let mut factors = spec.split('*').map(|part| {
        let (kind, arg) = part.trim().split_once(':').unwrap_or((part.trim(), ""));
        Ok(match kind {
            "x" => Observable::pauli_x(),
            "y" => Observable::pauli_y(),
            "z" => Observable::pauli_z(),
            "spin" => {
                let theta = parse_floats(arg, "angle")?;
                match theta.as_slice() {
                    [t] => Observable::spin(*t),
                    _ => return Err(CliError::Other(format!("`{part}` needs one angle"))),
                }
            }
            "proj" => Observable::projector(&parse_floats(arg, "component")?)?,
            _ => return Err(CliError::Other(format!("unknown observable `{part}`"))),
        })
    });
    let first = factors.next().expect("split yields at least one part")?;
    factors.try_fold(first, |acc, next| Ok(acc.kron(&next?)?))
}
