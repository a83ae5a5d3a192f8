//! Subcommand handlers. Each returns the bytes to print on stdout.

use std::fmt;
use std::path::Path;

use contextlab_core::exact::{format_rational, parse_rays};
use contextlab_core::orthospace::{build_from_rays, parity_diagnostic, parse_context_specs};
use contextlab_core::polytope::format::{parse_h, parse_v, write_h, write_v};
use contextlab_core::polytope::{
    facet_enumeration, membership, to_correlation_coordinates, vertices_from_scheme, CorrelationPolytope, EventScheme,
    Inequality, Location, Membership, Relation,
};
use contextlab_core::qrng::{
    generate, ground_state, parse_ascii_bits, test_battery, unpack_bytes, von_neumann_extract, TranslationModel,
};
use contextlab_core::quantum::{chsh_value, expectation, explosion_view_marginals, ExplosionView};
use contextlab_core::scenario::{
    generate_chsh_table, generate_ks_table, parse_table, validate_table, write_table, OutcomeTable, TableReport,
};
use contextlab_core::states::{
    contextual_assignment_search, enumerate_measures_with, is_ks_set, random_contextual_assignment,
    ContextualAssignment, EnumerateOptions,
};
use contextlab_core::{Error, OrthoHypergraph, Polytope, Rational};
use serde_json::json;

use crate::input::{
    load_graph, load_scheme, parse_floats, parse_observable, parse_point, parse_state, read_bytes, read_text, Point,
};
use crate::output::{human, json, lines};
use crate::{
    BitsFormat, BitsInput, Cli, Command, CoordsArg, GraphCmd, PolyCmd, QrngCmd, QuantumCmd, Report, StatesCmd,
    TableCmd, TextReport,
};

#[derive(Debug)]
pub enum CliError {
    Io(String, String),
    Core(Error),
    Other(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, msg) => write!(f, "{path}: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Other(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Out = Result<Vec<u8>, CliError>;

pub fn dispatch(cli: &Cli) -> Out {
    let seed = cli.seed;
    match &cli.command {
        Command::Graph(cmd) => graph(cmd),
        Command::States(cmd) => states(cmd, seed),
        Command::Poly(cmd) => poly(cmd),
        Command::Quantum(cmd) => quantum(cmd),
        Command::Qrng(cmd) => qrng(cmd, seed),
        Command::Table(cmd) => table(cmd, seed),
    }
}

fn atom_labels(h: &OrthoHypergraph) -> Vec<String> {
    h.atoms().iter().map(|a| a.label().to_string()).collect()
}

fn graph(cmd: &GraphCmd) -> Out {
    match cmd {
        GraphCmd::Build { rayfile, contexts, format } => {
            let rays = parse_rays(&read_text(rayfile)?)?;
            let specs = match contexts {
                Some(path) => Some(parse_context_specs(&read_text(path)?)?),
                None => None,
            };
            let report = build_from_rays(&rays, specs.as_deref())?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let name = rayfile.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
            let h = report.graph.with_name(name);
            Ok(match format.format {
                Report::Json => json(&h.to_document()),
                Report::Human => {
                    let mut out = vec![
                        format!("name: {}", h.name()),
                        format!("dimension: {}", h.dimension()),
                        format!("atoms: {}", h.atoms().len()),
                        format!("contexts: {}", h.contexts().len()),
                    ];
                    for c in h.contexts() {
                        let members: Vec<&str> = c.atoms.iter().map(|&a| h.atoms()[a].label()).collect();
                        out.push(format!("  {}: {}", c.label, members.join(", ")));
                    }
                    lines(out)
                }
            })
        }
        GraphCmd::Parity { graph, format } => {
            let h = load_graph(graph)?;
            let p = parity_diagnostic(&h);
            Ok(match format.format {
                Report::Json => json(&json!({
                    "graph": h.name(),
                    "num_contexts": p.num_contexts,
                    "atoms": atom_labels(&h),
                    "atom_multiplicities": p.atom_multiplicities,
                    "parity_obstruction": p.parity_obstruction,
                })),
                Report::Human => {
                    let mut out = vec![
                        format!("contexts: {}", p.num_contexts),
                        format!("parity obstruction: {}", p.parity_obstruction),
                    ];
                    for (a, m) in h.atoms().iter().zip(&p.atom_multiplicities) {
                        out.push(format!("  {}: {m}", a.label()));
                    }
                    lines(out)
                }
            })
        }
    }
}

fn assignment_json(h: &OrthoHypergraph, a: &ContextualAssignment) -> serde_json::Value {
    let contexts: Vec<serde_json::Value> = h
        .contexts()
        .iter()
        .zip(&a.values)
        .map(|(c, vals)| {
            json!({
                "context": c.label,
                "atoms": c.atoms.iter().map(|&i| h.atoms()[i].label()).collect::<Vec<_>>(),
                "values": vals.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>(),
            })
        })
        .collect();
    json!({
        "graph": h.name(),
        "violations": a.violations(),
        "violating_atoms": a.violating_atoms.iter().map(|&i| h.atoms()[i].label()).collect::<Vec<_>>(),
        "minimal": a.exhaustive,
        "contexts": contexts,
    })
}

fn states(cmd: &StatesCmd, seed: u64) -> Out {
    match cmd {
        StatesCmd::Enumerate { graph, limit, format } => {
            let h = load_graph(graph)?;
            let r = enumerate_measures_with(&h, EnumerateOptions { limit: *limit, parallel: true });
            let bits: Vec<String> = r.measures.iter().map(|m| m.to_bits()).collect();
            Ok(match format.format {
                Report::Json => json(&json!({
                    "graph": h.name(),
                    "atoms": atom_labels(&h),
                    "count": r.count,
                    "separating": r.separating,
                    "unital": r.unital,
                    "truncated": r.truncated,
                    "measures": bits,
                })),
                Report::Human => {
                    let mut out = vec![
                        format!("measures: {}{}", r.count, if r.truncated { " (truncated)" } else { "" }),
                        format!("separating: {}", r.separating),
                        format!("unital: {}", r.unital),
                    ];
                    out.extend(bits.into_iter().map(|b| format!("  {b}")));
                    lines(out)
                }
            })
        }
        StatesCmd::Ks { graph, format } => {
            let h = load_graph(graph)?;
            let verdict = is_ks_set(&h);
            let count = if verdict.ks {
                0
            } else {
                enumerate_measures_with(
                    &h,
                    EnumerateOptions { limit: contextlab_core::states::DEFAULT_LIMIT, parallel: true },
                )
                .count
            };
            Ok(match format.format {
                Report::Json => json(&json!({
                    "graph": h.name(),
                    "ks": verdict.ks,
                    "measures": count,
                    "witness": verdict.witness,
                })),
                Report::Human => lines([
                    format!("ks: {}", verdict.ks),
                    format!("measures: {count}"),
                    format!("witness: {}", serde_json::to_string(&verdict.witness).expect("serializable")),
                ]),
            })
        }
        StatesCmd::Contextual { graph, random, format } => {
            let h = load_graph(graph)?;
            let found = if *random {
                random_contextual_assignment(&h, &mut contextlab_core::qrng::lane_rng(seed, 0))
            } else {
                contextual_assignment_search(&h)
            };
            let a = found.ok_or_else(|| CliError::Other("no per-context assignment exists".into()))?;
            Ok(match format.format {
                Report::Json => json(&assignment_json(&h, &a)),
                Report::Human => {
                    let labels: Vec<&str> = a.violating_atoms.iter().map(|&i| h.atoms()[i].label()).collect();
                    let mut out = vec![format!("violations: {} [{}]", a.violations(), labels.join(", "))];
                    for (c, vals) in h.contexts().iter().zip(&a.values) {
                        let cells: Vec<String> = c
                            .atoms
                            .iter()
                            .zip(vals)
                            .map(|(&i, &v)| format!("{}{{{}}}={}", h.atoms()[i].label(), c.label, v as u8))
                            .collect();
                        out.push(format!("  {}", cells.join(" ")));
                    }
                    lines(out)
                }
            })
        }
    }
}

fn inequality_json(ineq: &Inequality, labels: &[String]) -> serde_json::Value {
    json!({
        "coefficients": ineq.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "bound": ineq.bound.to_string(),
        "relation": match ineq.relation { Relation::LessEq => "<=", Relation::Equal => "=" },
        "text": ineq.render(labels),
    })
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

fn scheme_polytope(scheme: &str, coords: CoordsArg, facets: bool) -> Result<CorrelationPolytope, CliError> {
    let mut p = vertices_from_scheme(&load_scheme(scheme)?)?;
    if facets {
        p = facet_enumeration(&p)?;
    }
    if coords == CoordsArg::Correlation {
        p = to_correlation_coordinates(&p)?;
    }
    Ok(p)
}

fn render_facets(p: &Polytope, labels: &[String], format: TextReport) -> Vec<u8> {
    match format {
        TextReport::Text => write_h(p.dimension(), p.facets(), p.equalities()).into_bytes(),
        TextReport::Human => lines(p.facets().iter().chain(p.equalities()).map(|f| f.render(labels))),
        TextReport::Json => json(&json!({
            "dimension": p.dimension(),
            "labels": labels,
            "facets": p.facets().iter().map(|f| inequality_json(f, labels)).collect::<Vec<_>>(),
            "equalities": p.equalities().iter().map(|f| inequality_json(f, labels)).collect::<Vec<_>>(),
        })),
    }
}

fn membership_json<T>(
    m: &Membership<T>,
    facets: &[Inequality],
    equalities: &[Inequality],
    labels: &[String],
    show: impl Fn(&T) -> serde_json::Value,
) -> serde_json::Value {
    let location = match m.location {
        Location::Inside => "inside",
        Location::OnBoundary => "on_boundary",
        Location::Outside => "outside",
    };
    let violated: Vec<serde_json::Value> = m
        .violated
        .iter()
        .map(|v| {
            let ineq = if v.equality { &equalities[v.index] } else { &facets[v.index] };
            json!({
                "index": v.index,
                "equality": v.equality,
                "inequality": ineq.render(labels),
                "value": show(&v.value),
                "excess": show(&v.excess),
            })
        })
        .collect();
    json!({ "location": location, "violated": violated, "tight": m.tight })
}

fn poly(cmd: &PolyCmd) -> Out {
    match cmd {
        PolyCmd::Vertices { scheme, coords, format } => {
            let p = scheme_polytope(scheme, *coords, false)?;
            let labels = p.coordinate_labels();
            Ok(match format {
                TextReport::Text => write_v(p.polytope().dimension(), p.vertices()).into_bytes(),
                TextReport::Human => {
                    let mut out = vec![labels.join(" ")];
                    out.extend(
                        p.vertices().iter().map(|v| v.iter().map(format_rational).collect::<Vec<_>>().join(" ")),
                    );
                    lines(out)
                }
                TextReport::Json => json(&json!({
                    "labels": labels,
                    "vertices": p.vertices().iter()
                        .map(|v| v.iter().map(format_rational).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })),
            })
        }
        PolyCmd::Facets { input, coords, format } => {
            let is_scheme = EventScheme::builtin(input).is_some()
                || (Path::new(input).is_file() && read_text(Path::new(input))?.contains("singles:"));
            let looks_like_v = !is_scheme;
            if looks_like_v {
                if *coords == CoordsArg::Correlation {
                    return Err(CliError::Other("--coords applies to schemes, not V-files".into()));
                }
                let (dim, vertices) = parse_v(&read_text(Path::new(input))?)?;
                if vertices.is_empty() {
                    return Err(Error::InvalidPolytope("V-file lists no vertices".into()).into());
                }
                let mut p = Polytope::from_vertices(dim, vertices)?;
                p.compute_facets()?;
                Ok(render_facets(&p, &default_labels(dim), *format))
            } else {
                let p = scheme_polytope(input, *coords, true)?;
                Ok(render_facets(p.polytope(), &p.coordinate_labels(), *format))
            }
        }
        PolyCmd::Member { hfile, point, format } => {
            let (dim, facets, equalities) = parse_h(&read_text(hfile)?)?;
            let labels = default_labels(dim);
            let value = match parse_point(point)? {
                Point::Exact(x) => {
                    let m = membership(&facets, &equalities, dim, &x)?;
                    membership_json(&m, &facets, &equalities, &labels, |v: &Rational| json!(format_rational(v)))
                }
                Point::Float(x) => {
                    let m = membership(&facets, &equalities, dim, &x)?;
                    membership_json(&m, &facets, &equalities, &labels, |v: &f64| json!(v))
                }
            };
            Ok(match format.format {
                Report::Json => json(&value),
                Report::Human => {
                    let mut out = vec![format!("location: {}", value["location"].as_str().unwrap_or(""))];
                    for v in value["violated"].as_array().into_iter().flatten() {
                        out.push(format!(
                            "  violated: {} (value {}, excess {})",
                            v["inequality"].as_str().unwrap_or(""),
                            v["value"],
                            v["excess"]
                        ));
                    }
                    lines(out)
                }
            })
        }
    }
}

fn explosion_json(v: &ExplosionView<f64>) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn quantum(cmd: &QuantumCmd) -> Out {
    match cmd {
        QuantumCmd::Chsh { angles, format } => {
            let a = parse_floats(angles, "angle")?;
            let [a1, a2, b1, b2] = a[..] else {
                return Err(CliError::Other(format!("expected four angles, found {}", a.len())));
            };
            let value = chsh_value(a1, a2, b1, b2);
            Ok(match format {
                Report::Human => lines([human(value)]),
                Report::Json => json(&json!({ "angles": a, "value": value })),
            })
        }
        QuantumCmd::Explosion { graph, atom, contexts, format } => {
            let h = load_graph(graph)?;
            let a = h.atom_by_label(atom).ok_or_else(|| Error::UnknownLabel(atom.clone()))?.id;
            let pairs: Vec<(usize, usize)> = match contexts {
                Some(list) => {
                    let ids = list
                        .split(',')
                        .map(|l| {
                            h.context_by_label(l.trim())
                                .map(|c| c.id)
                                .ok_or_else(|| Error::UnknownLabel(l.trim().to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    match ids[..] {
                        [c1, c2] => vec![(c1, c2)],
                        _ => return Err(CliError::Other("--contexts takes two labels".into())),
                    }
                }
                None => {
                    let inc = &h.incidence()[a];
                    let mut pairs = Vec::new();
                    for (i, &c1) in inc.iter().enumerate() {
                        for &c2 in &inc[i + 1..] {
                            pairs.push((c1, c2));
                        }
                    }
                    if pairs.is_empty() {
                        return Err(CliError::Other(format!("atom `{atom}` lies in a single context")));
                    }
                    pairs
                }
            };
            let views =
                pairs.into_iter().map(|p| explosion_view_marginals::<f64>(&h, a, p)).collect::<Result<Vec<_>, _>>()?;
            Ok(match format.format {
                Report::Json => json(&views.iter().map(explosion_json).collect::<Vec<_>>()),
                Report::Human => lines(views.iter().map(|v| {
                    format!(
                        "{}{{{}}} vs {}{{{}}}: marginals {} {}, delta {}",
                        v.atom,
                        v.contexts[0],
                        v.atom,
                        v.contexts[1],
                        human(v.marginal_1),
                        human(v.marginal_2),
                        human(v.delta)
                    )
                })),
            })
        }
        QuantumCmd::Expect { state, observable, format } => {
            let rho = parse_state(state)?;
            let obs = parse_observable(observable)?;
            let value = expectation(&rho, &obs)?;
            Ok(match format {
                Report::Human => lines([human(value)]),
                Report::Json => json(&json!({ "state": state, "observable": observable, "value": value })),
            })
        }
    }
}

fn qrng(cmd: &QrngCmd, seed: u64) -> Out {
    match cmd {
        QrngCmd::Gen { theta, n, noise, extract, format } => {
            if !theta.is_finite() {
                return Err(CliError::Other("theta must be finite".into()));
            }
            let model = match noise {
                Some(eps) => TranslationModel::noisy(*theta, *eps)?,
                None => TranslationModel::ideal(*theta),
            };
            let mut stream = generate(&ground_state(), model, *n, seed)?;
            if *extract {
                stream = von_neumann_extract(&stream);
            }
            Ok(match format {
                BitsFormat::Bits => {
                    let mut s = stream.to_ascii();
                    s.push('\n');
                    s.into_bytes()
                }
                BitsFormat::Bytes => stream.to_bytes(),
                BitsFormat::Json => json(&json!({
                    "seed": seed,
                    "theta": theta,
                    "noise": noise,
                    "extracted": extract,
                    "length": stream.len(),
                    "ones": stream.ones(),
                    "frequency": stream.frequency(),
                    "entropy": stream.entropy(),
                    "bits": stream.to_ascii(),
                })),
                BitsFormat::Human => lines([
                    format!("length: {}", stream.len()),
                    format!("ones: {}", stream.ones()),
                    format!("frequency: {}", human(stream.frequency())),
                    format!("entropy: {}", human(stream.entropy())),
                ]),
            })
        }
        QrngCmd::Test { file, input, alpha, format } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(CliError::Other(format!("alpha {alpha} outside (0, 1)")));
            }
            let bits = match input {
                BitsInput::Bits => parse_ascii_bits(&read_text(file)?)?,
                BitsInput::Bytes => unpack_bytes(&read_bytes(file)?),
            };
            let report = test_battery(&bits, *alpha);
            Ok(match format.format {
                Report::Json => json(&report),
                Report::Human => {
                    let mut out = vec![format!(
                        "bits: {}{}",
                        report.bits,
                        if report.partial { " (partial: frequency test only)" } else { "" }
                    )];
                    for t in &report.tests {
                        out.push(format!(
                            "  {}: statistic {}, p {}, {}",
                            t.name,
                            human(t.statistic),
                            human(t.p_value),
                            if t.pass { "pass" } else { "fail" }
                        ));
                    }
                    out.push(format!("overall: {}", if report.pass { "pass" } else { "fail" }));
                    lines(out)
                }
            })
        }
    }
}

fn table_out(t: &OutcomeTable, format: TextReport) -> Out {
    let text = write_table(t);
    Ok(match format {
        TextReport::Text => text.into_bytes(),
        TextReport::Json => {
            let mut it = text.lines();
            let scheme = it.next().and_then(|l| l.strip_prefix("#scheme ")).unwrap_or("");
            let rows: Vec<&str> = it.next().unwrap_or("").split_whitespace().collect();
            let columns: Vec<String> = it.map(|l| l.replace(' ', "")).collect();
            json(&json!({ "scheme": scheme, "rows": rows, "columns": columns }))
        }
        TextReport::Human => {
            // Rows down, time to the right.
            let width = t.rows.iter().map(|r| r.label().chars().count()).max().unwrap_or(0);
            let cols: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split(' ').collect()).collect();
            lines(t.rows.iter().enumerate().map(|(r, key)| {
                let cells: Vec<&str> = cols.iter().map(|c| c[r]).collect();
                format!("{:<width$}  {}", key.label(), cells.join(" "))
            }))
        }
    })
}

/// Accepts the text format or the JSON form produced by `--format json`.
fn table_text(raw: &str) -> Result<String, CliError> {
    if !raw.trim_start().starts_with('{') {
        return Ok(raw.to_string());
    }
    let v: serde_json::Value = serde_json::from_str(raw).map_err(|e| CliError::Other(format!("table JSON: {e}")))?;
    let field = |k: &str| v.get(k).ok_or_else(|| CliError::Other(format!("table JSON lacks `{k}`")));
    let strings = |k: &str| -> Result<Vec<String>, CliError> {
        field(k)?
            .as_array()
            .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect())
            .ok_or_else(|| CliError::Other(format!("table JSON `{k}` must be a list of strings")))
    };
    let scheme =
        field("scheme")?.as_str().ok_or_else(|| CliError::Other("table JSON `scheme` must be a string".into()))?;
    let mut text = format!("#scheme {scheme}\n{}\n", strings("rows")?.join(" "));
    for col in strings("columns")? {
        let cells: Vec<String> = col.chars().map(String::from).collect();
        text.push_str(&cells.join(" "));
        text.push('\n');
    }
    Ok(text)
}

fn table_report_human(r: &TableReport) -> Vec<u8> {
    let mut out = vec![
        format!("scheme: {}", r.scheme),
        format!("columns: {}", r.columns),
        format!("valid: {}", r.valid),
        format!("violations: total {}, minimum per column {}", r.total_violations, r.min_violations),
    ];
    if let Some(m) = r.mean_chsh {
        out.push(format!("mean CHSH: {}", human(m)));
    }
    if let Some(f) = r.footnote_holds {
        out.push(format!("sign implications hold: {f}"));
    }
    for c in r.reports.iter().filter(|c| !c.valid) {
        out.push(format!("  column {}: {}", c.column + 1, c.errors.join("; ")));
    }
    lines(out)
}

fn table(cmd: &TableCmd, seed: u64) -> Out {
    match cmd {
        TableCmd::Chsh { target, n, format } => table_out(&generate_chsh_table(*target, *n, seed)?, *format),
        TableCmd::Ks { graph, n, format } => table_out(&generate_ks_table(&load_graph(graph)?, *n, seed)?, *format),
        TableCmd::Validate { file, graph, format } => {
            let text = table_text(&read_text(file)?)?;
            let resolve = |name: &str| -> Result<OrthoHypergraph, Error> {
                load_graph(graph.as_deref().unwrap_or(name)).map_err(|e| Error::InvalidArgument(e.to_string()))
            };
            let t = parse_table(&text, &resolve)?;
            let report = validate_table(&t)?;
            Ok(match format.format {
                Report::Json => json(&report),
                Report::Human => table_report_human(&report),
            })
        }
    }
}
