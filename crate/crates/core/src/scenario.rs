//! Counterfactual outcome tables: one row per `X{Y}` (observable `X`
//! measured alongside `Y`), one column per run.
//!
//! Text format:
//!
//! ```text
//! #scheme chsh                      #scheme ks cabello18
//! A1{B1} A1{B2} ... B2{A2}          A{a} A{f} B{a} ...
//! + - . + ...                       1 0 0 ...
//! ```
//!
//! Each line after the header is one column; `.` marks an unspecified entry.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthospace::OrthoHypergraph;
use crate::qrng::lane_rng;
use crate::states::{enumerate_measures, is_ks_set, random_contextual_assignment};

/// Row order of the CHSH scheme, as `(observable, partner)`.
pub const CHSH_ROWS: [(&str, &str); 8] =
    [("A1", "B1"), ("A1", "B2"), ("A2", "B1"), ("A2", "B2"), ("B1", "A1"), ("B1", "A2"), ("B2", "A1"), ("B2", "A2")];

/// Sign of each product `A_i{B_j} B_j{A_i}` in the CHSH sum, keyed by
/// `(i, j)`; also the pattern of a column reaching 4.
pub const CHSH_SIGNS: [((usize, usize), i8); 4] = [((1, 1), 1), ((1, 2), 1), ((2, 1), 1), ((2, 2), -1)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowKey {
    pub observable: String,
    pub context: String,
}

impl RowKey {
    fn new(observable: &str, context: &str) -> Self {
        Self { observable: observable.to_string(), context: context.to_string() }
    }

    pub fn label(&self) -> String {
        format!("{}{{{}}}", self.observable, self.context)
    }

    fn parse(text: &str) -> Option<Self> {
        let (obs, rest) = text.split_once('{')?;
        let ctx = rest.strip_suffix('}')?;
        (!obs.is_empty() && !ctx.is_empty() && !ctx.contains(['{', '}'])).then(|| Self::new(obs, ctx))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// ±1 outcomes.
    Chsh,
    /// 0/1 outcomes on the (atom, context) pairs of a hypergraph.
    Ks(OrthoHypergraph),
}

impl Scheme {
    fn binary(&self) -> bool {
        matches!(self, Scheme::Ks(_))
    }
}

/// Entries aligned with the table's rows; `None` is unspecified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualColumn {
    pub values: Vec<Option<i8>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub scheme: Scheme,
    pub rows: Vec<RowKey>,
    pub columns: Vec<ContextualColumn>,
}

pub fn chsh_rows() -> Vec<RowKey> {
    CHSH_ROWS.iter().map(|(o, c)| RowKey::new(o, c)).collect()
}

/// Rows `atom{context}`, atoms in order, each atom's contexts in order.
pub fn ks_rows(h: &OrthoHypergraph) -> Vec<RowKey> {
    let mut rows = Vec::new();
    for (atom, ctxs) in h.incidence().iter().enumerate() {
        for &c in ctxs {
            rows.push(RowKey::new(h.atoms()[atom].label(), &h.contexts()[c].label));
        }
    }
    rows
}

fn chsh_row(obs: &str, partner: &str) -> usize {
    CHSH_ROWS.iter().position(|&(o, p)| o == obs && p == partner).expect("CHSH row exists")
}

/// Column with the given per-product signs (flipping a product from the
/// maximal pattern lowers the sum by 2), local signs random.
fn chsh_column<R: Rng>(flips: usize, rng: &mut R) -> ContextualColumn {
    let mut order: Vec<usize> = (0..4).collect();
    order.shuffle(rng);
    let mut values = vec![None; 8];
    for (k, &((i, j), sign)) in CHSH_SIGNS.iter().enumerate() {
        let flipped = order[..flips].contains(&k);
        let product = if flipped { -sign } else { sign };
        let a: i8 = if rng.gen::<bool>() { 1 } else { -1 };
        let (ai, bj) = (format!("A{i}"), format!("B{j}"));
        values[chsh_row(&ai, &bj)] = Some(a);
        values[chsh_row(&bj, &ai)] = Some(a * product);
    }
    ContextualColumn { values }
}

/// Columns mixing the two CHSH levels around `target` in exact
/// proportion; which columns get the higher level is shuffled.
pub fn generate_chsh_table(target: f64, n_columns: usize, seed: u64) -> Result<OutcomeTable> {
    if !target.is_finite() || target.abs() > 4.0 {
        return Err(Error::InvalidArgument(format!("CHSH target {target} outside [-4, 4]")));
    }
    if n_columns == 0 {
        return Err(Error::InvalidArgument("at least one column is required".into()));
    }
    let lo = (2.0 * ((target + 4.0) / 2.0).floor() - 4.0).clamp(-4.0, 2.0);
    let share = ((target - lo) / 2.0).clamp(0.0, 1.0);
    let n_hi = (share * n_columns as f64).round() as usize;
    let mut levels: Vec<f64> = (0..n_columns).map(|i| if i < n_hi { lo + 2.0 } else { lo }).collect();
    levels.shuffle(&mut lane_rng(seed, u64::MAX));
    let columns = levels
        .par_iter()
        .enumerate()
        .map(|(i, &level)| {
            let flips = ((4.0 - level) / 2.0).round() as usize;
            chsh_column(flips, &mut lane_rng(seed, i as u64))
        })
        .collect();
    Ok(OutcomeTable { scheme: Scheme::Chsh, rows: chsh_rows(), columns })
}

/// Columns assigning 0/1 to every (atom, context) pair, exactly one 1 per
/// context, with noncontextuality necessarily violated somewhere.
pub fn generate_ks_table(h: &OrthoHypergraph, n_columns: usize, seed: u64) -> Result<OutcomeTable> {
    if !is_ks_set(h).ks {
        return Err(Error::NotKsSet { measures: enumerate_measures(h, None).count });
    }
    let rows = ks_rows(h);
    let lookup = row_index(h, &rows);
    let columns = (0..n_columns)
        .into_par_iter()
        .map(|i| {
            let assignment = random_contextual_assignment(h, &mut lane_rng(seed, i as u64))
                .expect("nonempty contexts always admit an assignment");
            let mut values = vec![None; rows.len()];
            for (c, ctx) in h.contexts().iter().enumerate() {
                for (k, &atom) in ctx.atoms.iter().enumerate() {
                    values[lookup[atom][c].expect("row exists")] = Some(assignment.values[c][k] as i8);
                }
            }
            ContextualColumn { values }
        })
        .collect();
    Ok(OutcomeTable { scheme: Scheme::Ks(h.clone()), rows, columns })
}

/// `lookup[atom][context]` is the row of that pair.
fn row_index(h: &OrthoHypergraph, rows: &[RowKey]) -> Vec<Vec<Option<usize>>> {
    let mut lookup = vec![vec![None; h.contexts().len()]; h.atoms().len()];
    for (r, key) in rows.iter().enumerate() {
        let atom = h.atoms().iter().position(|a| a.labels.contains(&key.observable));
        let ctx = h.contexts().iter().position(|c| c.label == key.context);
        if let (Some(a), Some(c)) = (atom, ctx) {
            lookup[a][c] = Some(r);
        }
    }
    lookup
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnReport {
    pub column: usize,
    pub valid: bool,
    pub errors: Vec<String>,
    /// Observables whose value depends on the context.
    pub violations: Vec<String>,
    /// CHSH sum, when all eight entries are given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh: Option<i32>,
    /// Whether both sign implications of a ±4 column hold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub footnote: Option<bool>,
    /// Total of all entries, i.e. the count of true propositions summed by
    /// context.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context_total: Option<u32>,
    /// The same count summed by atoms, each atom weighted by its
    /// multiplicity and valued in its first context.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom_total: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub scheme: String,
    pub columns: usize,
    pub valid: bool,
    pub invalid_columns: Vec<usize>,
    pub total_violations: usize,
    pub min_violations: usize,
    /// Mean CHSH sum over complete columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_chsh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub footnote_holds: Option<bool>,
    /// Mean value of each row over the columns where it is given.
    pub row_means: Vec<(String, f64)>,
    pub reports: Vec<ColumnReport>,
}

fn context_dependent(rows: &[RowKey], column: &ContextualColumn) -> Vec<String> {
    let mut seen: Vec<(&str, i8)> = Vec::new();
    let mut out: Vec<String> = Vec::new();
    for (key, value) in rows.iter().zip(&column.values) {
        let Some(v) = *value else { continue };
        match seen.iter().find(|(o, _)| *o == key.observable) {
            Some(&(_, prev)) if prev != v => {
                if !out.contains(&key.observable) {
                    out.push(key.observable.clone());
                }
            }
            Some(_) => {}
            None => seen.push((&key.observable, v)),
        }
    }
    out
}

fn chsh_report(index: usize, column: &ContextualColumn) -> ColumnReport {
    let v = |o: &str, p: &str| column.values[chsh_row(o, p)];
    let mut errors = Vec::new();
    for (key, value) in CHSH_ROWS.iter().zip(&column.values) {
        if matches!(value, Some(x) if *x != 1 && *x != -1) {
            errors.push(format!("{}{{{}}} must be + or -", key.0, key.1));
        }
    }
    let mut chsh = Some(0i32);
    for &((i, j), sign) in &CHSH_SIGNS {
        let (ai, bj) = (format!("A{i}"), format!("B{j}"));
        chsh = match (chsh, v(&ai, &bj), v(&bj, &ai)) {
            (Some(s), Some(a), Some(b)) => Some(s + (sign * a * b) as i32),
            _ => None,
        };
    }
    let footnote = match chsh {
        Some(s) if s.abs() == 4 => {
            let implies =
                |x1: Option<i8>, x2: Option<i8>, y1: Option<i8>, y2: Option<i8>| x1 != x2 || y1 == y2.map(|y| -y);
            Some(
                implies(v("A1", "B2"), v("A2", "B2"), v("B2", "A1"), v("B2", "A2"))
                    && implies(v("B1", "A2"), v("B2", "A2"), v("A2", "B1"), v("A2", "B2")),
            )
        }
        _ => None,
    };
    ColumnReport {
        column: index,
        valid: errors.is_empty(),
        errors,
        violations: context_dependent(&chsh_rows(), column),
        chsh: if column.values.len() == 8 { chsh } else { None },
        footnote,
        context_total: None,
        atom_total: None,
    }
}

fn ks_report(index: usize, h: &OrthoHypergraph, rows: &[RowKey], column: &ContextualColumn) -> ColumnReport {
    let lookup = row_index(h, rows);
    let mut errors = Vec::new();
    for (key, value) in rows.iter().zip(&column.values) {
        if matches!(value, Some(x) if *x != 0 && *x != 1) {
            errors.push(format!("{} must be 0 or 1", key.label()));
        }
    }
    let mut complete = true;
    let mut context_total = 0u32;
    for (c, ctx) in h.contexts().iter().enumerate() {
        let entries: Vec<Option<i8>> = ctx.atoms.iter().map(|&a| lookup[a][c].and_then(|r| column.values[r])).collect();
        let sum: u32 = entries.iter().flatten().map(|&x| x as u32).sum();
        let given = entries.iter().all(Option::is_some);
        complete &= given;
        context_total += sum;
        if sum > 1 || (given && sum != 1) {
            errors.push(format!("context {} sums to {sum}, expected 1", ctx.label));
        }
    }
    let atom_total = complete.then(|| {
        (0..h.atoms().len())
            .map(|a| {
                let first = h.incidence()[a][0];
                let v = lookup[a][first].and_then(|r| column.values[r]).unwrap_or(0);
                v as u32 * h.multiplicity(a) as u32
            })
            .sum()
    });
    let violations = context_dependent(rows, column);
    if let Some(at) = atom_total {
        if at % 2 != context_total % 2 && violations.is_empty() {
            errors.push("parity mismatch without a noncontextuality violation".into());
        }
    }
    ColumnReport {
        column: index,
        valid: errors.is_empty(),
        errors,
        violations,
        chsh: None,
        footnote: None,
        context_total: complete.then_some(context_total),
        atom_total,
    }
}

/// Structural problems are errors; broken scheme invariants are reported
/// per column.
pub fn validate_table(t: &OutcomeTable) -> Result<TableReport> {
    let expected_rows = match &t.scheme {
        Scheme::Chsh => chsh_rows(),
        Scheme::Ks(h) => ks_rows(h),
    };
    for (r, key) in t.rows.iter().enumerate() {
        if !expected_rows.contains(key) {
            return Err(Error::Table { row: r + 1, column: 0, message: format!("unexpected row `{}`", key.label()) });
        }
        if t.rows[..r].contains(key) {
            return Err(Error::Table { row: r + 1, column: 0, message: format!("duplicate row `{}`", key.label()) });
        }
    }
    if t.rows.len() != expected_rows.len() {
        let missing = expected_rows.iter().find(|k| !t.rows.contains(k)).expect("a row is missing");
        return Err(Error::Table {
            row: t.rows.len() + 1,
            column: 0,
            message: format!("missing row `{}`", missing.label()),
        });
    }
    for (c, col) in t.columns.iter().enumerate() {
        if col.values.len() != t.rows.len() {
            return Err(Error::Table {
                row: col.values.len().min(t.rows.len()) + 1,
                column: c + 1,
                message: format!("column has {} entries, expected {}", col.values.len(), t.rows.len()),
            });
        }
    }
    // Bring columns into canonical row order.
    let perm: Vec<usize> =
        expected_rows.iter().map(|k| t.rows.iter().position(|r| r == k).expect("row present")).collect();
    let reports: Vec<ColumnReport> = t
        .columns
        .iter()
        .enumerate()
        .map(|(i, col)| {
            let canon = ContextualColumn { values: perm.iter().map(|&p| col.values[p]).collect() };
            match &t.scheme {
                Scheme::Chsh => chsh_report(i, &canon),
                Scheme::Ks(h) => ks_report(i, h, &expected_rows, &canon),
            }
        })
        .collect();
    let chsh: Vec<i32> = reports.iter().filter_map(|r| r.chsh).collect();
    let footnotes: Vec<bool> = reports.iter().filter_map(|r| r.footnote).collect();
    let row_means = t
        .rows
        .iter()
        .enumerate()
        .map(|(r, key)| {
            let given: Vec<f64> = t.columns.iter().filter_map(|c| c.values[r]).map(f64::from).collect();
            let mean = if given.is_empty() { 0.0 } else { given.iter().sum::<f64>() / given.len() as f64 };
            (key.label(), mean)
        })
        .collect();
    Ok(TableReport {
        scheme: scheme_line(&t.scheme),
        columns: t.columns.len(),
        valid: reports.iter().all(|r| r.valid),
        invalid_columns: reports.iter().filter(|r| !r.valid).map(|r| r.column).collect(),
        total_violations: reports.iter().map(|r| r.violations.len()).sum(),
        min_violations: reports.iter().map(|r| r.violations.len()).min().unwrap_or(0),
        mean_chsh: (!chsh.is_empty()).then(|| chsh.iter().map(|&s| s as f64).sum::<f64>() / chsh.len() as f64),
        footnote_holds: (!footnotes.is_empty()).then(|| footnotes.iter().all(|&f| f)),
        row_means,
        reports,
    })
}

fn scheme_line(s: &Scheme) -> String {
    match s {
        Scheme::Chsh => "chsh".to_string(),
        Scheme::Ks(h) => format!("ks {}", h.name()),
    }
}

fn symbol(binary: bool, v: Option<i8>) -> char {
    match (binary, v) {
        (_, None) => '.',
        (false, Some(1)) => '+',
        (false, Some(_)) => '-',
        (true, Some(0)) => '0',
        (true, Some(_)) => '1',
    }
}

pub fn write_table(t: &OutcomeTable) -> String {
    let binary = t.scheme.binary();
    let mut out = format!("#scheme {}\n", scheme_line(&t.scheme));
    let header: Vec<String> = t.rows.iter().map(RowKey::label).collect();
    out.push_str(&header.join(" "));
    out.push('\n');
    for col in &t.columns {
        let line: Vec<String> = col.values.iter().map(|&v| symbol(binary, v).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `resolve` maps the graph name of a `ks` scheme line to its hypergraph.
pub fn parse_table(text: &str, resolve: &dyn Fn(&str) -> Result<OrthoHypergraph>) -> Result<OutcomeTable> {
    let mut lines =
        text.lines().map(str::trim).filter(|l| !l.is_empty() && (!l.starts_with('#') || l.starts_with("#scheme")));
    let structural = |row, column, message: String| Error::Table { row, column, message };
    let scheme_text = lines
        .next()
        .and_then(|l| l.strip_prefix("#scheme"))
        .ok_or_else(|| structural(0, 0, "expected `#scheme chsh` or `#scheme ks <graph>`".into()))?;
    let parts: Vec<&str> = scheme_text.split_whitespace().collect();
    let scheme = match parts.as_slice() {
        ["chsh"] => Scheme::Chsh,
        ["ks", name] => Scheme::Ks(resolve(name)?),
        _ => return Err(structural(0, 0, format!("unknown scheme `{}`", scheme_text.trim()))),
    };
    let header = lines.next().ok_or_else(|| structural(0, 0, "missing header row".into()))?;
    let rows = header
        .split_whitespace()
        .enumerate()
        .map(|(i, label)| RowKey::parse(label).ok_or_else(|| structural(i + 1, 0, format!("bad row label `{label}`"))))
        .collect::<Result<Vec<_>>>()?;
    let binary = scheme.binary();
    let mut columns = Vec::new();
    for (c, line) in lines.enumerate() {
        let values = line
            .split_whitespace()
            .enumerate()
            .map(|(r, s)| match (binary, s) {
                (_, ".") => Ok(None),
                (false, "+") => Ok(Some(1)),
                (false, "-") => Ok(Some(-1)),
                (true, "0") => Ok(Some(0)),
                (true, "1") => Ok(Some(1)),
                _ => Err(structural(r + 1, c + 1, format!("bad entry `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != rows.len() {
            return Err(structural(
                values.len().min(rows.len()) + 1,
                c + 1,
                format!("column has {} entries, expected {}", values.len(), rows.len()),
            ));
        }
        columns.push(ContextualColumn { values });
    }
    let table = OutcomeTable { scheme, rows, columns };
    validate_table(&table)?;
    Ok(table)
}
