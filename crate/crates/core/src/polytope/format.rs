//! V- and H-representation text files.
//!
//! ```text
//! V <num> <dim>          H <num> <dim>
//! x1 x2 ... xd           linearity <k> <i1> ... <ik>   (optional)
//! ...                    b -a1 ... -ad                 (a·x ≤ b)
//! ```
//!
//! Entries are integers, `p/q` or finite decimals. `#` starts a comment.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::polytope::{Inequality, Relation};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_header(line: Option<(usize, &str)>, tag: &str) -> Result<(usize, usize, usize)> {
    let (no, text) = line.ok_or_else(|| Error::Parse {
        line: 1,
        message: format!("empty input, expected `{tag} <num> <dim>` header"),
    })?;
    let parts: Vec<&str> = text.split_whitespace().collect();
    let bad = || Error::Parse { line: no, message: format!("expected `{tag} <num> <dim>` header, found `{text}`") };
    if parts.len() != 3 || parts[0] != tag {
        return Err(bad());
    }
    let num = parts[1].parse().map_err(|_| bad())?;
    let dim = parts[2].parse().map_err(|_| bad())?;
    Ok((no, num, dim))
}

fn parse_row(no: usize, text: &str, width: usize) -> Result<Vec<Rational>> {
    let row = text
        .split_whitespace()
        .map(|t| parse_rational(t).ok_or_else(|| Error::Parse { line: no, message: format!("bad number `{t}`") }))
        .collect::<Result<Vec<_>>>()?;
    if row.len() != width {
        return Err(Error::Parse { line: no, message: format!("expected {width} entries, found {}", row.len()) });
    }
    Ok(row)
}

pub fn parse_v(text: &str) -> Result<(usize, Vec<Vec<Rational>>)> {
    let mut lines = content_lines(text);
    let (header_line, num, dim) = parse_header(lines.next(), "V")?;
    let rows = lines.map(|(no, l)| parse_row(no, l, dim)).collect::<Result<Vec<_>>>()?;
    if rows.len() != num {
        return Err(Error::Parse {
            line: header_line,
            message: format!("header announces {num} rows, found {}", rows.len()),
        });
    }
    Ok((dim, rows))
}

pub fn write_v(dim: usize, vertices: &[Vec<Rational>]) -> String {
    let mut out = format!("V {} {dim}\n", vertices.len());
    for v in vertices {
        let row: Vec<String> = v.iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Returns `(dim, inequalities, equalities)`.
pub fn parse_h(text: &str) -> Result<(usize, Vec<Inequality>, Vec<Inequality>)> {
    let mut lines = content_lines(text).peekable();
    let (header_line, num, dim) = parse_header(lines.next(), "H")?;
    let mut linearity: Vec<usize> = Vec::new();
    if let Some(&(no, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix("linearity") {
            let bad = || Error::Parse { line: no, message: "expected `linearity <k> <i1> ... <ik>`".into() };
            let nums =
                rest.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
            if nums.is_empty() || nums[0] != nums.len() - 1 || nums[1..].iter().any(|&i| i == 0 || i > num) {
                return Err(bad());
            }
            linearity = nums[1..].to_vec();
            lines.next();
        }
    }
    let mut facets = Vec::new();
    let mut equalities = Vec::new();
    let mut count = 0;
    for (no, l) in lines {
        count += 1;
        let row = parse_row(no, l, dim + 1)?;
        let a: Vec<Rational> = row[1..].iter().map(|x| -x).collect();
        if linearity.contains(&count) {
            equalities.push(Inequality::canonical(&a, &row[0], Relation::Equal));
        } else {
            facets.push(Inequality::canonical(&a, &row[0], Relation::LessEq));
        }
    }
    if count != num {
        return Err(Error::Parse { line: header_line, message: format!("header announces {num} rows, found {count}") });
    }
    Ok((dim, facets, equalities))
}

pub fn write_h(dim: usize, facets: &[Inequality], equalities: &[Inequality]) -> String {
    let total = facets.len() + equalities.len();
    let mut out = format!("H {total} {dim}\n");
    if !equalities.is_empty() {
        let idx: Vec<String> = (facets.len() + 1..=total).map(|i| i.to_string()).collect();
        out.push_str(&format!("linearity {} {}\n", equalities.len(), idx.join(" ")));
    }
    for ineq in facets.iter().chain(equalities) {
        let row: Vec<String> = std::iter::once(ineq.bound.to_string())
            .chain(ineq.coefficients.iter().map(|c: &BigInt| (-c).to_string()))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_roundtrip() {
        let text = "V 2 2\n0 1/2\n# comment\n1 -3\n";
        let (dim, rows) = parse_v(text).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(write_v(dim, &rows), "V 2 2\n0 1/2\n1 -3\n");
    }

    #[test]
    fn empty_and_malformed_v() {
        assert!(matches!(parse_v(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_v("V 2 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_v("V 1 2\n0 x\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn h_roundtrip_with_linearity() {
        let facets = vec![Inequality::from_ints(&[1, 0], 1, Relation::LessEq)];
        let eqs = vec![Inequality::from_ints(&[0, 1], 2, Relation::Equal)];
        let text = write_h(2, &facets, &eqs);
        assert_eq!(text, "H 2 2\nlinearity 1 2\n1 -1 0\n2 0 -1\n");
        let (dim, f, e) = parse_h(&text).unwrap();
        assert_eq!((dim, f, e), (2, facets, eqs));
    }
}
