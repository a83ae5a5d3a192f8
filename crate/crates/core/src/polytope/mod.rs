//! Correlation polytopes and their facet inequalities.
//!
//! Vertices are the truth-value vectors of all classical assignments on a
//! set of events (singles, then products for each joint). The hull problem
//! is solved exactly with the double description method in [`dd`].

pub mod dd;
pub mod format;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{dot, rref};
use crate::scalar::{primitive_integer_vector, Scalar};

/// Largest number of single events enumerated exhaustively.
pub const MAX_SINGLES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventScheme {
    singles: Vec<String>,
    /// Each joint is a tuple of single indices (at least two).
    joints: Vec<Vec<usize>>,
}

impl EventScheme {
    pub fn new(singles: Vec<String>, joints: Vec<Vec<String>>) -> Result<Self> {
        if singles.is_empty() {
            return Err(Error::InvalidScheme("no single events".into()));
        }
        for (i, s) in singles.iter().enumerate() {
            if singles[..i].contains(s) {
                return Err(Error::InvalidScheme(format!("event `{s}` declared twice")));
            }
        }
        let mut resolved: Vec<Vec<usize>> = Vec::new();
        for joint in joints {
            if joint.len() < 2 {
                return Err(Error::InvalidScheme("a joint needs at least two events".into()));
            }
            let mut idx = joint
                .iter()
                .map(|l| {
                    singles
                        .iter()
                        .position(|s| s == l)
                        .ok_or_else(|| Error::InvalidScheme(format!("joint references unknown event `{l}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != idx.len() {
                return Err(Error::InvalidScheme("joint repeats an event".into()));
            }
            idx.shrink_to_fit();
            if resolved.iter().any(|j| {
                let mut s = j.clone();
                s.sort_unstable();
                s == sorted
            }) {
                return Err(Error::InvalidScheme("joint declared twice".into()));
            }
            resolved.push(idx);
        }
        Ok(Self { singles, joints: resolved })
    }

    fn from_strs(singles: &[&str], joints: &[&[&str]]) -> Self {
        Self::new(
            singles.iter().map(|s| s.to_string()).collect(),
            joints.iter().map(|j| j.iter().map(|s| s.to_string()).collect()).collect(),
        )
        .expect("built-in scheme")
    }

    /// One event, no joints.
    pub fn single() -> Self {
        Self::from_strs(&["p1"], &[])
    }

    /// Two events and their joint.
    pub fn pair() -> Self {
        Self::from_strs(&["p1", "p2"], &[&["p1", "p2"]])
    }

    /// Two parties with two binary observables each, four cross joints.
    pub fn chsh() -> Self {
        Self::from_strs(&["A1", "A2", "B1", "B2"], &[&["A1", "B1"], &["A1", "B2"], &["A2", "B1"], &["A2", "B2"]])
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "single" => Some(Self::single()),
            "pair" => Some(Self::pair()),
            "chsh" => Some(Self::chsh()),
            _ => None,
        }
    }

    pub fn singles(&self) -> &[String] {
        &self.singles
    }

    pub fn joints(&self) -> &[Vec<usize>] {
        &self.joints
    }

    /// Ambient dimension: singles then joints.
    pub fn dimension(&self) -> usize {
        self.singles.len() + self.joints.len()
    }

    /// Coordinate names, e.g. `A1`, `A1B1`.
    pub fn coordinate_labels(&self) -> Vec<String> {
        self.singles
            .iter()
            .cloned()
            .chain(self.joints.iter().map(|j| j.iter().map(|&i| self.singles[i].as_str()).collect::<String>()))
            .collect()
    }

    /// Text form: `singles: A, B` and `joints: A B; ...`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut singles = None;
        let mut joints = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: &str| Error::Parse { line: idx + 1, message: m.to_string() };
            let (key, body) = line.split_once(':').ok_or_else(|| err("expected `singles:` or `joints:`"))?;
            match key.trim() {
                "singles" => {
                    singles = Some(
                        body.split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|s| !s.is_empty())
                            .map(str::to_string)
                            .collect::<Vec<_>>(),
                    )
                }
                "joints" => {
                    for group in body.split(';').map(str::trim).filter(|g| !g.is_empty()) {
                        joints.push(
                            group
                                .split(|c: char| c == ',' || c == '*' || c.is_whitespace())
                                .filter(|s| !s.is_empty())
                                .map(str::to_string)
                                .collect(),
                        );
                    }
                }
                other => return Err(err(&format!("unknown key `{other}`"))),
            }
        }
        let singles = singles.ok_or_else(|| Error::InvalidScheme("missing `singles:` line".into()))?;
        Self::new(singles, joints)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    /// 0/1 truth values and products.
    Probability,
    /// ±1 expectations: `E_a = 2p_a - 1`, `E_ab = 4p_ab - 2p_a - 2p_b + 1`.
    Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    LessEq,
    Equal,
}

/// `coefficients · x (≤ | =) bound` with coprime integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub coefficients: Vec<BigInt>,
    pub bound: BigInt,
    pub relation: Relation,
}

impl Inequality {
    /// Scales rational data to coprime integers. Equalities are oriented so
    /// the first nonzero coefficient is positive.
    pub fn canonical(coefficients: &[Rational], bound: &Rational, relation: Relation) -> Self {
        let mut all: Vec<Rational> = coefficients.to_vec();
        all.push(bound.clone());
        let mut ints = primitive_integer_vector(&all);
        if relation == Relation::Equal && ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            ints.iter_mut().for_each(|c| *c = -&*c);
        }
        let bound = ints.pop().expect("bound present");
        Self { coefficients: ints, bound, relation }
    }

    pub fn from_ints(coefficients: &[i64], bound: i64, relation: Relation) -> Self {
        let q = |x: i64| Rational::from_integer(x.into());
        Self::canonical(&coefficients.iter().map(|&c| q(c)).collect::<Vec<_>>(), &q(bound), relation)
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }

    /// `coefficients · x`.
    pub fn evaluate<T: Scalar>(&self, x: &[T]) -> T {
        self.coefficients
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (c, v)| acc + T::from_rational(&Rational::from_integer(c.clone())) * v.clone())
    }

    /// `bound - coefficients · x`; nonnegative when satisfied.
    pub fn slack<T: Scalar>(&self, x: &[T]) -> T {
        T::from_rational(&Rational::from_integer(self.bound.clone())) - self.evaluate(x)
    }

    pub fn render(&self, labels: &[String]) -> String {
        let mut lhs = String::new();
        for (c, l) in self.coefficients.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if lhs.is_empty() {
                if c.is_negative() {
                    lhs.push('-');
                }
            } else {
                lhs.push_str(&format!(" {sign} "));
            }
            let mag = c.abs();
            if !mag.is_one() {
                lhs.push_str(&mag.to_string());
            }
            lhs.push_str(l);
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        let rel = match self.relation {
            Relation::LessEq => "<=",
            Relation::Equal => "=",
        };
        format!("{lhs} {rel} {}", self.bound)
    }
}

impl Ord for Inequality {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.relation, &self.coefficients, &self.bound).cmp(&(other.relation, &other.coefficients, &other.bound))
    }
}

impl PartialOrd for Inequality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.dimension()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&labels))
    }
}

/// A V-polytope with its (possibly not yet computed) H-description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dimension: usize,
    vertices: Vec<Vec<Rational>>,
    facets: Vec<Inequality>,
    equalities: Vec<Inequality>,
    hull_computed: bool,
}

impl Polytope {
    /// Vertices are deduplicated and sorted lexicographically.
    pub fn from_vertices(dimension: usize, mut vertices: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.len() != dimension) {
            return Err(Error::DimensionMismatch { left: dimension, right: v.len() });
        }
        vertices.sort();
        vertices.dedup();
        Ok(Self { dimension, vertices, facets: Vec::new(), equalities: Vec::new(), hull_computed: false })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Inequality] {
        &self.facets
    }

    /// Equations of the affine hull; empty for full-dimensional polytopes.
    pub fn equalities(&self) -> &[Inequality] {
        &self.equalities
    }

    pub fn hull_computed(&self) -> bool {
        self.hull_computed
    }

    /// Dimension of the affine hull of the vertices.
    pub fn affine_dimension(&self) -> isize {
        affine_rank(&self.vertices) as isize - 1
    }

    /// Exact V→H conversion. Facets and equalities come out canonical and
    /// sorted.
    pub fn compute_facets(&mut self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidPolytope("no vertices".into()));
        }
        let (facets, equalities) = hull(&self.vertices, self.dimension);
        self.facets = facets;
        self.equalities = equalities;
        self.hull_computed = true;
        Ok(())
    }

    /// Builds an H-polytope and recovers its vertices (H→V).
    pub fn from_inequalities(dimension: usize, facets: Vec<Inequality>, equalities: Vec<Inequality>) -> Result<Self> {
        let vertices = vertices_from_inequalities(dimension, &facets, &equalities)?;
        let mut facets = facets;
        facets.sort();
        let mut equalities = equalities;
        equalities.sort();
        Ok(Self { dimension, vertices, facets, equalities, hull_computed: true })
    }

    pub fn membership<T: Scalar>(&self, point: &[T]) -> Result<Membership<T>> {
        membership(&self.facets, &self.equalities, self.dimension, point)
    }
}

fn affine_rank(vertices: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> =
        vertices.iter().map(|v| std::iter::once(Rational::one()).chain(v.iter().cloned()).collect()).collect();
    rref(&mut rows).len()
}

/// Facets and affine-hull equations of conv(vertices).
fn hull(vertices: &[Vec<Rational>], dimension: usize) -> (Vec<Inequality>, Vec<Inequality>) {
    // a·x ≤ b holds on every vertex iff (b, -a)·(1, v) ≥ 0.
    let rows: Vec<Vec<Rational>> =
        vertices.iter().map(|v| std::iter::once(Rational::one()).chain(v.iter().cloned()).collect()).collect();
    let cone = dd::extreme_rays(&rows, dimension + 1);

    let split = |y: &[Rational]| -> (Vec<Rational>, Rational) { (y[1..].iter().map(|c| -c).collect(), y[0].clone()) };

    let mut facets: Vec<Inequality> = cone
        .rays
        .iter()
        // A ray tight at no vertex is the trivial 0 ≤ 1 of a single point.
        .filter(|y| rows.iter().any(|r| dot(r, y).is_zero()))
        .map(|y| {
            let (a, b) = split(y);
            Inequality::canonical(&a, &b, Relation::LessEq)
        })
        .collect();
    facets.sort();
    facets.dedup();

    let rows: Vec<Vec<Rational>> = cone
        .lineality
        .iter()
        .map(|y| {
            let (a, b) = split(y);
            a.into_iter().chain(std::iter::once(b)).collect()
        })
        .collect();
    let equalities = canonical_equalities(rows);
    (facets, equalities)
}

/// Rows `(a, b)` for `a·x = b`, reduced to a unique basis.
fn canonical_equalities(mut rows: Vec<Vec<Rational>>) -> Vec<Inequality> {
    rref(&mut rows);
    let mut equalities: Vec<Inequality> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| {
            let (a, b) = r.split_at(r.len() - 1);
            Inequality::canonical(a, &b[0], Relation::Equal)
        })
        .collect();
    equalities.sort();
    equalities
}

fn vertices_from_inequalities(
    dimension: usize,
    facets: &[Inequality],
    equalities: &[Inequality],
) -> Result<Vec<Vec<Rational>>> {
    let to_row = |ineq: &Inequality, sign: i64| -> Result<Vec<Rational>> {
        if ineq.dimension() != dimension {
            return Err(Error::DimensionMismatch { left: dimension, right: ineq.dimension() });
        }
        let s = Rational::from_integer(sign.into());
        // (t, x) with t·b − a·x ≥ 0.
        Ok(std::iter::once(Rational::from_integer(ineq.bound.clone()) * &s)
            .chain(ineq.coefficients.iter().map(|c| -Rational::from_integer(c.clone()) * &s))
            .collect())
    };
    let mut rows = vec![std::iter::once(Rational::one())
        .chain(std::iter::repeat_n(Rational::zero(), dimension))
        .collect::<Vec<_>>()];
    for f in facets {
        rows.push(to_row(f, 1)?);
    }
    for e in equalities {
        rows.push(to_row(e, 1)?);
        rows.push(to_row(e, -1)?);
    }
    let cone = dd::extreme_rays(&rows, dimension + 1);
    if !cone.lineality.is_empty() {
        return Err(Error::InvalidPolytope("inequalities describe an unbounded set".into()));
    }
    let mut vertices = Vec::with_capacity(cone.rays.len());
    for ray in cone.rays {
        if ray[0].is_zero() {
            return Err(Error::InvalidPolytope("inequalities describe an unbounded set".into()));
        }
        let t = ray[0].clone();
        vertices.push(ray[1..].iter().map(|x| x / &t).collect());
    }
    vertices.sort();
    Ok(vertices)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation<T> {
    /// Index into the facet list, or into the equality list when
    /// `equality` is set.
    pub index: usize,
    pub equality: bool,
    pub value: T,
    /// `value - bound` (absolute for equalities).
    pub excess: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership<T> {
    pub location: Location,
    pub violated: Vec<Violation<T>>,
    /// Facets holding with equality.
    pub tight: Vec<usize>,
}

/// Classifies a point against an H-description. Exact for rationals;
/// floats use the scalar's zero threshold (1e-9 for `f64`).
pub fn membership<T: Scalar>(
    facets: &[Inequality],
    equalities: &[Inequality],
    dimension: usize,
    point: &[T],
) -> Result<Membership<T>> {
    if point.len() != dimension {
        return Err(Error::DimensionMismatch { left: dimension, right: point.len() });
    }
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    for (i, f) in facets.iter().enumerate() {
        let value = f.evaluate(point);
        let excess = value.clone() - T::from_rational(&Rational::from_integer(f.bound.clone()));
        match excess.sign() {
            1 => violated.push(Violation { index: i, equality: false, value, excess }),
            0 => tight.push(i),
            _ => {}
        }
    }
    for (i, e) in equalities.iter().enumerate() {
        let value = e.evaluate(point);
        let excess = (value.clone() - T::from_rational(&Rational::from_integer(e.bound.clone()))).abs();
        if excess.sign() != 0 {
            violated.push(Violation { index: i, equality: true, value, excess });
        }
    }
    let location = if !violated.is_empty() {
        Location::Outside
    } else if tight.is_empty() {
        Location::Inside
    } else {
        Location::OnBoundary
    };
    Ok(Membership { location, violated, tight })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationPolytope {
    scheme: EventScheme,
    coordinates: Coordinates,
    polytope: Polytope,
}

impl CorrelationPolytope {
    pub fn scheme(&self) -> &EventScheme {
        &self.scheme
    }

    pub fn coordinates(&self) -> Coordinates {
        self.coordinates
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        self.polytope.vertices()
    }

    pub fn facets(&self) -> &[Inequality] {
        self.polytope.facets()
    }

    pub fn equalities(&self) -> &[Inequality] {
        self.polytope.equalities()
    }

    pub fn coordinate_labels(&self) -> Vec<String> {
        let labels = self.scheme.coordinate_labels();
        match self.coordinates {
            Coordinates::Probability => labels.into_iter().map(|l| format!("p{l}")).collect(),
            Coordinates::Correlation => labels.into_iter().map(|l| format!("E{l}")).collect(),
        }
    }

    pub fn membership<T: Scalar>(&self, point: &[T]) -> Result<Membership<T>> {
        if !self.polytope.hull_computed {
            return Err(Error::InvalidPolytope("facets have not been computed".into()));
        }
        self.polytope.membership(point)
    }
}

/// One vertex per truth assignment of the singles, joints filled in as
/// products.
pub fn vertices_from_scheme(scheme: &EventScheme) -> Result<CorrelationPolytope> {
    let n = scheme.singles.len();
    if n > MAX_SINGLES {
        return Err(Error::TooManyEvents { found: n, max: MAX_SINGLES });
    }
    let vertices: Vec<Vec<Rational>> = (0u64..1 << n)
        .map(|mask| {
            let bit = |i: usize| (mask >> (n - 1 - i)) & 1 == 1;
            let singles = (0..n).map(bit);
            let joints = scheme.joints.iter().map(|j| j.iter().all(|&i| bit(i)));
            singles.chain(joints).map(|b| Rational::from_integer(BigInt::from(b as u8))).collect()
        })
        .collect();
    Ok(CorrelationPolytope {
        scheme: scheme.clone(),
        coordinates: Coordinates::Probability,
        polytope: Polytope::from_vertices(scheme.dimension(), vertices)?,
    })
}

/// Fills in facets and affine-hull equalities.
pub fn facet_enumeration(p: &CorrelationPolytope) -> Result<CorrelationPolytope> {
    let mut out = p.clone();
    out.polytope.compute_facets()?;
    Ok(out)
}

/// Affine change to ±1 expectations. Existing facets are carried over by
/// substitution rather than recomputed.
pub fn to_correlation_coordinates(p: &CorrelationPolytope) -> Result<CorrelationPolytope> {
    if p.coordinates == Coordinates::Correlation {
        return Err(Error::InvalidScheme("already in correlation coordinates".into()));
    }
    if let Some(j) = p.scheme.joints.iter().find(|j| j.len() != 2) {
        return Err(Error::InvalidScheme(format!(
            "correlation coordinates need pairwise joints, found a {}-fold joint",
            j.len()
        )));
    }
    let n = p.scheme.singles.len();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let vertices: Vec<Vec<Rational>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut e: Vec<Rational> = v[..n].iter().map(|x| &two * x - &one).collect();
            for (k, j) in p.scheme.joints.iter().enumerate() {
                let (a, b) = (&v[j[0]], &v[j[1]]);
                e.push(&four * &v[n + k] - &two * a - &two * b + &one);
            }
            e
        })
        .collect();
    let mut polytope = Polytope::from_vertices(p.scheme.dimension(), vertices)?;
    if p.polytope.hull_computed {
        let map = |ineq: &Inequality| substitute_correlation(&p.scheme, ineq);
        let mut facets: Vec<Inequality> = p.facets().iter().map(map).collect();
        facets.sort();
        let eq_rows: Vec<Vec<Rational>> = p
            .equalities()
            .iter()
            .map(|e| {
                let m = map(e);
                m.coefficients
                    .iter()
                    .cloned()
                    .chain(std::iter::once(m.bound.clone()))
                    .map(Rational::from_integer)
                    .collect()
            })
            .collect();
        let equalities = canonical_equalities(eq_rows);
        polytope.facets = facets;
        polytope.equalities = equalities;
        polytope.hull_computed = true;
    }
    Ok(CorrelationPolytope { scheme: p.scheme.clone(), coordinates: Coordinates::Correlation, polytope })
}

/// Rewrites a probability-coordinate constraint using
/// `p_a = (1 + E_a)/2` and `p_ab = (1 + E_a + E_b + E_ab)/4`.
fn substitute_correlation(scheme: &EventScheme, ineq: &Inequality) -> Inequality {
    let n = scheme.singles.len();
    let q = |x: &BigInt| Rational::from_integer(x.clone());
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let mut coeffs = vec![Rational::zero(); scheme.dimension()];
    let mut constant = Rational::zero();
    for i in 0..n {
        let c = q(&ineq.coefficients[i]) * &half;
        coeffs[i] += &c;
        constant += c;
    }
    for (k, j) in scheme.joints.iter().enumerate() {
        let c = q(&ineq.coefficients[n + k]) * &quarter;
        coeffs[n + k] += &c;
        coeffs[j[0]] += &c;
        coeffs[j[1]] += &c;
        constant += c;
    }
    Inequality::canonical(&coeffs, &(q(&ineq.bound) - constant), ineq.relation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[Vec<Rational>]) -> Vec<Vec<i64>> {
        v.iter().map(|r| r.iter().map(|x| x.numer().try_into().unwrap()).collect()).collect()
    }

    #[test]
    fn single_event_vertices_and_facets() {
        let p = facet_enumeration(&vertices_from_scheme(&EventScheme::single()).unwrap()).unwrap();
        assert_eq!(ints(p.vertices()), vec![vec![0], vec![1]]);
        let expected =
            vec![Inequality::from_ints(&[-1], 0, Relation::LessEq), Inequality::from_ints(&[1], 1, Relation::LessEq)];
        assert_eq!(p.facets(), expected.as_slice());
        assert!(p.equalities().is_empty());
    }

    #[test]
    fn pair_vertices() {
        let p = vertices_from_scheme(&EventScheme::pair()).unwrap();
        assert_eq!(ints(p.vertices()), vec![vec![0, 0, 0], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn chsh_vertex_count() {
        let p = vertices_from_scheme(&EventScheme::chsh()).unwrap();
        assert_eq!(p.vertices().len(), 16);
        assert_eq!(p.polytope().dimension(), 8);
    }

    #[test]
    fn single_vertex_gives_equalities() {
        let q = |x: i64| Rational::from_integer(x.into());
        let mut p = Polytope::from_vertices(2, vec![vec![q(1), q(2)]]).unwrap();
        p.compute_facets().unwrap();
        assert!(p.facets().is_empty());
        assert_eq!(
            p.equalities(),
            &[Inequality::from_ints(&[0, 1], 2, Relation::Equal), Inequality::from_ints(&[1, 0], 1, Relation::Equal),]
        );
    }

    #[test]
    fn too_many_singles() {
        let singles: Vec<String> = (0..25).map(|i| format!("e{i}")).collect();
        let s = EventScheme::new(singles, vec![]).unwrap();
        assert_eq!(vertices_from_scheme(&s).unwrap_err(), Error::TooManyEvents { found: 25, max: 24 });
    }

    #[test]
    fn correlation_map_examples() {
        let p = to_correlation_coordinates(&vertices_from_scheme(&EventScheme::pair()).unwrap()).unwrap();
        let v = ints(p.vertices());
        assert!(v.contains(&vec![1, 1, 1]));
        assert!(v.contains(&vec![-1, -1, 1]));
        let c = to_correlation_coordinates(&vertices_from_scheme(&EventScheme::chsh()).unwrap()).unwrap();
        assert!(ints(c.vertices()).contains(&vec![1, 1, 1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn triple_joint_rejected_by_correlation_map() {
        let s =
            EventScheme::new(vec!["a".into(), "b".into(), "c".into()], vec![vec!["a".into(), "b".into(), "c".into()]])
                .unwrap();
        assert!(to_correlation_coordinates(&vertices_from_scheme(&s).unwrap()).is_err());
    }

    #[test]
    fn scheme_parsing() {
        let s = EventScheme::parse("singles: A1, A2, B1, B2\njoints: A1 B1; A1*B2; A2 B1; A2 B2\n").unwrap();
        assert_eq!(s, EventScheme::chsh());
        assert!(EventScheme::parse("joints: a b").is_err());
        assert!(EventScheme::parse("singles: a\njoints: a z").is_err());
    }

    #[test]
    fn membership_dimension_checked() {
        let p = facet_enumeration(&vertices_from_scheme(&EventScheme::pair()).unwrap()).unwrap();
        assert!(p.membership(&[0.5f64]).is_err());
        let m = p.membership(&[0.5f64, 0.5, 0.25]).unwrap();
        assert_eq!(m.location, Location::Inside);
    }

    #[test]
    fn inequality_rendering() {
        let i = Inequality::from_ints(&[1, 1, -1], 1, Relation::LessEq);
        let labels = vec!["p1".to_string(), "p2".into(), "p12".into()];
        assert_eq!(i.render(&labels), "p1 + p2 - p12 <= 1");
    }
}
