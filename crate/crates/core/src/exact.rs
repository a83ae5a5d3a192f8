//! Exact rational rays.
//!
//! Orthogonality and atom identity are decided on arbitrary-precision
//! rationals, never on floats.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::primitive_integer_vector;

pub type Rational = BigRational;

/// A direction in rational d-space, standing for the one-dimensional
/// projector it spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    label: String,
    coords: Vec<Rational>,
}

impl Ray {
    pub fn new(label: impl Into<String>, coords: Vec<Rational>) -> Result<Self> {
        let label = label.into();
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall { label, dimension: coords.len() });
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroRay(label));
        }
        Ok(Self { label, coords })
    }

    pub fn from_ints(label: impl Into<String>, coords: &[i64]) -> Result<Self> {
        Self::new(label, coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        Self { label: label.into(), coords: self.coords.clone() }
    }

    /// `factor · self`; a zero factor is rejected since it leaves projective space.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        if factor.is_zero() {
            return Err(Error::ZeroRay(self.label.clone()));
        }
        Ok(Self { label: self.label.clone(), coords: self.coords.iter().map(|c| c * factor).collect() })
    }

    /// Unique integer representative of the atom: primitive, first nonzero
    /// entry positive. Two rays are the same atom iff their keys agree.
    pub fn canonical_key(&self) -> Vec<BigInt> {
        let mut ints = primitive_integer_vector(&self.coords);
        if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            ints.iter_mut().for_each(|c| *c = -&*c);
        }
        ints
    }

    /// Unit-norm floating representative with the canonical sign.
    pub fn normalize_float<T: Float>(&self) -> Vec<T> {
        let key = self.canonical_key();
        let raw: Vec<f64> = key.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        // Rescale before squaring so very large keys stay finite.
        let peak = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let norm = raw.iter().map(|x| (x / peak) * (x / peak)).sum::<f64>().sqrt() * peak;
        raw.iter().map(|x| T::from(x / norm).expect("finite float")).collect()
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: (", self.label)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

fn check_dimensions(a: &Ray, b: &Ray) -> Result<()> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch { left: a.dimension(), right: b.dimension() });
    }
    Ok(())
}

pub fn inner_product(a: &Ray, b: &Ray) -> Result<Rational> {
    check_dimensions(a, b)?;
    Ok(a.coords.iter().zip(&b.coords).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
}

/// True iff `a = λ·b` for some nonzero rational λ.
pub fn same_atom(a: &Ray, b: &Ray) -> Result<bool> {
    check_dimensions(a, b)?;
    let pivot = a.coords.iter().position(|c| !c.is_zero()).expect("rays are nonzero");
    if b.coords[pivot].is_zero() {
        return Ok(false);
    }
    let lambda = &a.coords[pivot] / &b.coords[pivot];
    Ok(a.coords.iter().zip(&b.coords).all(|(x, y)| *x == &lambda * y))
}

/// Renders `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Accepts integers, `p/q`, and finite decimals (`-0.125`, `2.5e-3`).
/// Decimals are converted exactly from their written digits.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(10.into());
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Parses the ray-set text format: one `LABEL: (c1, ..., cd)` per line,
/// `#` comments, blank lines skipped.
pub fn parse_rays(text: &str) -> Result<Vec<Ray>> {
    let mut rays = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: idx + 1, message };
        let (label, body) = line.split_once(':').ok_or_else(|| err("expected `LABEL: (c1, ..., cd)`".into()))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(err("empty label".into()));
        }
        let body = body.trim();
        let inner = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| err("coordinates must be enclosed in parentheses".into()))?;
        let coords = inner
            .split(',')
            .map(|c| parse_rational(c).ok_or_else(|| err(format!("bad coordinate `{}`", c.trim()))))
            .collect::<Result<Vec<_>>>()?;
        let ray = Ray::new(label, coords).map_err(|e| err(e.to_string()))?;
        if let Some(first) = rays.first() {
            let first: &Ray = first;
            if first.dimension() != ray.dimension() {
                return Err(err(format!("dimension {} differs from {}", ray.dimension(), first.dimension())));
            }
        }
        rays.push(ray);
    }
    Ok(rays)
}

pub fn write_rays(rays: &[Ray]) -> String {
    rays.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(label: &str, c: &[i64]) -> Ray {
        Ray::from_ints(label, c).unwrap()
    }

    #[test]
    fn inner_products_of_figure_rays() {
        let a = ray("A", &[0, 0, 1, -1]);
        let b = ray("B", &[1, -1, 0, 0]);
        let c = ray("C", &[1, 1, -1, -1]);
        let e = ray("E", &[1, -1, 1, -1]);
        assert!(inner_product(&a, &b).unwrap().is_zero());
        assert!(inner_product(&c, &e).unwrap().is_zero());
        let x = ray("x", &[1, 0]);
        assert_eq!(inner_product(&x, &x).unwrap(), Rational::from_integer(1.into()));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ray("a", &[1, 0]);
        let b = ray("b", &[1, 0, 0]);
        assert_eq!(inner_product(&a, &b), Err(Error::DimensionMismatch { left: 2, right: 3 }));
        assert!(same_atom(&a, &b).is_err());
    }

    #[test]
    fn same_atom_examples() {
        assert!(same_atom(&ray("p", &[1, 1, 1, 1]), &ray("q", &[2, 2, 2, 2])).unwrap());
        assert!(same_atom(&ray("p", &[0, 0, 1, -1]), &ray("q", &[0, 0, -1, 1])).unwrap());
        assert!(!same_atom(&ray("p", &[0, 0, 1, -1]), &ray("q", &[0, 0, 1, 1])).unwrap());
    }

    #[test]
    fn zero_and_short_rays_rejected() {
        assert_eq!(Ray::from_ints("z", &[0, 0, 0]), Err(Error::ZeroRay("z".into())));
        assert!(matches!(Ray::from_ints("s", &[1]), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn normalize_examples() {
        let v: Vec<f64> = ray("D", &[1, 1, 1, 1]).normalize_float();
        assert!(v.iter().all(|x| (x - 0.5).abs() < 1e-12));
        let v: Vec<f64> = ray("O", &[0, 0, 0, 1]).normalize_float();
        assert_eq!(v, vec![0.0, 0.0, 0.0, 1.0]);
        let v: Vec<f64> = ray("B", &[-1, 1, 0, 0]).normalize_float();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - h).abs() < 1e-12 && (v[1] + h).abs() < 1e-12);
    }

    #[test]
    fn canonical_key_is_primitive_and_positive() {
        let r = Ray::new(
            "r",
            vec![
                Rational::from_integer(0.into()),
                Rational::new((-2).into(), 3.into()),
                Rational::new(4.into(), 3.into()),
            ],
        )
        .unwrap();
        let key: Vec<i64> = r.canonical_key().iter().map(|k| k.to_i64().unwrap()).collect();
        assert_eq!(key, vec![0, 1, -2]);
    }

    #[test]
    fn rational_parsing() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(parse_rational("-3"), Some(q(-3, 1)));
        assert_eq!(parse_rational(" 2/4 "), Some(q(1, 2)));
        assert_eq!(parse_rational("0.125"), Some(q(1, 8)));
        assert_eq!(parse_rational("-2.5e-1"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn ray_file_parsing() {
        let text = "# Fig rays\nA: (0, 0, 1, -1)\n\nB: (1/2, -1/2, 0, 0)\n";
        let rays = parse_rays(text).unwrap();
        assert_eq!(rays.len(), 2);
        assert_eq!(rays[1].label(), "B");
        let again = parse_rays(&write_rays(&rays)).unwrap();
        assert_eq!(again, rays);
        assert!(matches!(parse_rays("A: (1, 0)\nB: (1, 0, 0)"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_rays("A (1,0)"), Err(Error::Parse { line: 1, .. })));
    }
}
