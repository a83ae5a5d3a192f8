//! Small dense complex matrices and a cyclic Jacobi eigensolver for
//! Hermitian input.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};

/// Real scalar usable by the quantum engine.
pub trait Real: Float + Debug + Send + Sync + 'static {}

impl<T: Float + Debug + Send + Sync + 'static> Real for T {}

/// `base`, widened to a few hundred ulps for low-precision types.
pub fn tolerance<T: Real>(base: f64) -> T {
    let base = T::from(base).expect("tolerance representable");
    base.max(T::epsilon() * T::from(64.0).unwrap())
}

pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from(x).expect("representable constant")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(T::zero(), T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square and nonempty".into()));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_real(rows: &[Vec<T>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect()).collect())
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Tensor product, `self` on the first factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self.get(i, i))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues (ascending) and unitary eigenvector matrix (columns),
    /// by cyclic complex Jacobi rotations. Input must be Hermitian.
    pub fn eigh(&self) -> (Vec<T>, Self) {
        let n = self.n;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let scale = self.data.iter().fold(T::zero(), |m, x| m.max(x.norm()));
        let floor = T::epsilon() * T::epsilon() * scale * scale;
        let two = real::<T>(2.0);
        for _sweep in 0..100 {
            let mut off = T::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off = off + a.get(p, q).norm_sqr();
                }
            }
            if off <= floor {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    let g = apq.norm();
                    if g <= T::min_positive_value() {
                        continue;
                    }
                    // With phase w = a_pq/|a_pq|, U = diag(.., conj(w) at q, ..)·R(θ)
                    // turns the p,q block real and then annihilates it.
                    let w = apq / g;
                    let theta = (a.get(q, q).re - a.get(p, p).re) / (two * g);
                    let t = if theta.is_zero() {
                        T::one()
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    let wc = w.conj();
                    // A·U on columns p, q.
                    for k in 0..n {
                        let (akp, akq) = (a.get(k, p), a.get(k, q));
                        a.set(k, p, akp * c - akq * wc * s);
                        a.set(k, q, akp * s + akq * wc * c);
                        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                        v.set(k, p, vkp * c - vkq * wc * s);
                        v.set(k, q, vkp * s + vkq * wc * c);
                    }
                    // U^H·(A·U) on rows p, q.
                    for k in 0..n {
                        let (apk, aqk) = (a.get(p, k), a.get(q, k));
                        a.set(p, k, apk * c - aqk * w * s);
                        a.set(q, k, apk * s + aqk * w * c);
                    }
                    let zero = Complex::new(T::zero(), T::zero());
                    a.set(p, q, zero);
                    a.set(q, p, zero);
                    let (pp, qq) = (a.get(p, p).re, a.get(q, q).re);
                    a.set(p, p, Complex::new(pp, T::zero()));
                    a.set(q, q, Complex::new(qq, T::zero()));
                }
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| a.get(i, i).re.partial_cmp(&a.get(j, j).re).unwrap_or(std::cmp::Ordering::Equal));
        let values: Vec<T> = idx.iter().map(|&i| a.get(i, i).re).collect();
        let mut vectors = Self::zeros(n);
        for (new, &old) in idx.iter().enumerate() {
            for k in 0..n {
                vectors.set(k, new, v.get(k, old));
            }
        }
        (values, vectors)
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn eigh_reconstructs_complex_hermitian() {
        let m = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let (vals, vecs) = m.eigh();
        let mut d = CMatrix::zeros(3);
        for i in 0..3 {
            d.set(i, i, c(vals[i], 0.0));
        }
        let back = vecs.mul(&d).mul(&vecs.adjoint());
        assert!(back.max_abs_diff(&m) < 1e-12);
        assert!(vecs.mul(&vecs.adjoint()).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let (vals, _) = y.eigh();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kron_and_trace() {
        let z = CMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let zz = z.kron(&z);
        assert_eq!(zz.dim(), 4);
        assert_eq!(zz.trace(), c(0.0, 0.0));
        assert_eq!(zz.get(3, 3), c(1.0, 0.0));
    }

    #[test]
    fn f32_tolerance_is_widened() {
        let t: f32 = tolerance(1e-12);
        assert!(t > 1e-6);
        let t: f64 = tolerance(1e-10);
        assert_eq!(t, 1e-10);
    }
}
