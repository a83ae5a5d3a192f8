//! Born-rule engine over floating-point Hermitian matrices.

mod matrix;

use num_complex::Complex;
use serde::Serialize;

use matrix::real;
pub use matrix::{tolerance, CMatrix, Real};

use crate::error::{Error, Result};
use crate::orthospace::OrthoHypergraph;

/// Settings for which the singlet reaches `2√2` on
/// `E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)`.
pub const TSIRELSON_ANGLES: [f64; 4] =
    [0.0, std::f64::consts::FRAC_PI_2, 5.0 * std::f64::consts::FRAC_PI_4, 3.0 * std::f64::consts::FRAC_PI_4];

#[derive(Debug, Clone, PartialEq)]
pub struct DensityState<T> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityState<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let tol = tolerance::<T>(1e-10);
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidState("matrix is not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {:?}, expected 1", tr.re.to_f64().unwrap_or(f64::NAN))));
        }
        let (values, _) = matrix.eigh();
        if values[0] < -tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                values[0].to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for the normalized `ψ`.
    pub fn pure(ket: &[Complex<T>]) -> Result<Self> {
        let norm = ket.iter().fold(T::zero(), |s, c| s + c.norm_sqr()).sqrt();
        if ket.is_empty() || norm <= T::epsilon() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let unit: Vec<Complex<T>> = ket.iter().map(|c| c / norm).collect();
        Self::new(CMatrix::outer(&unit))
    }

    pub fn pure_real(ket: &[T]) -> Result<Self> {
        let ket: Vec<Complex<T>> = ket.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::pure(&ket)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        Self::new(CMatrix::identity(d).scale(T::one() / real::<T>(d as f64)))
    }

    /// `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = T::one() / real::<T>(2.0).sqrt();
        Self::pure_real(&[T::zero(), h, -h, T::zero()]).expect("singlet is a valid state")
    }

    /// `(1/√d) Σ_i |i⟩|i⟩` on `d ⊗ d`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        let mut ket = vec![T::zero(); d * d];
        for i in 0..d {
            ket[i * d + i] = T::one();
        }
        Self::pure_real(&ket)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTerm<T> {
    pub value: T,
    pub projector: CMatrix<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    matrix: CMatrix<T>,
    spectrum: Vec<SpectralTerm<T>>,
}

impl<T: Real> Observable<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let tol = tolerance::<T>(1e-10);
        if !matrix.is_hermitian(tol) {
            return Err(Error::InvalidObservable("matrix is not Hermitian".into()));
        }
        let n = matrix.dim();
        let (values, vectors) = matrix.eigh();
        let group = tolerance::<T>(1e-9);
        let mut spectrum: Vec<SpectralTerm<T>> = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && values[end] - values[start] <= group {
                end += 1;
            }
            let mut projector = CMatrix::zeros(n);
            for k in start..end {
                projector = projector.add(&CMatrix::outer(&vectors.column(k)));
            }
            let mean = values[start..end].iter().fold(T::zero(), |s, &v| s + v) / real::<T>((end - start) as f64);
            spectrum.push(SpectralTerm { value: mean, projector });
            start = end;
        }
        let rebuilt = spectrum.iter().fold(CMatrix::zeros(n), |acc, t| acc.add(&t.projector.scale(t.value)));
        if rebuilt.max_abs_diff(&matrix) > tol {
            return Err(Error::InvalidObservable("spectral decomposition did not converge".into()));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn from_real(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(CMatrix::from_real(rows)?)
    }

    pub fn pauli_x() -> Self {
        Self::from_real(&[vec![T::zero(), T::one()], vec![T::one(), T::zero()]]).expect("Hermitian")
    }

    pub fn pauli_y() -> Self {
        let (z, i) = (T::zero(), T::one());
        let m = CMatrix::from_rows(vec![
            vec![Complex::new(z, z), Complex::new(z, -i)],
            vec![Complex::new(z, i), Complex::new(z, z)],
        ])
        .expect("square");
        Self::new(m).expect("Hermitian")
    }

    pub fn pauli_z() -> Self {
        Self::from_real(&[vec![T::one(), T::zero()], vec![T::zero(), -T::one()]]).expect("Hermitian")
    }

    /// `cos θ σz + sin θ σx`, spin along angle `θ` in the x–z plane.
    pub fn spin(theta: T) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        Self::from_real(&[vec![c, s], vec![s, -c]]).expect("Hermitian")
    }

    /// Projector onto the normalized span of `v`.
    pub fn projector(v: &[T]) -> Result<Self> {
        let norm = v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
        if v.is_empty() || norm <= T::epsilon() {
            return Err(Error::InvalidObservable("zero vector".into()));
        }
        let unit: Vec<Complex<T>> = v.iter().map(|&x| Complex::new(x / norm, T::zero())).collect();
        Self::new(CMatrix::outer(&unit))
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.kron(&other.matrix))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn spectrum(&self) -> &[SpectralTerm<T>] {
        &self.spectrum
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dim()
    }
}

fn born_trace<T: Real>(rho: &DensityState<T>, a: &CMatrix<T>) -> Result<T> {
    if rho.dimension() != a.dim() {
        return Err(Error::DimensionMismatch { left: rho.dimension(), right: a.dim() });
    }
    let tr = rho.matrix().mul(a).trace();
    if tr.im.abs() >= tolerance::<T>(1e-10) {
        return Err(Error::InvalidObservable(format!(
            "expectation has imaginary part {:e}",
            tr.im.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(tr.re)
}

/// `Tr(ρA)`.
pub fn expectation<T: Real>(rho: &DensityState<T>, a: &Observable<T>) -> Result<T> {
    born_trace(rho, a.matrix())
}

/// Singlet correlation `⟨σ(a) ⊗ σ(b)⟩ = -cos(a - b)`.
pub fn singlet_correlation<T: Real>(a: T, b: T) -> T {
    let obs = Observable::spin(a).kron(&Observable::spin(b)).expect("Hermitian");
    expectation(&DensityState::singlet(), &obs).expect("dimensions match")
}

pub fn chsh_value<T: Real>(a1: T, a2: T, b1: T, b2: T) -> T {
    singlet_correlation(a1, b1) + singlet_correlation(a1, b2) + singlet_correlation(a2, b1)
        - singlet_correlation(a2, b2)
}

fn check_unit<T: Real>(v: &[T]) -> Result<()> {
    let norm = v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let off = (norm - T::one()).abs();
    if off > tolerance::<T>(1e-9) {
        let norm = norm.to_f64().unwrap_or(f64::NAN);
        return Err(Error::NotUnit { norm, tolerance: 1e-9 });
    }
    Ok(())
}

/// Probability that side 1 projects onto `a` and side 2 onto `b` in the
/// maximally entangled state of two `d`-level systems.
pub fn entangled_joint_prob<T: Real>(a: &[T], b: &[T], d: usize) -> Result<T> {
    for v in [a, b] {
        if v.len() != d {
            return Err(Error::DimensionMismatch { left: d, right: v.len() });
        }
        check_unit(v)?;
    }
    let rho = DensityState::maximally_entangled(d)?;
    let lift = |v: &[T]| -> Vec<Complex<T>> { v.iter().map(|&x| Complex::new(x, T::zero())).collect() };
    let joint = CMatrix::outer(&lift(a)).kron(&CMatrix::outer(&lift(b)));
    born_trace(&rho, &joint)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplosionView<T> {
    pub atom: String,
    pub contexts: [String; 2],
    /// Probability of the atom on side 1 with side 2 measuring the other
    /// context, for each of the two arrangements.
    pub marginal_1: T,
    pub marginal_2: T,
    pub delta: T,
    /// Probability that exactly one side reports the atom.
    pub mismatch_1: T,
    pub mismatch_2: T,
}

/// Side 1 measures one context, side 2 the other (and then swapped), both
/// on the maximally entangled state.
pub fn explosion_view_marginals<T: Real>(
    h: &OrthoHypergraph,
    atom: usize,
    contexts: (usize, usize),
) -> Result<ExplosionView<T>> {
    if !h.has_coordinates() {
        return Err(Error::NoCoordinates(h.name().to_string()));
    }
    let atoms = h.atoms();
    let ctxs = h.contexts();
    let a = atoms.get(atom).ok_or_else(|| Error::UnknownLabel(format!("atom #{atom}")))?;
    let mut pair = Vec::with_capacity(2);
    for c in [contexts.0, contexts.1] {
        let ctx = ctxs.get(c).ok_or_else(|| Error::UnknownLabel(format!("context #{c}")))?;
        if !ctx.atoms.contains(&atom) {
            return Err(Error::AtomNotInContext { atom: a.label().to_string(), context: ctx.label.clone() });
        }
        pair.push(ctx);
    }
    let d = h.dimension();
    let vector = |i: usize| -> Vec<T> { atoms[i].ray.as_ref().expect("coordinates").normalize_float() };
    let here = vector(atom);
    let arrangement = |local: usize, remote: usize| -> Result<(T, T)> {
        let mut marginal = T::zero();
        for &b in &pair[remote].atoms {
            marginal = marginal + entangled_joint_prob(&here, &vector(b), d)?;
        }
        let mut mismatch = T::zero();
        for &x in &pair[local].atoms {
            for &y in &pair[remote].atoms {
                if (x == atom) != (y == atom) {
                    mismatch = mismatch + entangled_joint_prob(&vector(x), &vector(y), d)?;
                }
            }
        }
        Ok((marginal, mismatch))
    };
    let (m1, x1) = arrangement(0, 1)?;
    let (m2, x2) = arrangement(1, 0)?;
    Ok(ExplosionView {
        atom: a.label().to_string(),
        contexts: [pair[0].label.clone(), pair[1].label.clone()],
        marginal_1: m1,
        marginal_2: m2,
        delta: (m1 - m2).abs(),
        mismatch_1: x1,
        mismatch_2: x2,
    })
}

/// Every (link atom, pair of its contexts) of `h`.
pub fn explosion_view_all<T: Real>(h: &OrthoHypergraph) -> Result<Vec<ExplosionView<T>>> {
    let mut out = Vec::new();
    for (atom, ctxs) in h.incidence().iter().enumerate() {
        for (i, &c1) in ctxs.iter().enumerate() {
            for &c2 in &ctxs[i + 1..] {
                out.push(explosion_view_marginals(h, atom, (c1, c2))?);
            }
        }
    }
    Ok(out)
}
