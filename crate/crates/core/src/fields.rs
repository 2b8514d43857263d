//! The graded Lie algebra `𝔥 = 𝔥⁻¹ ⊕ 𝔥⁰ ⊕ 𝔥¹` of polynomial vector fields
//! `f(z)∂z` with `f(z) = iu + Az + iP(z)w` on the complexification.
//!
//! Brackets use `[f∂, g∂] = (g′f − f′g)∂`. With this convention the Euler
//! field `δ = z∂z` acts by `−1, 0, +1` on the three graded pieces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{Algebra, ComplexElement, ComplexOperator, Element, Family, LinearOperator};
use crate::json;
use crate::linalg::{self, binomial, numeric_rank, NULL_CUTOFF};
use crate::sample;
use crate::spectral::{self, DEFAULT_TOL};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for membership of a linear part in `gl(Ω)`.
pub const CLOSURE_TOL: f64 = 1e-8;

/// A field `iu∂z + Az∂z + iP(z)w∂z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedField {
    #[serde(with = "json::vector")]
    pub u: Element,
    #[serde(rename = "A", with = "json::matrix")]
    pub a: LinearOperator,
    #[serde(with = "json::vector")]
    pub w: Element,
}

impl GradedField {
    /// Checked constructor: dimensions agree and `A ∈ gl(Ω)`.
    pub fn new(alg: &Algebra, u: Element, a: LinearOperator, w: Element) -> Result<Self> {
        alg.check(&u)?;
        alg.check(&w)?;
        if a.nrows() != alg.dim() || a.ncols() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: a.nrows().max(a.ncols()),
            });
        }
        let residual = gl_omega_span(alg).residual(&a);
        if residual > CLOSURE_TOL {
            return Err(Error::ClosureViolation { residual });
        }
        Ok(Self { u, a, w })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            u: Element::zeros(dim),
            a: LinearOperator::zeros(dim, dim),
            w: Element::zeros(dim),
        }
    }

    /// `iu∂z`.
    pub fn translation(u: Element) -> Self {
        let d = u.len();
        Self { u, ..Self::zero(d) }
    }

    /// `Az∂z`.
    pub fn linear(a: LinearOperator) -> Self {
        let d = a.nrows();
        Self { a, ..Self::zero(d) }
    }

    /// `i{zwz}∂z = iP(z)w∂z`.
    pub fn quadratic(w: Element) -> Self {
        let d = w.len();
        Self { w, ..Self::zero(d) }
    }

    /// The Euler field `δ = z∂z`.
    pub fn euler(dim: usize) -> Self {
        Self::linear(LinearOperator::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// Euclidean norm of all coefficients.
    pub fn coefficient_norm(&self) -> f64 {
        (self.u.norm_squared() + self.a.norm_squared() + self.w.norm_squared()).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self {
            u: &self.u * t,
            a: &self.a * t,
            w: &self.w * t,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            u: &self.u + &other.u,
            a: &self.a + &other.a,
            w: &self.w + &other.w,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Coefficient norms of the degree −1, 0 and +1 parts.
    pub fn degree_norms(&self) -> [f64; 3] {
        [self.u.norm(), self.a.norm(), self.w.norm()]
    }
}

/// `f(z) = iu + Az + iP(z)w`.
pub fn evaluate_field(alg: &Algebra, f: &GradedField, z: &ComplexElement) -> Result<ComplexElement> {
    alg.check(z)?;
    alg.check(&f.u)?;
    let u = linalg::to_complex_vec(&f.u);
    let a = linalg::to_complex_mat(&f.a);
    let w = linalg::to_complex_vec(&f.w);
    let pz = alg.pquad(z)?;
    Ok(u * I + a * z + (pz * w) * I)
}

/// Operator `h ↦ P(h, u)w` on whichever scalars `u, w` live over.
fn polar_operator(alg: &Algebra, u: &ComplexElement, w: &ComplexElement) -> Result<ComplexOperator> {
    let lu = alg.lmul(u)?;
    let lw = alg.lmul(w)?;
    let luw = alg.lmul(&alg.jordan_product(u, w)?)?;
    Ok(&lu * &lw + luw - &lw * &lu)
}

fn real_polar_operator(alg: &Algebra, u: &Element, w: &Element) -> Result<LinearOperator> {
    let lu = alg.lmul(u)?;
    let lw = alg.lmul(w)?;
    let luw = alg.lmul(&alg.jordan_product(u, w)?)?;
    Ok(&lu * &lw + luw - &lw * &lu)
}

/// `f′(z): h ↦ Ah + 2iP(z, h)w`.
pub fn field_derivative(alg: &Algebra, f: &GradedField, z: &ComplexElement) -> Result<ComplexOperator> {
    alg.check(z)?;
    let w = linalg::to_complex_vec(&f.w);
    Ok(linalg::to_complex_mat(&f.a) + polar_operator(alg, z, &w)? * (I * 2.0))
}

/// `P(x, y)w` from three Jordan products.
fn polar_apply(alg: &Algebra, x: &ComplexElement, y: &ComplexElement, w: &ComplexElement) -> Result<ComplexElement> {
    let xw = alg.jordan_product(x, w)?;
    let yw = alg.jordan_product(y, w)?;
    let xy = alg.jordan_product(x, y)?;
    Ok(alg.jordan_product(x, &yw)? + alg.jordan_product(y, &xw)? - alg.jordan_product(&xy, w)?)
}

/// The degree-2 and degree-3 coefficients of `g′f − f′g` at `z`.
fn higher_parts(alg: &Algebra, f: &GradedField, g: &GradedField, z: &ComplexElement) -> Result<(ComplexElement, ComplexElement)> {
    let af = linalg::to_complex_mat(&f.a);
    let ag = linalg::to_complex_mat(&g.a);
    let wf = linalg::to_complex_vec(&f.w);
    let wg = linalg::to_complex_vec(&g.w);
    let pwf = polar_apply(alg, z, z, &wf)?;
    let pwg = polar_apply(alg, z, z, &wg)?;
    let quad = (&ag * &pwf - &af * &pwg) * I
        + (polar_apply(alg, z, &(&af * z), &wg)? - polar_apply(alg, z, &(&ag * z), &wf)?) * (I * 2.0);
    let cubic = (polar_apply(alg, z, &pwg, &wf)? - polar_apply(alg, z, &pwf, &wg)?) * Complex64::new(2.0, 0.0);
    Ok((quad, cubic))
}

/// Lie bracket `[f∂, g∂] = (g′f − f′g)∂`, decomposed back into `(u, A, w)`.
pub fn bracket(alg: &Algebra, f: &GradedField, g: &GradedField) -> Result<GradedField> {
    for field in [f, g] {
        alg.check(&field.u)?;
        alg.check(&field.w)?;
    }
    let d = alg.dim();
    let e = alg.unit();

    let u = &g.a * &f.u - &f.a * &g.u;
    let a = &g.a * &f.a - &f.a * &g.a - real_polar_operator(alg, &f.u, &g.w)? * 2.0
        + real_polar_operator(alg, &g.u, &f.w)? * 2.0;
    let w = &g.a * &f.w - &f.a * &g.w + alg.jordan_product(&(&f.a * &e), &g.w)? * 2.0
        - alg.jordan_product(&(&g.a * &e), &f.w)? * 2.0;

    let scale = 1.0 + f.coefficient_norm() * g.coefficient_norm();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_55ed);
    let wc = linalg::to_complex_vec(&w);
    for _ in 0..5 {
        let z = sample::complex_element(alg, &mut rng);
        let zs = 1.0 + alg.norm(&z);
        let (quad, cubic) = higher_parts(alg, f, g, &z)?;
        let expected = polar_apply(alg, &z, &z, &wc)? * I;
        let residual = (quad - expected).camax() / (scale * zs * zs);
        if residual > CLOSURE_TOL {
            return Err(Error::NumericalFailure {
                context: "quadratic part of the bracket is not of the form iP(z)w".into(),
                residual,
            });
        }
        let residual = cubic.camax() / (scale * zs.powi(3));
        if residual > CLOSURE_TOL {
            return Err(Error::NumericalFailure {
                context: "cubic part of the bracket does not vanish".into(),
                residual,
            });
        }
    }

    let residual = gl_omega_span(alg).residual(&a) / scale;
    if residual > CLOSURE_TOL {
        return Err(Error::ClosureViolation { residual });
    }
    debug_assert_eq!(u.len(), d);
    Ok(GradedField { u, a, w })
}

/// `gl(Ω) = der(V) ⊕ L(V)` as a numerically computed operator span.
#[derive(Debug, Clone)]
pub struct GlOmegaSpan {
    /// Orthonormal basis (Frobenius) of the span, stored as columns of vectorized operators.
    basis: DMatrix<f64>,
    pub dim_der: usize,
    pub dim_gl_omega: usize,
    /// Rank of the full span, computed independently of `dim_der + dim V`.
    pub span_rank: usize,
}

impl GlOmegaSpan {
    fn compute(alg: &Algebra) -> Self {
        let d = alg.dim();
        let ls = alg.basis_multiplications();
        let mut commutators = Vec::with_capacity(binomial(d, 2));
        for i in 0..d {
            for j in i + 1..d {
                let c = &ls[i] * &ls[j] - &ls[j] * &ls[i];
                commutators.push(DVector::from_column_slice(c.as_slice()));
            }
        }
        let der = linalg::columns(d * d, &commutators);
        let dim_der = numeric_rank(&der, NULL_CUTOFF);
        let mut all: Vec<DVector<f64>> = ls.iter().map(|l| DVector::from_column_slice(l.as_slice())).collect();
        all.extend(commutators);
        let span = linalg::columns(d * d, &all);
        let range = linalg::orthonormal_range(&span, NULL_CUTOFF);
        Self {
            span_rank: range.len(),
            basis: linalg::columns(d * d, &range),
            dim_der,
            dim_gl_omega: d + dim_der,
        }
    }

    /// Orthonormal basis operators.
    pub fn basis(&self) -> Vec<LinearOperator> {
        let d = (self.basis.nrows() as f64).sqrt().round() as usize;
        self.basis
            .column_iter()
            .map(|c| LinearOperator::from_column_slice(d, d, c.as_slice()))
            .collect()
    }

    /// Distance from `x` to the span, relative to `max(1, ‖x‖)`.
    pub fn residual(&self, x: &LinearOperator) -> f64 {
        let v = DVector::from_column_slice(x.as_slice());
        let proj = &self.basis * (self.basis.transpose() * &v);
        (v - proj).norm() / x.norm().max(1.0)
    }

    /// Random element of the span with Gaussian coordinates.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> LinearOperator {
        let d = (self.basis.nrows() as f64).sqrt().round() as usize;
        let coeffs = DVector::from_fn(self.basis.ncols(), |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
        let v = &self.basis * coeffs;
        LinearOperator::from_column_slice(d, d, v.as_slice())
    }
}

/// The span of `L(V) + [L(V), L(V)]`, computed once per algebra.
pub fn gl_omega_span(alg: &Algebra) -> &GlOmegaSpan {
    alg.gl_omega_cell().get_or_init(|| GlOmegaSpan::compute(alg))
}

/// A random field with each graded part drawn independently.
pub fn random_field<R: rand::Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> GradedField {
    GradedField {
        u: sample::element(alg, rng),
        a: gl_omega_span(alg).random(rng),
        w: sample::element(alg, rng),
    }
}

/// Numeric dimensions of the algebras attached to `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimTable {
    pub dim_v: usize,
    pub dim_der: usize,
    pub dim_gl_omega: usize,
    pub dim_sl_omega: usize,
    pub dim_aut_h: usize,
    pub dim_sl_d: usize,
}

pub fn dim_table(alg: &Algebra) -> DimTable {
    let span = gl_omega_span(alg);
    let dim_sl = span.dim_gl_omega - 1;
    DimTable {
        dim_v: alg.dim(),
        dim_der: span.dim_der,
        dim_gl_omega: span.dim_gl_omega,
        dim_sl_omega: dim_sl,
        dim_aut_h: 2 * alg.dim() + span.dim_gl_omega,
        dim_sl_d: dim_sl,
    }
}

/// Table values from the classification: `der(V)`, `sl(Ω)` and `aut(H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormDims {
    pub dim_der: usize,
    pub dim_sl_omega: usize,
    pub dim_aut_h: usize,
}

pub fn closed_form_dims(family: Family, r: usize, n: usize) -> ClosedFormDims {
    let dim_der = match family {
        Family::SpinFactor => n * (n + 1) / 2,
        Family::HermReal => binomial(r, 2),
        Family::HermComplex => r * r - 1,
        Family::HermQuaternion => r * (2 * r + 1),
        Family::Albert => 52,
    };
    let dim_sl_omega = match family {
        Family::Albert => 78,
        _ => (n * (r * r) + binomial(n, 2) + 1).saturating_sub(2 * n),
    };
    let dim_aut_h = match family {
        Family::SpinFactor => (n + 3) * (n + 4) / 2,
        Family::HermReal => r * (2 * r + 1),
        Family::HermComplex => 4 * r * r - 1,
        Family::HermQuaternion => 2 * r * (4 * r - 1),
        Family::Albert => 133,
    };
    ClosedFormDims {
        dim_der,
        dim_sl_omega,
        dim_aut_h,
    }
}

/// Outcome of the vanishing tests at a base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    /// `f(a) = 0`: `A a = 0` and `−u = {ava}`.
    pub value_zero: bool,
    /// `f′(a) = 0`: `A = 0` and `w ∈ V₀`.
    pub one_jet_zero: bool,
    pub value_residual: f64,
    pub jet_residual: f64,
}

/// Vanishing of a field and of its derivative at `a`.
///
/// The field is read with translation part `u = −w̃` against the
/// parameterization `f(z) = λ(z) + i({zvz} − w̃)`, so `λ = A` and `v = w`.
pub fn vanishing_conditions(alg: &Algebra, f: &GradedField, a: &Element) -> Result<VanishingReport> {
    alg.check(a)?;
    let data = spectral::spectral_decompose(alg, a, DEFAULT_TOL)?;
    spectral::check_condition_star(&data.eigenvalues, DEFAULT_TOL)?;
    let c = spectral::support_of(&data, alg.dim(), DEFAULT_TOL)?;
    let peirce = spectral::peirce_projections(alg, &c)?;

    let pa = alg.pquad(a)?;
    let value_residual = (&f.a * a).camax().max((&f.u + &pa * &f.w).camax());
    let w_off_v0 = &f.w - &peirce.pi_zero * &f.w;
    let jet_residual = f.a.camax().max(w_off_v0.camax());
    let tol = 1e-9;
    Ok(VanishingReport {
        value_zero: value_residual < tol,
        one_jet_zero: jet_residual < tol,
        value_residual,
        jet_residual,
    })
}

/// Finite spectrum `Λ ⊂ ℂ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSet(Vec<Complex64>);

impl SpectrumSet {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(Self(values))
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }
}

/// A resonance `Σ m_k λ_k = λ_target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resonance {
    pub multi_index: Vec<usize>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonresonanceReport {
    pub nonresonant: bool,
    /// True when the searched range provably covers every possible resonance.
    pub exact: bool,
    pub degree_bound: usize,
    pub witness: Option<Resonance>,
}

fn for_each_multi_index(len: usize, total: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn go(m: &mut Vec<usize>, len: usize, left: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if m.len() + 1 == len {
            m.push(left);
            let stop = f(m);
            m.pop();
            return stop;
        }
        for k in (0..=left).rev() {
            m.push(k);
            let stop = go(m, len, left - k, f);
            m.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(&mut Vec::with_capacity(len), len, total, f)
}

/// Search all multi-indices with `2 ≤ |m| ≤ degree_bound` for a resonance.
pub fn nonresonant(spectrum: &SpectrumSet, degree_bound: usize) -> Result<NonresonanceReport> {
    if degree_bound < 2 {
        return Err(Error::InvalidBound { bound: degree_bound });
    }
    let lambda = spectrum.values();
    let scale = lambda.iter().fold(1.0, |m: f64, l| m.max(l.norm()));
    let mut witness = None;
    for total in 2..=degree_bound {
        let found = for_each_multi_index(lambda.len(), total, &mut |m| {
            let s: Complex64 = m.iter().zip(lambda).map(|(&k, l)| l * k as f64).sum();
            if let Some(target) = lambda.iter().position(|l| (s - l).norm() <= 1e-12 * scale * total as f64) {
                witness = Some(Resonance {
                    multi_index: m.to_vec(),
                    target,
                });
                return true;
            }
            false
        });
        if found {
            break;
        }
    }
    let min_re = lambda.iter().map(|l| l.re).fold(f64::INFINITY, f64::min);
    let max_re = lambda.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    let complete = min_re > 0.0 && (degree_bound as f64) >= (max_re / min_re).ceil();
    Ok(NonresonanceReport {
        nonresonant: witness.is_none(),
        exact: witness.is_some() || complete,
        degree_bound,
        witness,
    })
}

/// `Σ m_k λ_k − λ_j` (0-based `j`).
pub fn monomial_weight(m: &[usize], j: usize, lambda: &[Complex64]) -> Result<Complex64> {
    if m.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: lambda.len(),
            found: m.len(),
        });
    }
    if j >= lambda.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: lambda.len(),
        });
    }
    Ok(m.iter().zip(lambda).map(|(&k, l)| l * k as f64).sum::<Complex64>() - lambda[j])
}

/// Coefficients `g_j(t) = c_j / (1 − i v_j c_j t)` of the flow of `iP(z)v∂z` on a frame.
pub fn diagonal_flow_coefficients(v: &[f64], c: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    if v.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: c.len(),
        });
    }
    v.iter()
        .zip(c)
        .enumerate()
        .map(|(index, (&vj, &cj))| {
            let denom = Complex64::new(1.0, 0.0) - I * vj * cj * t;
            if denom.norm() < 1e-12 {
                Err(Error::FlowSingularity { t, index })
            } else {
                Ok(cj / denom)
            }
        })
        .collect()
}

/// Flow of `ξ = i{zvz}∂z` with `v = Σ v_j e_j` through `c = Σ c_j e_j` at time `t`.
pub fn diagonal_flow(alg: &Algebra, frame: &[Element], v: &[f64], c: &[Complex64], t: f64) -> Result<ComplexElement> {
    if frame.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            found: v.len(),
        });
    }
    let g = diagonal_flow_coefficients(v, c, t)?;
    let mut out = ComplexElement::zeros(alg.dim());
    for (e, gj) in frame.iter().zip(g) {
        alg.check(e)?;
        out += linalg::to_complex_vec(e) * gj;
    }
    Ok(out)
}
