//! Bounded and unbounded realizations: the Cayley transform, the Lie ball
//! of the spin factors with its boundary strata, and the action of the real
//! symplectic group on the Siegel upper half space.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{Algebra, ComplexElement, Family};
use crate::json;
use crate::linalg::{self, NULL_CUTOFF};

/// Default tolerance for boundary classification.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Residual allowed in `AᵗJA = J`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// `γ(z) = (z − e) ∘ (z + e)⁻¹`.
pub fn cayley(alg: &Algebra, z: &ComplexElement) -> Result<ComplexElement> {
    let e = linalg::to_complex_vec(&alg.unit());
    let inv = alg.jordan_inverse(&(z + &e))?;
    alg.jordan_product(&(z - &e), &inv)
}

/// `γ⁻¹(w) = (e + w) ∘ (e − w)⁻¹`.
pub fn inverse_cayley(alg: &Algebra, w: &ComplexElement) -> Result<ComplexElement> {
    let e = linalg::to_complex_vec(&alg.unit());
    let inv = alg.jordan_inverse(&(&e - w))?;
    alg.jordan_product(&(&e + w), &inv)
}

/// Map from spin-factor coordinates `(σ, ω)` of `E` to Lie-ball coordinates `(σ, iω)`.
pub fn spin_to_lie_ball(alg: &Algebra, z: &ComplexElement) -> Result<LieBallPoint> {
    if alg.family() != Family::SpinFactor {
        return Err(Error::UnsupportedFamily {
            family: alg.family().to_string(),
            operation: "the Lie-ball identification".into(),
        });
    }
    alg.check(z)?;
    let i = Complex64::new(0.0, 1.0);
    Ok(LieBallPoint::new(
        z.iter().enumerate().map(|(k, &c)| if k == 0 { c } else { c * i }).collect(),
    ))
}

/// Stratum of `ℂ^m` relative to the Lie ball `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    #[serde(rename = "SmoothBoundary_S1")]
    SmoothBoundary,
    #[serde(rename = "Shilov_S0")]
    Shilov,
    Exterior,
}

/// A point of `ℂ^m` with its Hermitian square `(z|z)` and bilinear square `⟨z,z⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieBallPoint {
    #[serde(with = "json::complex_vector")]
    coords: ComplexElement,
    hermitian: f64,
    #[serde(with = "complex_pair")]
    bilinear: Complex64,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

impl LieBallPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        let hermitian = coords.iter().map(|c| c.norm_sqr()).sum();
        let bilinear = coords.iter().map(|c| c * c).sum();
        Self {
            coords: ComplexElement::from_vec(coords),
            hermitian,
            bilinear,
        }
    }

    pub fn coords(&self) -> &ComplexElement {
        &self.coords
    }

    /// `(z|z) = Σ |z_k|²`.
    pub fn hermitian(&self) -> f64 {
        self.hermitian
    }

    /// `⟨z,z⟩ = Σ z_k²`.
    pub fn bilinear(&self) -> Complex64 {
        self.bilinear
    }

    /// `(z|z) + √((z|z)² − |⟨z,z⟩|²)`; the ball is where this is below one.
    pub fn gauge(&self) -> f64 {
        let h = self.hermitian;
        h + (h * h - self.bilinear.norm_sqr()).max(0.0).sqrt()
    }

    pub fn membership(&self, tol: f64) -> Membership {
        if (self.hermitian - 1.0).abs() < tol && (self.bilinear.norm() - 1.0).abs() < tol {
            return Membership::Shilov;
        }
        let q = self.gauge();
        if (q - 1.0).abs() < tol {
            Membership::SmoothBoundary
        } else if q < 1.0 {
            Membership::Interior
        } else {
            Membership::Exterior
        }
    }
}

pub fn lie_ball_membership(z: &LieBallPoint) -> Membership {
    z.membership(MEMBERSHIP_TOL)
}

/// `J = (0, e; −e, 0)` of size `2r`.
pub fn standard_symplectic_form(r: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * r, 2 * r);
    for k in 0..r {
        j[(k, r + k)] = 1.0;
        j[(r + k, k)] = -1.0;
    }
    j
}

/// A real `2r × 2r` matrix `(a, b; c, d)` with `AᵗJA = J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Raw", into = "Raw")]
pub struct SymplecticMatrix {
    matrix: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Raw(#[serde(with = "json::matrix")] DMatrix<f64>);

impl TryFrom<Raw> for SymplecticMatrix {
    type Error = Error;

    fn try_from(raw: Raw) -> Result<Self> {
        Self::new(raw.0)
    }
}

impl From<SymplecticMatrix> for Raw {
    fn from(m: SymplecticMatrix) -> Self {
        Raw(m.matrix)
    }
}

fn symmetric_residual(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

impl SymplecticMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !n.is_multiple_of(2) || n == 0 {
            return Err(Error::NotSymplectic { residual: f64::INFINITY });
        }
        let j = standard_symplectic_form(n / 2);
        let residual = (matrix.transpose() * &j * &matrix - &j).amax() / matrix.amax().powi(2).max(1.0);
        if !(residual <= SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(r: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * r, 2 * r),
        }
    }

    pub fn j(r: usize) -> Self {
        Self {
            matrix: standard_symplectic_form(r),
        }
    }

    fn blocks(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>, d: &DMatrix<f64>) -> DMatrix<f64> {
        let r = a.nrows();
        let mut m = DMatrix::zeros(2 * r, 2 * r);
        m.view_mut((0, 0), (r, r)).copy_from(a);
        m.view_mut((0, r), (r, r)).copy_from(b);
        m.view_mut((r, 0), (r, r)).copy_from(c);
        m.view_mut((r, r), (r, r)).copy_from(d);
        m
    }

    fn require_symmetric(m: &DMatrix<f64>) -> Result<()> {
        let residual = symmetric_residual(m);
        if residual > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(())
    }

    /// `(e, b; 0, e)` with `b` symmetric, acting as `z ↦ z + b`.
    pub fn translation(b: &DMatrix<f64>) -> Result<Self> {
        Self::require_symmetric(b)?;
        let r = b.nrows();
        let id = DMatrix::identity(r, r);
        Ok(Self {
            matrix: Self::blocks(&id, b, &DMatrix::zeros(r, r), &id),
        })
    }

    /// `(e, 0; c, e)` with `c` symmetric.
    pub fn lower_translation(c: &DMatrix<f64>) -> Result<Self> {
        Self::require_symmetric(c)?;
        let r = c.nrows();
        let id = DMatrix::identity(r, r);
        Ok(Self {
            matrix: Self::blocks(&id, &DMatrix::zeros(r, r), c, &id),
        })
    }

    /// `(g, 0; 0, (gᵗ)⁻¹)`, acting as `z ↦ g z gᵗ`.
    pub fn dilation(g: &DMatrix<f64>) -> Result<Self> {
        let r = g.nrows();
        let inv = g.clone().try_inverse().ok_or(Error::NotSymplectic { residual: f64::INFINITY })?;
        Ok(Self {
            matrix: Self::blocks(g, &DMatrix::zeros(r, r), &DMatrix::zeros(r, r), &inv.transpose()),
        })
    }

    /// A random product of translations, dilations and `J`.
    pub fn random<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Self {
        let gauss = |rng: &mut R| DMatrix::<f64>::from_fn(r, r, |_, _| rng.sample(StandardNormal));
        let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
        let id = DMatrix::<f64>::identity(r, r);
        let mut out = Self::identity(r);
        for _ in 0..3 {
            let g = &id * 1.5 + gauss(rng) * 0.4;
            let factors = [
                Self::translation(&sym(gauss(rng))).expect("symmetric"),
                Self::dilation(&g).expect("diagonally dominant"),
                Self::lower_translation(&(sym(gauss(rng)) * 0.3)).expect("symmetric"),
            ];
            for f in factors {
                out = out.compose(&f);
            }
            if rng.random_bool(0.5) {
                out = out.compose(&Self::j(r));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// The blocks `(a, b, c, d)`.
    pub fn split(&self) -> [DMatrix<f64>; 4] {
        let r = self.rank();
        [(0, 0), (0, r), (r, 0), (r, r)].map(|(i, j)| self.matrix.view((i, j), (r, r)).into_owned())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// Positive-definiteness check with a threshold relative to the spectral radius.
fn positive_definite(m: &DMatrix<f64>) -> bool {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen().eigenvalues;
    let max = eig.iter().fold(0.0, |a: f64, l| a.max(l.abs()));
    max > 0.0 && eig.iter().all(|&l| l > 1e-12 * max)
}

/// Check that `z` is complex symmetric with positive-definite imaginary part.
pub fn check_siegel(z: &DMatrix<Complex64>) -> Result<()> {
    if z.nrows() != z.ncols() {
        return Err(Error::NotInSiegelSpace {
            reason: format!("{}x{} is not square", z.nrows(), z.ncols()),
        });
    }
    let asym = (z - z.transpose()).camax();
    if asym > SYMPLECTIC_TOL * z.camax().max(1.0) {
        return Err(Error::NotInSiegelSpace {
            reason: format!("not symmetric (residual {asym:.3e})"),
        });
    }
    if !positive_definite(&z.map(|c| c.im)) {
        return Err(Error::NotInSiegelSpace {
            reason: "imaginary part is not positive definite".into(),
        });
    }
    Ok(())
}

/// `A(z) = (az + b)(cz + d)⁻¹` on the Siegel upper half space.
pub fn siegel_action(a: &SymplecticMatrix, z: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    check_siegel(z)?;
    let r = a.rank();
    if z.nrows() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: z.nrows(),
        });
    }
    let [ab, bb, cb, db] = a.split().map(|m| linalg::to_complex_mat(&m));
    let num = &ab * z + bb;
    let den = &cb * z + db;
    if linalg::numeric_rank(&den, 1e-12) < r {
        return Err(Error::SingularDenominator);
    }
    let inv = den.try_inverse().ok_or(Error::SingularDenominator)?;
    let w = num * inv;
    let w = (&w + w.transpose()) * Complex64::new(0.5, 0.0);
    if !positive_definite(&w.map(|c| c.im)) {
        return Err(Error::NumericalFailure {
            context: "image left the Siegel upper half space".into(),
            residual: 0.0,
        });
    }
    Ok(w)
}

/// Basis of `sp(2r, ℝ)`: `X = (α, β; γ, −αᵗ)` with `β, γ` symmetric.
fn symplectic_algebra_basis(r: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let mut x = DMatrix::zeros(2 * r, 2 * r);
            x[(i, j)] = 1.0;
            x[(r + j, r + i)] = -1.0;
            out.push(x);
        }
    }
    for (row, col) in [(0, r), (r, 0)] {
        for i in 0..r {
            for j in i..r {
                let mut x = DMatrix::zeros(2 * r, 2 * r);
                x[(row + i, col + j)] = 1.0;
                x[(row + j, col + i)] = 1.0;
                out.push(x);
            }
        }
    }
    out
}

/// Nullity of the linear map `X ↦ constraint(X)` on `sp(2r, ℝ)`.
fn constrained_dimension(r: usize, constraint: impl Fn(&DMatrix<f64>) -> Vec<f64>) -> usize {
    let basis = symplectic_algebra_basis(r);
    let cols: Vec<nalgebra::DVector<f64>> = basis.iter().map(|x| nalgebra::DVector::from_vec(constraint(x))).collect();
    let rows = cols.first().map_or(0, |c| c.len());
    linalg::nullspace(&linalg::columns(rows, &cols), NULL_CUTOFF).len()
}

/// `dim sp(2r, ℝ)`, from the defining equations `XᵗJ + JX = 0`.
pub fn symplectic_algebra_dimension(r: usize) -> usize {
    let j = standard_symplectic_form(r);
    constrained_dimension(r, |x| (x.transpose() * &j + &j * x).as_slice().to_vec())
}

/// Dimension of the stabilizer in `Sp(2r, ℝ)` of `is` for `s` on the boundary cone:
/// the solutions of `αs = sδ`, `β = −sγs` in `sp(2r, ℝ)`.
pub fn isotropy_dimension(s: &DMatrix<f64>, tol: f64) -> Result<usize> {
    let r = s.nrows();
    if r == 0 || s.ncols() != r {
        return Err(Error::NotInLightCone {
            reason: "expected a nonempty square matrix".into(),
        });
    }
    let scale = s.amax();
    if symmetric_residual(s) > tol * scale.max(1.0) {
        return Err(Error::NotInLightCone {
            reason: "matrix is not symmetric".into(),
        });
    }
    let eig = ((s + s.transpose()) * 0.5).symmetric_eigen().eigenvalues;
    let thr = tol * scale;
    if eig.iter().any(|&l| l < -thr) {
        return Err(Error::NotInLightCone {
            reason: "matrix has a negative eigenvalue".into(),
        });
    }
    let rank = eig.iter().filter(|&&l| l > thr).count();
    if rank == 0 || rank == r {
        return Err(Error::NotInLightCone {
            reason: format!("rank {rank} is not strictly between 0 and {r}"),
        });
    }
    Ok(constrained_dimension(r, |x| {
        let v = |i, j| x.view((i, j), (r, r)).into_owned();
        let (alpha, beta, gamma, delta) = (v(0, 0), v(0, r), v(r, 0), v(r, r));
        let mut out: Vec<f64> = (&alpha * s - s * &delta).as_slice().to_vec();
        out.extend((&beta + s * &gamma * s).as_slice());
        out
    }))
}
