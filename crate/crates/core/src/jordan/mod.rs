//! Simple formally real Jordan algebras and their complexifications.
//!
//! Coordinates for the matrix families `H_r(K_n)`: the `r` diagonal entries
//! come first, followed by the off-diagonal entries `x^{jk}` (`j < k`,
//! lexicographic), each contributing `n` real coordinates in the `K_n` basis.
//! A coordinate vector therefore stands for the Hermitian matrix with
//! `x^{jk}` at `(j, k)` and `conj(x^{jk})` at `(k, j)`.
//!
//! The spin factor uses `(s, u) ∈ ℝ ⊕ ℝ^{n+1}` with
//! `(s, u)∘(t, v) = (st + ⟨u, v⟩, sv + tu)`. It is isomorphic to `H_2(K_n)` via
//! `α = s + u_0`, `β = s - u_0`, `x = (u_1, …, u_n)`.
//!
//! The Albert algebra is `H_3(K_8)` with the Cayley–Dickson octonion table of
//! [`division::Division`].

pub mod division;
mod realize;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::GlOmegaSpan;
use crate::linalg::{self, binomial, Scalar};
use division::Division;

pub use realize::HermitianRealization;

/// Coordinate vector of an element of V.
pub type Element = DVector<f64>;
/// Coordinate vector of an element of the complexification E = V ⊕ iV.
pub type ComplexElement = DVector<Complex64>;
/// Real operator on V in the coordinate basis.
pub type LinearOperator = DMatrix<f64>;
/// Complex operator on E in the coordinate basis.
pub type ComplexOperator = DMatrix<Complex64>;

/// Relative determinant threshold below which `P(z)` counts as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "spin")]
    SpinFactor,
    #[serde(rename = "hermR")]
    HermReal,
    #[serde(rename = "hermC")]
    HermComplex,
    #[serde(rename = "hermH")]
    HermQuaternion,
    #[serde(rename = "albert")]
    Albert,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::SpinFactor,
        Family::HermReal,
        Family::HermComplex,
        Family::HermQuaternion,
        Family::Albert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SpinFactor => "spin",
            Family::HermReal => "hermR",
            Family::HermComplex => "hermC",
            Family::HermQuaternion => "hermH",
            Family::Albert => "albert",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family `{s}` (expected spin, hermR, hermC, hermH or albert)"))
    }
}

/// Which simple formally real Jordan algebra, with its derived dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DescriptorRepr", into = "DescriptorRepr")]
pub struct AlgebraDescriptor {
    family: Family,
    rank: usize,
    peirce_constant: usize,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct DescriptorRepr {
    family: Family,
    rank: usize,
    n: usize,
}

impl TryFrom<DescriptorRepr> for AlgebraDescriptor {
    type Error = Error;

    fn try_from(r: DescriptorRepr) -> Result<Self> {
        make_algebra(r.family, r.rank, r.n)
    }
}

impl From<AlgebraDescriptor> for DescriptorRepr {
    fn from(d: AlgebraDescriptor) -> Self {
        DescriptorRepr {
            family: d.family,
            rank: d.rank,
            n: d.peirce_constant,
        }
    }
}

/// Validate `(family, r, n)` against the classification list.
pub fn make_algebra(family: Family, rank: usize, peirce_constant: usize) -> Result<AlgebraDescriptor> {
    let ok = match family {
        Family::SpinFactor => rank == 2 && peirce_constant >= 1,
        Family::HermReal => rank >= 1 && peirce_constant == 1,
        Family::HermComplex => rank >= 1 && peirce_constant == 2,
        Family::HermQuaternion => rank >= 1 && peirce_constant == 4,
        Family::Albert => rank == 3 && peirce_constant == 8,
    };
    if !ok {
        return Err(Error::Classification {
            family: family.name().to_string(),
            rank,
            n: peirce_constant,
        });
    }
    Ok(AlgebraDescriptor {
        family,
        rank,
        peirce_constant,
        dim: rank + binomial(rank, 2) * peirce_constant,
    })
}

impl AlgebraDescriptor {
    pub fn spin(n: usize) -> Result<Self> {
        make_algebra(Family::SpinFactor, 2, n)
    }

    pub fn herm_real(r: usize) -> Result<Self> {
        make_algebra(Family::HermReal, r, 1)
    }

    pub fn herm_complex(r: usize) -> Result<Self> {
        make_algebra(Family::HermComplex, r, 2)
    }

    pub fn herm_quaternion(r: usize) -> Result<Self> {
        make_algebra(Family::HermQuaternion, r, 4)
    }

    pub fn albert() -> Self {
        make_algebra(Family::Albert, 3, 8).expect("Albert algebra is classified")
    }

    /// Build a descriptor from a family and whichever of rank / n is relevant.
    pub fn from_family(family: Family, rank: Option<usize>, n: Option<usize>) -> Result<Self> {
        match family {
            Family::SpinFactor => Self::spin(n.unwrap_or(1)),
            Family::HermReal => Self::herm_real(rank.unwrap_or(2)),
            Family::HermComplex => Self::herm_complex(rank.unwrap_or(2)),
            Family::HermQuaternion => Self::herm_quaternion(rank.unwrap_or(2)),
            Family::Albert => make_algebra(Family::Albert, rank.unwrap_or(3), n.unwrap_or(8)),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Common dimension of the off-diagonal Peirce spaces.
    pub fn peirce_constant(&self) -> usize {
        self.peirce_constant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::SpinFactor => write!(f, "spin(n={})", self.peirce_constant),
            Family::Albert => write!(f, "albert"),
            fam => write!(f, "{fam}(r={})", self.rank),
        }
    }
}

struct Tables {
    descriptor: AlgebraDescriptor,
    division: Division,
    /// `left[i] = L(b_i)` for the coordinate basis `b_i`.
    left: Vec<LinearOperator>,
    gram: DMatrix<f64>,
    gram_half: DMatrix<f64>,
    gram_half_inv: DMatrix<f64>,
    unit: Element,
    gl_omega: OnceLock<GlOmegaSpan>,
}

/// A Jordan algebra together with its multiplication tables and trace form.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Algebra {
    inner: Arc<Tables>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("descriptor", &self.inner.descriptor).finish()
    }
}

impl Algebra {
    pub fn new(descriptor: AlgebraDescriptor) -> Self {
        let n = descriptor.peirce_constant;
        let division = Division::new(if descriptor.family == Family::SpinFactor { 1 } else { n });
        let d = descriptor.dim;
        let mut this = Tables {
            descriptor,
            division,
            left: Vec::new(),
            gram: DMatrix::zeros(d, d),
            gram_half: DMatrix::zeros(d, d),
            gram_half_inv: DMatrix::zeros(d, d),
            unit: Element::zeros(d),
            gl_omega: OnceLock::new(),
        };
        let basis: Vec<Element> = (0..d).map(|i| Element::from_fn(d, |k, _| f64::from(u8::from(k == i)))).collect();
        this.left = basis
            .iter()
            .map(|bi| {
                let mut m = LinearOperator::zeros(d, d);
                for (j, bj) in basis.iter().enumerate() {
                    m.set_column(j, &Element::from_vec(direct_product(&this, bi.as_slice(), bj.as_slice())));
                }
                m
            })
            .collect();
        let traces = DVector::from_iterator(d, this.left.iter().map(|l| l.trace()));
        this.gram = DMatrix::from_fn(d, d, |i, j| traces.dot(&this.left[i].column(j)));
        let (h, hi) = linalg::sqrt_and_inv_sqrt(&this.gram);
        this.gram_half = h;
        this.gram_half_inv = hi;
        this.unit = unit_coords(&descriptor);
        Self { inner: Arc::new(this) }
    }

    /// Shorthand for `Algebra::new(make_algebra(..)?)`.
    pub fn build(family: Family, rank: usize, n: usize) -> Result<Self> {
        Ok(Self::new(make_algebra(family, rank, n)?))
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.inner.descriptor
    }

    pub fn dim(&self) -> usize {
        self.inner.descriptor.dim
    }

    pub fn rank(&self) -> usize {
        self.inner.descriptor.rank
    }

    pub fn peirce_constant(&self) -> usize {
        self.inner.descriptor.peirce_constant
    }

    pub fn family(&self) -> Family {
        self.inner.descriptor.family
    }

    pub fn unit(&self) -> Element {
        self.inner.unit.clone()
    }

    /// Gram matrix of the trace form in the coordinate basis.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.inner.gram
    }

    pub(crate) fn gram_half(&self) -> &DMatrix<f64> {
        &self.inner.gram_half
    }

    pub(crate) fn gram_half_inv(&self) -> &DMatrix<f64> {
        &self.inner.gram_half_inv
    }

    /// `L(b_i)` for every coordinate basis vector.
    pub fn basis_multiplications(&self) -> &[LinearOperator] {
        &self.inner.left
    }

    pub(crate) fn gl_omega_cell(&self) -> &OnceLock<GlOmegaSpan> {
        &self.inner.gl_omega
    }

    pub(crate) fn check<T>(&self, v: &DVector<T>) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// The standard frame: diagonal matrix units, or `½(1, ±1, 0, …)` for the spin factor.
    pub fn diagonal_frame(&self) -> Vec<Element> {
        let d = self.dim();
        match self.family() {
            Family::SpinFactor => [1.0, -1.0]
                .iter()
                .map(|&sgn| {
                    let mut e = Element::zeros(d);
                    e[0] = 0.5;
                    e[1] = 0.5 * sgn;
                    e
                })
                .collect(),
            _ => (0..self.rank())
                .map(|j| {
                    let mut e = Element::zeros(d);
                    e[j] = 1.0;
                    e
                })
                .collect(),
        }
    }

    /// `Σ λ_j e_j` on the diagonal frame.
    pub fn diagonal(&self, eigenvalues: &[f64]) -> Result<Element> {
        let frame = self.diagonal_frame();
        if eigenvalues.len() != frame.len() {
            return Err(Error::DimensionMismatch {
                expected: frame.len(),
                found: eigenvalues.len(),
            });
        }
        Ok(frame
            .iter()
            .zip(eigenvalues)
            .fold(Element::zeros(self.dim()), |acc, (e, &l)| acc + e * l))
    }

    pub fn jordan_product<T: Scalar>(&self, x: &DVector<T>, y: &DVector<T>) -> Result<DVector<T>> {
        self.check(x)?;
        self.check(y)?;
        Ok(DVector::from_vec(direct_product(&self.inner, x.as_slice(), y.as_slice())))
    }

    pub fn square<T: Scalar>(&self, x: &DVector<T>) -> Result<DVector<T>> {
        self.jordan_product(x, x)
    }

    /// Jordan power `x^k` (`x^0 = e`), well defined by power associativity.
    pub fn power<T: Scalar>(&self, x: &DVector<T>, k: usize) -> Result<DVector<T>> {
        self.check(x)?;
        let mut acc = self.unit().map(T::from_real);
        for _ in 0..k {
            acc = self.jordan_product(x, &acc)?;
        }
        Ok(acc)
    }

    /// Multiplication operator `L(x): y ↦ x∘y`.
    pub fn lmul<T: Scalar>(&self, x: &DVector<T>) -> Result<DMatrix<T>> {
        self.check(x)?;
        let d = self.dim();
        let mut m = DMatrix::<T>::zeros(d, d);
        for (xi, li) in x.iter().zip(&self.inner.left) {
            if *xi == T::zero() {
                continue;
            }
            for (dst, &v) in m.iter_mut().zip(li.iter()) {
                if v != 0.0 {
                    *dst += *xi * T::from_real(v);
                }
            }
        }
        Ok(m)
    }

    /// Quadratic representation `P(x) = 2L(x)² − L(x²)`.
    pub fn pquad<T: Scalar>(&self, x: &DVector<T>) -> Result<DMatrix<T>> {
        let lx = self.lmul(x)?;
        let lx2 = self.lmul(&self.square(x)?)?;
        Ok(&lx * &lx * T::from_real(2.0) - lx2)
    }

    /// Polarized quadratic representation `P(x, y) = L(x)L(y) + L(y)L(x) − L(x∘y)`.
    pub fn pquad2<T: Scalar>(&self, x: &DVector<T>, y: &DVector<T>) -> Result<DMatrix<T>> {
        let lx = self.lmul(x)?;
        let ly = self.lmul(y)?;
        let lxy = self.lmul(&self.jordan_product(x, y)?)?;
        Ok(&lx * &ly + &ly * &lx - lxy)
    }

    /// Trace form `(x|y) = tr L(x∘y)`, extended complex-bilinearly.
    pub fn trace_form<T: Scalar>(&self, x: &DVector<T>, y: &DVector<T>) -> Result<T> {
        self.check(x)?;
        self.check(y)?;
        let g = self.inner.gram.map(T::from_real);
        Ok((x.transpose() * g * y)[(0, 0)])
    }

    /// Hermitian extension `(z | w*)` of the trace form, conjugate-linear in `z`.
    pub fn hermitian_form(&self, z: &ComplexElement, w: &ComplexElement) -> Result<Complex64> {
        self.check(z)?;
        self.check(w)?;
        let g = linalg::to_complex_mat(&self.inner.gram);
        Ok((z.adjoint() * g * w)[(0, 0)])
    }

    /// Norm induced by the (Hermitian) trace form.
    pub fn norm<T: Scalar>(&self, x: &DVector<T>) -> f64 {
        let g = self.inner.gram.map(T::from_real);
        (x.adjoint() * g * x)[(0, 0)].real().max(0.0).sqrt()
    }

    /// The conjugate-linear involution `x + iy ↦ x − iy`.
    pub fn star(&self, z: &ComplexElement) -> Result<ComplexElement> {
        self.check(z)?;
        Ok(z.map(|c| c.conj()))
    }

    /// Jordan inverse, computed as `P(z)⁻¹ z`.
    ///
    /// Singular when the geometric mean of `|det P(z)|` relative to the
    /// largest entry of `P(z)` drops below [`SINGULAR_TOL`].
    pub fn jordan_inverse<T: Scalar>(&self, z: &DVector<T>) -> Result<DVector<T>> {
        let p = self.pquad(z)?;
        let scale = p.iter().fold(0.0, |acc: f64, v| acc.max(v.modulus()));
        if scale == 0.0 {
            return Err(Error::SingularElement { measure: 0.0 });
        }
        let lu = p.clone().lu();
        let det = lu.determinant().modulus();
        let measure = det.powf(1.0 / self.dim() as f64) / scale;
        if !(measure >= SINGULAR_TOL) {
            return Err(Error::SingularElement { measure });
        }
        lu.solve(z).ok_or(Error::SingularElement { measure })
    }

    /// Jordan triple product `{xyz} = P(x, z) y*`.
    pub fn triple_product(&self, x: &ComplexElement, y: &ComplexElement, z: &ComplexElement) -> Result<ComplexElement> {
        let p = self.pquad2(x, z)?;
        Ok(p * self.star(y)?)
    }

    /// Jordan trace: the sum of the eigenvalues, `Tr L(x) / (1 + (r−1)n/2)`.
    pub fn jordan_trace<T: Scalar>(&self, x: &DVector<T>) -> Result<T> {
        let r = self.rank() as f64;
        let n = self.peirce_constant() as f64;
        let denom = 1.0 + (r - 1.0) * n / 2.0;
        Ok(self.lmul(x)?.trace() * T::from_real(1.0 / denom))
    }

    /// Matrix realization for the associative families (`None` otherwise).
    pub fn hermitian_realization(&self) -> Option<HermitianRealization> {
        HermitianRealization::for_algebra(self)
    }
}

fn unit_coords(desc: &AlgebraDescriptor) -> Element {
    let mut e = Element::zeros(desc.dim);
    match desc.family {
        Family::SpinFactor => e[0] = 1.0,
        _ => e.rows_mut(0, desc.rank).fill(1.0),
    }
    e
}

/// Start of the `n` coordinates of the off-diagonal entry `(j, k)`, `j < k`.
pub(crate) fn offdiag_offset(r: usize, n: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < r);
    let pair = j * (2 * r - j - 1) / 2 + (k - j - 1);
    r + pair * n
}

fn direct_product<T: Scalar>(t: &Tables, x: &[T], y: &[T]) -> Vec<T> {
    match t.descriptor.family {
        Family::SpinFactor => {
            let mut out = vec![T::zero(); x.len()];
            let mut dot = x[0] * y[0];
            for i in 1..x.len() {
                dot += x[i] * y[i];
                out[i] = x[0] * y[i] + y[0] * x[i];
            }
            out[0] = dot;
            out
        }
        _ => herm_product(t, x, y),
    }
}

fn herm_entries<T: Scalar>(t: &Tables, v: &[T]) -> Vec<Vec<T>> {
    let r = t.descriptor.rank;
    let n = t.descriptor.peirce_constant;
    let mut entries = vec![Vec::new(); r * r];
    for i in 0..r {
        for j in 0..r {
            entries[i * r + j] = match i.cmp(&j) {
                std::cmp::Ordering::Equal => {
                    let mut e = vec![T::zero(); n];
                    e[0] = v[i];
                    e
                }
                std::cmp::Ordering::Less => {
                    let o = offdiag_offset(r, n, i, j);
                    v[o..o + n].to_vec()
                }
                std::cmp::Ordering::Greater => {
                    let o = offdiag_offset(r, n, j, i);
                    t.division.conj(&v[o..o + n])
                }
            };
        }
    }
    entries
}

fn herm_product<T: Scalar>(t: &Tables, x: &[T], y: &[T]) -> Vec<T> {
    let r = t.descriptor.rank;
    let n = t.descriptor.peirce_constant;
    let xe = herm_entries(t, x);
    let ye = herm_entries(t, y);
    let half = T::from_real(0.5);
    let mut out = vec![T::zero(); x.len()];
    for i in 0..r {
        for k in i..r {
            let mut s = vec![T::zero(); n];
            for j in 0..r {
                t.division.mul_acc(&xe[i * r + j], &ye[j * r + k], half, &mut s);
                t.division.mul_acc(&ye[i * r + j], &xe[j * r + k], half, &mut s);
            }
            if i == k {
                out[i] = s[0];
            } else {
                let o = offdiag_offset(r, n, i, k);
                out[o..o + n].copy_from_slice(&s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn desk() -> Vec<Algebra> {
        vec![
            Algebra::build(Family::HermReal, 1, 1).unwrap(),
            Algebra::build(Family::SpinFactor, 2, 3).unwrap(),
            Algebra::build(Family::HermReal, 3, 1).unwrap(),
            Algebra::build(Family::HermComplex, 3, 2).unwrap(),
            Algebra::build(Family::HermQuaternion, 3, 4).unwrap(),
            Algebra::new(AlgebraDescriptor::albert()),
        ]
    }

    #[test]
    fn classification_and_dimensions() {
        assert_eq!(make_algebra(Family::HermComplex, 3, 2).unwrap().dim(), 9);
        assert_eq!(make_algebra(Family::Albert, 3, 8).unwrap().dim(), 27);
        assert_eq!(make_algebra(Family::HermReal, 1, 1).unwrap().dim(), 1);
        assert_eq!(make_algebra(Family::SpinFactor, 2, 5).unwrap().dim(), 7);
        assert!(matches!(make_algebra(Family::Albert, 4, 8), Err(Error::Classification { .. })));
        assert!(make_algebra(Family::SpinFactor, 3, 1).is_err());
        assert!(make_algebra(Family::HermComplex, 3, 4).is_err());
        assert!(make_algebra(Family::SpinFactor, 2, 0).is_err());
        assert!(make_algebra(Family::HermReal, 0, 1).is_err());
    }

    #[test]
    fn descriptor_json_shape() {
        let d = AlgebraDescriptor::herm_complex(3).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"family":"hermC","rank":3,"n":2}"#);
        let back: AlgebraDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<AlgebraDescriptor>(r#"{"family":"albert","rank":4,"n":8}"#).is_err());
    }

    #[test]
    fn unit_acts_as_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for alg in desk() {
            let e = alg.unit();
            let x = sample::element(&alg, &mut rng);
            assert_abs_diff_eq!(alg.jordan_product(&e, &x).unwrap(), x, epsilon = 1e-13);
            let le = alg.lmul(&e).unwrap();
            assert_abs_diff_eq!(le, LinearOperator::identity(alg.dim(), alg.dim()), epsilon = 1e-13);
            assert_abs_diff_eq!(alg.lmul(&x).unwrap() * &e, x, epsilon = 1e-13);
            let pe = alg.pquad(&e).unwrap();
            assert_abs_diff_eq!(pe, LinearOperator::identity(alg.dim(), alg.dim()), epsilon = 1e-13);
            assert_abs_diff_eq!(alg.trace_form(&e, &e).unwrap(), alg.dim() as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn orthogonal_idempotents_multiply_to_zero() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let a = Element::from_vec(vec![1.0, 0.0, 0.0]);
        let b = Element::from_vec(vec![0.0, 1.0, 0.0]);
        assert_abs_diff_eq!(alg.jordan_product(&a, &b).unwrap(), Element::zeros(3), epsilon = 0.0);
    }

    #[test]
    fn spin_product_formula() {
        let alg = Algebra::build(Family::SpinFactor, 2, 2).unwrap();
        let x = Element::from_vec(vec![0.5, 1.0, -2.0, 3.0]);
        let y = Element::from_vec(vec![-1.5, 0.25, 4.0, 1.0]);
        let p = alg.jordan_product(&x, &y).unwrap();
        let dot = 1.0 * 0.25 + (-2.0) * 4.0 + 3.0 * 1.0;
        let expected = Element::from_vec(vec![
            0.5 * -1.5 + dot,
            0.5 * 0.25 + -1.5 * 1.0,
            0.5 * 4.0 + -1.5 * -2.0,
            0.5 * 1.0 + -1.5 * 3.0,
        ]);
        assert_abs_diff_eq!(p, expected, epsilon = 1e-14);
    }

    #[test]
    fn spin_matches_two_by_two_hermitian_matrices() {
        // The documented isomorphism spin(n) -> H_2(K_n) is multiplicative for n = 1, 2, 4.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (fam, n) in [(Family::HermReal, 1), (Family::HermComplex, 2), (Family::HermQuaternion, 4)] {
            let spin = Algebra::build(Family::SpinFactor, 2, n).unwrap();
            let herm = Algebra::build(fam, 2, n).unwrap();
            let to_herm = |x: &Element| -> Element {
                let mut h = Element::zeros(2 + n);
                h[0] = x[0] + x[1];
                h[1] = x[0] - x[1];
                for i in 0..n {
                    h[2 + i] = x[2 + i];
                }
                h
            };
            for _ in 0..20 {
                let x = sample::element(&spin, &mut rng);
                let y = sample::element(&spin, &mut rng);
                let lhs = to_herm(&spin.jordan_product(&x, &y).unwrap());
                let rhs = herm.jordan_product(&to_herm(&x), &to_herm(&y)).unwrap();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn jordan_identity_and_power_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alg in desk() {
            for _ in 0..100 {
                let a = sample::element(&alg, &mut rng);
                let la = alg.lmul(&a).unwrap();
                let la2 = alg.lmul(&alg.square(&a).unwrap()).unwrap();
                let comm = &la * &la2 - &la2 * &la;
                assert!(comm.camax() < 1e-10, "{:?}: {}", alg.descriptor(), comm.camax());
                let a2 = alg.square(&a).unwrap();
                let lhs = alg.square(&a2).unwrap();
                let rhs = alg.jordan_product(&a, &alg.jordan_product(&a, &a2).unwrap()).unwrap();
                assert!((lhs - rhs).camax() < 1e-10);
            }
        }
    }

    #[test]
    fn quadratic_representation_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for alg in desk() {
            for _ in 0..20 {
                let a = sample::element(&alg, &mut rng);
                let la = alg.lmul(&a).unwrap();
                let expected = &la * &la * 2.0 - alg.lmul(&alg.square(&a).unwrap()).unwrap();
                assert!((alg.pquad(&a).unwrap() - expected).camax() < 1e-12);
                let pe = alg.pquad(&a).unwrap() * alg.unit();
                assert!((pe - alg.square(&a).unwrap()).camax() < 1e-12);
                let b = sample::element(&alg, &mut rng);
                let pab = alg.pquad2(&a, &b).unwrap();
                assert!((pab - alg.pquad2(&b, &a).unwrap()).camax() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_quadratic_representation_is_axa() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let alg = Algebra::build(Family::HermComplex, 3, 2).unwrap();
        let real = alg.hermitian_realization().unwrap();
        for _ in 0..10 {
            let a = sample::element(&alg, &mut rng);
            let x = sample::element(&alg, &mut rng);
            let am = real.to_matrix(&a);
            let xm = real.to_matrix(&x);
            let axa = real.from_matrix(&(&am * &xm * &am));
            assert_abs_diff_eq!(alg.pquad(&a).unwrap() * &x, axa, epsilon = 1e-11);
        }
    }

    #[test]
    fn trace_form_positive_and_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for alg in desk() {
            let min_eig = alg.gram().clone().symmetric_eigen().eigenvalues.min();
            assert!(min_eig > 0.0);
            for _ in 0..100 {
                let x = sample::element(&alg, &mut rng);
                assert!(alg.trace_form(&x, &x).unwrap() > 0.0);
            }
            for _ in 0..20 {
                let x = sample::element(&alg, &mut rng);
                let y = sample::element(&alg, &mut rng);
                let z = sample::element(&alg, &mut rng);
                let lhs = alg.trace_form(&alg.jordan_product(&x, &z).unwrap(), &y).unwrap();
                let rhs = alg.trace_form(&z, &alg.jordan_product(&x, &y).unwrap()).unwrap();
                assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()), "{:?} {lhs} {rhs}", alg.descriptor());
            }
        }
    }

    #[test]
    fn self_duality_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for alg in desk() {
            let cone: Vec<Element> = (0..50).map(|_| sample::cone_element(&alg, &mut rng)).collect();
            for w in &cone {
                for w2 in cone.iter().take(50) {
                    assert!(alg.trace_form(w, w2).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn star_is_an_algebra_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for alg in desk() {
            let v = sample::element(&alg, &mut rng);
            let vc = linalg::to_complex_vec(&v);
            assert_eq!(alg.star(&vc).unwrap(), vc);
            let iv = vc.map(|c| c * Complex64::i());
            assert_eq!(alg.star(&iv).unwrap(), -iv.clone());
            for _ in 0..10 {
                let z = sample::complex_element(&alg, &mut rng);
                let w = sample::complex_element(&alg, &mut rng);
                let lhs = alg.star(&(alg.pquad(&z).unwrap() * &w)).unwrap();
                let rhs = alg.pquad(&alg.star(&z).unwrap()).unwrap() * alg.star(&w).unwrap();
                assert!((lhs - rhs).camax() < 1e-10);
                let lhs = alg.star(&alg.jordan_product(&z, &w).unwrap()).unwrap();
                let rhs = alg.jordan_product(&alg.star(&z).unwrap(), &alg.star(&w).unwrap()).unwrap();
                assert!((lhs - rhs).camax() < 1e-12);
                assert_eq!(alg.star(&alg.star(&z).unwrap()).unwrap(), z);
            }
        }
    }

    #[test]
    fn inverses() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let e = alg.unit();
        assert_abs_diff_eq!(alg.jordan_inverse(&e).unwrap(), e.clone(), epsilon = 1e-14);
        let t = -2.5;
        assert_abs_diff_eq!(alg.jordan_inverse(&(&e * t)).unwrap(), &e / t, epsilon = 1e-14);
        let x = Element::from_vec(vec![2.0, 4.0, 0.0]);
        assert_abs_diff_eq!(
            alg.jordan_inverse(&x).unwrap(),
            Element::from_vec(vec![0.5, 0.25, 0.0]),
            epsilon = 1e-14
        );
        let singular = Element::from_vec(vec![1.0, 0.0, 0.0]);
        assert!(matches!(alg.jordan_inverse(&singular), Err(Error::SingularElement { .. })));
        assert!(alg.jordan_inverse(&Element::zeros(3)).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for alg in desk() {
            for _ in 0..10 {
                let z = sample::complex_element(&alg, &mut rng);
                let w = alg.jordan_inverse(&z).unwrap();
                let ez = alg.jordan_product(&w, &z).unwrap();
                assert!((ez - alg.unit().map(|v| Complex64::new(v, 0.0))).camax() < 1e-8);
            }
        }
    }

    #[test]
    fn triple_product_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for alg in desk() {
            let e = linalg::to_complex_vec(&alg.unit());
            for _ in 0..5 {
                let z = sample::complex_element(&alg, &mut rng);
                let w = sample::complex_element(&alg, &mut rng);
                let zez = alg.triple_product(&z, &e, &z).unwrap();
                assert!((zez - alg.square(&z).unwrap()).camax() < 1e-11);
                let eze = alg.triple_product(&e, &z, &e).unwrap();
                assert!((eze - alg.star(&z).unwrap()).camax() < 1e-12);
                let zwz = alg.triple_product(&z, &w, &z).unwrap();
                assert!((zwz - alg.pquad(&z).unwrap() * alg.star(&w).unwrap()).camax() < 1e-11);
                let zew = alg.triple_product(&z, &e, &w).unwrap();
                assert!((zew - alg.jordan_product(&z, &w).unwrap()).camax() < 1e-11);
            }
            let y = linalg::to_complex_vec(&sample::element(&alg, &mut rng));
            assert!((alg.triple_product(&e, &y, &e).unwrap() - &y).camax() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let x = Element::zeros(4);
        assert!(matches!(
            alg.jordan_product(&x, &x),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
        assert!(alg.lmul(&x).is_err());
        assert!(alg.trace_form(&x, &alg.unit()).is_err());
    }
}
