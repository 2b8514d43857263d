//! CR geometry of the tube manifolds `M = C ⊕ iV` over the cone orbits
//! `C = C_{p,q}`: holomorphic tangent spaces, Levi form and kernel, the
//! map `β`, the kernel chain, minimality and germ-automorphism counts.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fields::{self, GradedField};
use crate::jordan::{Algebra, AlgebraDescriptor, ComplexElement, ComplexOperator, Element, Family, LinearOperator};
use crate::json;
use crate::linalg::{self, binomial, NULL_CUTOFF};
use crate::spectral::{self, JointPeirce, Signature, SpectralData, DEFAULT_TOL};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Residual allowed when checking membership of an input vector in a subspace.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Which subspace a [`SubspaceBasis`] spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceLabel {
    ConeTangent,
    HolomorphicTangent,
    PeirceOne,
    PeirceHalf,
    PeirceZero,
    LeviKernel,
    Chain(usize),
}

impl fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceLabel::ConeTangent => write!(f, "T_aC"),
            SubspaceLabel::HolomorphicTangent => write!(f, "H_aM"),
            SubspaceLabel::PeirceOne => write!(f, "E_1"),
            SubspaceLabel::PeirceHalf => write!(f, "E_1/2"),
            SubspaceLabel::PeirceZero => write!(f, "E_0"),
            SubspaceLabel::LeviKernel => write!(f, "K_aM"),
            SubspaceLabel::Chain(k) => write!(f, "H^{k}"),
        }
    }
}

/// Basis of a subspace of `E`, orthonormal for the Hermitian trace form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    pub label: SubspaceLabel,
    #[serde(with = "json::complex_vectors")]
    pub vectors: Vec<ComplexElement>,
}

impl SubspaceBasis {
    fn from_real(label: SubspaceLabel, vectors: Vec<Element>) -> Self {
        Self {
            label,
            vectors: vectors.iter().map(linalg::to_complex_vec).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_residual(&self, alg: &Algebra) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, x) in self.vectors.iter().enumerate() {
            for (j, y) in self.vectors.iter().enumerate() {
                let g = alg.hermitian_form(x, y)?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        Ok(worst)
    }

    /// Worst relative distance of a member from the range of `projection`.
    pub fn block_residual(&self, projection: &LinearOperator) -> f64 {
        let p = linalg::to_complex_mat(projection);
        self.vectors
            .iter()
            .map(|v| (v - &p * v).camax() / v.camax().max(1.0))
            .fold(0.0, f64::max)
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, alg: &Algebra, z: &ComplexElement) -> Result<ComplexElement> {
        let mut out = ComplexElement::zeros(z.len());
        for v in &self.vectors {
            out += v * alg.hermitian_form(v, z)?;
        }
        Ok(out)
    }

    fn combine(&self, label: SubspaceLabel, coeffs: &[ComplexElement]) -> Self {
        let d = self.vectors.first().map_or(0, |v| v.len());
        let vectors = coeffs
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&self.vectors)
                    .fold(ComplexElement::zeros(d), |acc, (ci, v)| acc + v * *ci)
            })
            .collect();
        Self { label, vectors }
    }
}

/// A tube manifold through a base point of a cone orbit.
///
/// The frame is ordered with the support (nonzero eigenvalues) first, so the
/// joint Peirce blocks `V_jk` with `j < ρ` make up `T_aC`.
#[derive(Debug, Clone)]
pub struct TubeOrbit {
    algebra: Algebra,
    signature: Signature,
    base_point: Element,
    spectrum: SpectralData,
    joint: JointPeirce,
    pi_one: LinearOperator,
    pi_half: LinearOperator,
    pi_zero: LinearOperator,
    /// `L(a)⁻¹` on `H_aM`, zero on `E₀`.
    lmul_inverse: LinearOperator,
    /// `P(a)⁻¹` on `E₁`, zero elsewhere.
    pquad_inverse: LinearOperator,
}

/// Canonical base point eigenvalues: `1, …, p`, then `−(p + k + ½)`, then zeros.
pub fn canonical_eigenvalues(r: usize, p: usize, q: usize) -> Vec<f64> {
    let mut l: Vec<f64> = (1..=p).map(|j| j as f64).collect();
    l.extend((1..=q).map(|k| -((p + k) as f64 + 0.5)));
    l.resize(r, 0.0);
    l
}

fn check_signature(r: usize, p: usize, q: usize) -> Result<()> {
    if p + q > r {
        return Err(Error::InvalidSignature {
            p,
            q,
            rank: r,
            reason: "p + q exceeds the rank".into(),
        });
    }
    Ok(())
}

/// The tube over `C_{p,q}` through the canonical base point on the diagonal frame.
pub fn make_orbit(alg: &Algebra, p: usize, q: usize) -> Result<TubeOrbit> {
    check_signature(alg.rank(), p, q)?;
    let eigenvalues = canonical_eigenvalues(alg.rank(), p, q);
    let spectrum = SpectralData {
        frame: alg.diagonal_frame(),
        eigenvalues,
    };
    let a = alg.diagonal(&spectrum.eigenvalues)?;
    let orbit = TubeOrbit::from_spectrum(alg, a, spectrum, DEFAULT_TOL)?;
    let found = spectral::orbit_signature(alg, &orbit.base_point, DEFAULT_TOL)?;
    if found != orbit.signature {
        return Err(Error::NumericalFailure {
            context: format!("base point classified as {found}, expected ({p}, {q})"),
            residual: 0.0,
        });
    }
    Ok(orbit)
}

impl TubeOrbit {
    /// The tube through an arbitrary base point satisfying `λ_j + λ_k = 0 ⇒ λ_j = λ_k = 0`.
    pub fn at_point(alg: &Algebra, a: &Element, tol: f64) -> Result<Self> {
        let data = spectral::spectral_decompose(alg, a, tol)?;
        Self::from_spectrum(alg, a.clone(), data, tol)
    }

    fn from_spectrum(alg: &Algebra, a: Element, data: SpectralData, tol: f64) -> Result<Self> {
        data.validate(alg, &a, tol.max(DEFAULT_TOL))?;
        let signature = spectral::signature_of(&data, tol)?;
        spectral::check_condition_star(&data.eigenvalues, tol)?;
        let thr = tol * data.max_abs_eigenvalue();
        let mut order: Vec<usize> = (0..data.eigenvalues.len()).collect();
        order.sort_by_key(|&i| data.eigenvalues[i].abs() <= thr);
        let spectrum = SpectralData {
            eigenvalues: order
                .iter()
                .map(|&i| if data.eigenvalues[i].abs() <= thr { 0.0 } else { data.eigenvalues[i] })
                .collect(),
            frame: order.iter().map(|&i| data.frame[i].clone()).collect(),
        };
        let joint = spectral::joint_peirce(alg, &spectrum.frame)?;
        let rho = signature.rank();
        let d = alg.dim();
        let mut lmul_inverse = LinearOperator::zeros(d, d);
        let mut pquad_inverse = LinearOperator::zeros(d, d);
        let l = &spectrum.eigenvalues;
        for b in joint.blocks() {
            if b.j < rho {
                lmul_inverse += &b.projection * (2.0 / (l[b.j] + l[b.k]));
            }
            if b.k < rho {
                pquad_inverse += &b.projection * (1.0 / (l[b.j] * l[b.k]));
            }
        }
        Ok(Self {
            algebra: alg.clone(),
            signature,
            pi_one: joint.projection_onto(|_, k| k < rho),
            pi_half: joint.projection_onto(|j, k| j < rho && k >= rho),
            pi_zero: joint.projection_onto(|j, _| j >= rho),
            base_point: a,
            spectrum,
            joint,
            lmul_inverse,
            pquad_inverse,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        self.algebra.descriptor()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn base_point(&self) -> &Element {
        &self.base_point
    }

    /// Spectrum of the base point, support first.
    pub fn spectrum(&self) -> &SpectralData {
        &self.spectrum
    }

    pub fn joint_peirce(&self) -> &JointPeirce {
        &self.joint
    }

    /// `ρ = p + q`.
    pub fn rank(&self) -> usize {
        self.signature.rank()
    }

    /// `ρ' = r − ρ`.
    pub fn corank(&self) -> usize {
        self.algebra.rank() - self.rank()
    }

    pub fn is_totally_real(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_open(&self) -> bool {
        self.corank() == 0
    }

    /// Projections onto `E₁`, `E½` and `E₀` of the support idempotent.
    pub fn projections(&self) -> [&LinearOperator; 3] {
        [&self.pi_one, &self.pi_half, &self.pi_zero]
    }

    fn pi_h(&self) -> LinearOperator {
        &self.pi_one + &self.pi_half
    }

    fn basis(&self, label: SubspaceLabel, projection: &LinearOperator) -> SubspaceBasis {
        SubspaceBasis::from_real(label, spectral::projection_basis(&self.algebra, projection))
    }

    fn require(&self, z: &ComplexElement, projection: &LinearOperator) -> Result<f64> {
        self.algebra.check(z)?;
        let p = linalg::to_complex_mat(projection);
        Ok((z - &p * z).camax() / z.camax().max(1.0))
    }

    fn require_tangent(&self, z: &ComplexElement) -> Result<()> {
        let residual = self.require(z, &self.pi_h())?;
        if residual > MEMBERSHIP_TOL {
            return Err(Error::NotInHolomorphicTangent { residual });
        }
        Ok(())
    }

    fn require_block(&self, z: &ComplexElement, projection: &LinearOperator, block: &str) -> Result<()> {
        let residual = self.require(z, projection)?;
        if residual > MEMBERSHIP_TOL {
            return Err(Error::BlockViolation {
                block: block.into(),
                residual,
            });
        }
        Ok(())
    }
}

/// `T_aC = V₁ ⊕ V½`, `H_aM = E₁ ⊕ E½` and the normal model `E₀ ≅ E/H_aM`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentData {
    pub cone_tangent: SubspaceBasis,
    pub holomorphic_tangent: SubspaceBasis,
    pub normal: SubspaceBasis,
}

pub fn tangent_data(orbit: &TubeOrbit) -> TangentData {
    let pi_h = orbit.pi_h();
    let cone_tangent = orbit.basis(SubspaceLabel::ConeTangent, &pi_h);
    let holomorphic_tangent = SubspaceBasis {
        label: SubspaceLabel::HolomorphicTangent,
        vectors: cone_tangent.vectors.clone(),
    };
    TangentData {
        cone_tangent,
        holomorphic_tangent,
        normal: orbit.basis(SubspaceLabel::PeirceZero, &orbit.pi_zero),
    }
}

/// Bases of the Peirce spaces `E₁`, `E½`, `E₀` of the support idempotent.
pub fn peirce_bases(orbit: &TubeOrbit) -> [SubspaceBasis; 3] {
    [
        orbit.basis(SubspaceLabel::PeirceOne, &orbit.pi_one),
        orbit.basis(SubspaceLabel::PeirceHalf, &orbit.pi_half),
        orbit.basis(SubspaceLabel::PeirceZero, &orbit.pi_zero),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrDimensions {
    pub crdim: usize,
    pub crcodim: usize,
    pub levi_kernel_dim: usize,
}

/// CR dimension, CR codimension and Levi-kernel dimension in closed form.
pub fn cr_dimensions(desc: &AlgebraDescriptor, p: usize, q: usize) -> Result<CrDimensions> {
    let r = desc.rank();
    check_signature(r, p, q)?;
    let n = desc.peirce_constant();
    let rho = p + q;
    let corank = r - rho;
    let kernel = rho + binomial(rho, 2) * n;
    Ok(CrDimensions {
        crdim: kernel + rho * corank * n,
        crcodim: corank + binomial(corank, 2) * n,
        levi_kernel_dim: kernel,
    })
}

/// `Λ_a(v, w) = π₀(v* ∘ L(a)⁻¹ w)` for `v, w ∈ H_aM`.
pub fn levi_form(orbit: &TubeOrbit, v: &ComplexElement, w: &ComplexElement) -> Result<ComplexElement> {
    orbit.require_tangent(v)?;
    orbit.require_tangent(w)?;
    levi_unchecked(orbit, v, w)
}

fn levi_unchecked(orbit: &TubeOrbit, v: &ComplexElement, w: &ComplexElement) -> Result<ComplexElement> {
    let alg = &orbit.algebra;
    let lw = linalg::to_complex_mat(&orbit.lmul_inverse) * w;
    let prod = alg.jordan_product(&alg.star(v)?, &lw)?;
    Ok(linalg::to_complex_mat(&orbit.pi_zero) * prod)
}

/// Right kernel of a sesquilinear map `(x, y) ↦ f(x, y)` with `y` ranging over `right`.
fn right_kernel(
    left: &[ComplexElement],
    right: &SubspaceBasis,
    label: SubspaceLabel,
    tol: f64,
    mut f: impl FnMut(&ComplexElement, &ComplexElement) -> Result<ComplexElement>,
) -> Result<SubspaceBasis> {
    if right.dim() == 0 {
        return Ok(SubspaceBasis { label, vectors: Vec::new() });
    }
    if left.is_empty() {
        let m = right.dim();
        let identity: Vec<ComplexElement> = (0..m)
            .map(|i| ComplexElement::from_fn(m, |j, _| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }))
            .collect();
        return Ok(right.combine(label, &identity));
    }
    let mut blocks: Vec<ComplexElement> = Vec::with_capacity(right.dim());
    for y in &right.vectors {
        let mut col = Vec::new();
        for x in left {
            col.extend(f(x, y)?.iter().copied());
        }
        blocks.push(ComplexElement::from_vec(col));
    }
    let m = linalg::columns(blocks[0].len(), &blocks);
    let null = linalg::nullspace(&m, tol);
    Ok(right.combine(label, &null))
}

/// `K_aM = {w ∈ H_aM : Λ_a(·, w) = 0}`, computed as a numeric null space.
pub fn levi_kernel(orbit: &TubeOrbit, tol: f64) -> Result<SubspaceBasis> {
    let h = tangent_data(orbit).holomorphic_tangent;
    right_kernel(&h.vectors, &h, SubspaceLabel::LeviKernel, tol, |v, w| levi_unchecked(orbit, v, w))
}

/// `β(v, u) = P(a, v*) P(a)|_{E₁}⁻¹ u` for `v ∈ E½`, `u ∈ E₁`.
pub fn beta_map(orbit: &TubeOrbit, v: &ComplexElement, u: &ComplexElement) -> Result<ComplexElement> {
    orbit.require_block(v, &orbit.pi_half, "E_1/2")?;
    orbit.require_block(u, &orbit.pi_one, "E_1")?;
    beta_unchecked(orbit, v, u)
}

fn beta_unchecked(orbit: &TubeOrbit, v: &ComplexElement, u: &ComplexElement) -> Result<ComplexElement> {
    let alg = &orbit.algebra;
    let a = linalg::to_complex_vec(&orbit.base_point);
    let w = linalg::to_complex_mat(&orbit.pquad_inverse) * u;
    Ok(alg.pquad2(&a, &alg.star(v)?)? * w)
}

/// Finite-nondegeneracy order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    NotFinitelyNondegenerate,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::NotFinitelyNondegenerate => write!(f, "not finitely nondegenerate"),
        }
    }
}

const NOT_FINITE: &str = "not_finitely_nondegenerate";

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(k) => s.serialize_u64(*k as u64),
            Order::NotFinitelyNondegenerate => s.serialize_str(NOT_FINITE),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(usize),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(k) => Ok(Order::Finite(k)),
            Repr::Text(t) if t == NOT_FINITE => Ok(Order::NotFinitelyNondegenerate),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("unknown order {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub order: Order,
    /// `dim H⁰, dim H¹, …` up to the first zero or the first repetition.
    pub chain_dims: Vec<usize>,
    /// Set for `ρ = 0` and `ρ = r`, where the order is a convention.
    pub convention: bool,
}

/// The kernel chain `H⁰ = H_aM ⊃ H¹ = K_aM ⊃ H² = right β-kernel ⊃ …`.
pub fn kernel_chain(orbit: &TubeOrbit, tol: f64) -> Result<Vec<SubspaceBasis>> {
    let mut chain = vec![SubspaceBasis {
        label: SubspaceLabel::Chain(0),
        ..tangent_data(orbit).holomorphic_tangent
    }];
    let half = orbit.basis(SubspaceLabel::PeirceHalf, &orbit.pi_half);
    loop {
        let k = chain.len();
        let last = &chain[k - 1];
        if last.dim() == 0 {
            break;
        }
        let label = SubspaceLabel::Chain(k);
        let next = if k == 1 {
            let h = &chain[0];
            right_kernel(&h.vectors, last, label, tol, |v, w| levi_unchecked(orbit, v, w))?
        } else {
            right_kernel(&half.vectors, last, label, tol, |v, u| beta_unchecked(orbit, v, u))?
        };
        let stable = next.dim() == last.dim();
        chain.push(next);
        if stable {
            break;
        }
    }
    Ok(chain)
}

pub fn nondegeneracy_order(orbit: &TubeOrbit, tol: f64) -> Result<NondegeneracyReport> {
    let chain = kernel_chain(orbit, tol)?;
    let chain_dims: Vec<usize> = chain.iter().map(SubspaceBasis::dim).collect();
    let order = match chain_dims.iter().position(|&d| d == 0) {
        Some(k) => Order::Finite(k),
        None => Order::NotFinitelyNondegenerate,
    };
    Ok(NondegeneracyReport {
        order,
        chain_dims,
        convention: orbit.is_totally_real() || orbit.is_open(),
    })
}

fn realify(z: &ComplexElement) -> Element {
    let d = z.len();
    Element::from_fn(2 * d, |i, _| if i < d { z[i].re } else { z[i - d].im })
}

fn complexify(x: &Element) -> ComplexElement {
    let d = x.len() / 2;
    ComplexElement::from_fn(d, |i, _| Complex64::new(x[i], x[i + d]))
}

/// Real dimension of the span of `H_aM` and iterated Levi values, and of `T_aM`.
pub fn bracket_span(orbit: &TubeOrbit, tol: f64) -> Result<(usize, usize)> {
    let alg = &orbit.algebra;
    let d = alg.dim();
    let tangent = tangent_data(orbit);
    let t_am = tangent.cone_tangent.dim() + d;
    let mut span: Vec<Element> = Vec::new();
    for h in &tangent.holomorphic_tangent.vectors {
        span.push(realify(h));
        span.push(realify(&(h * I)));
    }
    let pi_h = linalg::to_complex_mat(&orbit.pi_h());
    let mut rank = linalg::numeric_rank(&linalg::columns(2 * d, &span), tol);
    loop {
        let range = linalg::orthonormal_range(&linalg::columns(2 * d, &span), tol);
        let horizontal: Vec<ComplexElement> = range.iter().map(|x| &pi_h * complexify(x)).collect();
        let mut grown = range.clone();
        for v in &horizontal {
            for w in &horizontal {
                let value = levi_unchecked(orbit, v, w)?;
                grown.push(realify(&value.map(|c| I * c.re)));
                grown.push(realify(&value.map(|c| I * c.im)));
            }
        }
        let next = linalg::numeric_rank(&linalg::columns(2 * d, &grown), tol);
        span = grown;
        if next == rank {
            break;
        }
        rank = next;
    }
    Ok((rank, t_am))
}

/// Minimality: the Levi values generate `T_aM` together with `H_aM`.
pub fn minimality_check(orbit: &TubeOrbit, tol: f64) -> Result<bool> {
    let (span, t_am) = bracket_span(orbit, tol)?;
    Ok(span == t_am)
}

fn require_proper(r: usize, p: usize, q: usize) -> Result<()> {
    check_signature(r, p, q)?;
    let reason = if p + q == 0 {
        "the tube is totally real"
    } else if p + q == r {
        "the tube is open"
    } else {
        return Ok(());
    };
    Err(Error::InvalidSignature {
        p,
        q,
        rank: r,
        reason: reason.into(),
    })
}

/// Dimension of the stabilizer of a point in the automorphism group of `M`,
/// `dim gl(Ω) + codim_CR M` in closed form.
pub fn aut_germ_dimension(desc: &AlgebraDescriptor, p: usize, q: usize) -> Result<usize> {
    let r = desc.rank();
    require_proper(r, p, q)?;
    let n = desc.peirce_constant();
    let corank = r - p - q;
    let crcodim = corank + binomial(corank, 2) * n;
    Ok(match desc.family() {
        Family::Albert => 79 + crcodim,
        _ => n * (r * r + binomial(corank, 2) - 2) + binomial(n, 2) + corank + 2,
    })
}

/// The fields `i{zvz}∂z` for `v` in a basis of `V₀`; each vanishes to second order at `a`.
pub fn aut1_basis(orbit: &TubeOrbit) -> Result<Vec<GradedField>> {
    let s = orbit.signature;
    require_proper(orbit.algebra.rank(), s.p, s.q)?;
    let alg = &orbit.algebra;
    let a = linalg::to_complex_vec(&orbit.base_point);
    let basis = spectral::projection_basis(alg, &orbit.pi_zero);
    let mut out = Vec::with_capacity(basis.len());
    for v in basis {
        let f = GradedField::quadratic(v);
        let value = fields::evaluate_field(alg, &f, &a)?.camax();
        let jet = fields::field_derivative(alg, &f, &a)?.camax();
        let residual = value.max(jet);
        if residual > 1e-10 {
            return Err(Error::NumericalFailure {
                context: "aut1 field does not vanish to second order at the base point".into(),
                residual,
            });
        }
        out.push(f);
    }
    Ok(out)
}

/// A real vector field on `E` with its derivative, for exact bracket computations.
struct Section<'a> {
    value: Box<dyn Fn(&ComplexElement) -> Result<ComplexElement> + 'a>,
    derivative: Box<dyn Fn(&ComplexElement, &ComplexElement) -> Result<ComplexElement> + 'a>,
}

impl<'a> Section<'a> {
    fn times_i(self) -> Section<'a> {
        let Section { value, derivative } = self;
        Section {
            value: Box::new(move |z| Ok(value(z)? * I)),
            derivative: Box::new(move |z, h| Ok(derivative(z, h)? * I)),
        }
    }
}

/// `[X, Y]_z = DY(z)X(z) − DX(z)Y(z)`.
fn bracket_at(x: &Section, y: &Section, z: &ComplexElement) -> Result<ComplexElement> {
    Ok((y.derivative)(z, &(x.value)(z)?)? - (x.derivative)(z, &(y.value)(z)?)?)
}

fn real_part(z: &ComplexElement) -> ComplexElement {
    z.map(|c| Complex64::new(c.re, 0.0))
}

/// `ξ^v_z = ½(z + z*) ∘ v`.
fn linear_section<'a>(alg: &'a Algebra, v: &'a ComplexElement) -> Section<'a> {
    Section {
        value: Box::new(move |z| alg.jordan_product(&real_part(z), v)),
        derivative: Box::new(move |_, h| alg.jordan_product(&real_part(h), v)),
    }
}

/// `η^w_z = ¼P(z + z*) w`.
fn quadratic_section<'a>(alg: &'a Algebra, w: &'a ComplexElement) -> Section<'a> {
    Section {
        value: Box::new(move |z| Ok(alg.pquad(&real_part(z))? * w)),
        derivative: Box::new(move |z, h| Ok(alg.pquad2(&real_part(z), &real_part(h))? * w * Complex64::new(2.0, 0.0))),
    }
}

/// Solve `op x = b` in the range of `keep`, failing when `b` is not reached.
fn preimage(op: &ComplexOperator, keep: &LinearOperator, b: &ComplexElement, what: &str) -> Result<ComplexElement> {
    let x = linalg::to_complex_mat(keep) * linalg::least_squares(op, b, NULL_CUTOFF);
    let residual = (op * &x - b).camax() / b.camax().max(1.0);
    if residual > 1e-9 {
        return Err(Error::NumericalFailure {
            context: format!("no section with the prescribed value in {what}"),
            residual,
        });
    }
    Ok(x)
}

/// `Λ_a(v, w)` from brackets of the sections `ξ^{v'}`, `ξ^{w'}` with `a∘v' = v`, `a∘w' = w`.
pub fn levi_form_by_brackets(orbit: &TubeOrbit, v: &ComplexElement, w: &ComplexElement) -> Result<ComplexElement> {
    orbit.require_tangent(v)?;
    orbit.require_tangent(w)?;
    let alg = &orbit.algebra;
    let a = linalg::to_complex_vec(&orbit.base_point);
    let la = alg.lmul(&a)?;
    let pi_h = orbit.pi_h();
    let v0 = preimage(&la, &pi_h, v, "H_aM")?;
    let w0 = preimage(&la, &pi_h, w, "H_aM")?;
    let xi = linear_section(alg, &v0);
    let eta = linear_section(alg, &w0);
    let plain = bracket_at(&xi, &eta, &a)?;
    let twisted = bracket_at(&linear_section(alg, &v0).times_i(), &eta, &a)?;
    Ok(linalg::to_complex_mat(&orbit.pi_zero) * (plain + twisted * I))
}

/// `β(v, u)` as the part of `[ξ^{v'}, η^{w}]_a` antilinear in `v'`, with `a∘v' = v`, `P(a)w = u`.
pub fn beta_by_brackets(orbit: &TubeOrbit, v: &ComplexElement, u: &ComplexElement) -> Result<ComplexElement> {
    orbit.require_block(v, &orbit.pi_half, "E_1/2")?;
    orbit.require_block(u, &orbit.pi_one, "E_1")?;
    let alg = &orbit.algebra;
    let a = linalg::to_complex_vec(&orbit.base_point);
    let v0 = preimage(&alg.lmul(&a)?, &orbit.pi_half, v, "E_1/2")?;
    let w0 = preimage(&alg.pquad(&a)?, &orbit.pi_one, u, "E_1")?;
    let iv0 = &v0 * I;
    let eta = quadratic_section(alg, &w0);
    let plain = bracket_at(&linear_section(alg, &v0), &eta, &a)?;
    let rotated = bracket_at(&linear_section(alg, &iv0), &eta, &a)?;
    Ok((plain + rotated * I) * Complex64::new(0.5, 0.0))
}
