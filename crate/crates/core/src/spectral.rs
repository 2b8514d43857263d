//! Spectral decomposition, Peirce decompositions, generic minors and the
//! classification of elements into the cone orbits `C_{p,q}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{Algebra, Element, Family, LinearOperator};
use crate::json;
use crate::linalg::binomial;
use crate::sample;

/// Default tolerance, relative to the largest eigenvalue modulus.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative gap below which computed roots are merged into one eigenvalue.
const CLUSTER_TOL: f64 = 1e-6;

/// Eigenvalues (descending) and a frame with `x = Σ λ_j e_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    #[serde(with = "json::vectors")]
    pub frame: Vec<Element>,
}

impl SpectralData {
    pub fn reconstruct(&self) -> Element {
        let d = self.frame.first().map_or(0, |e| e.len());
        self.frame
            .iter()
            .zip(&self.eigenvalues)
            .fold(Element::zeros(d), |acc, (e, &l)| acc + e * l)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m: f64, l| m.max(l.abs()))
    }

    /// Check the frame and reconstruction residuals against `tol`; returns the worst residual.
    pub fn validate(&self, alg: &Algebra, x: &Element, tol: f64) -> Result<f64> {
        let frame_residual = frame_residual(alg, &self.frame)?;
        if frame_residual > tol {
            return Err(Error::NumericalFailure {
                context: "spectral frame is not a complete orthogonal system of idempotents".into(),
                residual: frame_residual,
            });
        }
        let scale = self.max_abs_eigenvalue().max(1.0);
        let recon = (self.reconstruct() - x).camax() / scale;
        if !(recon <= tol) {
            return Err(Error::NumericalFailure {
                context: "spectral reconstruction".into(),
                residual: recon,
            });
        }
        Ok(frame_residual.max(recon))
    }
}

/// Worst violation of idempotency, orthogonality and completeness.
pub fn frame_residual(alg: &Algebra, frame: &[Element]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut sum = Element::zeros(alg.dim());
    for (j, ej) in frame.iter().enumerate() {
        alg.check(ej)?;
        worst = worst.max((alg.square(ej)? - ej).camax());
        for ek in &frame[j + 1..] {
            worst = worst.max(alg.jordan_product(ej, ek)?.camax());
        }
        sum += ej;
    }
    Ok(worst.max((sum - alg.unit()).camax()))
}

/// Numbers of positive and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn rank(&self) -> usize {
        self.p + self.q
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

pub fn spectral_decompose(alg: &Algebra, x: &Element, tol: f64) -> Result<SpectralData> {
    alg.check(x)?;
    let mut data = match alg.family() {
        Family::SpinFactor => spin_decompose(alg, x),
        Family::HermReal => herm_real_decompose(alg, x),
        Family::HermComplex => herm_complex_decompose(alg, x),
        Family::HermQuaternion => herm_quaternion_decompose(alg, x)?,
        Family::Albert => power_decompose(alg, x, 0)?,
    };
    sort_descending(&mut data);
    data.validate(alg, x, tol)?;
    Ok(data)
}

fn sort_descending(data: &mut SpectralData) {
    let mut idx: Vec<usize> = (0..data.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| data.eigenvalues[b].total_cmp(&data.eigenvalues[a]));
    data.eigenvalues = idx.iter().map(|&i| data.eigenvalues[i]).collect();
    data.frame = idx.iter().map(|&i| data.frame[i].clone()).collect();
}

fn spin_decompose(alg: &Algebra, x: &Element) -> SpectralData {
    let d = alg.dim();
    let s = x[0];
    let u = x.rows(1, d - 1).into_owned();
    let norm = u.norm();
    let axis = if norm > 0.0 {
        u / norm
    } else {
        let mut a = DVector::zeros(d - 1);
        a[0] = 1.0;
        a
    };
    let frame = [1.0, -1.0]
        .iter()
        .map(|&sgn| {
            let mut e = Element::zeros(d);
            e[0] = 0.5;
            e.rows_mut(1, d - 1).copy_from(&(&axis * (0.5 * sgn)));
            e
        })
        .collect();
    SpectralData {
        eigenvalues: vec![s + norm, s - norm],
        frame,
    }
}

fn herm_real_decompose(alg: &Algebra, x: &Element) -> SpectralData {
    let real = alg.hermitian_realization().expect("matrix family");
    let m = real.to_matrix(x).map(|z| z.re);
    let eig = m.symmetric_eigen();
    let frame = (0..alg.rank())
        .map(|j| {
            let v = eig.eigenvectors.column(j);
            real.from_matrix(&(v * v.transpose()).map(|t| Complex64::new(t, 0.0)))
        })
        .collect();
    SpectralData {
        eigenvalues: eig.eigenvalues.iter().copied().collect(),
        frame,
    }
}

fn herm_complex_decompose(alg: &Algebra, x: &Element) -> SpectralData {
    let real = alg.hermitian_realization().expect("matrix family");
    let eig = real.to_matrix(x).symmetric_eigen();
    let frame = (0..alg.rank())
        .map(|j| {
            let v = eig.eigenvectors.column(j);
            real.from_matrix(&(v * v.adjoint()))
        })
        .collect();
    SpectralData {
        eigenvalues: eig.eigenvalues.iter().copied().collect(),
        frame,
    }
}

/// The antiunitary `J v = Ω v̄` commuting with the realized quaternionic matrices.
fn quaternion_partner(v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut out = DVector::zeros(v.len());
    for k in 0..v.len() / 2 {
        out[2 * k] = v[2 * k + 1].conj();
        out[2 * k + 1] = -v[2 * k].conj();
    }
    out
}

fn herm_quaternion_decompose(alg: &Algebra, x: &Element) -> Result<SpectralData> {
    let real = alg.hermitian_realization().expect("matrix family");
    let eig = real.to_matrix(x).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.camax().max(1.0);

    let mut eigenvalues = Vec::new();
    let mut frame = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && (eig.eigenvalues[order[start]] - eig.eigenvalues[order[end]]).abs() <= DEFAULT_TOL * scale
        {
            end += 1;
        }
        if (end - start) % 2 != 0 {
            return Err(Error::NumericalFailure {
                context: "quaternionic eigenvalues are not paired".into(),
                residual: (end - start) as f64,
            });
        }
        let cluster: Vec<DVector<Complex64>> =
            order[start..end].iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
        let mean = order[start..end].iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / (end - start) as f64;
        let mut picked: Vec<DVector<Complex64>> = Vec::new();
        for _ in 0..(end - start) / 2 {
            let residual = |w: &DVector<Complex64>| {
                picked.iter().fold(w.clone(), |acc, p| &acc - p * p.dotc(&acc))
            };
            let best = cluster
                .iter()
                .map(residual)
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .expect("nonempty cluster");
            let u = &best / Complex64::new(best.norm(), 0.0);
            let ju = quaternion_partner(&u);
            let proj = &u * u.adjoint() + &ju * ju.adjoint();
            frame.push(real.from_matrix(&proj));
            eigenvalues.push(mean);
            picked.push(u);
            picked.push(ju);
        }
        start = end;
    }
    Ok(SpectralData { eigenvalues, frame })
}

/// Power sums `τ(x^k)` for `k = 1..=r`.
fn power_sums(alg: &Algebra, x: &Element) -> Result<Vec<f64>> {
    let mut p = Vec::with_capacity(alg.rank());
    let mut xk = alg.unit();
    for _ in 0..alg.rank() {
        xk = alg.jordan_product(x, &xk)?;
        p.push(alg.jordan_trace(&xk)?);
    }
    Ok(p)
}

/// Elementary symmetric functions of the eigenvalues from power sums (Newton's identities).
fn newton_minors(p: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for k in 1..=p.len() {
        let mut s = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += sign * e[k - i] * p[i - 1];
        }
        e.push(s / k as f64);
    }
    e.split_off(1)
}

/// Generic minors computed from traces of powers rather than a frame.
pub fn generic_minors_from_traces(alg: &Algebra, x: &Element) -> Result<Vec<f64>> {
    Ok(newton_minors(&power_sums(alg, x)?))
}

/// Real roots of `T^r − e₁T^{r−1} + e₂T^{r−2} − …` for `r ≤ 3`, with multiplicity.
fn characteristic_roots(e: &[f64]) -> Vec<f64> {
    let mut roots = match e.len() {
        1 => vec![e[0]],
        2 => {
            let disc = (e[0] * e[0] - 4.0 * e[1]).max(0.0).sqrt();
            vec![0.5 * (e[0] + disc), 0.5 * (e[0] - disc)]
        }
        3 => {
            let (a, b, c) = (-e[0], e[1], -e[2]);
            let p = b - a * a / 3.0;
            let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
            let shift = -a / 3.0;
            if p >= 0.0 || p.abs() <= 1e-14 * (1.0 + a * a) {
                vec![shift; 3]
            } else {
                let m = 2.0 * (-p / 3.0).sqrt();
                let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
                let theta = arg.acos() / 3.0;
                (0..3)
                    .map(|k| shift + m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
                    .collect()
            }
        }
        _ => unreachable!("power method is only used in rank at most 3"),
    };
    let poly = |t: f64| -> (f64, f64) {
        let (mut v, mut dv) = (1.0, 0.0);
        for (k, ek) in e.iter().enumerate() {
            let coeff = if k % 2 == 0 { -ek } else { *ek };
            dv = dv * t + v;
            v = v * t + coeff;
        }
        (v, dv)
    };
    for root in &mut roots {
        for _ in 0..3 {
            let (v, dv) = poly(*root);
            if dv.abs() > 1e-8 * (1.0 + root.abs()) {
                let step = v / dv;
                if step.is_finite() {
                    *root -= step;
                }
            }
        }
    }
    roots
}

/// Frame from the characteristic polynomial and Lagrange interpolation in powers of `x`.
///
/// Repeated eigenvalues are split by decomposing a random element of the
/// Peirce 1-space of the cluster idempotent.
pub fn power_decompose(alg: &Algebra, x: &Element, depth: u64) -> Result<SpectralData> {
    alg.check(x)?;
    if alg.rank() > 3 {
        return Err(Error::NumericalFailure {
            context: "power decomposition is implemented for rank at most 3".into(),
            residual: alg.rank() as f64,
        });
    }
    if depth > 8 {
        return Err(Error::NumericalFailure {
            context: "could not split a repeated eigenvalue".into(),
            residual: depth as f64,
        });
    }
    let e = generic_minors_from_traces(alg, x)?;
    let mut roots = characteristic_roots(&e);
    roots.sort_by(|a, b| b.total_cmp(a));
    let scale = roots.iter().fold(0.0, |m: f64, r| m.max(r.abs())).max(f64::MIN_POSITIVE);

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for r in roots {
        match clusters.last_mut() {
            Some(c) if (c[0] - r).abs() <= CLUSTER_TOL * scale => c.push(r),
            _ => clusters.push(vec![r]),
        }
    }
    let centers: Vec<f64> = clusters.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();

    let mut data = SpectralData {
        eigenvalues: Vec::new(),
        frame: Vec::new(),
    };
    for (i, cluster) in clusters.iter().enumerate() {
        let mut c = alg.unit();
        for (k, &mu) in centers.iter().enumerate() {
            if k != i {
                let factor = (x - alg.unit() * mu) / (centers[i] - mu);
                c = alg.jordan_product(&c, &factor)?;
            }
        }
        for _ in 0..4 {
            let c2 = alg.square(&c)?;
            let c3 = alg.jordan_product(&c, &c2)?;
            c = c2 * 3.0 - c3 * 2.0;
        }
        let mult = cluster.len();
        if mult == 1 {
            let lambda = alg.trace_form(&alg.jordan_product(&c, x)?, &c)? / alg.trace_form(&c, &c)?;
            data.eigenvalues.push(lambda);
            data.frame.push(c);
        } else {
            let lambda = alg.jordan_trace(&alg.jordan_product(&c, x)?)? / mult as f64;
            for f in split_idempotent(alg, &c, mult, depth)? {
                data.eigenvalues.push(lambda);
                data.frame.push(f);
            }
        }
    }
    Ok(data)
}

/// Split an idempotent of rank `mult` into `mult` orthogonal minimal idempotents.
fn split_idempotent(alg: &Algebra, c: &Element, mult: usize, depth: u64) -> Result<Vec<Element>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9 ^ depth);
    let pc = alg.pquad(c)?;
    let g = sample::element(alg, &mut rng);
    let y0 = pc * g;
    let shift = 1.0 + 2.0 * alg.norm(&y0);
    let y = &y0 + c * shift;
    let sub = power_decompose(alg, &y, depth + 1)?;
    let cutoff = 0.5;
    let parts: Vec<Element> = sub
        .eigenvalues
        .iter()
        .zip(sub.frame)
        .filter(|(l, _)| l.abs() > cutoff)
        .map(|(_, f)| f)
        .collect();
    if parts.len() != mult {
        return Err(Error::NumericalFailure {
            context: "splitting a repeated eigenvalue produced the wrong number of idempotents".into(),
            residual: parts.len() as f64,
        });
    }
    Ok(parts)
}

/// `(N₁(x), …, N_r(x))`, the elementary symmetric functions of the eigenvalues.
pub fn generic_minors(alg: &Algebra, x: &Element) -> Result<Vec<f64>> {
    let data = spectral_decompose(alg, x, DEFAULT_TOL)?;
    let mut e = vec![0.0; alg.rank() + 1];
    e[0] = 1.0;
    for &l in &data.eigenvalues {
        for k in (1..e.len()).rev() {
            e[k] += l * e[k - 1];
        }
    }
    Ok(e.split_off(1))
}

/// The generic norm `N(x) = N_r(x)`.
pub fn generic_norm(alg: &Algebra, x: &Element) -> Result<f64> {
    Ok(*generic_minors(alg, x)?.last().expect("rank is positive"))
}

fn threshold(data: &SpectralData, tol: f64) -> f64 {
    tol * data.max_abs_eigenvalue()
}

fn check_borderline(data: &SpectralData, tol: f64) -> Result<f64> {
    let thr = threshold(data, tol);
    for &l in &data.eigenvalues {
        if l.abs() > thr / 10.0 && l.abs() < thr {
            return Err(Error::BorderlineSpectrum {
                value: l,
                lower: thr / 10.0,
                upper: thr,
            });
        }
    }
    Ok(thr)
}

/// Signature of the spectrum, with `tol` relative to the largest eigenvalue modulus.
pub fn signature_of(data: &SpectralData, tol: f64) -> Result<Signature> {
    let thr = check_borderline(data, tol)?;
    let p = data.eigenvalues.iter().filter(|&&l| l > thr).count();
    let q = data.eigenvalues.iter().filter(|&&l| l < -thr).count();
    Ok(Signature { p, q })
}

pub fn orbit_signature(alg: &Algebra, x: &Element, tol: f64) -> Result<Signature> {
    signature_of(&spectral_decompose(alg, x, tol)?, tol)
}

/// Number of `GL(Ω)`-orbits in a rank-`r` algebra.
pub fn orbit_count(r: usize) -> usize {
    binomial(r + 2, 2)
}

/// All signatures `(p, q)` with `p + q ≤ r`.
pub fn all_signatures(r: usize) -> Vec<Signature> {
    (0..=r)
        .flat_map(|p| (0..=r - p).map(move |q| Signature { p, q }))
        .collect()
}

pub fn support_of(data: &SpectralData, dim: usize, tol: f64) -> Result<Element> {
    let thr = check_borderline(data, tol)?;
    Ok(data
        .frame
        .iter()
        .zip(&data.eigenvalues)
        .filter(|(_, l)| l.abs() > thr)
        .fold(Element::zeros(dim), |acc, (e, _)| acc + e))
}

/// Sum of the frame members with nonzero eigenvalue.
pub fn support_idempotent(alg: &Algebra, x: &Element, tol: f64) -> Result<Element> {
    let data = spectral_decompose(alg, x, tol)?;
    support_of(&data, alg.dim(), tol)
}

/// Check that `λ_j + λ_k = 0` only when both vanish; `tol` is relative to the largest modulus.
pub fn check_condition_star(eigenvalues: &[f64], tol: f64) -> Result<()> {
    let scale = eigenvalues.iter().fold(0.0, |m: f64, l| m.max(l.abs()));
    let thr = tol * scale.max(f64::MIN_POSITIVE);
    for (j, &lj) in eigenvalues.iter().enumerate() {
        for &lk in &eigenvalues[j + 1..] {
            if (lj + lk).abs() <= thr && (lj.abs() > thr || lk.abs() > thr) {
                return Err(Error::ConditionStarViolated { lambda_j: lj, lambda_k: lk });
            }
        }
    }
    Ok(())
}

/// Peirce decomposition `V = V₁ ⊕ V½ ⊕ V₀` of an idempotent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeirceData {
    #[serde(with = "json::vector")]
    pub idempotent: Element,
    #[serde(skip)]
    pub pi_one: LinearOperator,
    #[serde(skip)]
    pub pi_half: LinearOperator,
    #[serde(skip)]
    pub pi_zero: LinearOperator,
    pub d_one: usize,
    pub d_half: usize,
    pub d_zero: usize,
}

fn trace_dim(p: &LinearOperator) -> usize {
    p.trace().round().max(0.0) as usize
}

pub fn peirce_projections(alg: &Algebra, c: &Element) -> Result<PeirceData> {
    alg.check(c)?;
    let residual = (alg.square(c)? - c).camax();
    if residual > DEFAULT_TOL {
        return Err(Error::NotIdempotent { residual });
    }
    let d = alg.dim();
    let id = LinearOperator::identity(d, d);
    let l = alg.lmul(c)?;
    let pi_one = &l * (&l * 2.0 - &id);
    let pi_half = &l * (&id - &l) * 4.0;
    let pi_zero = (&id - &l) * (&id - &l * 2.0);
    Ok(PeirceData {
        idempotent: c.clone(),
        d_one: trace_dim(&pi_one),
        d_half: trace_dim(&pi_half),
        d_zero: trace_dim(&pi_zero),
        pi_one,
        pi_half,
        pi_zero,
    })
}

/// One block `V_jk` (`j ≤ k`, 0-based) of a joint Peirce decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PeirceBlock {
    pub j: usize,
    pub k: usize,
    pub projection: LinearOperator,
    pub dim: usize,
}

/// Joint Peirce decomposition `V = ⊕_{j≤k} V_jk` of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPeirce {
    rank: usize,
    blocks: Vec<PeirceBlock>,
}

impl JointPeirce {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &[PeirceBlock] {
        &self.blocks
    }

    pub fn block(&self, j: usize, k: usize) -> &PeirceBlock {
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        self.blocks
            .iter()
            .find(|b| b.j == j && b.k == k)
            .expect("indices below the rank")
    }

    /// Sum of the projections of all blocks selected by `keep(j, k)`.
    pub fn projection_onto(&self, keep: impl Fn(usize, usize) -> bool) -> LinearOperator {
        let d = self.blocks[0].projection.nrows();
        self.blocks
            .iter()
            .filter(|b| keep(b.j, b.k))
            .fold(LinearOperator::zeros(d, d), |acc, b| acc + &b.projection)
    }
}

pub fn joint_peirce(alg: &Algebra, frame: &[Element]) -> Result<JointPeirce> {
    let r = alg.rank();
    if frame.len() != r {
        return Err(Error::InvalidFrame {
            reason: format!("expected {r} idempotents, got {}", frame.len()),
        });
    }
    let residual = frame_residual(alg, frame)?;
    if residual > DEFAULT_TOL {
        return Err(Error::InvalidFrame {
            reason: format!("frame residual {residual:.3e}"),
        });
    }
    let d = alg.dim();
    let id = LinearOperator::identity(d, d);
    let ls: Vec<LinearOperator> = frame.iter().map(|e| alg.lmul(e)).collect::<Result<_>>()?;
    let mut blocks = Vec::new();
    for j in 0..r {
        for k in j..r {
            let projection = if j == k {
                &ls[j] * (&ls[j] * 2.0 - &id)
            } else {
                &ls[j] * &ls[k] * 4.0
            };
            let dim = trace_dim(&projection);
            let expected = if j == k { 1 } else { alg.peirce_constant() };
            if dim != expected {
                return Err(Error::InvalidFrame {
                    reason: format!("block ({j}, {k}) has dimension {dim}, expected {expected}"),
                });
            }
            blocks.push(PeirceBlock { j, k, projection, dim });
        }
    }
    Ok(JointPeirce { rank: r, blocks })
}

/// Orthonormal basis (trace form) of the range of a trace-form self-adjoint projection.
pub(crate) fn projection_basis(alg: &Algebra, projection: &DMatrix<f64>) -> Vec<Element> {
    let half = alg.gram_half();
    let half_inv = alg.gram_half_inv();
    let sym = half * projection * half_inv;
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| half_inv * eig.eigenvectors.column(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::AlgebraDescriptor;
    use approx::assert_abs_diff_eq;

    fn desk() -> Vec<Algebra> {
        vec![
            Algebra::build(Family::HermReal, 1, 1).unwrap(),
            Algebra::build(Family::SpinFactor, 2, 1).unwrap(),
            Algebra::build(Family::SpinFactor, 2, 5).unwrap(),
            Algebra::build(Family::HermReal, 3, 1).unwrap(),
            Algebra::build(Family::HermComplex, 3, 2).unwrap(),
            Algebra::build(Family::HermQuaternion, 3, 4).unwrap(),
            Algebra::new(AlgebraDescriptor::albert()),
        ]
    }

    fn diag(alg: &Algebra, l: &[f64]) -> Element {
        alg.diagonal(l).unwrap()
    }

    #[test]
    fn unit_spectrum() {
        for alg in desk() {
            let s = spectral_decompose(&alg, &alg.unit(), DEFAULT_TOL).unwrap();
            assert_eq!(s.eigenvalues.len(), alg.rank());
            for l in s.eigenvalues {
                assert_abs_diff_eq!(l, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn spin_closed_form() {
        let alg = Algebra::build(Family::SpinFactor, 2, 2).unwrap();
        let x = Element::from_vec(vec![0.5, 3.0, 0.0, 4.0]);
        let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0], 5.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -4.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.frame[0], Element::from_vec(vec![0.5, 0.3, 0.0, 0.4]), epsilon = 1e-15);
        assert_abs_diff_eq!(s.frame[1], Element::from_vec(vec![0.5, -0.3, 0.0, -0.4]), epsilon = 1e-15);
    }

    #[test]
    fn diagonal_real_symmetric() {
        let alg = Algebra::build(Family::HermReal, 3, 1).unwrap();
        let x = diag(&alg, &[1.0, -2.0, 0.0]);
        let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 0.0, -2.0]);
        let frame = alg.diagonal_frame();
        for (f, expected) in s.frame.iter().zip([&frame[0], &frame[2], &frame[1]]) {
            assert_abs_diff_eq!(f, expected, epsilon = 1e-14);
        }
        assert_eq!(orbit_signature(&alg, &x, DEFAULT_TOL).unwrap(), Signature::new(1, 1));
    }

    #[test]
    fn random_frames_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for alg in desk() {
            for _ in 0..200 {
                let x = sample::element(&alg, &mut rng);
                let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
                assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
                let jp = joint_peirce(&alg, &s.frame).unwrap();
                let lx = alg.lmul(&x).unwrap();
                let px = alg.pquad(&x).unwrap();
                let l = &s.eigenvalues;
                let mut lsum = LinearOperator::zeros(alg.dim(), alg.dim());
                let mut psum = lsum.clone();
                for b in jp.blocks() {
                    lsum += &b.projection * (0.5 * (l[b.j] + l[b.k]));
                    psum += &b.projection * (l[b.j] * l[b.k]);
                }
                let scale = 1.0 + s.max_abs_eigenvalue().powi(2);
                assert!((lsum - lx).camax() < 1e-8 * scale);
                assert!((psum - px).camax() < 1e-8 * scale);
            }
        }
    }

    #[test]
    fn repeated_eigenvalues_still_give_frames() {
        let mut rng = ChaCha8Rng::seed_from_u64(102);
        for alg in desk() {
            let r = alg.rank();
            let x = sample::element(&alg, &mut rng);
            let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
            let mut l = vec![2.0; r];
            if r >= 3 {
                l[r - 1] = -1.0;
            }
            let y = s.frame.iter().zip(&l).fold(Element::zeros(alg.dim()), |acc, (e, &t)| acc + e * t);
            let sy = spectral_decompose(&alg, &y, DEFAULT_TOL).unwrap();
            for (a, b) in sy.eigenvalues.iter().zip({
                let mut sorted = l.clone();
                sorted.sort_by(|a, b| b.total_cmp(a));
                sorted
            }) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
            }
            let z = alg.unit() * -3.0;
            spectral_decompose(&alg, &z, DEFAULT_TOL).unwrap();
            spectral_decompose(&alg, &Element::zeros(alg.dim()), DEFAULT_TOL).unwrap();
        }
    }

    #[test]
    fn power_route_agrees_with_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for alg in [
            Algebra::build(Family::HermComplex, 3, 2).unwrap(),
            Algebra::build(Family::HermQuaternion, 3, 4).unwrap(),
            Algebra::build(Family::SpinFactor, 2, 4).unwrap(),
        ] {
            for _ in 0..20 {
                let x = sample::element(&alg, &mut rng);
                let a = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
                let mut b = power_decompose(&alg, &x, 0).unwrap();
                sort_descending(&mut b);
                b.validate(&alg, &x, DEFAULT_TOL).unwrap();
                for (u, v) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                    assert!((u - v).abs() < 1e-9 * (1.0 + u.abs()));
                }
            }
        }
    }

    #[test]
    fn minors_match_newton_and_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(104);
        for alg in desk() {
            assert_abs_diff_eq!(generic_norm(&alg, &alg.unit()).unwrap(), 1.0, epsilon = 1e-12);
            let frame_l: Vec<f64> = (0..alg.rank()).map(|j| j as f64 + 1.5).collect();
            let x = diag(&alg, &frame_l);
            assert_abs_diff_eq!(generic_norm(&alg, &x).unwrap(), frame_l.iter().product::<f64>(), epsilon = 1e-9);
            for _ in 0..10 {
                let x = sample::element(&alg, &mut rng);
                let n1 = generic_minors(&alg, &x).unwrap();
                let n2 = generic_minors_from_traces(&alg, &x).unwrap();
                for (a, b) in n1.iter().zip(&n2) {
                    assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
                }
                let t = -1.7;
                let nt = generic_minors(&alg, &(&x * t)).unwrap();
                for (j, (a, b)) in n1.iter().zip(&nt).enumerate() {
                    let expected = a * t.powi(j as i32 + 1);
                    assert!((b - expected).abs() < 1e-8 * (1.0 + expected.abs()));
                }
            }
        }
    }

    #[test]
    fn signatures_and_local_equations() {
        let mut rng = ChaCha8Rng::seed_from_u64(105);
        for alg in desk() {
            let r = alg.rank();
            assert_eq!(orbit_signature(&alg, &alg.unit(), DEFAULT_TOL).unwrap(), Signature::new(r, 0));
            assert_eq!(orbit_signature(&alg, &Element::zeros(alg.dim()), DEFAULT_TOL).unwrap(), Signature::new(0, 0));
            let x = sample::element(&alg, &mut rng);
            let s = orbit_signature(&alg, &x, DEFAULT_TOL).unwrap();
            assert_eq!(orbit_signature(&alg, &(&x * 3.5), DEFAULT_TOL).unwrap(), s);
            assert_eq!(orbit_signature(&alg, &(-&x), DEFAULT_TOL).unwrap(), Signature::new(s.q, s.p));
            for sig in all_signatures(r) {
                let mut l = vec![0.0; r];
                for j in 0..sig.p {
                    l[j] = 1.0 + j as f64;
                }
                for k in 0..sig.q {
                    l[sig.p + k] = -2.0 - k as f64;
                }
                let y = diag(&alg, &l);
                assert_eq!(orbit_signature(&alg, &y, DEFAULT_TOL).unwrap(), sig);
                let n = generic_minors(&alg, &y).unwrap();
                for nj in &n[sig.rank()..] {
                    assert!(nj.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn borderline_is_reported() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let x = diag(&alg, &[1.0, 5e-9]);
        assert!(matches!(
            orbit_signature(&alg, &x, DEFAULT_TOL),
            Err(Error::BorderlineSpectrum { .. })
        ));
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(orbit_count(1), 3);
        assert_eq!(orbit_count(2), 6);
        assert_eq!(orbit_count(3), 10);
        for r in 1..6 {
            assert_eq!(all_signatures(r).len(), orbit_count(r));
        }
    }

    #[test]
    fn support_idempotents() {
        let alg = Algebra::build(Family::HermReal, 3, 1).unwrap();
        let x = diag(&alg, &[5.0, -1.0, 0.0]);
        let c = support_idempotent(&alg, &x, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(c, diag(&alg, &[1.0, 1.0, 0.0]), epsilon = 1e-14);
        assert_abs_diff_eq!(alg.pquad(&c).unwrap() * &x, x, epsilon = 1e-12);
        let z = support_idempotent(&alg, &Element::zeros(alg.dim()), DEFAULT_TOL).unwrap();
        assert_eq!(z, Element::zeros(alg.dim()));
        let mut rng = ChaCha8Rng::seed_from_u64(106);
        for alg in desk() {
            let w = sample::cone_element(&alg, &mut rng);
            assert_abs_diff_eq!(support_idempotent(&alg, &w, DEFAULT_TOL).unwrap(), alg.unit(), epsilon = 1e-8);
        }
    }

    #[test]
    fn peirce_of_idempotents() {
        for alg in desk() {
            let d = alg.dim();
            let pe = peirce_projections(&alg, &alg.unit()).unwrap();
            assert_eq!((pe.d_one, pe.d_half, pe.d_zero), (d, 0, 0));
            let p0 = peirce_projections(&alg, &Element::zeros(d)).unwrap();
            assert_eq!((p0.d_one, p0.d_half, p0.d_zero), (0, 0, d));
        }
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let c = diag(&alg, &[1.0, 0.0]);
        let p = peirce_projections(&alg, &c).unwrap();
        assert_eq!((p.d_one, p.d_half, p.d_zero), (1, 1, 1));
        assert!(matches!(
            peirce_projections(&alg, &diag(&alg, &[2.0, 0.0])),
            Err(Error::NotIdempotent { .. })
        ));
    }

    #[test]
    fn peirce_projections_are_a_resolution_of_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for alg in desk() {
            let r = alg.rank();
            let x = sample::element(&alg, &mut rng);
            let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
            let c = s.frame.iter().take(r.div_ceil(2)).fold(Element::zeros(alg.dim()), |a, e| a + e);
            let p = peirce_projections(&alg, &c).unwrap();
            let d = alg.dim();
            let id = LinearOperator::identity(d, d);
            assert!((&p.pi_one + &p.pi_half + &p.pi_zero - &id).camax() < 1e-9);
            for (a, b) in [(&p.pi_one, &p.pi_half), (&p.pi_one, &p.pi_zero), (&p.pi_half, &p.pi_zero)] {
                assert!((a * b).camax() < 1e-9);
            }
            for pi in [&p.pi_one, &p.pi_half, &p.pi_zero] {
                assert!((pi * pi - pi).camax() < 1e-9);
            }
            assert_eq!(p.d_one + p.d_half + p.d_zero, d);
            let lc = alg.lmul(&c).unwrap();
            assert!((&lc * &p.pi_one - &p.pi_one).camax() < 1e-9);
            assert!((&lc * &p.pi_half - &p.pi_half * 0.5).camax() < 1e-9);
            assert!((&lc * &p.pi_zero).camax() < 1e-9);
            let u = &p.pi_one * sample::element(&alg, &mut rng);
            let v = &p.pi_one * sample::element(&alg, &mut rng);
            let w = &p.pi_zero * sample::element(&alg, &mut rng);
            let uv = alg.jordan_product(&u, &v).unwrap();
            assert!((&p.pi_one * &uv - &uv).camax() < 1e-9);
            assert!(alg.jordan_product(&u, &w).unwrap().camax() < 1e-9);
        }
    }

    #[test]
    fn joint_peirce_dimensions_and_multiplication_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(108);
        for alg in desk() {
            let r = alg.rank();
            let x = sample::element(&alg, &mut rng);
            let s = spectral_decompose(&alg, &x, DEFAULT_TOL).unwrap();
            let jp = joint_peirce(&alg, &s.frame).unwrap();
            assert_eq!(jp.blocks().iter().map(|b| b.dim).sum::<usize>(), alg.dim());
            for b in jp.blocks() {
                assert_eq!(b.dim, if b.j == b.k { 1 } else { alg.peirce_constant() });
            }
            for _ in 0..20 {
                use rand::Rng;
                let (j, m, n, k) = (
                    rng.random_range(0..r),
                    rng.random_range(0..r),
                    rng.random_range(0..r),
                    rng.random_range(0..r),
                );
                let u = &jp.block(j, m).projection * sample::element(&alg, &mut rng);
                let v = &jp.block(m, n).projection * sample::element(&alg, &mut rng);
                let w = &jp.block(n, k).projection * sample::element(&alg, &mut rng);
                let to_c = crate::linalg::to_complex_vec;
                let t = alg.triple_product(&to_c(&u), &to_c(&v), &to_c(&w)).unwrap();
                let t = t.map(|z| z.re);
                let outside = &t - &jp.block(j, k).projection * &t;
                assert!(outside.camax() < 1e-8 * (1.0 + t.camax()));
            }
        }
        let alg = Algebra::build(Family::HermComplex, 3, 2).unwrap();
        let jp = joint_peirce(&alg, &alg.diagonal_frame()).unwrap();
        assert_eq!(jp.block(0, 1).dim, 2);
        let bad = vec![alg.unit(), Element::zeros(alg.dim()), Element::zeros(alg.dim())];
        assert!(matches!(joint_peirce(&alg, &bad), Err(Error::InvalidFrame { .. })));
        assert!(joint_peirce(&alg, &alg.diagonal_frame()[..2]).is_err());
    }

    #[test]
    fn multiplication_spectrum_of_diag_one_minus_one() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let lx = alg.lmul(&diag(&alg, &[1.0, -1.0])).unwrap();
        let mut ev: Vec<f64> = lx.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev.as_slice(), [-1.0, 0.0, 1.0].as_slice(), epsilon = 1e-14);
    }

    #[test]
    fn condition_star() {
        assert!(check_condition_star(&[1.0, 2.0, 0.0, 0.0], 1e-8).is_ok());
        assert!(matches!(
            check_condition_star(&[1.0, -1.0], 1e-8),
            Err(Error::ConditionStarViolated { .. })
        ));
        assert!(check_condition_star(&[1.0, -1.5], 1e-8).is_ok());
    }
}
