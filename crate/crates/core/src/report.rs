//! One-shot analysis of a tube orbit, aggregating the CR invariants.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{self, DimTable};
use crate::jordan::{Algebra, AlgebraDescriptor, ComplexElement};
use crate::spectral::Signature;
use crate::tube::{self, Order, SubspaceBasis, TubeOrbit};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Relative singular-value cutoff for all null spaces and ranks.
    pub tol: f64,
    pub seed: u64,
    /// Random pairs per bracket-oracle comparison.
    pub samples: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tol: crate::linalg::NULL_CUTOFF,
            seed: 0,
            samples: 20,
        }
    }
}

/// Largest deviations between closed forms and their bracket definitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleDeviations {
    pub levi: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub algebra: AlgebraDescriptor,
    pub signature: Signature,
    pub rank: usize,
    pub corank: usize,
    pub crdim: usize,
    pub crcodim: usize,
    pub levi_kernel_dim: usize,
    pub nondegeneracy_order: Order,
    pub chain_dims: Vec<usize>,
    /// The order is a convention (totally real or open tube).
    pub order_is_convention: bool,
    pub minimal: bool,
    pub aut_germ_dim: Option<usize>,
    pub aut1_dim: Option<usize>,
    pub dim_table: DimTable,
    pub oracle_deviation: OracleDeviations,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

fn random_in<R: rand::Rng>(basis: &SubspaceBasis, dim: usize, rng: &mut R) -> ComplexElement {
    basis.vectors.iter().fold(ComplexElement::zeros(dim), |acc, v| {
        let c = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
        acc + v * c
    })
}

/// Worst relative disagreement of the Levi form and `β` with their bracket definitions.
pub fn oracle_deviations(orbit: &TubeOrbit, samples: usize, seed: u64) -> Result<OracleDeviations> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = orbit.algebra().dim();
    let h = tube::tangent_data(orbit).holomorphic_tangent;
    let [one, half, _] = tube::peirce_bases(orbit);
    let mut out = OracleDeviations { levi: 0.0, beta: 0.0 };
    if h.dim() == 0 {
        return Ok(out);
    }
    for _ in 0..samples {
        let v = random_in(&h, d, &mut rng);
        let w = random_in(&h, d, &mut rng);
        let direct = tube::levi_form(orbit, &v, &w)?;
        let oracle = tube::levi_form_by_brackets(orbit, &v, &w)?;
        out.levi = out.levi.max((&direct - oracle).camax() / direct.camax().max(1.0));
        if half.dim() > 0 && one.dim() > 0 {
            let v = random_in(&half, d, &mut rng);
            let u = random_in(&one, d, &mut rng);
            let direct = tube::beta_map(orbit, &v, &u)?;
            let oracle = tube::beta_by_brackets(orbit, &v, &u)?;
            out.beta = out.beta.max((&direct - oracle).camax() / direct.camax().max(1.0));
        }
    }
    Ok(out)
}

/// Full analysis of the tube over `C_{p,q}`.
pub fn analyze(alg: &Algebra, p: usize, q: usize, options: &AnalysisOptions) -> Result<AnalysisReport> {
    let orbit = tube::make_orbit(alg, p, q)?;
    let desc = alg.descriptor();
    let dims = tube::cr_dimensions(desc, p, q)?;
    let kernel = tube::levi_kernel(&orbit, options.tol)?;
    if kernel.dim() != dims.levi_kernel_dim {
        return Err(Error::NumericalFailure {
            context: format!(
                "numeric Levi kernel has dimension {}, expected {}",
                kernel.dim(),
                dims.levi_kernel_dim
            ),
            residual: kernel.block_residual(orbit.projections()[0]),
        });
    }
    let chain = tube::nondegeneracy_order(&orbit, options.tol)?;
    let minimal = tube::minimality_check(&orbit, options.tol)?;
    let dim_table = fields::dim_table(alg);
    let oracle_deviation = oracle_deviations(&orbit, options.samples, options.seed)?;

    let mut notes = Vec::new();
    let proper = !orbit.is_totally_real() && !orbit.is_open();
    if orbit.is_totally_real() {
        notes.push("totally real tube: H_aM = 0, order 0 by convention".to_string());
    }
    if orbit.is_open() {
        notes.push("open tube: complex manifold, Levi form trivial, never finitely nondegenerate".to_string());
    }
    let (aut_germ_dim, aut1_dim) = if proper {
        let germ = tube::aut_germ_dimension(desc, p, q)?;
        if germ != dim_table.dim_gl_omega + dims.crcodim {
            notes.push(format!(
                "germ dimension {germ} differs from dim gl(Omega) + crcodim = {}",
                dim_table.dim_gl_omega + dims.crcodim
            ));
        }
        (Some(germ), Some(tube::aut1_basis(&orbit)?.len()))
    } else {
        (None, None)
    };

    Ok(AnalysisReport {
        algebra: *desc,
        signature: orbit.signature(),
        rank: orbit.rank(),
        corank: orbit.corank(),
        crdim: dims.crdim,
        crcodim: dims.crcodim,
        levi_kernel_dim: kernel.dim(),
        nondegeneracy_order: chain.order,
        chain_dims: chain.chain_dims,
        order_is_convention: chain.convention,
        minimal,
        aut_germ_dim,
        aut1_dim,
        dim_table,
        oracle_deviation,
        notes,
        elapsed_seconds: None,
    })
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra            {}", self.algebra)?;
        writeln!(f, "signature          {}", self.signature)?;
        writeln!(f, "rank / corank      {} / {}", self.rank, self.corank)?;
        writeln!(f, "CR dimension       {}", self.crdim)?;
        writeln!(f, "CR codimension     {}", self.crcodim)?;
        writeln!(f, "Levi kernel        {}", self.levi_kernel_dim)?;
        let conv = if self.order_is_convention { " (convention)" } else { "" };
        writeln!(f, "nondegeneracy      {}{conv}", self.nondegeneracy_order)?;
        let chain: Vec<String> = self.chain_dims.iter().map(usize::to_string).collect();
        writeln!(f, "kernel chain       [{}]", chain.join(", "))?;
        writeln!(f, "minimal            {}", self.minimal)?;
        writeln!(f, "dim Aut(M, a)      {}", opt(self.aut_germ_dim))?;
        writeln!(f, "dim aut_1(M, a)    {}", opt(self.aut1_dim))?;
        let t = &self.dim_table;
        writeln!(
            f,
            "dims               V {}  der {}  gl(Omega) {}  sl(Omega) {}  aut(H) {}",
            t.dim_v, t.dim_der, t.dim_gl_omega, t.dim_sl_omega, t.dim_aut_h
        )?;
        writeln!(
            f,
            "oracle deviation   levi {:.3e}  beta {:.3e}",
            self.oracle_deviation.levi, self.oracle_deviation.beta
        )?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        if let Some(t) = self.elapsed_seconds {
            writeln!(f, "elapsed            {t:.3} s")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::Family;

    #[test]
    fn light_cone_report() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let r = analyze(&alg, 1, 0, &AnalysisOptions::default()).unwrap();
        assert_eq!(r.nondegeneracy_order, Order::Finite(2));
        assert_eq!(r.aut_germ_dim, Some(5));
        assert_eq!(r.aut1_dim, Some(1));
        assert!(r.minimal);
        assert!(r.notes.is_empty());
        assert!(r.oracle_deviation.levi < 1e-9 && r.oracle_deviation.beta < 1e-9);
        let json = serde_json::to_value(&r).unwrap();
        for key in ["signature", "rank", "corank", "crdim", "crcodim", "levi_kernel_dim", "nondegeneracy_order", "minimal", "aut_germ_dim", "aut1_dim"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(json.get("elapsed_seconds").is_none());
        let back: AnalysisReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn hermitian_complex_report() {
        let alg = Algebra::build(Family::HermComplex, 3, 2).unwrap();
        let r = analyze(&alg, 1, 1, &AnalysisOptions::default()).unwrap();
        assert_eq!((r.crdim, r.crcodim, r.levi_kernel_dim), (8, 1, 4));
        assert_eq!(r.nondegeneracy_order, Order::Finite(2));
    }

    #[test]
    fn degenerate_tubes() {
        let alg = Algebra::build(Family::HermReal, 2, 1).unwrap();
        let r = analyze(&alg, 0, 0, &AnalysisOptions::default()).unwrap();
        assert!(!r.minimal);
        assert!(r.order_is_convention);
        assert_eq!(r.aut_germ_dim, None);
        assert_eq!(r.notes.len(), 1);
        assert!(matches!(analyze(&alg, 2, 1, &AnalysisOptions::default()), Err(Error::InvalidSignature { .. })));
    }
}
