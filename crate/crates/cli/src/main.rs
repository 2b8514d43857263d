mod input;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use jordan_cr::domains::{self, SymplecticMatrix};
use jordan_cr::fields::{self, ClosedFormDims, DimTable};
use jordan_cr::report::{self, AnalysisOptions};
use jordan_cr::spectral::{self, Signature};
use jordan_cr::tube::{self, TubeOrbit};
use jordan_cr::{Algebra, AlgebraDescriptor, Error, Family};
use num_complex::Complex64;
use serde::Serialize;

use input::InputError;

#[derive(Parser)]
#[command(name = "jordan-cr", version, about = "Jordan algebras, cone orbits and CR invariants of tube manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// spin, hermR, hermC, hermH or albert
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    rank: Option<usize>,
    /// Peirce constant (the spin-factor parameter)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    q: usize,
    /// Coordinates as a JSON array (inline or a file), or `diag(l1, ..., lr)`
    #[arg(long)]
    element: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = jordan_cr::linalg::NULL_CUTOFF)]
    tol: f64,
    /// Report the elapsed time (makes output nondeterministic)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Numeric versus closed-form dimensions of der(V), sl(Omega), aut(H), sl(D)
    Table(Common),
    /// Full CR analysis of the tube over the orbit C_{p,q}
    Analyze(Common),
    /// Spectral decomposition of an element
    Spectral(Common),
    /// Orbit signature of an element
    Orbit(Common),
    /// Kernel chain and nondegeneracy order
    Nondegen(Common),
    /// Closed-form flow of i{zvz}d/dz on a frame
    Flow {
        #[command(flatten)]
        common: Common,
        /// Frame coefficients of v
        #[arg(long)]
        v: String,
        /// Frame coefficients of the initial point
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Siegel half-space action A(z) = (az+b)(cz+d)^-1, or isotropy dimensions
    Siegel {
        #[command(flatten)]
        common: Common,
        /// Compute the isotropy dimension at is
        #[arg(long)]
        isotropy: bool,
        /// Boundary-cone point for --isotropy
        #[arg(long)]
        s: Option<String>,
        /// Symplectic matrix (JSON rows)
        #[arg(long)]
        a: Option<String>,
        /// Siegel point (JSON rows, entries real or [re, im])
        #[arg(long)]
        z: Option<String>,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NumericalFailure { .. }
            | Error::ClosureViolation { .. }
            | Error::BorderlineSpectrum { .. }
            | Error::NotIdempotent { .. }
            | Error::InvalidFrame { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Table(c) => cmd_table(&c),
        Command::Analyze(c) => cmd_analyze(&c),
        Command::Spectral(c) => cmd_spectral(&c),
        Command::Orbit(c) => cmd_orbit(&c),
        Command::Nondegen(c) => cmd_nondegen(&c),
        Command::Flow { common, v, c, t } => cmd_flow(&common, &v, &c, t),
        Command::Siegel {
            common,
            isotropy,
            s,
            a,
            z,
        } => cmd_siegel(&common, isotropy, s.as_deref(), a.as_deref(), z.as_deref()),
    }
}

fn algebra(c: &Common) -> Result<Algebra, Failure> {
    let family = c
        .family
        .ok_or_else(|| Failure::Input("--family is required".into()))?;
    Ok(Algebra::new(AlgebraDescriptor::from_family(family, c.rank, c.n)?))
}

fn emit<T: Serialize>(c: &Common, value: &T, text: impl FnOnce() -> String) {
    if c.json {
        println!("{}", output::to_json(value));
    } else {
        print!("{}", text());
    }
}

#[derive(Serialize)]
struct Pair {
    computed: usize,
    expected: usize,
}

#[derive(Serialize)]
struct TableRow {
    algebra: AlgebraDescriptor,
    dim_v: usize,
    der: Pair,
    sl_omega: Pair,
    aut_h: Pair,
    sl_d: Pair,
    pass: bool,
}

fn table_row(desc: AlgebraDescriptor) -> TableRow {
    let alg = Algebra::new(desc);
    let t: DimTable = fields::dim_table(&alg);
    let e: ClosedFormDims = fields::closed_form_dims(desc.family(), desc.rank(), desc.peirce_constant());
    let pass = t.dim_der == e.dim_der && t.dim_sl_omega == e.dim_sl_omega && t.dim_aut_h == e.dim_aut_h && t.dim_sl_d == e.dim_sl_omega;
    TableRow {
        algebra: desc,
        dim_v: t.dim_v,
        der: Pair { computed: t.dim_der, expected: e.dim_der },
        sl_omega: Pair { computed: t.dim_sl_omega, expected: e.dim_sl_omega },
        aut_h: Pair { computed: t.dim_aut_h, expected: e.dim_aut_h },
        sl_d: Pair { computed: t.dim_sl_d, expected: e.dim_sl_omega },
        pass,
    }
}

/// Algebras covered by `table` when no rank or n is given.
fn desk_range(family: Family) -> Vec<AlgebraDescriptor> {
    let build = |r: Option<usize>, n: Option<usize>| AlgebraDescriptor::from_family(family, r, n).expect("desk algebra");
    match family {
        Family::SpinFactor => (1..=8).map(|n| build(None, Some(n))).collect(),
        Family::HermReal | Family::HermComplex => (2..=5).map(|r| build(Some(r), None)).collect(),
        Family::HermQuaternion => (2..=3).map(|r| build(Some(r), None)).collect(),
        Family::Albert => vec![AlgebraDescriptor::albert()],
    }
}

fn cmd_table(c: &Common) -> Outcome {
    let descs: Vec<AlgebraDescriptor> = match c.family {
        None => Family::ALL.iter().flat_map(|&f| desk_range(f)).collect(),
        Some(f) if c.rank.is_none() && c.n.is_none() => desk_range(f),
        Some(f) => vec![AlgebraDescriptor::from_family(f, c.rank, c.n)?],
    };
    let rows: Vec<TableRow> = descs.into_iter().map(table_row).collect();
    let all = rows.iter().all(|r| r.pass);
    emit(c, &rows, || {
        let mut s = format!(
            "{:<14} {:>4} {:>9} {:>11} {:>11} {:>9}  {}\n",
            "algebra", "dimV", "der", "sl(Omega)", "aut(H)", "sl(D)", "check"
        );
        for r in &rows {
            let cell = |p: &Pair| format!("{}/{}", p.computed, p.expected);
            s += &format!(
                "{:<14} {:>4} {:>9} {:>11} {:>11} {:>9}  {}\n",
                r.algebra.to_string(),
                r.dim_v,
                cell(&r.der),
                cell(&r.sl_omega),
                cell(&r.aut_h),
                cell(&r.sl_d),
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
        s
    });
    Ok(all)
}

fn cmd_analyze(c: &Common) -> Outcome {
    let alg = algebra(c)?;
    let start = Instant::now();
    let options = AnalysisOptions {
        tol: c.tol,
        seed: c.seed,
        ..AnalysisOptions::default()
    };
    let mut r = report::analyze(&alg, c.p, c.q, &options)?;
    if c.timing {
        r.elapsed_seconds = Some(start.elapsed().as_secs_f64());
    }
    emit(c, &r, || r.to_string());
    Ok(true)
}

fn element(c: &Common, alg: &Algebra) -> Result<jordan_cr::Element, Failure> {
    let arg = c
        .element
        .as_deref()
        .ok_or_else(|| Failure::Input("--element is required".into()))?;
    Ok(input::parse_element(alg, arg)?)
}

#[derive(Serialize)]
struct SpectralOutput {
    eigenvalues: Vec<f64>,
    frame: Vec<Vec<f64>>,
    signature: Signature,
    generic_norm: f64,
    residual: f64,
}

fn cmd_spectral(c: &Common) -> Outcome {
    let alg = algebra(c)?;
    let x = element(c, &alg)?;
    let data = spectral::spectral_decompose(&alg, &x, c.tol)?;
    let out = SpectralOutput {
        residual: data.validate(&alg, &x, c.tol.max(spectral::DEFAULT_TOL))?,
        signature: spectral::signature_of(&data, c.tol)?,
        generic_norm: data.eigenvalues.iter().product(),
        frame: data.frame.iter().map(|e| e.as_slice().to_vec()).collect(),
        eigenvalues: data.eigenvalues,
    };
    emit(c, &out, || {
        let eigs: Vec<String> = out.eigenvalues.iter().map(|&l| output::real(l)).collect();
        let mut s = format!("eigenvalues  [{}]\nsignature    {}\nnorm         {}\n", eigs.join(", "), out.signature, output::real(out.generic_norm));
        for (j, e) in out.frame.iter().enumerate() {
            let coords: Vec<String> = e.iter().map(|&x| output::real(x)).collect();
            s += &format!("e{}           [{}]\n", j + 1, coords.join(", "));
        }
        s
    });
    Ok(true)
}

fn cmd_orbit(c: &Common) -> Outcome {
    let alg = algebra(c)?;
    let x = element(c, &alg)?;
    let sig = spectral::orbit_signature(&alg, &x, c.tol)?;
    emit(c, &sig, || format!("{sig}\n"));
    Ok(true)
}

fn cmd_nondegen(c: &Common) -> Outcome {
    let alg = algebra(c)?;
    let orbit = match &c.element {
        Some(_) => TubeOrbit::at_point(&alg, &element(c, &alg)?, spectral::DEFAULT_TOL)?,
        None => tube::make_orbit(&alg, c.p, c.q)?,
    };
    let r = tube::nondegeneracy_order(&orbit, c.tol)?;
    emit(c, &r, || {
        let dims: Vec<String> = r.chain_dims.iter().map(usize::to_string).collect();
        let conv = if r.convention { " (convention)" } else { "" };
        format!("signature  {}\norder      {}{conv}\nchain      [{}]\n", orbit.signature(), r.order, dims.join(", "))
    });
    Ok(true)
}

#[derive(Serialize)]
struct FlowOutput {
    t: f64,
    coefficients: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<Vec<[f64; 2]>>,
}

fn cmd_flow(c: &Common, v: &str, init: &str, t: f64) -> Outcome {
    let v = input::parse_reals(v)?;
    let init = input::parse_complexes(init)?;
    let g = fields::diagonal_flow_coefficients(&v, &init, t)?;
    let point = match c.family {
        Some(_) => {
            let alg = algebra(c)?;
            let z = fields::diagonal_flow(&alg, &alg.diagonal_frame(), &v, &init, t)?;
            Some(z.iter().map(|w| [w.re, w.im]).collect())
        }
        None => None,
    };
    let out = FlowOutput {
        t,
        coefficients: g.iter().map(|w| [w.re, w.im]).collect(),
        point,
    };
    emit(c, &out, || {
        let cs: Vec<String> = g.iter().map(|&w| output::complex(w)).collect();
        let mut s = format!("g(t={}) = [{}]\n", output::real(t), cs.join(", "));
        if let Some(p) = &out.point {
            let zs: Vec<String> = p.iter().map(|w| output::complex(Complex64::new(w[0], w[1]))).collect();
            s += &format!("z(t)     = [{}]\n", zs.join(", "));
        }
        s
    });
    Ok(true)
}

#[derive(Serialize)]
struct IsotropyOutput {
    isotropy_dimension: usize,
    symplectic_dimension: usize,
}

fn cmd_siegel(c: &Common, isotropy: bool, s: Option<&str>, a: Option<&str>, z: Option<&str>) -> Outcome {
    if isotropy {
        let s = input::parse_real_matrix(s.ok_or_else(|| Failure::Input("--isotropy needs --s".into()))?)?;
        let tol = if c.tol > 0.0 { c.tol } else { jordan_cr::linalg::NULL_CUTOFF };
        let out = IsotropyOutput {
            isotropy_dimension: domains::isotropy_dimension(&s, tol)?,
            symplectic_dimension: domains::symplectic_algebra_dimension(s.nrows()),
        };
        emit(c, &out, || format!("{}\n", out.isotropy_dimension));
        return Ok(true);
    }
    let a = input::parse_real_matrix(a.ok_or_else(|| Failure::Input("siegel needs --a and --z, or --isotropy".into()))?)?;
    let a = SymplecticMatrix::new(a)?;
    let z = input::parse_complex_matrix(z.ok_or_else(|| Failure::Input("siegel needs --z".into()))?)?;
    let w = domains::siegel_action(&a, &z)?;
    let rows: Vec<Vec<[f64; 2]>> = w.row_iter().map(|r| r.iter().map(|x| [x.re, x.im]).collect()).collect();
    emit(c, &rows, || {
        w.row_iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|&x| output::complex(x)).collect();
                format!("[{}]\n", cells.join(", "))
            })
            .collect()
    });
    Ok(true)
}
