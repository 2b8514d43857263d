//! Small dense linear-algebra helpers shared by the modules: numeric rank,
//! null spaces and orthonormal ranges with a relative singular-value cutoff.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

/// Singular values below `NULL_CUTOFF * sigma_max` count as zero.
pub const NULL_CUTOFF: f64 = 1e-8;

/// Scalars the algebra is defined over: the reals and their complexification.
pub trait Scalar: ComplexField<RealField = f64> + Copy + backend::Svd {}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

pub mod backend {
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    /// Singular value decomposition `m = U diag(s) Vᴴ`, values nonincreasing.
    pub struct Factors<T> {
        pub values: Vec<f64>,
        pub u: DMatrix<T>,
        pub v: DMatrix<T>,
    }

    pub trait Svd: Sized {
        /// Thin factors when `thin`, otherwise square `U` and `V`.
        fn factor(m: &DMatrix<Self>, thin: bool) -> Factors<Self>;
        fn values(m: &DMatrix<Self>) -> Vec<f64>;
    }

    macro_rules! impl_svd {
        ($t:ty, $re:expr) => {
            impl Svd for $t {
                fn factor(m: &DMatrix<$t>, thin: bool) -> Factors<$t> {
                    let a = faer::Mat::<$t>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
                    let svd = if thin { a.thin_svd() } else { a.svd() }.expect("svd converges");
                    let (u, v) = (svd.U(), svd.V());
                    let s = svd.S().column_vector();
                    Factors {
                        values: (0..s.nrows()).map(|i| $re(s[i])).collect(),
                        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
                        v: DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)]),
                    }
                }

                fn values(m: &DMatrix<$t>) -> Vec<f64> {
                    let a = faer::Mat::<$t>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
                    a.singular_values().expect("svd converges")
                }
            }
        };
    }

    impl_svd!(f64, |x: f64| x);
    impl_svd!(Complex64, |z: Complex64| z.re);
}

/// Relative cutoff applied to a nonincreasing list of singular values.
fn kept(values: &[f64], rel: f64) -> usize {
    let smax = values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    values.iter().filter(|&&s| s > rel * smax).count()
}

pub(crate) fn to_complex_vec(v: &DVector<f64>) -> DVector<Complex64> {
    v.map(|x| Complex64::new(x, 0.0))
}

pub(crate) fn to_complex_mat(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Rank of `m` with the relative cutoff `rel`.
pub fn numeric_rank<T: Scalar>(m: &DMatrix<T>, rel: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    kept(&T::values(m), rel)
}

/// Orthonormal (Euclidean) basis of the null space of `m`.
pub fn nullspace<T: Scalar>(m: &DMatrix<T>, rel: f64) -> Vec<DVector<T>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..n).map(|i| DVector::from_fn(n, |j, _| if i == j { T::one() } else { T::zero() })).collect();
    }
    let f = T::factor(m, false);
    let rank = kept(&f.values, rel);
    (rank..n).map(|i| f.v.column(i).into_owned()).collect()
}

/// Orthonormal basis of the column range of `m` (Euclidean inner product).
pub fn orthonormal_range<T: Scalar>(m: &DMatrix<T>, rel: f64) -> Vec<DVector<T>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let f = T::factor(m, true);
    let rank = kept(&f.values, rel);
    (0..rank).map(|i| f.u.column(i).into_owned()).collect()
}

/// Minimum-norm least-squares solution of `m x = b`, ignoring singular
/// values below `rel * sigma_max`.
pub fn least_squares<T: Scalar>(m: &DMatrix<T>, b: &DVector<T>, rel: f64) -> DVector<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DVector::zeros(m.ncols());
    }
    let f = T::factor(m, true);
    let rank = kept(&f.values, rel);
    let mut x = DVector::<T>::zeros(m.ncols());
    for i in 0..rank {
        let coeff = f.u.column(i).dotc(b) * T::from_real(1.0 / f.values[i]);
        x += f.v.column(i) * coeff;
    }
    x
}

/// Stack vectors as the columns of a matrix with `nrows` rows.
pub fn columns<T: Scalar>(nrows: usize, vs: &[DVector<T>]) -> DMatrix<T> {
    let mut m = DMatrix::<T>::zeros(nrows, vs.len());
    for (j, v) in vs.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Symmetric square root and inverse square root of a positive definite matrix.
pub(crate) fn sqrt_and_inv_sqrt(g: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let eig = g.clone().symmetric_eigen();
    let q = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    let di = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    (q * d * q.transpose(), q * di * q.transpose())
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
