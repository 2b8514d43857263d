use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{offdiag_offset, Algebra, Element, Family};

/// Faithful matrix realization of `H_r(ℝ)`, `H_r(ℂ)` (as `r×r` complex
/// Hermitian matrices) and `H_r(ℍ)` (as `2r×2r` complex Hermitian matrices,
/// `a + b j ↦ [[a, b], [-b̄, ā]]`). The Jordan product becomes the symmetrized
/// matrix product.
#[derive(Debug, Clone, Copy)]
pub struct HermitianRealization {
    family: Family,
    rank: usize,
    n: usize,
}

impl HermitianRealization {
    pub(crate) fn for_algebra(alg: &Algebra) -> Option<Self> {
        match alg.family() {
            Family::HermReal | Family::HermComplex | Family::HermQuaternion => Some(Self {
                family: alg.family(),
                rank: alg.rank(),
                n: alg.peirce_constant(),
            }),
            _ => None,
        }
    }

    /// Size of the realizing matrices.
    pub fn size(&self) -> usize {
        if self.family == Family::HermQuaternion {
            2 * self.rank
        } else {
            self.rank
        }
    }

    pub fn is_quaternionic(&self) -> bool {
        self.family == Family::HermQuaternion
    }

    fn block(&self, q: &[f64]) -> [[Complex64; 2]; 2] {
        let a = Complex64::new(q[0], q[1]);
        let b = Complex64::new(q[2], q[3]);
        [[a, b], [-b.conj(), a.conj()]]
    }

    pub fn to_matrix(&self, x: &Element) -> DMatrix<Complex64> {
        let r = self.rank;
        let n = self.n;
        let s = self.size();
        let mut m = DMatrix::<Complex64>::zeros(s, s);
        for j in 0..r {
            match self.family {
                Family::HermQuaternion => {
                    m[(2 * j, 2 * j)] = x[j].into();
                    m[(2 * j + 1, 2 * j + 1)] = x[j].into();
                }
                _ => m[(j, j)] = x[j].into(),
            }
            for k in j + 1..r {
                let o = offdiag_offset(r, n, j, k);
                match self.family {
                    Family::HermReal => {
                        m[(j, k)] = x[o].into();
                        m[(k, j)] = x[o].into();
                    }
                    Family::HermComplex => {
                        let z = Complex64::new(x[o], x[o + 1]);
                        m[(j, k)] = z;
                        m[(k, j)] = z.conj();
                    }
                    _ => {
                        let blk = self.block(&x.as_slice()[o..o + 4]);
                        for a in 0..2 {
                            for b in 0..2 {
                                m[(2 * j + a, 2 * k + b)] = blk[a][b];
                                m[(2 * k + b, 2 * j + a)] = blk[a][b].conj();
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Inverse of [`to_matrix`](Self::to_matrix) on Hermitian matrices of the
    /// right shape; other matrices are read off entrywise from the upper triangle.
    pub fn from_matrix(&self, m: &DMatrix<Complex64>) -> Element {
        let r = self.rank;
        let n = self.n;
        let mut x = Element::zeros(r + r * (r - 1) / 2 * n);
        for j in 0..r {
            match self.family {
                Family::HermQuaternion => {
                    x[j] = 0.5 * (m[(2 * j, 2 * j)].re + m[(2 * j + 1, 2 * j + 1)].re);
                }
                _ => x[j] = m[(j, j)].re,
            }
            for k in j + 1..r {
                let o = offdiag_offset(r, n, j, k);
                match self.family {
                    Family::HermReal => x[o] = m[(j, k)].re,
                    Family::HermComplex => {
                        x[o] = m[(j, k)].re;
                        x[o + 1] = m[(j, k)].im;
                    }
                    _ => {
                        let a = m[(2 * j, 2 * k)];
                        let b = m[(2 * j, 2 * k + 1)];
                        x[o] = a.re;
                        x[o + 1] = a.im;
                        x[o + 2] = b.re;
                        x[o + 3] = b.im;
                    }
                }
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn realization_is_a_jordan_isomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (fam, n) in [(Family::HermReal, 1), (Family::HermComplex, 2), (Family::HermQuaternion, 4)] {
            for r in 1..=4 {
                let alg = Algebra::build(fam, r, n).unwrap();
                let real = alg.hermitian_realization().unwrap();
                for _ in 0..10 {
                    let x = sample::element(&alg, &mut rng);
                    let y = sample::element(&alg, &mut rng);
                    let xm = real.to_matrix(&x);
                    let ym = real.to_matrix(&y);
                    assert!((&xm - xm.adjoint()).camax() < 1e-15);
                    assert!((real.from_matrix(&xm) - &x).camax() < 1e-15);
                    let sym = (&xm * &ym + &ym * &xm) * Complex64::new(0.5, 0.0);
                    let lhs = real.from_matrix(&sym);
                    let rhs = alg.jordan_product(&x, &y).unwrap();
                    assert!((lhs - rhs).camax() < 1e-12, "{fam} r={r}");
                }
            }
        }
    }

    #[test]
    fn spin_and_albert_have_no_matrix_realization() {
        assert!(Algebra::build(Family::SpinFactor, 2, 3).unwrap().hermitian_realization().is_none());
        assert!(Algebra::build(Family::Albert, 3, 8).unwrap().hermitian_realization().is_none());
    }
}
