//! The real composition algebras K_n (n = 1, 2, 4, 8) built by the
//! Cayley–Dickson doubling `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
//!
//! With this rule the conjugation is `(x_1, -x_2, ..., -x_n)` and the unit is
//! the first coordinate. For n = 8 the resulting octonion table is fixed by
//! the recursion; the mirror convention gives an isomorphic algebra.

use crate::linalg::Scalar;

/// Multiplication table of K_n: `e_i e_j = sign * e_k`.
#[derive(Debug, Clone)]
pub struct Division {
    n: usize,
    table: Vec<(f64, usize)>,
}

impl Division {
    pub fn new(n: usize) -> Self {
        assert!(matches!(n, 1 | 2 | 4 | 8), "K_n only exists for n = 1, 2, 4, 8");
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut a = vec![0.0; n];
                let mut b = vec![0.0; n];
                a[i] = 1.0;
                b[j] = 1.0;
                let p = doubling_product(&a, &b);
                let (k, sign) = p
                    .iter()
                    .enumerate()
                    .find(|(_, v)| v.abs() > 0.5)
                    .map(|(k, v)| (k, v.signum()))
                    .expect("basis units multiply to a signed unit");
                table.push((sign, k));
            }
        }
        Self { n, table }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Accumulate `scale * a b` into `out`.
    pub fn mul_acc<T: Scalar>(&self, a: &[T], b: &[T], scale: T, out: &mut [T]) {
        for (i, &ai) in a.iter().enumerate() {
            if ai == T::zero() {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let (sign, k) = self.table[i * self.n + j];
                out[k] += scale * ai * bj * T::from_real(sign);
            }
        }
    }

    pub fn mul<T: Scalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.n];
        self.mul_acc(a, b, T::one(), &mut out);
        out
    }

    pub fn conj<T: Scalar>(&self, a: &[T]) -> Vec<T> {
        a.iter()
            .enumerate()
            .map(|(i, &x)| if i == 0 { x } else { -x })
            .collect()
    }
}

fn doubling_product(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    if n == 1 {
        return vec![a[0] * b[0]];
    }
    let h = n / 2;
    let (a1, a2) = a.split_at(h);
    let (b1, b2) = b.split_at(h);
    let conj = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| if i == 0 { v } else { -v })
            .collect()
    };
    let left = sub(&doubling_product(a1, b1), &doubling_product(&conj(b2), a2));
    let right = add(&doubling_product(b2, a1), &doubling_product(a2, &conj(b1)));
    [left, right].concat()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
