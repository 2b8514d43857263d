//! Random test elements.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::jordan::{Algebra, ComplexElement, Element};

/// Standard Gaussian coordinates.
pub fn element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Element {
    Element::from_fn(alg.dim(), |_, _| rng.sample(StandardNormal))
}

pub fn complex_element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> ComplexElement {
    ComplexElement::from_fn(alg.dim(), |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// A point of the open cone: `x² + εe` with `x` Gaussian and `ε = 0.1`.
pub fn cone_element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> Element {
    let x = element(alg, rng);
    alg.square(&x).expect("dimensions agree") + alg.unit() * 0.1
}

/// A point of the tube domain `Ω ⊕ iV`.
pub fn tube_element<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R) -> ComplexElement {
    let re = cone_element(alg, rng);
    let im = element(alg, rng);
    re.zip_map(&im, Complex64::new)
}
