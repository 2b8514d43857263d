use jordan_cr::linalg::{binomial, NULL_CUTOFF};
use jordan_cr::report::{self, AnalysisOptions};
use jordan_cr::spectral;
use jordan_cr::tube::{self, Order, SubspaceLabel, TubeOrbit};
use jordan_cr::{Algebra, Error, Family};

fn small_desk() -> Vec<Algebra> {
    vec![
        Algebra::build(Family::SpinFactor, 2, 3).unwrap(),
        Algebra::build(Family::HermReal, 3, 1).unwrap(),
        Algebra::build(Family::HermComplex, 3, 2).unwrap(),
        Algebra::build(Family::HermQuaternion, 2, 4).unwrap(),
    ]
}

#[test]
fn subspaces_are_orthonormal_and_sized() {
    for alg in small_desk() {
        let (r, n) = (alg.rank(), alg.peirce_constant());
        for sig in spectral::all_signatures(r) {
            let orbit = tube::make_orbit(&alg, sig.p, sig.q).unwrap();
            let t = tube::tangent_data(&orbit);
            let dims = tube::cr_dimensions(alg.descriptor(), sig.p, sig.q).unwrap();
            assert_eq!(t.holomorphic_tangent.dim(), dims.crdim);
            assert_eq!(t.cone_tangent.dim(), alg.dim() - dims.crcodim);
            assert_eq!(t.holomorphic_tangent.label, SubspaceLabel::HolomorphicTangent);
            let [one, half, zero] = tube::peirce_bases(&orbit);
            let rho = sig.rank();
            assert_eq!(one.dim(), rho + binomial(rho, 2) * n);
            assert_eq!(half.dim(), rho * (r - rho) * n);
            assert_eq!(zero.dim(), dims.crcodim);
            for b in [&one, &half, &zero, &t.holomorphic_tangent] {
                assert!(b.orthonormality_residual(&alg).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn levi_kernel_is_the_first_peirce_block() {
    for alg in small_desk() {
        for sig in spectral::all_signatures(alg.rank()) {
            let orbit = tube::make_orbit(&alg, sig.p, sig.q).unwrap();
            let kernel = tube::levi_kernel(&orbit, NULL_CUTOFF).unwrap();
            assert!(kernel.block_residual(orbit.projections()[0]) < 1e-9, "{} {sig}", alg.descriptor());
        }
    }
}

#[test]
fn conventions_at_the_extremes() {
    for alg in small_desk() {
        let r = alg.rank();
        let real = tube::nondegeneracy_order(&tube::make_orbit(&alg, 0, 0).unwrap(), NULL_CUTOFF).unwrap();
        assert_eq!(real.order, Order::Finite(0));
        assert!(real.convention);
        let open = tube::nondegeneracy_order(&tube::make_orbit(&alg, r, 0).unwrap(), NULL_CUTOFF).unwrap();
        assert_eq!(open.order, Order::NotFinitelyNondegenerate);
        assert!(!tube::minimality_check(&tube::make_orbit(&alg, 0, 0).unwrap(), NULL_CUTOFF).unwrap());
        assert!(matches!(tube::aut_germ_dimension(alg.descriptor(), r, 0), Err(Error::InvalidSignature { .. })));
    }
}

#[test]
fn arbitrary_points_agree_with_canonical_representatives() {
    let alg = Algebra::build(Family::HermComplex, 3, 2).unwrap();
    let a = alg.diagonal(&[3.0, -0.5, 0.0]).unwrap();
    let orbit = TubeOrbit::at_point(&alg, &a, NULL_CUTOFF).unwrap();
    assert_eq!((orbit.signature().p, orbit.signature().q), (1, 1));
    let chain = tube::nondegeneracy_order(&orbit, NULL_CUTOFF).unwrap();
    let canonical = tube::nondegeneracy_order(&tube::make_orbit(&alg, 1, 1).unwrap(), NULL_CUTOFF).unwrap();
    assert_eq!(chain.chain_dims, canonical.chain_dims);
    assert_eq!(tube::levi_kernel(&orbit, NULL_CUTOFF).unwrap().dim(), 4);
}

#[test]
fn aut1_fields_have_the_expected_count() {
    for alg in small_desk() {
        let r = alg.rank();
        for sig in spectral::all_signatures(r).into_iter().filter(|s| s.rank() > 0 && s.rank() < r) {
            let orbit = tube::make_orbit(&alg, sig.p, sig.q).unwrap();
            let fields = tube::aut1_basis(&orbit).unwrap();
            let dims = tube::cr_dimensions(alg.descriptor(), sig.p, sig.q).unwrap();
            assert_eq!(fields.len(), dims.crcodim);
        }
    }
}

#[test]
fn report_is_deterministic() {
    let alg = Algebra::build(Family::HermReal, 3, 1).unwrap();
    let opts = AnalysisOptions { seed: 9, ..AnalysisOptions::default() };
    let a = report::analyze(&alg, 1, 1, &opts).unwrap();
    let b = report::analyze(&alg, 1, 1, &opts).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.chain_dims, vec![a.crdim, a.levi_kernel_dim, 0]);
    assert_eq!((a.crdim, a.levi_kernel_dim), (5, 3));
}
