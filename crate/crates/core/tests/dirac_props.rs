use proptest::prelude::*;
use toricq::dirac1d::{
    analytic_zero_mode_count, analyze_grid, build_operator, deformation_sweep, disc_zero_mode_count, model_index,
    probe_acyclicity, product_index, Chirality, Deformation, ModelKind, ModelSpec1D, ProfileMu, Region,
};
use toricq::Weight;

const N: usize = 300;

fn oracle(kind: ModelKind, rho: i64, tau: i64) -> i64 {
    match kind {
        ModelKind::Cylinder => {
            let p = ProfileMu::new(rho);
            analytic_zero_mode_count(&p, tau, Chirality::Plus).unwrap()
                - analytic_zero_mode_count(&p, tau, Chirality::Minus).unwrap()
        }
        ModelKind::Disc => disc_zero_mode_count(rho, tau, Chirality::Plus) - disc_zero_mode_count(rho, tau, Chirality::Minus),
    }
}

fn kind() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::Cylinder), Just(ModelKind::Disc)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn index_is_shift_equivariant(kind in kind(), rho in -6i64..=6, offset in -3i64..=3, k in -50i64..=50) {
        let a = model_index(&ModelSpec1D::new(kind, rho, rho + offset).with_grid(5.0, N)).unwrap();
        let b = model_index(&ModelSpec1D::new(kind, rho + k, rho + offset + k).with_grid(5.0, N)).unwrap();
        prop_assert_eq!(a.index, b.index);
        prop_assert_eq!(a.index, oracle(kind, rho, rho + offset));
        prop_assert_eq!(a.index, (offset == 0) as i64);
    }

    #[test]
    fn index_is_stable_under_refinement(kind in kind(), rho in -3i64..=3, offset in -3i64..=3) {
        let spec = ModelSpec1D::new(kind, rho, rho + offset);
        let mut seen = Vec::new();
        for (r, n) in [(5.0, N), (5.0, 2 * N), (7.0, N)] {
            let g = analyze_grid(&build_operator(&spec.with_grid(r, n)).unwrap());
            prop_assert!(g.resolved());
            prop_assert!(g.separation_ratio().unwrap() >= 100.0);
            seen.push(g.index().unwrap());
        }
        prop_assert!(seen.windows(2).all(|w| w[0] == w[1]), "{:?}", seen);
    }
}

#[test]
fn deformation_families_agree() {
    let family = [
        Deformation::ConstantT(50.0),
        Deformation::ConstantT(100.0),
        Deformation::ConstantT(500.0),
        Deformation::ProperFunction,
        Deformation::EpsilonFamily(0.0),
        Deformation::EpsilonFamily(0.5),
        Deformation::EpsilonFamily(1.0),
    ];
    for (rho, tau) in [(0, 0), (1, 1), (0, 2)] {
        let sweep = deformation_sweep(&ModelSpec1D::cylinder(rho, tau).with_grid(5.0, N), &family);
        assert!(sweep.all_equal);
        for e in &sweep.entries {
            assert_eq!(e.result.as_ref().unwrap().index, (rho == tau) as i64, "{}", e.deformation);
        }
    }
}

#[test]
fn products_multiply() {
    let specs = [ModelSpec1D::cylinder(1, 0).with_grid(5.0, N), ModelSpec1D::disc(2, 0).with_grid(5.0, N)];
    assert_eq!(product_index(&specs, &Weight(vec![1, 2])).unwrap(), 1);
    assert_eq!(product_index(&specs, &Weight(vec![1, 3])).unwrap(), 0);
    assert_eq!(product_index(&[], &Weight(vec![])).unwrap(), 1);
    assert!(product_index(&specs, &Weight(vec![1])).is_err());
}

#[test]
fn acyclicity_bounds_follow_the_profile() {
    let s = ModelSpec1D::cylinder(0, 0);
    let away = probe_acyclicity(&s, &Region::outside(0.5)).unwrap();
    let m = ProfileMu::new(0).value(0.5);
    assert!((away.kappa - m * m).abs() < 1e-12);
    assert!(away.c_rho.is_finite() && away.c_rho > 0.0);
    assert_eq!(probe_acyclicity(&s, &Region::line()).unwrap().kappa, 0.0);
    let shifted = probe_acyclicity(&ModelSpec1D::cylinder(0, 1), &Region::line()).unwrap();
    assert!(shifted.kappa >= 0.25);
}
