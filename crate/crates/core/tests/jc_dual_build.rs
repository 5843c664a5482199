use ptkrein::cartan::{make_element, random_element, ThetaSignature};
use ptkrein::jaynes_cummings::{
    build_jc, jc_equivalence_check, nilpotent_split, truncation_change, CrossTerm, DualBuildConfig, LevelEnergies,
};
use ptkrein::numerics::eigenvalues;
use ptkrein::sampling::seeded;

fn cfg(n_max: usize) -> DualBuildConfig {
    DualBuildConfig { half_width: 9.0, h: 0.05, n_max, k: 6, n_op: 6 }
}

#[test]
fn two_level_example_agrees_under_swapped_cross_term() {
    let sig = ThetaSignature::new(1, 1).unwrap();
    let a = make_element(sig, vec![vec![0.0]], vec![vec![0.3]], vec![vec![0.0]]).unwrap();
    let r = jc_equivalence_check(&a, &LevelEnergies::real(&[0.0, 0.5]), cfg(12)).unwrap();
    let best = r.best();
    assert_eq!(best.cross, CrossTerm::Swapped);
    assert!(best.spectral <= 5e-2, "{}", best.spectral);
    assert!(r.best_stated() > 0.1);
    let op = r
        .conventions
        .iter()
        .min_by(|x, y| x.operator_residual.total_cmp(&y.operator_residual))
        .unwrap();
    assert_eq!((op.cross, op.sign), (CrossTerm::Swapped, 1.0));
    assert!(op.operator_residual < 1e-2);
}

#[test]
fn random_mixed_signature_agrees() {
    let mut rng = seeded(5);
    let a = random_element(ThetaSignature::new(2, 1).unwrap(), &mut rng, 0.4);
    let c = DualBuildConfig { half_width: 10.0, n_max: 16, ..cfg(16) };
    let r = jc_equivalence_check(&a, &LevelEnergies::real(&[0.0, 0.3, 0.6]), c).unwrap();
    assert_eq!(r.best().cross, CrossTerm::Swapped);
    assert!(r.best().spectral <= 5e-2);
    assert!(!r.grid_pairing.is_unpaired());
}

#[test]
fn truncation_converges() {
    let sig = ThetaSignature::new(1, 1).unwrap();
    let a = make_element(sig, vec![vec![0.0]], vec![vec![0.3]], vec![vec![0.0]]).unwrap();
    let s = nilpotent_split(&a);
    let omega = LevelEnergies::real(&[0.0, 0.5]);
    assert!(truncation_change(&s, &omega, 12, 18, 6).unwrap() < 1e-6);

    let mut rng = seeded(21);
    let a = random_element(ThetaSignature::new(2, 2).unwrap(), &mut rng, 0.5);
    let s = nilpotent_split(&a);
    let omega = LevelEnergies::real(&[0.0, 0.2, 0.4, 0.6]);
    assert!(truncation_change(&s, &omega, 12, 18, 6).unwrap() < 1e-6);
}

#[test]
fn validation_rejects_small_box() {
    let sig = ThetaSignature::new(1, 1).unwrap();
    let a = make_element(sig, vec![vec![0.0]], vec![vec![0.3]], vec![vec![0.0]]).unwrap();
    let small = DualBuildConfig { half_width: 5.0, ..cfg(12) };
    assert!(jc_equivalence_check(&a, &LevelEnergies::real(&[0.0, 0.5]), small).is_err());
    let s = nilpotent_split(&a);
    assert!(eigenvalues(&build_jc(&s, &LevelEnergies::real(&[0.0, 0.5]), 4).unwrap()).is_ok());
}
