//! Property suites over randomly drawn parameters.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ptkrein::cartan::{cartan_split, lts_check, make_element, membership_residual, ThetaSignature};
use ptkrein::jaynes_cummings::{build_jc, jc_pt_check, nilpotent_split, LevelEnergies};
use ptkrein::numerics::{eigenvalues, expm, pairing_check, ComplexMatrix};
use ptkrein::point::{
    boundary_maps, bound_states, boundary_transform_check, clifford_angle, matrix_relation_residual,
    p_phi_selfadjointness_check, CouplingMatrixT, PiecewiseFunction, Traces,
};

fn coeff() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn traces() -> impl Strategy<Value = Traces> {
    prop::array::uniform8(-2.0..2.0f64).prop_map(|v| Traces {
        f_plus: C64::new(v[0], v[1]),
        f_minus: C64::new(v[2], v[3]),
        df_plus: C64::new(v[4], v[5]),
        df_minus: C64::new(v[6], v[7]),
    })
}

fn block(rows: usize, cols: usize, antisym: bool) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(-1.0..1.0f64, rows * cols).prop_map(move |flat| {
        let mut b = vec![vec![0.0; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                b[i][j] = if antisym {
                    match i.cmp(&j) {
                        std::cmp::Ordering::Less => flat[i * cols + j],
                        std::cmp::Ordering::Greater => -flat[j * cols + i],
                        std::cmp::Ordering::Equal => 0.0,
                    }
                } else {
                    flat[i * cols + j]
                };
            }
        }
        b
    })
}

fn element(p: usize, q: usize) -> impl Strategy<Value = ptkrein::cartan::GaugeAlgebraElement> {
    (block(p, p, true), block(p, q, false), block(q, q, true))
        .prop_map(move |(u, v, w)| make_element(ThetaSignature::new(p, q).unwrap(), u, v, w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn boundary_maps_are_linear(f in traces(), g in traces(), s in coeff(), t in coeff()) {
        let (pf, pg) = (PiecewiseFunction::from_traces(f), PiecewiseFunction::from_traces(g));
        let combo = pf.scale(C64::new(s, 0.5)).add(&pg.scale(C64::new(t, 0.0)));
        let (bf, bg, bc) = (boundary_maps(&pf), boundary_maps(&pg), boundary_maps(&combo));
        for k in 0..2 {
            let want0 = bf.gamma0[k] * C64::new(s, 0.5) + bg.gamma0[k] * t;
            let want1 = bf.gamma1[k] * C64::new(s, 0.5) + bg.gamma1[k] * t;
            prop_assert!((bc.gamma0[k] - want0).norm() < 1e-12);
            prop_assert!((bc.gamma1[k] - want1).norm() < 1e-12);
        }
    }

    #[test]
    fn solved_angle_satisfies_every_relation(t11 in coeff(), t22 in coeff(), g12 in coeff(), g21 in coeff(), f in traces()) {
        let t = CouplingMatrixT::pt(t11, t22, g12, g21);
        let sol = clifford_angle(&t).unwrap();
        prop_assert!(sol.phi > -std::f64::consts::FRAC_PI_2 && sol.phi <= std::f64::consts::FRAC_PI_2);
        prop_assert!(sol.residual <= 1e-13 * (1.0 + t.max_abs()).powi(2));
        prop_assert!(matrix_relation_residual(&t, &sol) <= 1e-12 * (1.0 + t.max_abs()).powi(2));
        prop_assert!(p_phi_selfadjointness_check(&t, &sol, 1e-12 * (1.0 + t.max_abs()).powi(2)).pass);
        let checks = boundary_transform_check(&t, &sol, &[PiecewiseFunction::from_traces(f)], 1e-12 * (1.0 + t.max_abs()).powi(2)).unwrap();
        prop_assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn bound_state_energies_are_conjugation_closed(t11 in coeff(), t22 in coeff(), g12 in coeff(), g21 in coeff()) {
        let bs = bound_states(&CouplingMatrixT::pt(t11, t22, g12, g21)).unwrap();
        prop_assert!(!pairing_check(&bs.energies(), 1e-9).is_unpaired());
        for s in &bs.states {
            prop_assert!(s.kappa.re > 0.0);
            prop_assert!((s.energy + s.kappa * s.kappa).norm() == 0.0);
        }
    }

    #[test]
    fn triple_bracket_closes_21(a1 in element(2, 1), a2 in element(2, 1), a3 in element(2, 1)) {
        prop_assert!(lts_check(&a1, &a2, &a3).unwrap().closure_residual <= 1e-12);
    }

    #[test]
    fn cartan_parts_stay_in_algebra(a in element(2, 2)) {
        let comp = cartan_split(&a);
        prop_assert!(comp.checks(1e-12).iter().all(|c| c.pass));
        prop_assert!(membership_residual(&a.matrix, a.sig) <= 1e-13);
    }

    #[test]
    fn jc_is_pt_symmetric(a in element(2, 1), w in prop::array::uniform3(-1.0..1.0f64)) {
        let split = nilpotent_split(&a);
        prop_assert!(split.reconstruction_residual() <= 1e-14);
        let h = build_jc(&split, &LevelEnergies::real(&w), 6).unwrap();
        prop_assert!(jc_pt_check(&h, a.sig, 6, 1e-12).unwrap().pass);
        let ev = eigenvalues(&h).unwrap();
        let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(!pairing_check(&ev, 1e-7 * scale).is_unpaired());
    }

    #[test]
    fn exponential_of_generator_is_invertible(a in element(1, 2), x in -2.0..2.0f64) {
        let g = a.matrix.scale_real(x);
        let prod = &expm(&g).unwrap() * &expm(&g.scale_real(-1.0)).unwrap();
        prop_assert!(prod.dist(&ComplexMatrix::identity(3)) <= 1e-10 * (1.0 + g.norm()).exp());
    }
}
