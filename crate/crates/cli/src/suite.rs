//! The ten numbered acceptance criteria, run in-process.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;

use ptkrein::cartan::{
    cartan_split, exponential_checks, make_element, parity_relations_check, random_element, ThetaSignature,
};
use ptkrein::clifford::{rotated_involution, verify_clifford_relations, CliffordGenerators};
use ptkrein::jaynes_cummings::DualBuildConfig;
use ptkrein::numerics::{expm, grid_operator, ComplexMatrix, Grid1D, OperatorKind};
use ptkrein::point::{clifford_angle, matrix_relation_residual, CouplingMatrixT, PhaseGrid, PhiSolution};
use ptkrein::sampling::{seeded, substream, uniform};
use ptkrein::Check;

use crate::commands::{
    gauge_scalar, jc, lts, phase_diagram, point_angle, point_spectrum, spectrum_matrix, Analysis, AppError,
    GaugeChoice, GaugeScalarParams, JcParams, LtsParams, PotentialChoice, SpectrumParams,
};
use crate::report::{worst_by_name, Table};

pub const TITLES: [&str; 10] = [
    "Clifford relations of P and R",
    "rotated involution P_phi",
    "abelian gauge factorization and pseudo-Hermiticity",
    "Cartan split and Lie triple closure",
    "closed-form exponentials",
    "parity and metric identities",
    "matrix Schrodinger regauging",
    "Jaynes-Cummings form",
    "Clifford angle of the coupling matrix",
    "point-interaction spectra",
];

pub struct CriterionOutcome {
    pub number: usize,
    pub title: &'static str,
    pub analysis: Analysis,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        self.analysis.pass()
    }
}

pub fn run_criterion(number: usize, seed: u64) -> Result<CriterionOutcome, AppError> {
    let analysis = match number {
        1 => criterion_1()?,
        2 => criterion_2(seed)?,
        3 => criterion_3(seed)?,
        4 => criterion_4(seed)?,
        5 => criterion_5(seed)?,
        6 => criterion_6(seed)?,
        7 => criterion_7(seed)?,
        8 => criterion_8(seed)?,
        9 => criterion_9(seed)?,
        10 => criterion_10()?,
        n => return Err(AppError::Compute(ptkrein::Error::InvalidArgument(format!("no criterion {n}")))),
    };
    Ok(CriterionOutcome { number, title: TITLES[number - 1], analysis })
}

/// Runs criteria 1 to 10 and merges them into one analysis.
pub fn verify_all(seed: u64) -> Result<Analysis, AppError> {
    let mut out = Analysis::default();
    let mut table = Table::new("criteria", &["criterion", "title", "checks", "failed", "pass"]);
    for n in 1..=10 {
        let started = Instant::now();
        let c = run_criterion(n, seed)?;
        eprintln!("criterion {n}: {:.2} s", started.elapsed().as_secs_f64());
        let failed = c.analysis.checks.iter().filter(|k| !k.pass).count();
        table.push(vec![
            n.into(),
            c.title.into(),
            c.analysis.checks.len().into(),
            failed.into(),
            c.pass().into(),
        ]);
        let mut a = c.analysis.prefixed(&format!("c{n}"));
        a.tables.clear();
        out.absorb(a);
    }
    out.tables.push(table);
    Ok(out)
}

fn criterion_1() -> Result<Analysis, AppError> {
    let started = Instant::now();
    let mut out = Analysis::default();
    let mut worst: f64 = 0.0;
    let mut span_ok = true;
    for (half_count, h) in [(1, 1.0), (4, 0.3), (25, 0.1), (100, 0.05), (256, 0.02)] {
        let grid = Grid1D::new(half_count, h)?;
        let p = grid_operator(grid, OperatorKind::Parity, 1)?.matrix;
        let r = grid_operator(grid, OperatorKind::Sign, 1)?.matrix;
        let rep = verify_clifford_relations(&CliffordGenerators::new(2, 0, vec![p, r])?, 0.0)?;
        worst = worst.max(rep.max_residual);
        span_ok &= rep.span_dim == 4 && rep.expected_span == 4;
    }
    out.checks.push(Check::at_most("PR + RP = 0, P^2 = R^2 = I", worst, 0.0));
    out.checks.push(Check::flag("span {I, P, R, PR} has dimension 4", span_ok));
    out.checks.push(Check::flag("runtime under 1 s", started.elapsed().as_secs_f64() < 1.0));
    Ok(out)
}

fn criterion_2(seed: u64) -> Result<Analysis, AppError> {
    let grid = Grid1D::covering(3.0, 0.1)?;
    let p = grid_operator(grid, OperatorKind::Parity, 1)?;
    let r = grid_operator(grid, OperatorKind::Sign, 1)?;
    let mut rng = seeded(seed);
    let (mut inv, mut inter, mut route): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let rot = rotated_involution(&p, &r, uniform(&mut rng, -PI, PI))?;
        inv = inv.max(rot.involution_residual());
        inter = inter.max(rot.intertwining_residual()?);
        route = route.max(rot.route_difference);
    }
    let mut out = Analysis::default();
    out.checks.push(Check::at_most("P_phi^2 = I and P_phi^dag = P_phi (20 phi)", inv, 1e-12));
    out.checks.push(Check::at_most("P e^{i phi R} = e^{-i phi R} P", inter, 1e-12));
    out.value("route_difference", route);
    Ok(out)
}

fn criterion_3(seed: u64) -> Result<Analysis, AppError> {
    let base = |alpha: f64, beta: f64| GaugeScalarParams {
        alpha,
        beta,
        half_width: 8.0,
        h: 0.05,
        tol: 1e-8,
        closed_form_tol: 1e-12,
    };
    let mut out = gauge_scalar(&base(0.0, 0.3), seed)?.prefixed("A=0.3ix");
    out.absorb(gauge_scalar(&base(1.0, 0.0), seed)?.prefixed("A=1"));
    Ok(out)
}

fn criterion_4(seed: u64) -> Result<Analysis, AppError> {
    let params = LtsParams { samples: 1000, scale: 1.0, tol: 1e-12, escape_min: 0.1 };
    let mut out = Analysis::default();
    for (i, (p, q)) in [(2, 1), (2, 2), (3, 1)].into_iter().enumerate() {
        let sig = ThetaSignature::new(p, q)?;
        let mut a = lts(sig, &params, seed.wrapping_add(i as u64))?.prefixed(&format!("({p},{q})"));
        a.tables.clear();
        out.absorb(a);
        let (dk, dp) = ptkrein::cartan::dimension_counts(sig);
        out.checks.push(Check::flag(format!("({p},{q}).rank dim k_Theta = pq"), dk == p * q));
        out.checks.push(Check::flag(
            format!("({p},{q}).rank dim p_Theta = p(p-1)/2 + q(q-1)/2"),
            dp == p * (p - 1) / 2 + q * (q - 1) / 2,
        ));
    }
    Ok(out)
}

/// `e^{ax}` for `a = [[0, z], [−z, 0]]` from `a² = −z²I`.
fn two_by_two_oracle(a: &ComplexMatrix, x: f64) -> ComplexMatrix {
    let z = a[(0, 1)];
    let zx = z * x;
    let (cos, sinc) = if z.norm() == 0.0 { (C64::new(1.0, 0.0), C64::new(x, 0.0)) } else { (zx.cos(), zx.sin() / z) };
    &ComplexMatrix::identity(2).scale(cos) + &a.scale(sinc)
}

fn criterion_5(seed: u64) -> Result<Analysis, AppError> {
    let xs: Vec<f64> = (0..101).map(|i| -5.0 + 0.1 * i as f64).collect();
    let alpha = 0.7;
    let rotation = make_element(ThetaSignature::new(1, 1)?, vec![vec![0.0]], vec![vec![alpha]], vec![vec![0.0]])?;
    let boost = make_element(
        ThetaSignature::new(2, 0)?,
        vec![vec![0.0, -alpha], vec![alpha, 0.0]],
        vec![vec![]; 2],
        vec![],
    )?;
    let mut out = Analysis::default();
    for (label, a) in [("rotation, Theta = sigma3", &rotation), ("boost, Theta = I2", &boost)] {
        let comp = cartan_split(a);
        let mut all = Vec::new();
        let mut oracle: f64 = 0.0;
        for &x in &xs {
            all.extend(exponential_checks(&comp, x, 1e-10)?);
            let closed = two_by_two_oracle(&a.matrix, x);
            oracle = oracle.max(expm(&a.matrix.scale_real(x))?.rel_dist(&closed));
        }
        out.checks.extend(worst_by_name(all).into_iter().map(|c| c.prefixed(label)));
        out.checks.push(Check::at_most(format!("{label}.expm vs cos/sin closed form"), oracle, 1e-10));
    }
    let rot = rotation.matrix[(0, 1)];
    let boo = boost.matrix[(0, 1)];
    out.checks.push(Check::flag("rotation generator is real", rot.im == 0.0 && rot.re != 0.0));
    out.checks.push(Check::flag("boost generator is imaginary", boo.re == 0.0 && boo.im != 0.0));

    let mut random = Vec::new();
    for (i, (p, q)) in [(2, 1), (2, 2), (3, 1), (1, 2)].into_iter().enumerate() {
        let sig = ThetaSignature::new(p, q)?;
        for j in 0..5 {
            let a = random_element(sig, &mut substream(seed, (10 * i + j) as u64), 0.5);
            let comp = cartan_split(&a);
            for &x in &xs {
                random.extend(exponential_checks(&comp, x, 1e-10)?);
            }
        }
    }
    out.checks.extend(worst_by_name(random).into_iter().map(|c| c.prefixed("random")));
    Ok(out)
}

fn criterion_6(seed: u64) -> Result<Analysis, AppError> {
    let sig = ThetaSignature::new(2, 1)?;
    let mut all = Vec::new();
    for i in 0..500 {
        let mut rng = substream(seed, i);
        let a = random_element(sig, &mut rng, 1.0);
        let x = uniform(&mut rng, -2.0, 2.0);
        all.extend(parity_relations_check(&a, x, 1e-10)?);
    }
    Ok(Analysis { checks: worst_by_name(all), ..Analysis::default() })
}

fn criterion_7(seed: u64) -> Result<Analysis, AppError> {
    spectrum_matrix(
        &SpectrumParams {
            sig: ThetaSignature::new(1, 1)?,
            gauge: GaugeChoice::Fixed,
            gauge_scale: 1.0,
            potential: PotentialChoice::Pt,
            half_width: 8.0,
            h: 0.05,
            k: 20,
            tol: 5e-2,
            order_min: 1.8,
        },
        seed,
    )
}

fn criterion_8(seed: u64) -> Result<Analysis, AppError> {
    jc(
        &JcParams {
            sig: ThetaSignature::new(1, 1)?,
            alpha: 0.3,
            scale: 0.5,
            omega: vec![0.0, 0.5],
            dual: DualBuildConfig { half_width: 9.0, h: 0.05, n_max: 12, k: 6, n_op: 6 },
            tol: 5e-2,
            trunc_tol: 1e-6,
        },
        seed,
    )
}

fn criterion_9(seed: u64) -> Result<Analysis, AppError> {
    let mut out = Analysis::default();
    let mut rng = seeded(seed);
    let mut zero = true;
    for _ in 0..50 {
        let g = uniform(&mut rng, -3.0, 3.0);
        let t = CouplingMatrixT::pt(uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0), g, g);
        zero &= clifford_angle(&t)?.phi == 0.0;
    }
    let deg = clifford_angle(&CouplingMatrixT::pt(2.0, -2.5, 1.0, 1.0))?;
    zero &= deg.phi == 0.0 && deg.degenerate;
    out.checks.push(Check::flag("t12 = t21 gives phi = 0 exactly (50 samples + degenerate)", zero));

    let example = CouplingMatrixT::pt(1.0, 0.0, 1.0, -1.0);
    let sol = clifford_angle(&example)?;
    out.checks.push(Check::at_most("example phi - atan2(4, 3)", (sol.phi - 4f64.atan2(3.0)).abs(), 1e-13));
    out.absorb(point_angle(&example, 1e-12, 1e-13)?.prefixed("example"));

    let (mut relation, mut wrong_min, mut nondegenerate): (f64, f64, usize) = (0.0, f64::INFINITY, 0);
    for i in 0..100 {
        let mut r = substream(seed, 1000 + i);
        let mut draw = || uniform(&mut r, -2.0, 2.0);
        let t = CouplingMatrixT::pt(draw(), draw(), draw(), draw());
        let sol = clifford_angle(&t)?;
        relation = relation.max(matrix_relation_residual(&t, &sol));
        if !sol.degenerate {
            nondegenerate += 1;
            wrong_min = wrong_min.min(matrix_relation_residual(&t, &PhiSolution::at(sol.phi + 0.1)));
        }
    }
    out.checks.push(Check::at_most("T^dag M2 T = M1 T - T^dag M1 - 4 M2 (100 random T)", relation, 1e-12));
    out.checks.push(Check::at_least("relation fails at phi + 0.1 (min over non-degenerate)", wrong_min, 1e-12));
    out.value("nondegenerate_samples", nondegenerate);
    Ok(out)
}

fn criterion_10() -> Result<Analysis, AppError> {
    let t = CouplingMatrixT::pt(-2.0, 0.0, 0.0, 0.0);
    let mut out = point_spectrum(&t, 1e-4, 1e-3)?.prefixed("delta t11=-2");
    let sweep = PhaseGrid {
        t11: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
        t22: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
        im_t12: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
        im_t21: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
    };
    let mut phase = phase_diagram(&sweep)?.prefixed("sweep");
    phase.tables.clear();
    out.absorb(phase);
    Ok(out)
}
