//! Subcommand implementations. Each analysis returns checks, scalar values
//! and tables; [`run`] wraps them into a [`Report`].

use num_complex::Complex64 as C64;

use ptkrein::abelian::{
    build_scalar_hamiltonian, gauge_factorization, verify_pseudo_hermiticity, ScalarPotentials, Stencil,
};
use ptkrein::cartan::{
    cartan_split, dimension_counts, exponential_checks, group_polar, lts_check, make_element, parity_relations_check,
    random_element, wick_check, GaugeAlgebraElement, ThetaSignature,
};
use ptkrein::jaynes_cummings::{
    build_jc, jc_equivalence_check, jc_pt_check, nilpotent_split, potential_audit, truncation_change, CrossTerm,
    DualBuildConfig, LevelEnergies,
};
use ptkrein::matrix_schrodinger::{
    build_and_regauge, sample_potential, spectral_compare, symmetry_audit, ConstantGauge, MatrixPotential,
};
use ptkrein::numerics::spectrum::diagonal_spectrum;
use ptkrein::numerics::{expm, observed_order, ComplexMatrix, Grid1D};
use ptkrein::point::{
    bound_states, boundary_transform_check, clifford_angle, delta_well_grid_energy, matrix_relation_residual,
    p_phi_selfadjointness_check, pt_phase_sweep, CouplingMatrixT, PhaseClass, PhaseGrid, PhiSolution,
    PiecewiseFunction, Traces, BOUND_TOL,
};
use ptkrein::sampling::{seeded, substream};
use ptkrein::{Check, Error};

use crate::config::{RunConfig, UsageError};
use crate::report::{worst_by_name, Cell, NamedValue, Report, Table};
use crate::suite;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error("computation failed: {0}")]
    Compute(Error),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(reason) => {
                AppError::Usage(UsageError::Malformed { key: "parameters".into(), reason })
            }
            other => AppError::Compute(other),
        }
    }
}

impl AppError {
    /// Process exit status: 2 for usage errors, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Compute(_) => 1,
        }
    }
}

/// Checks, values and tables produced by one analysis.
#[derive(Clone, Debug, Default)]
pub struct Analysis {
    pub checks: Vec<Check>,
    pub values: Vec<NamedValue>,
    pub tables: Vec<Table>,
}

impl Analysis {
    pub fn value(&mut self, name: &str, value: impl Into<Cell>) {
        self.values.push(NamedValue { name: name.to_string(), value: value.into() });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Prefixes every check and value name.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.checks = self.checks.into_iter().map(|c| c.prefixed(prefix)).collect();
        for v in &mut self.values {
            v.name = format!("{prefix}.{}", v.name);
        }
        for t in &mut self.tables {
            t.name = format!("{prefix}_{}", t.name);
        }
        self
    }

    pub fn absorb(&mut self, other: Analysis) {
        self.checks.extend(other.checks);
        self.values.extend(other.values);
        self.tables.extend(other.tables);
    }

    fn into_report(self, report: &mut Report) {
        report.checks(&self.checks);
        report.values.extend(self.values);
        report.tables.extend(self.tables);
    }
}

fn signature(cfg: &RunConfig) -> Result<ThetaSignature, AppError> {
    let p = cfg.usize_min("p", 1)?;
    let q = cfg.usize_min("q", 0)?;
    Ok(ThetaSignature::new(p, q)?)
}

pub fn run(cfg: &RunConfig) -> Result<Report, AppError> {
    let seed = cfg.seed()?;
    let mut report = Report::new(cfg.command, cfg.params.clone(), seed);
    let analysis = match cfg.command {
        "gauge-scalar" => gauge_scalar(
            &GaugeScalarParams {
                alpha: cfg.f64("alpha")?,
                beta: cfg.f64("beta")?,
                half_width: cfg.positive("half_width")?,
                h: cfg.positive("h")?,
                tol: cfg.positive("tol")?,
                closed_form_tol: cfg.positive("closed_form_tol")?,
            },
            seed,
        )?,
        "cartan" => cartan(signature(cfg)?, cfg.positive("scale")?, &cfg.sweep("x")?, cfg.positive("tol")?, seed)?,
        "lts-check" => lts(
            signature(cfg)?,
            &LtsParams {
                samples: cfg.usize_min("samples", 1)?,
                scale: cfg.positive("scale")?,
                tol: cfg.positive("tol")?,
                escape_min: cfg.positive("escape_min")?,
            },
            seed,
        )?,
        "spectrum-matrix" => spectrum_matrix(
            &SpectrumParams {
                sig: signature(cfg)?,
                gauge: match cfg.text("gauge")?.as_str() {
                    "fixed" => GaugeChoice::Fixed,
                    "random" => GaugeChoice::Random,
                    other => return Err(malformed("gauge", format!("expected fixed or random, got `{other}`"))),
                },
                gauge_scale: cfg.f64("gauge_scale")?,
                potential: match cfg.text("potential")?.as_str() {
                    "harmonic" => PotentialChoice::Harmonic,
                    "pt" => PotentialChoice::Pt,
                    "random" => PotentialChoice::Random,
                    other => {
                        return Err(malformed("potential", format!("expected harmonic, pt or random, got `{other}`")))
                    }
                },
                half_width: cfg.positive("half_width")?,
                h: cfg.positive("h")?,
                k: cfg.usize_min("k", 1)?,
                tol: cfg.positive("tol")?,
                order_min: cfg.f64("order_min")?,
            },
            seed,
        )?,
        "jc" => {
            let sig = signature(cfg)?;
            let omega = cfg.list("omega")?;
            if omega.len() != sig.m() {
                return Err(malformed("omega", format!("expected {} level energies, got {}", sig.m(), omega.len())));
            }
            jc(
                &JcParams {
                    sig,
                    alpha: cfg.f64("alpha")?,
                    scale: cfg.positive("scale")?,
                    omega,
                    dual: DualBuildConfig {
                        half_width: cfg.positive("half_width")?,
                        h: cfg.positive("h")?,
                        n_max: cfg.usize_min("n_max", 2)?,
                        k: cfg.usize_min("k", 1)?,
                        n_op: cfg.usize_min("n_op", 0)?,
                    },
                    tol: cfg.positive("tol")?,
                    trunc_tol: cfg.positive("trunc_tol")?,
                },
                seed,
            )?
        }
        "point-angle" => point_angle(&coupling(cfg)?, cfg.positive("tol")?, cfg.positive("angle_tol")?)?,
        "point-spectrum" => point_spectrum(&coupling(cfg)?, cfg.positive("grid_h")?, cfg.positive("grid_tol")?)?,
        "phase-diagram" => phase_diagram(&PhaseGrid {
            t11: cfg.sweep("t11")?,
            t22: cfg.sweep("t22")?,
            im_t12: cfg.sweep("im_t12")?,
            im_t21: cfg.sweep("im_t21")?,
        })?,
        "verify-all" => suite::verify_all(seed)?,
        other => return Err(UsageError::UnknownCommand(other.to_string()).into()),
    };
    analysis.into_report(&mut report);
    Ok(report)
}

fn malformed(key: &str, reason: String) -> AppError {
    AppError::Usage(UsageError::Malformed { key: key.to_string(), reason })
}

fn coupling(cfg: &RunConfig) -> Result<CouplingMatrixT, AppError> {
    let t = CouplingMatrixT::new(cfg.complex("t11")?, cfg.complex("t12")?, cfg.complex("t21")?, cfg.complex("t22")?);
    Ok(t)
}

pub struct GaugeScalarParams {
    pub alpha: f64,
    pub beta: f64,
    pub half_width: f64,
    pub h: f64,
    pub tol: f64,
    pub closed_form_tol: f64,
}

/// `A(x) = α + iβx`, `V = x²`.
pub fn gauge_scalar(p: &GaugeScalarParams, seed: u64) -> Result<Analysis, AppError> {
    let (alpha, beta) = (p.alpha, p.beta);
    let grid = Grid1D::covering(p.half_width, p.h)?;
    let a = move |x: f64| C64::new(alpha, beta * x);
    let fact = gauge_factorization(&a, &grid)?;
    let mut out = Analysis::default();
    out.checks.extend(fact.checks.iter().cloned().map(|c| c.prefixed("factorization")));

    let mut closed: f64 = 0.0;
    for k in 0..grid.len() {
        let x = grid.x(k);
        let exact = C64::new(beta * x * x / 2.0, -alpha * x).exp();
        closed = closed.max((fact.u.matrix[(k, k)] - exact).norm() / exact.norm());
    }
    out.checks.push(Check::at_most("U = exp(-i alpha x + beta x^2/2)", closed, p.closed_form_tol));
    out.checks.push(Check::at_most("PT U = U PT", fact.pt_commutation_residual(4, seed), 1e-12));

    let pots = ScalarPotentials::new(a, |x| C64::new(x * x, 0.0));
    let hg = build_scalar_hamiltonian(&pots, &grid, Stencil::Covariant)?;
    let rep = verify_pseudo_hermiticity(&hg, &fact, p.tol, seed)?;
    out.checks.extend(rep.checks.iter().cloned());
    let expanded = build_scalar_hamiltonian(&pots, &grid, Stencil::Expanded)?;
    let rep_e = verify_pseudo_hermiticity(&expanded, &fact, p.tol, seed)?;

    out.value("r1", rep.r1);
    out.value("r2", rep.r2);
    out.value("r3", rep.r3);
    out.value("r1_expanded_stencil", rep_e.r1);
    out.value("r2_expanded_stencil", rep_e.r2);
    out.value("gauge_nontrivial", rep.gauge_nontrivial);

    let mut t = Table::new("factors", &["x", "q", "s", "re_u", "im_u", "abs_eta"]);
    for k in 0..grid.len() {
        let u = fact.u.matrix[(k, k)];
        t.push(vec![
            grid.x(k).into(),
            fact.q[k].into(),
            fact.s[k].into(),
            u.re.into(),
            u.im.into(),
            fact.abs_eta.matrix[(k, k)].re.into(),
        ]);
    }
    out.tables.push(t);
    Ok(out)
}

/// Cartan split, closed-form exponentials over `xs`, parity relations and
/// the polar factorization of `U(x) = e^{ax}`.
pub fn cartan(sig: ThetaSignature, scale: f64, xs: &[f64], tol: f64, seed: u64) -> Result<Analysis, AppError> {
    let a = random_element(sig, &mut seeded(seed), scale);
    let mut out = element_analysis(&a, xs, tol)?;
    let (dk, dp) = dimension_counts(sig);
    out.checks.push(Check::flag(format!("dim k_Theta = pq = {}", sig.dim_k()), dk == sig.dim_k()));
    out.checks.push(Check::flag(format!("dim p_Theta = {}", sig.dim_p()), dp == sig.dim_p()));
    out.value("dim_k", dk);
    out.value("dim_p", dp);
    Ok(out)
}

/// Exponential, parity and polar checks for one element.
pub fn element_analysis(a: &GaugeAlgebraElement, xs: &[f64], tol: f64) -> Result<Analysis, AppError> {
    let sig = a.sig;
    let comp = cartan_split(a);
    let mut out = Analysis::default();
    out.checks.extend(comp.checks(1e-12));
    out.checks.extend(wick_check(&a.matrix, sig, 1e-12)?);
    let mut all = Vec::new();
    let mut t = Table::new("exponentials", &["x", "err_compact", "err_noncompact", "metric_residual"]);
    for &x in xs {
        let e = exponential_checks(&comp, x, tol)?;
        let pr = parity_relations_check(a, x, tol)?;
        t.push(vec![x.into(), e[0].residual.into(), e[1].residual.into(), pr[2].residual.into()]);
        all.extend(e);
        all.extend(pr);
    }
    out.checks.extend(worst_by_name(all));
    let mut polar = Vec::new();
    let mut offblock: f64 = 0.0;
    for &x in [xs.first(), xs.get(xs.len() / 2), xs.last()].iter().flatten() {
        let parts = group_polar(&expm(&a.matrix.scale_real(*x))?, sig)?;
        offblock = offblock.max(parts.log_p_offblock);
        polar.extend(parts.checks.into_iter().map(|c| c.prefixed("polar")));
    }
    out.checks.extend(worst_by_name(polar));
    out.value("polar_log_offblock", offblock);
    out.tables.push(t);
    Ok(out)
}

pub struct LtsParams {
    pub samples: usize,
    pub scale: f64,
    pub tol: f64,
    pub escape_min: f64,
}

pub fn lts(sig: ThetaSignature, p: &LtsParams, seed: u64) -> Result<Analysis, AppError> {
    let mut t = Table::new("samples", &["index", "closure", "escape"]);
    let mut closure: f64 = 0.0;
    let mut escapes = Vec::with_capacity(p.samples);
    for i in 0..p.samples {
        let mut rng = substream(seed, i as u64);
        let a1 = random_element(sig, &mut rng, p.scale);
        let a2 = random_element(sig, &mut rng, p.scale);
        let a3 = random_element(sig, &mut rng, p.scale);
        let r = lts_check(&a1, &a2, &a3)?;
        closure = closure.max(r.closure_residual);
        escapes.push(r.binary_escape);
        t.push(vec![i.into(), r.closure_residual.into(), r.binary_escape.into()]);
    }
    let mut sorted = escapes.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let mut out = Analysis::default();
    out.checks.push(Check::at_most(format!("[a1,[a2,a3]] in g_Theta ({},{})", sig.p, sig.q), closure, p.tol));
    out.checks.push(Check::at_least(format!("median [a1,a2] escape ({},{})", sig.p, sig.q), median, p.escape_min));
    out.value("max_closure", closure);
    out.value("median_escape", median);
    out.value("min_escape", sorted[0]);
    out.tables.push(t);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeChoice {
    Fixed,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PotentialChoice {
    Harmonic,
    Pt,
    Random,
}

pub struct SpectrumParams {
    pub sig: ThetaSignature,
    pub gauge: GaugeChoice,
    pub gauge_scale: f64,
    pub potential: PotentialChoice,
    pub half_width: f64,
    pub h: f64,
    pub k: usize,
    pub tol: f64,
    pub order_min: f64,
}

/// `x²I + ½x·S + 0.4i·x/(1+x²)·Θ` with `S` the all-ones off-block pattern.
pub fn pt_potential(sig: ThetaSignature) -> MatrixPotential {
    let (p, m) = (sig.p, sig.m());
    let s = ComplexMatrix::from_real_fn(m, |i, j| if (i < p) != (j < p) { 1.0 } else { 0.0 });
    let theta = sig.theta();
    MatrixPotential::harmonic(m).plus(move |x| {
        &s.scale_real(0.5 * x) + &theta.scale(C64::new(0.0, 0.4 * x / (1.0 + x * x)))
    })
}

pub fn spectrum_matrix(p: &SpectrumParams, seed: u64) -> Result<Analysis, AppError> {
    let sig = p.sig;
    let element = match p.gauge {
        GaugeChoice::Fixed => make_element(
            sig,
            vec![vec![0.0; sig.p]; sig.p],
            vec![vec![p.gauge_scale; sig.q]; sig.p],
            vec![vec![0.0; sig.q]; sig.q],
        )?,
        GaugeChoice::Random => random_element(sig, &mut substream(seed, 0), p.gauge_scale),
    };
    let gauge = ConstantGauge::from_element(&element);
    let pot = match p.potential {
        PotentialChoice::Harmonic => MatrixPotential::harmonic(sig.m()),
        PotentialChoice::Pt => pt_potential(sig),
        PotentialChoice::Random => sample_potential(sig, &mut substream(seed, 1), 0.5),
    };
    let mut out = Analysis::default();
    let grid = Grid1D::covering(p.half_width, p.h)?;
    out.checks.extend(symmetry_audit(&gauge, &pot, sig, &grid, 1e-12)?);

    let spacings = [2.0 * p.h, p.h, 0.5 * p.h];
    let mut errors = Vec::new();
    for (level, &h) in spacings.iter().enumerate() {
        let g = Grid1D::covering(p.half_width, h)?;
        let r = build_and_regauge(&gauge, &pot, &g)?;
        let cmp = spectral_compare(&r.hg, &r.h, sig, p.k)?;
        errors.push(cmp.max_scaled);
        out.checks.push(Check::flag(format!("H_g spectrum conjugate-paired (h={h})"), !cmp.pairing_hg.is_unpaired()));
        out.checks.push(Check::flag(format!("H spectrum conjugate-paired (h={h})"), !cmp.pairing_h.is_unpaired()));
        out.value(&format!("max_scaled_h{level}"), cmp.max_scaled);
        if level == 1 {
            out.checks.push(Check::at_most(
                format!("max |dlambda|/(1+|lambda|), lowest {} (h={h})", p.k),
                cmp.max_scaled,
                p.tol,
            ));
            out.value("p_weak_residual", cmp.p_residual);
            out.value("pairing_hg", cmp.pairing_hg.label());
            out.value("pairing_h", cmp.pairing_h.label());
            let mut t = Table::new(
                "spectrum",
                &["index", "re_lambda_Hg", "im_lambda_Hg", "re_lambda_H", "im_lambda_H", "match_dist"],
            );
            for pair in &cmp.pairs {
                t.push(vec![
                    pair.index.into(),
                    pair.lambda_a.re.into(),
                    pair.lambda_a.im.into(),
                    pair.lambda_b.re.into(),
                    pair.lambda_b.im.into(),
                    pair.dist.into(),
                ]);
            }
            out.tables.push(t);
        }
    }
    let order = observed_order(&spacings, &errors);
    out.checks.push(Check::at_least("observed convergence order", order, p.order_min));
    out.value("order", order);
    Ok(out)
}

pub struct JcParams {
    pub sig: ThetaSignature,
    pub alpha: f64,
    pub scale: f64,
    pub omega: Vec<f64>,
    pub dual: DualBuildConfig,
    pub tol: f64,
    pub trunc_tol: f64,
}

/// Cross term that reproduces `(p − ia)² + V` (see [`jc`]).
pub const DOCUMENTED_CROSS: CrossTerm = CrossTerm::Swapped;

pub fn jc(p: &JcParams, seed: u64) -> Result<Analysis, AppError> {
    let sig = p.sig;
    let (pp, qq) = (sig.p, sig.q);
    let a = if pp == 1 && qq == 1 {
        make_element(sig, vec![vec![0.0]], vec![vec![p.alpha]], vec![vec![0.0]])?
    } else {
        random_element(sig, &mut seeded(seed), p.scale)
    };
    let omega = LevelEnergies::real(&p.omega);
    let n_max = p.dual.n_max;
    let split = nilpotent_split(&a);
    let mut out = Analysis::default();
    out.checks.push(Check::at_most("a = c - c^T", split.reconstruction_residual(), 0.0));
    out.checks.push(Check::at_most("c^m = 0", split.nilpotency_residual(), 0.0));

    let zero = make_element(sig, vec![vec![0.0; pp]; pp], vec![vec![0.0; qq]; pp], vec![vec![0.0; qq]; qq])?;
    let h0 = build_jc(&nilpotent_split(&zero), &omega, n_max)?;
    let mut want: Vec<f64> =
        (0..=n_max).flat_map(|n| p.omega.iter().map(move |w| 2.0 * (n as f64 + w))).collect();
    want.sort_by(f64::total_cmp);
    let exact = diagonal_spectrum(&h0)
        .map(|ev| ev.iter().zip(&want).all(|(z, w)| z.re == *w && z.im == 0.0) && ev.len() == want.len())
        .unwrap_or(false);
    out.checks.push(Check::flag("c = 0: spectrum = {2(n + omega_j)} exactly", exact));

    let hjc = build_jc(&split, &omega, n_max)?;
    out.checks.push(jc_pt_check(&hjc, sig, n_max, 1e-12)?);
    let grid = Grid1D::covering(p.dual.half_width, p.dual.h)?;
    out.checks.extend(potential_audit(&a, &omega, &grid, 1e-12)?.into_iter().map(|c| c.prefixed("grid potential")));

    let rep = jc_equivalence_check(&a, &omega, p.dual)?;
    let documented = rep
        .conventions
        .iter()
        .find(|c| c.cross == DOCUMENTED_CROSS && c.sign == 1.0)
        .expect("documented convention is always tried");
    out.checks.push(Check::at_most(
        format!("grid vs Fock lowest {} ({})", p.dual.k, documented.label()),
        documented.spectral,
        p.tol,
    ));
    let op_best = rep
        .conventions
        .iter()
        .min_by(|x, y| x.operator_residual.total_cmp(&y.operator_residual))
        .expect("conventions");
    out.checks.push(Check::flag(
        "operator-level match selects the documented convention",
        op_best.cross == DOCUMENTED_CROSS && op_best.sign == 1.0,
    ));
    out.checks.push(Check::flag("grid spectrum conjugate-paired", !rep.grid_pairing.is_unpaired()));
    out.value("best_convention", rep.best().label());
    out.value("best_spectral", rep.best().spectral);
    out.value("best_stated_form_spectral", rep.best_stated());

    let n_big = n_max + n_max / 2;
    let change = truncation_change(&split, &omega, n_max, n_big, p.dual.k)?;
    out.checks.push(Check::at_most(format!("truncation change n_max {n_max} -> {n_big}"), change, p.trunc_tol));

    let mut conv = Table::new("conventions", &["sign", "cross", "spectral", "operator_residual"]);
    for c in &rep.conventions {
        conv.push(vec![c.sign.into(), c.cross.label().into(), c.spectral.into(), c.operator_residual.into()]);
    }
    out.tables.push(conv);
    let mut spec = Table::new("spectrum", &["index", "re_grid", "im_grid", "re_fock", "im_fock", "dist"]);
    for pair in &documented.pairs {
        spec.push(vec![
            pair.index.into(),
            pair.lambda_a.re.into(),
            pair.lambda_a.im.into(),
            pair.lambda_b.re.into(),
            pair.lambda_b.im.into(),
            pair.dist.into(),
        ]);
    }
    out.tables.push(spec);
    Ok(out)
}

/// Sample functions for the boundary-transform identities.
pub fn transform_samples() -> Vec<PiecewiseFunction> {
    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }
    vec![
        PiecewiseFunction::exponential_pair(c(1.0), c(1.0), c(1.0)),
        PiecewiseFunction::new(
            |x| {
                let e = x.exp();
                (c(e * (1.0 - x)), c(-e * x))
            },
            |x| {
                let e = (-x).exp();
                (c(e * (1.0 + x)), c(-e * x))
            },
        ),
        PiecewiseFunction::from_traces(Traces {
            f_plus: C64::new(0.7, -0.2),
            f_minus: C64::new(-0.4, 0.9),
            df_plus: C64::new(1.3, 0.5),
            df_minus: C64::new(-0.6, -1.1),
        }),
    ]
}

pub fn point_angle(t: &CouplingMatrixT, tol: f64, angle_tol: f64) -> Result<Analysis, AppError> {
    if !t.is_pt_symmetric() {
        return Err(malformed("t11..t22", "T must have real t11, t22 and imaginary t12, t21".into()));
    }
    let sol = clifford_angle(t)?;
    let mut out = Analysis::default();
    out.value("phi", sol.phi);
    out.value("degenerate", sol.degenerate);
    out.value("det_t_plus_4", t.det().re + 4.0);
    out.value("beta", (t.t12 - t.t21).im);
    out.value("p_selfadjoint", t.is_p_selfadjoint());
    out.value("hermitian", t.is_hermitian());
    out.checks.push(Check::at_most("i sin(phi)(det T + 4) = 2 cos(phi)(t12 - t21)", sol.residual, angle_tol));
    out.checks.push(Check::flag("phi = 0 iff t12 = t21", (sol.phi == 0.0) == (t.t12 == t.t21)));
    out.checks.extend(boundary_transform_check(t, &sol, &transform_samples(), tol)?);
    out.checks.push(p_phi_selfadjointness_check(t, &sol, tol));
    if !sol.degenerate {
        let wrong = PhiSolution::at(sol.phi + 0.1);
        out.checks.push(Check::at_least(
            "matrix relation violated at phi + 0.1",
            matrix_relation_residual(t, &wrong),
            tol,
        ));
    }
    Ok(out)
}

pub fn point_spectrum(t: &CouplingMatrixT, grid_h: f64, grid_tol: f64) -> Result<Analysis, AppError> {
    let bs = bound_states(t)?;
    let mut out = Analysis::default();
    out.value("every_kappa", bs.every_kappa);
    out.value("n_bound", bs.states.len());
    let norm = (1.0 + t.max_abs()) * bs.states.iter().map(|s| 1.0 + s.kappa.norm()).fold(1.0, f64::max);
    let worst = bs.states.iter().map(|s| s.residual).fold(0.0, f64::max) / norm;
    out.checks.push(Check::at_most("reconstructed states satisfy T Gamma0 f = Gamma1 f", worst, BOUND_TOL));
    if t.is_pt_symmetric() {
        let e = bs.energies();
        let scale = e.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let paired = !ptkrein::numerics::pairing_check(&e, 1e-9 * scale).is_unpaired();
        out.checks.push(Check::flag("energies closed under conjugation", paired));
    }
    let zero = C64::new(0.0, 0.0);
    let pure_delta = t.t12 == zero && t.t21 == zero && t.t22 == zero && t.t11.im == 0.0;
    if pure_delta && t.t11.re < 0.0 {
        let t11 = t.t11.re;
        let closed = -t11 * t11 / 4.0;
        out.checks.push(Check::flag("single bound state", bs.states.len() == 1));
        if let Some(s) = bs.states.first() {
            out.checks.push(Check::at_most("E = -t11^2/4", (s.energy - C64::new(closed, 0.0)).norm(), 1e-12));
        }
        let half_width = (24.0 / t11.abs()).max(12.0);
        match delta_well_grid_energy(t11, grid_h, half_width) {
            Some(e) => {
                out.value("grid_energy", e);
                out.checks.push(Check::at_most("grid delta well agrees", (e - closed).abs(), grid_tol));
            }
            None => out.checks.push(Check::flag("grid delta well has a bound state", false)),
        }
    }
    let mut table = Table::new("bound_states", &["index", "kappa_re", "kappa_im", "e_re", "e_im", "residual"]);
    for (i, s) in bs.states.iter().enumerate() {
        table.push(vec![
            i.into(),
            s.kappa.re.into(),
            s.kappa.im.into(),
            s.energy.re.into(),
            s.energy.im.into(),
            s.residual.into(),
        ]);
    }
    out.tables.push(table);
    Ok(out)
}

pub fn phase_diagram(grid: &PhaseGrid) -> Result<Analysis, AppError> {
    let rows = pt_phase_sweep(grid)?;
    let mut out = Analysis::default();
    let unpaired = rows.iter().filter(|r| r.class == PhaseClass::Unpaired).count();
    out.checks.push(Check::at_most("rows failing conjugate pairing", unpaired as f64, 0.0));
    let phi_slice = rows.iter().filter(|r| r.t.t12 == r.t.t21).map(|r| r.phi.abs()).fold(0.0, f64::max);
    out.checks.push(Check::at_most("max |phi| on t12 = t21", phi_slice, 0.0));
    if grid.im_t12 == grid.im_t21 {
        let n = grid.im_t12.len();
        let mut worst: f64 = 0.0;
        for (idx, r) in rows.iter().enumerate() {
            let (i3, i4) = ((idx / n) % n, idx % n);
            let mirror = &rows[idx - i3 * n - i4 + i4 * n + i3];
            let (mut a, mut b) = (r.energies.clone(), mirror.energies.clone());
            if a.len() != b.len() {
                worst = f64::INFINITY;
                continue;
            }
            let key = |z: &C64| (z.re, z.im.abs());
            a.sort_by(|x, y| key(x).partial_cmp(&key(y)).expect("finite"));
            b.sort_by(|x, y| key(x).partial_cmp(&key(y)).expect("finite"));
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).norm().min((x - y.conj()).norm()));
            }
        }
        out.checks.push(Check::at_most("energies symmetric under t12 <-> t21", worst, 1e-12));
    }
    for class in
        [PhaseClass::NoBoundStates, PhaseClass::Real, PhaseClass::ComplexPairs, PhaseClass::Unpaired, PhaseClass::EveryKappa]
    {
        out.value(&format!("count_{}", class.label()), rows.iter().filter(|r| r.class == class).count());
    }
    let mut t = Table::new(
        "phase",
        &[
            "t11",
            "t22",
            "im_t12",
            "im_t21",
            "phi",
            "degenerate",
            "n_bound",
            "e1_re",
            "e1_im",
            "e2_re",
            "e2_im",
            "classification",
        ],
    );
    for r in &rows {
        let e = |i: usize| r.energies.get(i).copied().unwrap_or(C64::new(f64::NAN, f64::NAN));
        t.push(vec![
            r.t.t11.re.into(),
            r.t.t22.re.into(),
            r.t.t12.im.into(),
            r.t.t21.im.into(),
            r.phi.into(),
            r.degenerate.into(),
            r.energies.len().into(),
            e(0).re.into(),
            e(0).im.into(),
            e(1).re.into(),
            e(1).im.into(),
            r.class.label().into(),
        ]);
    }
    out.tables.push(t);
    Ok(out)
}
