//! Zero-range interaction `H_T = p² + t11⟨δ,·⟩δ + t12⟨δ',·⟩δ + t21⟨δ,·⟩δ' + t22⟨δ',·⟩δ'`.
//!
//! Boundary data of a function with a jump at the origin:
//! `Γ₀f = ½(f(+0) + f(−0), −f'(+0) − f'(−0))`,
//! `Γ₁f = (f'(+0) − f'(−0), f(+0) − f(−0))`.
//! `f ∈ D(H_T)` iff `TΓ₀f = Γ₁f`.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::numerics::tridiagonal::kth_eigenvalue;
use crate::numerics::{pairing_check, pauli, ComplexMatrix, PairingClass, I};

/// Tolerance for the PT predicates on `T`.
pub const PT_TOL: f64 = 1e-13;
/// Residual bound of the angle equation at a non-degenerate solution.
pub const ANGLE_TOL: f64 = 1e-13;
/// Bound-state reconstruction tolerance.
pub const BOUND_TOL: f64 = 1e-10;
/// `|Im κ|` below this (relative to `1 + |κ|`) is snapped to zero.
pub const IMAG_SNAP: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Coupling matrix `T = ‖t_ij‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingMatrixT {
    pub t11: C64,
    pub t12: C64,
    pub t21: C64,
    pub t22: C64,
}

impl CouplingMatrixT {
    pub fn new(t11: C64, t12: C64, t21: C64, t22: C64) -> Self {
        CouplingMatrixT { t11, t12, t21, t22 }
    }

    /// PT-symmetric member: `t11, t22` real, `t12 = i·g12`, `t21 = i·g21`.
    pub fn pt(t11: f64, t22: f64, g12: f64, g21: f64) -> Self {
        Self::new(c(t11), I * g12, I * g21, c(t22))
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => self.t11,
            (0, 1) => self.t12,
            (1, 0) => self.t21,
            _ => self.t22,
        })
    }

    pub fn det(&self) -> C64 {
        self.t11 * self.t22 - self.t12 * self.t21
    }

    pub fn max_abs(&self) -> f64 {
        [self.t11, self.t12, self.t21, self.t22].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_pt_symmetric(&self) -> bool {
        self.t11.im.abs() <= PT_TOL
            && self.t22.im.abs() <= PT_TOL
            && self.t12.re.abs() <= PT_TOL
            && self.t21.re.abs() <= PT_TOL
    }

    pub fn is_p_selfadjoint(&self) -> bool {
        self.is_pt_symmetric() && (self.t12 - self.t21).norm() <= PT_TOL
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix().dist(&self.matrix().adjoint()) <= PT_TOL
    }
}

/// One-sided piece: `x ↦ (f(x), f'(x))`.
pub type PieceFn = Arc<dyn Fn(f64) -> (C64, C64) + Send + Sync>;

/// The four one-sided traces at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Traces {
    pub f_plus: C64,
    pub f_minus: C64,
    pub df_plus: C64,
    pub df_minus: C64,
}

/// Function on `ℝ∖{0}` given by analytic pieces on each half-line.
#[derive(Clone)]
pub struct PiecewiseFunction {
    pub left: PieceFn,
    pub right: PieceFn,
}

impl PiecewiseFunction {
    pub fn new(
        left: impl Fn(f64) -> (C64, C64) + Send + Sync + 'static,
        right: impl Fn(f64) -> (C64, C64) + Send + Sync + 'static,
    ) -> Self {
        PiecewiseFunction { left: Arc::new(left), right: Arc::new(right) }
    }

    /// Linear pieces with prescribed traces.
    pub fn from_traces(t: Traces) -> Self {
        Self::new(move |x| (t.f_minus + t.df_minus * x, t.df_minus), move |x| (t.f_plus + t.df_plus * x, t.df_plus))
    }

    /// `a·e^{−κx}` for `x > 0`, `b·e^{κx}` for `x < 0`.
    pub fn exponential_pair(a: C64, b: C64, kappa: C64) -> Self {
        Self::new(
            move |x| {
                let v = b * (kappa * x).exp();
                (v, kappa * v)
            },
            move |x| {
                let v = a * (-kappa * x).exp();
                (v, -kappa * v)
            },
        )
    }

    pub fn eval(&self, x: f64) -> C64 {
        if x < 0.0 {
            (self.left)(x).0
        } else {
            (self.right)(x).0
        }
    }

    pub fn traces(&self) -> Traces {
        let (f_minus, df_minus) = (self.left)(0.0);
        let (f_plus, df_plus) = (self.right)(0.0);
        Traces { f_plus, f_minus, df_plus, df_minus }
    }

    pub fn scale(&self, s: C64) -> Self {
        let (l, r) = (self.left.clone(), self.right.clone());
        Self::new(
            move |x| {
                let (v, d) = l(x);
                (s * v, s * d)
            },
            move |x| {
                let (v, d) = r(x);
                (s * v, s * d)
            },
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (l1, r1, l2, r2) = (self.left.clone(), self.right.clone(), other.left.clone(), other.right.clone());
        Self::new(
            move |x| {
                let ((a, b), (c, d)) = (l1(x), l2(x));
                (a + c, b + d)
            },
            move |x| {
                let ((a, b), (c, d)) = (r1(x), r2(x));
                (a + c, b + d)
            },
        )
    }

    /// `(𝒫_φ f)(x) = e^{−iφ·sign x} f(−x)`, built from the pieces.
    pub fn apply_p_phi(&self, phi: f64) -> Self {
        let (l, r) = (self.left.clone(), self.right.clone());
        let (em, ep) = ((-I * phi).exp(), (I * phi).exp());
        Self::new(
            move |x| {
                let (v, d) = r(-x);
                (ep * v, -ep * d)
            },
            move |x| {
                let (v, d) = l(-x);
                (em * v, -em * d)
            },
        )
    }
}

/// Which right-hand side is used for the derivative trace of `𝒫_φ f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceRule {
    /// `(𝒫_φ f)'(±0) = −e^{∓iφ} f'(∓0)`.
    Derivative,
    /// `(𝒫_φ f)'(±0) = −e^{∓iφ} f(∓0)`, the form with `f` in place of `f'`.
    Literal,
}

/// Traces of `𝒫_φ f` predicted from the traces of `f`.
pub fn p_phi_traces(t: Traces, phi: f64, rule: TraceRule) -> Traces {
    let (em, ep) = ((-I * phi).exp(), (I * phi).exp());
    let (dm, dp) = match rule {
        TraceRule::Derivative => (t.df_minus, t.df_plus),
        TraceRule::Literal => (t.f_minus, t.f_plus),
    };
    Traces { f_plus: em * t.f_minus, f_minus: ep * t.f_plus, df_plus: -em * dm, df_minus: -ep * dp }
}

/// `(Γ₀f, Γ₁f)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPair {
    pub gamma0: [C64; 2],
    pub gamma1: [C64; 2],
}

pub fn boundary_maps_of_traces(t: Traces) -> BoundaryPair {
    BoundaryPair {
        gamma0: [(t.f_plus + t.f_minus) * 0.5, -(t.df_plus + t.df_minus) * 0.5],
        gamma1: [t.df_plus - t.df_minus, t.f_plus - t.f_minus],
    }
}

pub fn boundary_maps(f: &PiecewiseFunction) -> BoundaryPair {
    boundary_maps_of_traces(f.traces())
}

fn apply2(m: &ComplexMatrix, v: [C64; 2]) -> [C64; 2] {
    [m[(0, 0)] * v[0] + m[(0, 1)] * v[1], m[(1, 0)] * v[0] + m[(1, 1)] * v[1]]
}

fn add2(a: [C64; 2], b: [C64; 2]) -> [C64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn dist2(a: [C64; 2], b: [C64; 2]) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

/// `‖TΓ₀f − Γ₁f‖` (with `T†` when `adjoint`).
pub fn domain_residual(t: &CouplingMatrixT, bp: &BoundaryPair, adjoint: bool) -> f64 {
    let m = if adjoint { t.matrix().adjoint() } else { t.matrix() };
    dist2(apply2(&m, bp.gamma0), bp.gamma1)
}

pub fn domain_check(t: &CouplingMatrixT, f: &PiecewiseFunction, adjoint: bool, tol: f64) -> Check {
    let name = if adjoint { "T^dag Gamma0 f = Gamma1 f" } else { "T Gamma0 f = Gamma1 f" };
    Check::at_most(name, domain_residual(t, &boundary_maps(f), adjoint), tol)
}

/// Solution of the angle equation `i sin φ (det T + 4) = 2 cos φ (t12 − t21)`.
#[derive(Clone, Debug)]
pub struct PhiSolution {
    pub phi: f64,
    pub degenerate: bool,
    pub m1: ComplexMatrix,
    pub m2: ComplexMatrix,
    pub residual: f64,
}

impl PhiSolution {
    /// `M₁ = cos φ σ₃`, `M₂ = (i/2) sin φ σ₁` at an arbitrary angle.
    pub fn at(phi: f64) -> Self {
        PhiSolution {
            phi,
            degenerate: false,
            m1: pauli(3).scale_real(phi.cos()),
            m2: pauli(1).scale(I * (0.5 * phi.sin())),
            residual: f64::NAN,
        }
    }
}

pub fn angle_equation_residual(t: &CouplingMatrixT, phi: f64) -> f64 {
    (I * phi.sin() * (t.det() + 4.0) - (t.t12 - t.t21) * (2.0 * phi.cos())).norm()
}

/// Principal-branch angle; rejects non-PT-symmetric `T`.
pub fn clifford_angle(t: &CouplingMatrixT) -> Result<PhiSolution> {
    if !t.is_pt_symmetric() {
        return Err(Error::NotPtSymmetric(format!("{t:?}")));
    }
    let d = t.det().re + 4.0;
    let beta = (t.t12 - t.t21).im;
    let scale = 1.0 + t.max_abs() * t.max_abs();
    let degenerate = beta.abs() <= PT_TOL * scale && d.abs() <= PT_TOL * scale;
    let mut phi = if degenerate { 0.0 } else { (2.0 * beta).atan2(d) };
    if phi > FRAC_PI_2 {
        phi -= std::f64::consts::PI;
    } else if phi <= -FRAC_PI_2 {
        phi += std::f64::consts::PI;
    }
    if phi == 0.0 {
        phi = 0.0;
    }
    let mut sol = PhiSolution::at(phi);
    sol.degenerate = degenerate;
    sol.residual = angle_equation_residual(t, phi);
    Ok(sol)
}

/// `T†M₂T − (M₁T − T†M₁ − 4M₂)`, max entry.
pub fn matrix_relation_residual(t: &CouplingMatrixT, sol: &PhiSolution) -> f64 {
    let tm = t.matrix();
    let td = tm.adjoint();
    let lhs = &(&td * &sol.m2) * &tm;
    let rhs = &(&(&sol.m1 * &tm) - &(&td * &sol.m1)) - &sol.m2.scale_real(4.0);
    lhs.dist(&rhs).max((&lhs - &rhs).norm_max())
}

/// Trace action, transform identities and the matrix relation at `sol.phi`.
pub fn boundary_transform_check(
    t: &CouplingMatrixT,
    sol: &PhiSolution,
    samples: &[PiecewiseFunction],
    tol: f64,
) -> Result<Vec<Check>> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no sample functions".into()));
    }
    let (mut trace_res, mut g0_res, mut g1_res): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for f in samples {
        let tf = f.traces();
        let pf = f.apply_p_phi(sol.phi);
        let tp = pf.traces();
        let want = p_phi_traces(tf, sol.phi, TraceRule::Derivative);
        trace_res = trace_res.max(
            [
                tp.f_plus - want.f_plus,
                tp.f_minus - want.f_minus,
                tp.df_plus - want.df_plus,
                tp.df_minus - want.df_minus,
            ]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max),
        );
        let b = boundary_maps_of_traces(tf);
        let bp = boundary_maps_of_traces(tp);
        g0_res = g0_res.max(dist2(bp.gamma0, add2(apply2(&sol.m1, b.gamma0), apply2(&sol.m2, b.gamma1))));
        let m2x4 = sol.m2.scale_real(-4.0);
        g1_res = g1_res.max(dist2(bp.gamma1, add2(apply2(&m2x4, b.gamma0), apply2(&sol.m1, b.gamma1))));
    }
    Ok(vec![
        Check::at_most("P_phi traces (derivative rule)", trace_res, tol),
        Check::at_most("Gamma0 P_phi f = M1 Gamma0 f + M2 Gamma1 f", g0_res, tol),
        Check::at_most("Gamma1 P_phi f = -4 M2 Gamma0 f + M1 Gamma1 f", g1_res, tol),
        Check::at_most("T^dag M2 T = M1 T - T^dag M1 - 4 M2", matrix_relation_residual(t, sol), tol),
    ])
}

/// `𝒫_φ D(H_T) ⊂ D(H_T†)` on the basis `Γ₀ = e_j`, `Γ₁ = T e_j`.
pub fn p_phi_selfadjointness_check(t: &CouplingMatrixT, sol: &PhiSolution, tol: f64) -> Check {
    let tm = t.matrix();
    let td = tm.adjoint();
    let m2x4 = sol.m2.scale_real(-4.0);
    let mut worst: f64 = 0.0;
    for j in 0..2 {
        let mut g0 = [c(0.0), c(0.0)];
        g0[j] = c(1.0);
        let g1 = apply2(&tm, g0);
        let g0p = add2(apply2(&sol.m1, g0), apply2(&sol.m2, g1));
        let g1p = add2(apply2(&m2x4, g0), apply2(&sol.m1, g1));
        worst = worst.max(dist2(apply2(&td, g0p), g1p));
    }
    Check::at_most("P_phi maps D(H_T) into D(H_T^dag)", worst, tol)
}

/// `E = −κ²` from the decaying ansatz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundState {
    pub kappa: C64,
    pub energy: C64,
    /// `‖TΓ₀f − Γ₁f‖` of the reconstructed, unit-normalized wavefunction.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundStates {
    pub states: Vec<BoundState>,
    /// The determinant polynomial vanishes identically: every `κ` solves.
    pub every_kappa: bool,
}

impl BoundStates {
    pub fn energies(&self) -> Vec<C64> {
        self.states.iter().map(|s| s.energy).collect()
    }
}

/// `M(κ) = T·G₀(κ) − G₁(κ)` in the `(a, b)` amplitude basis.
pub fn ansatz_matrix(t: &CouplingMatrixT, kappa: C64) -> ComplexMatrix {
    let g0 = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, _) => c(0.5),
        (1, 0) => kappa * 0.5,
        _ => -kappa * 0.5,
    });
    let g1 = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, _) => -kappa,
        (1, 0) => c(1.0),
        _ => c(-1.0),
    });
    &(&t.matrix() * &g0) - &g1
}

/// Coefficients `(c2, c1, c0)` of `2·det M(κ) = −2t22κ² + (4 − det T)κ + 2t11`.
pub fn determinant_polynomial(t: &CouplingMatrixT) -> [C64; 3] {
    [-t.t22 * 2.0, -t.det() + 4.0, t.t11 * 2.0]
}

fn polynomial_roots(p: [C64; 3]) -> Vec<C64> {
    let [a, b, c0] = p;
    if a == c(0.0) {
        if b == c(0.0) {
            return Vec::new();
        }
        return vec![-c0 / b];
    }
    let disc = (b * b - a * c0 * 4.0).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q == c(0.0) {
        return vec![c(0.0), c(0.0)];
    }
    vec![q / a, c0 / q]
}

/// Bound states of `H_T`: roots of the determinant polynomial with
/// `Re κ > 0`, each re-verified on the reconstructed wavefunction.
pub fn bound_states(t: &CouplingMatrixT) -> Result<BoundStates> {
    let p = determinant_polynomial(t);
    if p.iter().all(|z| *z == c(0.0)) {
        return Ok(BoundStates { states: Vec::new(), every_kappa: true });
    }
    let mut kappas: Vec<C64> = Vec::new();
    for mut k in polynomial_roots(p) {
        if k.im.abs() <= IMAG_SNAP * (1.0 + k.norm()) {
            k.im = 0.0;
        }
        if k.re > 0.0 && !kappas.iter().any(|q| (q - k).norm() <= 1e-12 * (1.0 + k.norm())) {
            kappas.push(k);
        }
    }
    let mut states = Vec::with_capacity(kappas.len());
    for kappa in kappas {
        let m = ansatz_matrix(t, kappa);
        let (r0, r1) = ((m[(0, 0)].norm() + m[(0, 1)].norm()), (m[(1, 0)].norm() + m[(1, 1)].norm()));
        let (a, b) = if r0 >= r1 && r0 > 0.0 {
            (-m[(0, 1)], m[(0, 0)])
        } else if r1 > 0.0 {
            (-m[(1, 1)], m[(1, 0)])
        } else {
            (c(1.0), c(1.0))
        };
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let f = PiecewiseFunction::exponential_pair(a / n, b / n, kappa);
        let residual = domain_residual(t, &boundary_maps(&f), false);
        let bound = BOUND_TOL * (1.0 + kappa.norm()) * (1.0 + t.max_abs());
        if !(residual <= bound) {
            return Err(Error::NoConvergence { dim: 2, norm: residual });
        }
        states.push(BoundState { kappa, energy: -kappa * kappa, residual });
    }
    states.sort_by(|x, y| x.energy.re.total_cmp(&y.energy.re).then(x.energy.im.total_cmp(&y.energy.im)));
    Ok(BoundStates { states, every_kappa: false })
}

/// Lowest eigenvalue of `p² + t11⟨δ,·⟩δ` on the staggered grid
/// `|x| ≤ half_width`, with `δ` the two-node average at `±h/2`
/// (rank-one coupling `t11/(4h)` on the central pair). `None` when the
/// grid operator has no negative eigenvalue.
pub fn delta_well_grid_energy(t11: f64, h: f64, half_width: f64) -> Option<f64> {
    let half = (half_width / h).round().max(1.0) as usize;
    let n = 2 * half;
    let mut diag = vec![2.0 / (h * h); n];
    let mut off = vec![-1.0 / (h * h); n - 1];
    let w = t11 / (4.0 * h);
    diag[half - 1] += w;
    diag[half] += w;
    off[half - 1] += w;
    let lo = -(t11 * t11) - 1.0;
    kth_eigenvalue(&diag, &off, 0, lo, 0.0, 1e-12)
}

/// Reality class of one parameter point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseClass {
    NoBoundStates,
    Real,
    ComplexPairs,
    Unpaired,
    EveryKappa,
}

impl PhaseClass {
    pub fn label(self) -> &'static str {
        match self {
            PhaseClass::NoBoundStates => "none",
            PhaseClass::Real => "real",
            PhaseClass::ComplexPairs => "complex_pairs",
            PhaseClass::Unpaired => "unpaired",
            PhaseClass::EveryKappa => "every_kappa",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhaseRow {
    pub t: CouplingMatrixT,
    pub phi: f64,
    pub degenerate: bool,
    pub energies: Vec<C64>,
    pub class: PhaseClass,
}

/// Axes of the `(t11, t22, Im t12, Im t21)` sweep.
#[derive(Clone, Debug, Default)]
pub struct PhaseGrid {
    pub t11: Vec<f64>,
    pub t22: Vec<f64>,
    pub im_t12: Vec<f64>,
    pub im_t21: Vec<f64>,
}

impl PhaseGrid {
    pub fn len(&self) -> usize {
        self.t11.len() * self.t22.len() * self.im_t12.len() * self.im_t21.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major point `index`, last axis fastest.
    pub fn point(&self, index: usize) -> CouplingMatrixT {
        let n4 = self.im_t21.len();
        let n3 = self.im_t12.len();
        let n2 = self.t22.len();
        let i4 = index % n4;
        let i3 = (index / n4) % n3;
        let i2 = (index / (n4 * n3)) % n2;
        let i1 = index / (n4 * n3 * n2);
        CouplingMatrixT::pt(self.t11[i1], self.t22[i2], self.im_t12[i3], self.im_t21[i4])
    }
}

pub fn phase_row(t: CouplingMatrixT) -> Result<PhaseRow> {
    let sol = clifford_angle(&t)?;
    let bs = bound_states(&t)?;
    let energies = bs.energies();
    let class = if bs.every_kappa {
        PhaseClass::EveryKappa
    } else if energies.is_empty() {
        PhaseClass::NoBoundStates
    } else {
        let scale = energies.iter().map(|z| z.norm()).fold(1.0, f64::max);
        match pairing_check(&energies, 1e-9 * scale) {
            PairingClass::AllReal => PhaseClass::Real,
            PairingClass::ConjugatePaired(_) => PhaseClass::ComplexPairs,
            PairingClass::Unpaired(_) => PhaseClass::Unpaired,
        }
    };
    Ok(PhaseRow { t, phi: sol.phi, degenerate: sol.degenerate, energies, class })
}

/// Rows in grid order; points are evaluated in parallel.
pub fn pt_phase_sweep(grid: &PhaseGrid) -> Result<Vec<PhaseRow>> {
    for axis in [&grid.t11, &grid.t22, &grid.im_t12, &grid.im_t21] {
        if axis.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sweep value".into()));
        }
    }
    (0..grid.len()).into_par_iter().map(|i| phase_row(grid.point(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{seeded, uniform};

    fn exp_abs() -> PiecewiseFunction {
        PiecewiseFunction::exponential_pair(c(1.0), c(1.0), c(1.0))
    }

    #[test]
    fn boundary_maps_examples() {
        let b = boundary_maps(&exp_abs());
        assert_eq!(b.gamma0, [c(1.0), c(0.0)]);
        assert_eq!(b.gamma1, [c(-2.0), c(0.0)]);

        let kappa = c(0.7);
        let odd = PiecewiseFunction::from_traces(Traces { f_plus: c(1.0), f_minus: c(-1.0), df_plus: kappa, df_minus: kappa });
        let b = boundary_maps(&odd);
        assert_eq!(b.gamma0, [c(0.0), -kappa]);
        assert_eq!(b.gamma1, [c(0.0), c(2.0)]);

        let smooth = PiecewiseFunction::from_traces(Traces { f_plus: c(0.3), f_minus: c(0.3), df_plus: c(2.0), df_minus: c(2.0) });
        assert_eq!(boundary_maps(&smooth).gamma1, [c(0.0), c(0.0)]);
    }

    #[test]
    fn delta_well_domain() {
        let t = CouplingMatrixT::pt(-2.0, 0.0, 0.0, 0.0);
        assert!(domain_check(&t, &exp_abs(), false, 1e-15).pass);
        let zero = CouplingMatrixT::pt(0.0, 0.0, 0.0, 0.0);
        assert!(!domain_check(&zero, &exp_abs(), false, 1e-3).pass);
    }

    #[test]
    fn vanishing_traces_in_every_domain() {
        let f = PiecewiseFunction::from_traces(Traces { f_plus: c(0.0), f_minus: c(0.0), df_plus: c(0.0), df_minus: c(0.0) });
        let mut rng = seeded(3);
        for _ in 0..20 {
            let t = CouplingMatrixT::new(
                crate::sampling::complex(&mut rng, 3.0),
                crate::sampling::complex(&mut rng, 3.0),
                crate::sampling::complex(&mut rng, 3.0),
                crate::sampling::complex(&mut rng, 3.0),
            );
            assert!(domain_check(&t, &f, false, 0.0).pass);
        }
    }

    #[test]
    fn predicates() {
        let t = CouplingMatrixT::pt(1.0, -0.5, 0.3, 0.3);
        assert!(t.is_pt_symmetric() && t.is_p_selfadjoint());
        let t = CouplingMatrixT::pt(1.0, -0.5, 0.3, -0.2);
        assert!(t.is_pt_symmetric() && !t.is_p_selfadjoint());
        let t = CouplingMatrixT::new(c(1.0), c(0.1), I, c(0.0));
        assert!(!t.is_pt_symmetric());
        assert!(clifford_angle(&t).is_err());
    }

    #[test]
    fn angle_examples() {
        let t = CouplingMatrixT::pt(0.7, -1.3, 0.4, 0.4);
        let s = clifford_angle(&t).unwrap();
        assert_eq!(s.phi, 0.0);
        assert!(!s.degenerate);

        let t = CouplingMatrixT::pt(1.0, 0.0, 1.0, -1.0);
        let s = clifford_angle(&t).unwrap();
        assert!((s.phi - 0.927_295_218_001_612_2).abs() < 1e-15);
        assert!(s.residual <= ANGLE_TOL);
        assert!(matrix_relation_residual(&t, &s) <= 1e-12);

        // det T = −4 with t12 = t21
        let t = CouplingMatrixT::pt(2.0, -2.0, 0.0, 0.0);
        let s = clifford_angle(&t).unwrap();
        assert!(s.degenerate && s.phi == 0.0);
    }

    #[test]
    fn angle_branch_when_d_negative() {
        // d < 0 with t12 = t21 still gives φ = 0
        let t = CouplingMatrixT::pt(3.0, -3.0, 0.5, 0.5);
        assert!(t.det().re + 4.0 < 0.0);
        let s = clifford_angle(&t).unwrap();
        assert_eq!(s.phi, 0.0);
        assert!(matrix_relation_residual(&t, &s) < 1e-12);
    }

    #[test]
    fn transform_identities_at_zero() {
        let t = CouplingMatrixT::pt(-1.0, 0.5, 0.2, 0.2);
        let s = clifford_angle(&t).unwrap();
        let sample = PiecewiseFunction::new(
            |x| {
                let e = x.exp();
                (c(e * (1.0 - x)), c(-e * x))
            },
            |x| {
                let e = (-x).exp();
                (c(e * (1.0 + x)), c(-e * x))
            },
        );
        let checks = boundary_transform_check(&t, &s, &[sample, exp_abs()], 1e-14).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert_eq!(s.m1, pauli(3));
    }

    #[test]
    fn literal_trace_rule_disagrees() {
        let f = PiecewiseFunction::from_traces(Traces { f_plus: c(1.0), f_minus: c(0.4), df_plus: c(-0.3), df_minus: c(2.0) });
        let phi = 0.4;
        let actual = f.apply_p_phi(phi).traces();
        let good = p_phi_traces(f.traces(), phi, TraceRule::Derivative);
        let bad = p_phi_traces(f.traces(), phi, TraceRule::Literal);
        assert!((actual.df_plus - good.df_plus).norm() < 1e-15);
        assert!((actual.df_plus - bad.df_plus).norm() > 0.1);
    }

    #[test]
    fn wrong_angle_fails() {
        let t = CouplingMatrixT::pt(1.0, 0.0, 1.0, -1.0);
        let s = clifford_angle(&t).unwrap();
        assert!(p_phi_selfadjointness_check(&t, &s, 1e-12).pass);
        let wrong = PhiSolution::at(s.phi + 0.1);
        assert!(!p_phi_selfadjointness_check(&t, &wrong, 1e-6).pass);
        assert!(matrix_relation_residual(&t, &wrong) > 1e-3);
    }

    #[test]
    fn delta_bound_state() {
        let bs = bound_states(&CouplingMatrixT::pt(-2.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(bs.states.len(), 1);
        assert!((bs.states[0].energy - c(-1.0)).norm() <= 1e-12);
        assert!(bound_states(&CouplingMatrixT::pt(0.0, 0.0, 0.0, 0.0)).unwrap().states.is_empty());
        assert!(bound_states(&CouplingMatrixT::pt(2.0, 0.0, 0.0, 0.0)).unwrap().states.is_empty());
    }

    #[test]
    fn every_kappa_flag() {
        // t22 = 0, t11 = 0, det T = 4
        let bs = bound_states(&CouplingMatrixT::pt(0.0, 0.0, 2.0, 2.0)).unwrap();
        assert!(bs.every_kappa && bs.states.is_empty());
    }

    #[test]
    fn root_finder_matches_polynomial() {
        let mut rng = seeded(9);
        for _ in 0..200 {
            let t = CouplingMatrixT::pt(
                uniform(&mut rng, -3.0, 3.0),
                uniform(&mut rng, -3.0, 3.0),
                uniform(&mut rng, -3.0, 3.0),
                uniform(&mut rng, -3.0, 3.0),
            );
            let bs = bound_states(&t).unwrap();
            for s in &bs.states {
                let det = ansatz_matrix(&t, s.kappa).determinant();
                assert!(det.norm() < 1e-10 * (1.0 + s.kappa.norm_sqr()), "{det}");
                assert!(s.kappa.re > 0.0);
            }
            let e = bs.energies();
            assert!(!pairing_check(&e, 1e-9).is_unpaired());
        }
    }

    #[test]
    fn selfadjoint_slice_has_exceptional_points() {
        // t11 = −1, t22 = 1, t12 = t21 = iγ: κ complex for 1 < γ² < 9, Re κ > 0 only for γ² < 5
        let class = |g: f64| phase_row(CouplingMatrixT::pt(-1.0, 1.0, g, g)).unwrap().class;
        assert_eq!(class(0.5), PhaseClass::Real);
        assert_eq!(class(1.5), PhaseClass::ComplexPairs);
        assert_eq!(class(2.5), PhaseClass::NoBoundStates);
    }

    #[test]
    fn sweep_order_and_symmetry() {
        let axis = vec![-1.5, -0.5, 0.5, 1.5];
        let grid = PhaseGrid { t11: axis.clone(), t22: axis.clone(), im_t12: axis.clone(), im_t21: axis };
        let rows = pt_phase_sweep(&grid).unwrap();
        assert_eq!(rows.len(), 256);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.t, grid.point(i));
            assert_ne!(r.class, PhaseClass::Unpaired);
            if r.t.t12 == r.t.t21 {
                assert_eq!(r.phi, 0.0);
            }
        }
    }
}
