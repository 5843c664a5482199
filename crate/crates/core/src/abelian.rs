//! Scalar gauged Hamiltonian `H_g = (p − A)² + V`, its gauge factorization
//! `U = U_u U_h` and the Krein metric `η = U†𝒫U = J|η|`.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::numerics::grid::weak_form_residual;
use crate::numerics::spectrum::{refinement_study, RefinementStudy};
use crate::numerics::{eigenvalues, grid_operator, kinetic, ComplexMatrix, Grid1D, GridOperator, OperatorKind, ONE};
use crate::sampling::{complex_vector, seeded};

pub type ScalarFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Tolerance on `A(−x) = conj A(x)` accepted by the even/odd split.
pub const PT_SPLIT_TOL: f64 = 1e-10;

/// Nodes within this distance of either end are excluded from weak-form tests.
pub const BOUNDARY_BUFFER: usize = 5;

/// Lower bound asserted on the plain-parity residual when the gauge is nontrivial.
pub const OBSTRUCTION_MIN: f64 = 1e-2;

#[derive(Clone)]
pub struct ScalarPotentials {
    pub a: ScalarFn,
    pub v: ScalarFn,
}

impl ScalarPotentials {
    pub fn new(a: impl Fn(f64) -> C64 + Send + Sync + 'static, v: impl Fn(f64) -> C64 + Send + Sync + 'static) -> Self {
        ScalarPotentials { a: Arc::new(a), v: Arc::new(v) }
    }

    pub fn a_pt_residual(&self, grid: &Grid1D) -> (f64, usize) {
        pt_residual(&*self.a, grid)
    }

    pub fn v_pt_residual(&self, grid: &Grid1D) -> (f64, usize) {
        pt_residual(&*self.v, grid)
    }
}

/// Worst `|f(−x_k) − conj f(x_k)|` over the nodes, with its node index.
pub fn pt_residual(f: &dyn Fn(f64) -> C64, grid: &Grid1D) -> (f64, usize) {
    let mut worst = (0.0, 0);
    for k in 0..grid.len() {
        let x = grid.x(k);
        let r = (f(-x) - f(x).conj()).norm();
        if r > worst.0 {
            worst = (r, k);
        }
    }
    worst
}

/// `A = A₊ + iA₋` with `A₊` real even and `A₋` real odd, sampled on nodes.
pub fn split_even_odd(a: &dyn Fn(f64) -> C64, grid: &Grid1D) -> Result<(Vec<f64>, Vec<f64>)> {
    let (res, node) = pt_residual(a, grid);
    if res > PT_SPLIT_TOL {
        return Err(Error::PtViolation { node, x: grid.x(node), residual: res });
    }
    let n = grid.len();
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    for k in 0..n {
        let (ap, am) = (a(grid.x(k)), a(grid.x(grid.mirror(k))));
        plus[k] = (ap + am).re / 2.0;
        minus[k] = (ap - am).im / 2.0;
    }
    Ok((plus, minus))
}

/// `∫₀^{x_k} f` on every node: a half-cell trapezoid from 0 to `±h/2`, then
/// whole-cell trapezoids outward. `f0` is the value at the origin.
pub fn antiderivative(values: &[C64], f0: C64, grid: &Grid1D) -> Vec<C64> {
    let n = grid.half_count();
    let h = grid.spacing();
    let mut out = vec![C64::new(0.0, 0.0); grid.len()];
    out[n] = (f0 + values[n]) * (h / 4.0);
    out[n - 1] = -(f0 + values[n - 1]) * (h / 4.0);
    for k in n + 1..2 * n {
        out[k] = out[k - 1] + (values[k - 1] + values[k]) * (h / 2.0);
    }
    for k in (0..n - 1).rev() {
        out[k] = out[k + 1] - (values[k + 1] + values[k]) * (h / 2.0);
    }
    out
}

fn real_antiderivative(values: &[f64], f0: f64, grid: &Grid1D) -> Vec<f64> {
    let c: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    antiderivative(&c, C64::new(f0, 0.0), grid).into_iter().map(|z| z.re).collect()
}

#[derive(Clone, Debug)]
pub struct GaugeFactorization {
    pub grid: Grid1D,
    /// `Q = ∫₀^x A₊`, odd.
    pub q: Vec<f64>,
    /// `S = ∫₀^x A₋`, even.
    pub s: Vec<f64>,
    pub u_u: GridOperator,
    pub u_h: GridOperator,
    pub u: GridOperator,
    pub eta: GridOperator,
    pub abs_eta: GridOperator,
    pub j: GridOperator,
    /// `sign(Q)`; `None` when `Q` vanishes on some node.
    pub r_q: Option<GridOperator>,
    pub q_abs: Vec<f64>,
    pub q_zero_nodes: Vec<usize>,
    /// Structural identities verified at construction.
    pub checks: Vec<Check>,
}

/// Unitarity/Hermiticity tolerance for the diagonal factors.
const FACTOR_TOL: f64 = 1e-12;
/// Tolerance for the parity relations and the polar decomposition of `η`.
const POLAR_TOL: f64 = 1e-10;

fn diag(grid: Grid1D, values: Vec<C64>) -> GridOperator {
    GridOperator::new(grid, 1, ComplexMatrix::from_diag(&values)).expect("diagonal operator matches grid")
}

/// Builds `U = e^{−i∫A}` split as `U_u = e^{−iQ}`, `U_h = e^{S}`, and the
/// metric `η = U†𝒫U` with its polar parts, verifying the structural identities.
pub fn gauge_factorization(a: &dyn Fn(f64) -> C64, grid: &Grid1D) -> Result<GaugeFactorization> {
    let (plus, minus) = split_even_odd(a, grid)?;
    let a0 = a(0.0);
    let q = real_antiderivative(&plus, a0.re, grid);
    let s = real_antiderivative(&minus, 0.0, grid);
    let g = *grid;

    let u_u = diag(g, q.iter().map(|&t| C64::from_polar(1.0, -t)).collect());
    let u_h = diag(g, s.iter().map(|&t| C64::new(t.exp(), 0.0)).collect());
    let u = GridOperator::new(g, 1, &u_u.matrix * &u_h.matrix)?;
    let parity = grid_operator(g, OperatorKind::Parity, 1)?;
    let p = &parity.matrix;
    let eta = GridOperator::new(g, 1, &(&u.matrix.adjoint() * p) * &u.matrix)?;
    let u_u_inv = diag(g, q.iter().map(|&t| C64::from_polar(1.0, t)).collect());
    let j = GridOperator::new(g, 1, &(&u_u_inv.matrix * p) * &u_u.matrix)?;
    let abs_eta = GridOperator::new(g, 1, &u_h.matrix * &u_h.matrix)?;

    let id = ComplexMatrix::identity(g.len());
    let rel = |x: &ComplexMatrix, y: &ComplexMatrix| (x - y).norm_max() / y.norm_max().max(1.0);
    let mut checks = vec![
        Check::at_most("U_u unitary", rel(&(&u_u.matrix.adjoint() * &u_u.matrix), &id), FACTOR_TOL),
        Check::at_most("U_h Hermitian", rel(&u_h.matrix.adjoint(), &u_h.matrix), FACTOR_TOL),
        Check::flag("U_h positive", u_h.matrix.diagonal().iter().all(|z| z.re > 0.0 && z.im == 0.0)),
        Check::at_most("P U_u = U_u^dag P", rel(&(p * &u_u.matrix), &(&u_u.matrix.adjoint() * p)), POLAR_TOL),
        Check::at_most("P U_h = U_h P", rel(&(p * &u_h.matrix), &(&u_h.matrix * p)), POLAR_TOL),
        Check::at_most("eta = J |eta|", rel(&(&j.matrix * &abs_eta.matrix), &eta.matrix), POLAR_TOL),
        Check::at_most("J^2 = I", rel(&(&j.matrix * &j.matrix), &id), POLAR_TOL),
        Check::at_most("J = J^dag", rel(&j.matrix.adjoint(), &j.matrix), POLAR_TOL),
        Check::at_most("eta Hermitian", rel(&eta.matrix.adjoint(), &eta.matrix), POLAR_TOL),
    ];

    let q_zero_nodes: Vec<usize> = (0..q.len()).filter(|&k| q[k] == 0.0).collect();
    let q_abs: Vec<f64> = q.iter().map(|t| t.abs()).collect();
    let r_q = if q_zero_nodes.is_empty() {
        let r = diag(g, q.iter().map(|t| C64::new(t.signum(), 0.0)).collect());
        let qa = ComplexMatrix::from_real_diag(&q_abs);
        let qd = ComplexMatrix::from_real_diag(&q);
        checks.push(Check::at_most("R_Q |Q| = Q", rel(&(&r.matrix * &qa), &qd), POLAR_TOL));
        checks.push(Check::at_most("P R_Q = -R_Q P", p.anticommutator(&r.matrix).norm_max(), POLAR_TOL));
        Some(r)
    } else {
        None
    };

    Ok(GaugeFactorization {
        grid: g,
        q,
        s,
        u_u,
        u_h,
        u,
        eta,
        abs_eta,
        j,
        r_q,
        q_abs,
        q_zero_nodes,
        checks,
    })
}

impl GaugeFactorization {
    /// True when the gauge transformation differs from the identity.
    pub fn is_nontrivial(&self) -> bool {
        self.q.iter().chain(&self.s).any(|t| t.abs() > 1e-12)
    }

    /// `max |𝒫 conj(U conj(𝒫f)) − Uf| / ‖Uf‖` over sampled `f`.
    pub fn pt_commutation_residual(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = seeded(seed);
        let n = self.grid.len();
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let f = complex_vector(&mut rng, n);
            let pf_conj: Vec<C64> = (0..n).map(|k| f[self.grid.mirror(k)].conj()).collect();
            let upf = self.u.matrix.mul_vec(&pf_conj);
            let lhs: Vec<C64> = (0..n).map(|k| upf[self.grid.mirror(k)].conj()).collect();
            let uf = self.u.matrix.mul_vec(&f);
            let num: f64 = lhs.iter().zip(&uf).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let den: f64 = uf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(num / den);
        }
        worst
    }
}

/// Discretization of `(p − A)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stencil {
    /// `p² − p·A − A·p + A²` with central-difference `p` and three-point `p²`.
    Expanded,
    /// Link-variable form `U⁻¹ p² U` with `U = e^{−i∫A}`; keeps the gauge
    /// covariance exact on the grid.
    Covariant,
}

/// Assembles `H_g = (p − A)² + V` on `grid`.
pub fn build_scalar_hamiltonian(pots: &ScalarPotentials, grid: &Grid1D, stencil: Stencil) -> Result<GridOperator> {
    let g = *grid;
    let n = g.len();
    let h = g.spacing();
    let av: Vec<C64> = g.nodes().iter().map(|&x| (pots.a)(x)).collect();
    let vv: Vec<C64> = g.nodes().iter().map(|&x| (pots.v)(x)).collect();
    let mut mat = kinetic(g, 1)?.matrix;
    match stencil {
        Stencil::Expanded => {
            let p = grid_operator(g, OperatorKind::Momentum, 1)?.matrix;
            let cross = &p.mul_diag_right(&av) + &p.mul_diag_left(&av);
            mat = &mat - &cross;
            for k in 0..n {
                mat[(k, k)] += av[k] * av[k] + vv[k];
            }
        }
        Stencil::Covariant => {
            let w = antiderivative(&av, (pots.a)(0.0), &g);
            let link = |from: usize, to: usize| (C64::new(0.0, -1.0) * (w[to] - w[from])).exp();
            let inv_h2 = 1.0 / (h * h);
            for k in 0..n {
                mat[(k, k)] += vv[k];
                if k + 1 < n {
                    mat[(k, k + 1)] = -link(k, k + 1) * inv_h2;
                }
                if k > 0 {
                    mat[(k, k - 1)] = -link(k, k - 1) * inv_h2;
                }
            }
        }
    }
    mat.check_finite()?;
    GridOperator::new(g, 1, mat)
}

/// Gauge-free reference `p² + V`.
pub fn build_free_hamiltonian(v: &dyn Fn(f64) -> C64, grid: &Grid1D) -> Result<GridOperator> {
    let mut op = kinetic(*grid, 1)?;
    for k in 0..grid.len() {
        op.matrix[(k, k)] += v(grid.x(k));
    }
    Ok(op)
}

#[derive(Clone, Debug)]
pub struct PseudoHermiticityReport {
    /// `ηH_g = H_g†η`, interior weak form.
    pub r1: f64,
    /// Same with `η → 𝒫`.
    pub r2: f64,
    /// `(H_g φ, Jψ)_{|η|} = (φ, J H_g ψ)_{|η|}` on random interior pairs.
    pub r3: f64,
    pub gauge_nontrivial: bool,
    pub checks: Vec<Check>,
}

/// Weak-form pseudo-Hermiticity audit of `H_g` against the factorization.
pub fn verify_pseudo_hermiticity(
    hg: &GridOperator,
    fact: &GaugeFactorization,
    tol: f64,
    seed: u64,
) -> Result<PseudoHermiticityReport> {
    if hg.dim() != fact.eta.dim() {
        return Err(Error::DimensionMismatch { expected: fact.eta.dim(), found: hg.dim() });
    }
    let h = &hg.matrix;
    let hd = h.adjoint();
    let range = hg.interior(BOUNDARY_BUFFER);
    let eta = &fact.eta.matrix;
    let r1 = weak_form_residual(&(eta * h), &(&hd * eta), range);
    let p = grid_operator(hg.grid, OperatorKind::Parity, 1)?.matrix;
    let r2 = weak_form_residual(&(&p * h), &(&hd * &p), range);

    let n = hg.dim();
    let mut rng = seeded(seed);
    let w = &fact.abs_eta.matrix;
    let j = &fact.j.matrix;
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>();
    let mut r3: f64 = 0.0;
    for _ in 0..8 {
        let mut phi = complex_vector(&mut rng, n);
        let mut psi = complex_vector(&mut rng, n);
        for k in (0..range.0).chain(range.1..n) {
            phi[k] = C64::new(0.0, 0.0);
            psi[k] = C64::new(0.0, 0.0);
        }
        let h_phi = h.mul_vec(&phi);
        let wj_psi = w.mul_vec(&j.mul_vec(&psi));
        let w_phi = w.mul_vec(&phi);
        let jh_psi = j.mul_vec(&h.mul_vec(&psi));
        let lhs = dot(&h_phi, &wj_psi);
        let rhs = dot(&w_phi, &jh_psi);
        let scale = norm(&h_phi) * norm(&wj_psi) + norm(&w_phi) * norm(&jh_psi);
        r3 = r3.max((lhs - rhs).norm() / scale);
    }

    let nontrivial = fact.is_nontrivial();
    let mut checks = vec![Check::at_most("eta H_g = H_g^dag eta (r1)", r1, tol)];
    if nontrivial {
        checks.push(Check::at_least("P H_g != H_g^dag P (r2)", r2, OBSTRUCTION_MIN));
    } else {
        checks.push(Check::at_most("P H_g = H_g^dag P (r2)", r2, tol));
    }
    checks.push(Check::at_most("weighted J-selfadjointness (r3)", r3, tol));
    Ok(PseudoHermiticityReport { r1, r2, r3, gauge_nontrivial: nontrivial, checks })
}

/// Lowest-`k` comparison of `eig(H_g)` (expanded stencil) with `eig(p² + V)`
/// over a sequence of spacings on `|x| ≤ half_width`.
pub fn gauge_spectral_invariance(
    pots: &ScalarPotentials,
    half_width: f64,
    spacings: &[f64],
    k: usize,
) -> Result<RefinementStudy> {
    refinement_study(spacings, k, |h| {
        let grid = Grid1D::covering(half_width, h)?;
        let hg = build_scalar_hamiltonian(pots, &grid, Stencil::Expanded)?;
        let h0 = build_free_hamiltonian(&*pots.v, &grid)?;
        Ok((eigenvalues(&hg.matrix)?, eigenvalues(&h0.matrix)?))
    })
}

/// Standard `L²` weight: identity on the grid.
pub fn unit_weight(grid: Grid1D) -> GridOperator {
    diag(grid, vec![ONE; grid.len()])
}
