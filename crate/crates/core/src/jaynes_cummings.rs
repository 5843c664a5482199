//! PT-symmetric Jaynes–Cummings Hamiltonian on a truncated Fock space and its
//! cross-check against the grid operator `(p − A)² + V`.
//!
//! Tensor order is Fock ⊗ level: basis state `|n, a⟩` sits at `n·m + a`.
//! The ladder operators are `d = (ip + x)/√2`, `d† = (−ip + x)/√2` acting on
//! real Hermite functions.

use num_complex::Complex64 as C64;

use crate::cartan::{GaugeAlgebraElement, ThetaSignature};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::matrix_schrodinger::{build_gauged, symmetry_audit, ConstantGauge, MatrixPotential};
use crate::numerics::spectrum::compare_lowest;
use crate::numerics::{eigenvalues, pairing_check, ComplexMatrix, Grid1D, MatchedPair, PairingClass, ONE};

/// Truncated ladder operators on `span{|0⟩ … |n_max⟩}`.
#[derive(Clone, Debug)]
pub struct FockLadder {
    pub n_max: usize,
    pub d: ComplexMatrix,
    pub d_dag: ComplexMatrix,
    pub n: ComplexMatrix,
}

impl FockLadder {
    pub fn new(n_max: usize) -> Self {
        let dim = n_max + 1;
        let d = ComplexMatrix::from_real_fn(dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 });
        let d_dag = d.transpose();
        let n = ComplexMatrix::from_real_diag(&(0..dim).map(|k| k as f64).collect::<Vec<_>>());
        FockLadder { n_max, d, d_dag, n }
    }

    /// `max |[d, d†] − I|` on `n < n_max`.
    pub fn commutator_residual(&self) -> f64 {
        let c = self.d.commutator(&self.d_dag);
        let mut worst: f64 = 0.0;
        for i in 0..self.n_max {
            for j in 0..self.n_max {
                let want = if i == j { ONE } else { C64::new(0.0, 0.0) };
                worst = worst.max((c[(i, j)] - want).norm());
            }
        }
        worst
    }

    /// `(−1)^n` on the diagonal.
    pub fn parity(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&(0..=self.n_max).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>())
    }
}

/// `a = c − cᵀ` with `c = [[iũ, v], [0, iw̃]]`, `ũ, w̃` strictly upper parts.
#[derive(Clone, Debug)]
pub struct NilpotentSplit {
    pub a: ComplexMatrix,
    pub c: ComplexMatrix,
    pub sig: ThetaSignature,
}

pub fn nilpotent_split(a: &GaugeAlgebraElement) -> NilpotentSplit {
    let sig = a.sig;
    let (p, m) = (sig.p, sig.m());
    let c = ComplexMatrix::from_fn(m, |i, j| {
        if j <= i && (i < p) == (j < p) {
            return C64::new(0.0, 0.0);
        }
        match (i < p, j < p) {
            (true, true) => C64::new(0.0, a.u[i][j]),
            (true, false) => C64::new(a.v[i][j - p], 0.0),
            (false, true) => C64::new(0.0, 0.0),
            (false, false) => C64::new(0.0, a.w[i - p][j - p]),
        }
    });
    NilpotentSplit { a: a.matrix.clone(), c, sig }
}

impl NilpotentSplit {
    pub fn reconstruction_residual(&self) -> f64 {
        (&self.c - &self.c.transpose()).dist(&self.a)
    }

    /// `‖c^m‖_F`.
    pub fn nilpotency_residual(&self) -> f64 {
        self.c.pow(self.sig.m() as u32).norm()
    }
}

/// Level energies `ω = diag(ω_1 … ω_m)`; complex entries are accepted so
/// negative controls can break the symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelEnergies {
    pub omega: Vec<C64>,
}

impl LevelEnergies {
    pub fn real(values: &[f64]) -> Self {
        LevelEnergies { omega: values.iter().map(|&w| C64::new(w, 0.0)).collect() }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&self.omega)
    }

    pub fn is_real(&self) -> bool {
        self.omega.iter().all(|w| w.im == 0.0)
    }
}

/// Form of the cross term in `½H = N + √2·(cross) + ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossTerm {
    /// `c d + cᵀ d†`, as written in the model definition.
    Stated,
    /// `c d† + cᵀ d`: the form produced by expanding `(p − ia)² + V`.
    Swapped,
}

impl CrossTerm {
    pub fn label(self) -> &'static str {
        match self {
            CrossTerm::Stated => "c d + c^T d^dag",
            CrossTerm::Swapped => "c^T d + c d^dag",
        }
    }
}

/// `H_jc = 2[N ⊗ I + √2(d ⊗ c + d† ⊗ cᵀ) + I ⊗ ω]`.
pub fn build_jc(split: &NilpotentSplit, omega: &LevelEnergies, n_max: usize) -> Result<ComplexMatrix> {
    build_jc_with(split, omega, n_max, 1.0, CrossTerm::Stated)
}

/// General builder: `a ↦ s·a` on the Fock side and a choice of cross term.
pub fn build_jc_with(
    split: &NilpotentSplit,
    omega: &LevelEnergies,
    n_max: usize,
    s: f64,
    cross: CrossTerm,
) -> Result<ComplexMatrix> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    let m = split.sig.m();
    if omega.omega.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: omega.omega.len() });
    }
    let f = FockLadder::new(n_max);
    let c = split.c.scale_real(s);
    let ct = c.transpose();
    let id_m = ComplexMatrix::identity(m);
    let id_f = ComplexMatrix::identity(n_max + 1);
    let coupling = match cross {
        CrossTerm::Stated => &f.d.kron(&c) + &f.d_dag.kron(&ct),
        CrossTerm::Swapped => &f.d.kron(&ct) + &f.d_dag.kron(&c),
    };
    let half = &(&f.n.kron(&id_m) + &coupling.scale_real(2f64.sqrt())) + &id_f.kron(&omega.matrix());
    Ok(half.scale_real(2.0))
}

/// Residual of `(Π_F ⊗ Θ) conj(H) (Π_F ⊗ Θ) = H`, relative to `‖H‖`.
pub fn jc_pt_check(h: &ComplexMatrix, sig: ThetaSignature, n_max: usize, tol: f64) -> Result<Check> {
    let op = FockLadder::new(n_max).parity().kron(&sig.theta());
    if op.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: h.dim() });
    }
    let lhs = &(&op * &h.conj()) * &op;
    Ok(Check::at_most("(Pi_F x Theta) H* (Pi_F x Theta) = H", lhs.dist(h) / h.norm().max(1.0), tol))
}

/// `V(x) = (x² − 1)I + 2(c + cᵀ)x + a² + 2ω`.
pub fn jc_potential(split: &NilpotentSplit, omega: &LevelEnergies) -> MatrixPotential {
    let m = split.sig.m();
    let cs = &split.c + &split.c.transpose();
    let constant = &(&split.a * &split.a) + &omega.matrix().scale_real(2.0);
    MatrixPotential::new(m, move |x| {
        &(&ComplexMatrix::identity(m).scale_real(x * x - 1.0) + &cs.scale_real(2.0 * x)) + &constant
    })
}

/// Real Hermite functions `ψ_0 … ψ_n` sampled at `xs`; `out[n][k] = ψ_n(x_k)`.
pub fn hermite_functions(n: usize, xs: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; xs.len()]; n + 1];
    let norm0 = std::f64::consts::PI.powf(-0.25);
    for (k, &x) in xs.iter().enumerate() {
        out[0][k] = norm0 * (-x * x / 2.0).exp();
        if n >= 1 {
            out[1][k] = 2f64.sqrt() * x * out[0][k];
        }
        for j in 1..n {
            out[j + 1][k] =
                (2.0 / (j + 1) as f64).sqrt() * x * out[j][k] - (j as f64 / (j + 1) as f64).sqrt() * out[j - 1][k];
        }
    }
    out
}

/// Matrix elements `⟨n, a| H |n', b⟩` of a grid operator in the sampled
/// Hermite basis, `n, n' ≤ n_op`.
pub fn project_on_hermite(h: &ComplexMatrix, grid: &Grid1D, m: usize, n_op: usize) -> ComplexMatrix {
    let psi = hermite_functions(n_op, &grid.nodes());
    let dim = (n_op + 1) * m;
    let nodes = grid.len();
    let basis = |col: usize| -> Vec<C64> {
        let (n, a) = (col / m, col % m);
        let mut v = vec![C64::new(0.0, 0.0); nodes * m];
        for k in 0..nodes {
            v[k * m + a] = C64::new(psi[n][k], 0.0);
        }
        v
    };
    let images: Vec<Vec<C64>> = (0..dim).map(|c| h.mul_vec(&basis(c))).collect();
    let hs = grid.spacing();
    ComplexMatrix::from_fn(dim, |r, c| {
        let (n, a) = (r / m, r % m);
        (0..nodes).map(|k| psi[n][k] * images[c][k * m + a]).sum::<C64>() * hs
    })
}

/// Grid parameters for the dual build.
#[derive(Clone, Copy, Debug)]
pub struct DualBuildConfig {
    pub half_width: f64,
    pub h: f64,
    pub n_max: usize,
    /// Number of lowest eigenvalues compared.
    pub k: usize,
    /// Highest Fock level used in the operator-level comparison.
    pub n_op: usize,
}

impl DualBuildConfig {
    /// Box must reach `√(2 n_max) + 4` and `k ≤ n_max / 2`.
    pub fn validate(&self) -> Result<()> {
        let need = (2.0 * self.n_max as f64).sqrt() + 4.0;
        if self.half_width < need {
            return Err(Error::InvalidArgument(format!(
                "box half-width {} does not resolve n_max = {} (needs {need:.3})",
                self.half_width, self.n_max
            )));
        }
        if self.k > self.n_max / 2 {
            return Err(Error::InvalidArgument(format!(
                "k = {} exceeds n_max/2 = {}",
                self.k,
                self.n_max / 2
            )));
        }
        if self.n_op + 1 > self.n_max {
            return Err(Error::InvalidArgument("operator comparison level must stay below n_max".into()));
        }
        Ok(())
    }
}

/// One Fock-side convention tried by [`jc_equivalence_check`].
#[derive(Clone, Debug)]
pub struct ConventionResult {
    pub sign: f64,
    pub cross: CrossTerm,
    /// Largest distance between the lowest `k` grid and Fock eigenvalues.
    pub spectral: f64,
    pub pairs: Vec<MatchedPair>,
    /// Relative Hermite-basis mismatch `‖⟨H_g⟩ − H_jc‖ / ‖H_jc‖` on `n ≤ n_op`.
    pub operator_residual: f64,
}

impl ConventionResult {
    pub fn label(&self) -> String {
        format!("s={:+}, {}", self.sign, self.cross.label())
    }
}

#[derive(Clone, Debug)]
pub struct JcEquivalenceReport {
    pub conventions: Vec<ConventionResult>,
    /// Index into `conventions` with the smallest spectral distance.
    pub best: usize,
    pub grid_pairing: PairingClass,
}

impl JcEquivalenceReport {
    pub fn best(&self) -> &ConventionResult {
        &self.conventions[self.best]
    }

    /// Best spectral distance among the `a ↦ ±a` variants of the stated form.
    pub fn best_stated(&self) -> f64 {
        self.conventions
            .iter()
            .filter(|c| c.cross == CrossTerm::Stated)
            .map(|c| c.spectral)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Dual build: grid `(p − ia)² + V` versus the Fock-space Hamiltonian under
/// `a ↦ ±a` and both cross-term forms.
pub fn jc_equivalence_check(
    a: &GaugeAlgebraElement,
    omega: &LevelEnergies,
    cfg: DualBuildConfig,
) -> Result<JcEquivalenceReport> {
    cfg.validate()?;
    let split = nilpotent_split(a);
    let m = a.sig.m();
    let grid = Grid1D::covering(cfg.half_width, cfg.h)?;
    let hg = build_gauged(&ConstantGauge::from_element(a), &jc_potential(&split, omega), &grid)?;
    let ev_grid = eigenvalues(&hg.matrix)?;
    let projected = project_on_hermite(&hg.matrix, &grid, m, cfg.n_op);
    let dim = projected.dim();

    let mut conventions = Vec::new();
    for cross in [CrossTerm::Stated, CrossTerm::Swapped] {
        for sign in [1.0, -1.0] {
            let hjc = build_jc_with(&split, omega, cfg.n_max, sign, cross)?;
            let pairs = compare_lowest(&ev_grid, &eigenvalues(&hjc)?, cfg.k);
            let block = hjc.principal_submatrix(0, dim);
            conventions.push(ConventionResult {
                sign,
                cross,
                spectral: pairs.iter().map(|p| p.dist).fold(0.0, f64::max),
                pairs,
                operator_residual: projected.dist(&block) / block.norm().max(1.0),
            });
        }
    }
    let best = (0..conventions.len())
        .min_by(|&i, &j| conventions[i].spectral.total_cmp(&conventions[j].spectral))
        .expect("four conventions");
    let tol = 1e-6 * ev_grid.iter().map(|z| z.norm()).fold(1.0, f64::max);
    Ok(JcEquivalenceReport { conventions, best, grid_pairing: pairing_check(&ev_grid, tol) })
}

/// Largest change of the lowest `k` eigenvalues when `n_max` grows to `n_big`.
pub fn truncation_change(
    split: &NilpotentSplit,
    omega: &LevelEnergies,
    n_max: usize,
    n_big: usize,
    k: usize,
) -> Result<f64> {
    let small = eigenvalues(&build_jc(split, omega, n_max)?)?;
    let big = eigenvalues(&build_jc(split, omega, n_big)?)?;
    Ok(compare_lowest(&small, &big, k).iter().map(|p| p.dist).fold(0.0, f64::max))
}

/// PT audit of the potential in the grid picture: `ΘV*(−x)Θ = V(x)` etc.
pub fn potential_audit(
    a: &GaugeAlgebraElement,
    omega: &LevelEnergies,
    grid: &Grid1D,
    tol: f64,
) -> Result<Vec<Check>> {
    let split = nilpotent_split(a);
    symmetry_audit(&ConstantGauge::from_element(a), &jc_potential(&split, omega), a.sig, grid, tol)
}
