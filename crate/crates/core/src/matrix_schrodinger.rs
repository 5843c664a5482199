//! Matrix Schrödinger operators `H_g = (p − A)² + V(x)` with a constant
//! non-Abelian gauge potential, the global re-gauging `H = U H_g U⁻¹` and
//! the `𝐏 = 𝒫 ⊗ Θ` symmetry audits.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::abelian::BOUNDARY_BUFFER;
use crate::cartan::{GaugeAlgebraElement, ThetaSignature};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::numerics::grid::weak_form_residual;
use crate::numerics::spectrum::{compare_lowest, refinement_study, RefinementStudy};
use crate::numerics::{
    eigenvalues, expm, grid_operator, kinetic, pairing_check, ComplexMatrix, Grid1D, GridOperator, MatchedPair,
    OperatorKind, PairingClass, I,
};
use crate::sampling::{antisymmetric_block, symmetric_block, uniform, SampleRng};

pub type MatrixFn = Arc<dyn Fn(f64) -> ComplexMatrix + Send + Sync>;

/// `x ↦ V(x) ∈ ℂ^{m×m}`.
#[derive(Clone)]
pub struct MatrixPotential {
    pub m: usize,
    pub v: MatrixFn,
}

impl MatrixPotential {
    pub fn new(m: usize, v: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        MatrixPotential { m, v: Arc::new(v) }
    }

    pub fn at(&self, x: f64) -> ComplexMatrix {
        (self.v)(x)
    }

    /// `x² I_m`.
    pub fn harmonic(m: usize) -> Self {
        Self::new(m, move |x| ComplexMatrix::identity(m).scale_real(x * x))
    }

    /// Adds `extra(x)` to the potential.
    pub fn plus(&self, extra: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static) -> Self {
        let base = self.v.clone();
        Self::new(self.m, move |x| &base(x) + &extra(x))
    }
}

/// Constant gauge potential `A`.
#[derive(Clone, Debug)]
pub struct ConstantGauge {
    pub a: ComplexMatrix,
}

impl ConstantGauge {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        a.check_finite()?;
        Ok(ConstantGauge { a })
    }

    /// `A = i·a` for `a ∈ g_Θ`.
    pub fn from_element(a: &GaugeAlgebraElement) -> Self {
        ConstantGauge { a: a.matrix.scale(I) }
    }

    pub fn m(&self) -> usize {
        self.a.dim()
    }
}

fn theta_conj(t: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    &(t * m) * t
}

/// Residuals of `ΘA*Θ = A`, `ΘV*(−x)Θ = V(x)`, `ΘA†Θ = −A`,
/// `ΘV†(−x)Θ = V(x)`, `A = −Aᵀ`, `V = Vᵀ`, maxima over the nodes.
pub fn symmetry_audit(
    gauge: &ConstantGauge,
    pot: &MatrixPotential,
    sig: ThetaSignature,
    grid: &Grid1D,
    tol: f64,
) -> Result<Vec<Check>> {
    let m = sig.m();
    if gauge.m() != m || pot.m != m {
        return Err(Error::DimensionMismatch { expected: m, found: gauge.m().max(pot.m) });
    }
    let t = sig.theta();
    let a = &gauge.a;
    let mut v_pt: f64 = 0.0;
    let mut v_herm: f64 = 0.0;
    let mut v_sym: f64 = 0.0;
    for x in grid.nodes() {
        let vx = pot.at(x);
        let vm = pot.at(-x);
        v_pt = v_pt.max(theta_conj(&t, &vm.conj()).dist(&vx));
        v_herm = v_herm.max(theta_conj(&t, &vm.adjoint()).dist(&vx));
        v_sym = v_sym.max(vx.dist(&vx.transpose()));
    }
    Ok(vec![
        Check::at_most("Theta A* Theta = A", theta_conj(&t, &a.conj()).dist(a), tol),
        Check::at_most("Theta V*(-x) Theta = V(x)", v_pt, tol),
        Check::at_most("Theta A^dag Theta = -A", (&theta_conj(&t, &a.adjoint()) + a).norm(), tol),
        Check::at_most("Theta V^dag(-x) Theta = V(x)", v_herm, tol),
        Check::at_most("A = -A^T", (a + &a.transpose()).norm(), tol),
        Check::at_most("V = V^T", v_sym, tol),
    ])
}

/// Operators produced by [`build_and_regauge`].
#[derive(Clone, Debug)]
pub struct Regauged {
    pub hg: GridOperator,
    /// `p² + e^{−iAx} V e^{iAx}`.
    pub h: GridOperator,
    /// `blockdiag_j e^{−iA x_j}`.
    pub u: GridOperator,
    /// `U H_g U⁻¹` assembled directly.
    pub h_conj: GridOperator,
}

/// Assembles `H_g = p² − 2A p + A² + V` (constant `A` commutes with `p`)
/// and the re-gauged `H`.
pub fn build_gauged(gauge: &ConstantGauge, pot: &MatrixPotential, grid: &Grid1D) -> Result<GridOperator> {
    let m = gauge.m();
    if pot.m != m {
        return Err(Error::DimensionMismatch { expected: m, found: pot.m });
    }
    let g = *grid;
    let p = grid_operator(g, OperatorKind::Momentum, 1)?.matrix;
    let kin = kinetic(g, m)?.matrix;
    let cross = p.kron(&gauge.a).scale_real(2.0);
    let a2 = &gauge.a * &gauge.a;
    let local = GridOperator::block_multiply(g, m, |x| &a2 + &pot.at(x))?.matrix;
    GridOperator::new(g, m, &(&kin - &cross) + &local)
}

pub fn build_and_regauge(gauge: &ConstantGauge, pot: &MatrixPotential, grid: &Grid1D) -> Result<Regauged> {
    let m = gauge.m();
    let g = *grid;
    let hg = build_gauged(gauge, pot, grid)?;
    let minus_ia = gauge.a.scale(-I);
    let u = GridOperator::block_multiply(g, m, |x| expm(&minus_ia.scale_real(x)).expect("finite gauge exponential"))?;
    let u_inv =
        GridOperator::block_multiply(g, m, |x| expm(&minus_ia.scale_real(-x)).expect("finite gauge exponential"))?;
    let kin = kinetic(g, m)?.matrix;
    let local = GridOperator::block_multiply(g, m, |x| {
        let e = expm(&minus_ia.scale_real(x)).expect("finite gauge exponential");
        let ei = expm(&minus_ia.scale_real(-x)).expect("finite gauge exponential");
        &(&e * &pot.at(x)) * &ei
    })?;
    let h = GridOperator::new(g, m, &kin + &local.matrix)?;
    let h_conj = GridOperator::new(g, m, &(&u.matrix * &hg.matrix) * &u_inv.matrix)?;
    Ok(Regauged { hg, h, u, h_conj })
}

/// `𝐏 = 𝒫 ⊗ Θ` on node-major storage.
pub fn big_parity(grid: &Grid1D, sig: ThetaSignature) -> Result<ComplexMatrix> {
    Ok(grid_operator(*grid, OperatorKind::Parity, 1)?.matrix.kron(&sig.theta()))
}

#[derive(Clone, Debug)]
pub struct SpectralComparison {
    pub pairs: Vec<MatchedPair>,
    pub max_scaled: f64,
    pub pairing_hg: PairingClass,
    pub pairing_h: PairingClass,
    /// `𝐏H_g = H_g†𝐏`, interior weak form.
    pub p_residual: f64,
    pub eigenvalues_hg: Vec<C64>,
    pub eigenvalues_h: Vec<C64>,
}

/// Tolerance for the imaginary part below which eigenvalues count as real,
/// and for conjugate partners.
pub const PAIRING_TOL: f64 = 1e-6;

/// Compares the lowest `k` eigenvalues of `H_g` with the spectrum of `H`,
/// classifies both under conjugate pairing and measures 𝐏-Hermiticity of `H_g`.
pub fn spectral_compare(hg: &GridOperator, h: &GridOperator, sig: ThetaSignature, k: usize) -> Result<SpectralComparison> {
    if hg.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: hg.dim(), found: h.dim() });
    }
    let ev_g = eigenvalues(&hg.matrix)?;
    let ev_h = eigenvalues(&h.matrix)?;
    let pairs = compare_lowest(&ev_g, &ev_h, k);
    let max_scaled = pairs.iter().map(|p| p.scaled).fold(0.0, f64::max);
    let scale = |ev: &[C64]| PAIRING_TOL * ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let pairing_hg = pairing_check(&ev_g, scale(&ev_g));
    let pairing_h = pairing_check(&ev_h, scale(&ev_h));
    let bp = big_parity(&hg.grid, sig)?;
    let p_residual = weak_form_residual(&(&bp * &hg.matrix), &(&hg.matrix.adjoint() * &bp), hg.interior(BOUNDARY_BUFFER));
    Ok(SpectralComparison {
        pairs,
        max_scaled,
        pairing_hg,
        pairing_h,
        p_residual,
        eigenvalues_hg: ev_g,
        eigenvalues_h: ev_h,
    })
}

/// Spectral agreement of `H_g` and `H` on `|x| ≤ half_width` across spacings.
pub fn regauge_refinement(
    gauge: &ConstantGauge,
    pot: &MatrixPotential,
    half_width: f64,
    spacings: &[f64],
    k: usize,
) -> Result<RefinementStudy> {
    refinement_study(spacings, k, |h| {
        let grid = Grid1D::covering(half_width, h)?;
        let r = build_and_regauge(gauge, pot, &grid)?;
        Ok((eigenvalues(&r.hg.matrix)?, eigenvalues(&r.h.matrix)?))
    })
}

/// Random potential `x²I + e(x)B + o(x)C` obeying both PT conditions and
/// `V = Vᵀ`: `B` is real Θ-block-diagonal or imaginary off-diagonal, `C`
/// real off-diagonal or imaginary block-diagonal, all symmetric; `e` is
/// even, `o` odd.
pub fn sample_potential(sig: ThetaSignature, rng: &mut SampleRng, scale: f64) -> MatrixPotential {
    let (p, m) = (sig.p, sig.m());
    let sym = symmetric_block(rng, m, scale);
    let sym2 = symmetric_block(rng, m, scale);
    let same_block = |i: usize, j: usize| (i < p) == (j < p);
    let b = ComplexMatrix::from_fn(m, |i, j| {
        if same_block(i, j) {
            C64::new(sym[i][j], 0.0)
        } else {
            C64::new(0.0, sym[i][j])
        }
    });
    let c = ComplexMatrix::from_fn(m, |i, j| {
        if same_block(i, j) {
            C64::new(0.0, sym2[i][j])
        } else {
            C64::new(sym2[i][j], 0.0)
        }
    });
    let shift = uniform(rng, 0.0, 1.0);
    MatrixPotential::new(m, move |x| {
        let even = 1.0 / (1.0 + shift + x * x);
        let odd = x / (1.0 + x * x);
        &(&ComplexMatrix::identity(m).scale_real(x * x) + &b.scale_real(even)) + &c.scale_real(odd)
    })
}

/// Random constant gauge `A = i·a`, `a ∈ g_Θ`.
pub fn sample_gauge(sig: ThetaSignature, rng: &mut SampleRng, scale: f64) -> ConstantGauge {
    let u = antisymmetric_block(rng, sig.p, scale);
    let v = crate::sampling::real_block(rng, sig.p, sig.q, scale);
    let w = antisymmetric_block(rng, sig.q, scale);
    let a = crate::cartan::make_element(sig, u, v, w).expect("sampled blocks are valid");
    ConstantGauge::from_element(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{build_scalar_hamiltonian, ScalarPotentials, Stencil};
    use crate::check::all_pass;
    use crate::numerics::pauli;
    use crate::sampling::seeded;

    fn sig11() -> ThetaSignature {
        ThetaSignature::new(1, 1).unwrap()
    }

    #[test]
    fn sigma2_gauge_passes_audit() {
        let g = Grid1D::covering(4.0, 0.1).unwrap();
        let gauge = ConstantGauge::new(pauli(2).scale_real(0.7)).unwrap();
        let checks = symmetry_audit(&gauge, &MatrixPotential::harmonic(2), sig11(), &g, 1e-12).unwrap();
        assert!(all_pass(&checks), "{checks:?}");
    }

    #[test]
    fn sigma1_gauge_fails_antisymmetry() {
        let g = Grid1D::covering(4.0, 0.1).unwrap();
        let gauge = ConstantGauge::new(pauli(1).scale_real(0.7)).unwrap();
        let checks = symmetry_audit(&gauge, &MatrixPotential::harmonic(2), sig11(), &g, 1e-12).unwrap();
        assert!(!checks.iter().find(|c| c.name == "A = -A^T").unwrap().pass);
    }

    #[test]
    fn sampled_pairs_pass_audit() {
        let mut rng = seeded(9);
        let g = Grid1D::covering(3.0, 0.1).unwrap();
        for (p, q) in [(2, 1), (1, 2), (2, 2)] {
            let sig = ThetaSignature::new(p, q).unwrap();
            let gauge = sample_gauge(sig, &mut rng, 1.0);
            let pot = sample_potential(sig, &mut rng, 1.0);
            assert!(all_pass(&symmetry_audit(&gauge, &pot, sig, &g, 1e-12).unwrap()));
        }
    }

    #[test]
    fn zero_gauge_regauges_to_itself() {
        let g = Grid1D::new(10, 0.2).unwrap();
        let gauge = ConstantGauge::new(ComplexMatrix::zeros(2)).unwrap();
        let r = build_and_regauge(&gauge, &MatrixPotential::harmonic(2), &g).unwrap();
        assert!(r.h.matrix.dist(&r.hg.matrix) < 1e-14);
    }

    #[test]
    fn scalar_reduction_matches_abelian_builder() {
        let g = Grid1D::new(15, 0.1).unwrap();
        let alpha = 0.8;
        let gauge = ConstantGauge::new(ComplexMatrix::from_diag(&[C64::new(alpha, 0.0)])).unwrap();
        let pot = MatrixPotential::new(1, |x| ComplexMatrix::from_diag(&[C64::new(x * x, 0.0)]));
        let hm = build_gauged(&gauge, &pot, &g).unwrap();
        let pots = ScalarPotentials::new(move |_| C64::new(alpha, 0.0), |x| C64::new(x * x, 0.0));
        let hs = build_scalar_hamiltonian(&pots, &g, Stencil::Expanded).unwrap();
        assert!(hm.matrix.dist(&hs.matrix) < 1e-12);
    }

    #[test]
    fn audited_operator_is_big_p_hermitian() {
        let mut rng = seeded(10);
        let sig = ThetaSignature::new(2, 1).unwrap();
        let g = Grid1D::covering(4.0, 0.1).unwrap();
        let gauge = sample_gauge(sig, &mut rng, 0.5);
        let pot = sample_potential(sig, &mut rng, 0.5);
        let hg = build_gauged(&gauge, &pot, &g).unwrap();
        let bp = big_parity(&g, sig).unwrap();
        let r = weak_form_residual(&(&bp * &hg.matrix), &(&hg.matrix.adjoint() * &bp), hg.interior(5));
        assert!(r < 1e-13);
    }

    #[test]
    fn regauged_matches_conjugation_away_from_boundary() {
        let g = Grid1D::covering(6.0, 0.05).unwrap();
        let gauge = ConstantGauge::new(pauli(2).scale_real(0.5)).unwrap();
        let r = build_and_regauge(&gauge, &MatrixPotential::harmonic(2), &g).unwrap();
        let res = weak_form_residual(&r.h.matrix, &r.h_conj.matrix, r.h.interior(5));
        assert!(res < 1e-2, "{res}");
    }

    #[test]
    fn broken_potential_is_not_all_real() {
        let g = Grid1D::covering(6.0, 0.1).unwrap();
        let gauge = ConstantGauge::new(pauli(2).scale_real(0.5)).unwrap();
        let pot = MatrixPotential::harmonic(2).plus(|_| ComplexMatrix::identity(2).scale(C64::new(0.0, 0.5)));
        let r = build_and_regauge(&gauge, &pot, &g).unwrap();
        let cmp = spectral_compare(&r.hg, &r.h, sig11(), 6).unwrap();
        assert!(cmp.pairing_hg.is_unpaired());
    }
}
