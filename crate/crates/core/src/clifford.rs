//! Clifford relations for anticommuting involutions and the rotated parity
//! `𝒫_φ = 𝒫 e^{iφℛ}`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::matrix::rank_of_vectors;
use crate::numerics::{expm, ComplexMatrix, GridOperator};

/// Generators `e_1 … e_{m+n}` with `e_i² = +I` for the first `m_plus`,
/// `−I` for the remaining `m_minus`.
#[derive(Clone, Debug)]
pub struct CliffordGenerators {
    pub m_plus: usize,
    pub m_minus: usize,
    pub generators: Vec<ComplexMatrix>,
}

impl CliffordGenerators {
    pub fn new(m_plus: usize, m_minus: usize, generators: Vec<ComplexMatrix>) -> Result<Self> {
        if generators.len() != m_plus + m_minus {
            return Err(Error::DimensionMismatch { expected: m_plus + m_minus, found: generators.len() });
        }
        if let Some(first) = generators.first() {
            for g in &generators[1..] {
                if g.dim() != first.dim() {
                    return Err(Error::DimensionMismatch { expected: first.dim(), found: g.dim() });
                }
            }
        }
        Ok(CliffordGenerators { m_plus, m_minus, generators })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordReport {
    pub max_residual: f64,
    pub pass: bool,
    /// Rank of the vectorized products over all generator subsets
    /// (`2^n` for a faithful-enough set; 4 for two generators).
    pub span_dim: usize,
    pub expected_span: usize,
}

/// Largest generator count for which the subset-product span is computed.
const MAX_SPAN_GENERATORS: usize = 6;

/// Checks `e_i e_k + e_k e_i = 0` (i ≠ k) and `e_i² = ±I` by max entry
/// residual, and computes the span dimension of all ordered subset products.
pub fn verify_clifford_relations(gens: &CliffordGenerators, tol: f64) -> Result<CliffordReport> {
    let g = &gens.generators;
    let dim = g.first().map(|m| m.dim()).unwrap_or(0);
    for e in g {
        if e.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: e.dim() });
        }
    }
    let id = ComplexMatrix::identity(dim);
    let mut worst: f64 = 0.0;
    for (i, ei) in g.iter().enumerate() {
        let sq = if i < gens.m_plus { id.clone() } else { -&id };
        worst = worst.max((&(ei * ei) - &sq).norm_max());
        for ek in &g[i + 1..] {
            worst = worst.max(ei.anticommutator(ek).norm_max());
        }
    }
    let n = g.len().min(MAX_SPAN_GENERATORS);
    let mut products = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        let mut p = id.clone();
        for (k, e) in g.iter().take(n).enumerate() {
            if mask & (1 << k) != 0 {
                p = &p * e;
            }
        }
        products.push(p.entries());
    }
    let span_dim = rank_of_vectors(&products, 1e-12);
    Ok(CliffordReport { max_residual: worst, pass: worst <= tol, span_dim, expected_span: 1 << n })
}

/// `𝒫_φ` with the generators it was built from.
#[derive(Clone, Debug)]
pub struct RotatedInvolution {
    pub phi: f64,
    pub base_parity: GridOperator,
    pub base_sign: GridOperator,
    /// `𝒫·e^{iφℛ}`.
    pub matrix: ComplexMatrix,
    /// `‖𝒫e^{iφℛ} − e^{−iφℛ/2}𝒫e^{iφℛ/2}‖_max`.
    pub route_difference: f64,
}

/// Tolerance on the anticommutation and involution preconditions.
const INPUT_TOL: f64 = 1e-12;

/// Agreement required between the two constructions of `𝒫_φ`.
pub const ROUTE_TOL: f64 = 1e-12;

/// Builds `𝒫_φ` two ways and keeps `𝒫·e^{iφℛ}`.
///
/// Rejects inputs that are not anticommuting involutions.
pub fn rotated_involution(parity: &GridOperator, sign_op: &GridOperator, phi: f64) -> Result<RotatedInvolution> {
    let p = &parity.matrix;
    let r = &sign_op.matrix;
    if p.dim() != r.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: r.dim() });
    }
    let id = ComplexMatrix::identity(p.dim());
    for m in [p, r] {
        let res = (&(m * m) - &id).norm_max();
        if res > INPUT_TOL {
            return Err(Error::NotInvolution(res));
        }
    }
    let anti = p.anticommutator(r).norm_max();
    if anti > INPUT_TOL {
        return Err(Error::NotAnticommuting(anti));
    }
    let i_r = r.scale(C64::new(0.0, phi));
    let direct = p * &expm(&i_r)?;
    let half = expm(&i_r.scale_real(0.5))?;
    let half_inv = expm(&i_r.scale_real(-0.5))?;
    let symmetric = &(&half_inv * p) * &half;
    let route_difference = direct.dist(&symmetric).max((&direct - &symmetric).norm_max());
    if route_difference > ROUTE_TOL {
        return Err(Error::Singular(format!(
            "rotated involution constructions disagree by {route_difference:e}"
        )));
    }
    Ok(RotatedInvolution {
        phi,
        base_parity: parity.clone(),
        base_sign: sign_op.clone(),
        matrix: direct,
        route_difference,
    })
}

impl RotatedInvolution {
    /// `max(‖𝒫_φ² − I‖, ‖𝒫_φ† − 𝒫_φ‖)`, max entry norm.
    pub fn involution_residual(&self) -> f64 {
        let n = self.matrix.dim();
        let sq = (&(&self.matrix * &self.matrix) - &ComplexMatrix::identity(n)).norm_max();
        let herm = (&self.matrix.adjoint() - &self.matrix).norm_max();
        sq.max(herm)
    }

    /// `‖𝒫e^{iφℛ} − e^{−iφℛ}𝒫‖_max`.
    pub fn intertwining_residual(&self) -> Result<f64> {
        let r = self.base_sign.matrix.scale(C64::new(0.0, -self.phi));
        let rhs = &expm(&r)? * &self.base_parity.matrix;
        Ok((&self.matrix - &rhs).norm_max())
    }

    /// Applies `𝒫_φ` to a node-major vector.
    pub fn apply(&self, f: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{grid_operator, pauli, Grid1D, OperatorKind};

    fn pr(n: usize) -> (GridOperator, GridOperator) {
        let g = Grid1D::new(n, 0.2).unwrap();
        (
            grid_operator(g, OperatorKind::Parity, 1).unwrap(),
            grid_operator(g, OperatorKind::Sign, 1).unwrap(),
        )
    }

    #[test]
    fn parity_and_sign_generate_r20() {
        let (p, r) = pr(6);
        let gens = CliffordGenerators::new(2, 0, vec![p.matrix, r.matrix]).unwrap();
        let rep = verify_clifford_relations(&gens, 0.0).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert!(rep.pass);
        assert_eq!(rep.span_dim, 4);
    }

    #[test]
    fn pauli_pairs() {
        let gens = CliffordGenerators::new(2, 0, vec![pauli(1), pauli(2)]).unwrap();
        assert!(verify_clifford_relations(&gens, 1e-12).unwrap().pass);
        let gens = CliffordGenerators::new(2, 0, vec![pauli(1), pauli(1)]).unwrap();
        let rep = verify_clifford_relations(&gens, 1e-12).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.max_residual, 2.0);
        // iσ₁, iσ₂ square to −I.
        let i = C64::new(0.0, 1.0);
        let gens = CliffordGenerators::new(0, 2, vec![pauli(1).scale(i), pauli(2).scale(i)]).unwrap();
        assert!(verify_clifford_relations(&gens, 1e-12).unwrap().pass);
    }

    #[test]
    fn mismatched_dims_rejected() {
        let gens = CliffordGenerators { m_plus: 2, m_minus: 0, generators: vec![pauli(1), ComplexMatrix::identity(3)] };
        assert!(verify_clifford_relations(&gens, 1e-12).is_err());
    }

    #[test]
    fn phi_zero_is_parity() {
        let (p, r) = pr(5);
        let rot = rotated_involution(&p, &r, 0.0).unwrap();
        assert_eq!(rot.matrix, p.matrix);
    }

    #[test]
    fn rotated_is_hermitian_involution_and_periodic() {
        let (p, r) = pr(5);
        for phi in [0.3, -1.2, 2.9] {
            let rot = rotated_involution(&p, &r, phi).unwrap();
            assert!(rot.involution_residual() < 1e-12);
            assert!(rot.intertwining_residual().unwrap() < 1e-12);
            let shifted = rotated_involution(&p, &r, phi + std::f64::consts::TAU).unwrap();
            assert!((&shifted.matrix - &rot.matrix).norm_max() < 1e-12);
        }
    }

    #[test]
    fn traces_near_origin() {
        let g = Grid1D::new(5, 0.2).unwrap();
        let (p, r) = pr(5);
        let phi = 0.7;
        let rot = rotated_involution(&p, &r, phi).unwrap();
        let f: Vec<C64> = g.nodes().iter().map(|&x| C64::new(1.0 + x, x * x)).collect();
        let pf = rot.apply(&f);
        let (kp, km) = (g.half_count(), g.half_count() - 1);
        let e = C64::from_polar(1.0, -phi);
        assert!((pf[kp] - e * f[km]).norm() < 1e-14);
        assert!((pf[km] - e.conj() * f[kp]).norm() < 1e-14);
    }

    #[test]
    fn commuting_inputs_rejected() {
        let (p, _) = pr(4);
        assert!(matches!(rotated_involution(&p, &p, 0.5), Err(Error::NotAnticommuting(_))));
    }
}
