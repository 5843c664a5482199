//! Symmetric staggered 1D grid and finite-difference operators on it.
//!
//! Nodes are `x_j = (j + 1/2) h` for `j = −N … N−1`, stored at index
//! `k = j + N`. Zero is never a node, so `sign(x)` is defined everywhere and
//! reflection is the index map `k ↦ 2N − 1 − k`. Operators with block
//! dimension `m` act on node-major vectors: entry `(k, a)` sits at `k·m + a`.

use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    half_count: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(half_count: usize, h: f64) -> Result<Self> {
        if half_count == 0 {
            return Err(Error::InvalidArgument("grid half_count must be positive".into()));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidArgument(format!("grid spacing must be positive and finite, got {h}")));
        }
        Ok(Grid1D { half_count, h })
    }

    /// Grid with spacing `h` whose outermost nodes lie within `|x| ≤ half_width`.
    pub fn covering(half_width: f64, h: f64) -> Result<Self> {
        let n = ((half_width / h) - 0.5).floor().max(0.0) as usize + 1;
        Self::new(n, h)
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        2 * self.half_count
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of the node at storage index `k`.
    pub fn x(&self, k: usize) -> f64 {
        (k as f64 - self.half_count as f64 + 0.5) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.x(k)).collect()
    }

    /// Storage index of the mirror node `−x_k`.
    pub fn mirror(&self, k: usize) -> usize {
        self.len() - 1 - k
    }

    /// Outermost node position.
    pub fn half_width(&self) -> f64 {
        self.x(self.len() - 1)
    }
}

/// Which operator to assemble.
#[derive(Clone, Copy)]
pub enum OperatorKind<'a> {
    /// `p = −i d/dx`, central differences.
    Momentum,
    /// `(𝒫f)(x) = f(−x)`.
    Parity,
    /// `(ℛf)(x) = sign(x) f(x)`.
    Sign,
    /// `(xf)(x) = x f(x)`.
    Position,
    /// `(Ff)(x) = F(x) f(x)` for a scalar function `F`.
    Multiply(&'a dyn Fn(f64) -> C64),
    /// `f''`, three-point stencil.
    SecondDerivative,
}

/// A grid-indexed matrix with its block dimension.
#[derive(Clone, Debug)]
pub struct GridOperator {
    pub grid: Grid1D,
    pub block_dim: usize,
    pub matrix: ComplexMatrix,
}

impl GridOperator {
    pub fn new(grid: Grid1D, block_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let want = grid.len() * block_dim;
        if matrix.dim() != want {
            return Err(Error::DimensionMismatch { expected: want, found: matrix.dim() });
        }
        Ok(GridOperator { grid, block_dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Block-diagonal operator with `f(x_k)` (an `m×m` matrix) on node `k`.
    pub fn block_multiply(grid: Grid1D, m: usize, f: impl Fn(f64) -> ComplexMatrix) -> Result<Self> {
        let mut mat = ComplexMatrix::zeros(grid.len() * m);
        for k in 0..grid.len() {
            let b = f(grid.x(k));
            if b.dim() != m {
                return Err(Error::DimensionMismatch { expected: m, found: b.dim() });
            }
            b.check_finite()?;
            mat.set_block(k, k, &b);
        }
        Ok(GridOperator { grid, block_dim: m, matrix: mat })
    }

    /// Diagonal operator from per-node scalars, tensored with `I_m`.
    pub fn diagonal(grid: Grid1D, m: usize, values: &[C64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: values.len() });
        }
        let diag: Vec<C64> = values.iter().flat_map(|&v| std::iter::repeat_n(v, m)).collect();
        Ok(GridOperator { grid, block_dim: m, matrix: ComplexMatrix::from_diag(&diag) })
    }

    /// Index range of the unknowns that lie at least `buffer` nodes away
    /// from either boundary.
    pub fn interior(&self, buffer: usize) -> (usize, usize) {
        let n = self.grid.len();
        let b = buffer.min(n / 2);
        (b * self.block_dim, (n - b) * self.block_dim)
    }
}

/// Assembles `kind ⊗ I_m` on `grid`.
pub fn grid_operator(grid: Grid1D, kind: OperatorKind<'_>, m: usize) -> Result<GridOperator> {
    if m == 0 {
        return Err(Error::InvalidArgument("block dimension must be positive".into()));
    }
    let n = grid.len();
    let h = grid.spacing();
    let mut mat = ComplexMatrix::zeros(n * m);
    match kind {
        OperatorKind::Momentum => {
            let c = C64::new(0.0, -1.0 / (2.0 * h));
            for k in 0..n {
                for a in 0..m {
                    if k + 1 < n {
                        mat[(k * m + a, (k + 1) * m + a)] = c;
                    }
                    if k > 0 {
                        mat[(k * m + a, (k - 1) * m + a)] = -c;
                    }
                }
            }
        }
        OperatorKind::SecondDerivative => {
            let off = C64::new(1.0 / (h * h), 0.0);
            for k in 0..n {
                for a in 0..m {
                    mat[(k * m + a, k * m + a)] = off * -2.0;
                    if k + 1 < n {
                        mat[(k * m + a, (k + 1) * m + a)] = off;
                    }
                    if k > 0 {
                        mat[(k * m + a, (k - 1) * m + a)] = off;
                    }
                }
            }
        }
        OperatorKind::Parity => {
            for k in 0..n {
                for a in 0..m {
                    mat[(k * m + a, grid.mirror(k) * m + a)] = ONE;
                }
            }
        }
        OperatorKind::Sign => {
            for k in 0..n {
                let s = if k < grid.half_count() { -ONE } else { ONE };
                for a in 0..m {
                    mat[(k * m + a, k * m + a)] = s;
                }
            }
        }
        OperatorKind::Position => {
            for k in 0..n {
                for a in 0..m {
                    mat[(k * m + a, k * m + a)] = C64::new(grid.x(k), 0.0);
                }
            }
        }
        OperatorKind::Multiply(f) => {
            for k in 0..n {
                let v = f(grid.x(k));
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite { row: k, col: k });
                }
                for a in 0..m {
                    mat[(k * m + a, k * m + a)] = v;
                }
            }
        }
    }
    Ok(GridOperator { grid, block_dim: m, matrix: mat })
}

/// Discrete `−d²/dx²` (the kinetic term `p²`) tensored with `I_m`.
pub fn kinetic(grid: Grid1D, m: usize) -> Result<GridOperator> {
    let mut op = grid_operator(grid, OperatorKind::SecondDerivative, m)?;
    op.matrix = -op.matrix;
    Ok(op)
}

/// Weak-form residual of `lhs = rhs` on test vectors supported in `range`:
/// `‖(lhs − rhs)_int‖_F / (‖lhs_int‖_F + ‖rhs_int‖_F)`.
pub fn weak_form_residual(lhs: &ComplexMatrix, rhs: &ComplexMatrix, range: (usize, usize)) -> f64 {
    let (a, b) = range;
    let l = lhs.principal_submatrix(a, b);
    let r = rhs.principal_submatrix(a, b);
    let den = l.norm() + r.norm();
    if den == 0.0 {
        return 0.0;
    }
    l.dist(&r) / den
}

/// Indefinite form `Σ_k w_k (Jg)_k conj(f_k) h`, the quadrature of `(f, W J g)`.
///
/// `weight` must be diagonal with real positive entries.
pub fn indefinite_inner(f: &[C64], g: &[C64], j: &GridOperator, weight: &GridOperator) -> Result<C64> {
    let n = j.dim();
    for (len, what) in [(f.len(), n), (g.len(), n), (weight.dim(), n)] {
        if len != what {
            return Err(Error::DimensionMismatch { expected: what, found: len });
        }
    }
    let w = &weight.matrix;
    for r in 0..n {
        for c in 0..n {
            let z = w[(r, c)];
            if r == c {
                if z.im != 0.0 || !(z.re > 0.0) {
                    return Err(Error::InvalidWeight(format!("diagonal entry {r} is {z}, not real positive")));
                }
            } else if z != ZERO {
                return Err(Error::InvalidWeight(format!("off-diagonal entry ({r},{c}) is nonzero")));
            }
        }
    }
    let jg = j.matrix.mul_vec(g);
    let sum: C64 = (0..n).map(|k| w[(k, k)] * jg[k] * f[k].conj()).sum();
    Ok(sum * j.grid.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::new(7, 0.3).unwrap()
    }

    #[test]
    fn nodes_symmetric_and_nonzero() {
        let g = grid();
        assert_eq!(g.len(), 14);
        for k in 0..g.len() {
            assert_eq!(g.x(k), -g.x(g.mirror(k)));
            assert!(g.x(k) != 0.0);
        }
    }

    #[test]
    fn covering_respects_half_width() {
        let g = Grid1D::covering(8.0, 0.05).unwrap();
        assert!(g.half_width() <= 8.0 && g.half_width() + 0.05 > 8.0);
    }

    #[test]
    fn parity_identities_exact() {
        let g = grid();
        for m in [1, 2] {
            let p = grid_operator(g, OperatorKind::Parity, m).unwrap().matrix;
            let x = grid_operator(g, OperatorKind::Position, m).unwrap().matrix;
            let mom = grid_operator(g, OperatorKind::Momentum, m).unwrap().matrix;
            assert_eq!(&p * &p, ComplexMatrix::identity(g.len() * m));
            assert_eq!(&(&p * &x) * &p, -&x);
            assert_eq!(p.anticommutator(&mom), ComplexMatrix::zeros(g.len() * m));
        }
    }

    #[test]
    fn invalid_grid_rejected() {
        assert!(Grid1D::new(0, 0.1).is_err());
        assert!(Grid1D::new(3, -0.1).is_err());
    }

    #[test]
    fn inner_product_identity_weight_is_l2() {
        let g = grid();
        let id = grid_operator(g, OperatorKind::Multiply(&|_| ONE), 1).unwrap();
        let f: Vec<C64> = g.nodes().iter().map(|&x| C64::new(x, x * x)).collect();
        let v = indefinite_inner(&f, &f, &id, &id).unwrap();
        let l2: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>() * g.spacing();
        assert!((v.re - l2).abs() < 1e-13 && v.im == 0.0);
    }

    #[test]
    fn parity_form_matches_direct_sum() {
        let g = grid();
        let p = grid_operator(g, OperatorKind::Parity, 1).unwrap();
        let id = grid_operator(g, OperatorKind::Multiply(&|_| ONE), 1).unwrap();
        let xs = g.nodes();
        let f: Vec<C64> = xs.iter().map(|&x| C64::new(x.powi(3), x)).collect();
        let gv: Vec<C64> = xs.iter().map(|&x| C64::new(x * x, 1.0 + x)).collect();
        let direct: C64 = (0..g.len())
            .map(|k| f[k].conj() * gv[g.mirror(k)])
            .sum::<C64>()
            * g.spacing();
        let form = indefinite_inner(&f, &gv, &p, &id).unwrap();
        assert!((form - direct).norm() < 1e-13);
        // f odd, g even: [f, g]_P = -(f, g).
        let ge: Vec<C64> = xs.iter().map(|&x| C64::new(x * x, 1.0)).collect();
        let form = indefinite_inner(&f, &ge, &p, &id).unwrap();
        let l2 = indefinite_inner(&f, &ge, &id, &id).unwrap();
        assert!((form + l2).norm() < 1e-13);
        // Hermitian form: [f, f]_P is real.
        assert!(indefinite_inner(&gv, &gv, &p, &id).unwrap().im.abs() < 1e-13);
    }

    #[test]
    fn bad_weight_rejected() {
        let g = grid();
        let p = grid_operator(g, OperatorKind::Parity, 1).unwrap();
        let w = grid_operator(g, OperatorKind::Position, 1).unwrap();
        let f = vec![ONE; g.len()];
        assert!(matches!(indefinite_inner(&f, &f, &p, &w), Err(Error::InvalidWeight(_))));
    }
}
