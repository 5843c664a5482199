//! Matrix exponential by scaling and squaring with a degree-13 Padé approximant.

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound below which the unscaled [13/13] approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371920351148152;

/// Largest 1-norm accepted; `e^700` is the edge of f64 range.
const MAX_NORM: f64 = 700.0;

/// `e^M` for a square complex matrix.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.check_finite()?;
    let n = m.dim();
    let norm = m.norm_one();
    if norm > MAX_NORM {
        return Err(Error::ExpOverflow { norm });
    }
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = m.scale_real(0.5f64.powi(s));

    let id = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let u_tail = &(&(&a6.scale(b(7)) + &a4.scale(b(5))) + &a2.scale(b(3))) + &id.scale(b(1));
    let u = &a * &(&(&a6 * &u_inner) + &u_tail);

    let v_inner = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let v_tail = &(&(&a6.scale(b(6)) + &a4.scale(b(4))) + &a2.scale(b(2))) + &id.scale(b(0));
    let v = &(&a6 * &v_inner) + &v_tail;

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.solve(&p)?;
    for _ in 0..s {
        r = &r * &r;
    }
    r.check_finite().map_err(|_| Error::ExpOverflow { norm })?;
    Ok(r)
}

/// `e^{tM}`.
pub fn expm_scaled(m: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    expm(&m.scale_real(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{pauli, I};
    use crate::numerics::spectrum::hermitian_function;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(expm(&ComplexMatrix::zeros(4)).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn sigma2_boost() {
        let e = expm(&pauli(2)).unwrap();
        let want = &ComplexMatrix::identity(2).scale_real(1f64.cosh()) + &pauli(2).scale_real(1f64.sinh());
        assert!(e.dist(&want) < 1e-14);
    }

    #[test]
    fn matches_spectral_exponential_for_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3, 8, 20] {
            let g = ComplexMatrix::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let h = (&g + &g.adjoint()).scale_real(1.5);
            let e = expm(&h).unwrap();
            let oracle = hermitian_function(&h, |l| C64::new(l.exp(), 0.0)).unwrap();
            assert!(e.dist(&oracle) / oracle.norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn inverse_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = ComplexMatrix::from_fn(6, |_, _| C64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5)));
        let prod = &expm(&m).unwrap() * &expm(&-&m).unwrap();
        assert!(prod.dist(&ComplexMatrix::identity(6)) < 1e-10);
    }

    #[test]
    fn unitary_for_antihermitian() {
        let h = pauli(1).scale_real(3.0);
        let u = expm(&h.scale(I)).unwrap();
        let want = &ComplexMatrix::identity(2).scale_real(3f64.cos()) + &pauli(1).scale(I * 3f64.sin());
        assert!(u.dist(&want) < 1e-13);
    }

    #[test]
    fn overflow_is_reported() {
        let m = ComplexMatrix::identity(2).scale_real(1e4);
        assert!(matches!(expm(&m), Err(Error::ExpOverflow { .. })));
    }
}
