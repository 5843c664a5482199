//! Eigenvalue routines: general complex eig with residual diagnostics,
//! Hermitian spectral functions, PT pairing classification and spectral-set
//! matching.

use faer::Side;
use num_complex::Complex64 as C64;

use super::matrix::{vec_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Eigenvalues in (re, im) order plus optional column eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Option<ComplexMatrix>,
    /// `max_k ‖M v_k − λ_k v_k‖ / (‖M‖_F ‖v_k‖)`; zero when vectors are absent.
    pub residual_norm: f64,
}

fn cmp_complex(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorts eigenvalues by real part, then imaginary part.
pub fn sort_eigenvalues(values: &mut [C64]) {
    values.sort_by(cmp_complex);
}

/// Eigen-decomposition of a general complex matrix.
///
/// Fails on non-finite input and when the underlying QR iteration does not
/// converge; the error carries the dimension and Frobenius norm.
pub fn eig(m: &ComplexMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    m.check_finite()?;
    let n = m.dim();
    let norm = m.norm();
    if n == 0 {
        return Ok(SpectrumResult { eigenvalues: vec![], eigenvectors: None, residual_norm: 0.0 });
    }
    if !want_vectors {
        let mut ev = m
            .as_faer()
            .eigenvalues()
            .map_err(|_| Error::NoConvergence { dim: n, norm })?;
        sort_eigenvalues(&mut ev);
        return Ok(SpectrumResult { eigenvalues: ev, eigenvectors: None, residual_norm: 0.0 });
    }
    let dec = m.as_faer().eigen().map_err(|_| Error::NoConvergence { dim: n, norm })?;
    let s = dec.S().column_vector();
    let u = dec.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_complex(&s[a], &s[b]));
    let eigenvalues: Vec<C64> = order.iter().map(|&k| s[k]).collect();
    let vecs = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    let scale = if norm > 0.0 { norm } else { 1.0 };
    let mut worst: f64 = 0.0;
    for (j, &lam) in eigenvalues.iter().enumerate() {
        let v = vecs.column(j);
        let mv = m.mul_vec(&v);
        let r: Vec<C64> = mv.iter().zip(&v).map(|(a, b)| a - lam * b).collect();
        let vn = vec_norm(&v).max(f64::MIN_POSITIVE);
        worst = worst.max(vec_norm(&r) / (scale * vn));
    }
    if !worst.is_finite() {
        return Err(Error::NoConvergence { dim: n, norm });
    }
    Ok(SpectrumResult { eigenvalues, eigenvectors: Some(vecs), residual_norm: worst })
}

/// Eigenvalues only, sorted.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    Ok(eig(m, false)?.eigenvalues)
}

/// Eigen-decomposition of a Hermitian matrix (lower triangle is read).
/// Eigenvalues ascend.
pub fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.check_finite()?;
    let n = m.dim();
    let dec = m
        .as_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence { dim: n, norm: m.norm() })?;
    let s = dec.S().column_vector();
    let vals: Vec<f64> = (0..n).map(|k| s[k].re).collect();
    let u = dec.U();
    Ok((vals, ComplexMatrix::from_fn(n, |i, j| u[(i, j)])))
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let (vals, vecs) = eigh(m)?;
    let fv: Vec<C64> = vals.iter().map(|&l| f(l)).collect();
    Ok(&vecs.mul_diag_right(&fv) * &vecs.adjoint())
}

/// Principal square root of a Hermitian positive definite matrix.
pub fn sqrt_hpd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, _) = eigh(m)?;
    if let Some(&low) = vals.first() {
        if low <= 0.0 {
            return Err(Error::Singular(format!("matrix not positive definite (lowest eigenvalue {low:e})")));
        }
    }
    hermitian_function(m, |l| C64::new(l.sqrt(), 0.0))
}

/// Hermitian logarithm of a Hermitian positive definite matrix.
pub fn log_hpd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, _) = eigh(m)?;
    if let Some(&low) = vals.first() {
        if low <= 0.0 {
            return Err(Error::Singular(format!("matrix not positive definite (lowest eigenvalue {low:e})")));
        }
    }
    hermitian_function(m, |l| C64::new(l.ln(), 0.0))
}

/// Outcome of the conjugate-pairing test.
#[derive(Clone, Debug, PartialEq)]
pub enum PairingClass {
    AllReal,
    /// Index pairs `(i, j)` with `λ_i ≈ conj(λ_j)`, `Im λ_i > 0`.
    ConjugatePaired(Vec<(usize, usize)>),
    /// Indices of non-real eigenvalues with no conjugate partner.
    Unpaired(Vec<usize>),
}

impl PairingClass {
    pub fn label(&self) -> &'static str {
        match self {
            PairingClass::AllReal => "all_real",
            PairingClass::ConjugatePaired(_) => "conjugate_paired",
            PairingClass::Unpaired(_) => "unpaired",
        }
    }

    pub fn is_unpaired(&self) -> bool {
        matches!(self, PairingClass::Unpaired(_))
    }
}

/// Classifies a spectrum as real, conjugate paired, or violating.
///
/// Eigenvalues with `|Im λ| ≤ tol` are real. Each remaining eigenvalue with
/// positive imaginary part is matched to the nearest unused partner within
/// `tol` of its conjugate.
pub fn pairing_check(values: &[C64], tol: f64) -> PairingClass {
    let complex: Vec<usize> = (0..values.len()).filter(|&k| values[k].im.abs() > tol).collect();
    if complex.is_empty() {
        return PairingClass::AllReal;
    }
    let mut used = vec![false; values.len()];
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    for &i in &complex {
        if used[i] || values[i].im < 0.0 {
            continue;
        }
        let target = values[i].conj();
        let best = complex
            .iter()
            .copied()
            .filter(|&j| !used[j] && j != i && values[j].im < 0.0)
            .map(|j| (j, (values[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) if d <= tol => {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
            _ => {
                used[i] = true;
                unpaired.push(i);
            }
        }
    }
    for &j in &complex {
        if !used[j] {
            unpaired.push(j);
        }
    }
    if unpaired.is_empty() {
        PairingClass::ConjugatePaired(pairs)
    } else {
        unpaired.sort_unstable();
        PairingClass::Unpaired(unpaired)
    }
}

/// Greedy nearest-neighbour matching of two spectra.
///
/// Both lists are sorted; each `a[i]` in order takes the closest unused
/// element of `b`. Returns `(i, j, |a_i − b_j|)` for `min(len)` pairs.
pub fn match_spectra(a: &[C64], b: &[C64]) -> Vec<(usize, usize, f64)> {
    let mut used = vec![false; b.len()];
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    for (i, &x) in a.iter().enumerate() {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (b[j] - x).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        if let Some((j, d)) = best {
            used[j] = true;
            out.push((i, j, d));
        }
    }
    out
}

/// One entry of a spectral comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedPair {
    pub index: usize,
    pub lambda_a: C64,
    pub lambda_b: C64,
    pub dist: f64,
    /// `dist / (1 + |lambda_a|)`.
    pub scaled: f64,
}

/// Matches the lowest `k` eigenvalues of `a` against all of `b`.
pub fn compare_lowest(a: &[C64], b: &[C64], k: usize) -> Vec<MatchedPair> {
    let la = lowest(a, k);
    let mut sb = b.to_vec();
    sort_eigenvalues(&mut sb);
    match_spectra(&la, &sb)
        .into_iter()
        .map(|(i, j, d)| MatchedPair {
            index: i,
            lambda_a: la[i],
            lambda_b: sb[j],
            dist: d,
            scaled: d / (1.0 + la[i].norm()),
        })
        .collect()
}

/// Smallest observed order `log(e_i/e_{i+1}) / log(h_i/h_{i+1})` over
/// consecutive refinements.
pub fn observed_order(spacings: &[f64], errors: &[f64]) -> f64 {
    spacings
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .fold(f64::INFINITY, f64::min)
}

/// Spectral mismatch at one grid spacing.
#[derive(Clone, Debug)]
pub struct RefinementLevel {
    pub h: f64,
    pub max_scaled: f64,
    pub pairs: Vec<MatchedPair>,
}

#[derive(Clone, Debug)]
pub struct RefinementStudy {
    pub levels: Vec<RefinementLevel>,
    /// Smallest observed order between consecutive levels.
    pub order: f64,
}

/// Runs `spectra(h)` for each spacing, matching the lowest `k` eigenvalues of
/// the first spectrum against the second.
pub fn refinement_study(
    spacings: &[f64],
    k: usize,
    spectra: impl Fn(f64) -> Result<(Vec<C64>, Vec<C64>)>,
) -> Result<RefinementStudy> {
    let mut levels = Vec::with_capacity(spacings.len());
    for &h in spacings {
        let (a, b) = spectra(h)?;
        let pairs = compare_lowest(&a, &b, k);
        let max_scaled = pairs.iter().map(|p| p.scaled).fold(0.0, f64::max);
        levels.push(RefinementLevel { h, max_scaled, pairs });
    }
    let errs: Vec<f64> = levels.iter().map(|l| l.max_scaled).collect();
    let order = observed_order(spacings, &errs);
    Ok(RefinementStudy { levels, order })
}

/// The `k` eigenvalues of smallest real part (ties broken by imaginary part).
pub fn lowest(values: &[C64], k: usize) -> Vec<C64> {
    let mut v = values.to_vec();
    sort_eigenvalues(&mut v);
    v.truncate(k);
    v
}

/// Largest imaginary part magnitude in a spectrum.
pub fn max_imag(values: &[C64]) -> f64 {
    values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// True when the matrix has no off-diagonal entries, so the spectrum is the diagonal.
pub fn diagonal_spectrum(m: &ComplexMatrix) -> Option<Vec<C64>> {
    if m.is_diagonal() {
        let mut d = m.diagonal();
        sort_eigenvalues(&mut d);
        Some(d)
    } else {
        None
    }
}
