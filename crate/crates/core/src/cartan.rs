//! The gauge algebra `g_Θ = {a ∈ so(m,ℂ) : Θa†Θ = a}` for `Θ = I_{p,q}`,
//! its Cartan split `b + c`, the Lie triple system property and the
//! closed-form group exponentials.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::check::Check;
use crate::error::{Error, Result};
use crate::numerics::matrix::rank_of_vectors;
use crate::numerics::spectrum::{eigh, log_hpd, sqrt_hpd};
use crate::numerics::{eigenvalues, expm, ComplexMatrix, I, ONE};
use crate::sampling::{antisymmetric_block, real_block, SampleRng};

/// Real dense block, row-major.
pub type RealBlock = Vec<Vec<f64>>;

/// Membership tolerance for assembled elements.
pub const MEMBERSHIP_TOL: f64 = 1e-13;

/// Singular values below this use the series limit `sin(sx)/s → x`.
pub const SINC_SWITCH: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThetaSignature {
    pub p: usize,
    pub q: usize,
}

impl ThetaSignature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("signature p must be positive".into()));
        }
        Ok(ThetaSignature { p, q })
    }

    pub fn m(&self) -> usize {
        self.p + self.q
    }

    /// `diag(I_p, −I_q)`.
    pub fn theta(&self) -> ComplexMatrix {
        let d: Vec<f64> = (0..self.m()).map(|k| if k < self.p { 1.0 } else { -1.0 }).collect();
        ComplexMatrix::from_real_diag(&d)
    }

    pub fn dim_k(&self) -> usize {
        self.p * self.q
    }

    pub fn dim_p(&self) -> usize {
        self.p * (self.p - 1) / 2 + self.q * self.q.saturating_sub(1) / 2
    }
}

/// `a = [[iu, v], [−vᵀ, iw]]`.
#[derive(Clone, Debug)]
pub struct GaugeAlgebraElement {
    pub sig: ThetaSignature,
    pub u: RealBlock,
    pub v: RealBlock,
    pub w: RealBlock,
    pub matrix: ComplexMatrix,
}

fn check_shape(block: &RealBlock, rows: usize, cols: usize) -> Result<()> {
    if block.len() != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: block.len() });
    }
    for r in block {
        if r.len() != cols {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
    }
    Ok(())
}

fn antisymmetry_residual(block: &RealBlock) -> f64 {
    let n = block.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((block[i][j] + block[j][i]).abs());
        }
    }
    worst
}

/// Assembles an element, rejecting `u` or `w` that are not exactly antisymmetric.
pub fn make_element(sig: ThetaSignature, u: RealBlock, v: RealBlock, w: RealBlock) -> Result<GaugeAlgebraElement> {
    let (p, q) = (sig.p, sig.q);
    check_shape(&u, p, p)?;
    check_shape(&v, p, q)?;
    check_shape(&w, q, q)?;
    for (name, block) in [("u", &u), ("w", &w)] {
        let r = antisymmetry_residual(block);
        if r > 0.0 {
            return Err(Error::NotAntisymmetric { name, residual: r });
        }
    }
    let matrix = ComplexMatrix::from_fn(p + q, |i, j| match (i < p, j < p) {
        (true, true) => C64::new(0.0, u[i][j]),
        (true, false) => C64::new(v[i][j - p], 0.0),
        (false, true) => C64::new(-v[j][i - p], 0.0),
        (false, false) => C64::new(0.0, w[i - p][j - p]),
    });
    Ok(GaugeAlgebraElement { sig, u, v, w, matrix })
}

/// Random element with all free parameters uniform in `[−scale, scale)`.
pub fn random_element(sig: ThetaSignature, rng: &mut SampleRng, scale: f64) -> GaugeAlgebraElement {
    let u = antisymmetric_block(rng, sig.p, scale);
    let v = real_block(rng, sig.p, sig.q, scale);
    let w = antisymmetric_block(rng, sig.q, scale);
    make_element(sig, u, v, w).expect("sampled blocks are valid")
}

/// `−Θa†Θ`.
pub fn kappa(a: &ComplexMatrix, sig: ThetaSignature) -> Result<ComplexMatrix> {
    if a.dim() != sig.m() {
        return Err(Error::DimensionMismatch { expected: sig.m(), found: a.dim() });
    }
    let t = sig.theta();
    Ok(-(&(&t * &a.adjoint()) * &t))
}

/// Distance of `x` from `g_Θ`: `max(‖x + xᵀ‖_F, ‖Θx†Θ − x‖_F)`.
pub fn membership_residual(x: &ComplexMatrix, sig: ThetaSignature) -> f64 {
    let t = sig.theta();
    let anti = (x + &x.transpose()).norm();
    let herm = (&(&(&t * &x.adjoint()) * &t) - x).norm();
    anti.max(herm)
}

impl GaugeAlgebraElement {
    pub fn membership_residual(&self) -> f64 {
        membership_residual(&self.matrix, self.sig)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.norm() == 0.0
    }
}

/// `a = b + c` with `b ∈ 𝔨_Θ` (real, off-diagonal blocks) and
/// `c ∈ 𝔭_Θ` (imaginary, block diagonal).
#[derive(Clone, Debug)]
pub struct CartanComponents {
    pub sig: ThetaSignature,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub u: RealBlock,
    pub v: RealBlock,
    pub w: RealBlock,
}

pub fn cartan_split(a: &GaugeAlgebraElement) -> CartanComponents {
    let sig = a.sig;
    let zu = vec![vec![0.0; sig.p]; sig.p];
    let zv = vec![vec![0.0; sig.q]; sig.p];
    let zw = vec![vec![0.0; sig.q]; sig.q];
    let b = make_element(sig, zu, a.v.clone(), zw).expect("valid").matrix;
    let c = make_element(sig, a.u.clone(), zv, a.w.clone()).expect("valid").matrix;
    CartanComponents { sig, b, c, u: a.u.clone(), v: a.v.clone(), w: a.w.clone() }
}

impl CartanComponents {
    /// Residuals of `b† = −b`, `c† = c`, `ΘbΘ = −b`, `ΘcΘ = c`, `b` real,
    /// `c` imaginary.
    pub fn checks(&self, tol: f64) -> Vec<Check> {
        let t = self.sig.theta();
        let b = &self.b;
        let c = &self.c;
        let imag_max = |m: &ComplexMatrix| m.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let real_max = |m: &ComplexMatrix| m.entries().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        vec![
            Check::at_most("b^dag = -b", (&b.adjoint() + b).norm(), tol),
            Check::at_most("c^dag = c", (&c.adjoint() - c).norm(), tol),
            Check::at_most("Theta b Theta = -b", (&(&(&t * b) * &t) + b).norm(), tol),
            Check::at_most("Theta c Theta = c", (&(&(&t * c) * &t) - c).norm(), tol),
            Check::at_most("b real", imag_max(b), tol),
            Check::at_most("c imaginary", real_max(c), tol),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LtsReport {
    /// `dist([a1,[a2,a3]], g_Θ) / (‖a1‖‖a2‖‖a3‖)`.
    pub closure_residual: f64,
    /// `dist([a1,a2], g_Θ) / (‖a1‖‖a2‖)`.
    pub binary_escape: f64,
}

fn product_scale(ms: &[&ComplexMatrix]) -> f64 {
    let s: f64 = ms.iter().map(|m| m.norm()).product();
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

pub fn lts_check(a1: &GaugeAlgebraElement, a2: &GaugeAlgebraElement, a3: &GaugeAlgebraElement) -> Result<LtsReport> {
    let sig = a1.sig;
    for other in [a2.sig, a3.sig] {
        if other != sig {
            return Err(Error::SignatureMismatch { p1: sig.p, q1: sig.q, p2: other.p, q2: other.q });
        }
    }
    let (x1, x2, x3) = (&a1.matrix, &a2.matrix, &a3.matrix);
    let triple = x1.commutator(&x2.commutator(x3));
    let binary = x1.commutator(x2);
    Ok(LtsReport {
        closure_residual: membership_residual(&triple, sig) / product_scale(&[x1, x2, x3]),
        binary_escape: membership_residual(&binary, sig) / product_scale(&[x1, x2]),
    })
}

/// Membership of `f = −ia` in `so(m,ℂ) ∩ su(p,q)` and of the Wick-rotated
/// split parts in the off-diagonal / block-diagonal pieces of `su(p,q)`.
pub fn wick_check(a: &ComplexMatrix, sig: ThetaSignature, tol: f64) -> Result<Vec<Check>> {
    if a.dim() != sig.m() {
        return Err(Error::DimensionMismatch { expected: sig.m(), found: a.dim() });
    }
    let t = sig.theta();
    let f = a.scale(-I);
    let p = sig.p;
    let m = sig.m();
    let (mut diag_part, mut off_part) = (ComplexMatrix::zeros(m), ComplexMatrix::zeros(m));
    for i in 0..m {
        for j in 0..m {
            if (i < p) == (j < p) {
                diag_part[(i, j)] = a[(i, j)];
            } else {
                off_part[(i, j)] = a[(i, j)];
            }
        }
    }
    // For a ∈ g_Θ the block-diagonal part is c and the off-diagonal part is b;
    // −ib must be Θ-odd (𝔮) and −ic Θ-even (𝔩), both in su(p,q).
    let fb = off_part.scale(-I);
    let fc = diag_part.scale(-I);
    let su = |x: &ComplexMatrix| (&(&(&t * &x.adjoint()) * &t) + x).norm();
    let theta_parity = |x: &ComplexMatrix, s: f64| (&(&(&t * x) * &t) - &x.scale_real(s)).norm();
    let b_real = off_part.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let c_imag = diag_part.entries().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    Ok(vec![
        Check::at_most("f in su(p,q)", su(&f), tol),
        Check::at_most("f antisymmetric", (&f + &f.transpose()).norm(), tol),
        Check::at_most("-ib in su(p,q), Theta-odd", su(&fb).max(theta_parity(&fb, -1.0)).max(b_real), tol),
        Check::at_most("-ic in su(p,q), Theta-even", su(&fc).max(theta_parity(&fc, 1.0)).max(c_imag), tol),
    ])
}

/// Real full SVD `v = L·diag(s)·Rᵀ` with `L` p×p, `R` q×q.
fn real_svd(v: &RealBlock, p: usize, q: usize) -> Result<(Mat<f64>, Vec<f64>, Mat<f64>)> {
    let mat = Mat::<f64>::from_fn(p, q, |i, j| v[i][j]);
    let svd = mat
        .svd()
        .map_err(|_| Error::NoConvergence { dim: p.max(q), norm: mat.norm_l2() })?;
    let s = svd.S().column_vector();
    let vals: Vec<f64> = (0..p.min(q)).map(|k| s[k]).collect();
    Ok((svd.U().to_owned(), vals, svd.V().to_owned()))
}

fn sinc_x(s: f64, x: f64) -> f64 {
    if s < SINC_SWITCH {
        x
    } else {
        (s * x).sin() / s
    }
}

/// `U_𝔨(x) = e^{bx}` from the closed form in the singular values of `v`.
pub fn exp_compact(comp: &CartanComponents, x: f64) -> Result<ComplexMatrix> {
    let (p, q) = (comp.sig.p, comp.sig.q);
    let m = p + q;
    if q == 0 {
        return Ok(ComplexMatrix::identity(m));
    }
    let (l, s, r) = real_svd(&comp.v, p, q)?;
    let sv = |k: usize| s.get(k).copied().unwrap_or(0.0);
    // cos(√(vvᵀ)x) = L diag(cos s_k x) Lᵀ, padded with s = 0.
    let cos_left = |i: usize, j: usize| (0..p).map(|k| l[(i, k)] * (sv(k) * x).cos() * l[(j, k)]).sum::<f64>();
    let cos_right = |i: usize, j: usize| (0..q).map(|k| r[(i, k)] * (sv(k) * x).cos() * r[(j, k)]).sum::<f64>();
    // sin(√(vᵀv)x)/√(vᵀv) = R diag(sinc) Rᵀ.
    let sinc_right: Vec<Vec<f64>> = (0..q)
        .map(|i| (0..q).map(|j| (0..q).map(|k| r[(i, k)] * sinc_x(sv(k), x) * r[(j, k)]).sum()).collect())
        .collect();
    let v = &comp.v;
    let upper = |i: usize, j: usize| (0..q).map(|k| v[i][k] * sinc_right[k][j]).sum::<f64>();
    let lower = |i: usize, j: usize| -(0..q).map(|k| sinc_right[i][k] * v[j][k]).sum::<f64>();
    Ok(ComplexMatrix::from_real_fn(m, |i, j| match (i < p, j < p) {
        (true, true) => cos_left(i, j),
        (true, false) => upper(i, j - p),
        (false, true) => lower(i - p, j),
        (false, false) => cos_right(i - p, j - p),
    }))
}

/// `U_𝔭(x) = e^{cx} = diag(e^{iux}, e^{iwx})`.
pub fn exp_noncompact(comp: &CartanComponents, x: f64) -> Result<ComplexMatrix> {
    let (p, q) = (comp.sig.p, comp.sig.q);
    let block = |b: &RealBlock, n: usize| -> Result<ComplexMatrix> {
        if n == 0 {
            return Ok(ComplexMatrix::zeros(0));
        }
        expm(&ComplexMatrix::from_fn(n, |i, j| C64::new(0.0, b[i][j] * x)))
    };
    let top = block(&comp.u, p)?;
    if q == 0 {
        return Ok(top);
    }
    Ok(ComplexMatrix::block_diag(&[top, block(&comp.w, q)?]))
}

/// Closed forms against `expm`, orthogonality and `det = 1` of `U_𝔨`,
/// Hermiticity and positivity of `U_𝔭`.
pub fn exponential_checks(comp: &CartanComponents, x: f64, tol: f64) -> Result<Vec<Check>> {
    let uk = exp_compact(comp, x)?;
    let up = exp_noncompact(comp, x)?;
    let uk_ref = expm(&comp.b.scale_real(x))?;
    let up_ref = expm(&comp.c.scale_real(x))?;
    let id = ComplexMatrix::identity(comp.sig.m());
    let imag = uk.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let (evals, _) = eigh(&up)?;
    let min_eval = evals.first().copied().unwrap_or(1.0);
    Ok(vec![
        Check::at_most("U_k closed form = expm(bx)", uk.rel_dist(&uk_ref), tol),
        Check::at_most("U_p closed form = expm(cx)", up.rel_dist(&up_ref), tol),
        Check::at_most("U_k real orthogonal", (&(&uk.transpose() * &uk) - &id).norm().max(imag), tol),
        Check::at_most("det U_k = 1", (uk.determinant() - ONE).norm(), tol),
        Check::at_most("U_p Hermitian", up.rel_dist(&up.adjoint()), tol),
        Check::at_least("U_p positive (min eigenvalue)", min_eval, f64::MIN_POSITIVE),
    ])
}

#[derive(Clone, Debug)]
pub struct PolarParts {
    pub u_k: ComplexMatrix,
    pub u_p: ComplexMatrix,
    pub log_p: ComplexMatrix,
    pub checks: Vec<Check>,
    /// Largest off-diagonal-block entry of `log_p`; zero iff `log_p ∈ 𝔭_Θ`
    /// proper. Nonzero in general for mixed generators.
    pub log_p_offblock: f64,
}

pub const POLAR_TOL: f64 = 1e-9;

/// Polar factorization `U = U_𝔨 U_𝔭` with `U_𝔭 = (U†U)^{1/2}`.
pub fn group_polar(u: &ComplexMatrix, sig: ThetaSignature) -> Result<PolarParts> {
    if u.dim() != sig.m() {
        return Err(Error::DimensionMismatch { expected: sig.m(), found: u.dim() });
    }
    let gram = &u.adjoint() * u;
    let u_p = sqrt_hpd(&gram)?;
    let u_k = u * &u_p.inverse()?;
    let log_p = log_hpd(&u_p)?;
    let id = ComplexMatrix::identity(sig.m());
    let imag_max = |m: &ComplexMatrix| m.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let real_max = |m: &ComplexMatrix| m.entries().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let p = sig.p;
    let mut offblock: f64 = 0.0;
    for i in 0..sig.m() {
        for j in 0..sig.m() {
            if (i < p) != (j < p) {
                offblock = offblock.max(log_p[(i, j)].norm());
            }
        }
    }
    let min_eval = eigh(&u_p)?.0.first().copied().unwrap_or(1.0);
    let checks = vec![
        Check::at_most("U_k unitary", (&(&u_k.adjoint() * &u_k) - &id).norm(), POLAR_TOL),
        Check::at_most("U_k real", imag_max(&u_k), POLAR_TOL),
        Check::at_most("U_p Hermitian", u_p.rel_dist(&u_p.adjoint()), POLAR_TOL),
        Check::at_least("U_p positive (min eigenvalue)", min_eval, f64::MIN_POSITIVE),
        Check::at_most("U_k U_p = U", (&u_k * &u_p).rel_dist(u), 1e-10),
        Check::at_most(
            "log U_p in i so(m,R)",
            real_max(&log_p).max((&log_p + &log_p.transpose()).norm()),
            POLAR_TOL,
        ),
    ];
    Ok(PolarParts { u_k, u_p, log_p, checks, log_p_offblock: offblock })
}

/// Constant-matrix content of the parity and metric relations at `x`.
pub fn parity_relations_check(a: &GaugeAlgebraElement, x: f64, tol: f64) -> Result<Vec<Check>> {
    let comp = cartan_split(a);
    let t = a.sig.theta();
    let uk_p = exp_compact(&comp, x)?;
    let uk_m = exp_compact(&comp, -x)?;
    let up_p = exp_noncompact(&comp, x)?;
    let up_m = exp_noncompact(&comp, -x)?;
    let u_p = &uk_p * &up_p;
    let u_m = &uk_m * &up_m;
    let conj_t = |m: &ComplexMatrix| &(&t * m) * &t;
    let metric = &(&u_p.adjoint() * &t) * &u_m;
    let metric_scale = (u_p.norm() * u_m.norm()).max(1.0);
    Ok(vec![
        Check::at_most("Theta U_k(-x) Theta = U_k(x)", conj_t(&uk_m).rel_dist(&uk_p), tol),
        Check::at_most("Theta U_p(-x) Theta = U_p(x)^-1", conj_t(&up_m).rel_dist(&up_p.inverse()?), tol),
        Check::at_most("U(x)^dag Theta U(-x) = Theta", metric.dist(&t) / metric_scale, tol),
    ])
}

/// `(dim 𝔨_Θ, dim 𝔭_Θ)` as real ranks of the parameterization images.
pub fn dimension_counts(sig: ThetaSignature) -> (usize, usize) {
    let (p, q) = (sig.p, sig.q);
    let real_vec = |m: &ComplexMatrix| -> Vec<C64> {
        m.entries().iter().flat_map(|z| [C64::new(z.re, 0.0), C64::new(z.im, 0.0)]).collect()
    };
    let mut k_vecs = Vec::new();
    for i in 0..p {
        for j in 0..q {
            let mut v = vec![vec![0.0; q]; p];
            v[i][j] = 1.0;
            let a = make_element(sig, vec![vec![0.0; p]; p], v, vec![vec![0.0; q]; q]).expect("valid");
            k_vecs.push(real_vec(&cartan_split(&a).b));
        }
    }
    let mut p_vecs = Vec::new();
    for (n, is_u) in [(p, true), (q, false)] {
        for i in 0..n {
            for j in i + 1..n {
                let mut blk = vec![vec![0.0; n]; n];
                blk[i][j] = 1.0;
                blk[j][i] = -1.0;
                let (u, w) = if is_u { (blk, vec![vec![0.0; q]; q]) } else { (vec![vec![0.0; p]; p], blk) };
                let a = make_element(sig, u, vec![vec![0.0; q]; p], w).expect("valid");
                p_vecs.push(real_vec(&cartan_split(&a).c));
            }
        }
    }
    (rank_of_vectors(&k_vecs, 1e-12), rank_of_vectors(&p_vecs, 1e-12))
}

/// Eigenvalues of `U_𝔭(x)` (all real positive for valid input).
pub fn noncompact_spectrum(comp: &CartanComponents, x: f64) -> Result<Vec<C64>> {
    eigenvalues(&exp_noncompact(comp, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::all_pass;
    use crate::numerics::pauli;
    use crate::sampling::seeded;

    fn sig(p: usize, q: usize) -> ThetaSignature {
        ThetaSignature::new(p, q).unwrap()
    }

    fn compact_example(alpha: f64) -> GaugeAlgebraElement {
        make_element(sig(1, 1), vec![vec![0.0]], vec![vec![alpha]], vec![vec![0.0]]).unwrap()
    }

    fn boost_example(alpha: f64) -> GaugeAlgebraElement {
        make_element(sig(2, 0), vec![vec![0.0, -alpha], vec![alpha, 0.0]], vec![vec![], vec![]], vec![]).unwrap()
    }

    #[test]
    fn compact_example_is_sigma2() {
        let a = compact_example(0.8);
        // A = ia = i·0.8·(iσ₂) ... a = [[0, α], [−α, 0]] = iασ₂.
        assert!(a.matrix.dist(&pauli(2).scale(I * 0.8)) < 1e-15);
        assert!(a.membership_residual() < MEMBERSHIP_TOL);
    }

    #[test]
    fn boost_generator_is_alpha_sigma2() {
        let a = boost_example(0.6);
        assert!(a.matrix.dist(&pauli(2).scale_real(0.6)) < 1e-15);
        assert!(a.membership_residual() < MEMBERSHIP_TOL);
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let e = make_element(sig(2, 0), vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![vec![], vec![]], vec![]);
        assert!(matches!(e, Err(Error::NotAntisymmetric { name: "u", .. })));
    }

    #[test]
    fn kappa_properties() {
        let mut rng = seeded(1);
        let s = sig(2, 1);
        let a1 = random_element(s, &mut rng, 1.0);
        let a2 = random_element(s, &mut rng, 1.0);
        assert!(kappa(&a1.matrix, s).unwrap().dist(&-&a1.matrix) < 1e-13);
        let br = a1.matrix.commutator(&a2.matrix);
        assert!(kappa(&br, s).unwrap().dist(&br) < 1e-13);
        let x = crate::sampling::complex_matrix(&mut rng, 3, 1.0);
        let y = crate::sampling::complex_matrix(&mut rng, 3, 1.0);
        assert!(kappa(&kappa(&x, s).unwrap(), s).unwrap().dist(&x) < 1e-14);
        let lhs = kappa(&x.commutator(&y), s).unwrap();
        let rhs = kappa(&x, s).unwrap().commutator(&kappa(&y, s).unwrap());
        assert!(lhs.dist(&rhs) < 1e-12);
    }

    #[test]
    fn split_structure() {
        let mut rng = seeded(2);
        let a = random_element(sig(2, 2), &mut rng, 1.0);
        let comp = cartan_split(&a);
        assert_eq!(&comp.b + &comp.c, a.matrix);
        assert!(all_pass(&comp.checks(1e-13)));
    }

    #[test]
    fn lts_closure_and_escape() {
        let mut rng = seeded(3);
        let s = sig(3, 1);
        for _ in 0..50 {
            let a: Vec<_> = (0..3).map(|_| random_element(s, &mut rng, 1.0)).collect();
            let rep = lts_check(&a[0], &a[1], &a[2]).unwrap();
            assert!(rep.closure_residual < 1e-12);
        }
        let a = random_element(s, &mut rng, 1.0);
        assert_eq!(lts_check(&a, &a, &a).unwrap().closure_residual, 0.0);
    }

    #[test]
    fn lts_signature_mismatch() {
        let mut rng = seeded(4);
        let a = random_element(sig(2, 1), &mut rng, 1.0);
        let b = random_element(sig(1, 2), &mut rng, 1.0);
        assert!(lts_check(&a, &b, &a).is_err());
    }

    #[test]
    fn wick_rotation() {
        let mut rng = seeded(5);
        let s = sig(2, 1);
        let a = random_element(s, &mut rng, 1.0);
        assert!(all_pass(&wick_check(&a.matrix, s, 1e-13).unwrap()));
        let mut bad = a.matrix.clone();
        bad[(0, 1)] += C64::new(0.1, 0.0);
        bad[(1, 0)] -= C64::new(0.1, 0.0);
        assert!(!all_pass(&wick_check(&bad, s, 1e-13).unwrap()));
    }

    #[test]
    fn compact_closed_form_examples() {
        let x = 1.3;
        let comp = cartan_split(&compact_example(0.7));
        let uk = exp_compact(&comp, x).unwrap();
        let (c, s) = ((0.7 * x).cos(), (0.7 * x).sin());
        let want = ComplexMatrix::from_real_fn(2, |i, j| [[c, s], [-s, c]][i][j]);
        assert!(uk.dist(&want) < 1e-14);
        let zero = cartan_split(&compact_example(0.0));
        assert_eq!(exp_compact(&zero, x).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn boost_closed_form() {
        let (alpha, x) = (0.6, 1.7);
        let comp = cartan_split(&boost_example(alpha));
        let up = exp_noncompact(&comp, x).unwrap();
        let want = &ComplexMatrix::identity(2).scale_real((alpha * x).cosh())
            + &pauli(2).scale_real((alpha * x).sinh());
        assert!(up.dist(&want) < 1e-13);
    }

    #[test]
    fn exponentials_match_expm() {
        let mut rng = seeded(6);
        for (p, q) in [(2, 1), (2, 2), (3, 1), (1, 3)] {
            let a = random_element(sig(p, q), &mut rng, 1.0);
            let comp = cartan_split(&a);
            for x in [0.1, 1.0, 5.0, -3.0] {
                let checks = exponential_checks(&comp, x, 1e-10).unwrap();
                assert!(all_pass(&checks), "{checks:?}");
            }
        }
    }

    #[test]
    fn polar_pure_and_mixed() {
        let mut rng = seeded(7);
        let s = sig(2, 1);
        let a = random_element(s, &mut rng, 1.0);
        let comp = cartan_split(&a);
        let pure_k = group_polar(&expm(&comp.b.scale_real(0.7)).unwrap(), s).unwrap();
        assert!(pure_k.u_p.dist(&ComplexMatrix::identity(3)) < 1e-12);
        let pure_p = group_polar(&expm(&comp.c.scale_real(0.7)).unwrap(), s).unwrap();
        assert!(pure_p.u_k.dist(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(pure_p.log_p_offblock < 1e-12);
        let mixed = group_polar(&expm(&a.matrix.scale_real(0.7)).unwrap(), s).unwrap();
        assert!(all_pass(&mixed.checks), "{:?}", mixed.checks);
    }

    #[test]
    fn parity_relations_examples() {
        for x in [0.5, 2.0] {
            assert!(all_pass(&parity_relations_check(&compact_example(0.9), x, 1e-10).unwrap()));
            assert!(all_pass(&parity_relations_check(&boost_example(0.9), x, 1e-10).unwrap()));
        }
    }

    /// Independent oracle: nullity of the real-linear map
    /// `a ↦ (a + aᵀ, Θa†Θ − a)` restricted to real or imaginary matrices.
    fn nullity(s: ThetaSignature, imaginary: bool) -> usize {
        let m = s.m();
        let t = s.theta();
        let mut images = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let mut a = ComplexMatrix::zeros(m);
                a[(i, j)] = if imaginary { I } else { ONE };
                let r1 = &a + &a.transpose();
                let r2 = &(&(&t * &a.adjoint()) * &t) - &a;
                let v: Vec<C64> = r1
                    .entries()
                    .into_iter()
                    .chain(r2.entries())
                    .flat_map(|z| [C64::new(z.re, 0.0), C64::new(z.im, 0.0)])
                    .collect();
                images.push(v);
            }
        }
        m * m - rank_of_vectors(&images, 1e-12)
    }

    #[test]
    fn dimensions_match_nullity_oracle() {
        for (p, q) in [(2, 1), (2, 2), (3, 1), (1, 1), (3, 0)] {
            let s = sig(p, q);
            let (dk, dp) = dimension_counts(s);
            assert_eq!(dk, s.dim_k());
            assert_eq!(dp, s.dim_p());
            assert_eq!(nullity(s, false), p * q);
            assert_eq!(nullity(s, true), s.dim_p());
        }
    }
}
