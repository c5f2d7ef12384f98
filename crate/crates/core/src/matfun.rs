//! Dense real matrix functions.
//!
//! Principal exponential (scaling and squaring with a degree-13 Padé
//! approximant), principal square root (product-form Denman–Beavers with
//! determinant scaling), principal logarithm (inverse scaling and squaring
//! followed by a Gauss–Legendre evaluation of the Padé approximant of
//! `log(I + E)`), and the first and second directional derivatives of the
//! exponential read off block-triangular exponentials.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector, Schur, SymmetricEigen, QR};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_unit;
use crate::scalar::Real;

/// Dense row/column matrix. Every kernel expects finite entries.
pub type DenseMat<T> = DMatrix<T>;

/// Default band around the negative real axis used to reject log/sqrt inputs.
pub const DEFAULT_AXIS_TOL: f64 = 1e-10;

const SQRT_MAX_ITER: usize = 50;
const SQRT_TARGET: f64 = 1e-14;
const LOG_SQRT_THRESHOLD: f64 = 0.25;
const LOG_PADE_POINTS: usize = 8;
const LOG_MAX_SQRTS: usize = 64;

/// Outcome of [`spectrum_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCheck<T> {
    pub has_negative_real_eigenvalue: bool,
    /// Smallest real part among eigenvalues within `tolerance_used` of the
    /// real axis; `+inf` when no eigenvalue is that close.
    pub min_real_part_on_axis: T,
    pub tolerance_used: T,
    /// The flagged eigenvalue with the smallest real part, if any.
    pub offending: Option<Complex<T>>,
}

/// Flags eigenvalues `λ` with `|Im λ| ≤ tol` and `Re λ ≤ tol`.
pub fn spectrum_check<T: Real>(a: &DenseMat<T>, tol: T) -> SpectrumCheck<T> {
    assert!(a.is_square(), "spectrum_check expects a square matrix");
    assert!(tol > T::zero(), "spectrum tolerance must be positive");
    let eig = eigenvalues(a);
    let mut min_re = T::max_value().unwrap_or_else(T::one);
    let mut found_axis = false;
    let mut offending: Option<Complex<T>> = None;
    for l in eig.iter() {
        if l.im.abs() <= tol {
            if !found_axis || l.re < min_re {
                min_re = l.re;
            }
            found_axis = true;
            if l.re <= tol && offending.is_none_or(|o| l.re < o.re) {
                offending = Some(*l);
            }
        }
    }
    if !found_axis {
        min_re = T::lit(f64::INFINITY);
    }
    SpectrumCheck {
        has_negative_real_eigenvalue: offending.is_some(),
        min_real_part_on_axis: min_re,
        tolerance_used: tol,
        offending,
    }
}

/// Complex eigenvalues of a real square matrix (real Schur form).
pub fn eigenvalues<T: Real>(a: &DenseMat<T>) -> DVector<Complex<T>> {
    let n = a.nrows();
    if n == 0 {
        return DVector::from_element(0, Complex::new(T::zero(), T::zero()));
    }
    if n == 1 {
        return DVector::from_element(1, Complex::new(a[(0, 0)], T::zero()));
    }
    // QR sweeps can stall on clustered spectra (e.g. near-identity input) when
    // deflating at exactly machine epsilon; widen the test and retry on a
    // trace-shifted copy before giving up.
    let shift = a.trace() / T::from_count(n);
    let shifted = a - DenseMat::identity(n, n) * shift;
    let cap = 100 * n;
    for factor in [1.0, 4.0, 64.0, 1024.0] {
        let eps = T::default_epsilon() * T::lit(factor);
        if let Some(s) = Schur::try_new(a.clone(), eps, cap) {
            return s.complex_eigenvalues();
        }
        if let Some(s) = Schur::try_new(shifted.clone(), eps, cap) {
            return s.complex_eigenvalues().map(|z| z + Complex::new(shift, T::zero()));
        }
    }
    Schur::try_new(shifted, T::lit(1e-10), 10_000 * n)
        .expect("real Schur iteration stalled")
        .complex_eigenvalues()
        .map(|z| z + Complex::new(shift, T::zero()))
}

fn ensure_square<T: Real>(a: &DenseMat<T>, what: &str) -> Result<()> {
    if a.nrows() == 0 || !a.is_square() {
        return Err(Error::Shape(format!("{what} expects a non-empty square matrix, got {}x{}", a.nrows(), a.ncols())));
    }
    Ok(())
}

fn ensure_finite<T: Real>(a: &DenseMat<T>) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NotFinite)
    }
}

/// Maximum absolute column sum.
pub fn one_norm<T: Real>(a: &DenseMat<T>) -> T {
    a.column_iter().map(|c| c.iter().fold(T::zero(), |s, x| s + x.abs())).fold(T::zero(), |m, x| m.max(x))
}

fn max_abs<T: Real>(a: &DenseMat<T>) -> T {
    a.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

// Padé(13) numerator/denominator coefficients b_0..b_13.
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
const THETA13: f64 = 5.371920351148152;

/// Principal matrix exponential.
pub fn mat_exp<T: Real>(a: &DenseMat<T>) -> Result<DenseMat<T>> {
    ensure_square(a, "mat_exp")?;
    ensure_finite(a)?;
    let n = a.nrows();
    let norm = one_norm(a);
    let mut squarings = 0i32;
    if norm > T::lit(THETA13) {
        let s = (norm / T::lit(THETA13)).log2().ceil();
        if s > T::lit(1000.0) {
            return Err(Error::ExpOverflow { norm: norm.as_f64() });
        }
        squarings = s.as_f64() as i32;
    }
    let scaled = a * T::lit(2f64.powi(-squarings));

    let b = |k: usize| T::lit(PADE13[k]);
    let id = DenseMat::<T>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);
    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom.lu().solve(&numer).ok_or(Error::ExpOverflow { norm: norm.as_f64() })?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if r.iter().all(|x| x.is_finite()) {
        Ok(r)
    } else {
        Err(Error::ExpOverflow { norm: norm.as_f64() })
    }
}

/// Rejects singular inputs and inputs with eigenvalues on the closed
/// negative real axis.
fn check_principal_domain<T: Real>(a: &DenseMat<T>, tol: T) -> Result<()> {
    let n = a.nrows();
    let scale = a.norm().max(T::min_value().unwrap_or_else(T::zero));
    let eig = eigenvalues(a);
    let tiny = T::from_count(n) * T::machine_epsilon() * scale;
    if scale == T::zero() || eig.iter().any(|l| (l.re * l.re + l.im * l.im).sqrt() <= tiny) {
        return Err(Error::Singular);
    }
    let check = spectrum_check(a, tol);
    if let Some(l) = check.offending {
        return Err(Error::LogBranch { re: l.re.as_f64(), im: l.im.as_f64() });
    }
    Ok(())
}

/// Principal square root with the default axis tolerance.
pub fn mat_sqrt_principal<T: Real>(a: &DenseMat<T>) -> Result<DenseMat<T>> {
    mat_sqrt_principal_tol(a, T::lit(DEFAULT_AXIS_TOL))
}

pub fn mat_sqrt_principal_tol<T: Real>(a: &DenseMat<T>, tol: T) -> Result<DenseMat<T>> {
    ensure_square(a, "mat_sqrt_principal")?;
    ensure_finite(a)?;
    check_principal_domain(a, tol)?;
    denman_beavers(a)
}

/// Scaled product-form Denman–Beavers iteration: `M -> I`, `Y -> A^{1/2}`.
fn denman_beavers<T: Real>(a: &DenseMat<T>) -> Result<DenseMat<T>> {
    let n = a.nrows();
    let id = DenseMat::<T>::identity(n, n);
    let half = T::lit(0.5);
    let target = T::lit(SQRT_TARGET).max(T::lit(10.0) * T::from_count(n) * T::machine_epsilon());
    let mut m = a.clone();
    let mut y = a.clone();
    let mut prev = (&m - &id).norm();
    if prev <= target {
        return Ok(y);
    }
    let mut scaling = true;
    for _ in 0..SQRT_MAX_ITER {
        let lu = m.clone().lu();
        let det = lu.determinant();
        let m_inv = lu.try_inverse().ok_or(Error::Singular)?;
        let mu = if scaling && det != T::zero() {
            det.abs().powf(-T::one() / (T::lit(2.0) * T::from_count(n)))
        } else {
            T::one()
        };
        let mu2 = mu * mu;
        let y_next = &y * (&id + &m_inv / mu2) * (mu * half);
        let m_next = (&id + (&m * mu2 + &m_inv / mu2) * half) * half;
        y = y_next;
        m = m_next;
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NoConvergence { what: "square root", iterations: SQRT_MAX_ITER });
        }
        let res = (&m - &id).norm();
        if res < T::lit(1e-2) {
            scaling = false;
        }
        if res <= target {
            return Ok(y);
        }
        // Quadratic convergence has hit the rounding floor.
        if res < T::lit(1e-8) && res >= prev {
            return Ok(y);
        }
        prev = res;
    }
    Err(Error::NoConvergence { what: "square root", iterations: SQRT_MAX_ITER })
}

/// Principal logarithm with the default axis tolerance.
pub fn mat_log_principal<T: Real>(a: &DenseMat<T>) -> Result<DenseMat<T>> {
    mat_log_principal_tol(a, T::lit(DEFAULT_AXIS_TOL))
}

pub fn mat_log_principal_tol<T: Real>(a: &DenseMat<T>, tol: T) -> Result<DenseMat<T>> {
    ensure_square(a, "mat_log_principal")?;
    ensure_finite(a)?;
    check_principal_domain(a, tol)?;
    let n = a.nrows();
    let id = DenseMat::<T>::identity(n, n);
    let mut x = a.clone();
    let mut roots = 0usize;
    while one_norm(&(&x - &id)) >= T::lit(LOG_SQRT_THRESHOLD) {
        if roots == LOG_MAX_SQRTS {
            return Err(Error::NoConvergence { what: "logarithm", iterations: roots });
        }
        x = denman_beavers(&x)?;
        roots += 1;
    }
    let e = &x - &id;
    Ok(log1p_pade(&e) * T::lit(2f64.powi(roots as i32)))
}

/// `log(I + E) ≈ Σ_j w_j E (I + t_j E)^{-1}`: the Gauss–Legendre form of the
/// diagonal Padé approximant.
fn log1p_pade<T: Real>(e: &DenseMat<T>) -> DenseMat<T> {
    let n = e.nrows();
    let id = DenseMat::<T>::identity(n, n);
    let (nodes, weights) = gauss_legendre_unit::<T>(LOG_PADE_POINTS);
    let mut acc = DenseMat::<T>::zeros(n, n);
    for (t, w) in nodes.into_iter().zip(weights) {
        let shifted = &id + e * t;
        // I + tE is well conditioned for ||E|| < 1/4.
        let solved = shifted.lu().solve(e).expect("I + tE is invertible for ||E|| < 1");
        acc += solved * w;
    }
    acc
}

fn ensure_same_square<T: Real>(mats: &[&DenseMat<T>], what: &str) -> Result<usize> {
    let n = mats[0].nrows();
    for m in mats {
        if m.nrows() != n || m.ncols() != n || n == 0 {
            return Err(Error::Shape(format!("{what} expects square matrices of equal size")));
        }
    }
    Ok(n)
}

/// `dexp_X Y`, the `(1,2)` block of `exp([[X, Y], [0, X]])`.
pub fn dexp<T: Real>(x: &DenseMat<T>, y: &DenseMat<T>) -> Result<DenseMat<T>> {
    let n = ensure_same_square(&[x, y], "dexp")?;
    let mut block = DenseMat::<T>::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(x);
    block.view_mut((n, n), (n, n)).copy_from(x);
    block.view_mut((0, n), (n, n)).copy_from(y);
    let e = mat_exp(&block)?;
    Ok(e.view((0, n), (n, n)).into_owned())
}

/// `∂²/∂s∂t exp(X + tY + sZ + stW)` at `s = t = 0`: the `(1,4)` block of the
/// 4×4 block exponential.
pub fn d2exp<T: Real>(x: &DenseMat<T>, y: &DenseMat<T>, z: &DenseMat<T>, w: &DenseMat<T>) -> Result<DenseMat<T>> {
    let n = ensure_same_square(&[x, y, z, w], "d2exp")?;
    let mut block = DenseMat::<T>::zeros(4 * n, 4 * n);
    for i in 0..4 {
        block.view_mut((i * n, i * n), (n, n)).copy_from(x);
    }
    block.view_mut((0, n), (n, n)).copy_from(y);
    block.view_mut((0, 2 * n), (n, n)).copy_from(z);
    block.view_mut((0, 3 * n), (n, n)).copy_from(w);
    block.view_mut((n, 3 * n), (n, n)).copy_from(z);
    block.view_mut((2 * n, 3 * n), (n, n)).copy_from(y);
    let e = mat_exp(&block)?;
    Ok(e.view((0, 3 * n), (n, n)).into_owned())
}

/// Thin singular value decomposition `A = U diag(σ) Vᵀ` of an `n×p` matrix
/// with `n ≥ p`.
#[derive(Debug, Clone)]
pub struct ThinSvd<T: Real> {
    /// `n×p`, orthonormal columns.
    pub u: DenseMat<T>,
    /// Nonnegative, descending.
    pub sigma: DVector<T>,
    /// `p×p` orthogonal.
    pub v: DenseMat<T>,
}

impl<T: Real> ThinSvd<T> {
    pub fn reconstruct(&self) -> DenseMat<T> {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

/// Thin SVD. Tall inputs are first reduced by a Householder QR so the cost is
/// `O(np²)`; the `p×p` factor is then diagonalized by one-sided Jacobi
/// rotations, which stays accurate for rank-deficient input. Each singular pair
/// is sign-normalized so the largest-magnitude entry of every column of `V` is
/// positive.
pub fn thin_svd<T: Real>(a: &DenseMat<T>) -> Result<ThinSvd<T>> {
    let (n, p) = a.shape();
    if p == 0 || n < p {
        return Err(Error::Shape(format!("thin_svd expects n >= p >= 1, got {n}x{p}")));
    }
    ensure_finite(a)?;
    let (q, r) = if n > p {
        let qr = QR::new(a.clone());
        (Some(qr.q()), qr.r())
    } else {
        (None, a.clone())
    };
    let cutoff = T::from_count(p) * T::machine_epsilon() * r.norm();
    let (w, vr) = jacobi_columns(r)?;

    let norms: Vec<T> = (0..p).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut u_small = DenseMat::<T>::zeros(p, p);
    let mut v = DenseMat::<T>::zeros(p, p);
    let mut sigma = DVector::<T>::zeros(p);
    let mut rank = 0;
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        let mut vcol = vr.column(src).into_owned();
        let mut ucol = if s > cutoff {
            rank = dst + 1;
            w.column(src) / s
        } else {
            DVector::zeros(p)
        };
        let pivot = vcol.iter().fold(T::zero(), |best, x| if x.abs() > best.abs() { *x } else { best });
        if pivot < T::zero() {
            ucol.neg_mut();
            vcol.neg_mut();
        }
        u_small.set_column(dst, &ucol);
        v.set_column(dst, &vcol);
        sigma[dst] = if dst < rank { s } else { T::zero() };
    }
    complete_basis(&mut u_small, rank);
    let u = match q {
        Some(q) => q * u_small,
        None => u_small,
    };
    Ok(ThinSvd { u, sigma, v })
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi: returns `W = R V` with mutually orthogonal
/// columns and the accumulated orthogonal `V`.
fn jacobi_columns<T: Real>(mut w: DenseMat<T>) -> Result<(DenseMat<T>, DenseMat<T>)> {
    let p = w.ncols();
    let mut v = DenseMat::<T>::identity(p, p);
    let tol = T::from_count(p) * T::machine_epsilon();
    // Columns below `ε‖R‖` carry no information and are left alone.
    let floor = T::machine_epsilon() * w.norm();
    let negligible = floor * floor;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p.saturating_sub(1) {
            for j in i + 1..p {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if alpha <= negligible || beta <= negligible || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let sign = if zeta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, i, j, c, s);
                rotate_columns(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence { what: "svd", iterations: JACOBI_MAX_SWEEPS })
}

fn rotate_columns<T: Real>(m: &mut DenseMat<T>, i: usize, j: usize, c: T, s: T) {
    for k in 0..m.nrows() {
        let (x, y) = (m[(k, i)], m[(k, j)]);
        m[(k, i)] = c * x - s * y;
        m[(k, j)] = s * x + c * y;
    }
}

/// Fills columns `rank..` of a square matrix whose leading columns are
/// orthonormal, so the whole matrix becomes orthogonal.
fn complete_basis<T: Real>(u: &mut DenseMat<T>, rank: usize) {
    let p = u.nrows();
    for filled in rank..p {
        // The unit vector with the largest residual keeps its norm at least `1/√p`.
        let mut best = DVector::<T>::zeros(p);
        let mut best_norm = -T::one();
        for e in 0..p {
            let mut x = DVector::<T>::zeros(p);
            x[e] = T::one();
            for _ in 0..2 {
                for k in 0..filled {
                    let d = u.column(k).dot(&x);
                    x.axpy(-d, &u.column(k), T::one());
                }
            }
            let nx = x.norm();
            if nx > best_norm {
                best_norm = nx;
                best = x;
            }
        }
        u.set_column(filled, &(best / best_norm));
    }
}

/// Counts of positive and negative eigenvalues of a nonsingular symmetric
/// matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub const fn new(positive: usize, negative: usize) -> Self {
        Signature { positive, negative }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positive, self.negative)
    }
}

pub(crate) const SYMMETRY_TOL: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-10;

/// Relative asymmetry `max|S - Sᵀ| / max(1, max|S|)`.
pub fn asymmetry<T: Real>(s: &DenseMat<T>) -> T {
    max_abs(&(s - s.transpose())) / T::one().max(max_abs(s))
}

/// Signature `(num_positive, num_negative)` from a symmetric eigensolver.
pub fn sym_signature<T: Real>(s: &DenseMat<T>) -> Result<Signature> {
    ensure_square(s, "sym_signature")?;
    ensure_finite(s)?;
    let defect = asymmetry(s);
    if defect > T::lit(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { defect: defect.as_f64() });
    }
    let sym = (s + s.transpose()) * T::lit(0.5);
    let scale = sym.norm();
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let mut sig = Signature::new(0, 0);
    for &l in eig.iter() {
        if l.abs() <= T::lit(DEGENERATE_TOL) * scale || scale == T::zero() {
            return Err(Error::DegenerateSignature { eigenvalue: l.as_f64() });
        }
        if l > T::zero() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    Ok(sig)
}

/// `f(S) = V f(Λ) Vᵀ` for symmetric `S`.
pub(crate) fn sym_apply<T: Real>(s: &DenseMat<T>, f: impl Fn(T) -> T) -> DenseMat<T> {
    let eig = SymmetricEigen::new((s + s.transpose()) * T::lit(0.5));
    let mut scaled = eig.eigenvectors.clone();
    for (j, l) in eig.eigenvalues.iter().enumerate() {
        scaled.column_mut(j).scale_mut(f(*l));
    }
    scaled * eig.eigenvectors.transpose()
}
