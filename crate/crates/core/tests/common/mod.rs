#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use symspace::{GrassPoint64, SigMatrix64, SignatureForm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Random matrix rescaled to the given Frobenius norm.
pub fn with_norm(rng: &mut impl Rng, n: usize, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, n, n);
    let f = m.norm();
    m * (norm / f)
}

pub fn symmetric(rng: &mut impl Rng, n: usize, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, n, n);
    let s = &m + m.transpose();
    let f = s.norm();
    s * (norm / f)
}

pub fn antisymmetric(rng: &mut impl Rng, n: usize, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, n, n);
    let s = &m - m.transpose();
    let f = s.norm();
    s * (norm / f)
}

pub fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(v))
}

/// `Σ_{k≤terms} A^k / k!`.
pub fn series_exp(a: &DMatrix<f64>, terms: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=terms {
        term = &term * a / k as f64;
        sum += &term;
    }
    sum
}

/// Exponential of a symmetric matrix through its eigendecomposition.
pub fn eig_fn(s: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let e = nalgebra::SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(f));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// Element of `sym_J`: `S J` with `S` symmetric.
pub fn lts_element(rng: &mut impl Rng, form: SignatureForm, norm: f64) -> DMatrix<f64> {
    let s = symmetric(rng, form.n(), 1.0);
    let x = form.right_j(&s);
    let f = x.norm();
    x * (norm / f)
}

/// Element of `o(p,q)`: `K J` with `K` antisymmetric.
pub fn opq_algebra(rng: &mut impl Rng, form: SignatureForm, norm: f64) -> DMatrix<f64> {
    let k = antisymmetric(rng, form.n(), 1.0);
    let y = form.right_j(&k);
    let f = y.norm();
    y * (norm / f)
}

/// Random point of the space `exp(2X) J` near `J`.
pub fn sig_near_j(rng: &mut impl Rng, form: SignatureForm, spread: f64) -> SigMatrix64 {
    let x = symspace::TangentSym64::new(lts_element(rng, form, spread), form).unwrap();
    symspace::f_map(&x).unwrap()
}

pub fn random_spd(rng: &mut impl Rng, n: usize, spread: f64) -> SigMatrix64 {
    let s = symmetric(rng, n, spread);
    SigMatrix64::new(eig_fn(&s, f64::exp), SignatureForm::spd(n)).unwrap()
}

pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let q = qr.q();
    let r = qr.r();
    // Fix column signs so the distribution is uniform.
    let mut q = q;
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn random_grass(rng: &mut impl Rng, n: usize, p: usize) -> GrassPoint64 {
    symspace::orthonormalize(&gaussian(rng, n, p)).unwrap()
}

/// Random horizontal tangent at `base` with Frobenius norm `norm`.
pub fn horizontal(rng: &mut impl Rng, base: &GrassPoint64, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, base.n(), base.p());
    let z = &m - base.basis() * base.basis().tr_mul(&m);
    let f = z.norm();
    z * (norm / f)
}

/// Random tangent whose principal angles (singular values) are all below `max_angle`.
pub fn horizontal_bounded(rng: &mut impl Rng, base: &GrassPoint64, max_angle: f64) -> DMatrix<f64> {
    let z = horizontal(rng, base, 1.0);
    let svd = symspace::thin_svd(&z).unwrap();
    let p = base.p();
    // Only min(p, n - p) angles can be nonzero.
    let rank = p.min(base.n() - p);
    let angles = DVector::from_fn(p, |j, _| if j < rank { rng.random_range(0.0..max_angle) } else { 0.0 });
    let mut u = svd.u.clone();
    for j in 0..p {
        u.column_mut(j).scale_mut(angles[j]);
    }
    u * svd.v.transpose()
}

pub fn grass_near(rng: &mut impl Rng, base: &GrassPoint64, max_angle: f64) -> GrassPoint64 {
    let z = horizontal_bounded(rng, base, max_angle);
    symspace::grass_exp(base, &z).unwrap()
}
