#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use symspace::{GrassPoint64, SigMatrix64, SignatureForm, TangentSym64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn scaled(m: DMatrix<f64>, norm: f64) -> DMatrix<f64> {
    let f = m.norm();
    m * (norm / f)
}

pub fn symmetric(rng: &mut impl Rng, n: usize, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, n, n);
    scaled(&m + m.transpose(), norm)
}

pub fn antisymmetric(rng: &mut impl Rng, n: usize, norm: f64) -> DMatrix<f64> {
    let m = gaussian(rng, n, n);
    scaled(&m - m.transpose(), norm)
}

/// `Q = exp(K J)` with `K` antisymmetric: an element of `O(p,q)`.
pub fn pseudo_orthogonal(rng: &mut impl Rng, form: SignatureForm, norm: f64) -> DMatrix<f64> {
    let y = scaled(form.right_j(&antisymmetric(rng, form.n(), 1.0)), norm);
    symspace::mat_exp(&y).unwrap()
}

/// Element `S J` of `sym_J` with Frobenius norm `norm`.
pub fn lts_element(rng: &mut impl Rng, form: SignatureForm, norm: f64) -> DMatrix<f64> {
    scaled(form.right_j(&symmetric(rng, form.n(), 1.0)), norm)
}

/// `exp(2X) J` for a random `X ∈ sym_J` of norm at most `spread`.
pub fn sig_point(rng: &mut impl Rng, form: SignatureForm, spread: f64) -> SigMatrix64 {
    let norm = rng.random_range(0.0..spread);
    let x = TangentSym64::new(lts_element(rng, form, norm), form).unwrap();
    symspace::f_map(&x).unwrap()
}

/// Symmetric matrix function through an eigendecomposition.
pub fn eig_fn(s: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let e = nalgebra::SymmetricEigen::new(s.clone());
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(f));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

pub fn random_spd(rng: &mut impl Rng, n: usize, spread: f64) -> SigMatrix64 {
    let s = symmetric(rng, n, spread);
    SigMatrix64::new(eig_fn(&s, f64::exp), SignatureForm::spd(n)).unwrap()
}

pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
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

/// Horizontal tangent at `base` whose principal angles are uniform in `[0, max_angle)`.
pub fn grass_tangent(rng: &mut impl Rng, base: &GrassPoint64, max_angle: f64) -> DMatrix<f64> {
    let m = gaussian(rng, base.n(), base.p());
    let z = &m - base.basis() * base.basis().tr_mul(&m);
    let svd = symspace::thin_svd(&z).unwrap();
    let p = base.p();
    let rank = p.min(base.n() - p);
    let angles = DVector::from_fn(p, |j, _| if j < rank { rng.random_range(0.0..max_angle) } else { 0.0 });
    let mut u = svd.u;
    for j in 0..p {
        u.column_mut(j).scale_mut(angles[j]);
    }
    u * svd.v.transpose()
}

pub fn grass_near(rng: &mut impl Rng, base: &GrassPoint64, max_angle: f64) -> GrassPoint64 {
    let z = grass_tangent(rng, base, max_angle);
    symspace::grass_exp(base, &z).unwrap()
}
