//! The Grassmannian `Gr(p, n)` of `p`-dimensional subspaces of `ℝⁿ`.
//!
//! Points are stored as `n×p` matrices with orthonormal columns and tangents
//! at a base `Ā` as horizontal `n×p` matrices `Z` (`ĀᵀZ = 0`). Every routine
//! works on `n×p` and `p×p` matrices only, so the cost is `O(np²)`; no `n×n`
//! matrix is ever formed.
//!
//! ```text
//! exp:  Z = U Θ Vᵀ            ↦  Ā V cos Θ + U sin Θ
//! log:  A ↦ U arctan(Σ) Vᵀ,   U Σ Vᵀ = A (ĀᵀA)⁻¹ − Ā
//! ```

use nalgebra::DMatrix;

use crate::chart::{
    chart_tangents, karcher_weights, largest_weight_index, weighted_sum, Chart, InterpolationProblem, KarcherOptions,
    KarcherOutcome,
};
use crate::error::{Error, Result};
use crate::matfun::thin_svd;
use crate::scalar::Real;
use crate::shapefn::ShapeFunctions;

const ORTHONORMAL_TOL: f64 = 1e-10;
const HORIZONTAL_TOL: f64 = 1e-10;
/// Condition number of `ĀᵀA` beyond which `A` is treated as on the cut locus.
pub const CUT_LOCUS_CONDITION: f64 = 1e12;
const RANK_TOL: f64 = 1e-10;
/// Two representatives denote the same subspace below this distance.
pub const SAME_SUBSPACE_TOL: f64 = 1e-9;

/// A subspace, represented by an orthonormal basis.
///
/// Equality compares subspaces, not bases: two points are equal when their
/// [`subspace_distance`] is at most [`SAME_SUBSPACE_TOL`].
#[derive(Debug, Clone)]
pub struct GrassPoint<T: Real> {
    a: DMatrix<T>,
}

impl<T: Real> GrassPoint<T> {
    /// Checks `1 ≤ p < n` and `AᵀA = I` to `1e-10`.
    pub fn new(a: DMatrix<T>) -> Result<Self> {
        let (n, p) = a.shape();
        if p == 0 || p >= n {
            return Err(Error::Shape(format!("Grassmann basis must be n x p with 1 <= p < n, got {n}x{p}")));
        }
        if !a.iter().all(|x| x.is_finite()) {
            return Err(Error::NotFinite);
        }
        let defect = orthonormality_defect(&a);
        if defect > T::lit(ORTHONORMAL_TOL) {
            return Err(Error::NotOrthonormal { defect: defect.as_f64() });
        }
        Ok(GrassPoint { a })
    }

    pub(crate) fn from_orthonormal(a: DMatrix<T>) -> Self {
        GrassPoint { a }
    }

    /// The span of the first `p` coordinate axes.
    pub fn coordinate(n: usize, p: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, p))
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn into_basis(self) -> DMatrix<T> {
        self.a
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn p(&self) -> usize {
        self.a.ncols()
    }

    /// The same subspace with basis `A R`; `R` must be orthogonal.
    pub fn rotate_basis(&self, r: &DMatrix<T>) -> Result<Self> {
        Self::new(&self.a * r)
    }

    /// The subspace `Q V` for orthogonal `Q`.
    pub fn transform(&self, q: &DMatrix<T>) -> Result<Self> {
        Self::new(q * &self.a)
    }

    pub fn same_subspace(&self, other: &Self) -> bool {
        subspace_distance(self, other).is_ok_and(|d| d <= T::lit(SAME_SUBSPACE_TOL))
    }
}

impl<T: Real> PartialEq for GrassPoint<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_subspace(other)
    }
}

/// `max |AᵀA − I|`.
pub fn orthonormality_defect<T: Real>(a: &DMatrix<T>) -> T {
    let p = a.ncols();
    (a.tr_mul(a) - DMatrix::identity(p, p)).amax()
}

/// A horizontal tangent `Z` at `base`.
#[derive(Debug, Clone)]
pub struct GrassTangent<T: Real> {
    z: DMatrix<T>,
    base: GrassPoint<T>,
}

impl<T: Real> GrassTangent<T> {
    pub fn new(base: GrassPoint<T>, z: DMatrix<T>) -> Result<Self> {
        check_horizontal(&base, &z)?;
        Ok(GrassTangent { z, base })
    }

    pub fn zero(base: GrassPoint<T>) -> Self {
        let z = DMatrix::zeros(base.n(), base.p());
        GrassTangent { z, base }
    }

    /// Projects an arbitrary `n×p` matrix onto the horizontal space at `base`.
    pub fn project(base: GrassPoint<T>, m: &DMatrix<T>) -> Self {
        let z = m - base.basis() * base.basis().tr_mul(m);
        GrassTangent { z, base }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.z
    }

    pub fn base(&self) -> &GrassPoint<T> {
        &self.base
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.z
    }

    pub fn exp(&self) -> Result<GrassPoint<T>> {
        grass_exp(&self.base, &self.z)
    }
}

fn check_horizontal<T: Real>(base: &GrassPoint<T>, z: &DMatrix<T>) -> Result<()> {
    if z.shape() != base.a.shape() {
        return Err(Error::Shape(format!("tangent is {}x{}, base is {}x{}", z.nrows(), z.ncols(), base.n(), base.p())));
    }
    let defect = base.a.tr_mul(z).norm();
    if defect > T::lit(HORIZONTAL_TOL) * T::one().max(z.norm()) {
        return Err(Error::NotHorizontal { defect: defect.as_f64() });
    }
    Ok(())
}

/// Geodesic from `base` with initial velocity `z`, evaluated at time 1.
pub fn grass_exp<T: Real>(base: &GrassPoint<T>, z: &DMatrix<T>) -> Result<GrassPoint<T>> {
    check_horizontal(base, z)?;
    let svd = thin_svd(z)?;
    let mut av = &base.a * &svd.v;
    let mut u = svd.u;
    for (j, &theta) in svd.sigma.iter().enumerate() {
        av.column_mut(j).scale_mut(theta.cos());
        u.column_mut(j).scale_mut(theta.sin());
    }
    Ok(GrassPoint::from_orthonormal(av + u))
}

/// Inverse of [`grass_exp`] within the injectivity radius: requires `ĀᵀA`
/// to be invertible (every principal angle below `π/2`).
pub fn grass_log<T: Real>(base: &GrassPoint<T>, v: &GrassPoint<T>) -> Result<GrassTangent<T>> {
    if base.a.shape() != v.a.shape() {
        return Err(Error::Shape(format!(
            "points live in Gr({}, {}) and Gr({}, {})",
            base.p(),
            base.n(),
            v.p(),
            v.n()
        )));
    }
    let m = base.a.tr_mul(&v.a);
    let msvd = thin_svd(&m)?;
    // Cosines of the principal angles are at most 1, so the condition is
    // measured against unit scale: a lone tiny cosine must still count.
    let smax = msvd.sigma[0].max(T::one());
    let smin = msvd.sigma[msvd.sigma.len() - 1];
    let condition = if smin > T::zero() { smax / smin } else { T::max_value().unwrap_or(smax) };
    if smin <= T::zero() || condition > T::lit(CUT_LOCUS_CONDITION) {
        return Err(Error::CutLocus { index: 0, condition: condition.as_f64() });
    }
    // (I − ĀĀᵀ) A M⁻¹ = A M⁻¹ − Ā since ĀᵀA M⁻¹ = I.
    let m_inv_t = m.transpose().lu().solve(&v.a.transpose()).ok_or(Error::Singular)?;
    let k = m_inv_t.transpose() - &base.a;
    let svd = thin_svd(&k)?;
    let mut z = svd.u;
    for (j, &s) in svd.sigma.iter().enumerate() {
        z.column_mut(j).scale_mut(s.atan());
    }
    let z = z * svd.v.transpose();
    Ok(GrassTangent::project(base.clone(), &z))
}

/// Principal-angle distance `‖θ‖₂` between two subspaces.
///
/// Large angles come from the cosines (singular values of `VᵀW`), small ones
/// from the sines (singular values of `W − V VᵀW`), which keeps full relative
/// accuracy near zero.
pub fn subspace_distance<T: Real>(v: &GrassPoint<T>, w: &GrassPoint<T>) -> Result<T> {
    Ok(principal_angles(v, w)?.iter().fold(T::zero(), |acc, t| acc + *t * *t).sqrt())
}

/// Principal angles in ascending order.
pub fn principal_angles<T: Real>(v: &GrassPoint<T>, w: &GrassPoint<T>) -> Result<Vec<T>> {
    if v.a.shape() != w.a.shape() {
        return Err(Error::Shape(format!("points live in Gr({}, {}) and Gr({}, {})", v.p(), v.n(), w.p(), w.n())));
    }
    let c = v.a.tr_mul(&w.a);
    let cos = thin_svd(&c)?.sigma;
    let resid = &w.a - &v.a * &c;
    let sin = thin_svd(&resid)?.sigma;
    let p = cos.len();
    let half = T::lit(0.5);
    Ok((0..p)
        .map(|i| {
            // i-th smallest angle: i-th largest cosine, i-th smallest sine.
            let ci = cos[i].min(T::one());
            let si = sin[p - 1 - i].min(T::one());
            if ci * ci < half {
                ci.acos()
            } else {
                si.asin()
            }
        })
        .collect())
}

/// Orthonormal basis for the column span of a full-rank `n×p` matrix.
pub fn orthonormalize<T: Real>(m: &DMatrix<T>) -> Result<GrassPoint<T>> {
    let (n, p) = m.shape();
    if p == 0 || p >= n {
        return Err(Error::Shape(format!("expected n x p with 1 <= p < n, got {n}x{p}")));
    }
    let sigma = thin_svd(m)?.sigma;
    let smax = sigma[0];
    let ratio = if smax > T::zero() { sigma[p - 1] / smax } else { T::zero() };
    if ratio <= T::lit(RANK_TOL) {
        return Err(Error::Rank { ratio: ratio.as_f64() });
    }
    // Modified Gram-Schmidt, applied twice.
    let mut q = m.clone();
    for _ in 0..2 {
        for j in 0..p {
            for i in 0..j {
                let r = q.column(i).dot(&q.column(j));
                let qi = q.column(i).into_owned();
                q.column_mut(j).axpy(-r, &qi, T::one());
            }
            let norm = q.column(j).norm();
            q.column_mut(j).unscale_mut(norm);
        }
    }
    GrassPoint::new(q)
}

/// Chart at `Ā` with tangents `grass_log(Ā, ·)` and inverse `grass_exp(Ā, ·)`.
#[derive(Debug, Clone)]
pub struct GrassChart<T: Real> {
    base: GrassPoint<T>,
}

impl<T: Real> GrassChart<T> {
    pub fn new(base: GrassPoint<T>) -> Self {
        GrassChart { base }
    }
}

impl<T: Real> Chart<T> for GrassChart<T> {
    type Point = GrassPoint<T>;
    type Tangent = DMatrix<T>;

    fn base(&self) -> &GrassPoint<T> {
        &self.base
    }

    fn to_tangent(&self, v: &GrassPoint<T>) -> Result<DMatrix<T>> {
        Ok(grass_log(&self.base, v)?.into_matrix())
    }

    fn from_tangent(&self, z: &DMatrix<T>) -> Result<GrassPoint<T>> {
        grass_exp(&self.base, z)
    }
}

/// Interpolant with explicit weights: `exp_Ā(Σ w_i log_Ā(V_i))`.
pub fn interpolate_grass_weights<T: Real>(
    data: &[GrassPoint<T>],
    weights: &[T],
    base: &GrassPoint<T>,
) -> Result<GrassPoint<T>> {
    crate::chart::interpolate_weights(&GrassChart::new(base.clone()), data, weights)
}

pub fn interpolate_grass<T: Real, S: ShapeFunctions<T>>(
    data: &[GrassPoint<T>],
    shapes: &S,
    x: &[T],
    base: &GrassPoint<T>,
) -> Result<GrassPoint<T>> {
    let problem = InterpolationProblem::new(data, shapes, x)?;
    interpolate_grass_weights(data, &problem.eval().values, base)
}

/// Weighted Riemannian mean by re-centring until `‖Σ φ_i Z_i‖_F ≤ tol`.
pub fn interpolate_grass_karcher<T: Real, S: ShapeFunctions<T>>(
    data: &[GrassPoint<T>],
    shapes: &S,
    x: &[T],
    initial: Option<&GrassPoint<T>>,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<GrassPoint<T>, T>> {
    let problem = InterpolationProblem::new(data, shapes, x)?;
    karcher_grass_weights(data, &problem.eval().values, initial, opts)
}

pub fn karcher_grass_weights<T: Real>(
    data: &[GrassPoint<T>],
    weights: &[T],
    initial: Option<&GrassPoint<T>>,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<GrassPoint<T>, T>> {
    if data.is_empty() {
        return Err(Error::Shape("no data".into()));
    }
    let start = initial.cloned().unwrap_or_else(|| data[largest_weight_index(weights)].clone());
    karcher_weights(data, weights, |b: &GrassPoint<T>| Ok(GrassChart::new(b.clone())), start, opts)
}

/// `‖Σ w_i log_Ā(V_i)‖_F`.
pub fn grass_karcher_residual<T: Real>(data: &[GrassPoint<T>], weights: &[T], base: &GrassPoint<T>) -> Result<T> {
    let tangents = chart_tangents(&GrassChart::new(base.clone()), data)?;
    Ok(weighted_sum(&tangents, weights).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapefn::FixedWeights;
    use nalgebra::dmatrix;

    fn line(theta: f64, n: usize) -> GrassPoint<f64> {
        let mut a = DMatrix::zeros(n, 1);
        a[(0, 0)] = theta.cos();
        a[(1, 0)] = theta.sin();
        GrassPoint::new(a).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(GrassPoint::new(dmatrix![1.0; 1.0]).unwrap_err().kind(), "not-orthonormal");
        assert_eq!(GrassPoint::new(DMatrix::<f64>::identity(3, 3)).unwrap_err().kind(), "shape");
        assert!(GrassPoint::<f64>::coordinate(4, 2).is_ok());
    }

    #[test]
    fn exp_great_circle() {
        let base = line(0.0, 2);
        let theta = 0.7;
        let v = grass_exp(&base, &dmatrix![0.0; theta]).unwrap();
        assert!(v.same_subspace(&line(theta, 2)));
        let z0 = grass_exp(&base, &DMatrix::zeros(2, 1)).unwrap();
        assert!((z0.basis() - base.basis()).norm() < 1e-15);
    }

    #[test]
    fn log_great_circle() {
        let base = line(0.0, 2);
        for theta in [0.1, 0.7, 1.4] {
            let z = grass_log(&base, &line(theta, 2)).unwrap();
            assert!((z.matrix() - dmatrix![0.0; theta]).norm() < 1e-14, "theta={theta}");
        }
        let z = grass_log(&base, &base).unwrap();
        assert!(z.matrix().norm() < 1e-15);
    }

    #[test]
    fn not_horizontal_and_cut_locus() {
        let base = line(0.0, 2);
        assert_eq!(grass_exp(&base, &dmatrix![0.5; 0.0]).unwrap_err().kind(), "not-horizontal");
        let err = grass_log(&base, &line(std::f64::consts::FRAC_PI_2, 2)).unwrap_err();
        assert_eq!(err.kind(), "cut-locus");
    }

    #[test]
    fn distances() {
        let a = line(0.0, 2);
        assert_eq!(subspace_distance(&a, &a).unwrap(), 0.0);
        let d = subspace_distance(&a, &line(std::f64::consts::FRAC_PI_2, 2)).unwrap();
        assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let d = subspace_distance(&a, &line(1e-9, 2)).unwrap();
        assert!((d - 1e-9).abs() < 1e-22);
        let b = GrassPoint::<f64>::coordinate(3, 2).unwrap();
        assert_eq!(subspace_distance(&a, &b).unwrap_err().kind(), "shape");
    }

    #[test]
    fn orthonormalize_examples() {
        let id = DMatrix::<f64>::identity(4, 2);
        assert_eq!(orthonormalize(&id).unwrap().basis(), &id);
        let scaled = dmatrix![3.0, 0.0; 0.0, -0.5; 0.0, 0.0];
        let g = orthonormalize(&scaled).unwrap();
        assert!(g.same_subspace(&GrassPoint::coordinate(3, 2).unwrap()));
        let deficient = dmatrix![1.0, 2.0; 1.0, 2.0; 0.0, 0.0];
        assert_eq!(orthonormalize(&deficient).unwrap_err().kind(), "rank");
    }

    #[test]
    fn midpoint_of_two_lines() {
        let theta = 0.9;
        let data = [line(0.0, 4), line(theta, 4)];
        let shapes = FixedWeights::new(vec![0.5, 0.5]);
        let mid = interpolate_grass(&data, &shapes, &[0.0], &data[0]).unwrap();
        assert!(mid.same_subspace(&line(theta / 2.0, 4)));
        let k = interpolate_grass_karcher(&data, &shapes, &[0.0], None, KarcherOptions::default()).unwrap();
        assert!(k.point.same_subspace(&line(theta / 2.0, 4)));
        assert!(k.residual <= 1e-12);
    }
}
