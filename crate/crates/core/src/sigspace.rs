//! Nonsingular symmetric matrices of fixed signature.
//!
//! The space of symmetric `n×n` matrices with `q` positive and `p` negative
//! eigenvalues is `GL_n / O(p,q)` under `A·L = A L Aᵀ`, with base point
//! `J = diag(-1,…,-1, 1,…,1)` (`p` entries `-1`). The canonical chart is
//! `F(X) = exp(2X) J` on `sym_J(n) = {X : XJ = JXᵀ}` with inverse
//! `F⁻¹(L) = ½ log(LJ)`, defined when `LJ` has no eigenvalue on the closed
//! negative real axis.
//!
//! Interpolation is done in the chart based at an arbitrary `L̄`:
//!
//! ```text
//! I L(x) = L̄ exp( Σ_i φ_i(x) log(L̄⁻¹ L_i) )
//! ```
//!
//! which for `L̄ = J` is `J exp(Σ φ_i log(J L_i))`. With `J = I` this is the
//! log-Euclidean mean on SPD matrices, and the fixed-point variant is the
//! affine-invariant Karcher mean.

use nalgebra::{DMatrix, DVector};

use crate::chart::{
    interpolate_jet, karcher_weights, largest_weight_index, Chart, ExpChart, InterpolationProblem, Jet, KarcherOptions,
    KarcherOutcome,
};
use crate::error::{Error, Result};
use crate::matfun::{
    asymmetry, mat_exp, mat_log_principal, mat_sqrt_principal, spectrum_check, sym_apply, sym_signature, Signature,
    DEFAULT_AXIS_TOL, SYMMETRY_TOL,
};
use crate::scalar::Real;
use crate::shapefn::ShapeFunctions;

/// Symmetry defect tolerated on computed (rather than supplied) matrices
/// before they are symmetrized.
const COMPUTED_SYMMETRY_TOL: f64 = 1e-9;

/// `J = diag(-1,…,-1, 1,…,1)` with `p` negative and `q` positive entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignatureForm {
    pub p: usize,
    pub q: usize,
}

impl SignatureForm {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::Shape("signature form needs n = p + q >= 1".into()));
        }
        Ok(SignatureForm { p, q })
    }

    /// `J = I_n`.
    pub fn spd(n: usize) -> Self {
        SignatureForm { p: 0, q: n }
    }

    /// `J = diag(-1, 1, 1, 1)`.
    pub fn lorentzian() -> Self {
        SignatureForm { p: 1, q: 3 }
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Eigenvalue-sign counts `(q, p)` shared by every member of the space.
    pub fn signature(&self) -> Signature {
        Signature::new(self.q, self.p)
    }

    pub fn diagonal<T: Real>(&self) -> DVector<T> {
        DVector::from_fn(self.n(), |i, _| if i < self.p { -T::one() } else { T::one() })
    }

    pub fn j<T: Real>(&self) -> DMatrix<T> {
        DMatrix::from_diagonal(&self.diagonal())
    }

    pub fn is_spd(&self) -> bool {
        self.p == 0
    }

    /// `J M` without a matrix product (row sign flips).
    pub fn left_j<T: Real>(&self, m: &DMatrix<T>) -> DMatrix<T> {
        let mut out = m.clone();
        for i in 0..self.p {
            out.row_mut(i).neg_mut();
        }
        out
    }

    /// `M J` without a matrix product (column sign flips).
    pub fn right_j<T: Real>(&self, m: &DMatrix<T>) -> DMatrix<T> {
        let mut out = m.clone();
        for i in 0..self.p {
            out.column_mut(i).neg_mut();
        }
        out
    }
}

/// A symmetric nonsingular matrix whose signature is fixed by `form`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigMatrix<T: Real> {
    l: DMatrix<T>,
    form: SignatureForm,
}

impl<T: Real> SigMatrix<T> {
    /// Validates symmetry (relative `1e-12`) and signature.
    pub fn new(l: DMatrix<T>, form: SignatureForm) -> Result<Self> {
        if l.nrows() != form.n() || l.ncols() != form.n() {
            return Err(Error::Shape(format!(
                "expected {n}x{n} matrix, got {}x{}",
                l.nrows(),
                l.ncols(),
                n = form.n()
            )));
        }
        let sig = sym_signature(&l)?;
        if sig != form.signature() {
            return Err(Error::SignatureMismatch {
                expected_pos: form.q,
                expected_neg: form.p,
                found_pos: sig.positive,
                found_neg: sig.negative,
            });
        }
        let l = (&l + l.transpose()) * T::lit(0.5);
        Ok(SigMatrix { l, form })
    }

    /// The base point `J` of the canonical chart.
    pub fn identity_form(form: SignatureForm) -> Self {
        SigMatrix { l: form.j(), form }
    }

    /// Wraps a matrix produced by a structure-preserving map, symmetrizing
    /// away rounding.
    pub(crate) fn from_computed(l: DMatrix<T>, form: SignatureForm) -> Result<Self> {
        if !l.iter().all(|x| x.is_finite()) {
            return Err(Error::NotFinite);
        }
        let defect = asymmetry(&l);
        if defect > T::lit(COMPUTED_SYMMETRY_TOL) {
            return Err(Error::NotSymmetric { defect: defect.as_f64() });
        }
        let l = (&l + l.transpose()) * T::lit(0.5);
        Ok(SigMatrix { l, form })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.l
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.l
    }

    pub fn form(&self) -> SignatureForm {
        self.form
    }

    /// Membership in the domain of the canonical chart: `LJ` has no
    /// eigenvalue on the closed negative real axis.
    pub fn in_chart_domain(&self) -> bool {
        !spectrum_check(&self.form.right_j(&self.l), T::lit(DEFAULT_AXIS_TOL)).has_negative_real_eigenvalue
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.l.clone().try_inverse().ok_or(Error::Singular)?;
        SigMatrix::from_computed(inv, self.form)
    }

    /// `A L Aᵀ`.
    pub fn congruence(&self, a: &DMatrix<T>) -> Result<Self> {
        SigMatrix::from_computed(a * &self.l * a.transpose(), self.form)
    }
}

/// An element of `sym_J(n) = {X : XJ = JXᵀ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSym<T: Real> {
    x: DMatrix<T>,
    form: SignatureForm,
}

impl<T: Real> TangentSym<T> {
    pub fn new(x: DMatrix<T>, form: SignatureForm) -> Result<Self> {
        if x.nrows() != form.n() || x.ncols() != form.n() {
            return Err(Error::Shape(format!("expected {n}x{n} tangent", n = form.n())));
        }
        let defect = lts_defect(&x, form);
        if defect > T::lit(SYMMETRY_TOL) {
            return Err(Error::NotInLts { defect: defect.as_f64() });
        }
        Ok(TangentSym { x, form })
    }

    pub fn zero(form: SignatureForm) -> Self {
        TangentSym { x: DMatrix::zeros(form.n(), form.n()), form }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.x
    }

    pub fn form(&self) -> SignatureForm {
        self.form
    }
}

/// Relative defect `max|XJ - JXᵀ| / max(1, max|X|)`.
pub fn lts_defect<T: Real>(x: &DMatrix<T>, form: SignatureForm) -> T {
    let xj = form.right_j(x);
    let jxt = form.left_j(&x.transpose());
    let d = (xj - jxt).amax();
    d / T::one().max(x.amax())
}

/// Orthogonal projection `X ↦ (X + J Xᵀ J) / 2` onto `sym_J(n)`.
fn project_lts<T: Real>(x: &DMatrix<T>, form: SignatureForm) -> DMatrix<T> {
    let jxtj = form.right_j(&form.left_j(&x.transpose()));
    (x + jxtj) * T::lit(0.5)
}

/// `F(X) = exp(2X) J`.
pub fn f_map<T: Real>(x: &TangentSym<T>) -> Result<SigMatrix<T>> {
    let e = mat_exp(&(x.matrix() * T::lit(2.0)))?;
    SigMatrix::from_computed(x.form.right_j(&e), x.form)
}

/// `F⁻¹(L) = ½ log(LJ)`.
pub fn f_inv<T: Real>(l: &SigMatrix<T>) -> Result<TangentSym<T>> {
    let form = l.form;
    let log = mat_log_principal(&form.right_j(l.matrix())).map_err(|e| e.at_index(0))?;
    let x = log * T::lit(0.5);
    let defect = lts_defect(&x, form);
    if defect > T::lit(COMPUTED_SYMMETRY_TOL) {
        return Err(Error::NotInLts { defect: defect.as_f64() });
    }
    Ok(TangentSym { x: project_lts(&x, form), form })
}

/// Generalized polar factors `A = P Q`, `P ∈ Sym_J(n)`, `Q ∈ O(p,q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors<T: Real> {
    pub p: DMatrix<T>,
    pub q: DMatrix<T>,
}

/// `P = (A J Aᵀ J)^{1/2}`, `Q = P⁻¹ A`.
pub fn gpd_factorize<T: Real>(a: &DMatrix<T>, form: SignatureForm) -> Result<PolarFactors<T>> {
    let n = form.n();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::Shape(format!("expected {n}x{n} matrix")));
    }
    let m = form.right_j(&(form.right_j(a) * a.transpose()));
    let check = spectrum_check(&m, T::lit(DEFAULT_AXIS_TOL));
    if let Some(l) = check.offending {
        return Err(Error::GpdDomain { re: l.re.as_f64(), im: l.im.as_f64() });
    }
    let p = mat_sqrt_principal(&m).map_err(|e| match e {
        Error::LogBranch { re, im } => Error::GpdDomain { re, im },
        Error::Singular => Error::GpdDomain { re: 0.0, im: 0.0 },
        other => other,
    })?;
    let q = p.clone().lu().solve(a).ok_or(Error::Singular)?;
    Ok(PolarFactors { p, q })
}

/// Base point `L̄ = Ā J Āᵀ` of the chart generated by a group element `Ā`.
pub fn base_from_group<T: Real>(a: &DMatrix<T>, form: SignatureForm) -> Result<SigMatrix<T>> {
    SigMatrix::identity_form(form).congruence(a)
}

/// Geodesic symmetry about `L̄`: `L ↦ L̄ L⁻¹ L̄` (for `L̄ = J`: `J L⁻¹ J`).
pub fn geodesic_symmetry<T: Real>(base: &SigMatrix<T>, l: &SigMatrix<T>) -> Result<SigMatrix<T>> {
    let inv = l.matrix().clone().try_inverse().ok_or(Error::Singular)?;
    SigMatrix::from_computed(base.matrix() * inv * base.matrix(), l.form)
}

/// Chart at `L̄` with tangent coordinates `log(L̄⁻¹ L)` and inverse
/// `V ↦ L̄ exp(V)`.
#[derive(Debug, Clone)]
pub struct SigChart<T: Real> {
    base: SigMatrix<T>,
    base_inv: DMatrix<T>,
    spd_identity: bool,
}

impl<T: Real> SigChart<T> {
    /// Uses a symmetric-eigensolver fast path when `J = I` and `L̄ = I`.
    pub fn new(base: SigMatrix<T>) -> Result<Self> {
        let mut chart = Self::generic(base)?;
        let n = chart.base.form.n();
        chart.spd_identity = chart.base.form.is_spd() && chart.base.l == DMatrix::identity(n, n);
        Ok(chart)
    }

    /// Always uses the general nonsymmetric log/exp path.
    pub fn generic(base: SigMatrix<T>) -> Result<Self> {
        let base_inv = base.l.clone().try_inverse().ok_or(Error::Singular)?;
        Ok(SigChart { base, base_inv, spd_identity: false })
    }

    /// The canonical chart at `J`.
    pub fn at_identity(form: SignatureForm) -> Self {
        Self::new(SigMatrix::identity_form(form)).expect("J is invertible")
    }

    fn check_form(&self, l: &SigMatrix<T>) -> Result<()> {
        if l.form != self.base.form {
            return Err(Error::Shape(format!(
                "datum has form (p={}, q={}), chart has (p={}, q={})",
                l.form.p, l.form.q, self.base.form.p, self.base.form.q
            )));
        }
        Ok(())
    }
}

impl<T: Real> Chart<T> for SigChart<T> {
    type Point = SigMatrix<T>;
    type Tangent = DMatrix<T>;

    fn base(&self) -> &SigMatrix<T> {
        &self.base
    }

    fn to_tangent(&self, l: &SigMatrix<T>) -> Result<DMatrix<T>> {
        self.check_form(l)?;
        if self.spd_identity {
            let eig = nalgebra::SymmetricEigen::new(l.l.clone());
            if let Some(bad) = eig.eigenvalues.iter().find(|v| **v <= T::zero()) {
                return Err(Error::OutsideChart { index: 0, re: bad.as_f64(), im: 0.0 });
            }
            return Ok(sym_apply(&l.l, |v| v.ln()));
        }
        mat_log_principal(&(&self.base_inv * &l.l)).map_err(|e| e.at_index(0))
    }

    fn from_tangent(&self, v: &DMatrix<T>) -> Result<SigMatrix<T>> {
        if self.spd_identity {
            return SigMatrix::from_computed(sym_apply(v, |x| x.exp()), self.base.form);
        }
        SigMatrix::from_computed(&self.base.l * mat_exp(v)?, self.base.form)
    }
}

impl<T: Real> ExpChart<T> for SigChart<T> {
    fn realize(&self, m: &DMatrix<T>) -> DMatrix<T> {
        &self.base.l * m
    }
}

/// Fixed-base interpolant with explicit weights.
pub fn interpolate_sig_weights<T: Real>(
    data: &[SigMatrix<T>],
    weights: &[T],
    base: &SigMatrix<T>,
) -> Result<SigMatrix<T>> {
    let chart = SigChart::new(base.clone())?;
    crate::chart::interpolate_weights(&chart, data, weights)
}

/// `L̄ exp(Σ φ_i(x) log(L̄⁻¹ L_i))`.
pub fn interpolate_sig<T: Real, S: ShapeFunctions<T>>(
    data: &[SigMatrix<T>],
    shapes: &S,
    x: &[T],
    base: &SigMatrix<T>,
) -> Result<SigMatrix<T>> {
    let problem = InterpolationProblem::new(data, shapes, x)?;
    interpolate_sig_weights(data, &problem.eval().values, base)
}

/// Solves `Σ φ_i(x) log(L̄⁻¹ L_i) = 0` by re-centring. Without an explicit
/// initial base, starts from the datum with the largest weight.
pub fn interpolate_sig_karcher<T: Real, S: ShapeFunctions<T>>(
    data: &[SigMatrix<T>],
    shapes: &S,
    x: &[T],
    initial: Option<&SigMatrix<T>>,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<SigMatrix<T>, T>> {
    let problem = InterpolationProblem::new(data, shapes, x)?;
    karcher_sig_weights(data, &problem.eval().values, initial, opts)
}

pub fn karcher_sig_weights<T: Real>(
    data: &[SigMatrix<T>],
    weights: &[T],
    initial: Option<&SigMatrix<T>>,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<SigMatrix<T>, T>> {
    if data.is_empty() {
        return Err(Error::Shape("no data".into()));
    }
    let start = initial.cloned().unwrap_or_else(|| data[largest_weight_index(weights)].clone());
    karcher_weights(data, weights, |b: &SigMatrix<T>| SigChart::new(b.clone()), start, opts)
}

/// `‖Σ φ_i log(L̄⁻¹ L_i)‖_F`.
pub fn karcher_residual<T: Real>(data: &[SigMatrix<T>], weights: &[T], base: &SigMatrix<T>) -> Result<T> {
    use crate::chart::{chart_tangents, weighted_sum, Tangent};
    let chart = SigChart::new(base.clone())?;
    let tangents = chart_tangents(&chart, data)?;
    Ok(Tangent::norm(&weighted_sum(&tangents, weights)))
}

/// Value, gradient and Hessian of the fixed-base interpolant at `x`.
pub fn interpolate_sig_derivatives<T: Real, S: ShapeFunctions<T>>(
    data: &[SigMatrix<T>],
    shapes: &S,
    x: &[T],
    base: &SigMatrix<T>,
) -> Result<Jet<T>> {
    let problem = InterpolationProblem::new(data, shapes, x)?;
    let chart = SigChart::new(base.clone())?;
    interpolate_jet(&problem, &chart, true)
}
