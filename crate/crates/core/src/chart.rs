//! Interpolation through a chart of a symmetric space.
//!
//! A chart pairs a base point with maps between the space and a vector space
//! of tangent coordinates. Data are pulled back to tangents, combined with
//! the shape-function weights, and pushed forward again:
//!
//! ```text
//! I u(x) = from_tangent( Σ_i φ_i(x) · to_tangent(u_i) )
//! ```
//!
//! Charts whose `from_tangent` is a fixed linear action applied to a matrix
//! exponential ([`ExpChart`]) also get exact first and second derivatives of
//! the interpolant through block-matrix exponentials. The fixed-point
//! (Karcher) variant re-centres the chart at the current interpolant until
//! the weighted tangent sum vanishes.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matfun::{d2exp, dexp, mat_exp};
use crate::scalar::Real;
use crate::shapefn::{ShapeEval, ShapeFunctions};

/// Tangent coordinates: a finite-dimensional real vector space.
pub trait Tangent<T: Real>: Clone {
    fn scaled(&self, w: T) -> Self;
    fn add_scaled(&mut self, w: T, other: &Self);
    fn norm(&self) -> T;
}

impl<T: Real> Tangent<T> for DMatrix<T> {
    fn scaled(&self, w: T) -> Self {
        self * w
    }

    fn add_scaled(&mut self, w: T, other: &Self) {
        self.zip_apply(other, |a, b| *a += w * b);
    }

    fn norm(&self) -> T {
        DMatrix::norm(self)
    }
}

/// A chart `(to_tangent, from_tangent)` centred at a base point.
///
/// Implementations should satisfy `from_tangent(0) = base` and
/// `to_tangent(from_tangent(v)) = v` within the chart's radius.
pub trait Chart<T: Real> {
    type Point: Clone;
    type Tangent: Tangent<T>;

    fn base(&self) -> &Self::Point;
    fn to_tangent(&self, p: &Self::Point) -> Result<Self::Tangent>;
    fn from_tangent(&self, v: &Self::Tangent) -> Result<Self::Point>;
}

/// A matrix chart with `from_tangent(P) = realize(exp(P))` for a linear map
/// `realize`.
pub trait ExpChart<T: Real>: Chart<T, Tangent = DMatrix<T>> {
    /// Applies the base-point action to an exponential-level matrix.
    fn realize(&self, m: &DMatrix<T>) -> DMatrix<T>;
}

/// Data, shape functions and a query point.
#[derive(Debug, Clone, Copy)]
pub struct InterpolationProblem<'a, T: Real, P, S: ShapeFunctions<T>> {
    pub data: &'a [P],
    pub shapes: &'a S,
    pub x: &'a [T],
}

impl<'a, T: Real, P, S: ShapeFunctions<T>> InterpolationProblem<'a, T, P, S> {
    pub fn new(data: &'a [P], shapes: &'a S, x: &'a [T]) -> Result<Self> {
        if data.len() != shapes.count() {
            return Err(Error::Shape(format!("{} data values for {} shape functions", data.len(), shapes.count())));
        }
        if x.len() != shapes.dim() {
            return Err(Error::Shape(format!(
                "query point has dimension {}, shape functions expect {}",
                x.len(),
                shapes.dim()
            )));
        }
        Ok(InterpolationProblem { data, shapes, x })
    }

    pub fn eval(&self) -> ShapeEval<T> {
        self.shapes.eval(self.x)
    }
}

/// Pulls every datum back to tangent coordinates, tagging errors with the
/// datum's index.
pub fn chart_tangents<T: Real, C: Chart<T>>(chart: &C, data: &[C::Point]) -> Result<Vec<C::Tangent>> {
    data.iter().enumerate().map(|(i, u)| chart.to_tangent(u).map_err(|e| e.at_index(i))).collect()
}

/// `Σ_i w_i v_i` accumulated in index order.
pub fn weighted_sum<T: Real, V: Tangent<T>>(tangents: &[V], weights: &[T]) -> V {
    assert_eq!(tangents.len(), weights.len(), "one weight per tangent");
    assert!(!tangents.is_empty(), "weighted sum of no tangents");
    let mut acc = tangents[0].scaled(weights[0]);
    for (v, &w) in tangents.iter().zip(weights).skip(1) {
        acc.add_scaled(w, v);
    }
    acc
}

/// Interpolant with explicit weights `φ_i(x)`.
pub fn interpolate_weights<T: Real, C: Chart<T>>(chart: &C, data: &[C::Point], weights: &[T]) -> Result<C::Point> {
    if data.len() != weights.len() || data.is_empty() {
        return Err(Error::Shape(format!("{} data values for {} weights", data.len(), weights.len())));
    }
    let tangents = chart_tangents(chart, data)?;
    chart.from_tangent(&weighted_sum(&tangents, weights))
}

pub fn interpolate<T: Real, C: Chart<T>, S: ShapeFunctions<T>>(
    problem: &InterpolationProblem<'_, T, C::Point, S>,
    chart: &C,
) -> Result<C::Point> {
    interpolate_weights(chart, problem.data, &problem.eval().values)
}

/// Ambient value and derivatives of an exponential-chart interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T: Real> {
    pub value: DMatrix<T>,
    /// `first[j] = ∂/∂x_j`.
    pub first: Vec<DMatrix<T>>,
    /// `second[j][k] = ∂²/∂x_j∂x_k`; empty unless requested.
    pub second: Vec<Vec<DMatrix<T>>>,
}

/// Evaluates the interpolant and its derivatives from precomputed tangents.
///
/// With `P(x) = Σ φ_i(x) V_i`, the first derivative is
/// `realize(dexp_P ∂_j P)` and the second is `realize` of the `(1,4)` block
/// of the 4×4 block exponential built from `P, ∂_j P, ∂_k P, ∂_jk P`.
pub fn jet_from_tangents<T: Real, C: ExpChart<T>>(
    chart: &C,
    tangents: &[DMatrix<T>],
    eval: &ShapeEval<T>,
    with_second: bool,
) -> Result<Jet<T>> {
    let d = eval.dim();
    let p = weighted_sum(tangents, &eval.values);
    let value = chart.realize(&mat_exp(&p)?);
    let dp: Vec<DMatrix<T>> = (0..d).map(|j| weighted_sum(tangents, &eval.gradient_weights(j))).collect();
    let first = dp.iter().map(|dpj| Ok(chart.realize(&dexp(&p, dpj)?))).collect::<Result<Vec<_>>>()?;
    let mut second = Vec::new();
    if with_second {
        for j in 0..d {
            let mut row = Vec::with_capacity(d);
            for k in 0..d {
                let w = weighted_sum(tangents, &eval.hessian_weights(j, k));
                row.push(chart.realize(&d2exp(&p, &dp[j], &dp[k], &w)?));
            }
            second.push(row);
        }
    }
    Ok(Jet { value, first, second })
}

/// Value plus all first (and optionally second) derivatives.
pub fn interpolate_jet<T: Real, C: ExpChart<T>, S: ShapeFunctions<T>>(
    problem: &InterpolationProblem<'_, T, C::Point, S>,
    chart: &C,
    with_second: bool,
) -> Result<Jet<T>> {
    let tangents = chart_tangents(chart, problem.data)?;
    jet_from_tangents(chart, &tangents, &problem.eval(), with_second)
}

/// Ambient derivative `∂ I u / ∂x_j`.
pub fn interpolate_derivative<T: Real, C: ExpChart<T>, S: ShapeFunctions<T>>(
    problem: &InterpolationProblem<'_, T, C::Point, S>,
    chart: &C,
    j: usize,
) -> Result<DMatrix<T>> {
    let eval = problem.eval();
    check_direction(j, eval.dim())?;
    let tangents = chart_tangents(chart, problem.data)?;
    let p = weighted_sum(&tangents, &eval.values);
    let dp = weighted_sum(&tangents, &eval.gradient_weights(j));
    Ok(chart.realize(&dexp(&p, &dp)?))
}

/// Ambient second derivative `∂² I u / ∂x_j ∂x_k`.
pub fn interpolate_second_derivative<T: Real, C: ExpChart<T>, S: ShapeFunctions<T>>(
    problem: &InterpolationProblem<'_, T, C::Point, S>,
    chart: &C,
    j: usize,
    k: usize,
) -> Result<DMatrix<T>> {
    let eval = problem.eval();
    check_direction(j, eval.dim())?;
    check_direction(k, eval.dim())?;
    let tangents = chart_tangents(chart, problem.data)?;
    let p = weighted_sum(&tangents, &eval.values);
    let y = weighted_sum(&tangents, &eval.gradient_weights(j));
    let z = weighted_sum(&tangents, &eval.gradient_weights(k));
    let w = weighted_sum(&tangents, &eval.hessian_weights(j, k));
    Ok(chart.realize(&d2exp(&p, &y, &z, &w)?))
}

fn check_direction(j: usize, d: usize) -> Result<()> {
    if j >= d {
        return Err(Error::Shape(format!("direction {j} out of range for dimension {d}")));
    }
    Ok(())
}

/// Stopping rule for the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarcherOptions<T> {
    /// Bound on the norm of the weighted tangent sum at the returned base.
    pub tol: T,
    pub max_iter: usize,
    /// Return the last iterate instead of failing when `max_iter` is hit.
    /// With `max_iter = 1` this is exactly the fixed-base interpolant.
    pub truncate: bool,
}

impl<T: Real> Default for KarcherOptions<T> {
    fn default() -> Self {
        KarcherOptions { tol: T::lit(1e-12), max_iter: 100, truncate: false }
    }
}

impl<T: Real> KarcherOptions<T> {
    pub fn truncated(max_iter: usize) -> Self {
        KarcherOptions { max_iter, truncate: true, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KarcherOutcome<P, T> {
    pub point: P,
    /// Number of re-centring steps taken.
    pub iterations: usize,
    /// `‖Σ φ_i to_tangent(u_i)‖` in the chart based at `point`.
    pub residual: T,
    pub converged: bool,
}

/// Index of the largest weight (first one on ties).
pub fn largest_weight_index<T: Real>(weights: &[T]) -> usize {
    weights
        .iter()
        .enumerate()
        .fold((0, None::<T>), |(bi, bw), (i, &w)| match bw {
            Some(b) if b >= w => (bi, Some(b)),
            _ => (i, Some(w)),
        })
        .0
}

/// Fixed-point iteration `base ← from_tangent_base(Σ φ_i to_tangent_base(u_i))`
/// until the weighted tangent sum is below `opts.tol`.
pub fn karcher_weights<T, C, F>(
    data: &[C::Point],
    weights: &[T],
    chart_at: F,
    initial: C::Point,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<C::Point, T>>
where
    T: Real,
    C: Chart<T>,
    F: Fn(&C::Point) -> Result<C>,
{
    if data.len() != weights.len() || data.is_empty() {
        return Err(Error::Shape(format!("{} data values for {} weights", data.len(), weights.len())));
    }
    let mut base = initial;
    let mut iterations = 0usize;
    loop {
        let chart = chart_at(&base)?;
        let tangents = chart_tangents(&chart, data)?;
        let sum = weighted_sum(&tangents, weights);
        let residual = sum.norm();
        if residual <= opts.tol {
            return Ok(KarcherOutcome { point: base, iterations, residual, converged: true });
        }
        if iterations >= opts.max_iter {
            if opts.truncate {
                return Ok(KarcherOutcome { point: base, iterations, residual, converged: false });
            }
            return Err(Error::KarcherDivergence { residual: residual.as_f64(), iterations });
        }
        base = chart.from_tangent(&sum)?;
        iterations += 1;
    }
}

/// Karcher interpolant at the problem's query point. Without an explicit
/// initial base, starts from the datum carrying the largest weight.
pub fn interpolate_karcher<T, C, F, S>(
    problem: &InterpolationProblem<'_, T, C::Point, S>,
    chart_at: F,
    initial: Option<C::Point>,
    opts: KarcherOptions<T>,
) -> Result<KarcherOutcome<C::Point, T>>
where
    T: Real,
    C: Chart<T>,
    F: Fn(&C::Point) -> Result<C>,
    S: ShapeFunctions<T>,
{
    let weights = problem.eval().values;
    let start = initial.unwrap_or_else(|| problem.data[largest_weight_index(&weights)].clone());
    karcher_weights(problem.data, &weights, chart_at, start, opts)
}
