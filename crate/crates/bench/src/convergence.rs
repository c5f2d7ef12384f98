//! L² and H¹ interpolation errors over a grid, and dyadic convergence orders.

use rayon::prelude::*;
use serde::Serialize;
use symspace::quadrature::gauss_legendre_unit;
use symspace::{KarcherOptions64, ShapeSet64};

use crate::error::Result;
use crate::grid::{Element, GridSpec, Region, Scheme};
use crate::metric::MetricField;
use crate::output::{sig15, sig15_opt};
use crate::scheme::ElementInterpolant;

/// Tensor Gauss–Legendre rule on `[0,1]³`: points and weights summing to one.
pub fn tensor_rule(q: usize) -> Vec<([f64; 3], f64)> {
    let (x, w) = gauss_legendre_unit::<f64>(q);
    let mut out = Vec::with_capacity(q * q * q);
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                out.push(([x[i], x[j], x[k]], w[i] * w[j] * w[k]));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementDiagnostics {
    pub index: [usize; 3],
    #[serde(serialize_with = "sig15")]
    pub l2_squared: f64,
    #[serde(serialize_with = "sig15")]
    pub h1_squared: f64,
    /// Largest number of fixed-point iterations at any quadrature point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub karcher_iterations: Option<usize>,
    /// Chart-domain failure; the element then contributes nothing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Errors of one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridErrors {
    pub n: usize,
    #[serde(serialize_with = "sig15")]
    pub l2_error: f64,
    #[serde(serialize_with = "sig15")]
    pub h1_error: f64,
    pub failed_elements: usize,
    pub elements: Vec<ElementDiagnostics>,
}

/// Errors on a single element: squared L² and H¹-seminorm contributions.
pub fn element_errors(
    metric: &MetricField,
    element: &Element,
    shapes: &ShapeSet64,
    scheme: Scheme,
    rule: &[([f64; 3], f64)],
    karcher: KarcherOptions64,
) -> Result<ElementDiagnostics> {
    let mut diag = ElementDiagnostics {
        index: element.index,
        l2_squared: 0.0,
        h1_squared: 0.0,
        karcher_iterations: (scheme == Scheme::Karcher).then_some(0),
        failure: None,
    };
    let interp = match ElementInterpolant::from_metric(scheme, shapes, metric, element, karcher) {
        Ok(i) => i,
        Err(crate::BenchError::Core(e)) => {
            diag.failure = Some(e.to_string());
            return Ok(diag);
        }
        Err(e) => return Err(e),
    };
    let vol = element.volume();
    let (mut l2, mut h1) = (0.0, 0.0);
    for (s, w) in rule {
        let xi = element.point(s);
        let exact = metric.eval(xi)?;
        let grad = metric.gradient(xi)?;
        let sample = match interp.sample(s, true) {
            Ok(v) => v,
            Err(e) => {
                diag.failure = Some(e.to_string());
                diag.l2_squared = 0.0;
                diag.h1_squared = 0.0;
                return Ok(diag);
            }
        };
        if let Some(it) = diag.karcher_iterations.as_mut() {
            *it = (*it).max(sample.iterations);
        }
        l2 += w * (&sample.value - exact).norm_squared();
        // ∂/∂t: the interpolant does not depend on t and the metric is static.
        let mut d = grad[0].norm_squared();
        for a in 0..3 {
            d += (&sample.gradient[a] / element.h[a] - &grad[a + 1]).norm_squared();
        }
        h1 += w * d;
    }
    diag.l2_squared = l2 * vol;
    diag.h1_squared = h1 * vol;
    Ok(diag)
}

/// Interpolation errors of `metric` on one grid. Elements run in parallel;
/// their contributions are summed in lexicographic order.
pub fn run_grid(spec: &GridSpec, metric: &MetricField, karcher: KarcherOptions64) -> Result<GridErrors> {
    spec.validate(true)?;
    metric.check_region(spec.region.lo, spec.region.hi)?;
    let shapes = ShapeSet64::tensor_lagrange(3, spec.degree)?;
    let rule = tensor_rule(spec.quad);
    let elements = (0..spec.element_count())
        .into_par_iter()
        .map(|e| element_errors(metric, &spec.element(e), &shapes, spec.scheme, &rule, karcher))
        .collect::<Result<Vec<_>>>()?;
    let (mut l2, mut h1, mut failed) = (0.0, 0.0, 0);
    for d in &elements {
        l2 += d.l2_squared;
        h1 += d.h1_squared;
        failed += usize::from(d.failure.is_some());
    }
    Ok(GridErrors { n: spec.n, l2_error: l2.sqrt(), h1_error: h1.sqrt(), failed_elements: failed, elements })
}

/// A sequence of grids for each polynomial degree.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub region: Region,
    pub ns: Vec<usize>,
    pub degrees: Vec<usize>,
    pub scheme: Scheme,
    pub quad: usize,
    pub karcher: KarcherOptions64,
}

impl ConvergenceStudy {
    pub fn new(ns: Vec<usize>, degrees: Vec<usize>, scheme: Scheme, quad: usize) -> Self {
        ConvergenceStudy { region: Region::default(), ns, degrees, scheme, quad, karcher: KarcherOptions64::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    #[serde(serialize_with = "sig15")]
    pub l2_error: f64,
    #[serde(serialize_with = "sig15_opt")]
    pub l2_order: Option<f64>,
    #[serde(serialize_with = "sig15")]
    pub h1_error: f64,
    #[serde(serialize_with = "sig15_opt")]
    pub h1_order: Option<f64>,
    pub failed_elements: usize,
    pub elements: Vec<ElementDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBlock {
    pub degree: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl DegreeBlock {
    /// Orders of the last row, i.e. of the finest dyadic pair.
    pub fn finest_orders(&self) -> (Option<f64>, Option<f64>) {
        self.rows.last().map_or((None, None), |r| (r.l2_order, r.h1_order))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub scheme: String,
    pub quad: usize,
    pub blocks: Vec<DegreeBlock>,
}

impl ConvergenceReport {
    pub fn failed_elements(&self) -> usize {
        self.blocks.iter().flat_map(|b| &b.rows).map(|r| r.failed_elements).sum()
    }

    pub fn block(&self, degree: usize) -> Option<&DegreeBlock> {
        self.blocks.iter().find(|b| b.degree == degree)
    }
}

/// `log₂(coarse / fine)`, defined only when the fine grid halves the coarse one.
pub fn dyadic_order(n_coarse: usize, e_coarse: f64, n_fine: usize, e_fine: f64) -> Option<f64> {
    (n_fine == 2 * n_coarse && e_coarse > 0.0 && e_fine > 0.0).then(|| (e_coarse / e_fine).log2())
}

pub fn run_convergence(study: &ConvergenceStudy, metric: &MetricField) -> Result<ConvergenceReport> {
    let mut blocks = Vec::with_capacity(study.degrees.len());
    for &degree in &study.degrees {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(study.ns.len());
        for &n in &study.ns {
            let spec = GridSpec { region: study.region, n, degree, scheme: study.scheme, quad: study.quad };
            let g = run_grid(&spec, metric, study.karcher)?;
            let (l2_order, h1_order) = match rows.last() {
                Some(prev) => (
                    dyadic_order(prev.n, prev.l2_error, n, g.l2_error),
                    dyadic_order(prev.n, prev.h1_error, n, g.h1_error),
                ),
                None => (None, None),
            };
            rows.push(ConvergenceRow {
                n,
                l2_error: g.l2_error,
                l2_order,
                h1_error: g.h1_error,
                h1_order,
                failed_elements: g.failed_elements,
                elements: g.elements,
            });
        }
        blocks.push(DegreeBlock { degree, rows });
    }
    Ok(ConvergenceReport {
        metric: metric.name().to_string(),
        radius: match metric {
            MetricField::Schwarzschild { radius } => Some(*radius),
            MetricField::Sin2 => None,
        },
        scheme: study.scheme.name().to_string(),
        quad: study.quad,
        blocks,
    })
}
