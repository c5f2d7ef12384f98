//! Per-element interpolants of nodal metric values.

use symspace::chart::{chart_tangents, jet_from_tangents, largest_weight_index, weighted_sum};
use symspace::sigspace::karcher_sig_weights;
use symspace::{ExpChart, KarcherOptions64, Mat, ShapeFunctions, ShapeSet64, SigChart64, SigMatrix64};

use crate::grid::{Element, Scheme};
use crate::metric::MetricField;

/// Reference-coordinate step for the central differences of the Karcher scheme.
pub const KARCHER_FD_STEP: f64 = 1e-5;

/// Interpolant value and its reference-coordinate gradient at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub value: Mat,
    /// `∂/∂s_a` for the three reference axes; empty when not requested.
    pub gradient: Vec<Mat>,
    /// Fixed-point iterations spent (Karcher scheme only).
    pub iterations: usize,
}

/// Nodal data of one element plus whatever the scheme precomputes from it.
pub struct ElementInterpolant<'a> {
    scheme: Scheme,
    shapes: &'a ShapeSet64,
    data: Vec<SigMatrix64>,
    chart: SigChart64,
    /// `log(J L_i)` at every node (symspace scheme only).
    tangents: Vec<Mat>,
    karcher: KarcherOptions64,
}

impl<'a> ElementInterpolant<'a> {
    pub fn new(
        scheme: Scheme,
        shapes: &'a ShapeSet64,
        data: Vec<SigMatrix64>,
        karcher: KarcherOptions64,
    ) -> symspace::Result<Self> {
        if data.len() != shapes.count() {
            return Err(symspace::Error::Shape(format!(
                "{} nodal values for {} shape functions",
                data.len(),
                shapes.count()
            )));
        }
        let form = data[0].form();
        let chart = SigChart64::at_identity(form);
        let tangents = match scheme {
            Scheme::Symspace => chart_tangents(&chart, &data)?,
            _ => Vec::new(),
        };
        Ok(ElementInterpolant { scheme, shapes, data, chart, tangents, karcher })
    }

    /// Samples `metric` at the element's nodes.
    pub fn from_metric(
        scheme: Scheme,
        shapes: &'a ShapeSet64,
        metric: &MetricField,
        element: &Element,
        karcher: KarcherOptions64,
    ) -> crate::Result<Self> {
        let data =
            shapes.nodes().iter().map(|s| metric.eval_sig(element.point(s))).collect::<crate::Result<Vec<_>>>()?;
        Ok(Self::new(scheme, shapes, data, karcher)?)
    }

    pub fn data(&self) -> &[SigMatrix64] {
        &self.data
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn value(&self, s: &[f64]) -> symspace::Result<Mat> {
        Ok(self.sample(s, false)?.value)
    }

    pub fn sample(&self, s: &[f64], with_gradient: bool) -> symspace::Result<Sample> {
        let eval = self.shapes.eval(s);
        match self.scheme {
            Scheme::Symspace => {
                let jet = jet_from_tangents(&self.chart, &self.tangents, &eval, false)?;
                // First derivatives come with the jet; drop them if unwanted.
                let gradient = if with_gradient { jet.first } else { Vec::new() };
                Ok(Sample { value: jet.value, gradient, iterations: 0 })
            }
            Scheme::Componentwise => {
                let mats: Vec<Mat> = self.data.iter().map(|l| l.matrix().clone()).collect();
                let value = weighted_sum(&mats, &eval.values);
                let gradient = if with_gradient {
                    (0..eval.dim()).map(|a| weighted_sum(&mats, &eval.gradient_weights(a))).collect()
                } else {
                    Vec::new()
                };
                Ok(Sample { value, gradient, iterations: 0 })
            }
            Scheme::Karcher => {
                let start = &self.data[largest_weight_index(&eval.values)];
                let out = karcher_sig_weights(&self.data, &eval.values, Some(start), self.karcher)?;
                let mut iterations = out.iterations;
                let mut gradient = Vec::new();
                if with_gradient {
                    for a in 0..s.len() {
                        let mut plus = s.to_vec();
                        let mut minus = s.to_vec();
                        plus[a] += KARCHER_FD_STEP;
                        minus[a] -= KARCHER_FD_STEP;
                        let wp = self.shapes.eval(&plus).values;
                        let wm = self.shapes.eval(&minus).values;
                        let up = karcher_sig_weights(&self.data, &wp, Some(&out.point), self.karcher)?;
                        let um = karcher_sig_weights(&self.data, &wm, Some(&out.point), self.karcher)?;
                        iterations += up.iterations + um.iterations;
                        gradient.push((up.point.matrix() - um.point.matrix()) / (2.0 * KARCHER_FD_STEP));
                    }
                }
                Ok(Sample { value: out.point.into_matrix(), gradient, iterations })
            }
        }
    }

    /// The fixed-base chart at `J` used by the symspace scheme.
    pub fn chart(&self) -> &impl ExpChart<f64> {
        &self.chart
    }
}
