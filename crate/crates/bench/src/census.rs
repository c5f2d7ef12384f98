//! Signature of the interpolant at every quadrature point of a grid.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use symspace::{sym_signature, KarcherOptions64, ShapeSet64};

use crate::convergence::tensor_rule;
use crate::error::Result;
use crate::grid::GridSpec;
use crate::metric::MetricField;
use crate::scheme::ElementInterpolant;

/// Label for points whose interpolant is numerically singular.
pub const DEGENERATE: &str = "degenerate";
/// Label for points where the interpolant could not be evaluated.
pub const FAILED: &str = "failed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub metric: String,
    pub scheme: String,
    pub n: usize,
    pub quad: usize,
    /// `(positive,negative)` → number of quadrature points.
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
}

impl Census {
    pub fn count(&self, label: &str) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }
}

pub fn run_signature_census(spec: &GridSpec, metric: &MetricField, karcher: KarcherOptions64) -> Result<Census> {
    spec.validate(false)?;
    metric.check_region(spec.region.lo, spec.region.hi)?;
    let shapes = ShapeSet64::tensor_lagrange(3, spec.degree)?;
    let rule = tensor_rule(spec.quad);
    let labels = (0..spec.element_count())
        .into_par_iter()
        .map(|e| {
            let element = spec.element(e);
            let interp = match ElementInterpolant::from_metric(spec.scheme, &shapes, metric, &element, karcher) {
                Ok(i) => i,
                Err(crate::BenchError::Core(_)) => return Ok(vec![FAILED.to_string(); rule.len()]),
                Err(e) => return Err(e),
            };
            Ok(rule
                .iter()
                .map(|(s, _)| match interp.value(s) {
                    Ok(v) => match sym_signature(&v) {
                        Ok(sig) => sig.to_string(),
                        Err(_) => DEGENERATE.to_string(),
                    },
                    Err(_) => FAILED.to_string(),
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    for label in labels.into_iter().flatten() {
        *counts.entry(label).or_insert(0) += 1;
    }
    Ok(Census {
        metric: metric.name().to_string(),
        scheme: spec.scheme.name().to_string(),
        n: spec.n,
        quad: spec.quad,
        total: spec.element_count() * rule.len(),
        counts,
    })
}
