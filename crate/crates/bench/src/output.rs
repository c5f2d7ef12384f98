//! CSV and JSON rendering. Floats carry 15 significant digits.

use serde::Serializer;

use crate::census::Census;
use crate::convergence::ConvergenceReport;

/// `x` in scientific notation with 15 significant digits.
pub fn fmt15(x: f64) -> String {
    format!("{x:.14e}")
}

fn round15(x: f64) -> f64 {
    if x.is_finite() {
        fmt15(x).parse().unwrap_or(x)
    } else {
        x
    }
}

pub(crate) fn sig15<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round15(*x))
}

pub(crate) fn sig15_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round15(*v)),
        None => s.serialize_none(),
    }
}

/// One block per degree:
///
/// ```text
/// # degree 1
/// N,L2_error,L2_order,H1_error,H1_order
/// 2,1.23...e-3,,4.56...e-2,
/// ```
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let opt = |o: Option<f64>| o.map(fmt15).unwrap_or_default();
    let mut out = String::new();
    for (i, block) in report.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("# degree {}\n", block.degree));
        out.push_str("N,L2_error,L2_order,H1_error,H1_order\n");
        for r in &block.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n,
                fmt15(r.l2_error),
                opt(r.l2_order),
                fmt15(r.h1_error),
                opt(r.h1_order)
            ));
        }
    }
    out
}

/// `signature,count` rows, one block per census.
pub fn census_csv(censuses: &[Census]) -> String {
    let mut out = String::new();
    for (i, c) in censuses.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if censuses.len() > 1 {
            out.push_str(&format!("# N {}\n", c.n));
        }
        out.push_str("signature,count\n");
        for (label, count) in &c.counts {
            out.push_str(&format!("{label},{count}\n"));
        }
    }
    out
}
