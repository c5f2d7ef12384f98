//! Analytic metric fields on `(t, x, y, z)` together with their gradients.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use symspace::{Mat, SigMatrix64, SignatureForm};

use crate::error::{BenchError, Result};

/// A static 4×4 Lorentzian metric field with `J = diag(−1, 1, 1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricField {
    /// Schwarzschild in Cartesian coordinates, valid for `r > radius`.
    Schwarzschild { radius: f64 },
    /// The `sin²` field whose componentwise linear interpolant loses its
    /// signature on coarse grids.
    Sin2,
}

impl MetricField {
    pub fn schwarzschild(radius: f64) -> Self {
        MetricField::Schwarzschild { radius }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricField::Schwarzschild { .. } => "schwarzschild",
            MetricField::Sin2 => "sin2",
        }
    }

    pub fn form(&self) -> SignatureForm {
        SignatureForm::lorentzian()
    }

    /// Metric matrix at `xi = (t, x, y, z)`.
    pub fn eval(&self, xi: [f64; 4]) -> Result<Mat> {
        match *self {
            MetricField::Schwarzschild { radius } => {
                let v = Vector3::new(xi[1], xi[2], xi[3]);
                let r = v.norm();
                check_horizon(r, radius)?;
                let g = radius / ((r - radius) * r * r);
                let spatial = Matrix3::identity() + v * v.transpose() * g;
                let mut l = Mat::zeros(4, 4);
                l[(0, 0)] = -(1.0 - radius / r);
                l.view_mut((1, 1), (3, 3)).copy_from(&spatial);
                Ok(l)
            }
            MetricField::Sin2 => {
                let x = xi[1];
                let (s1, s2) = ((PI * x).sin(), (2.0 * PI * x).sin());
                let mut l = Mat::identity(4, 4);
                l[(0, 0)] = -6.0 * s2 * s2 + 3.0 * s1 * s1;
                l[(0, 1)] = 3.0 * (2.0 * PI * x).cos();
                l[(1, 0)] = l[(0, 1)];
                l[(1, 1)] = 2.0 * s2 * s2 + 2.0 * s1 * s1;
                Ok(l)
            }
        }
    }

    /// `[∂L/∂t, ∂L/∂x, ∂L/∂y, ∂L/∂z]`. Both fields are static, so the first
    /// entry is zero.
    pub fn gradient(&self, xi: [f64; 4]) -> Result<[Mat; 4]> {
        let mut out: [Mat; 4] = std::array::from_fn(|_| Mat::zeros(4, 4));
        match *self {
            MetricField::Schwarzschild { radius } => {
                let v = Vector3::new(xi[1], xi[2], xi[3]);
                let r = v.norm();
                check_horizon(r, radius)?;
                let g = radius / ((r - radius) * r * r);
                // g'(r) / r, so that ∂_a g = dg * x_a.
                let dg = -radius * (3.0 * r - 2.0 * radius) / ((r - radius).powi(2) * r.powi(4));
                let vvt = v * v.transpose();
                for a in 0..3 {
                    let e = Vector3::ith(a, 1.0);
                    let d = vvt * (dg * v[a]) + (e * v.transpose() + v * e.transpose()) * g;
                    let m = &mut out[a + 1];
                    m[(0, 0)] = -radius * v[a] / r.powi(3);
                    m.view_mut((1, 1), (3, 3)).copy_from(&d);
                }
            }
            MetricField::Sin2 => {
                let x = xi[1];
                let m = &mut out[1];
                m[(0, 0)] = -12.0 * PI * (4.0 * PI * x).sin() + 3.0 * PI * (2.0 * PI * x).sin();
                m[(0, 1)] = -6.0 * PI * (2.0 * PI * x).sin();
                m[(1, 0)] = m[(0, 1)];
                m[(1, 1)] = 4.0 * PI * (4.0 * PI * x).sin() + 2.0 * PI * (2.0 * PI * x).sin();
            }
        }
        Ok(out)
    }

    pub fn eval_sig(&self, xi: [f64; 4]) -> Result<SigMatrix64> {
        Ok(SigMatrix64::new(self.eval(xi)?, self.form())?)
    }

    /// Fails with a horizon error if the metric is undefined somewhere on the
    /// box `lo..=hi` (spatial coordinates).
    pub fn check_region(&self, lo: [f64; 3], hi: [f64; 3]) -> Result<()> {
        if let MetricField::Schwarzschild { radius } = *self {
            // Closest point of the box to the origin.
            let r = (0..3)
                .map(|a| {
                    let c = 0f64.clamp(lo[a], hi[a]);
                    c * c
                })
                .sum::<f64>()
                .sqrt();
            check_horizon(r, radius)?;
        }
        Ok(())
    }
}

fn check_horizon(r: f64, radius: f64) -> Result<()> {
    if r > radius {
        Ok(())
    } else {
        Err(BenchError::Horizon { r, radius })
    }
}

impl fmt::Display for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Metric kind as named on the command line; the radius is supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Schwarzschild,
    Sin2,
}

impl MetricKind {
    pub fn with_radius(self, radius: f64) -> MetricField {
        match self {
            MetricKind::Schwarzschild => MetricField::Schwarzschild { radius },
            MetricKind::Sin2 => MetricField::Sin2,
        }
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "schwarzschild" => Ok(MetricKind::Schwarzschild),
            "sin2" => Ok(MetricKind::Sin2),
            _ => Err(format!("unknown metric '{s}' (expected schwarzschild or sin2)")),
        }
    }
}
