//! Uniform hexahedral grids over a spatial box at a frozen time.

use std::fmt;
use std::str::FromStr;

use crate::error::{BenchError, Result};

/// `{t} × [lo, hi]` with a spatial box in `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub t: f64,
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Default for Region {
    /// `{0} × [2,3]³`.
    fn default() -> Self {
        Region { t: 0.0, lo: [2.0; 3], hi: [3.0; 3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Fixed-base exponential-chart interpolant with base `J`.
    Symspace,
    /// Entrywise Lagrange interpolation.
    Componentwise,
    /// Fixed-point (weighted Riemannian mean) interpolant.
    Karcher,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Symspace => "symspace",
            Scheme::Componentwise => "componentwise",
            Scheme::Karcher => "karcher",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "symspace" => Ok(Scheme::Symspace),
            "componentwise" => Ok(Scheme::Componentwise),
            "karcher" => Ok(Scheme::Karcher),
            _ => Err(format!("unknown scheme '{s}' (expected symspace, componentwise or karcher)")),
        }
    }
}

/// One run: `n³` cubes of degree-`degree` elements, `quad` Gauss points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub region: Region,
    pub n: usize,
    pub degree: usize,
    pub scheme: Scheme,
    pub quad: usize,
}

impl GridSpec {
    pub fn new(n: usize, degree: usize, scheme: Scheme, quad: usize) -> Self {
        GridSpec { region: Region::default(), n, degree, scheme, quad }
    }

    /// Checks the grid itself; `for_errors` additionally requires enough
    /// quadrature points to integrate the error of a degree-`k` interpolant.
    pub fn validate(&self, for_errors: bool) -> Result<()> {
        if self.n == 0 {
            return Err(BenchError::InvalidSpec("N must be at least 1".into()));
        }
        if !(1..=2).contains(&self.degree) {
            return Err(BenchError::InvalidSpec(format!("degree {} not in {{1, 2}}", self.degree)));
        }
        if self.quad == 0 {
            return Err(BenchError::InvalidSpec("need at least one quadrature point".into()));
        }
        if for_errors && self.quad < self.degree + 1 {
            return Err(BenchError::InvalidSpec(format!(
                "{} quadrature points per axis cannot resolve degree {} errors",
                self.quad, self.degree
            )));
        }
        let r = &self.region;
        if (0..3).any(|a| !(r.hi[a] > r.lo[a])) {
            return Err(BenchError::InvalidSpec("empty region".into()));
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Edge lengths of one element.
    pub fn spacing(&self) -> [f64; 3] {
        let r = &self.region;
        std::array::from_fn(|a| (r.hi[a] - r.lo[a]) / self.n as f64)
    }

    /// Element `e` in lexicographic order, `z` fastest.
    pub fn element(&self, e: usize) -> Element {
        let n = self.n;
        let index = [e / (n * n), (e / n) % n, e % n];
        let h = self.spacing();
        let origin = std::array::from_fn(|a| self.region.lo[a] + index[a] as f64 * h[a]);
        Element { index, origin, h, t: self.region.t }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.element_count()).map(|e| self.element(e))
    }
}

/// Axis-aligned cube `origin + h·[0,1]³` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub index: [usize; 3],
    pub origin: [f64; 3],
    pub h: [f64; 3],
    pub t: f64,
}

impl Element {
    /// Spacetime point of the reference coordinate `s ∈ [0,1]³`.
    pub fn point(&self, s: &[f64]) -> [f64; 4] {
        [
            self.t,
            self.origin[0] + self.h[0] * s[0],
            self.origin[1] + self.h[1] * s[1],
            self.origin[2] + self.h[2] * s[2],
        ]
    }

    pub fn volume(&self) -> f64 {
        self.h.iter().product()
    }
}
