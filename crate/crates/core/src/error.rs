use thiserror::Error;

/// Every failure the kernels can report.
///
/// [`Error::kind`] returns a short stable tag for each variant, used by the
/// benchmark harness in its diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exp-overflow: matrix exponential overflowed (1-norm {norm:e})")]
    ExpOverflow { norm: f64 },

    #[error("log-branch: eigenvalue {re:e}{im:+e}i lies on the closed negative real axis")]
    LogBranch { re: f64, im: f64 },

    #[error("singular: matrix is singular to working precision")]
    Singular,

    #[error("shape: {0}")]
    Shape(String),

    #[error("not-finite: input contains NaN or infinite entries")]
    NotFinite,

    #[error("no-convergence: {what} did not converge in {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("not-symmetric: asymmetry {defect:e} exceeds tolerance")]
    NotSymmetric { defect: f64 },

    #[error("degenerate-signature: eigenvalue {eigenvalue:e} is too close to zero")]
    DegenerateSignature { eigenvalue: f64 },

    #[error("signature-mismatch: expected ({expected_pos},{expected_neg}), found ({found_pos},{found_neg})")]
    SignatureMismatch { expected_pos: usize, expected_neg: usize, found_pos: usize, found_neg: usize },

    #[error("unsupported-basis: dimension {dim}, degree {degree}")]
    UnsupportedBasis { dim: usize, degree: usize },

    #[error("not-in-lts: X J - J X^T has norm {defect:e}")]
    NotInLts { defect: f64 },

    #[error("outside-chart: datum {index} has eigenvalue {re:e}{im:+e}i on the negative real axis")]
    OutsideChart { index: usize, re: f64, im: f64 },

    #[error("gpd-domain: A J A^T J has eigenvalue {re:e}{im:+e}i on the negative real axis")]
    GpdDomain { re: f64, im: f64 },

    #[error("karcher-divergence: residual {residual:e} after {iterations} iterations")]
    KarcherDivergence { residual: f64, iterations: usize },

    #[error("not-horizontal: base^T Z has norm {defect:e}")]
    NotHorizontal { defect: f64 },

    #[error("not-orthonormal: A^T A - I has max entry {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("cut-locus: datum {index} has condition number {condition:e} against the base")]
    CutLocus { index: usize, condition: f64 },

    #[error("rank: smallest singular value ratio {ratio:e} below threshold")]
    Rank { ratio: f64 },

    #[error("parse: line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ExpOverflow { .. } => "exp-overflow",
            Error::LogBranch { .. } => "log-branch",
            Error::Singular => "singular",
            Error::Shape(_) => "shape",
            Error::NotFinite => "not-finite",
            Error::NoConvergence { .. } => "no-convergence",
            Error::NotSymmetric { .. } => "not-symmetric",
            Error::DegenerateSignature { .. } => "degenerate-signature",
            Error::SignatureMismatch { .. } => "signature-mismatch",
            Error::UnsupportedBasis { .. } => "unsupported-basis",
            Error::NotInLts { .. } => "not-in-lts",
            Error::OutsideChart { .. } => "outside-chart",
            Error::GpdDomain { .. } => "gpd-domain",
            Error::KarcherDivergence { .. } => "karcher-divergence",
            Error::NotHorizontal { .. } => "not-horizontal",
            Error::NotOrthonormal { .. } => "not-orthonormal",
            Error::CutLocus { .. } => "cut-locus",
            Error::Rank { .. } => "rank",
            Error::Parse { .. } => "parse",
        }
    }

    /// Re-tags chart-domain errors with the index of the offending datum.
    pub fn at_index(self, i: usize) -> Self {
        match self {
            Error::OutsideChart { re, im, .. } => Error::OutsideChart { index: i, re, im },
            Error::LogBranch { re, im } => Error::OutsideChart { index: i, re, im },
            Error::CutLocus { condition, .. } => Error::CutLocus { index: i, condition },
            other => other,
        }
    }

    /// True for errors raised because an input left the domain of a chart
    /// (as opposed to malformed input).
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::LogBranch { .. }
                | Error::Singular
                | Error::OutsideChart { .. }
                | Error::GpdDomain { .. }
                | Error::CutLocus { .. }
                | Error::KarcherDivergence { .. }
                | Error::DegenerateSignature { .. }
                | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
