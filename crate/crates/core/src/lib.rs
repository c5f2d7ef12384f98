//! Structure-preserving interpolation on symmetric spaces.
//!
//! Values are pulled back to a vector space through a chart built from the
//! matrix exponential, interpolated there with ordinary shape functions, and
//! pushed forward again. The interpolant therefore stays on the space by
//! construction: interpolated Lorentzian metrics keep signature `(3,1)`,
//! interpolated SPD matrices stay positive definite, interpolated subspaces
//! keep orthonormal bases.
//!
//! * [`matfun`]: matrix exponential, principal logarithm and square root,
//!   derivatives of `exp`, thin SVD, signature.
//! * [`shapefn`]: tensor-product Lagrange shape functions.
//! * [`chart`]: the generic interpolant, its derivatives, and the fixed-point
//!   (Karcher) variant.
//! * [`sigspace`]: symmetric matrices of fixed signature.
//! * [`grassmann`]: the Grassmannian, at `O(np²)` cost.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`.
//!
//! ```
//! use symspace::{interpolate_sig, SigMatrix64, SignatureForm, ShapeSet64};
//! use nalgebra::{DMatrix, DVector};
//!
//! let form = SignatureForm::lorentzian();
//! let a = SigMatrix64::new(DMatrix::from_diagonal(&DVector::from_row_slice(&[-1.0, 1.0, 1.0, 1.0])), form).unwrap();
//! let b = SigMatrix64::new(DMatrix::from_diagonal(&DVector::from_row_slice(&[-2.0, 1.0, 3.0, 1.0])), form).unwrap();
//! let shapes = ShapeSet64::tensor_lagrange(1, 1).unwrap();
//! let mid = interpolate_sig(&[a, b], &shapes, &[0.5], &SigMatrix64::identity_form(form)).unwrap();
//! assert!((mid.matrix()[(0, 0)] + 2f64.sqrt()).abs() < 1e-12);
//! ```

pub mod chart;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod matfun;
pub mod quadrature;
pub mod scalar;
pub mod shapefn;
pub mod sigspace;

pub use chart::{
    interpolate, interpolate_derivative, interpolate_jet, interpolate_karcher, interpolate_second_derivative, Chart,
    ExpChart, InterpolationProblem, Jet, KarcherOptions, KarcherOutcome, Tangent,
};
pub use error::{Error, Result};
pub use grassmann::{
    grass_exp, grass_log, interpolate_grass, interpolate_grass_karcher, orthonormalize, subspace_distance, GrassChart,
    GrassPoint, GrassTangent,
};
pub use matfun::{
    d2exp, dexp, mat_exp, mat_log_principal, mat_sqrt_principal, spectrum_check, sym_signature, thin_svd, Signature,
    SpectrumCheck, ThinSvd,
};
pub use scalar::Real;
pub use shapefn::{FixedWeights, ShapeEval, ShapeFunctions, ShapeSet};
pub use sigspace::{
    f_inv, f_map, gpd_factorize, interpolate_sig, interpolate_sig_derivatives, interpolate_sig_karcher, PolarFactors,
    SigChart, SigMatrix, SignatureForm, TangentSym,
};

pub type Mat = nalgebra::DMatrix<f64>;
pub type ShapeSet64 = ShapeSet<f64>;
pub type SigMatrix64 = SigMatrix<f64>;
pub type TangentSym64 = TangentSym<f64>;
pub type SigChart64 = SigChart<f64>;
pub type GrassPoint64 = GrassPoint<f64>;
pub type GrassTangent64 = GrassTangent<f64>;
pub type GrassChart64 = GrassChart<f64>;
pub type KarcherOptions64 = KarcherOptions<f64>;
