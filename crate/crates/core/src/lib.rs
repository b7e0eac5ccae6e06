//! Oscillatory integrals `J(lambda) = \int a(x) exp(i lambda phi(x)) dx` over the
//! plane with quartic homogeneous principal part.
//!
//! Modules:
//!
//! * [`poly`]: sparse bivariate polynomials, Taylor data, `C^N` norms.
//! * [`classify`]: roots of binary quartics on the circle, normal forms,
//!   oscillation type, versality ranks.
//! * [`center`]: Newton solve for the shift that kills the mixed cubic terms.
//! * [`quad`]: adaptive Gauss-Legendre oracle in one and two dimensions.
//! * [`dyadic`]: quasi-homogeneous cutoffs and ring decomposition.
//! * [`verify`]: perturbation sampling, decay fits, sweeps.

pub mod center;
pub mod classify;
pub mod dyadic;
pub mod phase;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod verify;

pub use num_complex::Complex;
pub use num_rational::BigRational;

pub use phase::{DifferentiationFailure, FnPhase, Phase1, Phase2, Poly1, SumPhase};
pub use poly::{Axis, BivarPoly, CompiledPoly, Square, TaylorData};
pub use scalar::{Coeff, Real};

/// Double precision polynomial.
pub type Poly = BivarPoly<f64>;
/// Polynomial with exact rational coefficients.
pub type ExactPoly = BivarPoly<BigRational>;
/// Single precision polynomial.
pub type Poly32 = BivarPoly<f32>;
