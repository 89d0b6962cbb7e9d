//! Exact computation of Łojasiewicz exponents for weighted homogeneous
//! isolated hypersurface singularities.
//!
//! The crate is organised around a small exact polynomial kernel
//! ([`poly`]) over the rationals. On top of it sit weight inference
//! ([`weights`]), the closed-form exponent engine ([`engine`]), a
//! Buchberger-based Milnor number oracle ([`groebner`]), exact and
//! floating-point verification backends ([`verify`]) and deformation
//! analysis ([`deform`]).
//!
//! ```
//! use lojex::poly::parse_with_inferred_variables;
//! use lojex::weights::WeightSystem;
//! use lojex::engine::{lojasiewicz_exponent, IsolationCertificate};
//! use num_rational::BigRational;
//!
//! let (f, _) = parse_with_inferred_variables("z1*z4 + z1^10 + z2^5 + z3^5").unwrap();
//! let ws = WeightSystem::new(10, vec![1, 2, 2, 9]).unwrap();
//! let report = lojasiewicz_exponent(&f, &ws, &IsolationCertificate::Assumed).unwrap();
//! assert_eq!(report.exponent, BigRational::from_integer(4.into()));
//! assert_eq!(report.sufficiency_degree, 5);
//! ```

pub mod deform;
pub mod engine;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod verify;
pub mod weights;

mod extended;

pub use extended::Extended;

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Builds an exact rational from a numerator and a nonzero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
