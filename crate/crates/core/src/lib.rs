//! Locally extremal polynomials for Sendov's conjecture of the form
//! `P(z) = int_beta^z (w - a)^(n-3) (w^2 + b w + c) dw`.
//!
//! The crate builds such polynomials by solving a square nonlinear system
//! ([`constructor`]), certifies them against eight sufficient conditions
//! ([`certifier`]) using root sensitivities ([`variational`]), and probes
//! their neighborhoods for counterexamples ([`probe`]).

pub mod assignment;
pub mod candidate;
pub mod certifier;
pub mod constructor;
pub mod derivcheck;
pub mod error;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod probe;
pub mod reference;
pub mod roots;
pub mod spectrum;
pub mod variational;

pub use num_complex::Complex64;

pub use candidate::{build_candidate, CandidateParams};
pub use certifier::{certify_all, PropertyId, PropertyReport, Tolerances};
pub use error::{Error, Result};
pub use poly::ComplexPoly;
pub use roots::find_roots;
pub use spectrum::{d_of, spectrum, Spectrum};
pub use variational::{RootSensitivity, VariationalSystem};
