//! Exact-rational calculus of q-Gaussian processes.
//!
//! The crate builds the q-deformed Fock space over a rational-Gram inner
//! product space, applies creation/annihilation/field operators and Wick
//! products symbolically, and evaluates mixed moments and conditional
//! moments in exact `BigRational` arithmetic. On top of that sit two
//! feasibility tests for whether a given covariance can come from a
//! *classical* (commuting) process: an extended Bell-type inequality on the
//! covariance entries, and positivity of an explicit conditional-variance
//! quadratic. A small floating-point module cross-checks the exact layer
//! through Gaussian quadrature for the q-Hermite orthogonality measure.
//!
//! Layering, bottom to top:
//!
//! * [`qcore`] — scalars, q-integers, q-factorials, monic q-Hermite
//!   polynomials;
//! * [`hilbert`] — Gram-presented inner product spaces, exact projections,
//!   covariance specifications;
//! * [`fock`] — tensor states, the q-symmetrized inner product, creation and
//!   annihilation;
//! * [`moments`] — operator words, Wick products, vacuum expectations,
//!   conditional moments, and the closed forms they are checked against;
//! * [`bell`] — the feasibility verdict: Bell inequality plus
//!   conditional-variance minimization, and the region scans built on them;
//! * [`quadrature`] — floating-point Gauss rules for the orthogonality
//!   measure, used as an independent numeric cross-check;
//! * [`cli`] — the JSON-driven command layer behind the `qgauss` binary.

pub mod bell;
pub mod cli;
pub mod error;
pub mod fock;
pub mod hilbert;
pub mod moments;
pub mod qcore;
pub mod quadrature;

pub use error::{Error, Result};
pub use hilbert::{covariance_space, inner, project, CovarianceSpec, GramSpace, Vector};
pub use qcore::{hermite, q_factorial, q_int, Polynomial, QParam, Scalar};
pub use quadrature::{check_orthogonality, gauss_rule, QuadratureRule};
