//! Exact computer algebra for star products, positive functionals and their
//! GNS representations over formal power series.
//!
//! Everything in this crate is exact: scalars are (truncatable) formal
//! Newton-Puiseux series in `λ` with Gaussian-rational coefficients,
//! observables are polynomials (optionally with a Gaussian envelope) over
//! those scalars, and every integral is a Gaussian moment kept as a rational
//! multiple of a half-integer power of `π`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod convergence;
pub mod dynamics;
pub mod error;
pub mod formal_scalar;
pub mod functionals;
pub mod gns;
pub mod observables;
pub mod star;

pub use error::{Error, Result};
pub use formal_scalar::{AbsValue, CRational, FormalScalar, Order, Rational, Valuation};
pub use observables::{EnvelopePoly, Frame, FrameKind, Monomial, PiScalar, PiSeries, Poly};
pub use star::StarKind;
