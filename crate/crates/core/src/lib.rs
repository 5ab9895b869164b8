//! Exact construction of q-deforming maps for the sl(2)-covariant
//! two-mode Weyl and Clifford algebras.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`twist`] solves, order by order in `h`, for an algebra isomorphism
//!    `phi_h: U_h(sl2) -> U(sl2)[[h]]` together with a twist `F` that turns
//!    the cocommutative coproduct into the quantum one.
//! 2. [`fock`] builds truncated two-mode Fock spaces, ladder operators and the
//!    Jordan-Schwinger map `sigma`.
//! 3. [`deform`] dresses the undeformed ladder operators with the legs of `F`
//!    and the invariant factor `u v^{-1}`, producing the deformed generators.
//! 4. [`verify`] checks every identity with exact rational residuals.
//!
//! Everything is computed over [`scalar::HSeries`], truncated power series in
//! `h` with arbitrary-precision rational coefficients.

pub mod config;
pub mod deform;
pub mod error;
pub mod fock;
pub mod hopf;
pub mod linsolve;
pub mod scalar;
pub mod twist;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{HSeries, Q};
