//! Exact computation of shape polynomials and shape generators for `N`
//! identical particles in `d` dimensions.
//!
//! Wave functions are represented abstractly as polynomials in formal powers
//! `t_i^k u_i^l ...`, one `d`-plet of variables per particle. Fermionic
//! states are Slater determinants of such formal orbitals, bosonic states are
//! permanents. Every antisymmetric (symmetric) polynomial is a combination of
//! finitely many *shapes* with coefficients that are polynomials in the
//! elementary symmetric functions of each axis separately (Euler bosons).
//!
//! Modules, bottom up:
//!
//! - [`counting`]: graded q-series, Euler's partition function and the shape
//!   polynomial recursion.
//! - [`polycore`]: exact multivariate polynomials, Slater states, Euler-boson
//!   factors and level enumeration.
//! - [`schur`]: Schur functions from tableaux and from determinant ratios.
//! - [`deflation`]: expansion of a polynomial over the Slater basis of its
//!   level by leading-monomial elimination.
//! - [`shapegen`]: the level-by-level construction of all shapes.
//! - [`realize`]: Hermite-oscillator and box realizations, one- and
//!   two-particle densities.
//! - [`coulomb`]: closed-form Coulomb matrix elements between Hermite
//!   function products and many-body expectation values.
//! - [`format`]: JSON encodings shared by the command-line tool.

pub mod coulomb;
pub mod counting;
pub mod deflation;
mod error;
pub mod format;
pub mod polycore;
pub mod realize;
pub mod schur;
pub mod shapegen;

pub use counting::{GradedQPolynomial, Statistics};
pub use error::{Error, Result};
pub use polycore::{ExactPolynomial, Monomial, OrbitalVector, SlaterState};
