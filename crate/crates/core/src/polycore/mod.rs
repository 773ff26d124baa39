//! Exact polynomial algebra over formal powers.
//!
//! A monomial is an `N x d` exponent matrix (particle `i`, axis `a`), with
//! axes named `t, u, v, ...`. Slater determinants and permanents expand into
//! [`ExactPolynomial`]s with integer coefficients; Euler bosons are
//! elementary symmetric functions on a single axis, raised to powers by
//! plethysm.

mod basis;
mod euler;
mod monomial;
mod orbital;
mod polynomial;
mod state;

pub use basis::enumerate_basis;
#[allow(unused_imports)]
pub(crate) use euler::combinations;
pub use euler::{elementary_symmetric, enumerate_euler_monomials, euler_power, vandermonde, EulerMonomial};
pub use monomial::{axis_name, Monomial, MonomialDisplay};
pub use orbital::{canonical_order, OrbitalVector};
pub use polynomial::{ExactPolynomial, PolynomialDisplay};
pub use state::{expand_state, permutations, SlaterState};
