//! Partition functions and shape polynomials.
//!
//! - [`euler_z1`]: one-dimensional sum over `N`-particle states graded by node count
//! - [`c_coefficient`]: the polynomials `(1-q^N)...(1-q^(N-k+1)) / (1-q^k)`
//! - [`shape_polynomial`]: `P_d(N,q)` (fermions) or `B_d(N,q)` (bosons)
//! - [`level_dimension`]: dimension of the graded level, from `P · E^d`
//!
//! Everything is exact integer arithmetic.

mod series;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use series::GradedQPolynomial;

/// Particle statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Fermion => "fermion",
            Statistics::Boson => "boson",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fermion" | "fermions" | "f" => Ok(Statistics::Fermion),
            "boson" | "bosons" | "b" => Ok(Statistics::Boson),
            other => Err(Error::invalid(format!("unknown statistics {other:?}"))),
        }
    }
}

/// Node count of the one-dimensional ground state: `N(N-1)/2` for fermions,
/// zero for bosons.
pub fn ground_shift(n: usize, stat: Statistics) -> u32 {
    match stat {
        Statistics::Fermion => (n * n.saturating_sub(1) / 2) as u32,
        Statistics::Boson => 0,
    }
}

/// `prod_{k=1}^{N} 1/(1-q^k)` to degree `truncation`: the generating function
/// of Euler-boson monomials on one axis.
pub fn euler_series(n: usize, truncation: u32) -> GradedQPolynomial {
    (1..=n as u32).fold(GradedQPolynomial::one().truncated(truncation), |acc, k| {
        acc.mul(&GradedQPolynomial::geometric(k, truncation))
    })
}

/// One-dimensional `N`-particle sum over states, `q^{E_gs} prod_k 1/(1-q^k)`,
/// truncated at `truncation`. `N = 0` gives the constant series 1.
pub fn euler_z1(n: usize, truncation: u32, stat: Statistics) -> GradedQPolynomial {
    if n == 0 {
        return GradedQPolynomial::one().truncated(truncation);
    }
    GradedQPolynomial::monomial(ground_shift(n, stat), BigInt::one())
        .truncated(truncation)
        .mul(&euler_series(n, truncation))
}

fn one_minus_q_pow(k: u32) -> GradedQPolynomial {
    GradedQPolynomial::from_terms([(0, 1), (k, -1)])
}

/// `C^N_k(q) = (1-q^N)(1-q^{N-1})...(1-q^{N-k+1}) / (1-q^k)`, `1 <= k <= N`.
///
/// The division is carried out exactly; a remainder is reported as a
/// consistency failure.
pub fn c_coefficient(n: usize, k: usize) -> Result<GradedQPolynomial> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "C^N_k needs 1 <= k <= N, got N = {n}, k = {k}"
        )));
    }
    let numerator = ((n - k + 1)..=n)
        .fold(GradedQPolynomial::one(), |acc, j| acc.mul(&one_minus_q_pow(j as u32)));
    numerator.div_exact(&one_minus_q_pow(k as u32))
}

/// Shape polynomial by the recursion
/// `N P(N) = sum_k s_k [C^N_k]^d P(N-k)` with `s_k = (-1)^{k+1}` for fermions
/// and `s_k = 1` for bosons, starting from `P(0) = 1`.
pub fn shape_polynomial(n: usize, d: usize, stat: Statistics) -> Result<GradedQPolynomial> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut table = vec![GradedQPolynomial::one()];
    for m in 1..=n {
        let mut sum = GradedQPolynomial::zero();
        for k in 1..=m {
            let term = c_coefficient(m, k)?.pow(d as u32).mul(&table[m - k]);
            let negative = stat == Statistics::Fermion && k % 2 == 0;
            sum = if negative { sum.sub(&term) } else { sum.add(&term) };
        }
        let p = sum.div_exact_scalar(&BigInt::from(m))?;
        if !p.has_nonnegative_coefficients() {
            return Err(Error::consistency(format!(
                "shape polynomial for N = {m}, d = {d} has a negative coefficient: {p}"
            )));
        }
        table.push(p);
    }
    Ok(table.pop().expect("table holds P(0)"))
}

/// `N!^{d-1}`.
pub fn total_shape_count(n: usize, d: usize) -> BigInt {
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    fact.pow(d.saturating_sub(1) as u32)
}

/// Number of independent `N`-particle states of total degree `grade`: the
/// coefficient of `q^grade` in `shape_polynomial · euler_series^d`.
pub fn level_dimension(n: usize, d: usize, grade: u32, stat: Statistics) -> Result<BigInt> {
    Ok(graded_dimension_series(n, d, grade, stat)?.coeff(grade))
}

/// `Z_d = P_d(N,q) (prod_k 1/(1-q^k))^d` truncated at `truncation`.
pub fn graded_dimension_series(
    n: usize,
    d: usize,
    truncation: u32,
    stat: Statistics,
) -> Result<GradedQPolynomial> {
    let shapes = shape_polynomial(n, d, stat)?;
    Ok(shapes.truncated(truncation).mul(&euler_series(n, truncation).pow(d as u32)))
}
