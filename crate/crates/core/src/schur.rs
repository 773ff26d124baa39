//! Schur functions in `N` variables of a single axis.
//!
//! Two independent constructions are provided: the tableau sum
//! ([`schur_ssyt`]) and the ratio of a generalized Vandermonde determinant to
//! the Vandermonde determinant ([`schur_ratio`]). [`factor_1d`] writes any
//! one-dimensional Slater determinant as `s_lambda` times the Vandermonde
//! determinant.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::Statistics;
use crate::error::{Error, Result};
use crate::polycore::{vandermonde, ExactPolynomial, Monomial, OrbitalVector, SlaterState};

/// Integer partition: non-increasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Trailing zeros are dropped; the remaining parts must be non-increasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::invalid(format!("{parts:?} is not a partition")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// `1^k`.
    pub fn column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// All partitions of `weight` with at most `max_parts` parts, in reverse
    /// lexicographic order.
    pub fn all(weight: u32, max_parts: usize) -> Vec<Partition> {
        fn rec(left: u32, max_part: u32, max_parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            if cur.len() == max_parts {
                return;
            }
            for p in (1..=left.min(max_part)).rev() {
                cur.push(p);
                rec(left - p, p, max_parts, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(weight, weight, max_parts, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Schur polynomial as a sum over semistandard Young tableaux of shape
/// `lambda` filled with `1..=N`. More than `N` parts gives zero.
pub fn schur_ssyt(lambda: &Partition, n: usize) -> ExactPolynomial {
    let mut out = ExactPolynomial::zero(n, 1);
    if lambda.len() > n {
        return out;
    }
    let shape = lambda.parts();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
        .collect();
    // tableau[r][c] in 1..=n
    let mut tableau: Vec<Vec<u8>> = shape.iter().map(|&len| vec![0; len as usize]).collect();
    let mut counts = vec![0u8; n];
    let one = BigRational::one();

    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        shape: &[u32],
        n: usize,
        tableau: &mut [Vec<u8>],
        counts: &mut [u8],
        out: &mut ExactPolynomial,
        one: &BigRational,
    ) {
        if idx == cells.len() {
            out.add_term(Monomial::from_flat(counts), one.clone());
            return;
        }
        let (r, c) = cells[idx];
        let left = if c > 0 { tableau[r][c - 1] } else { 1 };
        let above = if r > 0 { tableau[r - 1][c] + 1 } else { 1 };
        // cells below in this column need strictly larger entries
        let below = shape[r + 1..].iter().take_while(|&&len| len as usize > c).count();
        let hi = n - below;
        for v in left.max(above) as usize..=hi {
            tableau[r][c] = v as u8;
            counts[v - 1] += 1;
            fill(idx + 1, cells, shape, n, tableau, counts, out, one);
            counts[v - 1] -= 1;
        }
        tableau[r][c] = 0;
    }

    fill(0, &cells, shape, n, &mut tableau, &mut counts, &mut out, &one);
    out
}

/// Fermionic one-axis state with orbitals `lambda_i + N - i`.
fn bialternant_state(lambda: &Partition, n: usize) -> Result<SlaterState> {
    let orbitals = (0..n)
        .map(|i| {
            let e = lambda.part(i) as usize + n - 1 - i;
            u8::try_from(e)
                .map(|e| OrbitalVector::new(&[e]))
                .map_err(|_| Error::invalid("partition part too large"))
        })
        .collect::<Result<Vec<_>>>()?;
    SlaterState::new(orbitals, Statistics::Fermion)
}

/// Schur polynomial as the exact quotient of the generalized Vandermonde
/// determinant by the Vandermonde determinant.
pub fn schur_ratio(lambda: &Partition, n: usize) -> Result<ExactPolynomial> {
    if lambda.len() > n {
        return Ok(ExactPolynomial::zero(n, 1));
    }
    let numerator = bialternant_state(lambda, n)?.expand();
    numerator.div_exact(&vandermonde(n, 1, 0)?)
}

/// Partition `lambda` with `state = s_lambda * Delta`, after checking the
/// factorization exactly.
pub fn factor_1d(state: &SlaterState) -> Result<Partition> {
    if state.statistics() != Statistics::Fermion || state.dim() != 1 {
        return Err(Error::invalid("factor_1d needs a one-dimensional fermionic state"));
    }
    let n = state.particle_count();
    let parts: Vec<u32> = state
        .orbitals()
        .iter()
        .enumerate()
        .map(|(i, o)| o.degree() - (n - 1 - i) as u32)
        .collect();
    let lambda = Partition::new(parts)?;
    let product = schur_ssyt(&lambda, n).mul(&vandermonde(n, 1, 0)?)?;
    if product != state.expand() {
        return Err(Error::consistency(format!(
            "{state} is not s_{lambda} times the Vandermonde determinant"
        )));
    }
    Ok(lambda)
}

/// Expansion of a symmetric one-axis polynomial in Schur functions, by
/// repeatedly removing the Schur function of the leading exponent.
pub fn expand_in_schur_basis(p: &ExactPolynomial) -> Result<Vec<(Partition, BigRational)>> {
    if p.dim() != 1 {
        return Err(Error::invalid("Schur expansion needs a one-axis polynomial"));
    }
    let n = p.particle_count();
    let mut rest = p.clone();
    let mut out = Vec::new();
    while let Some((m, c)) = rest.leading_term() {
        let parts: Vec<u32> = m.exponents().iter().map(|&e| e as u32).collect();
        let lambda = Partition::new(parts).map_err(|_| {
            Error::NotInSpan(format!("leading monomial {} is not dominant; input not symmetric", m.display(1)))
        })?;
        let c = c.clone();
        rest.add_scaled(&schur_ssyt(&lambda, n), &-c.clone())?;
        out.push((lambda, c));
    }
    Ok(out)
}

/// Number of semistandard tableaux, i.e. `s_lambda(1, ..., 1)`.
pub fn tableau_count(lambda: &Partition, n: usize) -> BigInt {
    schur_ssyt(lambda, n)
        .terms()
        .map(|(_, c)| c.to_integer())
        .fold(BigInt::zero(), |a, b| a + b)
}
