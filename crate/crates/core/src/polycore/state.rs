use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ExactPolynomial, Monomial, OrbitalVector};
use crate::counting::Statistics;
use crate::error::{Error, Result};

/// Slater determinant (fermions) or permanent (bosons) of formal orbitals.
///
/// Orbitals are kept in descending canonical order, which fixes the sign of
/// the determinant: the monomial assigning orbital `i` to particle `i` has
/// coefficient `+1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlaterState {
    orbitals: Vec<OrbitalVector>,
    statistics: Statistics,
}

impl SlaterState {
    /// Sorts the orbitals into canonical order. Fermionic states reject
    /// repeated orbitals.
    pub fn new(orbitals: Vec<OrbitalVector>, statistics: Statistics) -> Result<Self> {
        Self::canonicalize(orbitals, statistics).map(|(s, _)| s)
    }

    /// Like [`SlaterState::new`], also returning the sign of the sorting
    /// permutation (always `+1` for bosons).
    pub fn canonicalize(mut orbitals: Vec<OrbitalVector>, statistics: Statistics) -> Result<(Self, i8)> {
        if orbitals.is_empty() {
            return Err(Error::invalid("a state needs at least one particle"));
        }
        let d = orbitals[0].dim();
        if orbitals.iter().any(|o| o.dim() != d) {
            return Err(Error::DimensionMismatch("orbitals of different dimension".into()));
        }
        // insertion sort, descending, tracking transpositions
        let mut sign = 1i8;
        for i in 1..orbitals.len() {
            let mut j = i;
            while j > 0 && orbitals[j - 1] < orbitals[j] {
                orbitals.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if statistics == Statistics::Fermion {
            if let Some(w) = orbitals.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!(
                    "repeated orbital {} in a fermionic state",
                    w[0]
                )));
            }
        }
        let sign = if statistics == Statistics::Boson { 1 } else { sign };
        Ok((SlaterState { orbitals, statistics }, sign))
    }

    pub fn orbitals(&self) -> &[OrbitalVector] {
        &self.orbitals
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn particle_count(&self) -> usize {
        self.orbitals.len()
    }

    pub fn dim(&self) -> usize {
        self.orbitals[0].dim()
    }

    pub fn grade(&self) -> u32 {
        self.orbitals.iter().map(OrbitalVector::degree).sum()
    }

    /// Per-axis total exponent.
    pub fn axis_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim()];
        for o in &self.orbitals {
            for (a, &e) in o.exponents().iter().enumerate() {
                out[a] += e as u32;
            }
        }
        out
    }

    /// The monomial giving orbital `i` to particle `i`; its coefficient in the
    /// expansion is `+1` for determinants.
    pub fn diagonal_monomial(&self) -> Monomial {
        Monomial::from_rows(&self.orbitals)
    }

    /// Determinant or permanent expanded over all `N!` permutations.
    pub fn expand(&self) -> ExactPolynomial {
        let n = self.particle_count();
        let d = self.dim();
        let mut p = ExactPolynomial::zero(n, d);
        for (perm, sign) in permutations(n) {
            // particle perm[i] carries orbital i
            let mut rows: Vec<&OrbitalVector> = vec![&self.orbitals[0]; n];
            for (i, &pi) in perm.iter().enumerate() {
                rows[pi] = &self.orbitals[i];
            }
            let c = match self.statistics {
                Statistics::Fermion => sign as i64,
                Statistics::Boson => 1,
            };
            p.add_term(Monomial::from_rows(rows), BigRational::from_integer(BigInt::from(c)));
        }
        p
    }
}

/// Expands a fermionic determinant or bosonic permanent.
pub fn expand_state(s: &SlaterState) -> ExactPolynomial {
    s.expand()
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i8)>) {
        let n = used.len();
        if prefix.len() == n {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| prefix[i] > prefix[j])
                .count();
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

impl fmt::Debug for SlaterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SlaterState {
    /// `|(1,0),(0,1),(0,0)|` for determinants, `+(..)+` for permanents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = match self.statistics {
            Statistics::Fermion => "|",
            Statistics::Boson => "+",
        };
        write!(f, "{bar}")?;
        for (i, o) in self.orbitals.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "{bar}")
    }
}
