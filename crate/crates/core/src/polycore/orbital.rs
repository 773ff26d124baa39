use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Formal-power exponents of one particle, one entry per axis.
///
/// Ordered canonically: by total degree first, then lexicographically on the
/// entries. This order fixes the row order, and therefore the sign, of every
/// Slater determinant in the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrbitalVector(SmallVec<[u8; 4]>);

impl OrbitalVector {
    pub fn new(exponents: &[u8]) -> Self {
        OrbitalVector(SmallVec::from_slice(exponents))
    }

    pub fn zero(d: usize) -> Self {
        OrbitalVector(SmallVec::from_elem(0, d))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    /// All orbitals of dimension `d` with total degree exactly `degree`, in
    /// ascending canonical order.
    pub fn all_of_degree(d: usize, degree: u32) -> Vec<OrbitalVector> {
        fn rec(prefix: &mut Vec<u8>, axes_left: usize, remaining: u32, out: &mut Vec<OrbitalVector>) {
            if axes_left == 1 {
                prefix.push(remaining as u8);
                out.push(OrbitalVector::new(prefix));
                prefix.pop();
                return;
            }
            for e in 0..=remaining {
                prefix.push(e as u8);
                rec(prefix, axes_left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if d == 0 {
            if degree == 0 {
                out.push(OrbitalVector::new(&[]));
            }
            return out;
        }
        rec(&mut Vec::with_capacity(d), d, degree, &mut out);
        out
    }
}

/// Canonical comparison of two orbitals of equal dimension.
pub fn canonical_order(a: &OrbitalVector, b: &OrbitalVector) -> Result<Ordering> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "orbitals of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.cmp(b))
}

impl Ord for OrbitalVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for OrbitalVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for OrbitalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for OrbitalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
