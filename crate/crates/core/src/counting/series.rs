use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial or truncated power series in the grading variable `q` with
/// arbitrary-precision integer coefficients.
///
/// A series carries a truncation degree: coefficients above it are unknown
/// and never stored. Combining two series keeps the smaller truncation.
/// `truncation() == None` means the object is an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedQPolynomial {
    coeffs: BTreeMap<u32, BigInt>,
    truncation: Option<u32>,
}

fn min_truncation(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl GradedQPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// `c q^degree`.
    pub fn monomial(degree: u32, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    /// Exact polynomial from `(degree, coefficient)` pairs; repeated degrees add.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (deg, c) in terms {
            p.add_term(deg, c.into());
        }
        p
    }

    /// Exact polynomial whose coefficient list starts at degree `lowest`.
    pub fn from_coefficient_list<C: Into<BigInt> + Clone>(lowest: u32, coeffs: &[C]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (lowest + i as u32, c.clone().into())),
        )
    }

    /// Truncated geometric series `1/(1 - q^step)`.
    pub fn geometric(step: u32, truncation: u32) -> Self {
        assert!(step > 0, "geometric series needs a positive step");
        let mut p = Self::from_terms((0..=truncation / step).map(|j| (j * step, 1)));
        p.truncation = Some(truncation);
        p
    }

    fn add_term(&mut self, degree: u32, c: BigInt) {
        if let Some(t) = self.truncation {
            if degree > t {
                return;
            }
        }
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    /// Returns the series truncated at `degree` (keeping an existing lower truncation).
    pub fn truncated(mut self, degree: u32) -> Self {
        let t = min_truncation(self.truncation, Some(degree));
        self.truncation = t;
        if let Some(t) = t {
            self.coeffs.retain(|&k, _| k <= t);
        }
        self
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: u32) -> BigInt {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigInt)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn highest_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficients between the lowest and highest nonzero degree, inclusive.
    /// The zero polynomial gives `(0, [])`.
    pub fn coefficient_list(&self) -> (u32, Vec<BigInt>) {
        match (self.lowest_degree(), self.highest_degree()) {
            (Some(lo), Some(hi)) => (lo, (lo..=hi).map(|k| self.coeff(k)).collect()),
            _ => (0, Vec::new()),
        }
    }

    /// Reverses the coefficient list between the lowest and highest nonzero
    /// degree, keeping that degree window in place.
    pub fn reversed(&self) -> Self {
        let (lo, list) = self.coefficient_list();
        let rev: Vec<BigInt> = list.into_iter().rev().collect();
        let mut p = Self::from_coefficient_list(lo, &rev);
        p.truncation = self.truncation;
        p
    }

    pub fn is_palindromic(&self) -> bool {
        let (_, list) = self.coefficient_list();
        list.iter().eq(list.iter().rev())
    }

    /// Value at `q = 1`; only meaningful for exact polynomials.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.truncation = min_truncation(self.truncation, other.truncation);
        if let Some(t) = out.truncation {
            out.coeffs.retain(|&k, _| k <= t);
        }
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            truncation: self.truncation,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            truncation: self.truncation,
        };
        for (&k, a) in &self.coeffs {
            out.add_term(k, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            truncation: min_truncation(self.truncation, other.truncation),
        };
        for (&i, a) in &self.coeffs {
            if out.truncation.is_some_and(|t| i > t) {
                break;
            }
            for (&j, b) in &other.coeffs {
                if out.truncation.is_some_and(|t| i + j > t) {
                    break;
                }
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one();
        acc.truncation = self.truncation;
        for _ in 0..exponent {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact polynomial division; a nonzero remainder is an error.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if !self.is_exact() || !divisor.is_exact() {
            return Err(Error::invalid("exact division needs exact polynomials"));
        }
        let (d_lo, d_hi) = match (divisor.lowest_degree(), divisor.highest_degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(Error::invalid("division by the zero polynomial")),
        };
        let lead = divisor.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(hi) = rem.highest_degree() {
            if hi < d_hi {
                break;
            }
            let c = rem.coeff(hi);
            let (q, r) = c.div_rem(&lead);
            if !r.is_zero() {
                return Err(Error::consistency(format!(
                    "non-integral quotient coefficient {c}/{lead} at degree {hi}"
                )));
            }
            let shift = hi - d_hi;
            quot.add_term(shift, q.clone());
            for (&k, b) in &divisor.coeffs {
                rem.add_term(k + shift, -(b * &q));
            }
        }
        if !rem.is_zero() {
            return Err(Error::consistency(format!(
                "nonzero remainder {rem} in division by {divisor} (lowest degree {d_lo})"
            )));
        }
        Ok(quot)
    }

    /// Divides every coefficient by `n`, requiring exact divisibility.
    pub fn div_exact_scalar(&self, n: &BigInt) -> Result<Self> {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            truncation: self.truncation,
        };
        for (&k, c) in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::consistency(format!(
                    "coefficient {c} of q^{k} is not divisible by {n}"
                )));
            }
            out.add_term(k, q);
        }
        Ok(out)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }
}

impl fmt::Display for GradedQPolynomial {
    /// Ascending degree order, e.g. `q^2 + 4q^3 + q^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (&k, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        if let Some(t) = self.truncation {
            write!(f, " + O(q^{})", t + 1)?;
        }
        Ok(())
    }
}
