use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::Monomial;
use crate::error::{Error, Result};

/// Finitely supported map from monomials in `N x d` formal variables to exact
/// rationals. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    n: usize,
    d: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl ExactPolynomial {
    pub fn zero(n: usize, d: usize) -> Self {
        ExactPolynomial {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, d: usize) -> Self {
        Self::from_monomial(n, d, Monomial::one(n, d), BigRational::one())
    }

    pub fn from_monomial(n: usize, d: usize, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(n, d);
        p.add_term(m, c);
        p
    }

    /// Sums the given terms; monomials must have `n * d` entries.
    pub fn from_terms<I>(n: usize, d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(n, d);
        for (m, c) in terms {
            if m.len() != n * d {
                return Err(Error::DimensionMismatch(format!(
                    "monomial with {} exponents in a polynomial with N = {n}, d = {d}",
                    m.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// The single variable of particle `particle` on axis `axis`.
    pub fn variable(n: usize, d: usize, particle: usize, axis: usize) -> Self {
        Self::from_monomial(n, d, Monomial::variable(n, d, particle, axis, 1), BigRational::one())
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Common grade of all terms, if the polynomial is homogeneous and nonzero.
    pub fn grade(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.grade();
        self.terms.keys().all(|m| m.grade() == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.grade().is_some()
    }

    /// Per-axis degrees, if every term shares them.
    pub fn axis_degrees(&self) -> Option<SmallVec<[u32; 4]>> {
        let mut it = self.terms.keys();
        let first = it.next()?.axis_degrees(self.d);
        it.all(|m| m.axis_degrees(self.d) == first).then_some(first)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "polynomials with (N, d) = ({}, {}) and ({}, {})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &BigRational) -> Result<()> {
        self.check_shape(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        ExactPolynomial {
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.d);
        }
        ExactPolynomial {
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.n, self.d);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n, self.d);
        for _ in 0..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Multivariate division by repeated leading-term elimination.
    /// Returns `(quotient, remainder)`; terms whose leading monomial is not
    /// divisible by the divisor's leading monomial move to the remainder.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_shape(divisor)?;
        let (lead_m, lead_c) = divisor
            .leading_term()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        let mut rest = self.terms.clone();
        let mut quot = Self::zero(self.n, self.d);
        let mut rem = Self::zero(self.n, self.d);
        while let Some((m, c)) = rest.pop_last() {
            match m.checked_div(lead_m) {
                Some(shift) => {
                    let factor = &c / lead_c;
                    for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                        let key = dm.mul(&shift);
                        let delta = -(dc * &factor);
                        match rest.entry(key) {
                            Entry::Vacant(v) => {
                                v.insert(delta);
                            }
                            Entry::Occupied(mut o) => {
                                *o.get_mut() += delta;
                                if o.get().is_zero() {
                                    o.remove();
                                }
                            }
                        }
                    }
                    quot.add_term(shift, factor);
                }
                None => rem.add_term(m, c),
            }
        }
        Ok((quot, rem))
    }

    /// Exact division; a nonzero remainder is a consistency failure.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if let Some((m, _)) = r.leading_term() {
            return Err(Error::consistency(format!(
                "inexact division: remainder has {} terms, leading monomial {}",
                r.len(),
                m.display(self.d)
            )));
        }
        Ok(q)
    }

    /// Exchanges particles `i` and `j` (all `d` variables at once).
    pub fn swap_particles(&self, i: usize, j: usize) -> Self {
        ExactPolynomial {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.swap_particles(i, j, self.d), c.clone()))
                .collect(),
        }
    }

    /// Relabels particles: particle `i` becomes particle `perm[i]`.
    pub fn permute_particles(&self, perm: &[usize]) -> Self {
        ExactPolynomial {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute_particles(perm, self.d), c.clone()))
                .collect(),
        }
    }

    /// Odd under every exchange of two particles.
    pub fn is_antisymmetric(&self) -> bool {
        (1..self.n).all(|i| self.swap_particles(i - 1, i) == self.neg())
    }

    /// Even under every exchange of two particles.
    pub fn is_symmetric(&self) -> bool {
        (1..self.n).all(|i| self.swap_particles(i - 1, i) == *self)
    }

    /// Every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn display(&self) -> PolynomialDisplay<'_> {
        PolynomialDisplay(self)
    }
}

impl fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPolynomial(N={}, d={}; {})", self.n, self.d, self.display())
    }
}

/// Human-readable form, leading term first: `t1 u2 - t1 u3 + ...`.
pub struct PolynomialDisplay<'a>(&'a ExactPolynomial);

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        if p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in p.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_one = m.grade() == 0;
            if !mag.is_one() || is_one {
                write!(f, "{mag}")?;
                if !is_one {
                    write!(f, " ")?;
                }
            }
            if !is_one {
                write!(f, "{}", m.display(p.d))?;
            }
        }
        Ok(())
    }
}
