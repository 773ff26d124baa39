//! Expansion of homogeneous (anti)symmetric polynomials over the Slater or
//! permanent basis of their grade, by leading-monomial elimination.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use crate::counting::Statistics;
use crate::error::{Error, Result};
use crate::polycore::{enumerate_basis, EulerMonomial, ExactPolynomial, Monomial, SlaterState};
use crate::shapegen::ShapeRecord;

/// All basis states of one grade together with their cached expansions.
///
/// Immutable once built, so one basis can be shared between threads.
#[derive(Debug, Clone)]
pub struct LevelBasis {
    n: usize,
    d: usize,
    grade: u32,
    statistics: Statistics,
    states: Vec<SlaterState>,
    expansions: Vec<ExactPolynomial>,
    leading: Vec<(Monomial, BigRational)>,
    by_leading: HashMap<Monomial, usize>,
    by_state: HashMap<SlaterState, usize>,
}

impl LevelBasis {
    pub fn new(n: usize, d: usize, grade: u32, statistics: Statistics) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::invalid(format!("need N >= 1 and d >= 1, got N = {n}, d = {d}")));
        }
        Self::from_states(n, d, grade, statistics, enumerate_basis(n, d, grade, statistics))
    }

    fn from_states(
        n: usize,
        d: usize,
        grade: u32,
        statistics: Statistics,
        states: Vec<SlaterState>,
    ) -> Result<Self> {
        let expansions: Vec<ExactPolynomial> = states.iter().map(SlaterState::expand).collect();
        let mut leading = Vec::with_capacity(states.len());
        let mut by_leading = HashMap::with_capacity(states.len());
        for (i, p) in expansions.iter().enumerate() {
            let (m, c) = p
                .leading_term()
                .ok_or_else(|| Error::consistency(format!("state {} expands to zero", states[i])))?;
            if let Some(j) = by_leading.insert(m.clone(), i) {
                return Err(Error::consistency(format!(
                    "states {} and {} share the leading monomial {}",
                    states[j],
                    states[i],
                    m.display(d)
                )));
            }
            leading.push((m.clone(), c.clone()));
        }
        let by_state = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(LevelBasis {
            n,
            d,
            grade,
            statistics,
            states,
            expansions,
            leading,
            by_leading,
            by_state,
        })
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn states(&self) -> &[SlaterState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn expansion(&self, i: usize) -> &ExactPolynomial {
        &self.expansions[i]
    }

    /// Leading monomial of state `i` and its coefficient.
    pub fn leading(&self, i: usize) -> (&Monomial, &BigRational) {
        let (m, c) = &self.leading[i];
        (m, c)
    }

    pub fn index_of(&self, s: &SlaterState) -> Option<usize> {
        self.by_state.get(s).copied()
    }

    /// `sum_i coeffs[i] * state_i` as a polynomial.
    pub fn combine(&self, coeffs: &[BigRational]) -> Result<ExactPolynomial> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a level of {} states",
                coeffs.len(),
                self.len()
            )));
        }
        let mut p = ExactPolynomial::zero(self.n, self.d);
        for (c, e) in coeffs.iter().zip(&self.expansions) {
            p.add_scaled(e, c)?;
        }
        Ok(p)
    }

    /// Coefficients of `p` over this level's states.
    pub fn deflate(&self, p: &ExactPolynomial) -> Result<Vec<BigRational>> {
        deflate(p, self)
    }
}

/// Writes `p` as an exact combination of the states of `basis`.
///
/// Fails with [`Error::NotInSpan`] when `p` has the wrong symmetry, and with
/// a dimension error when `N`, `d` or the grade disagree.
pub fn deflate(p: &ExactPolynomial, basis: &LevelBasis) -> Result<Vec<BigRational>> {
    if p.particle_count() != basis.n || p.dim() != basis.d {
        return Err(Error::DimensionMismatch(format!(
            "polynomial with (N, d) = ({}, {}) against a level with ({}, {})",
            p.particle_count(),
            p.dim(),
            basis.n,
            basis.d
        )));
    }
    if let Some((m, _)) = p.terms().find(|(m, _)| m.grade() != basis.grade) {
        return Err(Error::DimensionMismatch(format!(
            "term {} has grade {}, level has grade {}",
            m.display(basis.d),
            m.grade(),
            basis.grade
        )));
    }
    let mut rest: BTreeMap<Monomial, BigRational> =
        p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut coeffs = vec![BigRational::zero(); basis.len()];
    while let Some((m, c)) = rest.pop_last() {
        let Some(&i) = basis.by_leading.get(&m) else {
            return Err(Error::NotInSpan(format!(
                "{} (coefficient {c}, {} residual terms)",
                m.display(basis.d),
                rest.len() + 1
            )));
        };
        let factor = &c / &basis.leading[i].1;
        for (em, ec) in basis.expansions[i].terms().rev().skip(1) {
            let delta = -(ec * &factor);
            match rest.entry(em.clone()) {
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
        coeffs[i] += factor;
    }
    Ok(coeffs)
}

/// Deflates `shape * euler` over `basis`.
pub fn deflate_product(shape: &ShapeRecord, euler: &EulerMonomial, basis: &LevelBasis) -> Result<Vec<BigRational>> {
    if shape.grade() + euler.degree() != basis.grade {
        return Err(Error::DimensionMismatch(format!(
            "shape of grade {} times Euler monomial of degree {} does not land in grade {}",
            shape.grade(),
            euler.degree(),
            basis.grade
        )));
    }
    let product = shape.materialize()?.mul(&euler.materialize())?;
    deflate(&product, basis)
}
