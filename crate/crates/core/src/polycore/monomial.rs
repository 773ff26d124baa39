use std::fmt;

use smallvec::SmallVec;

use super::OrbitalVector;

/// Name of the formal variable on an axis: `t`, `u`, `v`, `w`, then `a4`, `a5`, ...
pub fn axis_name(axis: usize) -> String {
    match axis {
        0 => "t".into(),
        1 => "u".into(),
        2 => "v".into(),
        3 => "w".into(),
        k => format!("a{k}"),
    }
}

/// Product of formal powers, stored as a dense `N x d` exponent matrix in
/// row-major order (row `i` holds particle `i`'s exponents).
///
/// Monomials are ordered graded-lexicographically: total degree first, then
/// lexicographically on the row-major entries. This is a monomial order, so
/// leading terms are multiplicative.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    grade: u32,
    exps: SmallVec<[u8; 12]>,
}

impl Monomial {
    pub fn from_flat(exps: &[u8]) -> Self {
        Monomial {
            grade: exps.iter().map(|&e| e as u32).sum(),
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn one(n: usize, d: usize) -> Self {
        Monomial {
            grade: 0,
            exps: SmallVec::from_elem(0, n * d),
        }
    }

    /// Monomial whose row `i` is `rows[i]`.
    pub fn from_rows<'a, I>(rows: I) -> Self
    where
        I: IntoIterator<Item = &'a OrbitalVector>,
    {
        let mut exps: SmallVec<[u8; 12]> = SmallVec::new();
        for r in rows {
            exps.extend_from_slice(r.exponents());
        }
        Self::from_flat(&exps)
    }

    /// The monomial `var(particle, axis)^power`.
    pub fn variable(n: usize, d: usize, particle: usize, axis: usize, power: u8) -> Self {
        let mut m = Self::one(n, d);
        m.exps[particle * d + axis] = power;
        m.grade = power as u32;
        m
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn exponents(&self) -> &[u8] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn row(&self, particle: usize, d: usize) -> &[u8] {
        &self.exps[particle * d..(particle + 1) * d]
    }

    pub fn rows(&self, d: usize) -> impl Iterator<Item = &[u8]> {
        self.exps.chunks(d.max(1))
    }

    /// Total exponent on each axis.
    pub fn axis_degrees(&self, d: usize) -> SmallVec<[u32; 4]> {
        let mut out: SmallVec<[u32; 4]> = SmallVec::from_elem(0, d);
        for (i, &e) in self.exps.iter().enumerate() {
            out[i % d] += e as u32;
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
            .collect();
        Monomial {
            grade: self.grade + other.grade,
            exps,
        }
    }

    /// `self / other` if every exponent of `other` is at most the matching one here.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial {
            grade: self.grade - other.grade,
            exps,
        })
    }

    /// Exchanges the rows of particles `i` and `j`.
    pub fn swap_particles(&self, i: usize, j: usize, d: usize) -> Monomial {
        let mut m = self.clone();
        for a in 0..d {
            m.exps.swap(i * d + a, j * d + a);
        }
        m
    }

    /// Applies a particle relabelling: row `i` moves to row `perm[i]`.
    pub fn permute_particles(&self, perm: &[usize], d: usize) -> Monomial {
        let mut m = self.clone();
        for (i, &p) in perm.iter().enumerate() {
            m.exps[p * d..(p + 1) * d].copy_from_slice(&self.exps[i * d..(i + 1) * d]);
        }
        m
    }

    /// Rows as orbitals.
    pub fn orbitals(&self, d: usize) -> Vec<OrbitalVector> {
        self.rows(d).map(OrbitalVector::new).collect()
    }

    /// Formats as a product of named variables, e.g. `t1 u2^2`.
    pub fn display(&self, d: usize) -> MonomialDisplay<'_> {
        MonomialDisplay { m: self, d }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    d: usize,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, &e) in self.m.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", axis_name(idx % self.d), idx / self.d + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Monomial::from_flat(&[1, 0, 0, 1]);
        let b = Monomial::from_flat(&[0, 1, 1, 0]);
        let c = Monomial::from_flat(&[0, 0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn order_is_multiplicative() {
        let a = Monomial::from_flat(&[1, 0, 0, 1]);
        let b = Monomial::from_flat(&[0, 1, 1, 0]);
        let m = Monomial::from_flat(&[0, 2, 1, 0]);
        assert!(a.mul(&m) > b.mul(&m));
    }

    #[test]
    fn display_and_division() {
        let m = Monomial::from_flat(&[1, 0, 0, 2]);
        assert_eq!(m.display(2).to_string(), "t1 u2^2");
        assert_eq!(Monomial::one(2, 2).display(2).to_string(), "1");
        let q = m.checked_div(&Monomial::variable(2, 2, 1, 1, 1)).unwrap();
        assert_eq!(q, Monomial::from_flat(&[1, 0, 0, 1]));
        assert!(q.checked_div(&Monomial::variable(2, 2, 0, 1, 1)).is_none());
        assert_eq!(m.swap_particles(0, 1, 2), Monomial::from_flat(&[0, 2, 1, 0]));
        assert_eq!(m.axis_degrees(2).as_slice(), &[1, 2]);
    }
}
