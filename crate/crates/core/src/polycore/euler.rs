use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{axis_name, ExactPolynomial, Monomial};
use crate::error::{Error, Result};

/// All `m`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(0, n, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

fn check_axis(axis: usize, d: usize) -> Result<()> {
    if axis >= d {
        return Err(Error::invalid(format!("axis {axis} out of range for d = {d}")));
    }
    Ok(())
}

/// Elementary symmetric function `e_k` in the `N` variables of one axis.
/// `k > N` gives the zero polynomial, `k = 0` gives 1.
pub fn elementary_symmetric(k: usize, axis: usize, n: usize, d: usize) -> Result<ExactPolynomial> {
    euler_power(k, 1, axis, n, d)
}

/// Plethysm power `e_m^k -> sum over m-subsets S of (prod_{i in S} x_i)^k`.
///
/// Distinct `(m, k)` never share a monomial, so different Euler-boson
/// occupations stay orthogonal.
pub fn euler_power(m: usize, k: u32, axis: usize, n: usize, d: usize) -> Result<ExactPolynomial> {
    check_axis(axis, d)?;
    if m == 0 || k == 0 {
        return Ok(ExactPolynomial::one(n, d));
    }
    let power = u8::try_from(k).map_err(|_| Error::invalid(format!("power {k} too large")))?;
    let mut p = ExactPolynomial::zero(n, d);
    for subset in combinations(n, m) {
        let mut exps = vec![0u8; n * d];
        for i in subset {
            exps[i * d + axis] = power;
        }
        p.add_term(Monomial::from_flat(&exps), BigRational::one());
    }
    Ok(p)
}

/// `prod_{i<j} (x_i - x_j)` on one axis.
pub fn vandermonde(n: usize, d: usize, axis: usize) -> Result<ExactPolynomial> {
    check_axis(axis, d)?;
    let mut p = ExactPolynomial::one(n, d);
    for i in 0..n {
        for j in i + 1..n {
            let diff = ExactPolynomial::variable(n, d, i, axis).sub(&ExactPolynomial::variable(n, d, j, axis))?;
            p = p.mul(&diff)?;
        }
    }
    Ok(p)
}

/// A monomial in the Euler bosons of all axes: `prod_{axis, m} e_m(axis)^{k}`,
/// with each power read as a plethysm power.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EulerMonomial {
    n: usize,
    d: usize,
    /// `powers[axis * n + (m - 1)]` is the occupation of `e_m` on `axis`.
    powers: Vec<u32>,
}

impl EulerMonomial {
    pub fn identity(n: usize, d: usize) -> Self {
        EulerMonomial {
            n,
            d,
            powers: vec![0; n * d],
        }
    }

    pub fn from_powers(n: usize, d: usize, powers: Vec<u32>) -> Result<Self> {
        if powers.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "{} occupations for N = {n}, d = {d}",
                powers.len()
            )));
        }
        Ok(EulerMonomial { n, d, powers })
    }

    /// Occupation of `e_m` (`1 <= m <= N`) on `axis`.
    pub fn power(&self, m: usize, axis: usize) -> u32 {
        self.powers[axis * self.n + (m - 1)]
    }

    pub fn powers(&self) -> &[u32] {
        &self.powers
    }

    pub fn degree(&self) -> u32 {
        self.powers
            .iter()
            .enumerate()
            .map(|(i, &k)| k * ((i % self.n) as u32 + 1))
            .sum()
    }

    pub fn axis_degrees(&self) -> Vec<u32> {
        (0..self.d)
            .map(|a| (1..=self.n).map(|m| m as u32 * self.power(m, a)).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.powers.iter().all(|&k| k == 0)
    }

    /// Product of the plethysm powers of all factors.
    pub fn materialize(&self) -> ExactPolynomial {
        let mut p = ExactPolynomial::one(self.n, self.d);
        for axis in 0..self.d {
            for m in 1..=self.n {
                let k = self.power(m, axis);
                if k > 0 {
                    let factor = euler_power(m, k, axis, self.n, self.d).expect("axis in range");
                    p = p.mul(&factor).expect("same shape");
                }
            }
        }
        p
    }
}

impl fmt::Debug for EulerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EulerMonomial {
    /// E.g. `e1(t)^2 e2(u)`; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for axis in 0..self.d {
            for m in 1..=self.n {
                let k = self.power(m, axis);
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "e{m}({})", axis_name(axis))?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All Euler-boson monomials of total degree `degree` for `N` particles in
/// `d` dimensions. Degree 0 yields only the identity.
pub fn enumerate_euler_monomials(n: usize, d: usize, degree: u32) -> Vec<EulerMonomial> {
    fn rec(slot: usize, n: usize, left: u32, powers: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == powers.len() {
            if left == 0 {
                out.push(powers.clone());
            }
            return;
        }
        let weight = (slot % n) as u32 + 1;
        for k in (0..=left / weight).rev() {
            powers[slot] = k;
            rec(slot + 1, n, left - k * weight, powers, out);
        }
        powers[slot] = 0;
    }
    if n == 0 {
        return if degree == 0 { vec![EulerMonomial::identity(0, d)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, n, degree, &mut vec![0; n * d], &mut out);
    out.into_iter()
        .map(|powers| EulerMonomial { n, d, powers })
        .collect()
}
