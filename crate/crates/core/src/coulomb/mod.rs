//! Coulomb matrix elements between products of unnormalized Hermite
//! functions `phi_n(x) = H_n(x) e^{-x^2/2}`.
//!
//! The two-body element
//! `[n n'|V|m m'] = int Phi_n(R) Phi_n'(R') Phi_m(R) Phi_m'(R') / |R - R'|`
//! is evaluated in closed form: each axis contributes a polynomial in `w^2`
//! built from Hermite linearization coefficients and `H_k(0)`, and the
//! remaining `w` integral is a Beta function. For every `d` the result is a
//! rational multiple of `sqrt(2) pi^{p/2}` with `p` depending only on `d`,
//! so all sums are exact and rounding happens once.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polycore::ExactPolynomial;
use crate::realize::{Realization, RealizationKind};

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Coefficients of the physicists' Hermite polynomial `H_n`, ascending.
pub fn hermite_polynomial(n: u32) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(2)];
    for k in 1..n {
        // H_{k+1} = 2x H_k - 2k H_{k-1}
        let mut next = vec![BigInt::zero(); k as usize + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * (2 * k);
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(0)`: zero for odd `n`, `(-1)^{n/2} n! / (n/2)!` otherwise.
pub fn hermite_at_zero(n: u32) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let v = factorial(n) / factorial(n / 2);
    if (n / 2) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `a_k` with `H_n H_m = sum_k a_k H_k`, for `k = 0..=n+m`.
pub fn hermite_linearization(n: u32, m: u32) -> Vec<BigInt> {
    (0..=n + m)
        .map(|k| {
            if (n + m + k) % 2 == 1 || k + n < m || k + m < n || k > n + m {
                return BigInt::zero();
            }
            let num = (BigInt::one() << ((n + m - k) / 2)) * factorial(n) * factorial(m);
            let den = factorial((n + m - k) / 2) * factorial((k + n - m) / 2) * factorial((k + m - n) / 2);
            num / den
        })
        .collect()
}

/// Exact value of `I_d(l) = int_0^1 (1 - w^2)^{(d-3)/2} w^l dw` as
/// `rational * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaIntegral {
    pub rational: BigRational,
    pub pi_power: u32,
}

impl BetaIntegral {
    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

/// `Gamma(m / 2)` as a rational and whether a factor `sqrt(pi)` is attached.
fn half_gamma(m: u32) -> (BigRational, bool) {
    debug_assert!(m >= 1);
    if m % 2 == 0 {
        (rat(factorial(m / 2 - 1)), false)
    } else {
        // Gamma(j + 1/2) = (2j)! / (4^j j!) sqrt(pi)
        let j = (m - 1) / 2;
        (
            BigRational::new(factorial(2 * j), (BigInt::one() << (2 * j)) * factorial(j)),
            true,
        )
    }
}

/// `I_d(l) = Gamma((l+1)/2) Gamma((d-1)/2) / (2 Gamma((l+d)/2))` for even `l`.
/// Rational for odd `d`, a rational multiple of `pi` for even `d`.
pub fn beta_integral(d: u32, l: u32) -> Result<BetaIntegral> {
    if d < 2 {
        return Err(Error::invalid(format!("the w integral needs d >= 2, got {d}")));
    }
    if l % 2 == 1 {
        return Err(Error::invalid(format!("odd power l = {l} never occurs")));
    }
    let (a, pa) = half_gamma(l + 1);
    let (b, pb) = half_gamma(d - 1);
    let (c, pc) = half_gamma(l + d);
    let sqrt_pi = pa as i32 + pb as i32 - pc as i32;
    debug_assert!(sqrt_pi == 0 || sqrt_pi == 2);
    Ok(BetaIntegral {
        rational: a * b / (c * BigInt::from(2)),
        pi_power: (sqrt_pi / 2) as u32,
    })
}

/// `rational * sqrt(2) * pi^{pi_half_power / 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoulombValue {
    pub rational: BigRational,
    pub pi_half_power: u32,
}

impl CoulombValue {
    pub fn to_f64(&self) -> f64 {
        if self.rational.is_zero() {
            return 0.0;
        }
        self.rational.to_f64().unwrap_or(f64::NAN)
            * std::f64::consts::SQRT_2
            * std::f64::consts::PI.powf(self.pi_half_power as f64 / 2.0)
    }
}

/// Power of `sqrt(pi)` carried by every element in `d` dimensions:
/// `pi^d sqrt(2/pi)` times the `pi` of `I_d` for even `d`.
fn pi_half_power(d: u32) -> u32 {
    2 * d - 1 + if d % 2 == 0 { 2 } else { 0 }
}

/// Per-axis factor as coefficients of `w^{2j}`:
/// `sum_{k+k'=2j} a^{nm}_k a^{n'm'}_{k'} (-1)^k H_{2j}(0) / 2^j`.
fn axis_factor(n: u32, np: u32, m: u32, mp: u32) -> Vec<BigRational> {
    let a = hermite_linearization(n, m);
    let b = hermite_linearization(np, mp);
    let top = (a.len() + b.len() - 2) / 2;
    let mut out = vec![BigRational::zero(); top + 1];
    for (k, ak) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (kp, bk) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            if (k + kp) % 2 == 1 {
                continue;
            }
            let j = (k + kp) / 2;
            let mut term = ak * bk * hermite_at_zero((k + kp) as u32);
            if k % 2 == 1 {
                term = -term;
            }
            out[j] += BigRational::new(term, BigInt::one() << j);
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

fn check_indices(n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> Result<u32> {
    let d = n.len();
    if np.len() != d || m.len() != d || mp.len() != d {
        return Err(Error::DimensionMismatch("index vectors of different lengths".into()));
    }
    if d < 2 {
        return Err(Error::invalid(format!("the closed form holds for d >= 2, got d = {d}")));
    }
    Ok(d as u32)
}

/// Whether some axis has odd `n_i + m_i + n'_i + m'_i`, which forces zero.
fn parity_forbidden(n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> bool {
    (0..n.len()).any(|i| (n[i] as u32 + np[i] as u32 + m[i] as u32 + mp[i] as u32) % 2 == 1)
}

fn combine_axes(d: u32, factors: &[Arc<Vec<BigRational>>]) -> Result<CoulombValue> {
    let mut poly = vec![BigRational::one()];
    for f in factors {
        let mut next = vec![BigRational::zero(); poly.len() + f.len() - 1];
        for (i, x) in poly.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in f.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        poly = next;
    }
    let mut total = BigRational::zero();
    for (j, c) in poly.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        total += c * beta_integral(d, 2 * j as u32)?.rational;
    }
    Ok(CoulombValue {
        rational: total,
        pi_half_power: pi_half_power(d),
    })
}

/// Exact `[n n'|V|m m']`: particle 1 carries `n` (bra) and `m` (ket),
/// particle 2 carries `n'` and `m'`.
pub fn two_body_exact(n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> Result<CoulombValue> {
    let d = check_indices(n, np, m, mp)?;
    if parity_forbidden(n, np, m, mp) {
        return Ok(CoulombValue {
            rational: BigRational::zero(),
            pi_half_power: pi_half_power(d),
        });
    }
    let factors: Vec<Arc<Vec<BigRational>>> = (0..d as usize)
        .map(|i| Arc::new(axis_factor(n[i] as u32, np[i] as u32, m[i] as u32, mp[i] as u32)))
        .collect();
    combine_axes(d, &factors)
}

pub fn two_body_element(n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> Result<f64> {
    Ok(two_body_exact(n, np, m, mp)?.to_f64())
}

/// Memo of two-body elements, safe for concurrent use.
#[derive(Debug, Default)]
pub struct CoulombTable {
    axes: DashMap<[u8; 4], Arc<Vec<BigRational>>>,
    elements: DashMap<Vec<u8>, Arc<BigRational>>,
}

impl CoulombTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Rational part of [`two_body_exact`], cached.
    pub fn element_rational(&self, n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> Result<Arc<BigRational>> {
        let d = check_indices(n, np, m, mp)?;
        if parity_forbidden(n, np, m, mp) {
            return Ok(Arc::new(BigRational::zero()));
        }
        let key: Vec<u8> = [n, np, m, mp].concat();
        if let Some(v) = self.elements.get(&key) {
            return Ok(v.clone());
        }
        let factors: Vec<Arc<Vec<BigRational>>> = (0..d as usize)
            .map(|i| {
                let k = [n[i], np[i], m[i], mp[i]];
                self.axes
                    .entry(k)
                    .or_insert_with(|| Arc::new(axis_factor(k[0] as u32, k[1] as u32, k[2] as u32, k[3] as u32)))
                    .clone()
            })
            .collect();
        let v = Arc::new(combine_axes(d, &factors)?.rational);
        self.elements.insert(key, v.clone());
        Ok(v)
    }

    pub fn element(&self, n: &[u8], np: &[u8], m: &[u8], mp: &[u8]) -> Result<f64> {
        let d = n.len() as u32;
        let r = self.element_rational(n, np, m, mp)?;
        Ok(CoulombValue {
            rational: (*r).clone(),
            pi_half_power: pi_half_power(d),
        }
        .to_f64())
    }
}

/// `<phi_n|phi_n> / sqrt(pi) = 2^n n!`.
fn overlap_rational(n: u8) -> BigInt {
    (BigInt::one() << n as usize) * factorial(n as u32)
}

/// Norm of `p` divided by `pi^{N d / 2}` (monomials realize to orthogonal
/// products, so only diagonal terms survive).
fn norm_rational(p: &ExactPolynomial) -> BigRational {
    p.terms()
        .map(|(m, c)| c * c * rat(m.exponents().iter().map(|&e| overlap_rational(e)).product::<BigInt>()))
        .sum()
}

/// `<a| sum_{i<j} 1/|r_i - r_j| |b> / sqrt(<a|a><b|b>)` in the oscillator
/// realization. The result scales as `1 / length_scale`.
pub fn many_body_vee(a: &ExactPolynomial, b: &ExactPolynomial, r: Realization, table: &CoulombTable) -> Result<f64> {
    if r.kind != RealizationKind::HermiteOscillator {
        return Err(Error::invalid(format!("Coulomb elements need the Hermite realization, got {}", r.kind)));
    }
    let (n, d) = (a.particle_count(), a.dim());
    if b.particle_count() != n || b.dim() != d {
        return Err(Error::DimensionMismatch("states with different N or d".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("zero state"));
    }
    match (a.grade(), b.grade()) {
        (Some(ga), Some(gb)) if ga == gb => {}
        (ga, gb) => {
            return Err(Error::DimensionMismatch(format!(
                "states of grade {ga:?} and {gb:?}; both must be homogeneous of one grade"
            )))
        }
    }
    if n < 2 {
        return Ok(0.0);
    }
    let mut total = BigRational::zero();
    for (ma, ca) in a.terms() {
        let ea = ma.exponents();
        for (mb, cb) in b.terms() {
            let eb = mb.exponents();
            for i in 0..n {
                for j in i + 1..n {
                    let spectators_match = (0..n)
                        .filter(|&k| k != i && k != j)
                        .all(|k| ea[k * d..(k + 1) * d] == eb[k * d..(k + 1) * d]);
                    if !spectators_match {
                        continue;
                    }
                    let v = table.element_rational(
                        &ea[i * d..(i + 1) * d],
                        &ea[j * d..(j + 1) * d],
                        &eb[i * d..(i + 1) * d],
                        &eb[j * d..(j + 1) * d],
                    )?;
                    if v.is_zero() {
                        continue;
                    }
                    let spectators: BigInt = (0..n)
                        .filter(|&k| k != i && k != j)
                        .flat_map(|k| ea[k * d..(k + 1) * d].iter())
                        .map(|&e| overlap_rational(e))
                        .product();
                    total += ca * cb * &*v * rat(spectators);
                }
            }
        }
    }
    // element ~ sqrt(2) pi^{p/2}, spectators ~ pi^{(n-2)d/2}, norms ~ pi^{nd/2}
    let pi_exp = pi_half_power(d as u32) as f64 / 2.0 - d as f64;
    let norms = (norm_rational(a) * norm_rational(b)).to_f64().unwrap_or(f64::NAN);
    let value = total.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2 * std::f64::consts::PI.powf(pi_exp)
        / norms.sqrt();
    Ok(value / r.length_scale)
}

/// All pairwise [`many_body_vee`] values among `states`.
pub fn vee_matrix(states: &[ExactPolynomial], r: Realization, table: &CoulombTable) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = (0..states.len())
        .into_par_iter()
        .map(|i| {
            (0..states.len())
                .map(|j| many_body_vee(&states[i], &states[j], r, table))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows)
}

/// Relative gap `|x - y| / max(|x|, |y|)`, zero when both vanish.
pub fn relative_gap(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}
