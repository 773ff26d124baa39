//! Test-side oracles, written without the library routines they check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use shapes_core::realize::quadrature::{gauss_hermite, gauss_legendre};
use shapes_core::{ExactPolynomial, Monomial};

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// All permutations of `0..n` with their signs, by plain recursion.
pub fn perms(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in perms(n - 1) {
        // insert n-1 at every position; moving it left past k entries flips k times
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, n - 1);
            let flips = (p.len() - pos) as i64;
            out.push((v, if flips % 2 == 0 { s } else { -s }));
        }
    }
    out
}

/// `det[orbital_i(particle_j)]` (or the permanent) with orbitals in the
/// order written, expanded term by term.
pub fn slater(d: usize, orbitals: &[&[u8]], permanent: bool) -> ExactPolynomial {
    let n = orbitals.len();
    let mut terms = Vec::new();
    for (p, s) in perms(n) {
        let mut exps = vec![0u8; n * d];
        for (i, orb) in orbitals.iter().enumerate() {
            assert_eq!(orb.len(), d);
            exps[p[i] * d..(p[i] + 1) * d].copy_from_slice(orb);
        }
        let sign = if permanent { 1 } else { s };
        terms.push((Monomial::from_flat(&exps), q(sign)));
    }
    ExactPolynomial::from_terms(n, d, terms).unwrap()
}

pub fn det(d: usize, orbitals: &[&[u8]]) -> ExactPolynomial {
    slater(d, orbitals, false)
}

/// Row-reduced echelon form with unit pivots.
pub fn rref(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Whether two families of polynomials span the same space.
pub fn same_polynomial_span(a: &[ExactPolynomial], b: &[ExactPolynomial]) -> bool {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in a.iter().chain(b) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let vectors = |ps: &[ExactPolynomial]| -> Vec<Vec<BigRational>> {
        ps.iter()
            .map(|p| {
                let mut v = vec![BigRational::zero(); index.len()];
                for (m, c) in p.terms() {
                    v[index[m]] = c.clone();
                }
                v
            })
            .collect()
    };
    rref(vectors(a)) == rref(vectors(b))
}

/// Antisymmetrization of a random combination of monomials of one grade.
/// May return zero.
pub fn random_antisymmetric<R: Rng>(rng: &mut R, n: usize, d: usize, grade: u32) -> ExactPolynomial {
    let mut seed = ExactPolynomial::zero(n, d);
    for _ in 0..rng.gen_range(1..=4) {
        let mut exps = vec![0u8; n * d];
        for _ in 0..grade {
            exps[rng.gen_range(0..n * d)] += 1;
        }
        let c = q(rng.gen_range(-5..=5));
        seed = seed.add(&ExactPolynomial::from_monomial(n, d, Monomial::from_flat(&exps), c)).unwrap();
    }
    let mut out = ExactPolynomial::zero(n, d);
    for (p, s) in perms(n) {
        out.add_scaled(&seed.permute_particles(&p), &q(s)).unwrap();
    }
    out
}

/// Integer polynomial product, ascending coefficients.
pub fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `H_0 .. H_kmax` at `x` by the three-term recurrence.
pub fn hermite_values(x: f64, kmax: usize) -> Vec<f64> {
    let mut h = vec![1.0; kmax + 1];
    if kmax >= 1 {
        h[1] = 2.0 * x;
    }
    for k in 1..kmax {
        h[k + 1] = 2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1];
    }
    h
}

/// Per-axis index quadruple `(n, n', m, m')`.
pub type AxisIndex = [u8; 4];

/// Numerical `[n n'|V|m m']` for all per-axis index quadruples with entries
/// up to `max_index`.
///
/// With `R' = R - r` the element is `int d^d r prod_a C_a(r_a) / |r|`, where
/// `C(r) = int dx H_n H_m(x) H_n' H_m'(x - r) e^{-x^2 - (x - r)^2}`. The inner
/// integral is Gauss-Hermite after `x = r/2 + y/sqrt(2)`; the outer one uses
/// spherical (polar) coordinates, which absorb the `1/|r|`.
pub struct CoulombOracle {
    pub d: usize,
    pub combos: Vec<AxisIndex>,
    /// Quadrature weights per outer point.
    weights: Vec<f64>,
    /// `tables[axis][combo][point]` holds `C_combo(r_axis)`.
    tables: Vec<Vec<Vec<f64>>>,
}

impl CoulombOracle {
    pub fn new(d: usize, max_index: u8) -> Self {
        assert!(d == 2 || d == 3);
        let mut combos = Vec::new();
        for n in 0..=max_index {
            for np in 0..=max_index {
                for m in 0..=max_index {
                    for mp in 0..=max_index {
                        if (n + np + m + mp) % 2 == 0 {
                            combos.push([n, np, m, mp]);
                        }
                    }
                }
            }
        }
        let radial = gauss_legendre(64, 0.0, 16.0);
        let mut points: Vec<Vec<f64>> = Vec::new();
        let mut weights = Vec::new();
        if d == 2 {
            let k = 40;
            for (&rho, &w) in radial.nodes.iter().zip(&radial.weights) {
                for j in 0..k {
                    let th = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                    points.push(vec![rho * th.cos(), rho * th.sin()]);
                    weights.push(w * 2.0 * std::f64::consts::PI / k as f64);
                }
            }
        } else {
            let polar = gauss_legendre(20, -1.0, 1.0);
            let k = 32;
            for (&rho, &w) in radial.nodes.iter().zip(&radial.weights) {
                for (&u, &wu) in polar.nodes.iter().zip(&polar.weights) {
                    let s = (1.0 - u * u).sqrt();
                    for j in 0..k {
                        let ph = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                        points.push(vec![rho * s * ph.cos(), rho * s * ph.sin(), rho * u]);
                        weights.push(w * rho * wu * 2.0 * std::f64::consts::PI / k as f64);
                    }
                }
            }
        }
        let gh = gauss_hermite(40);
        let kmax = max_index as usize;
        let tables = (0..d)
            .map(|axis| {
                let mut t = vec![vec![0.0; points.len()]; combos.len()];
                for (pi, p) in points.iter().enumerate() {
                    let r = p[axis];
                    let mut acc = vec![0.0; combos.len()];
                    for (&y, &w) in gh.nodes.iter().zip(&gh.weights) {
                        let x = r / 2.0 + y / std::f64::consts::SQRT_2;
                        let h1 = hermite_values(x, kmax);
                        let h2 = hermite_values(x - r, kmax);
                        for (ci, c) in combos.iter().enumerate() {
                            acc[ci] += w
                                * h1[c[0] as usize]
                                * h1[c[2] as usize]
                                * h2[c[1] as usize]
                                * h2[c[3] as usize];
                        }
                    }
                    let g = (-r * r / 2.0).exp() / std::f64::consts::SQRT_2;
                    for ci in 0..combos.len() {
                        t[ci][pi] = g * acc[ci];
                    }
                }
                t
            })
            .collect();
        CoulombOracle {
            d,
            combos,
            weights,
            tables,
        }
    }

    /// Calls `f(axis combos, value)` for every parity-allowed element.
    pub fn for_each<F: FnMut(&[usize], f64)>(&self, mut f: F) {
        let nc = self.combos.len();
        let np = self.weights.len();
        let mut partial = vec![0.0; np];
        for c0 in 0..nc {
            for c1 in 0..nc {
                for p in 0..np {
                    partial[p] = self.weights[p] * self.tables[0][c0][p] * self.tables[1][c1][p];
                }
                if self.d == 2 {
                    f(&[c0, c1], partial.iter().sum());
                } else {
                    for c2 in 0..nc {
                        let t = &self.tables[2][c2];
                        let v: f64 = partial.iter().zip(t).map(|(a, b)| a * b).sum();
                        f(&[c0, c1, c2], v);
                    }
                }
            }
        }
    }

    /// Splits axis combos into the four index vectors.
    pub fn indices(&self, combo: &[usize]) -> [Vec<u8>; 4] {
        let mut out: [Vec<u8>; 4] = Default::default();
        for &c in combo {
            for (k, v) in out.iter_mut().enumerate() {
                v.push(self.combos[c][k]);
            }
        }
        out
    }
}
