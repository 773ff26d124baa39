//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the default harness so the report is always printed.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapes_core::coulomb::{beta_integral, hermite_linearization, many_body_vee, relative_gap, CoulombTable};
use shapes_core::counting::{level_dimension, shape_polynomial};
use shapes_core::deflation::LevelBasis;
use shapes_core::polycore::enumerate_basis;
use shapes_core::realize::{
    one_particle_density, realize_polynomial, two_particle_density_cut, AxisRange, Realization, RealizationKind,
};
use shapes_core::schur::{factor_1d, schur_ratio, schur_ssyt, Partition};
use shapes_core::shapegen::{generate_shapes, GenerateOptions, ShapeCatalog};
use shapes_core::{ExactPolynomial, GradedQPolynomial, OrbitalVector, SlaterState, Statistics};

use common::*;

const F: Statistics = Statistics::Fermion;
const B: Statistics = Statistics::Boson;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {:.2?}, limit {:.0?}", t, limit))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn var(n: usize, d: usize, i: usize, axis: usize) -> ExactPolynomial {
    ExactPolynomial::variable(n, d, i, axis)
}

/// `e_k` on one axis as a sum over `k`-subsets.
fn e_k(k: usize, axis: usize, n: usize, d: usize) -> ExactPolynomial {
    let mut out = ExactPolynomial::zero(n, d);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            let mut term = ExactPolynomial::one(n, d);
            for i in (0..n).filter(|i| mask >> i & 1 == 1) {
                term = term.mul(&var(n, d, i, axis)).unwrap();
            }
            out = out.add(&term).unwrap();
        }
    }
    out
}

fn c1_golden_polynomials() -> Check {
    let start = Instant::now();
    let cases: [(usize, usize, Statistics, u32, &[i64]); 4] = [
        (3, 2, F, 2, &[1, 4, 1]),
        (3, 3, F, 2, &[3, 10, 6, 6, 7, 3, 0, 1]),
        (3, 3, B, 0, &[1, 0, 3, 7, 6, 6, 10, 3]),
        (2, 3, F, 1, &[3, 0, 1]),
    ];
    let mut shown = Vec::new();
    for (n, d, s, lowest, coeffs) in cases {
        let p = shape_polynomial(n, d, s).map_err(|e| e.to_string())?;
        let expected = GradedQPolynomial::from_coefficient_list(lowest, coeffs);
        ensure(p == expected, || format!("({n},{d},{s}): got {p}, expected {expected}"))?;
        shown.push(p.to_string());
    }
    within(start, Duration::from_secs(1))?;
    Ok(shown.join("; "))
}

fn c2_saturation() -> Check {
    let start = Instant::now();
    for n in 1..=5 {
        for d in 1..=3 {
            for s in [F, B] {
                let value = shape_polynomial(n, d, s).map_err(|e| e.to_string())?.eval_at_one();
                let expected = factorial(n).pow(d as u32 - 1);
                ensure(value == expected, || format!("({n},{d},{s}): P(1) = {value}, expected {expected}"))?;
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("30 cases".into())
}

fn c3_symmetry_laws() -> Check {
    let start = Instant::now();
    for n in 1..=5 {
        for s in [F, B] {
            let (_, c) = shape_polynomial(n, 2, s).map_err(|e| e.to_string())?.coefficient_list();
            let mut r = c.clone();
            r.reverse();
            ensure(c == r, || format!("P_2({n}) {s} is not palindromic: {c:?}"))?;
        }
    }
    for n in 1..=4 {
        let (_, f) = shape_polynomial(n, 3, F).map_err(|e| e.to_string())?.coefficient_list();
        let (_, mut b) = shape_polynomial(n, 3, B).map_err(|e| e.to_string())?.coefficient_list();
        b.reverse();
        ensure(f == b, || format!("N = {n}: fermion {f:?} vs reversed boson {b:?}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("d=2 palindromes N<=5, d=3 mirror N<=4".into())
}

/// Sets of `n` distinct orbitals in `d` dimensions with total degree `grade`.
fn brute_force_level(n: usize, d: usize, grade: u32) -> usize {
    fn orbitals(d: usize, max: u32) -> Vec<Vec<u32>> {
        if d == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for rest in orbitals(d - 1, max) {
            let used: u32 = rest.iter().sum();
            for k in 0..=max - used {
                let mut v = rest.clone();
                v.push(k);
                out.push(v);
            }
        }
        out
    }
    fn count(orbs: &[(u32, Vec<u32>)], from: usize, left: usize, budget: u32) -> usize {
        if left == 0 {
            return usize::from(budget == 0);
        }
        (from..orbs.len())
            .filter(|&i| orbs[i].0 <= budget)
            .map(|i| count(orbs, i + 1, left - 1, budget - orbs[i].0))
            .sum()
    }
    let all: Vec<(u32, Vec<u32>)> = orbitals(d, grade).into_iter().map(|o| (o.iter().sum(), o)).collect();
    count(&all, 0, n, grade)
}

fn c4_level_dimensions() -> Check {
    let mut shown = Vec::new();
    for (n, d, g, expected) in [(3, 2, 3, 6usize), (3, 2, 4, 14), (3, 3, 9, 3838)] {
        let series = level_dimension(n, d, g, F).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let listed = enumerate_basis(n, d, g, F).len();
        let enumeration = t.elapsed();
        let brute = brute_force_level(n, d, g);
        ensure(series == BigInt::from(expected) && listed == expected && brute == expected, || {
            format!("({n},{d}) grade {g}: series {series}, enumeration {listed}, brute force {brute}, expected {expected}")
        })?;
        ensure(enumeration < Duration::from_secs(60), || format!("enumeration took {enumeration:.2?}"))?;
        shown.push(format!("{expected} (enumerated in {enumeration:.2?})"));
    }
    Ok(shown.join(", "))
}

fn g_states() -> [ExactPolynomial; 6] {
    [
        det(2, &[&[2, 0], &[1, 0], &[0, 0]]),
        det(2, &[&[1, 1], &[1, 0], &[0, 0]]),
        det(2, &[&[0, 2], &[1, 0], &[0, 0]]),
        det(2, &[&[2, 0], &[0, 1], &[0, 0]]),
        det(2, &[&[1, 1], &[0, 1], &[0, 0]]),
        det(2, &[&[0, 2], &[0, 1], &[0, 0]]),
    ]
}

fn ground_3_2() -> ExactPolynomial {
    det(2, &[&[1, 0], &[0, 1], &[0, 0]])
}

fn s2_polynomial() -> ExactPolynomial {
    let a = det(2, &[&[1, 2], &[1, 0], &[0, 0]]);
    let b = det(2, &[&[2, 1], &[0, 1], &[0, 0]]);
    let c = det(2, &[&[2, 0], &[0, 2], &[0, 0]]);
    let e = det(2, &[&[1, 1], &[1, 0], &[0, 1]]);
    a.sub(&b).unwrap().add(&c).unwrap().sub(&e).unwrap()
}

fn c5_worked_example() -> Check {
    let start = Instant::now();
    let g = g_states();
    let g0 = ground_3_2();
    let et = e_k(1, 0, 3, 2).mul(&g0).unwrap();
    let eu = e_k(1, 1, 3, 2).mul(&g0).unwrap();
    // the identities hold with determinants in the written orbital order
    ensure(et == g[3].sub(&g[1]).unwrap(), || "e1(t) g0 != -g12 + g14".into())?;
    ensure(eu == g[4].sub(&g[2]).unwrap(), || "e1(u) g0 != -g13 + g15".into())?;

    // library coordinates: state i equals sign * g_k
    let basis = LevelBasis::new(3, 2, 3, F).map_err(|e| e.to_string())?;
    let mut to_paper = vec![(usize::MAX, 0i64); basis.len()];
    for i in 0..basis.len() {
        let s = basis.expansion(i);
        for (k, gk) in g.iter().enumerate() {
            if s == gk {
                to_paper[i] = (k, 1);
            } else if *s == gk.neg() {
                to_paper[i] = (k, -1);
            }
        }
        ensure(to_paper[i].0 != usize::MAX, || format!("basis state {i} is none of g11..g16"))?;
    }
    let in_paper = |coeffs: Vec<BigRational>| {
        let mut v = vec![BigRational::zero(); 6];
        for (i, c) in coeffs.into_iter().enumerate() {
            let (k, s) = to_paper[i];
            v[k] = c * q(s);
        }
        v
    };
    let dt = in_paper(basis.deflate(&et).map_err(|e| e.to_string())?);
    let du = in_paper(basis.deflate(&eu).map_err(|e| e.to_string())?);
    let vec6 = |xs: [i64; 6]| xs.iter().map(|&x| q(x)).collect::<Vec<_>>();
    ensure(dt == vec6([0, -1, 0, 1, 0, 0]), || format!("deflated e1(t) g0 = {dt:?}"))?;
    ensure(du == vec6([0, 0, -1, 0, 1, 0]), || format!("deflated e1(u) g0 = {du:?}"))?;
    let signs: Vec<i64> = (0..6).map(|k| to_paper.iter().find(|(j, _)| *j == k).unwrap().1).collect();

    let catalog = generate_shapes(3, 2, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let shapes_at = |grade| -> Vec<ExactPolynomial> {
        catalog.shapes_at(grade).map(|s| s.materialize().unwrap()).collect()
    };
    let eq29 = vec![
        g[0].clone(),
        g[1].add(&g[3]).unwrap(),
        g[2].add(&g[4]).unwrap(),
        g[5].clone(),
    ];
    ensure(same_polynomial_span(&shapes_at(3), &eq29), || "grade-3 shapes differ from S11..S14".into())?;
    ensure(same_polynomial_span(&shapes_at(4), &[s2_polynomial()]), || "grade-4 shape differs from S2".into())?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("library sign of g11..g16 relative to written order: {signs:?}"))
}

fn c6_full_catalogs() -> Check {
    let c23 = generate_shapes(2, 3, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let psi = |axis| var(2, 3, 0, axis).sub(&var(2, 3, 1, axis)).unwrap();
    let psi4 = psi(0).mul(&psi(1)).unwrap().mul(&psi(2)).unwrap();
    let expected = [psi(0), psi(1), psi(2), psi4];
    ensure(c23.len() == 4, || format!("(2,3) has {} shapes", c23.len()))?;
    for (s, e) in c23.shapes().iter().zip(&expected) {
        let p = s.materialize().map_err(|e| e.to_string())?;
        ensure(p == *e || p == e.neg(), || format!("shape {} is {}", s.id(), p.display()))?;
    }

    let start = Instant::now();
    let c33 = generate_shapes(3, 3, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected: BTreeMap<u32, usize> = BTreeMap::from([(2, 3), (3, 10), (4, 6), (5, 6), (6, 7), (7, 3), (9, 1)]);
    let mut found = c33.counts_by_grade();
    found.retain(|_, c| *c > 0);
    ensure(found == expected, || format!("(3,3) counts {found:?}"))?;
    ensure(c33.len() == 36, || format!("(3,3) has {} shapes", c33.len()))?;
    let last = c33.levels().iter().find(|l| l.grade == 9).ok_or("no grade-9 level")?;
    ensure(last.states - last.trivial_rank == 1 && last.shapes == 1, || format!("grade 9: {last:?}"))?;
    ensure(elapsed < Duration::from_secs(30 * 60), || format!("(3,3) took {elapsed:.2?}"))?;
    Ok(format!("(2,3): 4 shapes; (3,3): 36 shapes in {elapsed:.2?}, grade 9 complement 1 of {}", last.states))
}

fn c7_schur() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=4 {
        for w in 0..=6 {
            for lambda in Partition::all(w, n) {
                let a = schur_ssyt(&lambda, n);
                let b = schur_ratio(&lambda, n).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("s_{lambda} with N = {n}: tableaux and ratio differ"))?;
                checked += 1;
            }
        }
        for k in 0..=n {
            let col = schur_ssyt(&Partition::column(k), n);
            ensure(col == e_k(k, 0, n, 1), || format!("s_1^{k} != e_{k} for N = {n}"))?;
        }
    }
    let mut factored = 0;
    for n in 1..=4usize {
        let ground: Vec<Vec<u8>> = (0..n as u8).rev().map(|k| vec![k]).collect();
        let vander = det(1, &ground.iter().map(Vec::as_slice).collect::<Vec<_>>());
        let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                let orbs: Vec<Vec<u8>> = prefix.iter().map(|&k| vec![k]).collect();
                let psi = det(1, &orbs.iter().map(Vec::as_slice).collect::<Vec<_>>());
                let parts: Vec<u32> = prefix.iter().enumerate().map(|(i, &k)| k as u32 - (n - 1 - i) as u32).collect();
                let lambda = Partition::new(parts).map_err(|e| e.to_string())?;
                let product = schur_ssyt(&lambda, n).mul(&vander).unwrap();
                ensure(psi == product, || format!("{prefix:?} != s_{lambda} * Vandermonde"))?;
                let state = SlaterState::new(prefix.iter().map(|&k| OrbitalVector::new(&[k])).collect(), F)
                    .map_err(|e| e.to_string())?;
                let from_lib = factor_1d(&state).map_err(|e| e.to_string())?;
                ensure(from_lib == lambda, || format!("factor_1d({prefix:?}) = {from_lib}"))?;
                factored += 1;
                continue;
            }
            let top = prefix.last().map_or(8, |&k| k as i32 - 1);
            for k in 0..=top {
                let mut next = prefix.clone();
                next.push(k as u8);
                stack.push(next);
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} Schur pairs, {factored} determinants factored"))
}

fn c8_round_trip() -> Check {
    let start = Instant::now();
    let mut units = 0;
    for (n, d) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2)] {
        for s in [F, B] {
            for g in 0..=6 {
                let basis = LevelBasis::new(n, d, g, s).map_err(|e| e.to_string())?;
                for i in 0..basis.len() {
                    let v = basis.deflate(basis.expansion(i)).map_err(|e| e.to_string())?;
                    let unit = v.iter().enumerate().all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() });
                    ensure(unit, || format!("({n},{d},{s}) grade {g}: state {i} is not a unit vector"))?;
                    units += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut done = 0;
    while done < 100 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=2);
        let grade = rng.gen_range(0..=6);
        let p = random_antisymmetric(&mut rng, n, d, grade);
        if p.is_zero() {
            continue;
        }
        let basis = LevelBasis::new(n, d, grade, F).map_err(|e| e.to_string())?;
        let coeffs = basis.deflate(&p).map_err(|e| e.to_string())?;
        let mut back = ExactPolynomial::zero(n, d);
        for (state, c) in basis.states().iter().zip(&coeffs) {
            back.add_scaled(&state.expand(), c).unwrap();
        }
        ensure(back == p, || format!("({n},{d}) grade {grade}: reconstruction differs"))?;
        done += 1;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{units} unit vectors, {done} random polynomials"))
}

fn hermite_coefficients(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(2)];
    for k in 1..n {
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * BigInt::from(2 * k);
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn c9_coulomb() -> Check {
    let start = Instant::now();
    for n in 0..=6usize {
        for m in 0..=6usize {
            let lhs = int_poly_mul(&hermite_coefficients(n), &hermite_coefficients(m));
            let a = hermite_linearization(n as u32, m as u32);
            let mut rhs = vec![BigInt::zero(); n + m + 1];
            for (k, ak) in a.iter().enumerate() {
                for (i, h) in hermite_coefficients(k).iter().enumerate() {
                    rhs[i] += ak * h;
                }
            }
            ensure(lhs == rhs, || format!("linearization of H_{n} H_{m}"))?;
        }
    }

    for l in (0..=40u32).step_by(2) {
        let i3 = beta_integral(3, l).map_err(|e| e.to_string())?;
        ensure(i3.pi_power == 0 && i3.rational == BigRational::new(1.into(), (l + 1).into()), || {
            format!("I_3({l}) = {i3:?}")
        })?;
        let half = l as usize / 2;
        let binom = factorial(l as usize) / (factorial(half) * factorial(half));
        let i2 = beta_integral(2, l).map_err(|e| e.to_string())?;
        ensure(
            i2.pi_power == 1 && i2.rational == BigRational::new(binom, BigInt::one() << (l + 1)),
            || format!("I_2({l}) = {i2:?}"),
        )?;
    }

    let mut report = Vec::new();
    for d in [2, 3] {
        let oracle = CoulombOracle::new(d, 2);
        let table = CoulombTable::new();
        let zero = vec![0u8; d];
        let scale = table.element(&zero, &zero, &zero, &zero).unwrap();
        let mut worst_rel = 0.0f64;
        let mut worst_abs = 0.0f64;
        let mut compared = 0usize;
        let mut failure = None;
        oracle.for_each(|combo, numeric| {
            let [n, np, m, mp] = oracle.indices(combo);
            let exact = table.element(&n, &np, &m, &mp).unwrap();
            let diff = (numeric - exact).abs();
            compared += 1;
            // elements that vanish by cancellation only get an absolute check
            if exact.abs() > 1e-9 * scale {
                let rel = diff / exact.abs();
                worst_rel = worst_rel.max(rel);
                if rel > 1e-6 && failure.is_none() {
                    failure = Some(format!("d={d} {n:?} {np:?} {m:?} {mp:?}: closed {exact}, quadrature {numeric}"));
                }
            } else {
                worst_abs = worst_abs.max(diff / scale);
                if diff > 1e-9 * scale && failure.is_none() {
                    failure = Some(format!("d={d} {n:?} {np:?} {m:?} {mp:?}: closed {exact}, quadrature {numeric}"));
                }
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        // parity-forbidden tuples are exactly zero
        let total = 3usize.pow(4 * d as u32);
        let mut forbidden = 0;
        for code in 0..total {
            let mut digits = code;
            let mut idx = [vec![0u8; d], vec![0u8; d], vec![0u8; d], vec![0u8; d]];
            for axis in 0..d {
                for v in idx.iter_mut() {
                    v[axis] = (digits % 3) as u8;
                    digits /= 3;
                }
            }
            let odd = (0..d).any(|a| idx.iter().map(|v| v[a] as u32).sum::<u32>() % 2 == 1);
            if odd {
                let v = shapes_core::coulomb::two_body_exact(&idx[0], &idx[1], &idx[2], &idx[3]).unwrap();
                ensure(v.rational.is_zero(), || format!("{idx:?} should vanish by parity"))?;
                forbidden += 1;
            }
        }
        ensure(compared + forbidden == total, || format!("d={d}: covered {} of {total}", compared + forbidden))?;
        report.push(format!(
            "d={d}: {compared} elements, max rel err {worst_rel:.1e}, max abs err of cancelled ones {worst_abs:.1e}, {forbidden} parity zeros"
        ));
    }
    within(start, Duration::from_secs(300))?;
    Ok(report.join("; "))
}

fn square(half: f64, count: usize, dims: usize) -> Vec<AxisRange> {
    ["x", "y", "z"][..dims]
        .iter()
        .map(|name| AxisRange::new(*name, -half, half, count).unwrap())
        .collect()
}

fn c10_densities() -> Check {
    let start = Instant::now();
    let h = Realization::hermite();
    let g = g_states();
    let s12 = g[1].add(&g[3]).unwrap();
    let trivial = e_k(1, 0, 3, 2).mul(&ground_3_2()).unwrap();
    let axes = square(4.0, 81, 2);
    let a = one_particle_density(&s12, h, &axes).map_err(|e| e.to_string())?;
    let b = one_particle_density(&trivial, h, &axes).map_err(|e| e.to_string())?;
    let max_diff = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    ensure(max_diff < 1e-8, || format!("S12 and e1(t) g0 one-body densities differ by {max_diff:e}"))?;
    let cut = AxisRange::new("x", -3.0, 3.0, 61).unwrap();
    let a2 = two_particle_density_cut(&s12, h, &cut, &cut).map_err(|e| e.to_string())?;
    let b2 = two_particle_density_cut(&trivial, h, &cut, &cut).map_err(|e| e.to_string())?;
    let pair_diff = a2.values.iter().zip(&b2.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let mut worst = 0.0f64;
    let mut count = 0;
    let mut check = |p: &ExactPolynomial, r: Realization, axes: &[AxisRange], what: String| -> Result<(), String> {
        let rho = one_particle_density(p, r, axes).map_err(|e| e.to_string())?;
        let err = (rho.integral() - p.particle_count() as f64).abs();
        worst = worst.max(err);
        count += 1;
        ensure(err < 1e-6, || format!("{what}: integral {}", rho.integral()))
    };
    let c32 = generate_shapes(3, 2, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let wide = square(7.0, 141, 2);
    for s in c32.shapes() {
        let p = s.materialize().unwrap();
        check(&p, h, &wide, format!("(3,2) shape {} hermite", s.id()))?;
        for kind in [RealizationKind::BoxOpen, RealizationKind::BoxClosed] {
            let r = Realization::new(kind, 1.0).unwrap();
            let unit = vec![AxisRange::new("x", 0.0, 1.0, 65).unwrap(), AxisRange::new("y", 0.0, 1.0, 65).unwrap()];
            check(&p, r, &unit, format!("(3,2) shape {} {kind}", s.id()))?;
        }
    }
    check(&trivial, h, &wide, "e1(t) g0".into())?;
    let c23 = generate_shapes(2, 3, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let cube = square(6.0, 49, 3);
    for s in c23.shapes() {
        check(&s.materialize().unwrap(), h, &cube, format!("(2,3) shape {}", s.id()))?;
    }

    // (z1 - z2) times Phi1 + (x1 - x2)(y1 - y2) Phi2 with random Euler-boson Phis
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let random_symmetric = |rng: &mut ChaCha8Rng| {
        let mut phi = ExactPolynomial::zero(2, 3);
        for axis in 0..3 {
            for k in 1..=2 {
                for power in 0..=2u32 {
                    let c = rng.gen_range(-2..=2);
                    if c != 0 {
                        phi = phi.add(&e_k(k, axis, 2, 3).pow(power).scale(&q(c))).unwrap();
                    }
                }
            }
        }
        phi
    };
    let dz = var(2, 3, 0, 2).sub(&var(2, 3, 1, 2)).unwrap();
    let dxdy = var(2, 3, 0, 0).sub(&var(2, 3, 1, 0)).unwrap().mul(&var(2, 3, 0, 1).sub(&var(2, 3, 1, 1)).unwrap()).unwrap();
    let mut node_max = 0.0f64;
    let mut off_node = 0.0f64;
    for _ in 0..5 {
        let phi1 = random_symmetric(&mut rng);
        let phi2 = random_symmetric(&mut rng);
        let tilde = phi1.add(&dxdy.mul(&phi2).unwrap()).unwrap();
        let family = dz.mul(&tilde).unwrap();
        if family.is_zero() {
            continue;
        }
        let ev = realize_polynomial(&family, h);
        for _ in 0..200 {
            let mut c: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
            c[5] = c[2];
            node_max = node_max.max(ev.eval(&c).abs());
            c[5] += 0.3;
            off_node = off_node.max(ev.eval(&c).abs());
        }
    }
    ensure(node_max < 1e-12, || format!("(z1 - z2) family reaches {node_max:e} on z1 = z2"))?;
    ensure(off_node > 1e-3, || "the family vanishes everywhere".into())?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "one-body diff {max_diff:.1e} (pair-density diff {pair_diff:.2}); {count} densities, max |int - N| {worst:.1e}; node max {node_max:.1e}"
    ))
}

/// Trivial states in the block of the grade-4 shape of (3,2).
fn s2_partners(catalog: &ShapeCatalog) -> Vec<(String, ExactPolynomial)> {
    let s2 = catalog.shapes_at(4).next().unwrap();
    let block = s2.axis_degrees();
    catalog
        .trivial_states(4)
        .into_iter()
        .filter(|t| {
            let shape = catalog.shape(t.shape).unwrap();
            let mut deg = shape.axis_degrees();
            for (a, e) in deg.iter_mut().zip(t.euler.axis_degrees()) {
                *a += e;
            }
            deg == block
        })
        .map(|t| (t.to_string(), t.materialize(catalog).unwrap()))
        .collect()
}

fn c11_separation() -> Check {
    let start = Instant::now();
    let catalog = generate_shapes(3, 2, F, &GenerateOptions::default()).map_err(|e| e.to_string())?;
    let s2 = catalog.shapes_at(4).next().ok_or("no grade-4 shape")?.materialize().unwrap();
    ensure(same_polynomial_span(&[s2.clone()], &[s2_polynomial()]), || "grade-4 shape is not S2".into())?;
    let table = CoulombTable::new();
    let h = Realization::hermite();
    let v_s2 = many_body_vee(&s2, &s2, h, &table).map_err(|e| e.to_string())?;
    let partners = s2_partners(&catalog);
    ensure(partners.len() == 3, || format!("{} partners", partners.len()))?;
    println!("      S2 <V> = {v_s2:.10}");
    let mut min_gap = f64::INFINITY;
    for (label, p) in &partners {
        let v = many_body_vee(p, p, h, &table).map_err(|e| e.to_string())?;
        let gap = relative_gap(v_s2, v);
        println!("      {label:<16} <V> = {v:.10}  relative gap {gap:.3e}");
        ensure(gap > 1e-6, || format!("{label}: gap {gap:e}"))?;
        min_gap = min_gap.min(gap);
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("min relative gap {min_gap:.3e} over {} partners", partners.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("golden shape polynomials", c1_golden_polynomials),
        ("saturation P(1) = N!^(d-1)", c2_saturation),
        ("palindrome and mirror laws", c3_symmetry_laws),
        ("level dimensions", c4_level_dimensions),
        ("worked example N=3, d=2", c5_worked_example),
        ("full catalogs (2,3) and (3,3)", c6_full_catalogs),
        ("Schur oracle", c7_schur),
        ("deflation round trip", c8_round_trip),
        ("Coulomb closed form vs quadrature", c9_coulomb),
        ("density properties", c10_densities),
        ("Coulomb separation of S2", c11_separation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name} ({t:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} ({t:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
