//! The `verify` subcommand: invariant checks for one (N, d).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use shapes_core::counting::{level_dimension, shape_polynomial, total_shape_count};
use shapes_core::deflation::LevelBasis;
use shapes_core::format::{catalog_from_json, catalog_to_json};
use shapes_core::polycore::enumerate_basis;
use shapes_core::schur::factor_1d;
use shapes_core::shapegen::{generate_shapes, verify_span, GenerateOptions, ShapeCatalog};
use shapes_core::{Result, Statistics};

use crate::{CliResult, Failure};

struct Row {
    name: String,
    stat: String,
    pass: bool,
    detail: String,
}

struct Table(Vec<Row>);

impl Table {
    fn push(&mut self, name: &str, stat: impl ToString, pass: bool, detail: impl Into<String>) {
        self.0.push(Row {
            name: name.to_string(),
            stat: stat.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    fn print(&self) {
        let w = self.0.iter().map(|r| r.name.len()).max().unwrap_or(5).max(5);
        println!("{:<w$}  {:<9}  {:<6}  detail", "check", "stat", "result");
        for r in &self.0 {
            let result = if r.pass { "PASS" } else { "FAIL" };
            println!("{:<w$}  {:<9}  {:<6}  {}", r.name, r.stat, result, r.detail);
        }
    }
}

pub(crate) fn run(n: usize, d: usize, stat: Option<Statistics>, opts: GenerateOptions) -> CliResult {
    if n == 0 || d == 0 {
        return Err(Failure::Usage(format!("need --n >= 1 and --d >= 1, got {n} and {d}")));
    }
    let stats = match stat {
        Some(s) => vec![s],
        None => vec![Statistics::Fermion, Statistics::Boson],
    };
    let mut table = Table(Vec::new());
    counting_checks(n, d, &stats, &mut table)?;
    for &s in &stats {
        catalog_checks(n, d, s, &opts, &mut table)?;
    }
    table.print();
    let failed: Vec<String> = table.0.iter().filter(|r| !r.pass).map(|r| format!("{} ({})", r.name, r.stat)).collect();
    if failed.is_empty() {
        println!("all {} checks passed", table.0.len());
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failed.join(", "))))
    }
}

fn counting_checks(n: usize, d: usize, stats: &[Statistics], table: &mut Table) -> Result<()> {
    let expected = total_shape_count(n, d);
    for &s in stats {
        let p = shape_polynomial(n, d, s)?;
        let at_one = p.eval_at_one();
        table.push("shape count P(1) = N!^(d-1)", s, at_one == expected, format!("{at_one}"));
        if d % 2 == 0 {
            table.push("palindromic shape polynomial", s, p.is_palindromic(), p.to_string());
        }
    }
    if d % 2 == 1 && stats.len() == 2 {
        let f = shape_polynomial(n, d, Statistics::Fermion)?.coefficient_list().1;
        let mut b = shape_polynomial(n, d, Statistics::Boson)?.coefficient_list().1;
        b.reverse();
        table.push("fermion/boson mirror", "both", f == b, format!("{} coefficients", f.len()));
    }
    Ok(())
}

fn catalog_checks(n: usize, d: usize, s: Statistics, opts: &GenerateOptions, table: &mut Table) -> Result<()> {
    let catalog = generate_shapes(n, d, s, opts)?;
    let p = catalog.shape_polynomial().clone();
    let top = p.highest_degree().unwrap_or(0);
    let lowest = p.lowest_degree().unwrap_or(0);

    let mut dims_ok = true;
    let mut dims = Vec::new();
    for g in lowest..=top {
        let series = level_dimension(n, d, g, s)?;
        let listed = enumerate_basis(n, d, g, s).len();
        dims_ok &= series == BigInt::from(listed);
        dims.push(listed.to_string());
    }
    table.push("level dimensions: series = enumeration", s, dims_ok, dims.join(","));

    let counts = catalog.counts_by_grade();
    let counts_ok = (lowest..=top).all(|g| BigInt::from(counts.get(&g).copied().unwrap_or(0)) == p.coeff(g));
    table.push(
        "shapes per grade match P",
        s,
        counts_ok && BigInt::from(catalog.len()) == total_shape_count(n, d),
        format!("{} shapes", catalog.len()),
    );

    let symmetric = catalog.shapes().iter().try_fold(true, |ok, shape| {
        let m = shape.materialize()?;
        Ok::<_, shapes_core::Error>(
            ok && !m.is_zero()
                && match s {
                    Statistics::Fermion => m.is_antisymmetric(),
                    Statistics::Boson => m.is_symmetric(),
                },
        )
    })?;
    table.push("shapes have the right exchange symmetry", s, symmetric, "");

    let (round_trip, ortho, pairs) = level_checks(&catalog)?;
    table.push("deflation reproduces every shape", s, round_trip, "");
    table.push("shapes orthogonal to trivial states", s, ortho, format!("{pairs} products"));

    let mut span_ok = true;
    let mut ranks = Vec::new();
    for g in lowest..=top + 1 {
        let report = verify_span(&catalog, g, opts.state_cap)?;
        span_ok &= report.is_complete();
        ranks.push(format!("{}/{}", report.rank, report.level_dimension));
    }
    table.push("shapes x Euler bosons span each level", s, span_ok, ranks.join(","));

    let json = catalog_to_json(&catalog)?;
    let again = catalog_from_json(&json)?;
    table.push(
        "catalog JSON round trip",
        s,
        again == catalog && catalog_to_json(&again)? == json,
        format!("{} bytes", json.len()),
    );

    if d == 1 && s == Statistics::Fermion {
        let mut ok = true;
        for g in lowest..=lowest + 6 {
            for state in enumerate_basis(n, 1, g, s) {
                ok &= factor_1d(&state).is_ok();
            }
        }
        table.push("1D determinants factor as Schur x Vandermonde", s, ok, "");
    }
    Ok(())
}

fn level_checks(catalog: &ShapeCatalog) -> Result<(bool, bool, usize)> {
    let (n, d, s) = (catalog.particle_count(), catalog.dim(), catalog.statistics());
    let mut round_trip = true;
    let mut ortho = true;
    let mut pairs = 0;
    for (&g, _) in catalog.counts_by_grade().iter().filter(|(_, &c)| c > 0) {
        let basis = LevelBasis::new(n, d, g, s)?;
        let vectors: Vec<Vec<BigRational>> = catalog
            .shapes_at(g)
            .map(|shape| shape.coeff_vector(&basis))
            .collect::<Result<_>>()?;
        for (shape, v) in catalog.shapes_at(g).zip(&vectors) {
            round_trip &= basis.deflate(&shape.materialize()?)? == *v;
        }
        let trivial = catalog.trivial_states(g);
        pairs += trivial.len();
        let all_zero = trivial
            .par_iter()
            .map(|t| {
                let w = basis.deflate(&t.materialize(catalog)?)?;
                Ok(vectors.iter().all(|v| {
                    let dot: BigRational = v.iter().zip(&w).map(|(a, b)| a * b).sum();
                    dot.is_zero()
                }))
            })
            .collect::<Result<Vec<bool>>>()?;
        ortho &= all_zero.into_iter().all(|x| x);
    }
    Ok((round_trip, ortho, pairs))
}
