//! Level-by-level construction of the shapes.
//!
//! At each grade the products of all lower shapes with Euler-boson monomials
//! of the complementary degree are deflated onto the level basis. The
//! orthogonal complement of their span, with the Slater states treated as
//! orthonormal coordinates, is the set of new shapes of that grade.
//!
//! Every product is homogeneous in each axis separately, so the level splits
//! into blocks of equal per-axis degree and the complement is computed block
//! by block.

mod linalg;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use linalg::{normalize, orthogonal_complement, rank, same_span, Echelon};

use crate::counting::{level_dimension, shape_polynomial, GradedQPolynomial, Statistics};
use crate::deflation::LevelBasis;
use crate::error::{Error, Result};
use crate::polycore::{enumerate_euler_monomials, EulerMonomial, ExactPolynomial, SlaterState};

/// Levels larger than this many states are refused unless the cap is raised.
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// Environment variable overriding [`DEFAULT_STATE_CAP`].
pub const STATE_CAP_ENV: &str = "SHAPES_STATE_CAP";

/// Position of a shape in a catalog: its grade and its index within the grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeId {
    pub grade: u32,
    pub index: usize,
}

impl fmt::Display for ShapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.grade, self.index)
    }
}

impl FromStr for ShapeId {
    type Err = Error;

    /// Parses `grade:index`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("shape id must look like GRADE:INDEX, got {s:?}"));
        let (g, i) = s.split_once(':').ok_or_else(bad)?;
        Ok(ShapeId {
            grade: g.trim().parse().map_err(|_| bad())?,
            index: i.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// One shape: a combination of the Slater (permanent) states of its grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeRecord {
    id: ShapeId,
    n: usize,
    d: usize,
    statistics: Statistics,
    /// Nonzero coefficients in level enumeration order.
    components: Vec<(SlaterState, BigRational)>,
}

impl ShapeRecord {
    pub fn new(
        id: ShapeId,
        n: usize,
        d: usize,
        statistics: Statistics,
        components: Vec<(SlaterState, BigRational)>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::invalid(format!("shape {id} has no components")));
        }
        for (s, c) in &components {
            if s.particle_count() != n || s.dim() != d || s.statistics() != statistics {
                return Err(Error::DimensionMismatch(format!("state {s} does not belong to shape {id}")));
            }
            if s.grade() != id.grade {
                return Err(Error::invalid(format!("state {s} is not of grade {}", id.grade)));
            }
            if c.is_zero() {
                return Err(Error::invalid(format!("zero coefficient for {s} in shape {id}")));
            }
        }
        Ok(ShapeRecord {
            id,
            n,
            d,
            statistics,
            components,
        })
    }

    pub fn id(&self) -> ShapeId {
        self.id
    }

    pub fn grade(&self) -> u32 {
        self.id.grade
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn components(&self) -> &[(SlaterState, BigRational)] {
        &self.components
    }

    /// Per-axis degrees shared by all components.
    pub fn axis_degrees(&self) -> Vec<u32> {
        self.components[0].0.axis_degrees()
    }

    /// The shape as an expanded polynomial.
    pub fn materialize(&self) -> Result<ExactPolynomial> {
        let mut p = ExactPolynomial::zero(self.n, self.d);
        for (s, c) in &self.components {
            p.add_scaled(&s.expand(), c)?;
        }
        Ok(p)
    }

    /// Dense coefficient vector over `basis`.
    pub fn coeff_vector(&self, basis: &LevelBasis) -> Result<Vec<BigRational>> {
        if basis.grade() != self.grade() || basis.particle_count() != self.n || basis.dim() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "shape {} against level of grade {}",
                self.id,
                basis.grade()
            )));
        }
        let mut v = vec![BigRational::zero(); basis.len()];
        for (s, c) in &self.components {
            let i = basis
                .index_of(s)
                .ok_or_else(|| Error::consistency(format!("state {s} missing from its level")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

/// Bookkeeping for one processed grade.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub grade: u32,
    pub states: usize,
    pub trivial_products: usize,
    pub trivial_rank: usize,
    pub shapes: usize,
    pub blocks: usize,
    pub largest_block: usize,
}

/// All shapes of one `(N, d, statistics)` up to `max_grade`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCatalog {
    n: usize,
    d: usize,
    statistics: Statistics,
    shape_polynomial: GradedQPolynomial,
    max_grade: u32,
    shapes: Vec<ShapeRecord>,
    levels: Vec<LevelSummary>,
}

impl ShapeCatalog {
    pub(crate) fn from_parts(
        n: usize,
        d: usize,
        statistics: Statistics,
        max_grade: u32,
        mut shapes: Vec<ShapeRecord>,
        levels: Vec<LevelSummary>,
    ) -> Result<Self> {
        shapes.sort_by_key(ShapeRecord::id);
        let catalog = ShapeCatalog {
            n,
            d,
            statistics,
            shape_polynomial: shape_polynomial(n, d, statistics)?,
            max_grade,
            shapes,
            levels,
        };
        for s in &catalog.shapes {
            if s.n != n || s.d != d || s.statistics != statistics {
                return Err(Error::DimensionMismatch(format!("shape {} does not match the catalog", s.id)));
            }
        }
        Ok(catalog)
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn shape_polynomial(&self) -> &GradedQPolynomial {
        &self.shape_polynomial
    }

    /// Highest grade that was processed.
    pub fn max_grade(&self) -> u32 {
        self.max_grade
    }

    /// Shapes ordered by grade, then index.
    pub fn shapes(&self) -> &[ShapeRecord] {
        &self.shapes
    }

    pub fn shapes_at(&self, grade: u32) -> impl Iterator<Item = &ShapeRecord> {
        self.shapes.iter().filter(move |s| s.grade() == grade)
    }

    pub fn shape(&self, id: ShapeId) -> Option<&ShapeRecord> {
        self.shapes.iter().find(|s| s.id == id)
    }

    pub fn levels(&self) -> &[LevelSummary] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Number of shapes per grade.
    pub fn counts_by_grade(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for s in &self.shapes {
            *out.entry(s.grade()).or_insert(0) += 1;
        }
        out
    }

    /// Whether every grade carrying shapes has been processed.
    pub fn is_complete(&self) -> bool {
        self.shape_polynomial.highest_degree().map_or(true, |g| self.max_grade >= g)
    }
}

/// A lower-grade shape times an Euler-boson monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialState {
    pub shape: ShapeId,
    pub euler: EulerMonomial,
}

impl TrivialState {
    pub fn grade(&self) -> u32 {
        self.shape.grade + self.euler.degree()
    }

    pub fn materialize(&self, catalog: &ShapeCatalog) -> Result<ExactPolynomial> {
        let shape = catalog
            .shape(self.shape)
            .ok_or_else(|| Error::invalid(format!("no shape {} in the catalog", self.shape)))?;
        shape.materialize()?.mul(&self.euler.materialize())
    }
}

impl fmt::Display for TrivialState {
    /// E.g. `2:0 * e1(t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * {}", self.shape, self.euler)
    }
}

impl ShapeCatalog {
    /// All products of catalog shapes below `grade` with Euler-boson
    /// monomials of the complementary degree, by shape then monomial.
    pub fn trivial_states(&self, grade: u32) -> Vec<TrivialState> {
        self.shapes
            .iter()
            .filter(|s| s.grade() < grade)
            .flat_map(|s| {
                enumerate_euler_monomials(self.n, self.d, grade - s.grade())
                    .into_iter()
                    .map(move |euler| TrivialState { shape: s.id(), euler })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerateOptions {
    /// Last grade to process; defaults to the degree of the shape polynomial.
    pub max_grade: Option<u32>,
    pub state_cap: usize,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            max_grade: None,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl GenerateOptions {
    /// Defaults, with the state cap taken from `SHAPES_STATE_CAP` if set.
    pub fn from_env() -> Result<Self> {
        let mut opts = Self::default();
        if let Ok(v) = std::env::var(STATE_CAP_ENV) {
            opts.state_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("{STATE_CAP_ENV} must be a non-negative integer, got {v:?}")))?;
        }
        Ok(opts)
    }
}

/// Runs the construction for all grades up to the configured maximum.
pub fn generate_shapes(n: usize, d: usize, statistics: Statistics, options: &GenerateOptions) -> Result<ShapeCatalog> {
    generate_shapes_with(n, d, statistics, options, |_| {})
}

/// Like [`generate_shapes`], reporting each finished level to `progress`.
pub fn generate_shapes_with<F>(
    n: usize,
    d: usize,
    statistics: Statistics,
    options: &GenerateOptions,
    mut progress: F,
) -> Result<ShapeCatalog>
where
    F: FnMut(&LevelSummary),
{
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("need N >= 1 and d >= 1, got N = {n}, d = {d}")));
    }
    let poly = shape_polynomial(n, d, statistics)?;
    let ground = poly.lowest_degree().unwrap_or(0);
    let max_grade = options.max_grade.unwrap_or_else(|| poly.highest_degree().unwrap_or(0));

    let mut shapes: Vec<ShapeRecord> = Vec::new();
    let mut materialized: Vec<ExactPolynomial> = Vec::new();
    let mut levels = Vec::new();
    for grade in ground..=max_grade {
        let expected = poly.coeff(grade).to_usize().unwrap_or(usize::MAX);
        let level = Level::build(n, d, grade, statistics, options.state_cap)?;
        let products = trivial_products(&level.basis, &shapes, &materialized)?;
        let (found, summary) = level.complement(&products);
        if found.len() != expected {
            return Err(Error::consistency(format!(
                "grade {grade}: expected {expected} new shapes, found {} ({} states, trivial rank {})",
                found.len(),
                summary.states,
                summary.trivial_rank
            )));
        }
        for (index, coeffs) in found.into_iter().enumerate() {
            let components = coeffs
                .into_iter()
                .map(|(i, c)| (level.basis.states()[i].clone(), c))
                .collect();
            let record = ShapeRecord::new(ShapeId { grade, index }, n, d, statistics, components)?;
            materialized.push(record.materialize()?);
            shapes.push(record);
        }
        progress(&summary);
        levels.push(summary);
    }
    ShapeCatalog::from_parts(n, d, statistics, max_grade, shapes, levels)
}

/// A level basis split into blocks of equal per-axis degree.
struct Level {
    basis: LevelBasis,
    /// Global state indices of each block, ascending.
    blocks: Vec<Vec<usize>>,
    /// For every state: its block and its position inside it.
    position: Vec<(usize, usize)>,
}

impl Level {
    fn build(n: usize, d: usize, grade: u32, statistics: Statistics, cap: usize) -> Result<Self> {
        let dim = level_dimension(n, d, grade, statistics)?;
        if dim > BigInt::from(cap) {
            return Err(Error::StateCap {
                grade,
                states: dim.to_usize().unwrap_or(usize::MAX),
                cap,
            });
        }
        let basis = LevelBasis::new(n, d, grade, statistics)?;
        if BigInt::from(basis.len()) != dim {
            return Err(Error::consistency(format!(
                "grade {grade}: enumerated {} states, the q-series predicts {dim}",
                basis.len()
            )));
        }
        let mut by_degrees: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for (i, s) in basis.states().iter().enumerate() {
            by_degrees.entry(s.axis_degrees()).or_default().push(i);
        }
        let blocks: Vec<Vec<usize>> = by_degrees.into_values().collect();
        let mut position = vec![(0, 0); basis.len()];
        for (b, members) in blocks.iter().enumerate() {
            for (k, &i) in members.iter().enumerate() {
                position[i] = (b, k);
            }
        }
        Ok(Level {
            basis,
            blocks,
            position,
        })
    }

    /// Complement of the span of `products` (sparse vectors over the level),
    /// ordered by the global index of each vector's free column.
    fn complement(&self, products: &[Vec<(usize, BigRational)>]) -> (Vec<Vec<(usize, BigRational)>>, LevelSummary) {
        let mut per_block: Vec<Vec<&Vec<(usize, BigRational)>>> = vec![Vec::new(); self.blocks.len()];
        for v in products {
            if let Some((i, _)) = v.first() {
                per_block[self.position[*i].0].push(v);
            }
        }
        let results: Vec<(usize, Vec<(usize, Vec<(usize, BigRational)>)>)> = self
            .blocks
            .par_iter()
            .zip(per_block.par_iter())
            .map(|(members, vectors)| {
                let mut e = Echelon::new(members.len());
                for v in vectors {
                    let local: Vec<(usize, BigRational)> =
                        v.iter().map(|(i, c)| (self.position[*i].1, c.clone())).collect();
                    e.insert_sparse(&local);
                }
                let comp = e
                    .complement()
                    .into_iter()
                    .map(|(free, w)| {
                        let sparse = w
                            .into_iter()
                            .enumerate()
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(k, c)| (members[k], c))
                            .collect();
                        (members[free], sparse)
                    })
                    .collect();
                (e.rank(), comp)
            })
            .collect();
        let trivial_rank = results.iter().map(|(r, _)| r).sum();
        let mut found: Vec<(usize, Vec<(usize, BigRational)>)> =
            results.into_iter().flat_map(|(_, comp)| comp).collect();
        found.sort_by_key(|(free, _)| *free);
        let summary = LevelSummary {
            grade: self.basis.grade(),
            states: self.basis.len(),
            trivial_products: products.len(),
            trivial_rank,
            shapes: found.len(),
            blocks: self.blocks.len(),
            largest_block: self.blocks.iter().map(Vec::len).max().unwrap_or(0),
        };
        (found.into_iter().map(|(_, v)| v).collect(), summary)
    }
}

/// Deflated products `shape * euler` landing in the grade of `basis`, for
/// every shape below that grade and every Euler monomial of matching degree.
fn trivial_products(
    basis: &LevelBasis,
    shapes: &[ShapeRecord],
    materialized: &[ExactPolynomial],
) -> Result<Vec<Vec<(usize, BigRational)>>> {
    let grade = basis.grade();
    let (n, d) = (basis.particle_count(), basis.dim());
    let mut euler: BTreeMap<u32, Vec<ExactPolynomial>> = BTreeMap::new();
    let mut jobs: Vec<(usize, u32, usize)> = Vec::new();
    for (si, s) in shapes.iter().enumerate() {
        if s.grade() >= grade {
            continue;
        }
        let deg = grade - s.grade();
        let list = euler.entry(deg).or_insert_with(|| {
            enumerate_euler_monomials(n, d, deg)
                .par_iter()
                .map(EulerMonomial::materialize)
                .collect()
        });
        jobs.extend((0..list.len()).map(|k| (si, deg, k)));
    }
    jobs.par_iter()
        .map(|&(si, deg, k)| {
            let product = materialized[si].mul(&euler[&deg][k])?;
            let coeffs = basis.deflate(&product)?;
            Ok(coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect())
        })
        .collect()
}

/// Outcome of [`verify_span`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpanReport {
    pub grade: u32,
    pub level_dimension: usize,
    /// Number of shape times Euler-monomial products, shapes of this grade included.
    pub products: usize,
    pub rank: usize,
    /// Nonzero entries of the overlap matrix among the products.
    pub overlap_nonzeros: usize,
    pub overlap_entries: usize,
}

impl SpanReport {
    pub fn is_complete(&self) -> bool {
        self.rank == self.level_dimension
    }

    /// Fraction of zero entries in the overlap matrix.
    pub fn sparsity(&self) -> f64 {
        if self.overlap_entries == 0 {
            return 1.0;
        }
        1.0 - self.overlap_nonzeros as f64 / self.overlap_entries as f64
    }
}

/// Checks that the shapes of `catalog` times Euler-boson monomials span the
/// whole level of `grade`. A rank deficit is reported, not raised.
pub fn verify_span(catalog: &ShapeCatalog, grade: u32, state_cap: usize) -> Result<SpanReport> {
    let needed = catalog
        .shape_polynomial
        .highest_degree()
        .map_or(grade, |g| g.min(grade));
    if catalog.max_grade < needed {
        return Err(Error::invalid(format!(
            "catalog only reaches grade {}, grade {grade} needs shapes up to {needed}",
            catalog.max_grade
        )));
    }
    let level = Level::build(catalog.n, catalog.d, grade, catalog.statistics, state_cap)?;
    let lower: Vec<ShapeRecord> = catalog.shapes.iter().filter(|s| s.grade() < grade).cloned().collect();
    let materialized = lower.iter().map(ShapeRecord::materialize).collect::<Result<Vec<_>>>()?;
    let mut products = trivial_products(&level.basis, &lower, &materialized)?;
    for s in catalog.shapes_at(grade) {
        let v = s.coeff_vector(&level.basis)?;
        products.push(v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }

    let mut per_block: Vec<Vec<&Vec<(usize, BigRational)>>> = vec![Vec::new(); level.blocks.len()];
    for v in &products {
        if let Some((i, _)) = v.first() {
            per_block[level.position[*i].0].push(v);
        }
    }
    let (rank, overlap_nonzeros) = level
        .blocks
        .par_iter()
        .zip(per_block.par_iter())
        .map(|(members, vectors)| {
            let mut e = Echelon::new(members.len());
            for v in vectors {
                let local: Vec<(usize, BigRational)> =
                    v.iter().map(|(i, c)| (level.position[*i].1, c.clone())).collect();
                e.insert_sparse(&local);
            }
            let dense: Vec<BTreeMap<usize, &BigRational>> =
                vectors.iter().map(|v| v.iter().map(|(i, c)| (*i, c)).collect()).collect();
            let mut nonzeros = 0;
            for a in &dense {
                for b in &dense {
                    let dot: BigRational = a
                        .iter()
                        .filter_map(|(i, x)| b.get(i).map(|y| *x * *y))
                        .sum();
                    if !dot.is_zero() {
                        nonzeros += 1;
                    }
                }
            }
            (e.rank(), nonzeros)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(SpanReport {
        grade,
        level_dimension: level.basis.len(),
        products: products.len(),
        rank,
        overlap_nonzeros,
        overlap_entries: products.len() * products.len(),
    })
}
