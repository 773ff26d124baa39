//! Concrete realizations of formal polynomials and their densities.
//!
//! A monomial `t_i^k u_i^l ...` is mapped factor by factor to products of
//! single-particle functions: unnormalized Hermite functions
//! `phi_k(x) = H_k(x/a) e^{-x^2/2a^2}` for the oscillator, `cos(k pi x/L)` or
//! `sin((k+1) pi x/L)` on `[0, L]` for a box. The map is linear but not
//! multiplicative, so it is only ever applied to expanded polynomials.

pub mod quadrature;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::FORMAT_VERSION;
use crate::polycore::ExactPolynomial;

/// Nodes per integrated dimension for oscillator overlaps.
pub const HERMITE_NODES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizationKind {
    HermiteOscillator,
    /// Standing waves `cos(k pi x / L)`.
    BoxOpen,
    /// Standing waves `sin((k + 1) pi x / L)`.
    BoxClosed,
}

impl fmt::Display for RealizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RealizationKind::HermiteOscillator => "hermite",
            RealizationKind::BoxOpen => "box-open",
            RealizationKind::BoxClosed => "box-closed",
        })
    }
}

impl FromStr for RealizationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" | "oscillator" | "hermite-oscillator" | "hermite_oscillator" => {
                Ok(RealizationKind::HermiteOscillator)
            }
            "box-open" | "box_open" | "cos" => Ok(RealizationKind::BoxOpen),
            "box-closed" | "box_closed" | "sin" => Ok(RealizationKind::BoxClosed),
            _ => Err(Error::invalid(format!(
                "unknown realization {s:?} (expected hermite, box-open or box-closed)"
            ))),
        }
    }
}

/// Single-particle function family plus its length scale: the oscillator
/// length for [`RealizationKind::HermiteOscillator`], the box size otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub kind: RealizationKind,
    pub length_scale: f64,
}

impl Realization {
    pub fn new(kind: RealizationKind, length_scale: f64) -> Result<Self> {
        if !(length_scale.is_finite() && length_scale > 0.0) {
            return Err(Error::invalid(format!("length scale must be positive, got {length_scale}")));
        }
        Ok(Realization { kind, length_scale })
    }

    /// Oscillator with unit length.
    pub fn hermite() -> Self {
        Realization {
            kind: RealizationKind::HermiteOscillator,
            length_scale: 1.0,
        }
    }

    /// `phi_0(x) ..= phi_kmax(x)` into `out`.
    pub fn orbital_values(&self, x: f64, kmax: usize, out: &mut Vec<f64>) {
        out.clear();
        let l = self.length_scale;
        match self.kind {
            RealizationKind::HermiteOscillator => {
                let xi = x / l;
                let g = (-0.5 * xi * xi).exp();
                let (mut h0, mut h1) = (1.0, 2.0 * xi);
                out.push(g);
                if kmax >= 1 {
                    out.push(h1 * g);
                }
                for k in 1..kmax {
                    let h2 = 2.0 * xi * h1 - 2.0 * k as f64 * h0;
                    h0 = h1;
                    h1 = h2;
                    out.push(h1 * g);
                }
            }
            RealizationKind::BoxOpen | RealizationKind::BoxClosed => {
                let inside = (0.0..=l).contains(&x);
                let shift = if self.kind == RealizationKind::BoxClosed { 1.0 } else { 0.0 };
                for k in 0..=kmax {
                    let arg = (k as f64 + shift) * PI * x / l;
                    out.push(match (inside, self.kind) {
                        (false, _) => 0.0,
                        (true, RealizationKind::BoxOpen) => arg.cos(),
                        (true, _) => arg.sin(),
                    });
                }
            }
        }
    }

    /// `S[k][l] = int phi_k phi_l dx` for `k, l <= kmax`, by quadrature.
    /// Entries that vanish up to rounding are set to exactly zero.
    pub fn overlap_matrix(&self, kmax: usize) -> Vec<Vec<f64>> {
        let l = self.length_scale;
        let mut s = vec![vec![0.0; kmax + 1]; kmax + 1];
        let mut vals = Vec::new();
        match self.kind {
            RealizationKind::HermiteOscillator => {
                // the Gaussian factor of phi_k phi_l is the Hermite weight
                let rule = quadrature::gauss_hermite(HERMITE_NODES.max(kmax + 1));
                for (&xi, &w) in rule.nodes.iter().zip(&rule.weights) {
                    self.orbital_values(xi * l, kmax, &mut vals);
                    let g = (xi * xi).exp();
                    for k in 0..=kmax {
                        for m in 0..=kmax {
                            s[k][m] += w * l * vals[k] * vals[m] * g;
                        }
                    }
                }
            }
            RealizationKind::BoxOpen | RealizationKind::BoxClosed => {
                let rule = quadrature::gauss_legendre(64.max(2 * kmax + 8), 0.0, l);
                for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                    self.orbital_values(x, kmax, &mut vals);
                    for k in 0..=kmax {
                        for m in 0..=kmax {
                            s[k][m] += w * vals[k] * vals[m];
                        }
                    }
                }
            }
        }
        for k in 0..=kmax {
            for m in 0..=kmax {
                if k != m && s[k][m].abs() <= 1e-12 * (s[k][k] * s[m][m]).sqrt() {
                    s[k][m] = 0.0;
                }
            }
        }
        s
    }
}

/// Floating-point image of an expanded polynomial under a realization.
#[derive(Debug, Clone)]
pub struct Evaluator {
    n: usize,
    d: usize,
    realization: Realization,
    kmax: usize,
    terms: Vec<(Vec<u8>, f64)>,
    scale: f64,
}

/// Builds the evaluator `R^{N d} -> R` of `p`, term by term.
pub fn realize_polynomial(p: &ExactPolynomial, r: Realization) -> Evaluator {
    let (terms, scale) = float_terms(p);
    let kmax = terms
        .iter()
        .flat_map(|(e, _)| e.iter().copied())
        .max()
        .unwrap_or(0) as usize;
    Evaluator {
        n: p.particle_count(),
        d: p.dim(),
        realization: r,
        kmax,
        terms,
        scale,
    }
}

/// Coefficients divided by the largest magnitude, and that magnitude.
fn float_terms(p: &ExactPolynomial) -> (Vec<(Vec<u8>, f64)>, f64) {
    let Some(max) = p.terms().map(|(_, c)| c.abs()).max() else {
        return (Vec::new(), 0.0);
    };
    let scale = max.to_f64().unwrap_or(f64::MAX);
    let terms = p
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), (c / &max).to_f64().unwrap_or(0.0)))
        .collect();
    (terms, scale)
}

impl Evaluator {
    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    /// Value at `coords`, laid out particle by particle (`x_1, y_1, x_2, ...`).
    pub fn eval(&self, coords: &[f64]) -> f64 {
        assert_eq!(coords.len(), self.n * self.d, "coordinate count");
        let mut tables: Vec<Vec<f64>> = Vec::with_capacity(coords.len());
        let mut buf = Vec::new();
        for &x in coords {
            self.realization.orbital_values(x, self.kmax, &mut buf);
            tables.push(buf.clone());
        }
        let sum: f64 = self
            .terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(&tables).map(|(&k, t)| t[k as usize]).product::<f64>())
            .sum();
        sum * self.scale
    }
}

/// One sampled axis: `count` equally spaced points from `min` to `max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(name: impl Into<String>, min: f64, max: f64, count: usize) -> Result<Self> {
        let name = name.into();
        if count == 0 || !min.is_finite() || !max.is_finite() || (count > 1 && max <= min) {
            return Err(Error::invalid(format!("bad axis {name}: {min}..{max} with {count} points")));
        }
        Ok(AxisRange { name, min, max, count })
    }

    pub fn step(&self) -> f64 {
        if self.count > 1 {
            (self.max - self.min) / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.min + i as f64 * self.step()).collect()
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// `name:min:max:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("axis must look like NAME:MIN:MAX:COUNT, got {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [name, min, max, count] = parts.as_slice() else {
            return Err(bad());
        };
        AxisRange::new(
            *name,
            min.parse().map_err(|_| bad())?,
            max.parse().map_err(|_| bad())?,
            count.parse().map_err(|_| bad())?,
        )
    }
}

/// Parses a comma-separated list of axes, e.g. `x:-4:4:81,y:-4:4:81`.
pub fn parse_grid(spec: &str) -> Result<Vec<AxisRange>> {
    spec.split(',').map(str::parse).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    OneParticle,
    /// Two particles on the diagonals `x1 = (x, ..., x)`, `x2 = (y, ..., y)`.
    TwoParticleCut,
}

/// Density samples on a rectangular grid, first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub kind: DensityKind,
    pub n: usize,
    pub d: usize,
    pub realization: Realization,
    pub axes: Vec<AxisRange>,
    pub values: Vec<f64>,
    /// Integral of the density over its full domain: `N` for one particle,
    /// `N (N - 1)` for pairs.
    pub normalization: f64,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    format_version: u32,
    kind: DensityKind,
    n: usize,
    d: usize,
    realization: RealizationKind,
    length_scale: f64,
    axes: &'a [AxisRange],
    normalization: f64,
    grid_integral: f64,
}

impl DensityGrid {
    /// Trapezoid-rule integral over the sampled box.
    pub fn integral(&self) -> f64 {
        let weights: Vec<Vec<f64>> = self
            .axes
            .iter()
            .map(|a| {
                let h = a.step();
                (0..a.count)
                    .map(|i| if a.count == 1 { 1.0 } else if i == 0 || i + 1 == a.count { h / 2.0 } else { h })
                    .collect()
            })
            .collect();
        let mut total = 0.0;
        for (flat, v) in self.values.iter().enumerate() {
            let mut w = 1.0;
            let mut rest = flat;
            for (a, ws) in self.axes.iter().zip(&weights).rev() {
                w *= ws[rest % a.count];
                rest /= a.count;
            }
            total += w * v;
        }
        total
    }

    /// Grid points with their values, first axis slowest.
    pub fn samples(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        let points: Vec<Vec<f64>> = self.axes.iter().map(AxisRange::points).collect();
        self.values.iter().enumerate().map(move |(flat, &v)| {
            let mut coords = vec![0.0; self.axes.len()];
            let mut rest = flat;
            for (k, a) in self.axes.iter().enumerate().rev() {
                coords[k] = points[k][rest % a.count];
                rest /= a.count;
            }
            (coords, v)
        })
    }

    /// `axis names..., value` header and one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for a in &self.axes {
            out.push_str(&a.name);
            out.push(',');
        }
        out.push_str("value\n");
        for (coords, v) in self.samples() {
            for c in coords {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{v:e}\n"));
        }
        out
    }

    pub fn sidecar_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&Sidecar {
            format_version: FORMAT_VERSION,
            kind: self.kind,
            n: self.n,
            d: self.d,
            realization: self.realization.kind,
            length_scale: self.realization.length_scale,
            axes: &self.axes,
            normalization: self.normalization,
            grid_integral: self.integral(),
        })?)
    }

    /// Writes the CSV to `path` and the metadata next to it with a `.json`
    /// extension.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        std::fs::write(path.with_extension("json"), self.sidecar_json()? + "\n")?;
        Ok(())
    }
}

/// `sum over (bra, ket) of w * prod phi_bra phi_ket` over the retained
/// coordinates, with the others integrated out, plus the full norm.
struct Reduced {
    entries: Vec<(Vec<u8>, Vec<u8>, f64)>,
    norm: f64,
    kmax: usize,
}

fn reduce(p: &ExactPolynomial, r: Realization, retained: usize) -> Result<Reduced> {
    if p.is_zero() {
        return Err(Error::invalid("the zero polynomial has no density"));
    }
    let (terms, _) = float_terms(p);
    let split = retained * p.dim();
    let kmax = terms.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
    let s = r.overlap_matrix(kmax);
    let mut acc: HashMap<(Vec<u8>, Vec<u8>), f64> = HashMap::new();
    let mut norm = 0.0;
    for (ea, ca) in &terms {
        for (eb, cb) in &terms {
            let mut tail = ca * cb;
            for (&i, &j) in ea[split..].iter().zip(&eb[split..]) {
                tail *= s[i as usize][j as usize];
                if tail == 0.0 {
                    break;
                }
            }
            if tail == 0.0 {
                continue;
            }
            let head: f64 = ea[..split]
                .iter()
                .zip(&eb[..split])
                .map(|(&i, &j)| s[i as usize][j as usize])
                .product();
            norm += tail * head;
            *acc.entry((ea[..split].to_vec(), eb[..split].to_vec())).or_insert(0.0) += tail;
        }
    }
    if !(norm > 0.0) {
        return Err(Error::invalid("state has zero norm in this realization"));
    }
    let mut entries: Vec<(Vec<u8>, Vec<u8>, f64)> = acc
        .into_iter()
        .filter(|(_, w)| *w != 0.0)
        .map(|((a, b), w)| (a, b, w))
        .collect();
    entries.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    Ok(Reduced { entries, norm, kmax })
}

impl Reduced {
    fn eval(&self, r: Realization, coords: &[f64]) -> f64 {
        let mut buf = Vec::new();
        let tables: Vec<Vec<f64>> = coords
            .iter()
            .map(|&x| {
                r.orbital_values(x, self.kmax, &mut buf);
                buf.clone()
            })
            .collect();
        self.entries
            .iter()
            .map(|(a, b, w)| {
                w * a
                    .iter()
                    .zip(b)
                    .zip(&tables)
                    .map(|((&i, &j), t)| t[i as usize] * t[j as usize])
                    .product::<f64>()
            })
            .sum::<f64>()
            / self.norm
    }
}

fn grid_points(axes: &[AxisRange]) -> Vec<Vec<f64>> {
    let points: Vec<Vec<f64>> = axes.iter().map(AxisRange::points).collect();
    let total: usize = axes.iter().map(|a| a.count).product();
    (0..total)
        .map(|flat| {
            let mut coords = vec![0.0; axes.len()];
            let mut rest = flat;
            for k in (0..axes.len()).rev() {
                coords[k] = points[k][rest % axes[k].count];
                rest /= axes[k].count;
            }
            coords
        })
        .collect()
}

/// `rho(r) = N int |Psi|^2 dx_2 ... dx_N / <Psi|Psi>` on a grid with one
/// axis per space dimension.
pub fn one_particle_density(p: &ExactPolynomial, r: Realization, axes: &[AxisRange]) -> Result<DensityGrid> {
    if axes.len() != p.dim() {
        return Err(Error::invalid(format!(
            "one-particle grid needs {} axes, got {}",
            p.dim(),
            axes.len()
        )));
    }
    let reduced = reduce(p, r, 1)?;
    let n = p.particle_count() as f64;
    let values = grid_points(axes)
        .par_iter()
        .map(|x| (n * reduced.eval(r, x)).max(0.0))
        .collect();
    Ok(DensityGrid {
        kind: DensityKind::OneParticle,
        n: p.particle_count(),
        d: p.dim(),
        realization: r,
        axes: axes.to_vec(),
        values,
        normalization: n,
    })
}

/// Pair density `N (N-1) int |Psi|^2 dx_3 ... dx_N / <Psi|Psi>` at
/// `x_1 = (x, ..., x)`, `x_2 = (y, ..., y)`.
pub fn two_particle_density_cut(
    p: &ExactPolynomial,
    r: Realization,
    x: &AxisRange,
    y: &AxisRange,
) -> Result<DensityGrid> {
    let (n, d) = (p.particle_count(), p.dim());
    if n < 2 {
        return Err(Error::invalid("a pair density needs at least two particles"));
    }
    let reduced = reduce(p, r, 2)?;
    let pairs = (n * (n - 1)) as f64;
    let axes = vec![x.clone(), y.clone()];
    let values = grid_points(&axes)
        .par_iter()
        .map(|xy| {
            let mut coords = vec![xy[0]; d];
            coords.extend(std::iter::repeat(xy[1]).take(d));
            (pairs * reduced.eval(r, &coords)).max(0.0)
        })
        .collect();
    Ok(DensityGrid {
        kind: DensityKind::TwoParticleCut,
        n,
        d,
        realization: r,
        axes,
        values,
        normalization: pairs,
    })
}

/// `<Psi|Psi>` of the realized polynomial.
pub fn norm_squared(p: &ExactPolynomial, r: Realization) -> Result<f64> {
    let (_, scale) = float_terms(p);
    Ok(reduce(p, r, 0)?.norm * scale * scale)
}
