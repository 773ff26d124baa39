//! JSON encodings of polynomials, shape polynomials and shape catalogs.
//!
//! Rationals are written as `"p/q"` strings (plain `"p"` for integers) so
//! nothing is lost in transit. Every top-level document carries a
//! `format_version`.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::counting::{GradedQPolynomial, Statistics};
use crate::error::{Error, Result};
use crate::polycore::{ExactPolynomial, Monomial, OrbitalVector, SlaterState};
use crate::shapegen::{LevelSummary, ShapeCatalog, ShapeId, ShapeRecord};

pub const FORMAT_VERSION: u32 = 1;

pub fn rational_to_string(c: &BigRational) -> String {
    c.to_string()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

/// Integer as a JSON number when it fits in `i64`, as a string otherwise.
fn int_value(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(c.to_string()),
    }
}

fn parse_int_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Format(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Format(format!("not an integer: {s:?}"))),
        other => Err(Error::Format(format!("not an integer: {other}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub matrix: Vec<Vec<u8>>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub format_version: u32,
    pub n: usize,
    pub d: usize,
    /// Leading term first.
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    pub fn from_polynomial(p: &ExactPolynomial) -> Self {
        let d = p.dim();
        PolynomialJson {
            format_version: FORMAT_VERSION,
            n: p.particle_count(),
            d,
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    matrix: m.rows(d).map(<[u8]>::to_vec).collect(),
                    coeff: rational_to_string(c),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self) -> Result<ExactPolynomial> {
        check_version(self.format_version)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.matrix.len() != self.n || t.matrix.iter().any(|r| r.len() != self.d) {
                return Err(Error::Format(format!(
                    "term matrix is not {} x {}: {:?}",
                    self.n, self.d, t.matrix
                )));
            }
            let flat: Vec<u8> = t.matrix.concat();
            terms.push((Monomial::from_flat(&flat), parse_rational(&t.coeff)?));
        }
        ExactPolynomial::from_terms(self.n, self.d, terms)
    }
}

pub fn polynomial_to_json(p: &ExactPolynomial) -> Result<String> {
    Ok(serde_json::to_string_pretty(&PolynomialJson::from_polynomial(p))?)
}

pub fn polynomial_from_json(s: &str) -> Result<ExactPolynomial> {
    serde_json::from_str::<PolynomialJson>(s)?.to_polynomial()
}

/// `{"lowest": .., "coeffs": [..]}`; the zero polynomial has `lowest` 0 and
/// no coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPolynomialJson {
    pub lowest: u32,
    pub coeffs: Vec<Value>,
}

impl QPolynomialJson {
    pub fn from_series(p: &GradedQPolynomial) -> Self {
        let (lowest, coeffs) = p.coefficient_list();
        QPolynomialJson {
            lowest,
            coeffs: coeffs.iter().map(int_value).collect(),
        }
    }

    pub fn to_series(&self) -> Result<GradedQPolynomial> {
        let coeffs = self.coeffs.iter().map(parse_int_value).collect::<Result<Vec<_>>>()?;
        Ok(GradedQPolynomial::from_coefficient_list(self.lowest, &coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapePolynomialJson {
    pub format_version: u32,
    pub n: usize,
    pub d: usize,
    pub statistics: Statistics,
    #[serde(flatten)]
    pub polynomial: QPolynomialJson,
}

pub fn shape_polynomial_to_json(n: usize, d: usize, statistics: Statistics, p: &GradedQPolynomial) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ShapePolynomialJson {
        format_version: FORMAT_VERSION,
        n,
        d,
        statistics,
        polynomial: QPolynomialJson::from_series(p),
    })?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeJson {
    pub id: String,
    pub grade: u32,
    pub index: usize,
    /// Orbital lists of the contributing states, in level order.
    pub basis: Vec<Vec<Vec<u8>>>,
    pub coeffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogJson {
    pub format_version: u32,
    pub n: usize,
    pub d: usize,
    pub statistics: Statistics,
    pub shape_polynomial: QPolynomialJson,
    pub max_grade: u32,
    pub levels: Vec<LevelSummary>,
    pub shapes: Vec<ShapeJson>,
}

impl CatalogJson {
    pub fn from_catalog(c: &ShapeCatalog) -> Self {
        CatalogJson {
            format_version: FORMAT_VERSION,
            n: c.particle_count(),
            d: c.dim(),
            statistics: c.statistics(),
            shape_polynomial: QPolynomialJson::from_series(c.shape_polynomial()),
            max_grade: c.max_grade(),
            levels: c.levels().to_vec(),
            shapes: c
                .shapes()
                .iter()
                .map(|s| ShapeJson {
                    id: s.id().to_string(),
                    grade: s.grade(),
                    index: s.id().index,
                    basis: s
                        .components()
                        .iter()
                        .map(|(st, _)| st.orbitals().iter().map(|o| o.exponents().to_vec()).collect())
                        .collect(),
                    coeffs: s.components().iter().map(|(_, c)| rational_to_string(c)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_catalog(&self) -> Result<ShapeCatalog> {
        check_version(self.format_version)?;
        let mut shapes = Vec::with_capacity(self.shapes.len());
        for s in &self.shapes {
            let id = ShapeId {
                grade: s.grade,
                index: s.index,
            };
            if s.id != id.to_string() {
                return Err(Error::Format(format!("shape id {:?} disagrees with grade/index {id}", s.id)));
            }
            if s.basis.len() != s.coeffs.len() {
                return Err(Error::Format(format!("shape {id}: basis and coeffs differ in length")));
            }
            let mut components = Vec::with_capacity(s.basis.len());
            for (orbs, c) in s.basis.iter().zip(&s.coeffs) {
                let orbitals: Vec<OrbitalVector> = orbs.iter().map(|o| OrbitalVector::new(o)).collect();
                let (state, sign) = SlaterState::canonicalize(orbitals.clone(), self.statistics)?;
                if sign != 1 || state.orbitals() != orbitals.as_slice() {
                    return Err(Error::Format(format!("shape {id}: orbital list {orbs:?} is not canonical")));
                }
                components.push((state, parse_rational(c)?));
            }
            shapes.push(ShapeRecord::new(id, self.n, self.d, self.statistics, components)?);
        }
        let catalog =
            ShapeCatalog::from_parts(self.n, self.d, self.statistics, self.max_grade, shapes, self.levels.clone())?;
        if self.shape_polynomial.to_series()? != *catalog.shape_polynomial() {
            return Err(Error::Format("stored shape polynomial disagrees with the recomputed one".into()));
        }
        Ok(catalog)
    }
}

pub fn catalog_to_json(c: &ShapeCatalog) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CatalogJson::from_catalog(c))?)
}

pub fn catalog_from_json(s: &str) -> Result<ShapeCatalog> {
    serde_json::from_str::<CatalogJson>(s)?.to_catalog()
}

pub fn write_catalog(c: &ShapeCatalog, path: &Path) -> Result<()> {
    std::fs::write(path, catalog_to_json(c)? + "\n")?;
    Ok(())
}

pub fn read_catalog(path: &Path) -> Result<ShapeCatalog> {
    catalog_from_json(&std::fs::read_to_string(path)?)
}
