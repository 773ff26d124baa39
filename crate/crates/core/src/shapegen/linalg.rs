//! Exact row reduction over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Incrementally built row-echelon form. Each stored row has a unit pivot
/// and zeros in every column left of it.
#[derive(Debug, Clone)]
pub struct Echelon {
    width: usize,
    rows: BTreeMap<usize, Vec<BigRational>>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the stored rows and keeps it if something is
    /// left. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        assert_eq!(v.len(), self.width, "vector length");
        for (&p, row) in &self.rows {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v[p..].iter_mut().zip(&row[p..]) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in &mut v[p..] {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.insert(p, v);
        true
    }

    /// Inserts a sparse vector given as `(column, value)` pairs.
    pub fn insert_sparse(&mut self, v: &[(usize, BigRational)]) -> bool {
        let mut dense = vec![BigRational::zero(); self.width];
        for (i, x) in v {
            dense[*i] += x;
        }
        self.insert(dense)
    }

    /// Reduced row-echelon rows, in pivot order.
    pub fn reduced(&self) -> Vec<(usize, Vec<BigRational>)> {
        let mut rows: Vec<(usize, Vec<BigRational>)> = self.rows.iter().map(|(&p, r)| (p, r.clone())).collect();
        for k in (0..rows.len()).rev() {
            let (p, pivot_row) = {
                let (p, r) = &rows[k];
                (*p, r.clone())
            };
            for (_, row) in rows.iter_mut().take(k) {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for (x, r) in row[p..].iter_mut().zip(&pivot_row[p..]) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        rows
    }

    /// Basis of `{w : w . v = 0 for every inserted v}`, one vector per free
    /// column in increasing column order, each in canonical normalized form.
    pub fn complement(&self) -> Vec<(usize, Vec<BigRational>)> {
        let reduced = self.reduced();
        (0..self.width)
            .filter(|c| !self.rows.contains_key(c))
            .map(|f| {
                let mut w = vec![BigRational::zero(); self.width];
                w[f] = BigRational::one();
                for (p, row) in &reduced {
                    w[*p] = -row[f].clone();
                }
                normalize(&mut w);
                (f, w)
            })
            .collect()
    }
}

/// Scales `v` so that its entries are coprime integers with the first
/// nonzero entry positive. The zero vector is left alone.
pub fn normalize(v: &mut [BigRational]) {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return;
    };
    let negative = first.is_negative();
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for x in v.iter().filter(|x| !x.is_zero()) {
        lcm = lcm.lcm(x.denom());
    }
    for x in v.iter().filter(|x| !x.is_zero()) {
        gcd = gcd.gcd(&(x.numer() * (&lcm / x.denom())));
    }
    let mut scale = BigRational::new(lcm, gcd);
    if negative {
        scale = -scale;
    }
    for x in v.iter_mut() {
        *x *= &scale;
    }
}

/// Basis of the orthogonal complement of `vectors` in `Q^ambient_dim` under
/// the standard dot product. An empty input gives the standard basis.
pub fn orthogonal_complement(vectors: &[Vec<BigRational>], ambient_dim: usize) -> Vec<Vec<BigRational>> {
    let mut e = Echelon::new(ambient_dim);
    for v in vectors {
        e.insert(v.clone());
    }
    e.complement().into_iter().map(|(_, w)| w).collect()
}

pub fn rank(vectors: &[Vec<BigRational>], width: usize) -> usize {
    let mut e = Echelon::new(width);
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Whether two families span the same subspace, by comparing reduced
/// row-echelon forms.
pub fn same_span(a: &[Vec<BigRational>], b: &[Vec<BigRational>], width: usize) -> bool {
    let rref = |vs: &[Vec<BigRational>]| {
        let mut e = Echelon::new(width);
        for v in vs {
            e.insert(v.clone());
        }
        e.reduced()
    };
    rref(a) == rref(b)
}
