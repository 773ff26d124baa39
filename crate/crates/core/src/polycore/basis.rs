use std::cmp::Ordering;

use super::{OrbitalVector, SlaterState};
use crate::counting::Statistics;

/// All Slater (fermion) or permanent (boson) states of exactly `grade`.
///
/// States are listed in descending order of their orbital lists read from
/// the last (lowest) orbital to the first, so the highest orbital varies
/// fastest. For `N = 3, d = 2` at grade 3 this reproduces the order
/// `|t1^2,t2,1|, |t1u1,t2,1|, |u1^2,t2,1|, |t1^2,u2,1|, |t1u1,u2,1|, |u1^2,u2,1|`.
pub fn enumerate_basis(n: usize, d: usize, grade: u32, stat: Statistics) -> Vec<SlaterState> {
    if n == 0 || d == 0 {
        return Vec::new();
    }
    // ascending canonical order, all orbitals of degree <= grade
    let pool: Vec<OrbitalVector> = (0..=grade)
        .flat_map(|g| OrbitalVector::all_of_degree(d, g))
        .collect();
    let degrees: Vec<u32> = pool.iter().map(OrbitalVector::degree).collect();

    // choose pool indices i_1 >= i_2 >= ... (strict for fermions)
    struct Search<'a> {
        degrees: &'a [u32],
        strict: bool,
        cur: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    impl Search<'_> {
        fn rec(&mut self, max_index: Option<usize>, left: usize, remaining: u32) {
            if left == 0 {
                if remaining == 0 {
                    self.out.push(self.cur.clone());
                }
                return;
            }
            let Some(max_index) = max_index else { return };
            for i in (0..=max_index).rev() {
                let deg = self.degrees[i];
                if deg > remaining {
                    continue;
                }
                // the pool is sorted by degree, so later picks carry at most `deg`
                if (deg as u64) * (left as u64) < remaining as u64 {
                    break;
                }
                let next = if self.strict { i.checked_sub(1) } else { Some(i) };
                self.cur.push(i);
                self.rec(next, left - 1, remaining - deg);
                self.cur.pop();
            }
        }
    }

    let mut search = Search {
        degrees: &degrees,
        strict: stat == Statistics::Fermion,
        cur: Vec::with_capacity(n),
        out: Vec::new(),
    };
    search.rec(pool.len().checked_sub(1), n, grade);
    let picks = search.out;
    let mut states: Vec<SlaterState> = picks
        .into_iter()
        .map(|idx| {
            let orbitals = idx.into_iter().map(|i| pool[i].clone()).collect();
            SlaterState::new(orbitals, stat).expect("enumerated states are valid")
        })
        .collect();
    states.sort_by(|a, b| enumeration_order(b, a));
    states
}

/// Ascending version of the enumeration order: compare orbital lists from
/// the last entry backwards.
fn enumeration_order(a: &SlaterState, b: &SlaterState) -> Ordering {
    a.orbitals().iter().rev().cmp(b.orbitals().iter().rev())
}
