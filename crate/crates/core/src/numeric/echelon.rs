//! Fraction-free row echelon basis over the integers.
//!
//! Each inserted vector is scaled to a primitive integer row (content 1) and
//! reduced against the stored pivots by cross-multiplication, so no rational
//! division ever happens during elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseVector;

/// Sorted `(column, value)` pairs with nonzero values.
type IntRow = Vec<(usize, BigInt)>;

/// Incrementally built echelon basis; rows are keyed by their leading column.
#[derive(Debug, Default, Clone)]
pub struct IntegerEchelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl IntegerEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `v` to the basis. Returns `true` if it was linearly independent of
    /// the vectors already inserted.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let row = self.reduce(to_primitive(v));
        match row.first() {
            None => false,
            Some((lead, _)) => {
                self.pivots.insert(*lead, row);
                true
            }
        }
    }

    /// True iff `v` lies in the span of the inserted vectors.
    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(to_primitive(v)).is_empty()
    }

    /// Eliminates leading entries until the lead column has no pivot.
    fn reduce(&self, mut row: IntRow) -> IntRow {
        while let Some((lead, a)) = row.first() {
            let Some(pivot) = self.pivots.get(lead) else {
                break;
            };
            let p = &pivot[0].1;
            let g = a.gcd(p);
            // row <- (p/g) * row - (a/g) * pivot
            let row_scale = p / &g;
            let pivot_scale = a / &g;
            row = combine(&row, &row_scale, pivot, &pivot_scale);
            make_primitive(&mut row);
        }
        row
    }
}

fn combine(x: &IntRow, xs: &BigInt, y: &IntRow, ys: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, val) = if take_x {
            let r = (x[i].0, &x[i].1 * xs);
            i += 1;
            r
        } else if take_y {
            let r = (y[j].0, -(&y[j].1 * ys));
            j += 1;
            r
        } else {
            let r = (x[i].0, &x[i].1 * xs - &y[j].1 * ys);
            i += 1;
            j += 1;
            r
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, c) in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in row.iter_mut() {
        *c /= &g;
    }
}

/// Clears denominators and divides out the content.
fn to_primitive(v: &SparseVector) -> IntRow {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut row: IntRow = v
        .iter()
        .map(|(i, c)| (i, c.numer() * (&lcm / c.denom())))
        .collect();
    make_primitive(&mut row);
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            for (_, c) in row.iter_mut() {
                *c = -&*c;
            }
        }
    }
    row
}
