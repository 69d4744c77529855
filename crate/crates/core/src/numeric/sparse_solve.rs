//! Exact sparse Gaussian elimination for (possibly singular, rectangular) systems.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::Rational;

/// `A x = b` with `A` stored by rows.
#[derive(Debug, Clone)]
pub(crate) struct SparseSystem {
    ncols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
    rhs: Vec<Rational>,
}

impl SparseSystem {
    pub(crate) fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            ncols,
            rows: vec![BTreeMap::new(); nrows],
            rhs: vec![Rational::zero(); nrows],
        }
    }

    pub(crate) fn add(&mut self, row: usize, col: usize, value: &Rational) {
        if value.is_zero() {
            return;
        }
        let slot = self.rows[row].entry(col).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            self.rows[row].remove(&col);
        }
    }

    pub(crate) fn set_rhs(&mut self, row: usize, value: Rational) {
        self.rhs[row] = value;
    }

    /// Returns a solution with every non-pivot variable set to zero, or `None`
    /// when the system is inconsistent.
    ///
    /// Pivots are chosen greedily: the column with the fewest remaining
    /// entries, then the shortest row within it. On the block-structured
    /// systems produced by span programs this keeps fill-in local to a block.
    pub(crate) fn solve(self) -> Option<Vec<Rational>> {
        let Self {
            ncols,
            mut rows,
            mut rhs,
        } = self;
        let nrows = rows.len();

        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        let mut active = vec![true; nrows];
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                if !rhs[r].is_zero() {
                    return None;
                }
                active[r] = false;
            }
            for &c in row.keys() {
                col_rows[c].insert(r);
            }
        }

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        while let Some(col) = (0..ncols)
            .filter(|&c| !col_rows[c].is_empty())
            .min_by_key(|&c| (col_rows[c].len(), c))
        {
            let prow = *col_rows[col]
                .iter()
                .min_by_key(|&&r| (rows[r].len(), r))
                .expect("column has rows");

            active[prow] = false;
            let pivot_row = std::mem::take(&mut rows[prow]);
            for &c in pivot_row.keys() {
                col_rows[c].remove(&prow);
            }
            let pivot_value = pivot_row[&col].clone();
            let pivot_rhs = rhs[prow].clone();

            let targets: Vec<usize> = col_rows[col].iter().copied().collect();
            for r in targets {
                let factor = &rows[r][&col] / &pivot_value;
                for (&c, a) in &pivot_row {
                    let delta = &factor * a;
                    let row = &mut rows[r];
                    match row.get_mut(&c) {
                        Some(slot) => {
                            *slot -= delta;
                            if slot.is_zero() {
                                row.remove(&c);
                                col_rows[c].remove(&r);
                            }
                        }
                        None => {
                            row.insert(c, -delta);
                            col_rows[c].insert(r);
                        }
                    }
                }
                let update = &factor * &pivot_rhs;
                rhs[r] -= update;
                if rows[r].is_empty() {
                    if !rhs[r].is_zero() {
                        return None;
                    }
                    active[r] = false;
                }
            }
            rows[prow] = pivot_row;
            pivots.push((prow, col));
        }

        let mut x = vec![Rational::zero(); ncols];
        for &(r, c) in pivots.iter().rev() {
            let mut acc = rhs[r].clone();
            for (&j, a) in &rows[r] {
                if j != c {
                    acc -= a * &x[j];
                }
            }
            x[c] = acc / &rows[r][&c];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn system(a: &[&[i64]], b: &[i64]) -> SparseSystem {
        let mut s = SparseSystem::new(a.len(), a[0].len());
        for (r, row) in a.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                s.add(r, c, &int(v));
            }
            s.set_rhs(r, int(b[r]));
        }
        s
    }

    #[test]
    fn solves_nonsingular() {
        let x = system(&[&[2, 1], &[1, 3]], &[3, 5]).solve().unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn singular_consistent_sets_free_to_zero() {
        let x = system(&[&[1, 1], &[2, 2]], &[1, 2]).solve().unwrap();
        assert_eq!(&x[0] + &x[1], int(1));
        assert!(x.iter().any(|v| v.is_zero()));
    }

    #[test]
    fn inconsistent_returns_none() {
        assert!(system(&[&[1, 1], &[2, 2]], &[1, 3]).solve().is_none());
        assert!(system(&[&[0, 0]], &[1]).solve().is_none());
    }

    #[test]
    fn rectangular_overdetermined() {
        let x = system(&[&[1, 0], &[0, 1], &[1, 1]], &[2, 3, 5])
            .solve()
            .unwrap();
        assert_eq!(x, vec![int(2), int(3)]);
    }
}
