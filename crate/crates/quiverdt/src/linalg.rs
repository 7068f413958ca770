//! Exact linear algebra over Q: incrementally maintained reduced row echelon
//! form, rank, and reduction of vectors against the stored basis.

use num::{BigRational, Zero};

/// A reduced row echelon basis of a subspace of Q^width.
///
/// Rows have pivot 1, strictly increasing pivot columns, and every pivot
/// column is zero in all other rows; the form is unique for the row space,
/// so ranks and complements do not depend on insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(width: usize, rows: impl IntoIterator<Item = Vec<BigRational>>) -> Self {
        let mut e = Echelon::new(width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// Columns without a pivot, ascending.
    pub fn complement_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Eliminate all pivot columns from `v`.
    pub fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        assert_eq!(v.len(), self.width);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        v
    }

    /// True iff `v` lies in the row space.
    pub fn contains(&self, v: Vec<BigRational>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Insert a row, keeping the reduced form; answers whether the rank grew.
    pub fn insert(&mut self, v: Vec<BigRational>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x /= &lead;
            }
        }
        // Clear the new pivot column in the stored rows.
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, One};

    fn row(xs: &[i64]) -> Vec<BigRational> {
        xs.iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect()
    }

    #[test]
    fn rank_and_pivots() {
        let e = Echelon::from_rows(
            3,
            vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])],
        );
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), &[0, 1]);
        assert_eq!(e.complement_columns(), vec![2]);
    }

    #[test]
    fn reduced_form_property() {
        let e = Echelon::from_rows(3, vec![row(&[0, 2, 4]), row(&[3, 3, 3])]);
        for (r, &p) in e.rows().iter().zip(e.pivots()) {
            assert!(r[p].is_one());
            for (other, &po) in e.rows().iter().zip(e.pivots()) {
                if po != p {
                    assert!(other[p].is_zero());
                }
            }
        }
    }

    #[test]
    fn membership() {
        let e = Echelon::from_rows(3, vec![row(&[1, 0, 1]), row(&[0, 1, 1])]);
        assert!(e.contains(row(&[2, 3, 5])));
        assert!(!e.contains(row(&[0, 0, 1])));
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let rows = vec![row(&[1, 2, 0, 1]), row(&[0, 1, 1, 0]), row(&[1, 3, 1, 1])];
        let mut perms = vec![
            vec![0usize, 1, 2],
            vec![2, 1, 0],
            vec![1, 2, 0],
        ];
        let reference = Echelon::from_rows(4, rows.clone());
        for perm in perms.drain(..) {
            let e = Echelon::from_rows(4, perm.into_iter().map(|i| rows[i].clone()));
            assert_eq!(e, reference);
        }
    }
}
