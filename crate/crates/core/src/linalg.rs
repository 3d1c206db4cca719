//! Exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row echelon basis built incrementally; rows are kept fully reduced
/// (RREF) so that nullspace extraction is direct.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// (pivot column, row) with the pivot entry equal to one.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `row` against the basis; returns whether it was independent.
    pub fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.ncols);
        for (pc, r) in &self.rows {
            if row[*pc].is_zero() {
                continue;
            }
            let factor = row[*pc].clone();
            for (x, y) in row.iter_mut().zip(r.iter()) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &row[pc];
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // Keep reduced form: eliminate the new pivot from existing rows.
        for (_, r) in self.rows.iter_mut() {
            if r[pc].is_zero() {
                continue;
            }
            let factor = r[pc].clone();
            for (x, y) in r.iter_mut().zip(row.iter()) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        self.rows.push((pc, row));
        true
    }

    /// The reduced rows ordered by pivot column.
    pub fn reduced_rows(&self) -> Vec<Vec<Rational>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(pc, _)| *pc);
        rows.into_iter().map(|(_, r)| r).collect()
    }

    /// Basis of the nullspace of the inserted rows; each vector has a one in
    /// its free column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut pivot_of = vec![None; self.ncols];
        for (i, (pc, _)) in self.rows.iter().enumerate() {
            pivot_of[*pc] = Some(i);
        }
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if pivot_of[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (pc, r) in &self.rows {
                if !r[free].is_zero() {
                    v[*pc] = -r[free].clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Nullspace basis of a dense matrix given by rows.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        if ech.is_full() {
            break;
        }
        ech.insert(r.clone());
    }
    ech.nullspace()
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        if ech.is_full() {
            break;
        }
        ech.insert(r.clone());
    }
    ech.rank()
}

/// Reduced row echelon basis of the span of `rows`, ordered by pivot.
pub fn row_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.reduced_rows()
}

/// Scales a vector so its first non-zero entry is one.
pub fn normalize_first(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = Rational::one() / lead;
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let rows = vec![row(&[1, 2, 3]), row(&[2, 4, 6])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot: Rational = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
        assert_eq!(rank(&rows, 3), 1);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let rows = vec![row(&[1, 0]), row(&[1, 1])];
        assert!(nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let rows = vec![row(&[0, 0, 0])];
        assert_eq!(nullspace(&rows, 3).len(), 3);
    }
}
