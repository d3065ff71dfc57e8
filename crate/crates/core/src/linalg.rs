//! Sparse exact linear algebra over ℚ.
//!
//! Everything in the module engine reduces to incremental row reduction:
//! a [`Subspace`] keeps its spanning rows in reduced row echelon form so that
//! membership tests, normal forms and quotient bases are single passes.

use crate::rational::Q;

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseVec = Vec<(usize, Q)>;

/// Drops zero entries and sorts by column, merging duplicates.
pub fn normalize(mut v: Vec<(usize, Q)>) -> SparseVec {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((lc, lx)) if *lc == c => *lx += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// `a + s·b` for sparse vectors.
pub fn axpy(a: &SparseVec, s: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let x = &a[i].1 + &(s * &b[j].1);
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &SparseVec, s: &Q) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(c, x)| (*c, x * s)).collect()
}

/// A subspace of `ℚ^dim` held in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<u32>>,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace { dim, rows: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Rows of the echelon form; row `k` has a leading 1 in its pivot column.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Columns without a pivot, ascending. They index a basis of the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_row[c].is_none()).collect()
    }

    /// Residual of `v` modulo the subspace; it is supported on free columns only.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        let hits: Vec<(u32, Q)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row[*c].map(|r| (r, x.clone())))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut dense = vec![Q::zero(); self.dim];
        for (c, x) in v {
            dense[*c] = x.clone();
        }
        for (r, coeff) in hits {
            for (c, x) in &self.rows[r as usize] {
                dense[*c] -= &(&coeff * x);
            }
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        self.insert_reduced(r)
    }

    fn insert_reduced(&mut self, r: SparseVec) -> bool {
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.recip();
        let row = scale(&r, &inv);
        for other in self.rows.iter_mut() {
            if let Ok(pos) = other.binary_search_by_key(&pivot, |(c, _)| *c) {
                let f = -other[pos].1.clone();
                *other = axpy(other, &f, &row);
            }
        }
        self.pivot_row[pivot] = Some(self.rows.len() as u32);
        self.rows.push(row);
        true
    }

    /// Coordinates of a vector of the subspace in terms of the echelon rows.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<(usize, Q)>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            v.iter()
                .filter_map(|(c, x)| self.pivot_row[*c].map(|r| (r as usize, x.clone())))
                .collect(),
        )
    }
}

/// Basis of the null space `{x : Σ_j x_j · columns[j] = 0}` of a matrix given by columns.
pub fn kernel_of_columns(columns: &[SparseVec], nrows: usize) -> Vec<SparseVec> {
    // Row-reduce the transpose-free way: treat each column as an unknown and
    // eliminate over the equations (rows).
    let ncols = columns.len();
    let mut eqs: Vec<Vec<(usize, Q)>> = vec![Vec::new(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col {
            eqs[*i].push((j, x.clone()));
        }
    }
    let mut space = Subspace::new(ncols);
    for eq in eqs {
        space.insert(&normalize(eq));
    }
    let mut basis = Vec::new();
    for f in space.free_columns() {
        let mut v = vec![(f, Q::one())];
        for row in space.rows() {
            if let Ok(pos) = row.binary_search_by_key(&f, |(c, _)| *c) {
                v.push((row[0].0, -row[pos].1.clone()));
            }
        }
        basis.push(normalize(v));
    }
    basis
}

/// Solves `Σ_j x_j · columns[j] = rhs`; returns one solution (free variables zero).
pub fn solve_columns(columns: &[SparseVec], nrows: usize, rhs: &SparseVec) -> Option<Vec<Q>> {
    let ncols = columns.len();
    let mut eqs: Vec<Vec<(usize, Q)>> = vec![Vec::new(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col {
            eqs[*i].push((j, x.clone()));
        }
    }
    for (i, x) in rhs {
        eqs[*i].push((ncols, x.clone()));
    }
    let mut space = Subspace::new(ncols + 1);
    for eq in eqs {
        space.insert(&normalize(eq));
    }
    if space.is_pivot(ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for row in space.rows() {
        if let Some((c, val)) = row.last() {
            if *c == ncols {
                x[row[0].0] = val.clone();
            }
        }
    }
    Some(x)
}

/// Rank of a list of sparse rows.
pub fn rank(rows: &[SparseVec], dim: usize) -> usize {
    let mut s = Subspace::new(dim);
    for r in rows {
        s.insert(r);
    }
    s.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn rref_membership() {
        let mut s = Subspace::new(3);
        assert!(s.insert(&vec![(0, q(1)), (1, q(2))]));
        assert!(s.insert(&vec![(1, q(1)), (2, q(1))]));
        assert!(!s.insert(&vec![(0, q(1)), (1, q(3)), (2, q(1))]));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.free_columns(), vec![2]);
        assert!(s.contains(&vec![(0, q(2)), (1, q(4))]));
        assert!(!s.contains(&vec![(2, q(1))]));
        let r = s.reduce(&vec![(0, q(1))]);
        assert_eq!(r, vec![(2, q(2))]);
    }

    #[test]
    fn kernel_and_solve() {
        // columns (1,0), (0,1), (1,1): kernel spanned by (1,1,-1)
        let cols = vec![vec![(0, q(1))], vec![(1, q(1))], vec![(0, q(1)), (1, q(1))]];
        let k = kernel_of_columns(&cols, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![(0, q(-1)), (1, q(-1)), (2, q(1))]);
        let x = solve_columns(&cols, 2, &vec![(0, q(3)), (1, q(5))]).unwrap();
        assert_eq!(x, vec![q(3), q(5), q(0)]);
        let inconsistent = solve_columns(&[vec![(0, q(1))]], 2, &vec![(1, q(1))]);
        assert!(inconsistent.is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 20)) {
            let cols: Vec<SparseVec> = entries
                .chunks(4)
                .map(|c| normalize(c.iter().enumerate().map(|(i, x)| (i, q(*x))).collect()))
                .collect();
            let k = kernel_of_columns(&cols, 4);
            let mut rows: Vec<SparseVec> = vec![Vec::new(); 4];
            for (j, col) in cols.iter().enumerate() {
                for (i, x) in col {
                    rows[*i].push((j, x.clone()));
                }
            }
            let r = rank(&rows, cols.len());
            prop_assert_eq!(r + k.len(), cols.len());
            for v in &k {
                for row in &rows {
                    let dot: Q = v.iter().map(|(j, x)| {
                        row.iter().find(|(c, _)| c == j).map(|(_, y)| x * y).unwrap_or_default()
                    }).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
