//! Dense matrices over GF(2)\[D\]: determinants, enumeration of all minors of
//! a given order, and the minor-gcd computation that drives the divisor test
//! for catastrophicity.

use itertools::Itertools;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gf2poly::{gcd_many, Degree, Poly};

/// Hard ceiling on determinant side length. The memoized expansion costs
/// about `2^side · side` polynomial operations, so refuse oversized inputs
/// instead of hanging.
pub const MAX_DET_SIDE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix side {side} exceeds the determinant limit of {MAX_DET_SIDE}")]
    SideLimit { side: usize },
    #[error("minor order {order} must be between 1 and min({rows}, {cols})")]
    OrderOutOfRange {
        order: usize,
        rows: usize,
        cols: usize,
    },
    #[error("rank-deficient matrix: every minor of order {order} is zero")]
    RankDeficient { order: usize },
}

/// Rectangular matrix with [`Poly`] entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, MatrixError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(MatrixError::RaggedRows {
                    row: i,
                    got: row.len(),
                    expected: ncols,
                });
            }
        }
        PolyMatrix::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Result<Self, MatrixError> {
        PolyMatrix::new(rows, cols, vec![Poly::zero(); rows * cols])
    }

    pub fn identity(side: usize) -> Result<Self, MatrixError> {
        let mut m = PolyMatrix::zero(side, side)?;
        for i in 0..side {
            m.set(i, i, Poly::one());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Poly) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }

    /// Largest entry degree; `MinusInfinity` for the all-zero matrix.
    pub fn max_degree(&self) -> Degree {
        self.entries
            .iter()
            .map(Poly::degree)
            .max()
            .unwrap_or(Degree::MinusInfinity)
    }

    /// Submatrix selecting the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        PolyMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Exact determinant over GF(2)\[D\].
    ///
    /// Sign bookkeeping is vacuous in characteristic 2, so this is a plain
    /// expansion along successive rows, memoized on the set of still-unused
    /// columns (the row index is implied by how many columns were consumed).
    pub fn determinant(&self) -> Result<Poly, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let side = self.rows;
        if side > MAX_DET_SIDE {
            return Err(MatrixError::SideLimit { side });
        }
        let mut memo: HashMap<u32, Poly> = HashMap::new();
        let full: u32 = if side == 32 {
            u32::MAX
        } else {
            (1u32 << side) - 1
        };
        Ok(self.det_masked(full, side, &mut memo))
    }

    fn det_masked(&self, mask: u32, side: usize, memo: &mut HashMap<u32, Poly>) -> Poly {
        if mask == 0 {
            return Poly::one();
        }
        if let Some(hit) = memo.get(&mask) {
            return hit.clone();
        }
        let row = side - mask.count_ones() as usize;
        let mut acc = Poly::zero();
        let mut rest = mask;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let sub = self.det_masked(mask & !(1u32 << c), side, memo);
            acc += &(entry * &sub);
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Every minor of the given order: one determinant per unordered choice
    /// of `order` rows and `order` columns, in lexicographic order of
    /// (row set, column set).
    pub fn all_minors(&self, order: usize) -> Result<Vec<Poly>, MatrixError> {
        if order == 0 || order > self.rows.min(self.cols) {
            return Err(MatrixError::OrderOutOfRange {
                order,
                rows: self.rows,
                cols: self.cols,
            });
        }
        let col_sets: Vec<Vec<usize>> = (0..self.cols).combinations(order).collect();
        let mut minors = Vec::new();
        for row_set in (0..self.rows).combinations(order) {
            for col_set in &col_sets {
                minors.push(self.submatrix(&row_set, col_set).determinant()?);
            }
        }
        Ok(minors)
    }

    /// Gcd of all minors of the given order.
    ///
    /// Every minor being zero means the matrix has rank below `order` and
    /// does not define an encoder of the corresponding rate; that is
    /// reported as an error rather than any verdict.
    pub fn minor_gcd(&self, order: usize) -> Result<Poly, MatrixError> {
        let minors = self.all_minors(order)?;
        gcd_many(&minors).map_err(|_| MatrixError::RankDeficient { order })
    }

    /// The binary matrix of coefficient-of-`D^j` bits of every entry.
    pub fn coefficient_slice(&self, j: usize) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).coeff(j) as u8)
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut dbg = f.debug_list();
        for r in 0..self.rows {
            dbg.entry(
                &(0..self.cols)
                    .map(|c| self.get(r, c).to_string())
                    .collect::<Vec<_>>(),
            );
        }
        dbg.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| p(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Permutation-sum determinant, exponential and memo-free; the
    /// independent route for checking the expansion path.
    fn permutation_determinant(a: &PolyMatrix) -> Poly {
        fn go(a: &PolyMatrix, row: usize, used: &mut Vec<bool>) -> Poly {
            if row == a.rows() {
                return Poly::one();
            }
            let mut acc = Poly::zero();
            for c in 0..a.cols() {
                if used[c] || a.get(row, c).is_zero() {
                    continue;
                }
                used[c] = true;
                acc += &(a.get(row, c) * &go(a, row + 1, used));
                used[c] = false;
            }
            acc
        }
        go(a, 0, &mut vec![false; a.cols()])
    }

    #[test]
    fn determinant_examples() {
        let upper = m(&[&["11", "101"], &["0", "1"]]);
        assert_eq!(upper.determinant().unwrap(), p("11"));

        for side in 1..=4 {
            assert_eq!(
                PolyMatrix::identity(side).unwrap().determinant().unwrap(),
                Poly::one()
            );
        }

        let repeated = m(&[&["1", "1"], &["1", "1"]]);
        assert_eq!(repeated.determinant().unwrap(), Poly::zero());
    }

    #[test]
    fn determinant_guards() {
        let rect = m(&[&["1", "1", "1"], &["1", "1", "1"]]);
        assert_eq!(
            rect.determinant(),
            Err(MatrixError::NonSquare { rows: 2, cols: 3 })
        );

        let big = PolyMatrix::identity(MAX_DET_SIDE + 1).unwrap();
        assert_eq!(
            big.determinant(),
            Err(MatrixError::SideLimit {
                side: MAX_DET_SIDE + 1
            })
        );
    }

    #[test]
    fn all_minors_examples() {
        let row = m(&[&["11", "101"]]);
        assert_eq!(row.all_minors(1).unwrap(), vec![p("11"), p("101")]);

        let wide = m(&[&["1", "11", "0", "1"], &["01", "0", "1", "1"]]);
        assert_eq!(wide.all_minors(2).unwrap().len(), 6);

        let square = m(&[&["11", "1"], &["0", "01"]]);
        assert_eq!(
            square.all_minors(2).unwrap(),
            vec![square.determinant().unwrap()]
        );

        assert_eq!(
            row.all_minors(2),
            Err(MatrixError::OrderOutOfRange {
                order: 2,
                rows: 1,
                cols: 2
            })
        );
    }

    #[test]
    fn minor_gcd_examples() {
        let row = m(&[&["11", "101"]]);
        assert_eq!(row.minor_gcd(1).unwrap(), p("11"));

        // all six order-2 minors by the permutation-sum route, then gcd
        let wide = m(&[&["1", "11", "0", "1"], &["01", "0", "1", "1"]]);
        let mut oracle_minors = Vec::new();
        for cols in [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            oracle_minors.push(permutation_determinant(&wide.submatrix(&[0, 1], &cols)));
        }
        let folded = crate::gf2poly::gcd_many(&oracle_minors).unwrap();
        assert_eq!(wide.minor_gcd(2).unwrap(), folded);
        assert_eq!(folded, Poly::one());

        assert_eq!(
            PolyMatrix::identity(2).unwrap().minor_gcd(2).unwrap(),
            Poly::one()
        );
    }

    #[test]
    fn rank_deficient_is_an_error() {
        let z = PolyMatrix::zero(2, 3).unwrap();
        assert_eq!(z.minor_gcd(2), Err(MatrixError::RankDeficient { order: 2 }));

        // proportional rows: every order-2 minor vanishes but entries do not
        let prop = m(&[&["1", "11"], &["01", "011"]]);
        assert_eq!(
            prop.minor_gcd(2),
            Err(MatrixError::RankDeficient { order: 2 })
        );
        assert_eq!(prop.minor_gcd(1).unwrap(), p("1"));
    }

    #[test]
    fn coefficient_slice_examples() {
        let row = m(&[&["11", "101"]]);
        assert_eq!(row.coefficient_slice(0), vec![vec![1, 1]]);
        assert_eq!(row.coefficient_slice(1), vec![vec![1, 0]]);
        assert_eq!(row.coefficient_slice(2), vec![vec![0, 1]]);
        assert_eq!(row.coefficient_slice(7), vec![vec![0, 0]]);
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            PolyMatrix::new(0, 2, vec![]),
            Err(MatrixError::EmptyShape { .. })
        ));
        assert!(matches!(
            PolyMatrix::new(1, 2, vec![Poly::one()]),
            Err(MatrixError::EntryCount { .. })
        ));
        assert!(matches!(
            PolyMatrix::from_rows(vec![vec![Poly::one()], vec![]]),
            Err(MatrixError::RaggedRows { .. })
        ));
    }

    fn arb_poly(max_coeffs: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(prop::bool::ANY, 0..max_coeffs)
            .prop_map(|bits| Poly::from_coeffs(&bits.iter().map(|&b| b as u8).collect::<Vec<_>>()))
    }

    fn arb_matrix(max_side: usize, max_coeffs: usize) -> impl Strategy<Value = PolyMatrix> {
        (1..=max_side, 1..=max_side).prop_flat_map(move |(r, c)| {
            prop::collection::vec(arb_poly(max_coeffs), r * c)
                .prop_map(move |entries| PolyMatrix::new(r, c, entries).unwrap())
        })
    }

    fn arb_square(side: usize, max_coeffs: usize) -> impl Strategy<Value = PolyMatrix> {
        prop::collection::vec(arb_poly(max_coeffs), side * side)
            .prop_map(move |entries| PolyMatrix::new(side, side, entries).unwrap())
    }

    /// Test-local matrix product over GF(2)[D].
    fn matmul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
        assert_eq!(a.cols(), b.rows());
        let mut out = PolyMatrix::zero(a.rows(), b.cols()).unwrap();
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = Poly::zero();
                for l in 0..a.cols() {
                    acc += &(a.get(i, l) * b.get(l, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn coefficient_slices_reconstruct(a in arb_matrix(4, 6)) {
            let top = a.max_degree().finite().unwrap_or(0);
            let mut rebuilt = PolyMatrix::zero(a.rows(), a.cols()).unwrap();
            for j in 0..=top {
                let slice = a.coefficient_slice(j);
                for (r, row) in slice.iter().enumerate() {
                    for (c, &bit) in row.iter().enumerate() {
                        if bit == 1 {
                            let bumped = rebuilt.get(r, c) + &Poly::monomial(j);
                            rebuilt.set(r, c, bumped);
                        }
                    }
                }
            }
            prop_assert!(rebuilt == a);
        }

        #[test]
        fn determinant_is_multiplicative(
            (a, b) in (1usize..=4).prop_flat_map(|side| (arb_square(side, 4), arb_square(side, 4)))
        ) {
            let lhs = matmul(&a, &b).determinant().unwrap();
            let rhs = &a.determinant().unwrap() * &b.determinant().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn determinant_matches_permutation_sum(a in arb_square(4, 5)) {
            prop_assert_eq!(a.determinant().unwrap(), permutation_determinant(&a));
        }

        #[test]
        fn minor_count_is_binomial(a in arb_matrix(4, 4), order in 1usize..=4) {
            prop_assume!(order <= a.rows().min(a.cols()));
            fn choose(n: usize, k: usize) -> usize {
                if k > n { return 0; }
                (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
            }
            let minors = a.all_minors(order).unwrap();
            prop_assert_eq!(minors.len(), choose(a.rows(), order) * choose(a.cols(), order));
        }

        #[test]
        fn minor_gcd_divides_every_minor(a in arb_matrix(3, 4), order in 1usize..=3) {
            prop_assume!(order <= a.rows().min(a.cols()));
            match a.minor_gcd(order) {
                Ok(g) => {
                    for minor in a.all_minors(order).unwrap() {
                        prop_assert!(g.divides(&minor));
                    }
                }
                Err(MatrixError::RankDeficient { .. }) => {
                    for minor in a.all_minors(order).unwrap() {
                        prop_assert!(minor.is_zero());
                    }
                }
                Err(other) => prop_assert!(false, "unexpected error {other:?}"),
            }
        }
    }
}
