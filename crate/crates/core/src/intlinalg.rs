//! Exact integer matrices: Hermite and Smith normal forms, kernels, and
//! lattice comparison.
//!
//! Everything here is over the integers with `BigInt` entries; no floating
//! point and no modular shortcuts. Row style throughout: row vectors act on
//! the left, so a unimodular `T` with `T * M = H` records the row
//! operations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Dense integer matrix, row major. Rows of zero extent are allowed; a
/// matrix with zero rows still carries a column count so products stay
/// well-typed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix constructor"
        );
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row a -= k * row b
    fn row_submul(&mut self, a: usize, b: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = k * &self[(b, j)];
            self[(a, j)] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Row-style Hermite normal form. Returns `(h, t)` with `t` unimodular,
    /// `t * self == h`, pivots positive and strictly right-down, entries
    /// above each pivot reduced into `[0, pivot)`, and zero rows at the
    /// bottom.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut t = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // Euclidean elimination below the pivot: repeatedly reduce by
            // the row with the smallest nonzero entry in this column.
            loop {
                let best = (pivot_row..self.rows)
                    .filter(|&i| !h[(i, col)].is_zero())
                    .min_by_key(|&i| h[(i, col)].abs());
                let Some(best) = best else { break };
                h.swap_rows(pivot_row, best);
                t.swap_rows(pivot_row, best);
                let mut done = true;
                for i in pivot_row + 1..self.rows {
                    if h[(i, col)].is_zero() {
                        continue;
                    }
                    let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                    h.row_submul(i, pivot_row, &q);
                    t.row_submul(i, pivot_row, &q);
                    if !h[(i, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(pivot_row, col)].is_zero() {
                continue;
            }
            if h[(pivot_row, col)].is_negative() {
                h.negate_row(pivot_row);
                t.negate_row(pivot_row);
            }
            // Reduce entries above the pivot into [0, pivot).
            for i in 0..pivot_row {
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.row_submul(i, pivot_row, &q);
                t.row_submul(i, pivot_row, &q);
            }
            pivot_row += 1;
        }
        (h, t)
    }

    /// Rank over the rationals (equivalently, over the integers after
    /// clearing torsion): the number of nonzero rows of the Hermite form.
    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite_normal_form();
        (0..h.rows).filter(|&i| !h.row_is_zero(i)).count()
    }

    /// Basis of the left integer kernel `{ y : y * self = 0 }`, as rows.
    ///
    /// These are the transform rows matching zero rows of the Hermite form,
    /// so they generate the full kernel lattice (it is automatically
    /// saturated: the kernel of an integer matrix is a direct summand).
    pub fn left_kernel_basis(&self) -> IntMatrix {
        let (h, t) = self.hermite_normal_form();
        let rows: Vec<Vec<BigInt>> = (0..h.rows)
            .filter(|&i| h.row_is_zero(i))
            .map(|i| t.row(i).to_vec())
            .collect();
        if rows.is_empty() {
            IntMatrix {
                rows: 0,
                cols: self.rows,
                data: vec![],
            }
        } else {
            IntMatrix::from_rows(rows)
        }
    }

    /// Basis of `{ x : self * x = 0 }`, one solution per row.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.transpose().left_kernel_basis()
    }

    /// Smith normal form invariant factors `d_1 | d_2 | ... | d_r`, positive,
    /// one per unit of rank. The row and column operations used are all
    /// unimodular, so these are the invariant factors of the cokernel
    /// presentation.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let rows = m.rows;
        let cols = m.cols;
        let mut invariants = Vec::new();
        let mut top = 0;

        'outer: while top < rows && top < cols {
            // Find any nonzero entry in the remaining block.
            let mut pivot = None;
            let mut best: Option<BigInt> = None;
            for i in top..rows {
                for j in top..cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    let a = m[(i, j)].abs();
                    if best.as_ref().is_none_or(|b| a < *b) {
                        best = Some(a);
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap_rows(top, pi);
            // column swap
            if pj != top {
                for i in 0..rows {
                    let a = m[(i, top)].clone();
                    m[(i, top)] = m[(i, pj)].clone();
                    m[(i, pj)] = a;
                }
            }

            // Alternate row and column reduction until the pivot is alone.
            loop {
                let mut dirty = false;
                for i in top + 1..rows {
                    if m[(i, top)].is_zero() {
                        continue;
                    }
                    let q = m[(i, top)].div_floor(&m[(top, top)]);
                    m.row_submul(i, top, &q);
                    if !m[(i, top)].is_zero() {
                        // remainder smaller than pivot: promote it
                        m.swap_rows(top, i);
                        dirty = true;
                    }
                }
                for j in top + 1..cols {
                    if m[(top, j)].is_zero() {
                        continue;
                    }
                    let q = m[(top, j)].div_floor(&m[(top, top)]);
                    for i in 0..rows {
                        let t = &q * &m[(i, top)];
                        m[(i, j)] -= t;
                    }
                    if !m[(top, j)].is_zero() {
                        for i in 0..rows {
                            let a = m[(i, top)].clone();
                            m[(i, top)] = m[(i, j)].clone();
                            m[(i, j)] = a;
                        }
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }

            // Enforce divisibility: the pivot must divide every remaining
            // entry; otherwise fold the offending row in and redo the block.
            for i in top + 1..rows {
                for j in top + 1..cols {
                    if !(&m[(i, j)] % &m[(top, top)]).is_zero() {
                        // add row i to row top, restart this block
                        for jj in 0..cols {
                            let t = m[(i, jj)].clone();
                            m[(top, jj)] += t;
                        }
                        continue 'outer;
                    }
                }
            }

            let mut d = m[(top, top)].clone();
            if d.is_negative() {
                d = -d;
            }
            invariants.push(d);
            top += 1;
        }
        invariants
    }

    /// Whether the row spans of `self` and `other` are the same sublattice
    /// of `Z^cols`. Decided by comparing Hermite forms with zero rows
    /// dropped; the reduced form is a unique lattice normal form.
    pub fn same_row_lattice(&self, other: &IntMatrix) -> bool {
        assert_eq!(
            self.cols, other.cols,
            "lattice comparison requires equal ambient dimension"
        );
        fn reduced(m: &IntMatrix) -> IntMatrix {
            let (h, _) = m.hermite_normal_form();
            let rows: Vec<Vec<BigInt>> = (0..h.rows)
                .filter(|&i| !h.row_is_zero(i))
                .map(|i| h.row(i).to_vec())
                .collect();
            if rows.is_empty() {
                IntMatrix {
                    rows: 0,
                    cols: m.cols,
                    data: vec![],
                }
            } else {
                IntMatrix::from_rows(rows)
            }
        }
        reduced(self) == reduced(other)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn is_unimodular(t: &IntMatrix) -> bool {
        // det = ±1 iff all Smith invariants are 1
        t.nrows() == t.ncols()
            && t.smith_invariants().len() == t.nrows()
            && t.smith_invariants().iter().all(BigInt::is_one)
    }

    fn random_matrix(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = BigInt::from(rng.gen_range(-6i64..=6));
            }
        }
        m
    }

    fn check_hnf_shape(h: &IntMatrix) {
        let mut last_col: isize = -1;
        let mut seen_zero_row = false;
        for i in 0..h.nrows() {
            let lead = (0..h.ncols()).find(|&j| !h[(i, j)].is_zero());
            match lead {
                None => seen_zero_row = true,
                Some(j) => {
                    assert!(!seen_zero_row, "nonzero row below a zero row");
                    assert!((j as isize) > last_col, "pivots not strictly staircase");
                    last_col = j as isize;
                    assert!(h[(i, j)].is_positive(), "pivot not positive");
                    for above in 0..i {
                        assert!(
                            !h[(above, j)].is_negative() && h[(above, j)] < h[(i, j)],
                            "entry above pivot not reduced"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hnf_small_example() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let (h, t) = m.hermite_normal_form();
        assert_eq!(h, IntMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]));
        assert_eq!(t.mul(&m), h);
        assert!(is_unimodular(&t));
    }

    #[test]
    fn hnf_shape_and_transform_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, rows, cols);
            let (h, t) = m.hermite_normal_form();
            assert_eq!(t.mul(&m), h);
            assert!(is_unimodular(&t));
            check_hnf_shape(&h);
        }
    }

    #[test]
    fn hnf_of_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let (h, _) = id.hermite_normal_form();
        assert_eq!(h, id);

        let z = IntMatrix::zeros(2, 3);
        let (h, t) = z.hermite_normal_form();
        assert!(h.is_zero());
        assert!(is_unimodular(&t));
    }

    #[test]
    fn smith_small_example() {
        let m = IntMatrix::from_i64_rows(&[&[2, 4], &[6, 8]]);
        assert_eq!(
            m.smith_invariants(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn smith_divisibility_chain_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let m = random_matrix(&mut rng, rows, cols);
            let inv = m.smith_invariants();
            assert_eq!(inv.len(), m.rank());
            for w in inv.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "invariants must divide in order");
            }
            assert!(inv.iter().all(BigInt::is_positive));
        }
    }

    #[test]
    fn smith_detects_torsion() {
        // diag(1, 2) presentation: cokernel Z/2
        let m = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        assert_eq!(m.smith_invariants(), vec![BigInt::one(), BigInt::from(2)]);
        // full lattice: all invariants 1
        let m = IntMatrix::from_i64_rows(&[&[3, 1], &[1, 0]]);
        assert_eq!(m.smith_invariants(), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn kernel_examples() {
        // single column [1, 1]^T: left kernel spanned by (1, -1)
        let m = IntMatrix::from_i64_rows(&[&[1], &[1]]);
        let k = m.left_kernel_basis();
        assert_eq!(k.nrows(), 1);
        assert!(k.mul(&m).is_zero());
        let r = k.row(0);
        assert_eq!(r[0], -(&r[1]));
        assert_eq!(r[0].abs(), BigInt::one());

        // right kernel of [[1,1,1],[0,1,1]]: spanned by (0, 1, -1)
        let m = IntMatrix::from_i64_rows(&[&[1, 1, 1], &[0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.nrows(), 1);
        assert!(m.mul(&k.transpose()).is_zero());
        assert!(k.row(0)[0].is_zero());
        assert_eq!(k.row(0)[1].abs(), BigInt::one());
        assert_eq!(k.row(0)[1], -(&k.row(0)[2]));

        // injective map: trivial kernel
        let m = IntMatrix::identity(3);
        assert_eq!(m.kernel_basis().nrows(), 0);
    }

    #[test]
    fn kernel_saturated_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let m = random_matrix(&mut rng, rows, cols);
            let k = m.left_kernel_basis();
            assert!(k.nrows() == 0 || k.mul(&m).is_zero());
            assert_eq!(k.nrows(), m.nrows() - m.rank());
            // saturation: kernel basis extends to a basis of the ambient
            // lattice, i.e. its Smith invariants are all 1
            if k.nrows() > 0 {
                assert!(k.smith_invariants().iter().all(BigInt::is_one));
            }
        }
    }

    #[test]
    fn lattice_equality() {
        let a = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]);
        let b = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1], &[1, 0]]);
        assert!(a.same_row_lattice(&b));

        let index_two = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        assert!(!a.same_row_lattice(&index_two));

        // unimodular re-mixing preserves the lattice
        let m = IntMatrix::from_i64_rows(&[&[2, 3, 5], &[1, 1, 1]]);
        let u = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 2]]);
        assert!(m.same_row_lattice(&u.mul(&m)));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(4).rank(), 4);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert_eq!(m.rank(), 1);
    }
}
