//! Smith normal form and saturated kernels over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::intmatrix::IntMatrix;

/// `left · m · right = diag(diagonal)` with unimodular transforms.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left_transform: IntMatrix,
    pub diagonal: Vec<BigInt>,
    pub right_transform: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    left: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.left.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.left] {
            let (ri, rj) = pair_mut(m, i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter()) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    /// col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            if !row[j].is_zero() {
                let d = q * &row[j];
                row[i] -= d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.left[i].iter_mut()) {
            *x = -&*x;
        }
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work { a: m.to_dense(), left: identity_dense(rows), right: identity_dense(cols) };
    let mut diagonal = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = &w.a[i][j];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            let mut changed = false;
            for i in k + 1..rows {
                if !w.a[i][k].is_zero() {
                    let q = w.a[i][k].div_floor(&w.a[k][k]);
                    w.row_sub(i, k, &q);
                    if !w.a[i][k].is_zero() {
                        w.swap_rows(k, i);
                        changed = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !w.a[k][j].is_zero() {
                    let q = w.a[k][j].div_floor(&w.a[k][k]);
                    w.col_sub(j, k, &q);
                    if !w.a[k][j].is_zero() {
                        w.swap_cols(k, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[i][j].is_multiple_of(&w.a[k][k]));
            match bad {
                Some((i, _)) => {
                    // row_k += row_i
                    w.row_sub(k, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a[k][k].is_negative() {
            w.negate_row(k);
        }
        diagonal.push(w.a[k][k].clone());
        k += 1;
    }
    while diagonal.len() < rows.min(cols) {
        diagonal.push(BigInt::zero());
    }
    SmithDecomposition {
        left_transform: IntMatrix::from_dense(rows, rows, &w.left),
        diagonal,
        right_transform: IntMatrix::from_dense(cols, cols, &w.right),
    }
}

/// Z-basis of `{x in Z^cols : m x = 0}`, returned as rows in Hermite form.
///
/// Column operations on `[m; I]` bring `m` to column echelon form; the
/// transform columns sitting under zero columns span the integer kernel,
/// which is therefore saturated.
pub fn kernel_saturated(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows(), m.cols());
    let dense = m.to_dense();
    // each working column: (entries of m-part, entries of transform)
    let mut work: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..cols)
        .map(|j| {
            let mut t = vec![BigInt::zero(); cols];
            t[j] = BigInt::one();
            ((0..rows).map(|i| dense[i][j].clone()).collect(), t)
        })
        .collect();
    let mut active: Vec<usize> = (0..cols).collect();
    for i in 0..rows {
        loop {
            let nz: Vec<usize> = active.iter().copied().filter(|&j| !work[j].0[i].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let &p = nz.iter().min_by_key(|&&j| work[j].0[i].abs()).unwrap();
            if nz.len() == 1 {
                active.retain(|&j| j != p);
                break;
            }
            for &j in &nz {
                if j == p {
                    continue;
                }
                let q = work[j].0[i].div_floor(&work[p].0[i]);
                let (src_m, src_t) = (work[p].0.clone(), work[p].1.clone());
                let dst = &mut work[j];
                for (x, y) in dst.0.iter_mut().zip(&src_m) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                for (x, y) in dst.1.iter_mut().zip(&src_t) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
            }
        }
    }
    let basis: Vec<Vec<BigInt>> = active.into_iter().map(|j| work[j].1.clone()).collect();
    hermite_rows(basis)
}

/// Row Hermite normal form of a full-rank set of integer rows (same lattice).
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while !rows.is_empty() && col < n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let &p = nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            for &r in &nz {
                if r == p {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[p][col]);
                let src = rows[p].clone();
                for (x, y) in rows[r].iter_mut().zip(&src) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            let mut row = rows.remove(p);
            if row[col].is_negative() {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
            out.push(row);
        }
        col += 1;
    }
    // reduce entries above each pivot into [0, pivot)
    for k in 0..out.len() {
        let pc = out[k].iter().position(|x| !x.is_zero()).unwrap();
        let piv = out[k][pc].clone();
        let src = out[k].clone();
        for row in out.iter_mut().take(k) {
            let q = row[pc].div_floor(&piv);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&src) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::intmatrix::determinant;
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        let prod = s.left_transform.mul(m).mul(&s.right_transform);
        assert!(prod.is_diagonal());
        for (i, d) in s.diagonal.iter().enumerate() {
            assert_eq!(&prod.get(i, i), d);
        }
        assert_eq!(determinant(&s.left_transform).abs(), BigInt::one());
        assert_eq!(determinant(&s.right_transform).abs(), BigInt::one());
        let nz: Vec<_> = s.diagonal.iter().filter(|d| !d.is_zero()).collect();
        for w in nz.windows(2) {
            assert!(w[1].is_multiple_of(w[0]));
        }
        s
    }

    #[test]
    fn snf_examples() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.diagonal, vec![BigInt::one(), BigInt::one()]);
        let s = check(&IntMatrix::from_rows(&[vec![5]]));
        assert_eq!(s.diagonal, vec![BigInt::from(5)]);
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 10]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(10)]);
        let s = check(&IntMatrix::zeros(0, 0));
        assert!(s.diagonal.is_empty());
    }

    #[test]
    fn snf_needs_gcd_fixup() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::one(), BigInt::from(6)]);
        let s = check(&IntMatrix::from_rows(&[vec![5, 1], vec![0, 5]]));
        assert_eq!(s.diagonal, vec![BigInt::one(), BigInt::from(25)]);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_saturated(&IntMatrix::from_rows(&[vec![5]])).is_empty());
        assert_eq!(kernel_saturated(&IntMatrix::zeros(1, 1)), vec![vec![BigInt::one()]]);
        assert_eq!(
            kernel_saturated(&IntMatrix::from_rows(&[vec![1, -1]])),
            vec![vec![BigInt::one(), BigInt::one()]]
        );
        // 5x - 10y = 0 has saturated generator (2,1), not (10,5)
        assert_eq!(
            kernel_saturated(&IntMatrix::from_rows(&[vec![5, -10]])),
            vec![vec![BigInt::from(2), BigInt::one()]]
        );
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-12i64..12, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn snf_invariants(m in small_matrix()) {
            check(&m);
        }

        #[test]
        fn kernel_is_exact_and_saturated(m in small_matrix()) {
            let k = kernel_saturated(&m);
            let s = smith_normal_form(&m);
            prop_assert_eq!(k.len(), m.cols() - s.rank());
            for row in &k {
                prop_assert!(m.apply(row).iter().all(|x| x.is_zero()));
            }
            if !k.is_empty() {
                let km = IntMatrix::from_dense(k.len(), m.cols(), &k);
                let ks = smith_normal_form(&km);
                prop_assert!(ks.diagonal.iter().all(|d| d.is_one()));
            }
        }
    }
}
