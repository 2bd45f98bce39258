//! Exact integer and rational linear algebra: Hermite normal form, kernel
//! lattices, rank and linear solving over arbitrary-precision numbers.
//!
//! Everything downstream (cone conversion, chamber splitting, Cartier tests)
//! reduces to these few primitives, so they are kept deliberately small and
//! fully exact; no floating point appears anywhere in this crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision signed integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rat = BigRational;

/// Dense integer matrix with row-major storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl IMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    /// Builds a matrix from row vectors. The column count must be given
    /// explicitly so that zero-row matrices keep their width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Int>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row in IMatrix::from_rows");
            data.extend(r);
        }
        IMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> IMatrix {
        let mut t = IMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &IMatrix) -> IMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = IMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Matrix with the selected columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> IMatrix {
        let mut out = IMatrix::zero(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) - q * self.get(src, j);
            self.set(dst, j, v);
        }
    }
}

/// Result of a row-style Hermite normal form: `u * m == h`, `u` unimodular.
pub struct Hnf {
    pub h: IMatrix,
    pub u: IMatrix,
}

/// Row-style Hermite normal form.
///
/// The returned `h` is in row echelon form with positive pivots; entries
/// above each pivot are reduced into `[0, pivot)`. `u` is unimodular with
/// `u * m == h`. This one convention is used everywhere so that kernel
/// bases and Gale duals are bit-stable across runs.
pub fn hnf(m: &IMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IMatrix::identity(m.rows());
    let mut pivot_row = 0usize;

    for col in 0..h.cols() {
        if pivot_row == h.rows() {
            break;
        }
        if (pivot_row..h.rows()).all(|r| h.get(r, col).is_zero()) {
            continue;
        }
        // Euclidean reduction: shrink all entries below the pivot to zero.
        loop {
            let best = (pivot_row..h.rows())
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by_key(|&r| h.get(r, col).abs())
                .expect("nonzero entry exists");
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            let pivot = h.get(pivot_row, col).clone();
            for r in pivot_row + 1..h.rows() {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = h.get(r, col) / &pivot;
                h.row_axpy(r, pivot_row, &q);
                u.row_axpy(r, pivot_row, &q);
                if !h.get(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.get(r, col).div_floor(&pivot);
            h.row_axpy(r, pivot_row, &q);
            u.row_axpy(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    Hnf { h, u }
}

/// Rank over the rationals.
pub fn rank(m: &IMatrix) -> usize {
    let h = hnf(m).h;
    (0..h.rows()).filter(|&i| !h.row_is_zero(i)).count()
}

/// Basis of the saturated integer lattice `{x : m * x = 0}`, one basis
/// vector per row, returned in Hermite normal form for determinism.
pub fn kernel_lattice(m: &IMatrix) -> IMatrix {
    let t = m.transpose();
    let Hnf { h, u } = hnf(&t);
    let basis: Vec<Vec<Int>> = (0..h.rows())
        .filter(|&i| h.row_is_zero(i))
        .map(|i| u.row(i).to_vec())
        .collect();
    let k = IMatrix::from_rows(m.cols(), basis);
    // The rows come from a unimodular matrix, hence span a saturated
    // lattice; one more HNF pins the representative.
    hnf(&k).h
}

/// Determinant of a square matrix (fraction-free Bareiss elimination).
pub fn det(m: &IMatrix) -> Int {
    assert_eq!(m.rows(), m.cols(), "det requires a square matrix");
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, k, Int::zero());
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// One exact solution of `a * x = b` over the rationals, or `None` when the
/// system is inconsistent. Free variables are set to zero; when `a` has full
/// column rank the solution is unique.
#[allow(clippy::needless_range_loop)] // elimination reads two rows at once
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "solve: rhs length mismatch");
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "solve: ragged matrix");
            let mut v = row.clone();
            v.push(rhs.clone());
            v
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0usize;
    for col in 0..cols {
        let Some(r) = (prow..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(prow, r);
        let inv = aug[prow][col].clone();
        for j in col..=cols {
            let v = &aug[prow][j] / &inv;
            aug[prow][j] = v;
        }
        for r2 in 0..rows {
            if r2 == prow || aug[r2][col].is_zero() {
                continue;
            }
            let f = aug[r2][col].clone();
            for j in col..=cols {
                let v = &aug[r2][j] - &f * &aug[prow][j];
                aug[r2][j] = v;
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == rows {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero right-hand side.
    for r in prow..rows {
        if !aug[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Exact integer dot product.
pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len(), "dot dimension mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dot product of an integer functional with a rational point.
pub fn dot_rat(n: &[Int], x: &[Rat]) -> Rat {
    debug_assert_eq!(n.len(), x.len(), "dot_rat dimension mismatch");
    n.iter().zip(x).map(|(a, b)| Rat::from(a.clone()) * b).sum()
}

/// Gcd of absolute values; zero for the zero vector.
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for x in v {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    g
}

/// Divides by the content, preserving direction. `None` for the zero vector.
pub fn primitivize(mut v: Vec<Int>) -> Option<Vec<Int>> {
    let g = content(&v);
    if g.is_zero() {
        return None;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    Some(v)
}

/// Primitive integer vector in the direction of a rational vector.
pub fn primitive_from_rationals(v: &[Rat]) -> Option<Vec<Int>> {
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let scaled: Vec<Int> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitivize(scaled)
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from(x.clone())).collect()
}

pub fn neg_vec(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| -x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unimodular(u: &IMatrix) -> bool {
        u.rows() == u.cols() && det(u).abs().is_one()
    }

    fn is_echelon_with_positive_pivots(h: &IMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        for i in 0..h.rows() {
            let pivot = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
            match pivot {
                None => {
                    // All remaining rows must be zero too.
                    if (i + 1..h.rows()).any(|r| !(0..h.cols()).all(|j| h.get(r, j).is_zero())) {
                        return false;
                    }
                    return true;
                }
                Some(j) => {
                    if let Some(p) = last_pivot {
                        if j <= p {
                            return false;
                        }
                    }
                    if h.get(i, j).is_negative() {
                        return false;
                    }
                    // Entries above the pivot reduced into [0, pivot).
                    for r in 0..i {
                        if h.get(r, j).is_negative() || h.get(r, j) >= h.get(i, j) {
                            return false;
                        }
                    }
                    last_pivot = Some(j);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity() {
        let m = IMatrix::identity(3);
        let Hnf { h, u } = hnf(&m);
        assert_eq!(h, IMatrix::identity(3));
        assert_eq!(u, IMatrix::identity(3));
    }

    #[test]
    fn hnf_zero_matrix() {
        let m = IMatrix::zero(2, 2);
        let Hnf { h, u } = hnf(&m);
        assert!(h.is_zero());
        assert_eq!(u, IMatrix::identity(2));
    }

    #[test]
    fn hnf_small_example() {
        let m = IMatrix::from_i64(&[&[2, 4], &[1, 3]]);
        let Hnf { h, u } = hnf(&m);
        assert_eq!(u.matmul(&m), h);
        assert!(is_unimodular(&u));
        assert!(is_echelon_with_positive_pivots(&h));
    }

    #[test]
    fn rank_examples() {
        let v = prism_matrix();
        assert_eq!(rank(&v), 3);
        assert_eq!(rank(&IMatrix::zero(2, 3)), 0);
        assert_eq!(rank(&IMatrix::identity(3)), 3);
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        let k = kernel_lattice(&IMatrix::identity(4));
        assert_eq!(k.rows(), 0);
        assert_eq!(k.cols(), 4);
    }

    #[test]
    fn kernel_one_equation() {
        let k = kernel_lattice(&IMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, IMatrix::from_i64(&[&[1, -1]]));
    }

    fn prism_matrix() -> IMatrix {
        IMatrix::from_i64(&[
            &[1, 0, 0, 0, -1, 1],
            &[0, 1, 0, -1, -1, 2],
            &[0, 0, 1, -1, 0, 1],
        ])
    }

    fn prism_q() -> IMatrix {
        IMatrix::from_i64(&[
            &[1, 1, 0, 0, 1, 0],
            &[0, 1, 1, 1, 0, 0],
            &[0, 0, 0, 1, 1, 1],
        ])
    }

    #[test]
    fn kernel_lattice_matches_known_gale_dual() {
        let v = prism_matrix();
        let k = kernel_lattice(&v);
        assert_eq!(k.rows(), 3);
        // Same row lattice as a known Gale dual representative: the HNF of
        // its rows must reproduce the computed basis.
        assert_eq!(hnf(&prism_q()).h, k);
        // And k really annihilates the columns of v.
        assert!(k.matmul(&v.transpose()).is_zero());
    }

    #[test]
    fn kernel_is_saturated() {
        // Any integer solution must be an integer combination of the basis.
        let m = IMatrix::from_i64(&[&[2, 4, 6], &[1, 2, 3]]);
        let k = kernel_lattice(&m);
        assert_eq!(k.rows(), 2);
        // x = (1, 1, -1) solves m x = 0; membership via HNF agreement.
        let x = IMatrix::from_i64(&[&[1, 1, -1]]);
        assert!(m.matmul(&x.transpose()).is_zero());
        let mut stacked = k.row_vecs();
        stacked.extend(x.row_vecs());
        let h2 = hnf(&IMatrix::from_rows(3, stacked)).h;
        let h2 = IMatrix::from_rows(
            3,
            (0..h2.rows())
                .filter(|&i| !h2.row(i).iter().all(|v| v.is_zero()))
                .map(|i| h2.row(i).to_vec())
                .collect(),
        );
        assert_eq!(h2, k);
    }

    #[test]
    fn solve_identity() {
        let a: Vec<Vec<Rat>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        if i == j {
                            Rat::from(Int::from(1))
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<Rat> = [3, -1, 7]
            .iter()
            .map(|&x| Rat::from(Int::from(x)))
            .collect();
        assert_eq!(solve(&a, &b), Some(b));
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![vec![Rat::from(Int::from(1))], vec![Rat::from(Int::from(1))]];
        let b = vec![Rat::zero(), Rat::from(Int::from(1))];
        assert_eq!(solve(&a, &b), None);
    }

    #[test]
    fn solve_cartier_system_on_first_prism_cone() {
        // Columns {1,2,4} of the fan matrix (1-based), transposed, with
        // b = -(4,2,4): the Cartier system of the ample divisor on <1,2,4>.
        let v = prism_matrix();
        let cols = v.select_cols(&[0, 1, 3]);
        let a: Vec<Vec<Rat>> = cols
            .transpose()
            .row_vecs()
            .iter()
            .map(|r| to_rat_vec(r))
            .collect();
        let b: Vec<Rat> = [-4, -2, -4]
            .iter()
            .map(|&x| Rat::from(Int::from(x)))
            .collect();
        let m = solve(&a, &b).expect("consistent system");
        let expected: Vec<Rat> = [-4, -2, 6]
            .iter()
            .map(|&x| Rat::from(Int::from(x)))
            .collect();
        assert_eq!(m, expected);
        // Residual check: V_I^T m + a_I = 0.
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: Rat = row.iter().zip(&m).map(|(p, q)| p * q).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn primitivize_examples() {
        assert_eq!(
            primitivize(vec![Int::from(2), Int::from(-4), Int::from(6)]),
            Some(vec![Int::from(1), Int::from(-2), Int::from(3)])
        );
        assert_eq!(primitivize(vec![Int::zero(), Int::zero()]), None);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IMatrix::identity(3)), Int::one());
        assert_eq!(det(&IMatrix::from_i64(&[&[2, 4], &[1, 3]])), Int::from(2));
        assert_eq!(det(&IMatrix::from_i64(&[&[1, 2], &[2, 4]])), Int::zero());
    }
}
