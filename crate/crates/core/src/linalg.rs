//! Exact dense linear algebra over the rationals.
//!
//! Matrices are square and stored row-major. Element access through
//! `Index<(usize, usize)>` is 0-based like any Rust container; everything
//! that names rows and columns in the mathematical sense ([`MinorIndex`],
//! [`Matrix::elementary`], witnesses, file formats) is 1-based.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Always stored reduced with a
/// positive denominator, so `==` is exact equality.
pub type Rational = BigRational;

/// Exact column vector.
pub type Vector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"p/q"`, ignoring any whitespace.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    Rational::from_str(&compact).map_err(|e| Error::Parse(format!("bad rational {text:?}: {e}")))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::BadParameters("matrix dimension must be positive".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, expected: dim });
            }
            entries.extend(row);
        }
        Ok(Matrix { dim, entries })
    }

    /// Integer matrix literal. Panics if `rows` is not square; meant for
    /// tests and hard-coded constants.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Matrix::from_rows(rows).expect("square integer literal")
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Matrix { dim, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Result<Self> {
        let dim = columns.len();
        if dim == 0 {
            return Err(Error::BadParameters("matrix dimension must be positive".into()));
        }
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::NotSquare { rows: dim, expected: dim });
        }
        Ok(Matrix::from_fn(dim, |r, c| columns[c][r].clone()))
    }

    pub fn identity(dim: usize) -> Self {
        Matrix::from_fn(dim, |r, c| if r == c { Rational::one() } else { Rational::zero() })
    }

    pub fn zero(dim: usize) -> Self {
        Matrix::from_fn(dim, |_, _| Rational::zero())
    }

    /// `I + t·E_{i,j}` with 1-based `i`, `j` (requires `i != j`).
    pub fn elementary(dim: usize, i: usize, j: usize, t: Rational) -> Self {
        assert!(i != j && (1..=dim).contains(&i) && (1..=dim).contains(&j));
        let mut m = Matrix::identity(dim);
        m[(i - 1, j - 1)] = t;
        m
    }

    /// The reversed identity: column `c` is `e_{d-c+1}`.
    pub fn reversal(dim: usize) -> Self {
        Matrix::from_fn(dim, |r, c| if r + c + 1 == dim { Rational::one() } else { Rational::zero() })
    }

    /// Permutation matrix whose column `c` is `e_{perm[c]}` (1-based labels).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        for &p in perm {
            if p == 0 || p > dim || seen[p - 1] {
                return Err(Error::BadParameters(format!("{perm:?} is not a permutation")));
            }
            seen[p - 1] = true;
        }
        Ok(Matrix::from_fn(dim, |r, c| if perm[c] == r + 1 { Rational::one() } else { Rational::zero() }))
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        Matrix::from_fn(values.len(), |r, c| if r == c { values[r].clone() } else { Rational::zero() })
    }

    pub fn block_diagonal(a: &Matrix, b: &Matrix) -> Self {
        let (n, m) = (a.dim, b.dim);
        Matrix::from_fn(n + m, |r, c| match (r < n, c < n) {
            (true, true) => a[(r, c)].clone(),
            (false, false) => b[(r - n, c - n)].clone(),
            _ => Rational::zero(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.dim).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.dim).map(|r| self[(r, c)].clone()).collect()
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Vec<Vector> {
        (0..k).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.dim, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|r| self.row(r).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|r| (0..r).all(|c| self[(r, c)].is_zero()))
    }

    pub fn is_upper_unipotent(&self) -> bool {
        self.is_upper_triangular() && (0..self.dim).all(|i| self[(i, i)].is_one())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Submatrix on 0-based row and column positions.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vector> {
        rows.iter().map(|&r| cols.iter().map(|&c| self[(r, c)].clone()).collect()).collect()
    }

    /// Exact determinant. Integral matrices go through fraction-free
    /// (Bareiss) elimination, everything else through rational Gaussian
    /// elimination.
    pub fn det(&self) -> Rational {
        determinant(&self.rows())
    }

    /// Determinant of the minor selected by `idx` (1-based positions).
    pub fn minor(&self, idx: &MinorIndex) -> Result<Rational> {
        for &i in idx.rows().iter().chain(idx.cols()) {
            if i > self.dim {
                return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
            }
        }
        let rows: Vec<usize> = idx.rows().iter().map(|i| i - 1).collect();
        let cols: Vec<usize> = idx.cols().iter().map(|j| j - 1).collect();
        Ok(determinant(&self.submatrix(&rows, &cols)))
    }

    /// `self^t` by repeated squaring; `pow(0)` is the identity.
    pub fn pow(&self, mut t: u64) -> Self {
        let mut result = Matrix::identity(self.dim);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = &result * &base;
            }
            t >>= 1;
            if t > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.rows(), self.dim)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut aug: Vec<Vector> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let pivots = rref(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let rows = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        Matrix::from_rows(rows)
    }

    /// Exact basis of the null space; empty iff the matrix is invertible.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        null_space(&self.rows(), self.dim)
    }

    /// Jordan block sizes of a unipotent matrix, largest first.
    ///
    /// With `N = u - I` and `r_m = rank(N^m)`, the number of blocks of size
    /// at least `m` is `r_{m-1} - r_m`.
    pub fn jordan_block_sizes(&self) -> Result<Vec<usize>> {
        let d = self.dim;
        let nil = self - &Matrix::identity(d);
        let mut ranks = vec![d];
        let mut power = Matrix::identity(d);
        for _ in 0..d {
            power = &power * &nil;
            ranks.push(power.rank());
        }
        if ranks[d] != 0 {
            return Err(Error::NotUnipotent);
        }
        // at_least[m] = number of blocks of size >= m, m = 1..=d
        let at_least: Vec<usize> = (1..=d).map(|m| ranks[m - 1] - ranks[m]).collect();
        let mut sizes = Vec::new();
        for m in (1..=d).rev() {
            let bigger = if m < d { at_least[m] } else { 0 };
            for _ in 0..(at_least[m - 1] - bigger) {
                sizes.push(m);
            }
        }
        Ok(sizes)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.entries[r * self.dim + c]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.dim {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, x) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A pair of strictly increasing 1-based index tuples `(I, J)` of equal
/// length selecting a square submatrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidIndex(format!("{rows:?} / {cols:?}: lengths must agree and be positive")));
        }
        for tuple in [&rows, &cols] {
            if tuple[0] == 0 || tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidIndex(format!("{tuple:?} is not strictly increasing in [1, d]")));
            }
        }
        Ok(MinorIndex { rows, cols })
    }

    /// Rows `start..start+k` against columns `col_start..col_start+k`.
    pub fn consecutive(start: usize, col_start: usize, k: usize) -> Self {
        assert!(start >= 1 && col_start >= 1 && k >= 1);
        MinorIndex { rows: (start..start + k).collect(), cols: (col_start..col_start + k).collect() }
    }

    /// The full `d × d` index.
    pub fn full(d: usize) -> Self {
        MinorIndex::consecutive(1, 1, d)
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `i_p <= j_p` for every `p`: the minor is not forced to vanish on
    /// upper-triangular matrices.
    pub fn is_nontrivial(&self) -> bool {
        self.rows.iter().zip(&self.cols).all(|(i, j)| i <= j)
    }

    pub fn rows_consecutive(&self) -> bool {
        is_consecutive(&self.rows)
    }

    pub fn cols_consecutive(&self) -> bool {
        is_consecutive(&self.cols)
    }
}

fn is_consecutive(t: &[usize]) -> bool {
    t.iter().enumerate().all(|(p, &i)| i == t[0] + p)
}

fn fmt_tuple(t: &[usize]) -> String {
    let inner: Vec<String> = t.iter().map(|i| i.to_string()).collect();
    format!("({})", inner.join(","))
}

impl fmt::Display for MinorIndex {
    /// `k;I;J`, e.g. `2;(1,2);(3,4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};{}", self.size(), fmt_tuple(&self.rows), fmt_tuple(&self.cols))
    }
}

/// Determinant of a square array of rationals (empty array → 1).
pub fn determinant(rows: &[Vector]) -> Rational {
    if rows.iter().all(|r| r.iter().all(|x| x.is_integer())) {
        let ints = rows.iter().map(|r| r.iter().map(|x| x.numer().clone()).collect()).collect();
        Rational::from_integer(det_bareiss(ints))
    } else {
        det_gauss(rows.to_vec())
    }
}

/// Fraction-free elimination: every intermediate value is an integer
/// (a minor of the input).
pub fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v.div_floor(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Plain rational Gaussian elimination.
pub fn det_gauss(mut a: Vec<Vector>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] / &pivot;
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][k..n].iter_mut().zip(&top[k][k..n]) {
                *x -= &factor * y;
            }
        }
        det *= pivot;
    }
    det
}

/// Reduces `rows` to reduced row echelon form, pivoting only in the first
/// `ncols` columns; any further columns are carried along. Works in
/// place and returns the pivot columns.
pub fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let m = rows.len();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..ncols {
        if pr >= m {
            break;
        }
        let Some(found) = (pr..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pr, found);
        let inv = rows[pr][col].recip();
        for x in rows[pr].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r == pr || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in 0..rows[r].len() {
                let v = &factor * &rows[pr][c];
                rows[r][c] -= v;
            }
        }
        pivots.push(col);
        pr += 1;
    }
    pivots
}

pub fn rank_of_rows(rows: &[Vector], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Rank of the span of a list of vectors.
pub fn rank_of_vectors(vectors: &[Vector]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => rank_of_rows(vectors, v.len()),
    }
}

/// Null space of a (possibly rectangular) system given by rows.
pub fn null_space(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal3() -> Matrix {
        Matrix::from_i64(&[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]])
    }

    /// Laplace expansion along the first row; independent of both
    /// elimination paths.
    fn det_cofactor(a: &[Vector]) -> Rational {
        let n = a.len();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for c in 0..n {
            let sub: Vec<Vector> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][c] * det_cofactor(&sub);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_examples() {
        for d in 1..6 {
            assert_eq!(Matrix::identity(d).det(), rat(1));
        }
        assert_eq!(pascal3().det(), rat(1));
        assert_eq!(Matrix::from_i64(&[&[1, 1], &[1, 2]]).det(), rat(1));
        assert_eq!(det_cofactor(&Matrix::from_i64(&[&[1, 1], &[1, 2]]).rows()), rat(1));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = Matrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(m.det(), rat(-3));
        assert_eq!(det_gauss(m.rows()), rat(-3));
        let half = Matrix::from_rows(vec![vec![rat(0), frac(1, 2)], vec![rat(2), rat(7)]]).unwrap();
        assert_eq!(half.det(), rat(-1));
    }

    #[test]
    fn minor_examples() {
        let q3 = pascal3();
        let idx = MinorIndex::new(vec![1, 2], vec![2, 3]).unwrap();
        assert_eq!(q3.minor(&idx).unwrap(), rat(1));
        assert_eq!(det_cofactor(&[vec![rat(1), rat(1)], vec![rat(1), rat(2)]]), rat(1));

        let q4 = Matrix::from_i64(&[&[1, 1, 1, 1], &[0, 1, 2, 3], &[0, 0, 1, 3], &[0, 0, 0, 1]]);
        let idx = MinorIndex::new(vec![1, 2], vec![3, 4]).unwrap();
        assert_eq!(q4.minor(&idx).unwrap(), rat(1));
        assert_eq!(det_cofactor(&[vec![rat(1), rat(1)], vec![rat(2), rat(3)]]), rat(1));

        let trivial = MinorIndex::new(vec![2], vec![1]).unwrap();
        assert!(!trivial.is_nontrivial());
        assert_eq!(q4.minor(&trivial).unwrap(), rat(0));
    }

    #[test]
    fn minor_out_of_range() {
        let idx = MinorIndex::new(vec![1, 4], vec![2, 4]).unwrap();
        assert_eq!(pascal3().minor(&idx), Err(Error::IndexOutOfRange { index: 4, dim: 3 }));
    }

    #[test]
    fn minor_index_validation() {
        assert!(MinorIndex::new(vec![2, 1], vec![1, 2]).is_err());
        assert!(MinorIndex::new(vec![1], vec![1, 2]).is_err());
        assert!(MinorIndex::new(vec![0], vec![1]).is_err());
        assert!(MinorIndex::new(vec![], vec![]).is_err());
        let idx = MinorIndex::new(vec![1, 3], vec![2, 3]).unwrap();
        assert!(idx.is_nontrivial());
        assert!(!idx.rows_consecutive());
        assert!(idx.cols_consecutive());
        assert!(!MinorIndex::new(vec![1, 3], vec![2, 2 + 1]).unwrap().rows_consecutive());
        assert!(!MinorIndex::new(vec![2, 3], vec![1, 4]).unwrap().is_nontrivial());
        assert_eq!(idx.to_string(), "2;(1,3);(2,3)");
    }

    #[test]
    fn pow_examples() {
        let expected = Matrix::from_i64(&[&[1, 2, 4], &[0, 1, 4], &[0, 0, 1]]);
        assert_eq!(pascal3().pow(2), expected);
        assert_eq!(&pascal3() * &pascal3(), expected);
        assert_eq!(pascal3().pow(0), Matrix::identity(3));
        for t in 0..7u64 {
            assert_eq!(pascal3().pow(t)[(0, 1)], rat(t as i64));
        }
    }

    #[test]
    fn jordan_examples() {
        let q5 = Matrix::from_fn(5, |r, c| Rational::from_integer(binomial(c as u64, r as u64)));
        assert_eq!(q5.jordan_block_sizes().unwrap(), vec![5]);
        assert_eq!(Matrix::identity(4).jordan_block_sizes().unwrap(), vec![1, 1, 1, 1]);
        let two = Matrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(two.jordan_block_sizes().unwrap(), vec![2, 1]);
        let not_unipotent = Matrix::from_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(not_unipotent.jordan_block_sizes(), Err(Error::NotUnipotent));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3).kernel_basis().is_empty());
        assert_eq!(Matrix::zero(2).kernel_basis().len(), 2);
        let ker = (&pascal3() - &Matrix::identity(3)).kernel_basis();
        assert_eq!(ker, vec![vec![rat(1), rat(0), rat(0)]]);
    }

    #[test]
    fn inverse_and_rank() {
        let m = Matrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(&m * &m.inverse().unwrap(), Matrix::identity(2));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn parse_accepts_whitespace() {
        assert_eq!(parse_rational(" 3 / 6 ").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(frac(2, -4).to_string(), "-1/2");
    }

    #[test]
    fn permutation_matrix_columns() {
        let p = Matrix::permutation(&[1, 3, 2]).unwrap();
        assert_eq!(p.column(1), vec![rat(0), rat(0), rat(1)]);
        assert!(Matrix::permutation(&[1, 1, 2]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
            (1..=max_dim).prop_flat_map(|d| {
                proptest::collection::vec(-6i64..=6, d * d)
                    .prop_map(move |v| Matrix::from_fn(d, |r, c| rat(v[r * d + c])))
            })
        }

        fn rat_matrix_pair(max_dim: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
            (1..=max_dim).prop_flat_map(|d| {
                let entries = proptest::collection::vec((-5i64..=5, 1i64..=4), d * d);
                (entries.clone(), entries).prop_map(move |(a, b)| {
                    let mk = |v: &Vec<(i64, i64)>| Matrix::from_fn(d, |r, c| frac(v[r * d + c].0, v[r * d + c].1));
                    (mk(&a), mk(&b))
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn bareiss_matches_gauss_and_cofactor(m in int_matrix(6)) {
                let ints = m.rows().iter().map(|r| r.iter().map(|x| x.numer().clone()).collect()).collect();
                let fraction_free = Rational::from_integer(det_bareiss(ints));
                prop_assert_eq!(&fraction_free, &det_gauss(m.rows()));
                if m.dim() <= 5 {
                    prop_assert_eq!(&fraction_free, &det_cofactor(&m.rows()));
                }
            }

            #[test]
            fn det_is_multiplicative((a, b) in rat_matrix_pair(6)) {
                prop_assert_eq!((&a * &b).det(), a.det() * b.det());
            }

            #[test]
            fn full_minor_is_det(m in int_matrix(6)) {
                prop_assert_eq!(m.minor(&MinorIndex::full(m.dim())).unwrap(), m.det());
            }

            #[test]
            fn jordan_type_is_conjugation_invariant(
                ups in proptest::collection::vec(-2i64..=2, 15),
                conj in proptest::collection::vec(-3i64..=3, 36),
            ) {
                let d = 6;
                let mut k = 0;
                let u = Matrix::from_fn(d, |r, c| {
                    if r == c { rat(1) } else if r < c { k += 1; rat(ups[k - 1]) } else { rat(0) }
                });
                let h = Matrix::from_fn(d, |r, c| rat(conj[r * d + c]) + if r == c { rat(16) } else { rat(0) });
                let sizes = u.jordan_block_sizes().unwrap();
                prop_assert_eq!(sizes.iter().sum::<usize>(), d);
                let conjugated = &(&h * &u) * &h.inverse().unwrap();
                prop_assert_eq!(conjugated.jordan_block_sizes().unwrap(), sizes);
            }
        }
    }
}
