//! Exact rational scalars, dense matrices, and the subspace kernel used
//! everywhere else in this crate.
//!
//! All arithmetic is exact: scalars are arbitrary-precision rationals kept in
//! lowest terms, and subspaces are stored as reduced row-echelon bases so that
//! subspace equality is plain structural equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::Error;

/// Arbitrary-precision rational scalar. Always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses the wire form of a rational: `p`, `-p`, `p/q` (no whitespace).
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::BadRational(s.to_string());
    if s.is_empty() || s.chars().any(|c| c.is_whitespace()) {
        return Err(bad());
    }
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let n: BigInt = p.parse().map_err(|_| bad())?;
            let d: BigInt = q.parse().map_err(|_| bad())?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Formats a rational in the wire form accepted by [`parse_rat`].
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense matrix of exact rationals, row-major. Dimensions are fixed at
/// construction; equality is exact entrywise equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix from integer entries; test and fixture convenience.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().copied().map(rat_int).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rat) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        let cur = &out[(i, j)] + &(a * b);
                        out[(i, j)] = cur;
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening; the repo-wide convention for treating a matrix
    /// as a vector in subspace computations.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form; row space is preserved.
pub fn rref(m: &QMatrix) -> QMatrix {
    let mut rows: Vec<Vec<Rat>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    rref_rows(&mut rows, m.cols());
    QMatrix::from_rows(rows)
}

/// In-place RREF on a list of equal-length rows; returns the pivot columns.
pub(crate) fn rref_rows(rows: &mut Vec<Vec<Rat>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let upd = &rows[i][j] - &(&f * &rows[r][j]);
                    rows[i][j] = upd;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A Q-linear subspace of `Q^ambient_dim` stored as an RREF basis.
/// Two subspaces are equal iff their bases are identical.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(
            (0..ambient_dim)
                .map(|i| {
                    let mut v = vec![Rat::zero(); ambient_dim];
                    v[i] = Rat::one();
                    v
                })
                .collect(),
            ambient_dim,
        )
    }

    /// Canonical span of a list of vectors.
    pub fn span(vectors: Vec<Vec<Rat>>, ambient_dim: usize) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "dimension mismatch");
        }
        let mut rows = vectors;
        let pivots = rref_rows(&mut rows, ambient_dim);
        rows.truncate(pivots.len());
        Subspace { ambient_dim, basis: rows, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Residual of `v` after reduction by the basis; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient_dim, "dimension mismatch");
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in 0..self.ambient_dim {
                    let upd = &v[j] - &(&f * &row[j]);
                    v[j] = upd;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Incremental insert; returns true if `v` enlarged the span.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        if self.contains(v) {
            return false;
        }
        let mut rows = std::mem::take(&mut self.basis);
        rows.push(v.to_vec());
        let pivots = rref_rows(&mut rows, self.ambient_dim);
        rows.truncate(pivots.len());
        self.basis = rows;
        self.pivots = pivots;
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "dimension mismatch");
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(rows, self.ambient_dim)
    }

    /// Rows spanning the annihilator `{y | <b, y> = 0 for all basis b}`.
    fn annihilator(&self) -> Vec<Vec<Rat>> {
        let m = QMatrix::from_rows(if self.basis.is_empty() {
            vec![vec![Rat::zero(); self.ambient_dim]]
        } else {
            self.basis.clone()
        });
        kernel(&m).basis.clone()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "dimension mismatch");
        let mut constraints = self.annihilator();
        constraints.extend(other.annihilator());
        if constraints.is_empty() {
            return Subspace::full(self.ambient_dim);
        }
        kernel(&QMatrix::from_rows(constraints))
    }
}

/// Kernel `{x | Mx = 0}` of a matrix acting on column vectors.
pub fn kernel(m: &QMatrix) -> Subspace {
    let cols = m.cols();
    let mut rows: Vec<Vec<Rat>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let pivots = rref_rows(&mut rows, cols);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    Subspace::span(basis, cols)
}

/// Preimage `{x | Mx in s}` of a subspace under the linear map `M`.
pub fn preimage(m: &QMatrix, s: &Subspace) -> Subspace {
    assert_eq!(m.rows(), s.ambient_dim(), "dimension mismatch");
    let cols = m.cols();
    // Kernel of the stacked system M x - B^T y = 0, projected onto x.
    let extra = s.dim();
    let mut stacked = QMatrix::zeros(m.rows(), cols + extra);
    for i in 0..m.rows() {
        for j in 0..cols {
            stacked[(i, j)] = m[(i, j)].clone();
        }
        for (t, b) in s.basis().iter().enumerate() {
            stacked[(i, cols + t)] = -b[i].clone();
        }
    }
    let ker = kernel(&stacked);
    let projected: Vec<Vec<Rat>> = ker.basis().iter().map(|v| v[..cols].to_vec()).collect();
    Subspace::span(projected, cols)
}

/// Rows of a homogeneous system whose solution set is exactly `s`
/// (the annihilator basis, i.e. `s = {x | E x = 0}`).
pub fn equations_of(s: &Subspace) -> Vec<Vec<Rat>> {
    s.annihilator()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_wire_format() {
        for s in ["0", "5", "-3", "2/3", "-11/4"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(format_rat(&parse_rat("-4/6").unwrap()), "-2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat(" 1").is_err());
        assert!(parse_rat("").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = QMatrix::identity(2);
        assert_eq!(rref(&m), m);
    }

    #[test]
    fn rref_proportional_rows() {
        let m = QMatrix::from_i64(&[&[2, 4], &[1, 2]]);
        let expect = QMatrix::from_i64(&[&[1, 2], &[0, 0]]);
        assert_eq!(rref(&m), expect);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = QMatrix::from_i64(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let r = rref(&m);
        assert_eq!(rref(&r), r);
    }

    #[test]
    fn span_of_nothing_is_zero() {
        let s = Subspace::span(Vec::new(), 6);
        assert_eq!(s.dim(), 0);
        assert!(s.contains(&vec![Rat::zero(); 6]));
    }

    #[test]
    fn span_collapses_dependent_vectors() {
        let v: Vec<Rat> = [1, 2, 3].iter().map(|&x| rat_int(x)).collect();
        let two_v: Vec<Rat> = v.iter().map(|x| x * rat_int(2)).collect();
        let v_plus_v = two_v.clone();
        let s = Subspace::span(vec![v.clone(), two_v, v_plus_v], 3);
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&v));
    }

    #[test]
    fn kernel_rank_nullity() {
        let m = QMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 0, 1]]);
        let rank = rref(&m).row(0).len() - kernel(&m).dim(); // cols - nullity
        assert_eq!(rank + kernel(&m).dim(), m.cols());
        // rank computed independently for this instance
        assert_eq!(kernel(&m).dim(), 2);
        for b in kernel(&m).basis() {
            for i in 0..m.rows() {
                let dot: Rat = (0..m.cols()).map(|j| &m[(i, j)] * &b[j]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn preimage_of_full_space_is_full_domain() {
        let m = QMatrix::from_i64(&[&[1, 2], &[3, 4], &[5, 6]]);
        let full = Subspace::full(3);
        assert_eq!(preimage(&m, &full).dim(), 2);
    }

    #[test]
    fn sum_with_zero_is_identity() {
        let s = Subspace::span(vec![vec![rat_int(1), rat_int(2), rat_int(0)]], 3);
        assert_eq!(s.sum(&Subspace::zero(3)), s);
    }

    #[test]
    fn equations_cut_out_subspace() {
        let s = Subspace::span(
            vec![
                vec![rat_int(1), rat_int(0), rat_int(2), rat_int(0)],
                vec![rat_int(0), rat_int(1), rat_int(0), rat_int(3)],
            ],
            4,
        );
        let eqs = equations_of(&s);
        let e = QMatrix::from_rows(eqs);
        assert_eq!(kernel(&e), s);
    }
}
