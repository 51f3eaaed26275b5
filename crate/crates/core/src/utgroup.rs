//! Unitriangular matrices over Q and their exact logarithm/exponential.
//!
//! `UTMatrix` is upper triangular with unit diagonal; `LieElement` is strictly
//! upper triangular. Both log and exp are finite sums because `(A - I)` and
//! `X` are nilpotent, so they are computed exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exactq::{format_rat, rat_int, QMatrix, Rat, Subspace};
use crate::liealg;

/// Element of the group of n-by-n upper triangular rationals with unit diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UTMatrix {
    data: QMatrix,
}

/// Strictly upper triangular rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieElement {
    data: QMatrix,
}

impl UTMatrix {
    /// Validates the unitriangular shape, reporting the first offending entry.
    pub fn new(data: QMatrix) -> Result<Self, Error> {
        if data.rows() != data.cols() {
            return Err(Error::BadInstance(format!(
                "matrix is {}x{}, expected square",
                data.rows(),
                data.cols()
            )));
        }
        let n = data.rows();
        for i in 0..n {
            for j in 0..=i {
                let e = &data[(i, j)];
                let ok = if i == j { e.is_one() } else { e.is_zero() };
                if !ok {
                    return Err(Error::NotUnitriangular {
                        row: i + 1,
                        col: j + 1,
                        value: format_rat(e),
                        expected: if i == j { "1".into() } else { "0".into() },
                    });
                }
            }
        }
        Ok(UTMatrix { data })
    }

    pub fn identity(n: usize) -> Self {
        UTMatrix { data: QMatrix::identity(n) }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(QMatrix::from_i64(rows)).expect("not unitriangular")
    }

    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.data == QMatrix::identity(self.dim())
    }

    pub fn mul(&self, other: &UTMatrix) -> UTMatrix {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        UTMatrix { data: self.data.mul(&other.data) }
    }

    /// Power by repeated squaring; `pow(a, 0)` is the identity.
    pub fn pow(&self, e: u64) -> UTMatrix {
        let mut acc = UTMatrix::identity(self.dim());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact inverse via back substitution on the unitriangular system.
    pub fn inv(&self) -> UTMatrix {
        let n = self.dim();
        let mut out = QMatrix::identity(n);
        // Solve self * out = I column by column, from the diagonal upward.
        for col in 0..n {
            for i in (0..n).rev() {
                let mut s = if i == col { Rat::one() } else { Rat::zero() };
                for l in i + 1..n {
                    s = &s - &(&self.data[(i, l)] * &out[(l, col)]);
                }
                out[(i, col)] = s;
            }
        }
        UTMatrix { data: out }
    }
}

impl LieElement {
    pub fn new(data: QMatrix) -> Result<Self, Error> {
        if data.rows() != data.cols() {
            return Err(Error::BadInstance(format!(
                "matrix is {}x{}, expected square",
                data.rows(),
                data.cols()
            )));
        }
        let n = data.rows();
        for i in 0..n {
            for j in 0..=i {
                if !data[(i, j)].is_zero() {
                    return Err(Error::NotUnitriangular {
                        row: i + 1,
                        col: j + 1,
                        value: format_rat(&data[(i, j)]),
                        expected: "0".into(),
                    });
                }
            }
        }
        Ok(LieElement { data })
    }

    pub fn zero(n: usize) -> Self {
        LieElement { data: QMatrix::zeros(n, n) }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(QMatrix::from_i64(rows)).expect("not strictly upper triangular")
    }

    pub fn dim(&self) -> usize {
        self.data.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_zero()
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        LieElement { data: self.data.add(&other.data) }
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        LieElement { data: self.data.sub(&other.data) }
    }

    pub fn scale(&self, c: &Rat) -> LieElement {
        LieElement { data: self.data.scale(c) }
    }

    pub fn scale_int(&self, c: i64) -> LieElement {
        self.scale(&rat_int(c))
    }

    pub fn flatten(&self) -> Vec<Rat> {
        self.data.flatten()
    }
}

/// Exact matrix logarithm: the alternating series in `A - I`, which
/// terminates because `A - I` is nilpotent. `logm(I) = 0`.
pub fn logm(a: &UTMatrix) -> LieElement {
    let n = a.dim();
    let x = a.matrix().sub(&QMatrix::identity(n));
    let mut acc = QMatrix::zeros(n, n);
    let mut p = QMatrix::identity(n);
    for k in 1..n {
        p = p.mul(&x);
        if p.is_zero() {
            break;
        }
        let c = Rat::new(BigInt::from(if k % 2 == 1 { 1 } else { -1 }), BigInt::from(k));
        acc = acc.add(&p.scale(&c));
    }
    LieElement { data: acc }
}

/// Exact matrix exponential: the finite series in the nilpotent `X`.
/// `expm(0) = I`.
pub fn expm(x: &LieElement) -> UTMatrix {
    let n = x.dim();
    let mut acc = QMatrix::identity(n);
    let mut p = QMatrix::identity(n);
    let mut fact = BigInt::one();
    for k in 1..n {
        p = p.mul(x.matrix());
        if p.is_zero() {
            break;
        }
        fact *= BigInt::from(k);
        acc = acc.add(&p.scale(&Rat::new(BigInt::one(), fact.clone())));
    }
    UTMatrix { data: acc }
}

/// Least d >= 1 such that the span of all (d+1)-fold left bracketings of the
/// generator logs is zero. Commuting (in particular single or trivial)
/// generator sets report class 1. Always at most n-1.
pub fn nilpotency_class(gens: &[UTMatrix]) -> usize {
    assert!(!gens.is_empty(), "empty generator list");
    let n = gens[0].dim();
    assert!(gens.iter().all(|g| g.dim() == n), "dimension mismatch");
    let logs: Vec<LieElement> = gens.iter().map(logm).collect();
    let chain = liealg::bracket_span_chain(&logs, n.max(2) - 1);
    // chain[j] spans the (j+1)-fold bracketings; find the least d with
    // chain[d] empty, i.e. all (d+1)-fold brackets vanish.
    for (j, sp) in chain.iter().enumerate().skip(1) {
        if sp.is_empty() {
            return j; // d = j since chain[j] holds the (j+1)-fold span
        }
    }
    n.max(2) - 1
}

/// Parses the JSON wire form of a generator list:
/// `{"dimension": n, "matrices": [[["p/q", ...], ...], ...]}`.
pub fn parse_instance(json: &str) -> Result<(usize, Vec<UTMatrix>), Error> {
    #[derive(serde::Deserialize)]
    struct Raw {
        dimension: usize,
        matrices: Vec<Vec<Vec<String>>>,
        #[serde(default)]
        #[allow(dead_code)]
        name: Option<String>,
    }
    let raw: Raw = serde_json::from_str(json)?;
    if raw.matrices.is_empty() {
        return Err(Error::BadInstance("no matrices given".into()));
    }
    let n = raw.dimension;
    let mut out = Vec::with_capacity(raw.matrices.len());
    for (idx, grid) in raw.matrices.iter().enumerate() {
        if grid.len() != n || grid.iter().any(|r| r.len() != n) {
            return Err(Error::BadInstance(format!(
                "matrix {} is not {n}x{n}",
                idx + 1
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for r in grid {
            let mut row = Vec::with_capacity(n);
            for s in r {
                row.push(crate::exactq::parse_rat(s)?);
            }
            rows.push(row);
        }
        let m = UTMatrix::new(QMatrix::from_rows(rows)).map_err(|e| match e {
            Error::NotUnitriangular { row, col, value, expected } => Error::BadInstance(format!(
                "matrix {}: entry ({row},{col}) is {value}, expected {expected}",
                idx + 1
            )),
            other => other,
        })?;
        out.push(m);
    }
    Ok((n, out))
}

/// Serializes matrices to the JSON wire form accepted by [`parse_instance`].
pub fn instance_to_json(n: usize, gens: &[UTMatrix], name: Option<&str>) -> String {
    let grids: Vec<Vec<Vec<String>>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| (0..n).map(|j| format_rat(&g.matrix()[(i, j)])).collect())
                .collect()
        })
        .collect();
    let mut obj = serde_json::json!({ "dimension": n, "matrices": grids });
    if let Some(name) = name {
        obj["name"] = serde_json::json!(name);
    }
    serde_json::to_string_pretty(&obj).expect("json")
}

/// Flattened span of a list of Lie elements, as a subspace of Q^(n*n).
pub fn span_of(elems: &[LieElement], n: usize) -> Subspace {
    Subspace::span(elems.iter().map(LieElement::flatten).collect(), n * n)
}
