//! Lie brackets, left-bracketing sets, and the descending filtration of
//! subspaces they span, including nested applications.

use crate::exactq::Subspace;
use crate::utgroup::{span_of, LieElement};

/// Commutator `[X, Y] = XY - YX`.
pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    assert_eq!(x.dim(), y.dim(), "dimension mismatch");
    let xy = x.matrix().mul(y.matrix());
    let yx = y.matrix().mul(x.matrix());
    LieElement::new(xy.sub(&yx)).expect("bracket of strictly upper is strictly upper")
}

/// All `|H|^k` left bracketings of length k, in lexicographic index order.
/// Grows exponentially in k; intended for small explicit checks.
pub fn left_bracketings(h: &[LieElement], k: usize) -> Vec<LieElement> {
    assert!(k >= 1, "k must be >= 1");
    if h.is_empty() {
        return Vec::new();
    }
    let mut level: Vec<LieElement> = h.to_vec();
    for _ in 2..=k {
        let mut next = Vec::with_capacity(level.len() * h.len());
        for x in &level {
            for g in h {
                next.push(bracket(x, g));
            }
        }
        level = next;
    }
    level
}

/// Reduced spanning sets of the spans of `[H]_j` for j = 1..=depth.
/// `chain[j-1]` spans the same space as the full j-fold enumeration but is
/// kept at basis size by incremental reduction.
pub fn bracket_span_chain(h: &[LieElement], depth: usize) -> Vec<Vec<LieElement>> {
    let n = h.first().map_or(0, LieElement::dim);
    let mut chain: Vec<Vec<LieElement>> = Vec::with_capacity(depth);
    let mut sp = Subspace::zero(n * n);
    let mut level = Vec::new();
    for x in h {
        if sp.insert(&x.flatten()) {
            level.push(x.clone());
        }
    }
    chain.push(level);
    for _ in 2..=depth {
        let mut sp_next = Subspace::zero(n * n);
        let mut next = Vec::new();
        for x in chain.last().unwrap() {
            for g in h {
                let b = bracket(x, g);
                if sp_next.insert(&b.flatten()) {
                    next.push(b);
                }
            }
        }
        let stop = next.is_empty();
        chain.push(next);
        if stop {
            break;
        }
    }
    chain
}

/// The subspace spanned by all left bracketings of length >= k, truncated at
/// `max_class` (all longer bracketings vanish once one level vanishes).
pub fn filtration_space(h: &[LieElement], k: usize, max_class: usize) -> Subspace {
    let n = h.first().map_or(0, LieElement::dim);
    assert!(k >= 1 && k <= max_class + 1, "require 1 <= k <= max_class + 1");
    if h.is_empty() {
        return Subspace::zero(n * n);
    }
    let depth = max_class.min(n.max(2) - 1);
    let chain = bracket_span_chain(h, depth);
    let mut acc = Subspace::zero(n * n);
    for level in chain.iter().skip(k - 1) {
        for x in level {
            acc.insert(&x.flatten());
        }
    }
    acc
}

/// Basis of a subspace of flattened n-by-n strictly upper matrices, as Lie
/// elements again.
pub fn subspace_to_elements(s: &Subspace, n: usize) -> Vec<LieElement> {
    s.basis()
        .iter()
        .map(|v| {
            let mut m = crate::exactq::QMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = v[i * n + j].clone();
                }
            }
            LieElement::new(m).expect("basis vector is strictly upper triangular")
        })
        .collect()
}

/// Iterates `S_0 = span(H)`, `S_{j+1} = L_{>=2}(basis of S_j)`, returning
/// `S_depth`. Any spanning set of the inner space yields the same result.
pub fn nested_filtration(h: &[LieElement], depth: usize, max_class: usize) -> Subspace {
    assert!(depth >= 1, "depth must be >= 1");
    let n = h.first().map_or(0, LieElement::dim);
    let mut current = span_of(h, n);
    for _ in 0..depth {
        let gens = subspace_to_elements(&current, n);
        current = filtration_space(&gens, 2, max_class.min(n.max(2) - 1));
        if current.is_zero() {
            break;
        }
    }
    current
}
