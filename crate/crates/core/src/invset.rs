//! The invertible-subset decision procedure: which generators have an inverse
//! inside the generated semigroup, and the Identity/Group Problems on top.
//!
//! The main loop alternately builds the linear condition "the weighted log
//! sum lies in the filtration space of the current index set" and shrinks the
//! index set to the support of its nonnegative solutions, until stable.

use num_traits::Zero;
use std::collections::BTreeSet;

use crate::cones::{self, HomogeneousSystem, SupportSet};
use crate::error::Error;
use crate::exactq::{equations_of, Rat, Subspace};
use crate::liealg::filtration_space;
use crate::utgroup::{logm, nilpotency_class, LieElement, UTMatrix};

/// Default upper bound on the nilpotency class the procedure will accept
/// without an explicit opt-in.
pub const DEFAULT_MAX_CLASS: usize = 10;

/// The generator alphabet with cached logarithms.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    n: usize,
    gens: Vec<UTMatrix>,
    logs: Vec<LieElement>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<UTMatrix>) -> Result<Self, Error> {
        if gens.is_empty() {
            return Err(Error::BadInstance("no generators given".into()));
        }
        let n = gens[0].dim();
        if gens.iter().any(|g| g.dim() != n) {
            return Err(Error::BadInstance("generators have mixed dimensions".into()));
        }
        let logs = gens.iter().map(logm).collect();
        Ok(GeneratorSet { n, gens, logs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[UTMatrix] {
        &self.gens
    }

    pub fn logs(&self) -> &[LieElement] {
        &self.logs
    }
}

/// Options for the decision procedure. `max_class` above 10 requires the
/// conjecture opt-in and makes correctness conditional on it.
#[derive(Clone, Copy, Debug)]
pub struct InvSetOptions {
    pub max_class: usize,
    pub assume_conjecture: bool,
}

impl Default for InvSetOptions {
    fn default() -> Self {
        InvSetOptions { max_class: DEFAULT_MAX_CLASS, assume_conjecture: false }
    }
}

/// Result of the invertible-subset computation.
#[derive(Clone, Debug)]
pub struct InvSetResult {
    /// 1-based indices of generators invertible inside the semigroup.
    pub invertible: SupportSet,
    /// Number of main-loop executions, including the final stable pass.
    pub iterations: usize,
    /// Measured class bound of the generator logs (least d with vanishing
    /// (d+1)-fold bracket span).
    pub class_bound: usize,
    /// Whether the run relied on the conjecture opt-in (class bound > 10).
    pub assumed_conjecture: bool,
    /// The index sets after each loop execution, strictly decreasing until
    /// the final repeat.
    pub support_chain: Vec<SupportSet>,
}

fn log_sum_map(g: &GeneratorSet) -> crate::exactq::QMatrix {
    // columns: flattened generator logs; the map l |-> sum l_i log A_i
    let n2 = g.dim() * g.dim();
    let mut m = crate::exactq::QMatrix::zeros(n2, g.len());
    for (i, log) in g.logs().iter().enumerate() {
        for (t, v) in log.flatten().into_iter().enumerate() {
            m[(t, i)] = v;
        }
    }
    m
}

/// The homogeneous system cutting out `{l | sum l_i log A_i in L>=2(logs of S)}`.
pub fn membership_system(g: &GeneratorSet, s: &SupportSet, class_bound: usize) -> HomogeneousSystem {
    let n = g.dim();
    let sub_logs: Vec<LieElement> = s.iter().map(|&i| g.logs()[i - 1].clone()).collect();
    let target: Subspace = if sub_logs.is_empty() {
        Subspace::zero(n * n)
    } else {
        filtration_space(&sub_logs, 2, class_bound)
    };
    let map = log_sum_map(g);
    // rows: annihilator of the target composed with the map
    let eqs = equations_of(&target);
    let mut rows = Vec::with_capacity(eqs.len());
    for e in eqs {
        let mut row = vec![Rat::zero(); g.len()];
        for (i, cell) in row.iter_mut().enumerate() {
            let mut acc = Rat::zero();
            for (t, ev) in e.iter().enumerate() {
                if !ev.is_zero() {
                    acc = &acc + &(ev * &map[(t, i)]);
                }
            }
            *cell = acc;
        }
        rows.push(row);
    }
    HomogeneousSystem::new(g.len(), rows)
}

/// Computes the invertible subset. Errors if the measured class bound
/// exceeds `opts.max_class`, or exceeds 10 without the conjecture opt-in.
pub fn invertible_subset(g: &GeneratorSet, opts: InvSetOptions) -> Result<InvSetResult, Error> {
    let class_bound = nilpotency_class(g.gens());
    if class_bound > opts.max_class {
        return Err(Error::ClassTooHigh { class: class_bound, max: opts.max_class });
    }
    if class_bound > DEFAULT_MAX_CLASS && !opts.assume_conjecture {
        return Err(Error::ConjectureRequired(class_bound));
    }

    let mut s: SupportSet = (1..=g.len()).collect();
    let mut iterations = 0;
    let mut chain = Vec::new();
    loop {
        iterations += 1;
        let system = membership_system(g, &s, class_bound);
        let supp = cones::support(&system);
        chain.push(supp.clone());
        if supp == s {
            return Ok(InvSetResult {
                invertible: s,
                iterations,
                class_bound,
                assumed_conjecture: class_bound > DEFAULT_MAX_CLASS,
                support_chain: chain,
            });
        }
        debug_assert!(supp.is_subset(&s), "support escaped the current index set");
        s = supp;
    }
}

/// Does the generated semigroup contain the identity matrix?
pub fn identity_problem(g: &GeneratorSet, opts: InvSetOptions) -> Result<bool, Error> {
    Ok(!invertible_subset(g, opts)?.invertible.is_empty())
}

/// Is the generated semigroup a group?
pub fn group_problem(g: &GeneratorSet, opts: InvSetOptions) -> Result<bool, Error> {
    let res = invertible_subset(g, opts)?;
    Ok(res.invertible.len() == g.len())
}

/// Breadth-first search for a nonempty word evaluating to the identity, up to
/// `max_len` letters. Returns 1-based generator indices. Independent of the
/// decision procedure; intended as a small-instance oracle.
pub fn brute_force_identity_oracle(g: &GeneratorSet, max_len: usize) -> Option<Vec<usize>> {
    assert!(max_len <= 12, "oracle capped at word length 12");
    let identity = UTMatrix::identity(g.dim());
    // frontier of (matrix, word); dedupe matrices per level to curb growth
    let mut frontier: Vec<(UTMatrix, Vec<usize>)> = vec![(identity.clone(), Vec::new())];
    let mut seen: std::collections::HashSet<UTMatrix> = std::collections::HashSet::new();
    seen.insert(identity.clone());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (m, word) in &frontier {
            for (i, gen) in g.gens().iter().enumerate() {
                let prod = m.mul(gen);
                let mut w = word.clone();
                w.push(i + 1);
                if prod.is_identity() {
                    return Some(w);
                }
                if seen.insert(prod.clone()) {
                    next.push((prod, w));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

/// Conjugates every generator by `u`; the invertible subset is invariant
/// under this operation.
pub fn conjugate_set(g: &GeneratorSet, u: &UTMatrix) -> Result<GeneratorSet, Error> {
    let ui = u.inv();
    GeneratorSet::new(g.gens().iter().map(|m| u.mul(m).mul(&ui)).collect())
}

/// Reorders generators by a permutation given as 1-based images.
pub fn permute_set(g: &GeneratorSet, images: &[usize]) -> Result<GeneratorSet, Error> {
    let mut gens = vec![None; g.len()];
    for (i, &img) in images.iter().enumerate() {
        gens[img - 1] = Some(g.gens()[i].clone());
    }
    GeneratorSet::new(gens.into_iter().map(Option::unwrap).collect())
}

/// Maps a set of indices through the same permutation (for equivariance tests).
pub fn permute_indices(s: &SupportSet, images: &[usize]) -> SupportSet {
    s.iter().map(|&i| images[i - 1]).collect::<BTreeSet<_>>()
}
