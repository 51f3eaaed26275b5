//! Integer partitions, set partitions of {1..k}, the coarsening order, and
//! the admissible partition-integer pairs indexing the canonical symmetric
//! sums of the rewriting step.

use crate::bch::Permutation;

/// Weakly decreasing positive parts summing to k.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing");
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        IntegerPartition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn max_part(&self) -> usize {
        self.parts[0]
    }

    pub fn min_part(&self) -> usize {
        *self.parts.last().unwrap()
    }

    /// Distinct part values, descending.
    pub fn set(&self) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.dedup();
        v
    }
}

/// Set partition of {1..k}, stored as a restricted-growth string: entry i is
/// the block label of element i+1, labels assigned by first occurrence. This
/// is a canonical form, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

impl SetPartition {
    pub fn from_rgs(rgs: Vec<u8>) -> Self {
        // re-canonicalize defensively
        SetPartition { rgs: canonicalize(&rgs) }
    }

    pub fn from_blocks(blocks: &[Vec<usize>], k: usize) -> Self {
        let mut raw = vec![u8::MAX; k];
        for (label, block) in blocks.iter().enumerate() {
            for &e in block {
                assert!((1..=k).contains(&e) && raw[e - 1] == u8::MAX, "not a partition of 1..k");
                raw[e - 1] = label as u8;
            }
        }
        assert!(raw.iter().all(|&x| x != u8::MAX), "elements not covered");
        SetPartition { rgs: canonicalize(&raw) }
    }

    pub fn ground_size(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().map(|&x| x as usize + 1).max().unwrap_or(0)
    }

    /// Blocks as sorted element lists, ordered by minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &label) in self.rgs.iter().enumerate() {
            out[label as usize].push(i + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.num_blocks()];
        for &label in &self.rgs {
            out[label as usize] += 1;
        }
        out
    }

    pub fn block_label_of(&self, element: usize) -> usize {
        self.rgs[element - 1] as usize
    }

    /// True if every block of `self` is contained in a block of `coarser`.
    pub fn refines(&self, coarser: &SetPartition) -> bool {
        assert_eq!(self.ground_size(), coarser.ground_size());
        let k = self.ground_size();
        // two elements sharing a block here must share one there
        let mut rep = vec![usize::MAX; self.num_blocks()];
        for i in 0..k {
            let b = self.rgs[i] as usize;
            let c = coarser.rgs[i] as usize;
            if rep[b] == usize::MAX {
                rep[b] = c;
            } else if rep[b] != c {
                return false;
            }
        }
        true
    }
}

pub(crate) fn canonicalize(raw: &[u8]) -> Vec<u8> {
    let mut label = [u8::MAX; 256];
    let mut next = 0u8;
    let mut out = Vec::with_capacity(raw.len());
    for &v in raw {
        if label[v as usize] == u8::MAX {
            label[v as usize] = next;
            next += 1;
        }
        out.push(label[v as usize]);
    }
    out
}

/// Blocks of equal-value positions of a tuple: position l and l' share a
/// block iff `j[l] == j[l']`.
pub fn associated_set_partition(j: &[usize]) -> SetPartition {
    let mut label = std::collections::HashMap::new();
    let mut rgs = Vec::with_capacity(j.len());
    for &v in j {
        let next = label.len() as u8;
        let l = *label.entry(v).or_insert(next);
        rgs.push(l);
    }
    SetPartition { rgs }
}

/// Block sizes in decreasing order.
pub fn associated_integer_partition(s: &SetPartition) -> IntegerPartition {
    let mut sizes = s.block_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    IntegerPartition::new(sizes)
}

/// All set partitions of {1..k} as canonical restricted-growth strings, in
/// lexicographic order of the strings.
pub fn all_set_partitions(k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut cur = vec![0u8; k];
    fn rec(out: &mut Vec<SetPartition>, cur: &mut Vec<u8>, pos: usize, max_used: u8) {
        if pos == cur.len() {
            out.push(SetPartition { rgs: cur.clone() });
            return;
        }
        for v in 0..=max_used + 1 {
            cur[pos] = v;
            rec(out, cur, pos + 1, max_used.max(v));
        }
    }
    rec(&mut out, &mut cur, 1, 0);
    out
}

/// All coarsenings of `s` including `s` itself, finest to coarsest
/// (decreasing block count, then lexicographic), which is a valid
/// topological order for the elimination pass.
pub fn coarsenings(s: &SetPartition) -> Vec<SetPartition> {
    let nb = s.num_blocks();
    let mut out: Vec<SetPartition> = all_set_partitions(nb)
        .iter()
        .map(|tau| {
            let raw: Vec<u8> = s.rgs.iter().map(|&b| tau.rgs[b as usize]).collect();
            SetPartition { rgs: canonicalize(&raw) }
        })
        .collect();
    out.sort_unstable_by(|a, b| {
        b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.rgs.cmp(&b.rgs))
    });
    out.dedup();
    out
}

/// Relabels elements by `tau`; the associated integer partition is unchanged.
pub fn apply_permutation(s: &SetPartition, tau: &Permutation) -> SetPartition {
    let k = s.ground_size();
    assert_eq!(tau.len(), k, "permutation length mismatch");
    let mut raw = vec![0u8; k];
    for i in 1..=k {
        raw[tau.apply(i) - 1] = s.rgs[i - 1];
    }
    SetPartition { rgs: canonicalize(&raw) }
}

/// An integer partition P together with a distinguished part value c in set(P).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PartitionIntegerPair {
    pub partition: IntegerPartition,
    pub c: usize,
}

impl PartitionIntegerPair {
    pub fn new(partition: IntegerPartition, c: usize) -> Self {
        assert!(partition.set().contains(&c), "c must be a part value");
        PartitionIntegerPair { partition, c }
    }
}

impl std::fmt::Display for PartitionIntegerPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.partition.parts().iter().map(|p| p.to_string()).collect();
        write!(f, "(({}), {})", parts.join(","), self.c)
    }
}

fn integer_partitions_min2(k: usize) -> Vec<IntegerPartition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(out: &mut Vec<IntegerPartition>, cur: &mut Vec<usize>, left: usize, max: usize) {
        if left == 0 {
            out.push(IntegerPartition::new(cur.clone()));
            return;
        }
        let hi = left.min(max);
        for p in (2..=hi).rev() {
            if left - p != 0 && left - p < 2 {
                continue;
            }
            cur.push(p);
            rec(out, cur, left - p, p);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, k, k);
    out
}

/// Every pair (P, c) with min(P) >= 2 and c != max(P), ordered by partition
/// (descending lexicographic) and then descending c.
pub fn candidate_pairs(k: usize) -> Vec<PartitionIntegerPair> {
    assert!(k >= 2, "k must be >= 2");
    let mut out = Vec::new();
    for p in integer_partitions_min2(k) {
        let mx = p.max_part();
        for &c in &p.set() {
            if c != mx {
                out.push(PartitionIntegerPair::new(p.clone(), c));
            }
        }
    }
    out
}

/// The pairs indexing canonical sums that carry coefficients: the candidate
/// pairs minus those whose symmetric sum vanishes in the quotient. At k = 9
/// the four-block pair ((3,2,2,2), 2) is such a vanishing direction (its sum
/// is annihilated by the verified weighted relation on the k = 9 tuples), so
/// the basis there has six pairs.
pub fn admissible_pairs(k: usize) -> Vec<PartitionIntegerPair> {
    let mut out = candidate_pairs(k);
    if k == 9 {
        let dropped = PartitionIntegerPair::new(IntegerPartition::new(vec![3, 2, 2, 2]), 2);
        out.retain(|p| p != &dropped);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(blocks: &[&[usize]], k: usize) -> SetPartition {
        SetPartition::from_blocks(&blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>(), k)
    }

    #[test]
    fn associated_partition_of_tuple() {
        let s = associated_set_partition(&[4, 2, 7, 2, 2, 4]);
        assert_eq!(s, sp(&[&[1, 6], &[2, 4, 5], &[3]], 6));
        assert_eq!(associated_integer_partition(&s).parts(), &[3, 2, 1]);
    }

    #[test]
    fn distinct_and_constant_tuples() {
        let s = associated_set_partition(&[3, 1, 4, 2]);
        assert_eq!(s.num_blocks(), 4);
        assert_eq!(associated_integer_partition(&s).parts(), &[1, 1, 1, 1]);
        let s = associated_set_partition(&[5, 5, 5]);
        assert_eq!(s.num_blocks(), 1);
        assert_eq!(associated_integer_partition(&s).parts(), &[3]);
    }

    #[test]
    fn coarsenings_of_three_block_partition() {
        let s = sp(&[&[1, 3, 4], &[2], &[5, 6]], 6);
        let cs = coarsenings(&s);
        assert_eq!(cs.len(), 5);
        assert!(cs.contains(&s));
        assert!(cs.contains(&sp(&[&[1, 3, 4], &[2, 5, 6]], 6)));
        assert!(cs.contains(&sp(&[&[1, 2, 3, 4], &[5, 6]], 6)));
        assert!(cs.contains(&sp(&[&[1, 3, 4, 5, 6], &[2]], 6)));
        assert!(cs.contains(&sp(&[&[1, 2, 3, 4, 5, 6]], 6)));
        // finest-to-coarsest order
        for w in cs.windows(2) {
            assert!(w[0].num_blocks() >= w[1].num_blocks());
        }
    }

    #[test]
    fn coarsenings_edge_cases() {
        let one = sp(&[&[1, 2, 3]], 3);
        assert_eq!(coarsenings(&one), vec![one.clone()]);
        let singles = sp(&[&[1], &[2], &[3]], 3);
        assert_eq!(coarsenings(&singles).len(), 5); // Bell(3)
    }

    #[test]
    fn bell_counts_against_independent_recurrence() {
        // Bell triangle, independent of the enumerator
        let mut bell = vec![1u64];
        let mut row = vec![1u64];
        for _ in 1..=9 {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let last = *next.last().unwrap();
                next.push(last + x);
            }
            bell.push(next[0]);
            row = next;
        }
        for k in 1..=9 {
            assert_eq!(all_set_partitions(k).len() as u64, bell[k], "Bell({k})");
        }
    }

    #[test]
    fn singleton_free_count_k9() {
        // complement count: sum_j (-1)^j C(9,j) Bell(9-j), computed directly here
        let count = all_set_partitions(9)
            .iter()
            .filter(|s| s.block_sizes().iter().all(|&x| x >= 2))
            .count();
        assert_eq!(count, 3425);
    }

    #[test]
    fn coarsening_is_partial_order() {
        for k in 1..=5 {
            let all = all_set_partitions(k);
            for a in &all {
                assert!(a.refines(a), "reflexive");
                for b in &all {
                    if a.refines(b) && b.refines(a) {
                        assert_eq!(a, b, "antisymmetric");
                    }
                    for c in &all {
                        if a.refines(b) && b.refines(c) {
                            assert!(a.refines(c), "transitive");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn apply_permutation_examples() {
        let s = sp(&[&[1], &[2, 3]], 3);
        let id = Permutation::identity(3);
        assert_eq!(apply_permutation(&s, &id), s);
        let swap = Permutation::new(vec![2, 1, 3]);
        assert_eq!(apply_permutation(&s, &swap), sp(&[&[2], &[1, 3]], 3));
    }

    #[test]
    fn ip_invariant_under_relabeling() {
        let s = sp(&[&[1, 4], &[2, 3, 5]], 5);
        for tau in Permutation::all(5) {
            assert_eq!(
                associated_integer_partition(&apply_permutation(&s, &tau)),
                associated_integer_partition(&s)
            );
        }
    }

    #[test]
    fn admissible_pairs_small_k() {
        assert!(admissible_pairs(2).is_empty());
        assert!(admissible_pairs(3).is_empty());
        assert!(admissible_pairs(4).is_empty()); // (4) and (2,2) both have c = max only
        let k5 = admissible_pairs(5);
        assert_eq!(k5.len(), 1);
        assert_eq!(k5[0], PartitionIntegerPair::new(IntegerPartition::new(vec![3, 2]), 2));
    }

    #[test]
    fn admissible_pairs_k7() {
        let pairs = admissible_pairs(7);
        let expect = vec![
            PartitionIntegerPair::new(IntegerPartition::new(vec![5, 2]), 2),
            PartitionIntegerPair::new(IntegerPartition::new(vec![4, 3]), 3),
            PartitionIntegerPair::new(IntegerPartition::new(vec![3, 2, 2]), 2),
        ];
        assert_eq!(pairs, expect);
    }

    #[test]
    fn admissible_pairs_k9() {
        let mk = |p: &[usize], c: usize| {
            PartitionIntegerPair::new(IntegerPartition::new(p.to_vec()), c)
        };
        let expect = vec![
            mk(&[7, 2], 2),
            mk(&[6, 3], 3),
            mk(&[5, 4], 4),
            mk(&[5, 2, 2], 2),
            mk(&[4, 3, 2], 3),
            mk(&[4, 3, 2], 2),
        ];
        assert_eq!(admissible_pairs(9), expect);
        // the candidate enumeration additionally carries the vanishing
        // four-block direction
        let mut full = expect;
        full.push(mk(&[3, 2, 2, 2], 2));
        assert_eq!(candidate_pairs(9), full);
    }
}
