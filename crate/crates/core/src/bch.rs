//! Numeric evaluation of the series terms appearing in the logarithm of a
//! product (the H_k terms), the permutation statistics driving them, and
//! executable checks of the bracket identities built on top.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::error::Error;
use crate::exactq::{Rat, Subspace};
use crate::liealg::{bracket, left_bracketings};
use crate::utgroup::LieElement;

/// Permutation of {1..k} in one-line notation: `image[i]` is the image of i+1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn new(image: Vec<u8>) -> Self {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            assert!(v >= 1 && (v as usize) <= image.len() && !seen[v as usize - 1], "not a bijection");
            seen[v as usize - 1] = true;
        }
        Permutation { image }
    }

    pub fn identity(k: usize) -> Self {
        Permutation { image: (1..=k as u8).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize
    }

    pub fn one_line(&self) -> &[u8] {
        &self.image
    }

    /// All permutations of {1..k} in lexicographic one-line order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=k as u8).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            if !next_perm(&mut cur) {
                break;
            }
        }
        out
    }
}

/// In-place lexicographic successor; false once the last permutation is reached.
pub(crate) fn next_perm(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Number of positions i with p(i) > p(i+1).
pub fn descents(p: &Permutation) -> usize {
    descents_slice(p.one_line())
}

pub(crate) fn descents_slice(a: &[u8]) -> usize {
    a.windows(2).filter(|w| w[0] > w[1]).count()
}

/// Integer table mu_k on S_k defined by the three-case recursion on where k
/// lands. Stored sparsely: mu_k has at most 2^(k-1) nonzero values.
#[derive(Debug, Clone)]
pub struct MuTable {
    k: usize,
    values: HashMap<Vec<u8>, i64>,
}

impl MuTable {
    /// Builds mu_k for 2 <= k <= 10.
    pub fn build(k: usize) -> Result<Self, Error> {
        if !(2..=10).contains(&k) {
            return Err(Error::KOutOfRange(k, "2..=10 for mu"));
        }
        let mut values: HashMap<Vec<u8>, i64> = HashMap::new();
        values.insert(vec![1, 2], 1);
        values.insert(vec![2, 1], -1);
        for j in 3..=k {
            let mut next = HashMap::new();
            for (tau, &v) in &values {
                // sigma fixes j: mu_j(sigma) = mu_{j-1}(tau)
                let mut fixed = tau.clone();
                fixed.push(j as u8);
                next.insert(fixed, v);
                // sigma(1) = j: mu_j(sigma) = -mu_{j-1}(sigma o (12...j)),
                // i.e. sigma = tau shifted right with j in front
                let mut fronted = Vec::with_capacity(j);
                fronted.push(j as u8);
                fronted.extend_from_slice(&tau[..j - 1]);
                next.insert(fronted, -v);
            }
            values = next;
        }
        Ok(MuTable { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, p: &Permutation) -> i64 {
        assert_eq!(p.len(), self.k, "permutation length mismatch");
        *self.values.get(p.one_line()).unwrap_or(&0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vec<u8>, &i64)> {
        self.values.iter()
    }
}

/// mu_k(p) for 2 <= k <= 10.
pub fn mu(k: usize, p: &Permutation) -> Result<i64, Error> {
    Ok(MuTable::build(k)?.get(p))
}

fn zero_like(xs: &[LieElement]) -> LieElement {
    LieElement::zero(xs[0].dim())
}

/// Raw descent weight `(-1)^d / (k^2 * C(k-1, d))`.
fn descent_weight(k: usize, d: usize) -> Rat {
    let sign = if d % 2 == 0 { 1 } else { -1 };
    let denom = BigInt::from(k as i64 * k as i64) * binomial(k - 1, d);
    Rat::new(BigInt::from(sign), denom)
}

pub(crate) fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from((n - i) as u64) / BigInt::from((i + 1) as u64);
    }
    acc
}

pub(crate) fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i as u64);
    }
    acc
}

/// The descent-weighted sum of left-nested brackets over all permutations of
/// the k arguments. Guarded to k <= 9 (the sum has k! terms).
pub fn dynkin_phi(k: usize, xs: &[LieElement]) -> Result<LieElement, Error> {
    if !(2..=9).contains(&k) {
        return Err(Error::KOutOfRange(k, "2..=9 for direct evaluation"));
    }
    assert_eq!(xs.len(), k, "need exactly k arguments");
    let mut acc = zero_like(xs);
    let mut perm: Vec<u8> = (1..=k as u8).collect();
    loop {
        let d = descents_slice(&perm);
        let mut b = xs[perm[0] as usize - 1].clone();
        for &p in &perm[1..] {
            b = bracket(&b, &xs[p as usize - 1]);
        }
        acc = acc.add(&b.scale(&descent_weight(k, d)));
        if !next_perm(&mut perm) {
            break;
        }
    }
    Ok(acc)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, pos: usize, left: usize) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(out, cur, pos + 1, left - v);
        }
    }
    rec(&mut out, &mut cur, 0, total);
    out
}

/// The k-th term of the logarithm-of-a-product series, evaluated exactly by
/// summing the descent-weighted expansion over all compositions of k among
/// the m arguments. Guarded: k <= 9 and C(m+k-1, k) <= 10^7.
pub fn bch_term(k: usize, c: &[LieElement]) -> Result<LieElement, Error> {
    if !(2..=9).contains(&k) {
        return Err(Error::KOutOfRange(k, "2..=9 for direct evaluation"));
    }
    let m = c.len();
    assert!(m >= 1, "need at least one argument");
    let count = binomial(m + k - 1, k);
    if count > BigInt::from(10_000_000u64) {
        return Err(Error::GuardExceeded(format!(
            "composition count C({},{}) too large",
            m + k - 1,
            k
        )));
    }
    let mut acc = zero_like(c);
    for comp in compositions(k, m) {
        let mut args = Vec::with_capacity(k);
        let mut denom = BigInt::one();
        for (r, &i) in comp.iter().enumerate() {
            denom *= factorial(i);
            for _ in 0..i {
                args.push(c[r].clone());
            }
        }
        let phi = dynkin_phi(k, &args)?;
        acc = acc.add(&phi.scale(&Rat::new(BigInt::one(), denom)));
    }
    Ok(acc)
}

/// Outcome of an exact identity check: either it held, or a report of the
/// nonzero difference that falsified it.
#[derive(Debug)]
pub enum IdentityCheck {
    Holds,
    Fails { difference: LieElement },
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityCheck::Holds)
    }

    fn from_difference(d: LieElement) -> Self {
        if d.is_zero() {
            IdentityCheck::Holds
        } else {
            IdentityCheck::Fails { difference: d }
        }
    }
}

/// Checks that the k-fold left bracket of C_1..C_k equals the mu-weighted sum
/// of H_k over permuted argument prefixes, exactly. Guard: k <= 4.
pub fn check_lieperm(k: usize, c: &[LieElement]) -> Result<IdentityCheck, Error> {
    if !(2..=4).contains(&k) {
        return Err(Error::KOutOfRange(k, "2..=4 for the permuted-prefix check"));
    }
    let m = c.len();
    assert!(m >= k, "need m >= k arguments");
    let lhs = {
        let mut b = c[0].clone();
        for x in &c[1..k] {
            b = bracket(&b, x);
        }
        b
    };
    let table = MuTable::build(k)?;
    let mut rhs = zero_like(c);
    for (one_line, &v) in table.support() {
        if v == 0 {
            continue;
        }
        let mut args: Vec<LieElement> = one_line.iter().map(|&i| c[i as usize - 1].clone()).collect();
        args.extend_from_slice(&c[k..]);
        let h = bch_term(k, &args)?;
        rhs = rhs.add(&h.scale(&Rat::from_integer(BigInt::from(v))));
    }
    Ok(IdentityCheck::from_difference(lhs.sub(&rhs)))
}

/// Checks `H_k(C_1..C_m) = -H_k(C_m..C_1)` for even k, exactly.
pub fn check_antisymmetry(k: usize, c: &[LieElement]) -> Result<IdentityCheck, Error> {
    if k % 2 != 0 {
        return Err(Error::KOutOfRange(k, "even k only"));
    }
    let fwd = bch_term(k, c)?;
    let mut rev = c.to_vec();
    rev.reverse();
    let bwd = bch_term(k, &rev)?;
    Ok(IdentityCheck::from_difference(fwd.add(&bwd)))
}

/// Checks the closed form of the fully symmetrized H_3 sum:
/// `sum_sigma H_3(C_sigma) = (m!/12) sum_i [C_i, [C_i, sum_j C_j]]`. Guard m <= 4.
pub fn check_h3_identity(c: &[LieElement]) -> Result<IdentityCheck, Error> {
    let m = c.len();
    if m > 4 {
        return Err(Error::GuardExceeded("m <= 4 for the symmetrized H_3 check".into()));
    }
    assert!(m >= 1);
    let mut lhs = zero_like(c);
    let mut perm: Vec<u8> = (1..=m as u8).collect();
    loop {
        let args: Vec<LieElement> = perm.iter().map(|&i| c[i as usize - 1].clone()).collect();
        lhs = lhs.add(&bch_term(3, &args)?);
        if !next_perm(&mut perm) {
            break;
        }
    }
    let total = c.iter().skip(1).fold(c[0].clone(), |acc, x| acc.add(x));
    let mut rhs = zero_like(c);
    for x in c {
        rhs = rhs.add(&bracket(x, &bracket(x, &total)));
    }
    let rhs = rhs.scale(&Rat::new(factorial(m), BigInt::from(12)));
    Ok(IdentityCheck::from_difference(lhs.sub(&rhs)))
}

/// H_k lies in the span of the k-fold left bracketings of its arguments.
pub fn bch_term_in_bracket_span(k: usize, c: &[LieElement]) -> Result<bool, Error> {
    let h = bch_term(k, c)?;
    let n = c[0].dim();
    let span = crate::utgroup::span_of(&left_bracketings(c, k), n);
    Ok(span.contains(&h.flatten()))
}

/// Membership helper used by identity tests: `v` modulo `s` is zero.
pub fn in_subspace(x: &LieElement, s: &Subspace) -> bool {
    s.contains(&x.flatten())
}
