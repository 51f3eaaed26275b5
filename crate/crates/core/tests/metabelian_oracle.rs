//! Independent oracle for the rewriting pipeline.
//!
//! Model: L = Q[t_1..t_q] x Q^q with bracket
//! `[(p, v), (p', v')] = (D_v p' - D_{v'} p, 0)`, where `D_v` is the
//! directional derivative. The double commutator of this algebra vanishes
//! identically, so working modulo the span of long bracketings alone realizes
//! the quotient in which the gamma coefficients live.
//!
//! The fully symmetrized H_5 sums are evaluated here from the raw
//! descent-weighted expansion (re-derived in this file, independent of the
//! library's own evaluator) and compared against the library's coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use unitri::exactq::Rat;
use unitri::partitions::admissible_pairs;
use unitri::rewrite::gamma_of_tuple_unnormalized;

const Q: usize = 5; // polynomial variables / free generators
const K: usize = 5; // which series term
const DEG: u8 = 6; // polynomial degree cap

type Mono = [u8; Q];

#[derive(Clone, Default)]
struct Poly(HashMap<Mono, Rat>);

impl Poly {
    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m).or_insert_with(Rat::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    fn add_scaled(&mut self, other: &Poly, c: &Rat) {
        for (m, v) in &other.0 {
            self.add_term(*m, v * c);
        }
    }

    fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::default();
        for (m, v) in &self.0 {
            if m[var] > 0 {
                let mut m2 = *m;
                m2[var] -= 1;
                out.add_term(m2, v * Rat::from_integer(BigInt::from(m[var])));
            }
        }
        out
    }
}

#[derive(Clone)]
struct El {
    p: Poly,
    v: [Rat; Q],
}

impl El {
    fn zero() -> Self {
        El { p: Poly::default(), v: std::array::from_fn(|_| Rat::zero()) }
    }

    fn add_scaled(&mut self, other: &El, c: &Rat) {
        self.p.add_scaled(&other.p, c);
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a = &*a + &(b * c);
        }
    }
}

fn brk(x: &El, y: &El) -> El {
    let mut p = Poly::default();
    for (i, vi) in x.v.iter().enumerate() {
        if !vi.is_zero() {
            p.add_scaled(&y.p.diff(i), vi);
        }
    }
    for (i, vi) in y.v.iter().enumerate() {
        if !vi.is_zero() {
            let neg = -vi.clone();
            p.add_scaled(&x.p.diff(i), &neg);
        }
    }
    El { p, v: std::array::from_fn(|_| Rat::zero()) }
}

fn monomials() -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = [0u8; Q];
    fn rec(out: &mut Vec<Mono>, cur: &mut Mono, pos: usize, left: u8) {
        if pos == Q {
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    rec(&mut out, &mut cur, 0, DEG);
    out
}

struct Flattener {
    index: HashMap<Mono, usize>,
    len: usize,
}

impl Flattener {
    fn new() -> Self {
        let mons = monomials();
        let len = mons.len() + Q;
        let index = mons.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        Flattener { index, len }
    }

    fn flat(&self, x: &El) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.len];
        for (m, v) in &x.p.0 {
            out[self.index[m]] = v.clone();
        }
        for (i, v) in x.v.iter().enumerate() {
            out[self.len - Q + i] = v.clone();
        }
        out
    }
}

/// Deterministic pseudo-random generators: C_1..C_5 carry random polynomials
/// of degree up to DEG plus the i-th direction; C_6 makes the sum zero, which
/// realizes the membership hypothesis in its strongest form.
fn build_generators(seed: u64) -> Vec<El> {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let mons = monomials();
    let mut gens = Vec::new();
    for i in 0..Q {
        let mut p = Poly::default();
        for m in &mons {
            let deg: u8 = m.iter().sum();
            if deg >= 1 && next() % 3 == 0 {
                p.add_term(*m, Rat::from_integer(BigInt::from(next() % 7 - 3)));
            }
        }
        let mut v: [Rat; Q] = std::array::from_fn(|_| Rat::zero());
        v[i] = Rat::one();
        gens.push(El { p, v });
    }
    let mut last = El::zero();
    for g in &gens {
        last.add_scaled(g, &(-Rat::one()));
    }
    gens.push(last);
    gens
}

struct Reducer {
    rows: Vec<(Vec<Rat>, usize)>,
}

impl Reducer {
    fn new() -> Self {
        Reducer { rows: Vec::new() }
    }

    fn reduce(&self, vec: &[Rat]) -> Vec<Rat> {
        let mut v = vec.to_vec();
        for (row, pc) in &self.rows {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        v
    }

    fn insert(&mut self, vec: &[Rat]) -> bool {
        let v = self.reduce(vec);
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            let pivot = v[pc].clone();
            let row: Vec<Rat> = v.iter().map(|x| x / &pivot).collect();
            self.rows.push((row, pc));
            self.rows.sort_by_key(|(_, c)| *c);
            true
        } else {
            false
        }
    }
}

/// Span of all bracketings of length at least `kmin` of the generators.
fn long_bracket_span(gens: &[El], kmin: usize, fl: &Flattener) -> Reducer {
    let mut chain: Vec<Vec<El>> = vec![gens.to_vec()];
    // depth-d brackets differentiate d-1 times; past DEG+1 everything dies
    for _ in 2..=(DEG as usize + 2) {
        let mut next = Vec::new();
        let mut sp = Reducer::new();
        for x in chain.last().unwrap() {
            for g in gens {
                let b = brk(x, g);
                if sp.insert(&fl.flat(&b)) {
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
    let mut out = Reducer::new();
    for level in chain.iter().skip(kmin - 1) {
        for x in level {
            out.insert(&fl.flat(x));
        }
    }
    out
}

fn next_perm(a: &mut [u8]) -> bool {
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

fn binom(n: usize, r: usize) -> i64 {
    let mut acc = 1i64;
    for i in 0..r {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// The fully symmetrized K-term sum over all relabelings in S_{K+1} of the
/// tuple `j`, evaluated in the model from the raw descent-weighted expansion
/// over compositions. Independent of the library evaluator.
fn symmetrized_term(j: &[usize], gens: &[El]) -> El {
    let m = j.len();
    // coefficient of each length-K value pattern
    let mut cv: HashMap<Vec<u8>, Rat> = HashMap::new();
    let mut comp = vec![0usize; m];
    fn compositions(pos: usize, left: usize, comp: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == comp.len() {
            comp[pos] = left;
            out.push(comp.clone());
            return;
        }
        for v in 0..=left {
            comp[pos] = v;
            compositions(pos + 1, left - v, comp, out);
        }
    }
    let mut comps = Vec::new();
    compositions(0, K, &mut comp, &mut comps);
    let fact: Vec<i64> = {
        let mut f = vec![1i64; 8];
        for i in 1..8 {
            f[i] = f[i - 1] * i as i64;
        }
        f
    };
    for comp in &comps {
        let mut denom = 1i64;
        let mut iota: Vec<u8> = Vec::with_capacity(K);
        for (r, &c) in comp.iter().enumerate() {
            denom *= fact[c];
            for _ in 0..c {
                iota.push(j[r] as u8 - 1);
            }
        }
        let base = Rat::new(BigInt::one(), BigInt::from(denom));
        let mut tau: Vec<u8> = (0..K as u8).collect();
        loop {
            let d = tau.windows(2).filter(|w| w[0] > w[1]).count();
            let w = Rat::new(
                BigInt::from(if d % 2 == 0 { 1i64 } else { -1 }),
                BigInt::from((K * K) as i64 * binom(K - 1, d)),
            );
            let pattern: Vec<u8> = tau.iter().map(|&l| iota[l as usize]).collect();
            let e = cv.entry(pattern).or_insert_with(Rat::zero);
            *e = &*e + &(&base * &w);
            if !next_perm(&mut tau) {
                break;
            }
        }
    }
    // aggregate over all relabelings sigma in S_{K+1}
    let mut cu: HashMap<Vec<u8>, Rat> = HashMap::new();
    let mut sigma: Vec<u8> = (0..(K + 1) as u8).collect();
    loop {
        for (pattern, c) in &cv {
            if c.is_zero() {
                continue;
            }
            let relabeled: Vec<u8> = pattern.iter().map(|&x| sigma[x as usize]).collect();
            let e = cu.entry(relabeled).or_insert_with(Rat::zero);
            *e = &*e + c;
        }
        if !next_perm(&mut sigma) {
            break;
        }
    }
    // evaluate
    let mut acc = El::zero();
    for (pattern, c) in &cu {
        if c.is_zero() {
            continue;
        }
        let mut b = gens[pattern[0] as usize].clone();
        for &x in &pattern[1..] {
            b = brk(&b, &gens[x as usize]);
        }
        acc.add_scaled(&b, c);
    }
    acc
}

/// The canonical pair sum for ((3,2),2): all injective (i, j) patterns
/// `[[[[C_i, C_j], C_j], C_i], C_i]`.
fn pair_sum(gens: &[El]) -> El {
    let mut acc = El::zero();
    for i in 0..=K {
        for j in 0..=K {
            if i == j {
                continue;
            }
            let b0 = brk(&gens[i], &gens[j]);
            let b1 = brk(&b0, &gens[j]);
            let b2 = brk(&b1, &gens[i]);
            let b3 = brk(&b2, &gens[i]);
            acc.add_scaled(&b3, &Rat::one());
        }
    }
    acc
}

#[test]
fn pipeline_matches_model_evaluation_at_k5() {
    let fl = Flattener::new();
    let gens = build_generators(0xB0CA);
    let quotient = long_bracket_span(&gens, K + 1, &fl);

    let mhat = fl.flat(&pair_sum(&gens));
    let mres = quotient.reduce(&mhat);
    assert!(
        mres.iter().any(|x| !x.is_zero()),
        "degenerate instance: canonical sum fell into the quotient"
    );

    let pairs = admissible_pairs(5);
    assert_eq!(pairs.len(), 1);

    for tuple in [
        (1..=6).collect::<Vec<usize>>(),
        vec![1, 2, 3, 4, 4, 5, 5, 6, 6, 1, 2, 3],
        vec![1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6],
    ] {
        let gamma = gamma_of_tuple_unnormalized(5, &tuple).unwrap();
        let coeff = gamma.get(&pairs[0]);
        let lhs = fl.flat(&symmetrized_term(&tuple, &gens));
        let lres = quotient.reduce(&lhs);
        // lres must equal coeff * mres exactly
        for (a, b) in lres.iter().zip(&mres) {
            assert_eq!(a, &(&coeff * b), "tuple {tuple:?} disagrees with the model");
        }
    }
}
