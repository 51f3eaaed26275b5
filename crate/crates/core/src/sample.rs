//! Deterministic sample generators for randomized verification: seeded
//! unitriangular matrices, Lie elements, and small generator sets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::exactq::{rat_int, QMatrix};
use crate::utgroup::{LieElement, UTMatrix};

pub type SampleRng = ChaCha20Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random unitriangular matrix with integer entries in [lo, hi].
pub fn random_ut(rng: &mut SampleRng, n: usize, lo: i64, hi: i64) -> UTMatrix {
    let mut m = QMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = rat_int(rng.gen_range(lo..=hi));
        }
    }
    UTMatrix::new(m).expect("constructed unitriangular")
}

/// Random strictly upper triangular matrix with integer entries in [lo, hi].
pub fn random_lie(rng: &mut SampleRng, n: usize, lo: i64, hi: i64) -> LieElement {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = rat_int(rng.gen_range(lo..=hi));
        }
    }
    LieElement::new(m).expect("constructed strictly upper")
}

/// Random list of Lie elements of a common dimension.
pub fn random_lie_list(rng: &mut SampleRng, count: usize, n: usize, lo: i64, hi: i64) -> Vec<LieElement> {
    (0..count).map(|_| random_lie(rng, n, lo, hi)).collect()
}
