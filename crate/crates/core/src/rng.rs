//! Seeded randomness. Every randomized routine takes an explicit seed and is a
//! deterministic function of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Field, Mat};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent per-index seed (splitmix64 finaliser), used for parallel trials.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn random_mat<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Mat<F> {
    Mat::from_fn(field.clone(), rows, cols, |_, _| field.sample(rng))
}

/// Uniform entries with rejection until the determinant is nonzero.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Mat<F> {
    loop {
        let m = random_mat(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random `rows x cols` matrix of exactly the given rank, as a product of
/// random full-rank factors.
pub fn random_of_rank<F: Field, R: Rng + ?Sized>(
    field: &F,
    rows: usize,
    cols: usize,
    rank: usize,
    rng: &mut R,
) -> Mat<F> {
    assert!(rank <= rows.min(cols), "rank {rank} too large for {rows}x{cols}");
    loop {
        let left = random_mat(field, rows, rank, rng);
        let right = random_mat(field, rank, cols, rng);
        let m = &left * &right;
        if m.rank() == rank {
            return m;
        }
    }
}
