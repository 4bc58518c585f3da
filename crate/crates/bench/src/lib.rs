//! Seeded input builders shared by the benchmarks.

use maxplus::{Trop, TropMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random square matrix with the given arc density and integer weights in
/// `lo..=hi`.
pub fn random_matrix(seed: u64, n: usize, density: f64, lo: i64, hi: i64) -> TropMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                triples.push((i, j, Trop::new(rng.gen_range(lo..=hi) as f64)));
            }
        }
    }
    TropMatrix::from_triples(n, triples).expect("indices in range")
}

/// Directed ring 0 -> 1 -> ... -> n-1 -> 0 with random weights plus a few
/// random chords: irreducible by construction.
pub fn ring_with_chords(seed: u64, n: usize, chords: usize, lo: i64, hi: i64) -> TropMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::new();
    for v in 0..n {
        triples.push((v, (v + 1) % n, Trop::new(rng.gen_range(lo..=hi) as f64)));
    }
    for _ in 0..chords {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        triples.push((u, v, Trop::new(rng.gen_range(lo..=hi) as f64)));
    }
    TropMatrix::from_triples(n, triples).expect("indices in range")
}
