//! Seeded random draws for property suites. Every sampler takes an explicit
//! RNG so results depend only on the seed.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::ComplexMatrix;

pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic per-item stream derived from a base seed.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn complex(rng: &mut SampleRng, scale: f64) -> C64 {
    C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

pub fn complex_vector(rng: &mut SampleRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex(rng, 1.0)).collect()
}

/// Real `rows × cols` block with entries uniform in `[−scale, scale)`.
pub fn real_block(rng: &mut SampleRng, rows: usize, cols: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

/// Real antisymmetric `n × n` block.
pub fn antisymmetric_block(rng: &mut SampleRng, n: usize, scale: f64) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-scale..scale);
            out[i][j] = v;
            out[j][i] = -v;
        }
    }
    out
}

/// Real symmetric `n × n` block.
pub fn symmetric_block(rng: &mut SampleRng, n: usize, scale: f64) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-scale..scale);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

pub fn complex_matrix(rng: &mut SampleRng, n: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex(rng, scale))
}
