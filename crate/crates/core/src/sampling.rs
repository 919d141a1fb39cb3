//! Seeded samplers used by the property checkers and the boundary tools.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the generator seeded by `seed`.
pub(crate) fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A value whose logarithm is uniform on `[ln lo, ln hi]`.
pub(crate) fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    debug_assert!(0.0 < lo && lo <= hi);
    let (a, b) = (lo.ln(), hi.ln());
    (a + (b - a) * rng.random::<f64>()).exp()
}

pub(crate) fn log_uniform_vec<R: Rng + ?Sized>(rng: &mut R, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..k).map(|_| log_uniform(rng, lo, hi)).collect()
}

/// Log-uniform vector where, with probability one half, a random nonempty
/// subset of coordinates is forced to zero.
pub(crate) fn log_uniform_with_zeros<R: Rng + ?Sized>(rng: &mut R, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = log_uniform_vec(rng, k, lo, hi);
    if rng.random_bool(0.5) {
        let first = rng.random_range(0..k);
        v[first] = 0.0;
        for (i, x) in v.iter_mut().enumerate() {
            if i != first && rng.random_bool(0.25) {
                *x = 0.0;
            }
        }
    }
    v
}
