//! Reproducible standard-normal streams.
//!
//! Each draw index owns its own ChaCha stream keyed by `(seed, domain, draw)`,
//! so draws can be produced in any order and on any number of threads while
//! yielding identical values. Values within a draw are consumed sequentially,
//! so asking for more modes only appends.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Separates the independent uses of a single user seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    KlModes = 0x6b6c_6d6f_6465_7300,
    Series = 0x7365_7269_6573_0000,
    Generic = 0x6765_6e65_7269_6300,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalStream {
    seed: u64,
    domain: Domain,
}

impl NormalStream {
    pub fn new(seed: u64, domain: Domain) -> Self {
        Self { seed, domain }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng(&self, draw: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&(self.domain as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(draw);
        rng
    }

    /// First `len` normals of stream `draw`.
    pub fn fill(&self, draw: u64, out: &mut [f64]) {
        let mut rng = self.rng(draw);
        for v in out.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
    }

    pub fn draw(&self, draw: u64, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        self.fill(draw, &mut v);
        v
    }

    /// Evaluates `f` on every draw in parallel; output order follows the draw index.
    pub fn par_map<R, F>(&self, draws: usize, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize, &[f64]) -> R + Sync,
    {
        (0..draws)
            .into_par_iter()
            .map_init(
                || vec![0.0; len],
                |buf, p| {
                    self.fill(p as u64, buf);
                    f(p, buf)
                },
            )
            .collect()
    }
}

/// Mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
