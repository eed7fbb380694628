//! Seeded, chunked randomness.
//!
//! Every parallel loop splits its work into fixed-size chunks and gives each
//! chunk its own ChaCha stream derived from `(seed, stream)`. Results are
//! collected in chunk order and folded sequentially, so the output does not
//! depend on the rayon thread count or scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub type LabRng = ChaCha8Rng;

/// Default number of proposals handled by one chunk.
pub const CHUNK: u64 = 8192;

/// SplitMix64 finalizer; used to derive independent seeds from a parent seed.
pub fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a (tag, index) address.
pub fn derive(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix(splitmix(seed ^ splitmix(tag)) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

pub fn stream_rng(seed: u64, stream: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `work(rng, chunk_len)` over `total` items split into chunks of
/// `chunk` items. Chunk `i` uses stream `first_stream + i`.
pub fn par_chunks<T, F>(seed: u64, first_stream: u64, total: u64, chunk: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut LabRng, u64) -> T + Sync + Send,
{
    let chunk = chunk.max(1);
    let n_chunks = total.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let len = chunk.min(total - i * chunk);
            let mut rng = stream_rng(seed, first_stream + i);
            work(&mut rng, len)
        })
        .collect()
}

/// Streaming (count, sum, sum of squares) triple. Merging is plain addition
/// so any fold order over a fixed chunk list gives identical results.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    /// Records `k` zero observations.
    #[inline]
    pub fn push_zeros(&mut self, k: u64) {
        self.n += k;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.sum / self.n as f64
        }
    }

    /// Sample variance of the observations.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let m = self.sum / n;
        ((self.sum_sq - n * m * m) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Uniform point in the real ball of radius `radius` in `dim` dimensions,
/// written into `out`.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), dim);
    if dim == 0 {
        return;
    }
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *x = g;
            norm2 += g * g;
        }
        if norm2 > 0.0 {
            let u: f64 = rng.random();
            let r = radius * u.powf(1.0 / dim as f64) / norm2.sqrt();
            for x in out.iter_mut() {
                *x *= r;
            }
            return;
        }
    }
}

/// Uniform unit vector in `dim` real dimensions.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, out: &mut [f64]) {
    debug_assert_eq!(out.len(), dim);
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *x = g;
            norm2 += g * g;
        }
        if norm2 > 1e-300 {
            let inv = 1.0 / norm2.sqrt();
            for x in out.iter_mut() {
                *x *= inv;
            }
            return;
        }
    }
}

/// Volume of the real `dim`-ball of radius `r`.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    unit_ball_volume(dim) * r.powi(dim as i32)
}

pub fn unit_ball_volume(dim: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = 2π/d · V_{d-2}
    let mut v = [1.0, 2.0];
    if dim < 2 {
        return v[dim];
    }
    let mut out = 0.0;
    for d in 2..=dim {
        out = 2.0 * std::f64::consts::PI / d as f64 * v[d % 2];
        v[d % 2] = out;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes_match_closed_forms() {
        use std::f64::consts::PI;
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(6) - PI.powi(3) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn chunk_results_do_not_depend_on_thread_count() {
        let run = || {
            par_chunks(7, 0, 50_000, 1000, |rng, len| {
                let mut m = Moments::default();
                for _ in 0..len {
                    m.push(rng.random::<f64>());
                }
                m
            })
        };
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
    }

    #[test]
    fn moments_merge_is_additive() {
        let mut a = Moments::default();
        let mut b = Moments::default();
        let mut all = Moments::default();
        for i in 0..10 {
            let x = i as f64 * 0.5;
            if i % 2 == 0 { a.push(x) } else { b.push(x) }
            all.push(x);
        }
        a.merge(&b);
        assert_eq!(a, all);
        assert!((all.mean() - 2.25).abs() < 1e-12);
    }
}
