use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::math::sqrt;

/// Identifies one reproducible random sequence.
///
/// The generator is ChaCha8 keyed by `seed` (expanded with `seed_from_u64`)
/// running on stream `stream_id`. ChaCha output is defined bit-for-bit, and
/// normal variates use the ziggurat tables from `rand_distr`, so a given
/// `(seed, stream_id)` yields the same draws on every platform and under
/// any thread layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A fresh sampler positioned at the start of this stream.
    pub fn sampler(&self) -> NormalSampler {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        NormalSampler { rng }
    }
}

/// Sequential standard-normal draws from one [`RngStream`].
#[derive(Debug, Clone)]
pub struct NormalSampler {
    rng: ChaCha8Rng,
}

impl NormalSampler {
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_normal();
        }
    }

    /// `n × p` matrix with i.i.d. rows, unit variances and common pairwise
    /// correlation `rho_x`.
    ///
    /// Each entry is `√ρ·Z₀ + √(1-ρ)·Zⱼ` with `Z₀` shared across the row.
    /// When `rho_x == 0` the shared factor is not drawn.
    pub(crate) fn equicorrelated(&mut self, n: usize, p: usize, rho_x: f64) -> Matrix {
        let mut m = Matrix::zeros(n, p);
        let shared_scale = sqrt(rho_x);
        let own_scale = sqrt(1.0 - rho_x);
        for i in 0..n {
            let shared = if rho_x > 0.0 {
                shared_scale * self.next_normal()
            } else {
                0.0
            };
            for j in 0..p {
                m[(i, j)] = shared + own_scale * self.next_normal();
            }
        }
        m
    }
}

/// `count` i.i.d. standard normal draws from the start of `stream`.
pub fn sample_standard_normal(stream: RngStream, count: usize) -> Vec<f64> {
    let mut sampler = stream.sampler();
    let mut out = alloc::vec![0.0; count];
    sampler.fill_normal(&mut out);
    out
}

/// Equicorrelated multivariate normal sample, returned as rows.
pub fn sample_equicorrelated_normal(
    stream: RngStream,
    n: usize,
    p: usize,
    rho_x: f64,
) -> Result<Vec<Vec<f64>>> {
    check_rho_x(rho_x)?;
    if p == 0 {
        return Err(domain("number of predictors", 0.0));
    }
    let m = stream.sampler().equicorrelated(n, p, rho_x);
    Ok((0..n).map(|i| m.row(i).to_vec()).collect())
}

pub(crate) fn check_rho_x(rho_x: f64) -> Result<()> {
    if (0.0..1.0).contains(&rho_x) {
        Ok(())
    } else {
        Err(domain("predictor correlation rho_x", rho_x))
    }
}
