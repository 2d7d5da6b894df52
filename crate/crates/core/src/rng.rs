//! Seeded random streams. Every randomized component derives its generator
//! from a user seed plus a fixed stream id so runs are reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dense::DenseMatrix;

pub type Rng = ChaCha8Rng;

pub(crate) const STREAM_GKL: u64 = 0x6b6c;
pub(crate) const STREAM_LANCZOS: u64 = 0x6c61;
pub(crate) const STREAM_SKETCH: u64 = 0x736b;
pub(crate) const STREAM_QR: u64 = 0x7172;
pub(crate) const STREAM_SIGMA: u64 = 0x7331;
pub(crate) const STREAM_ADJOINT: u64 = 0x6164;

pub fn seeded(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// `nrows x ncols` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(rng: &mut Rng, nrows: usize, ncols: usize) -> DenseMatrix {
    DenseMatrix::from_col_major(nrows, ncols, gaussian_vec(rng, nrows * ncols))
}
