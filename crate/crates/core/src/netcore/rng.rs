use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible random stream keyed by `(master_seed, stream_id)`.
///
/// Each key maps to its own ChaCha8 stream, so bootstrap replicate `i` or
/// Monte Carlo run `j` always sees the same numbers no matter which thread
/// executes it or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self {
            master_seed,
            stream_id,
        }
    }

    /// Materialize the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
