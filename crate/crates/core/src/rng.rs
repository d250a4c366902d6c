//! Seeded substreams.
//!
//! Every Monte Carlo loop in the crate is split into fixed-size chunks and
//! chunk `k` draws from stream `k` of a ChaCha generator keyed by the user
//! seed. Results therefore do not depend on how chunks are scheduled
//! across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per substream chunk.
pub const CHUNK: usize = 1 << 14;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `n` items into `(stream_id, start, len)` chunks of size [`CHUNK`].
pub fn chunks(n: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    (0..n.div_ceil(CHUNK)).map(move |k| {
        let start = k * CHUNK;
        (k as u64, start, CHUNK.min(n - start))
    })
}

/// Mixes a purpose tag into a seed so unrelated sample sets drawn from the
/// same user seed are independent.
pub fn derive(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
