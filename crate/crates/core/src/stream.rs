//! Deterministic random streams.
//!
//! Every replica of every experiment owns an independent ChaCha8 stream. The
//! 256-bit ChaCha key is built from `(seed, n, tag)` and the 64-bit ChaCha
//! stream id is the replica index, so a stream is addressed by the tuple
//! `(seed, n, replica, tag)`:
//!
//! ```text
//! key[ 0.. 8] = seed      (little endian)
//! key[ 8..16] = n         (little endian)
//! key[16..24] = FNV-1a-64(tag name)
//! key[24..32] = b"cayleyfr"
//! stream id   = replica
//! ```
//!
//! ChaCha is counter based: streams with different keys or ids never overlap,
//! and new tags can be introduced without moving any existing stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Names the consumer of a stream. The tag name is hashed into the key, so
/// tags are stable across releases as long as their names are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamTag(pub &'static str);

impl StreamTag {
    pub const DYNAMICS: StreamTag = StreamTag("dynamics");
    pub const ROOTED_MARKS: StreamTag = StreamTag("rooted-marks");
    pub const MARKED_PROCESS: StreamTag = StreamTag("marked-process");
    pub const LIMIT: StreamTag = StreamTag("limit-law");
    pub const COUPLING: StreamTag = StreamTag("coupling");

    fn code(self) -> u64 {
        fnv1a(self.0.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn stream(seed: u64, n: u64, replica: u64, tag: StreamTag) -> Stream {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&n.to_le_bytes());
    key[16..24].copy_from_slice(&tag.code().to_le_bytes());
    key[24..32].copy_from_slice(b"cayleyfr");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replica);
    rng
}
