//! Seeded random streams. Every stream is derived from one 64-bit base seed
//! plus a label and indices, so no global generator state exists.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type Rng = Xoshiro256PlusPlus;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `base`, a stream label and a list of indices.
pub fn derive_seed(base: u64, label: &str, indices: &[u64]) -> u64 {
    let mut h = splitmix64(base);
    for b in label.bytes() {
        h = splitmix64(h ^ u64::from(b));
    }
    for &i in indices {
        h = splitmix64(h ^ i.wrapping_mul(0x100_0000_01B3));
    }
    h
}

pub fn stream(base: u64, label: &str, indices: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(base, label, indices))
}
