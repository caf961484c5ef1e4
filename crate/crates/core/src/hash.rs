//! Fixed-seed mixing for table indices. Not part of any external contract.

const SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn finalize(mut h: u64) -> u64 {
    // splitmix64 output stage
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

#[inline]
pub(crate) fn hash3(a: u32, b: u32, c: u32) -> u64 {
    let lo = ((b as u64) << 32) | c as u64;
    finalize(lo ^ (a as u64 ^ SEED).wrapping_mul(SEED))
}
