//! Deterministic random corpus of valid inputs for the test harnesses:
//! even hyperbolic Gram matrices of rank 2 and 3 with a primitive norm-8
//! polarization. Seeded so failures are reproducible from the printed seed.

use crate::lattice::{IntegerLattice, LatVec};

/// SplitMix64, the usual constants. Good enough for fixture generation and
/// dependency-free, so the corpus can never drift with an external crate.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish in [lo, hi]; the modulo bias is irrelevant here.
    pub fn in_range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// A lattice with its polarization H = e1 (norm 8 and primitive by
/// construction).
pub type CorpusEntry = (IntegerLattice<i64>, LatVec<i64>);

fn rank2(rng: &mut SplitMix64) -> Option<CorpusEntry> {
    let e = rng.in_range(-12, 12);
    let f = rng.in_range(-6, 6);
    // det = 16 f - e^2 < 0 gives signature (1,1)
    if 16 * f - e * e >= 0 {
        return None;
    }
    let l = IntegerLattice::from_ints(&[&[8, e], &[e, 2 * f]]).unwrap();
    Some((l, LatVec::from_ints(&[1, 0])))
}

fn rank3(rng: &mut SplitMix64) -> Option<CorpusEntry> {
    let a = rng.in_range(-12, 12);
    let b = rng.in_range(-12, 12);
    let d = rng.in_range(-12, 12);
    let c = rng.in_range(-6, 6);
    let e = rng.in_range(-6, 6);
    let l = IntegerLattice::from_ints(&[&[8, a, b], &[a, 2 * c, d], &[b, d, 2 * e]]).unwrap();
    if l.invariants().signature != (1, 2, 0) {
        return None;
    }
    Some((l, LatVec::from_ints(&[1, 0, 0])))
}

/// At least `count` entries, alternating rank 2 and rank 3 attempts.
pub fn corpus(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let mut want_rank3 = false;
    while out.len() < count {
        let entry = if want_rank3 {
            rank3(&mut rng)
        } else {
            rank2(&mut rng)
        };
        want_rank3 = !want_rank3;
        if let Some(e) = entry {
            out.push(e);
        }
    }
    out
}
