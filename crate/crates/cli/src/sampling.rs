//! Seeded random rules and eventually periodic words for the reproduction
//! suite. Every experiment draws from its own ChaCha stream so results do not
//! depend on which experiments ran before.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dillscope_core::dillmap::LocalRule;
use dillscope_core::{Alphabet, DillMap, InfiniteWordSpec, Letter, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn word(rng: &mut impl Rng, k: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| rng.gen_range(0..k) as Letter).collect())
}

/// `t·p^∞` with `|t| <= max_transient` and `1 <= |p| <= max_period`.
pub fn periodic(rng: &mut impl Rng, k: usize, max_transient: usize, max_period: usize) -> InfiniteWordSpec {
    let t = rng.gen_range(0..=max_transient);
    let p = rng.gen_range(1..=max_period);
    InfiniteWordSpec::periodic(word(rng, k, t), word(rng, k, p)).expect("nonempty period")
}

/// A rule on `k` letters with diameter `s` and image lengths in
/// `1..=max_image`.
pub fn rule(rng: &mut impl Rng, name: &str, k: usize, s: usize, max_image: usize) -> DillMap {
    let alphabet = Alphabet::new(k).expect("k >= 1");
    let table = (0..k.pow(s as u32))
        .map(|_| {
            let len = rng.gen_range(1..=max_image);
            word(rng, k, len)
        })
        .collect();
    DillMap::new(name, LocalRule::new(alphabet, s, table).expect("valid table"))
}
