//! Hamming and Levenshtein distances on finite words.
//!
//! The Levenshtein distance here is the ½-weighted deletion distance:
//! `d_L(u, v) = (|u| + |v|)/2 − lcs(u, v)`, so values are half-integers and
//! are carried exactly as [`HalfInt`].

mod kernel;

use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Exact nonnegative half-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfInt {
    doubled: u64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };

    pub fn from_doubled(doubled: u64) -> Self {
        Self { doubled }
    }

    pub fn from_int(n: u64) -> Self {
        Self { doubled: 2 * n }
    }

    pub fn doubled(self) -> u64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled.is_multiple_of(2)
    }

    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            doubled: self.doubled + rhs.doubled,
        }
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, Add::add)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EditOp {
    /// `S^a_j`: replace the letter at `pos` by `letter`.
    Substitute { pos: usize, letter: Letter },
    /// `D_j`: remove the letter at `pos`.
    Delete { pos: usize },
}

pub fn apply_edit(u: &[Letter], op: EditOp) -> Result<Word> {
    let pos = match op {
        EditOp::Substitute { pos, .. } | EditOp::Delete { pos } => pos,
    };
    if pos >= u.len() {
        return Err(Error::PositionOutOfRange { pos, len: u.len() });
    }
    let mut out = u.to_vec();
    match op {
        EditOp::Substitute { pos, letter } => out[pos] = letter,
        EditOp::Delete { pos } => {
            out.remove(pos);
        }
    }
    Ok(Word::new(out))
}

pub fn hamming(u: &[Letter], v: &[Letter]) -> Result<usize> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a != b).count())
}

/// Length of a longest common subsequence (the "longest common subword").
pub fn lcs_length(u: &[Letter], v: &[Letter]) -> usize {
    kernel::lcs(u, v)
}

pub fn levenshtein(u: &[Letter], v: &[Letter]) -> HalfInt {
    let lcs = lcs_length(u, v);
    HalfInt::from_doubled((u.len() + v.len() - 2 * lcs) as u64)
}

/// `lcs(u[0..l], v[0..l])` for every `l` in `lengths`, which must be strictly
/// increasing and bounded by both word lengths. One bit-parallel pass covers
/// all lengths the greedy search does not settle cheaply.
pub fn diagonal_prefix_lcs(u: &[Letter], v: &[Letter], lengths: &[usize]) -> Vec<usize> {
    debug_assert!(lengths.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(lengths.last().is_none_or(|&l| l <= u.len() && l <= v.len()));
    kernel::diagonal_prefix_lcs(u, v, lengths)
}

pub const ORACLE_MAX_LEN: usize = 12;

/// Every word obtained from `u` by deleting any set of positions, sorted and
/// without repeats.
pub fn deletion_closure(u: &[Letter]) -> Result<Vec<Vec<Letter>>> {
    if u.len() > ORACLE_MAX_LEN {
        return Err(Error::OracleTooLarge {
            limit: ORACLE_MAX_LEN,
            got: u.len(),
        });
    }
    let mut out: Vec<Vec<Letter>> = (0u32..(1 << u.len()))
        .map(|deleted| {
            u.iter()
                .enumerate()
                .filter(|(j, _)| deleted & (1 << j) == 0)
                .map(|(_, &a)| a)
                .collect()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Levenshtein distance from two deletion closures: the common word reached
/// with the fewest deletions on both sides.
pub fn oracle_from_closures(
    u_len: usize,
    from_u: &[Vec<Letter>],
    v_len: usize,
    from_v: &[Vec<Letter>],
) -> HalfInt {
    let (mut i, mut j, mut longest) = (0, 0, 0);
    while i < from_u.len() && j < from_v.len() {
        match from_u[i].cmp(&from_v[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                longest = longest.max(from_u[i].len());
                i += 1;
                j += 1;
            }
        }
    }
    HalfInt::from_doubled((u_len + v_len - 2 * longest) as u64)
}

/// Levenshtein distance straight from its definition: the fewest deletions
/// on both sides that make the words equal, halved. Exponential; words are
/// limited to [`ORACLE_MAX_LEN`] letters.
pub fn levenshtein_oracle(u: &[Letter], v: &[Letter]) -> Result<HalfInt> {
    let (cu, cv) = (deletion_closure(u)?, deletion_closure(v)?);
    Ok(oracle_from_closures(u.len(), &cu, v.len(), &cv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Alphabet::binary().parse_word(s).unwrap()
    }

    #[test]
    fn edit_operations() {
        assert_eq!(apply_edit(&w("010101"), EditOp::Delete { pos: 0 }).unwrap(), w("10101"));
        assert_eq!(apply_edit(&w("00001"), EditOp::Delete { pos: 4 }).unwrap(), w("0000"));
        let u = w("0110");
        assert_eq!(apply_edit(&u, EditOp::Substitute { pos: 0, letter: u[0] }).unwrap(), u);
        assert_eq!(
            apply_edit(&u, EditOp::Delete { pos: 4 }),
            Err(Error::PositionOutOfRange { pos: 4, len: 4 })
        );
        assert!(apply_edit(&[], EditOp::Substitute { pos: 0, letter: 0 }).is_err());
    }

    #[test]
    fn worked_distances() {
        // every position differs; the value 5 quoted for this pair in the
        // literature is a miscount
        assert_eq!(hamming(&w("010101"), &w("101010")).unwrap(), 6);
        assert_eq!(hamming(&w("0000"), &w("0001")).unwrap(), 1);
        assert_eq!(hamming(&w("0110"), &w("0110")).unwrap(), 0);
        assert_eq!(hamming(&w("0"), &w("01")), Err(Error::LengthMismatch(1, 2)));

        assert_eq!(lcs_length(&w("010101"), &w("101010")), 5);
        assert_eq!(lcs_length(&w("0110"), &[]), 0);
        assert_eq!(lcs_length(&w("0110"), &w("0110")), 4);

        assert_eq!(levenshtein(&w("010101"), &w("101010")), HalfInt::from_int(1));
        assert_eq!(levenshtein(&w("0000"), &w("00001")), HalfInt::from_doubled(1));
        assert_eq!(levenshtein(&w("0110"), &w("0110")), HalfInt::ZERO);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(levenshtein_oracle(&w("010101"), &w("101010")).unwrap(), HalfInt::from_int(1));
        assert_eq!(levenshtein_oracle(&[], &w("01101")).unwrap(), HalfInt::from_doubled(5));
        assert!(matches!(
            levenshtein_oracle(&[0; 13], &[]),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn half_int_display() {
        assert_eq!(HalfInt::from_doubled(1).to_string(), "1/2");
        assert_eq!(HalfInt::from_doubled(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(4).to_string(), "4");
        assert_eq!(HalfInt::from_doubled(1) + HalfInt::from_doubled(1), HalfInt::from_int(1));
    }

    fn binary_words_up_to(max_len: usize) -> Vec<Vec<Letter>> {
        (0..=max_len)
            .flat_map(|len| Alphabet::binary().words_of_length(len).map(Word::into_vec))
            .collect()
    }

    #[test]
    fn exhaustive_small_binary_properties() {
        let words = binary_words_up_to(5);
        for u in &words {
            for v in &words {
                let d = levenshtein(u, v);
                assert_eq!(d, levenshtein(v, u));
                let (lo, hi) = (u.len().abs_diff(v.len()) as u64, (u.len() + v.len()) as u64);
                assert!(lo <= d.doubled() && d.doubled() <= hi);
                if u.len() == v.len() {
                    let h = hamming(u, v).unwrap();
                    assert_eq!(h, hamming(v, u).unwrap());
                    assert!(d <= HalfInt::from_int(h as u64));
                }
                for x in &words {
                    assert!(levenshtein(u, x) <= d + levenshtein(v, x));
                    if u.len() == v.len() && v.len() == x.len() {
                        assert!(hamming(u, x).unwrap() <= hamming(u, v).unwrap() + hamming(v, x).unwrap());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn subadditive(
            u in proptest::collection::vec(0u8..3, 0..12),
            v in proptest::collection::vec(0u8..3, 0..12),
            u2 in proptest::collection::vec(0u8..3, 0..12),
            v2 in proptest::collection::vec(0u8..3, 0..12),
        ) {
            let joined = levenshtein(&[u.clone(), u2.clone()].concat(), &[v.clone(), v2.clone()].concat());
            prop_assert!(joined <= levenshtein(&u, &v) + levenshtein(&u2, &v2));
        }

        #[test]
        fn hamming_additive(pairs in proptest::collection::vec((0u8..3, 0u8..3), 0..40), cut in 0usize..40) {
            let (u, v): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            let cut = cut.min(u.len());
            prop_assert_eq!(
                hamming(&u, &v).unwrap(),
                hamming(&u[..cut], &v[..cut]).unwrap() + hamming(&u[cut..], &v[cut..]).unwrap()
            );
        }

        #[test]
        fn oracle_agrees_on_ternary(
            u in proptest::collection::vec(0u8..3, 0..9),
            v in proptest::collection::vec(0u8..3, 0..9),
        ) {
            prop_assert_eq!(levenshtein(&u, &v), levenshtein_oracle(&u, &v).unwrap());
        }
    }
}
