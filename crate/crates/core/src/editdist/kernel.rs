//! Exact longest-common-subsequence kernels.
//!
//! Two routes, picked per call:
//! * Myers' greedy O((n+m)·D) search on the indel edit graph, bounded by a
//!   budget on D. Near-identical words (a word against its shift, two
//!   eventually equal words) finish in almost linear time.
//! * Bit-parallel LCS (Allison–Dix recurrence in Hyyrö's form), O(n·⌈m/64⌉).
//!   The bit vector after reading `b[0..j]` encodes the whole DP column, so one
//!   pass answers `lcs(a[0..i], b[0..j])` for every `i`; a full distance curve
//!   costs a single pass.

use crate::words::Letter;

/// Number of indel operations (`|a| + |b| - 2·lcs`) if at most `max_d`.
pub(crate) fn indel_distance_bounded(a: &[Letter], b: &[Letter], max_d: usize) -> Option<usize> {
    let (n, m) = (a.len() as isize, b.len() as isize);
    let max_d = max_d.min((n + m) as usize) as isize;
    // Furthest x reached on diagonal k = x - y, stored at k + offset; -1 marks
    // a diagonal not reachable with the current number of edits.
    let offset = max_d + 1;
    let mut v = vec![-1isize; (2 * max_d + 3) as usize];
    let snake = |mut x: isize, mut y: isize| {
        while x < n && y < m && a[x as usize] == b[y as usize] {
            x += 1;
            y += 1;
        }
        x
    };

    let x0 = snake(0, 0);
    if x0 == n && x0 == m {
        return Some(0);
    }
    v[offset as usize] = x0;

    for d in 1..=max_d {
        let mut k = -d;
        while k <= d {
            let slot = (k + offset) as usize;
            if k > n || k < -m {
                v[slot] = -1;
                k += 2;
                continue;
            }
            // right move from diagonal k-1 (deletion from a)
            let from_left = {
                let prev = v[slot - 1];
                if k > -(d - 1) && prev >= 0 && prev < n {
                    Some(prev + 1)
                } else {
                    None
                }
            };
            // down move from diagonal k+1 (deletion from b)
            let from_above = {
                let prev = v[slot + 1];
                if k < d - 1 && prev >= 0 && prev - k <= m {
                    Some(prev)
                } else {
                    None
                }
            };
            let start = match (from_left, from_above) {
                (Some(l), Some(u)) => l.max(u),
                (Some(l), None) => l,
                (None, Some(u)) => u,
                (None, None) => {
                    v[slot] = -1;
                    k += 2;
                    continue;
                }
            };
            let x = snake(start, start - k);
            v[slot] = x;
            if x == n && x - k == m {
                return Some(d as usize);
            }
            k += 2;
        }
    }
    None
}

/// Match masks of `pattern`, one bit vector per letter.
struct MatchMasks {
    words: usize,
    masks: Vec<Vec<u64>>,
}

impl MatchMasks {
    fn new(pattern: &[Letter]) -> Self {
        let words = pattern.len().div_ceil(64).max(1);
        let top = pattern.iter().copied().max().map_or(0, usize::from);
        let mut masks = vec![vec![0u64; words]; top + 1];
        for (i, &a) in pattern.iter().enumerate() {
            masks[usize::from(a)][i / 64] |= 1 << (i % 64);
        }
        Self { words, masks }
    }

    fn get(&self, letter: Letter) -> Option<&[u64]> {
        self.masks.get(usize::from(letter)).map(|m| m.as_slice())
    }
}

/// Column state of the bit-parallel recurrence: a zero at bit `i` means the
/// LCS grows when `a_i` is added to the prefix of `a`.
struct BitColumn {
    v: Vec<u64>,
}

impl BitColumn {
    fn new(words: usize) -> Self {
        Self {
            v: vec![u64::MAX; words],
        }
    }

    fn step(&mut self, mask: Option<&[u64]>) {
        let Some(mask) = mask else {
            return;
        };
        let mut carry = 0u64;
        for (vw, &pm) in self.v.iter_mut().zip(mask) {
            let u = *vw & pm;
            let (s1, c1) = vw.overflowing_add(u);
            let (s2, c2) = s1.overflowing_add(carry);
            carry = u64::from(c1 || c2);
            *vw = s2 | (*vw & !pm);
        }
    }

    /// lcs of `a[0..i]` against the text read so far.
    fn lcs_of_prefix(&self, i: usize) -> usize {
        let full = i / 64;
        let mut ones: usize = self.v[..full].iter().map(|w| w.count_ones() as usize).sum();
        let rest = i % 64;
        if rest > 0 {
            ones += (self.v[full] & ((1u64 << rest) - 1)).count_ones() as usize;
        }
        i - ones
    }
}

pub(crate) fn lcs_bit_parallel(a: &[Letter], b: &[Letter]) -> usize {
    let (a, b) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if a.is_empty() {
        return 0;
    }
    let masks = MatchMasks::new(a);
    let mut col = BitColumn::new(masks.words);
    for &c in b {
        col.step(masks.get(c));
    }
    col.lcs_of_prefix(a.len())
}

/// `lcs(a[0..l], b[0..l])` for each `l` in `lengths` (ascending, each at most
/// `min(|a|, |b|)`), in one pass.
pub(crate) fn diagonal_prefix_lcs_bit_parallel(
    a: &[Letter],
    b: &[Letter],
    lengths: &[usize],
) -> Vec<usize> {
    let Some(&max_len) = lengths.last() else {
        return Vec::new();
    };
    let a = &a[..max_len];
    let masks = MatchMasks::new(a);
    let mut col = BitColumn::new(masks.words);
    let mut out = Vec::with_capacity(lengths.len());
    let mut read = 0;
    for &l in lengths {
        while read < l {
            col.step(masks.get(b[read]));
            read += 1;
        }
        out.push(col.lcs_of_prefix(l));
    }
    out
}

fn trim_common(a: &[Letter], b: &[Letter]) -> (usize, usize, usize) {
    let head = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let tail = a[head..]
        .iter()
        .rev()
        .zip(b[head..].iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    (head, a.len() - tail, b.len() - tail)
}

/// Indel budget below which the greedy search is cheaper than a bit-parallel
/// pass over words of combined length `total`.
fn greedy_budget(total: usize) -> usize {
    (total / 64).max(64)
}

pub(crate) fn lcs(a: &[Letter], b: &[Letter]) -> usize {
    let (head, a_end, b_end) = trim_common(a, b);
    let (core_a, core_b) = (&a[head..a_end], &b[head..b_end]);
    let common = a.len() - core_a.len();
    if core_a.is_empty() || core_b.is_empty() {
        return common;
    }
    let total = core_a.len() + core_b.len();
    let inner = match indel_distance_bounded(core_a, core_b, greedy_budget(total)) {
        Some(d) => (total - d) / 2,
        None => lcs_bit_parallel(core_a, core_b),
    };
    common + inner
}

/// `lcs(a[0..l], b[0..l])` for every `l` in `lengths` (strictly ascending).
pub(crate) fn diagonal_prefix_lcs(a: &[Letter], b: &[Letter], lengths: &[usize]) -> Vec<usize> {
    let mut out = vec![0; lengths.len()];
    let mut pending = Vec::new();
    for (slot, &l) in lengths.iter().enumerate() {
        let (pa, pb) = (&a[..l], &b[..l]);
        let (head, a_end, b_end) = trim_common(pa, pb);
        let (core_a, core_b) = (&pa[head..a_end], &pb[head..b_end]);
        let total = core_a.len() + core_b.len();
        match indel_distance_bounded(core_a, core_b, greedy_budget(total) / 2) {
            Some(d) => out[slot] = l - d / 2,
            None => pending.push(slot),
        }
    }
    if !pending.is_empty() {
        let pending_lengths: Vec<usize> = pending.iter().map(|&s| lengths[s]).collect();
        let values = diagonal_prefix_lcs_bit_parallel(a, b, &pending_lengths);
        for (slot, value) in pending.into_iter().zip(values) {
            out[slot] = value;
        }
    }
    out
}
