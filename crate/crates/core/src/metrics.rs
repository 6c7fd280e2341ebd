//! Besicovitch, Feldman, centred and sliding (Weyl) pseudo-metrics between
//! infinite words, estimated from prefixes and computed exactly where the
//! inputs are eventually periodic.
//!
//! All raw distances are carried doubled (an exact integer for both kinds)
//! and normalized by the prefix length `l`. For Hamming and Levenshtein the
//! largest possible distance between two words of length `l` is `l` itself
//! (attained by `0^l` against `1^l`), so the normalizer is `l` for both.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::editdist::diagonal_prefix_lcs;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::words::{InfiniteWordSpec, Letter, Word};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DistanceKind {
    Hamming,
    Levenshtein,
}

impl DistanceKind {
    /// Doubled distances `2·d(u[0..l), v[0..l))` for every `l` in `lengths`
    /// (strictly increasing, each at most both word lengths).
    pub fn profile_doubled(self, u: &[Letter], v: &[Letter], lengths: &[usize]) -> Vec<u64> {
        match self {
            DistanceKind::Hamming => {
                let mut out = Vec::with_capacity(lengths.len());
                let (mut mismatches, mut pos) = (0u64, 0usize);
                for &l in lengths {
                    mismatches += u[pos..l].iter().zip(&v[pos..l]).filter(|(a, b)| a != b).count() as u64;
                    pos = l;
                    out.push(2 * mismatches);
                }
                out
            }
            DistanceKind::Levenshtein => diagonal_prefix_lcs(u, v, lengths)
                .into_iter()
                .zip(lengths)
                .map(|(lcs, &l)| 2 * (l - lcs) as u64)
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EstimateKind {
    ExactPeriodic,
    FeketeUpperBound,
    TailMax,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::ExactPeriodic => "ExactPeriodic",
            EstimateKind::FeketeUpperBound => "FeketeUpperBound",
            EstimateKind::TailMax => "TailMax",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample<S> {
    pub l: usize,
    pub raw_doubled: u64,
    pub normalized: S,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate<S> {
    pub value: S,
    pub kind: EstimateKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceCurve<S> {
    pub kind: DistanceKind,
    pub samples: Vec<Sample<S>>,
    pub estimate: Estimate<S>,
}

/// Fraction of the longest sampled lengths the tail estimate looks at.
pub const TAIL_FRACTION: f64 = 0.25;

/// `l = 2^i` for `i` in `from..=to`.
pub fn geometric_lengths(from: u32, to: u32) -> Vec<usize> {
    (from..=to).map(|i| 1usize << i).collect()
}

pub fn default_lengths() -> Vec<usize> {
    geometric_lengths(6, 20)
}

fn check_lengths(lengths: &[usize]) -> Result<()> {
    if lengths.is_empty() {
        return Err(Error::BadLengths("no lengths given".into()));
    }
    if lengths.contains(&0) {
        return Err(Error::BadLengths("length 0 in schedule".into()));
    }
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadLengths("lengths must be strictly increasing".into()));
    }
    Ok(())
}

fn tail_max<S: Scalar>(samples: &[Sample<S>]) -> S {
    let tail = ((samples.len() as f64 * TAIL_FRACTION).ceil() as usize).clamp(1, samples.len());
    samples[samples.len() - tail..]
        .iter()
        .map(|s| s.normalized.clone())
        .reduce(S::max_of)
        .expect("nonempty samples")
}

fn assemble<S: Scalar>(kind: DistanceKind, lengths: &[usize], raw: Vec<u64>) -> DistanceCurve<S> {
    let samples: Vec<Sample<S>> = lengths
        .iter()
        .zip(raw)
        .map(|(&l, raw_doubled)| Sample {
            l,
            raw_doubled,
            normalized: S::from_ratio(raw_doubled, 2 * l as u64),
        })
        .collect();
    let value = tail_max(&samples);
    DistanceCurve {
        kind,
        samples,
        estimate: Estimate {
            value,
            kind: EstimateKind::TailMax,
        },
    }
}

/// Normalized prefix distances `d(x[0,l), y[0,l)) / l` for each `l`, with
/// the maximum over the top quarter of lengths as estimate of the limsup.
pub fn curve<S: Scalar>(
    kind: DistanceKind,
    x: &InfiniteWordSpec,
    y: &InfiniteWordSpec,
    lengths: &[usize],
) -> Result<DistanceCurve<S>> {
    check_lengths(lengths)?;
    let max_len = *lengths.last().expect("nonempty");
    let (u, v) = (x.prefix(max_len)?, y.prefix(max_len)?);
    Ok(assemble(kind, lengths, kind.profile_doubled(&u, &v, lengths)))
}

/// Transient and period lengths after which both words repeat together.
fn joint_period(x: &InfiniteWordSpec, y: &InfiniteWordSpec) -> Result<(usize, usize)> {
    let ((tx, px), (ty, py)) = match (x.as_periodic(), y.as_periodic()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NotPeriodic),
    };
    Ok((tx.len().max(ty.len()), px.len().lcm(&py.len())))
}

fn rational(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact Besicovitch distance of two eventually periodic words: the mismatch
/// density over one joint period past both transients.
pub fn besicovitch_exact_periodic(x: &InfiniteWordSpec, y: &InfiniteWordSpec) -> Result<Rational> {
    let (t, p) = joint_period(x, y)?;
    let (u, v) = (x.prefix(t + p)?, y.prefix(t + p)?);
    let mismatches = u[t..].iter().zip(&v[t..]).filter(|(a, b)| a != b).count();
    Ok(rational(mismatches as u64, p as u64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeldmanBounds {
    pub transient: usize,
    pub block: usize,
    /// `(n, d_L(n blocks) / (n·block))` per requested block count.
    pub ratios: Vec<(usize, Rational)>,
    /// Running minimum of the ratios; each entry bounds the limsup from
    /// above by subadditivity.
    pub upper_by_count: Vec<Rational>,
    pub upper: Rational,
    /// Tail estimate of the plain curve sampled at `transient + n·block`.
    pub tail_estimate: Rational,
    /// Allowed excess of `tail_estimate` over `upper`: `2(T + P) / l` at the
    /// shortest tail length, covering the unaligned head of each prefix.
    pub tolerance: Rational,
}

impl FeldmanBounds {
    pub fn consistent(&self) -> bool {
        self.upper >= self.tail_estimate.clone() - self.tolerance.clone()
    }
}

/// Fekete-style upper bounds on the Feldman distance of two eventually
/// periodic words. `n` aligned joint-period blocks past the transients give
/// `a_n = d_L` of the blocks; since `a_{n+m} <= a_n + a_m`, every `a_n / (nP)`
/// bounds the limsup.
pub fn feldman_periodic_bounds(
    x: &InfiniteWordSpec,
    y: &InfiniteWordSpec,
    block_counts: &[usize],
) -> Result<FeldmanBounds> {
    check_lengths(block_counts)?;
    let (t, p) = joint_period(x, y)?;
    let max_n = *block_counts.last().expect("nonempty");
    let (u, v) = (x.prefix(t + max_n * p)?, y.prefix(t + max_n * p)?);

    let block_lengths: Vec<usize> = block_counts.iter().map(|n| n * p).collect();
    let aligned = DistanceKind::Levenshtein.profile_doubled(&u[t..], &v[t..], &block_lengths);
    let ratios: Vec<(usize, Rational)> = block_counts
        .iter()
        .zip(&aligned)
        .map(|(&n, &doubled)| (n, rational(doubled, 2 * (n * p) as u64)))
        .collect();
    let mut upper_by_count = Vec::with_capacity(ratios.len());
    for (_, r) in &ratios {
        let next = match upper_by_count.last() {
            Some(prev) if prev < r => Rational::clone(prev),
            _ => r.clone(),
        };
        upper_by_count.push(next);
    }

    let tail_lengths: Vec<usize> = block_counts.iter().map(|n| t + n * p).collect();
    let tail: DistanceCurve<Rational> = curve(DistanceKind::Levenshtein, x, y, &tail_lengths)?;
    let tail_start = tail.samples.len() - ((tail.samples.len() as f64 * TAIL_FRACTION).ceil() as usize).clamp(1, tail.samples.len());
    let l_tail_min = tail.samples[tail_start].l;
    Ok(FeldmanBounds {
        transient: t,
        block: p,
        upper: upper_by_count.last().expect("nonempty").clone(),
        ratios,
        upper_by_count,
        tail_estimate: tail.estimate.value,
        tolerance: rational(2 * (t + p) as u64, l_tail_min as u64),
    })
}

/// A distance usable by the centred pseudo-metric: doubled values and the
/// doubled normalizer `max_{u,v ∈ A^l} d(u, v)`.
pub trait PlugInDistance {
    fn profile_doubled(&self, u: &[Letter], v: &[Letter], lengths: &[usize]) -> Vec<u64>;

    fn normalizer_doubled(&self, l: usize, alphabet_size: usize) -> Result<u64>;
}

impl PlugInDistance for DistanceKind {
    fn profile_doubled(&self, u: &[Letter], v: &[Letter], lengths: &[usize]) -> Vec<u64> {
        DistanceKind::profile_doubled(*self, u, v, lengths)
    }

    fn normalizer_doubled(&self, l: usize, alphabet_size: usize) -> Result<u64> {
        if alphabet_size < 2 {
            return Err(Error::DegenerateNormalizer);
        }
        Ok(2 * l as u64)
    }
}

/// Centred pseudo-metric: distances normalized by the largest distance
/// between any two words of the same length. The curve's kind records the
/// distance that `curve()` would use for the same values.
pub fn centred_pseudometric<S: Scalar>(
    d: &dyn PlugInDistance,
    kind: DistanceKind,
    alphabet_size: usize,
    x: &InfiniteWordSpec,
    y: &InfiniteWordSpec,
    lengths: &[usize],
) -> Result<DistanceCurve<S>> {
    check_lengths(lengths)?;
    let max_len = *lengths.last().expect("nonempty");
    let (u, v) = (x.prefix(max_len)?, y.prefix(max_len)?);
    let raw = d.profile_doubled(&u, &v, lengths);
    let samples = lengths
        .iter()
        .zip(raw)
        .map(|(&l, raw_doubled)| {
            let norm = d.normalizer_doubled(l, alphabet_size)?;
            if norm == 0 {
                return Err(Error::DegenerateNormalizer);
            }
            Ok(Sample {
                l,
                raw_doubled,
                normalized: S::from_ratio(raw_doubled, norm),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = tail_max(&samples);
    Ok(DistanceCurve {
        kind,
        samples,
        estimate: Estimate {
            value,
            kind: EstimateKind::TailMax,
        },
    })
}

/// Sliding (Weyl) curve: for each `l`, the largest normalized distance over
/// windows `[k, k + l)`. Window starts `k < T + P` cover every window up to
/// joint periodicity.
pub fn weyl_curve<S: Scalar>(
    kind: DistanceKind,
    x: &InfiniteWordSpec,
    y: &InfiniteWordSpec,
    lengths: &[usize],
) -> Result<DistanceCurve<S>> {
    check_lengths(lengths)?;
    let (t, p) = joint_period(x, y)?;
    let max_len = *lengths.last().expect("nonempty");
    let (u, v) = (x.prefix(t + p + max_len)?, y.prefix(t + p + max_len)?);
    let mut best = vec![0u64; lengths.len()];
    for k in 0..t + p {
        let raw = kind.profile_doubled(&u[k..], &v[k..], lengths);
        for (b, r) in best.iter_mut().zip(raw) {
            *b = (*b).max(r);
        }
    }
    Ok(assemble(kind, lengths, best))
}

/// CSV rendering: header, one row per sample with 9 decimals, and a trailing
/// `# estimate=<value> kind=<kind>` comment.
pub fn to_csv<S: Scalar>(curve: &DistanceCurve<S>) -> String {
    let mut out = String::from("l,raw_doubled,normalized\n");
    for s in &curve.samples {
        writeln!(out, "{},{},{:.9}", s.l, s.raw_doubled, s.normalized.to_f64()).expect("string write");
    }
    writeln!(
        out,
        "# estimate={:.9} kind={}",
        curve.estimate.value.to_f64(),
        curve.estimate.kind.as_str()
    )
    .expect("string write");
    out
}

/// `a·x` for an eventually periodic `x`; differs from `x` in density 0.
pub fn prepend(letter: Letter, x: &InfiniteWordSpec) -> Result<InfiniteWordSpec> {
    match x.as_periodic() {
        Some((t, p)) => InfiniteWordSpec::periodic(Word::new(vec![letter]).concat(t), p.clone()),
        None => Err(Error::NotPeriodic),
    }
}
