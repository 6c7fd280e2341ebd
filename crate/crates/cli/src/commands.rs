//! The work behind each subcommand, returning the bytes to be written so the
//! binary only handles argument parsing and output.

use dillscope_core::dillmap::orbit_prefixes;
use dillscope_core::metrics::{self, curve, weyl_curve, EstimateKind};
use dillscope_core::scalar::Scalar;
use dillscope_core::{classify, Alphabet, CurveF64, DistanceKind, InfiniteWordSpec};

use crate::error::{CliError, CliResult};
use crate::ppm;
use crate::rules::{load_rule, max_input, parse_word_spec};

/// Pretty JSON classification report, newline terminated.
pub fn classify_json(rule_arg: &str) -> CliResult<String> {
    let map = load_rule(rule_arg)?;
    let mut out = serde_json::to_string_pretty(&classify(&map)).expect("report serializes");
    out.push('\n');
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Hamming,
    Levenshtein,
    WeylHamming,
    WeylLevenshtein,
}

impl CurveKind {
    fn base(self) -> DistanceKind {
        match self {
            CurveKind::Hamming | CurveKind::WeylHamming => DistanceKind::Hamming,
            CurveKind::Levenshtein | CurveKind::WeylLevenshtein => DistanceKind::Levenshtein,
        }
    }
}

/// `geometric:a,b` for `2^a..=2^b`, or a comma-separated list.
pub fn parse_lengths(text: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("invalid --lengths {text:?}"));
    if let Some(range) = text.strip_prefix("geometric:") {
        let (a, b) = range.split_once(',').ok_or_else(bad)?;
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b || b >= usize::BITS - 1 {
            return Err(bad());
        }
        return Ok(metrics::geometric_lengths(a, b));
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

/// Distance curve between two specs over `alphabet`, as CSV. Hamming curves of
/// eventually periodic pairs report the exact density as their estimate.
pub fn distance_csv(kind: CurveKind, x: &str, y: &str, lengths: &[usize], alphabet: &str) -> CliResult<String> {
    let alphabet = Alphabet::from_glyphs(alphabet)?;
    let (x, y) = (parse_word_spec(x, &alphabet)?, parse_word_spec(y, &alphabet)?);
    let mut result: CurveF64 = match kind {
        CurveKind::Hamming | CurveKind::Levenshtein => curve(kind.base(), &x, &y, lengths)?,
        CurveKind::WeylHamming | CurveKind::WeylLevenshtein => weyl_curve(kind.base(), &x, &y, lengths)?,
    };
    if kind == CurveKind::Hamming && x.as_periodic().is_some() && y.as_periodic().is_some() {
        result.estimate.value = metrics::besicovitch_exact_periodic(&x, &y)?.to_f64();
        result.estimate.kind = EstimateKind::ExactPeriodic;
    }
    Ok(metrics::to_csv(&result))
}

/// Space-time diagram of `rule` on `x` as a P6 image.
pub fn simulate_ppm(rule_arg: &str, x: &str, steps: usize, width: usize) -> CliResult<Vec<u8>> {
    if steps == 0 || width == 0 {
        return Err(CliError::Usage("--steps and --width must be at least 1".into()));
    }
    let map = load_rule(rule_arg)?;
    let x: InfiniteWordSpec = parse_word_spec(x, map.alphabet())?;
    let rows = orbit_prefixes(&map, &x, steps, width, max_input()?)?;
    Ok(ppm::encode(&rows))
}
