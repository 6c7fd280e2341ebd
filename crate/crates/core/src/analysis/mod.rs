//! Occurrence matrices, component structure and the classifiers built on
//! them: Besicovitch well-definedness and regime, Feldman Lipschitz constant
//! and equicontinuity.

pub mod components;
pub mod matrix;
pub mod spectral;

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

use crate::dillmap::{apply_as_spec, is_constant, iterate, non_periodic_image, AlignedPair, DillMap};
use crate::editdist::hamming;
use crate::error::{Error, Result};
use crate::metrics::besicovitch_exact_periodic;
use crate::words::{shift, InfiniteWordSpec, Letter, Word};
use crate::Rational;

pub use components::{decompose, is_primitive, Component, ComponentDecomposition};
pub use matrix::Matrix;
pub use spectral::{spectral_radius, SpectralEstimate};

fn require_substitution(map: &DillMap) -> Result<()> {
    if map.is_substitution() {
        Ok(())
    } else {
        Err(Error::WrongKind(format!(
            "{} has diameter {}, a substitution is required",
            map.name(),
            map.diameter()
        )))
    }
}

/// `M_ab = |τ(a)|_b`.
pub fn occurrence_matrix(map: &DillMap) -> Result<Matrix<u64>> {
    require_substitution(map)?;
    let k = map.alphabet().size();
    let mut m = Matrix::zeros(k);
    for a in 0..k {
        for &b in map.image(&[a as Letter]).iter() {
            let b = usize::from(b);
            m.set(a, b, m.get(a, b) + 1);
        }
    }
    Ok(m)
}

pub const MAX_GROWTH_STEPS: u32 = 64;

/// `|τ^t(a)|` as the row sum of `M^t`.
pub fn growth(map: &DillMap, letter: Letter, t: u32) -> Result<BigUint> {
    if t > MAX_GROWTH_STEPS {
        return Err(Error::WrongKind(format!("growth limited to t <= {MAX_GROWTH_STEPS}")));
    }
    map.alphabet().check(&[letter])?;
    let m = occurrence_matrix(map)?.map(|&e| BigUint::from(e));
    Ok(m.pow(t).row_sum(usize::from(letter)))
}

pub fn components(map: &DillMap) -> Result<ComponentDecomposition> {
    Ok(decompose(&occurrence_matrix(map)?))
}

/// Structural predicates; `None` marks a predicate that does not apply to
/// this kind of map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub uniform: bool,
    pub ca: bool,
    pub substitution: bool,
    pub irreducible: Option<bool>,
    pub primitive: Option<bool>,
    pub toeplitz: Option<bool>,
}

pub fn predicates(map: &DillMap) -> Predicates {
    let subst = map.is_substitution();
    let matrix = occurrence_matrix(map).ok();
    let toeplitz = (subst && map.is_uniform()).then(|| {
        let images = map.rule().images();
        (0..map.upper_norm()).any(|i| images.iter().all(|w| w[i] == images[0][i]))
    });
    Predicates {
        uniform: map.is_uniform(),
        ca: map.is_ca(),
        substitution: subst,
        irreducible: matrix.as_ref().map(|m| decompose(m).components.len() == 1),
        primitive: matrix.as_ref().map(is_primitive),
        toeplitz,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BesicovitchStatus {
    WellDefinedUniform,
    WellDefinedConstant,
    NotWellDefined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Contracting,
    Equicontinuous,
    Isometry,
    Unclassified,
}

/// Serializes a rational as an integer when whole, else as a float.
fn number<S: Serializer>(value: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    if value.is_integer() {
        let n: BigInt = value.to_integer();
        match i64::try_from(&n) {
            Ok(n) => ser.serialize_i64(n),
            Err(_) => ser.serialize_str(&n.to_string()),
        }
    } else {
        ser.serialize_f64(crate::scalar::Scalar::to_f64(value))
    }
}

fn optional_number<S: Serializer>(value: &Option<Rational>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => number(v, ser),
        None => ser.serialize_none(),
    }
}

fn exact_text<S: Serializer>(value: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_string())
}

fn optional_exact_text<S: Serializer>(value: &Option<Rational>, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => exact_text(v, ser),
        None => ser.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BesicovitchReport {
    pub status: BesicovitchStatus,
    #[serde(serialize_with = "optional_number")]
    pub lipschitz: Option<Rational>,
    #[serde(serialize_with = "optional_exact_text")]
    pub lipschitz_exact: Option<Rational>,
    pub regime: Option<Regime>,
    /// Largest Hamming distance between two images (uniform maps only).
    pub maxd: Option<usize>,
    /// Smallest Hamming distance between images of distinct windows.
    pub mind: Option<usize>,
}

fn image_distances(map: &DillMap) -> (usize, Option<usize>) {
    let images = map.rule().images();
    let mut maxd = 0;
    let mut mind: Option<usize> = None;
    for (i, u) in images.iter().enumerate() {
        for v in &images[i + 1..] {
            let d = hamming(u, v).expect("uniform images");
            maxd = maxd.max(d);
            mind = Some(mind.map_or(d, |m| m.min(d)));
        }
    }
    (maxd, mind)
}

/// Regime of a uniform map from the Lipschitz sandwich. Isometry needs both
/// coefficients equal to 1, which the lower bound only guarantees for
/// diameter 1.
fn regime(s: usize, lower: usize, maxd: usize, mind: Option<usize>) -> Regime {
    if s * maxd < lower {
        Regime::Contracting
    } else if s == 1 && mind == Some(maxd) && maxd == lower {
        Regime::Isometry
    } else if s * maxd <= lower {
        Regime::Equicontinuous
    } else {
        Regime::Unclassified
    }
}

pub fn classify_besicovitch(map: &DillMap) -> BesicovitchReport {
    let (s, lower) = (map.diameter(), map.lower_norm());
    if map.is_uniform() {
        let (maxd, mind) = image_distances(map);
        let lipschitz = Rational::new(BigInt::from(s * maxd), BigInt::from(lower));
        return BesicovitchReport {
            status: BesicovitchStatus::WellDefinedUniform,
            lipschitz_exact: Some(lipschitz.clone()),
            lipschitz: Some(lipschitz),
            regime: Some(regime(s, lower, maxd, mind)),
            maxd: Some(maxd),
            mind,
        };
    }
    if is_constant(map) {
        // all images coincide, so every pair of points collapses
        let zero = Rational::from_integer(BigInt::from(0));
        return BesicovitchReport {
            status: BesicovitchStatus::WellDefinedConstant,
            lipschitz_exact: Some(zero.clone()),
            lipschitz: Some(zero),
            regime: Some(Regime::Contracting),
            maxd: None,
            mind: None,
        };
    }
    BesicovitchReport {
        status: BesicovitchStatus::NotWellDefined,
        lipschitz: None,
        lipschitz_exact: None,
        regime: None,
        maxd: None,
        mind: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeldmanReport {
    #[serde(serialize_with = "number")]
    pub lipschitz: Rational,
    #[serde(serialize_with = "exact_text")]
    pub lipschitz_exact: Rational,
    /// Substitutions only: every terminal component is maximum.
    pub equicontinuous: Option<bool>,
    /// Letters whose infinite words are the equicontinuous points
    /// (substitutions only).
    pub equicontinuous_points: Option<Vec<Letter>>,
}

pub fn classify_feldman(map: &DillMap) -> FeldmanReport {
    let s = map.diameter();
    let lipschitz = Rational::new(
        BigInt::from((2 * s - 1) * map.upper_norm()),
        BigInt::from(map.lower_norm()),
    );
    let decomposition = components(map).ok();
    FeldmanReport {
        lipschitz_exact: lipschitz.clone(),
        lipschitz,
        equicontinuous: decomposition
            .as_ref()
            .map(|d| d.components.iter().filter(|c| c.terminal).all(|c| c.maximum)),
        equicontinuous_points: decomposition.map(|d| d.maxal),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub letters: Vec<String>,
    pub rho_low: f64,
    pub rho_high: f64,
    pub terminal: bool,
    pub maximum: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeldmanSection {
    #[serde(serialize_with = "number")]
    pub lipschitz: Rational,
    #[serde(serialize_with = "exact_text")]
    pub lipschitz_exact: Rational,
    pub equicontinuous: Option<bool>,
    pub equicontinuous_points: Option<Vec<String>>,
}

/// Everything the classifiers know about one map, with letters rendered as
/// glyphs. Field names are stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub rule: String,
    pub alphabet: String,
    pub diameter: usize,
    pub lower_norm: usize,
    pub upper_norm: usize,
    pub besicovitch: BesicovitchReport,
    pub feldman: FeldmanSection,
    pub predicates: Predicates,
    pub components: Option<Vec<ComponentReport>>,
    pub maxal: Option<Vec<String>>,
}

pub fn classify(map: &DillMap) -> ClassificationReport {
    let alphabet = map.alphabet();
    let glyphs = |letters: &[Letter]| -> Vec<String> { letters.iter().map(|&a| alphabet.glyph(a).to_string()).collect() };
    let feldman = classify_feldman(map);
    let decomposition = components(map).ok();
    ClassificationReport {
        rule: map.name().to_owned(),
        alphabet: alphabet.glyphs().iter().collect(),
        diameter: map.diameter(),
        lower_norm: map.lower_norm(),
        upper_norm: map.upper_norm(),
        besicovitch: classify_besicovitch(map),
        feldman: FeldmanSection {
            lipschitz: feldman.lipschitz,
            lipschitz_exact: feldman.lipschitz_exact,
            equicontinuous: feldman.equicontinuous,
            equicontinuous_points: feldman.equicontinuous_points.as_deref().map(glyphs),
        },
        predicates: predicates(map),
        components: decomposition.as_ref().map(|d| {
            d.components
                .iter()
                .map(|c| ComponentReport {
                    letters: glyphs(&c.letters),
                    rho_low: c.rho.low,
                    rho_high: c.rho.high,
                    terminal: c.terminal,
                    maximum: c.maximum,
                })
                .collect()
        }),
        maxal: decomposition.map(|d| glyphs(&d.maxal)),
    }
}

/// Pair of points at Besicovitch distance 0 whose images are far apart.
#[derive(Clone, Debug)]
pub struct Witness {
    pub pair: AlignedPair,
    /// Common tail `w` of `x = u·w^∞` and `y = v·w^∞`.
    pub tail: Word,
    pub x: InfiniteWordSpec,
    pub y: InfiniteWordSpec,
    pub input_distance: Rational,
    pub image_distance: Rational,
}

/// Searches `x = u·w^∞`, `y = v·w^∞` over the first suffix-aligned pair
/// `(u, v)` and every nonempty `w` up to `max_tail` letters, keeping the pair
/// whose images are farthest apart (first in lexicographic order on ties).
/// `None` when the map is well defined or no tail separates the images.
pub fn non_well_defined_witness(map: &Arc<DillMap>, max_tail: usize) -> Option<Witness> {
    if map.is_uniform() {
        return None;
    }
    let (pair, _) = non_periodic_image(map)?;
    let mut best: Option<Witness> = None;
    for len in 1..=max_tail {
        for w in map.alphabet().words_of_length(len) {
            let x = InfiniteWordSpec::periodic(pair.u.clone(), w.clone()).expect("nonempty tail");
            let y = InfiniteWordSpec::periodic(pair.v.clone(), w.clone()).expect("nonempty tail");
            let image_distance =
                besicovitch_exact_periodic(&apply_as_spec(map, &x), &apply_as_spec(map, &y)).expect("periodic images");
            if best.as_ref().is_none_or(|b| image_distance > b.image_distance) {
                best = Some(Witness {
                    pair: pair.clone(),
                    tail: w,
                    input_distance: besicovitch_exact_periodic(&x, &y).expect("periodic inputs"),
                    x,
                    y,
                    image_distance,
                });
            }
        }
    }
    best.filter(|b| b.image_distance > Rational::from_integer(BigInt::from(0)))
}

/// Checks `(σ^m ∘ F)^n(x) = σ^{m(1 + q + … + q^{n-1})}(F^n(x))` with
/// `q = ⌊f⌋` on prefixes of length `l`, for `n = 1..=max_n` and every sample.
pub fn shift_compose_invariance(
    map: &DillMap,
    m: usize,
    samples: &[InfiniteWordSpec],
    max_n: usize,
    l: usize,
) -> Result<bool> {
    if !map.is_uniform() {
        return Err(Error::WrongKind(format!("{} is not uniform", map.name())));
    }
    let q = map.lower_norm();
    for x in samples {
        for n in 1..=max_n {
            // letters needed at each stage, from the last one back
            let mut needed = vec![0usize; n + 1];
            needed[n] = l;
            for t in (0..n).rev() {
                needed[t] = map.input_needed(needed[t + 1] + m);
            }
            let mut word = x.prefix(needed[0])?;
            for t in 1..=n {
                let image = map.f_star_bounded(&word, needed[t] + m);
                word = Word::from(&image[m..]);
            }
            let offset: usize = (0..n).map(|k| m * q.pow(k as u32)).sum();
            let direct = iterate(map, x, n, l + offset)?;
            if word[..] != direct[offset..] {
                return Ok(false);
            }
            // the same identity through lazy specs
            let mut lazy = x.clone();
            for _ in 0..n {
                lazy = shift(&apply_as_spec(&Arc::new(map.clone()), &lazy), m);
            }
            if lazy.prefix(l)?[..] != direct[offset..] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
