//! Alphabets, finite words, lazily generated infinite words and the Cantor
//! distance between them.
//!
//! Letters are dense indices `0..k`; glyphs only matter when words are read
//! from or written to text.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::dillmap::DillMap;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Letter = u8;

/// Glyphs used when an alphabet is created from its size alone.
const DEFAULT_GLYPHS: &str = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    glyphs: Vec<char>,
}

impl Alphabet {
    /// Alphabet `{0, …, size-1}` displayed with digits, then letters.
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if size > DEFAULT_GLYPHS.len() {
            return Err(Error::WrongKind(format!(
                "alphabets larger than {} letters need explicit glyphs",
                DEFAULT_GLYPHS.len()
            )));
        }
        Ok(Self {
            glyphs: DEFAULT_GLYPHS.chars().take(size).collect(),
        })
    }

    pub fn binary() -> Self {
        Self::new(2).expect("binary alphabet")
    }

    /// One letter per glyph, in order; glyphs must be distinct.
    pub fn from_glyphs(glyphs: &str) -> Result<Self> {
        let glyphs: Vec<char> = glyphs.chars().collect();
        if glyphs.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if glyphs.len() > usize::from(Letter::MAX) + 1 {
            return Err(Error::WrongKind("more than 256 letters".into()));
        }
        for (i, g) in glyphs.iter().enumerate() {
            if glyphs[..i].contains(g) {
                return Err(Error::WrongKind(format!("duplicate glyph {g:?}")));
            }
        }
        Ok(Self { glyphs })
    }

    pub fn size(&self) -> usize {
        self.glyphs.len()
    }

    pub fn glyphs(&self) -> &[char] {
        &self.glyphs
    }

    pub fn glyph(&self, letter: Letter) -> char {
        self.glyphs[usize::from(letter)]
    }

    pub fn letter(&self, glyph: char) -> Result<Letter> {
        self.glyphs
            .iter()
            .position(|&g| g == glyph)
            .map(|i| i as Letter)
            .ok_or(Error::UnknownGlyph(glyph))
    }

    pub fn contains(&self, letter: Letter) -> bool {
        usize::from(letter) < self.size()
    }

    pub fn check(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&a| !self.contains(a)) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.chars()
            .map(|c| self.letter(c))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, word: &[Letter]) -> String {
        word.iter().map(|&a| self.glyph(a)).collect()
    }

    /// Every word of length `n` in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> impl Iterator<Item = Word> {
        let k = self.size();
        let total = k.checked_pow(n as u32).expect("enumeration too large");
        (0..total).map(move |mut index| {
            let mut letters = vec![0; n];
            for slot in letters.iter_mut().rev() {
                *slot = (index % k) as Letter;
                index /= k;
            }
            Word(letters)
        })
    }
}

/// A finite word `u = u_0 … u_{|u|-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn repeat_letter(letter: Letter, n: usize) -> Self {
        Self(vec![letter; n])
    }

    /// `|u|_a`
    pub fn occurrences(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&a| a == letter).count()
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(other);
        Word(letters)
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    pub fn truncated(mut self, len: usize) -> Word {
        self.0.truncate(len);
        self
    }
}

impl Deref for Word {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Self(letters)
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Self(letters.to_vec())
    }
}

type StreamFn = Arc<dyn Fn(usize) -> Letter + Send + Sync>;

/// A deterministic description of an infinite word, evaluated on demand.
///
/// `Shifted` and `Image` are produced by [`shift`] and
/// [`crate::dillmap::apply_as_spec`] when no closed form exists.
#[derive(Clone)]
pub enum InfiniteWordSpec {
    /// `transient · period^∞`
    EventuallyPeriodic { transient: Word, period: Word },
    /// Fixed point `lim τ^t(seed)` of a prolongable substitution.
    SubstitutionOrbit {
        rule: Arc<DillMap>,
        seed: Letter,
        max_iterations: usize,
    },
    /// Letter at each index, given by a pure function.
    ExplicitStream(StreamFn),
    Shifted {
        base: Box<InfiniteWordSpec>,
        offset: usize,
    },
    Image {
        map: Arc<DillMap>,
        base: Box<InfiniteWordSpec>,
    },
}

pub const DEFAULT_ORBIT_ITERATIONS: usize = 64;

impl InfiniteWordSpec {
    pub fn periodic(transient: impl Into<Word>, period: impl Into<Word>) -> Result<Self> {
        let period = period.into();
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(Self::EventuallyPeriodic {
            transient: transient.into(),
            period,
        })
    }

    /// `a^∞`
    pub fn constant(letter: Letter) -> Self {
        Self::EventuallyPeriodic {
            transient: Word::empty(),
            period: Word(vec![letter]),
        }
    }

    /// Fixed point of the substitution `rule` starting with `seed`.
    pub fn fixed_point(rule: Arc<DillMap>, seed: Letter) -> Result<Self> {
        if !rule.is_substitution() {
            return Err(Error::WrongKind(format!(
                "fixed points need a substitution, {} has diameter {}",
                rule.name(),
                rule.diameter()
            )));
        }
        if !rule.alphabet().contains(seed) {
            return Err(Error::LetterOutOfRange {
                letter: seed,
                size: rule.alphabet().size(),
            });
        }
        if rule.image(&[seed]).first() != Some(&seed) {
            return Err(Error::NotProlongable {
                rule: rule.name().to_owned(),
                seed,
            });
        }
        Ok(Self::SubstitutionOrbit {
            rule,
            seed,
            max_iterations: DEFAULT_ORBIT_ITERATIONS,
        })
    }

    pub fn stream(f: impl Fn(usize) -> Letter + Send + Sync + 'static) -> Self {
        Self::ExplicitStream(Arc::new(f))
    }

    pub fn as_periodic(&self) -> Option<(&Word, &Word)> {
        match self {
            Self::EventuallyPeriodic { transient, period } => Some((transient, period)),
            _ => None,
        }
    }

    /// `x_[0,l)`
    pub fn prefix(&self, len: usize) -> Result<Word> {
        match self {
            Self::EventuallyPeriodic { transient, period } => {
                if period.is_empty() {
                    return Err(Error::EmptyPeriod);
                }
                let mut out: Vec<Letter> = transient.iter().copied().take(len).collect();
                while out.len() < len {
                    let room = len - out.len();
                    out.extend(period.iter().take(room));
                }
                Ok(Word(out))
            }
            Self::SubstitutionOrbit {
                rule,
                seed,
                max_iterations,
            } => {
                if rule.image(&[*seed]).first() != Some(seed) {
                    return Err(Error::NotProlongable {
                        rule: rule.name().to_owned(),
                        seed: *seed,
                    });
                }
                let mut word = Word(vec![*seed]);
                let mut iterations = 0;
                while word.len() < len {
                    if iterations == *max_iterations {
                        return Err(Error::OrbitNotStabilizing);
                    }
                    let next = rule.f_star(&word);
                    if next.len() == word.len() {
                        return Err(Error::OrbitNotStabilizing);
                    }
                    word = next;
                    iterations += 1;
                }
                Ok(word.truncated(len))
            }
            Self::ExplicitStream(f) => Ok(Word((0..len).map(|i| f(i)).collect())),
            Self::Shifted { base, offset } => {
                let long = base.prefix(len + offset)?;
                Ok(Word(long[*offset..].to_vec()))
            }
            Self::Image { map, base } => crate::dillmap::apply(map, base, len),
        }
    }

    pub fn letter_at(&self, index: usize) -> Result<Letter> {
        match self {
            Self::EventuallyPeriodic { transient, period } => Ok(if index < transient.len() {
                transient[index]
            } else {
                period[(index - transient.len()) % period.len()]
            }),
            Self::ExplicitStream(f) => Ok(f(index)),
            _ => Ok(self.prefix(index + 1)?[index]),
        }
    }

    /// Text form: `t(p)^inf` or `fix(name,seed)`; other variants are
    /// rendered for display only.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        match self {
            Self::EventuallyPeriodic { transient, period } => format!(
                "{}({})^inf",
                alphabet.render(transient),
                alphabet.render(period)
            ),
            Self::SubstitutionOrbit { rule, seed, .. } => {
                format!("fix({},{})", rule.name(), alphabet.glyph(*seed))
            }
            Self::ExplicitStream(_) => "<stream>".to_owned(),
            Self::Shifted { base, offset } => format!("shift({},{offset})", base.to_text(alphabet)),
            Self::Image { map, base } => format!("{}[{}]", map.name(), base.to_text(alphabet)),
        }
    }
}

impl fmt::Debug for InfiniteWordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EventuallyPeriodic { transient, period } => f
                .debug_struct("EventuallyPeriodic")
                .field("transient", &transient.as_slice())
                .field("period", &period.as_slice())
                .finish(),
            Self::SubstitutionOrbit { rule, seed, .. } => f
                .debug_struct("SubstitutionOrbit")
                .field("rule", &rule.name())
                .field("seed", seed)
                .finish(),
            Self::ExplicitStream(_) => f.write_str("ExplicitStream(..)"),
            Self::Shifted { base, offset } => f
                .debug_struct("Shifted")
                .field("base", base)
                .field("offset", offset)
                .finish(),
            Self::Image { map, base } => f
                .debug_struct("Image")
                .field("map", &map.name())
                .field("base", base)
                .finish(),
        }
    }
}

/// `σ^n(x)`. Eventually periodic words stay in closed form.
pub fn shift(x: &InfiniteWordSpec, n: usize) -> InfiniteWordSpec {
    if n == 0 {
        return x.clone();
    }
    match x {
        InfiniteWordSpec::EventuallyPeriodic { transient, period } => {
            if n <= transient.len() {
                InfiniteWordSpec::EventuallyPeriodic {
                    transient: Word(transient[n..].to_vec()),
                    period: period.clone(),
                }
            } else {
                let rot = (n - transient.len()) % period.len();
                let mut rotated = period[rot..].to_vec();
                rotated.extend_from_slice(&period[..rot]);
                InfiniteWordSpec::EventuallyPeriodic {
                    transient: Word::empty(),
                    period: Word(rotated),
                }
            }
        }
        InfiniteWordSpec::Shifted { base, offset } => InfiniteWordSpec::Shifted {
            base: base.clone(),
            offset: offset + n,
        },
        other => InfiniteWordSpec::Shifted {
            base: Box::new(other.clone()),
            offset: n,
        },
    }
}

/// `2^-m` where `m` is the first index at which `x` and `y` differ, or 0
/// when they agree on `[0, max_len)`. A zero only means "equal as far as
/// inspected".
pub fn cantor_distance<S: Scalar>(
    x: &InfiniteWordSpec,
    y: &InfiniteWordSpec,
    max_len: usize,
) -> Result<S> {
    let (px, py) = (x.prefix(max_len)?, y.prefix(max_len)?);
    Ok(match px.iter().zip(py.iter()).position(|(a, b)| a != b) {
        Some(m) => S::pow2_neg(m),
        None => S::zero(),
    })
}

/// Parses `t(p)^inf` or `fix(<rule>,<seed>)`. `resolve` maps rule names to
/// substitutions.
pub fn parse_spec(
    text: &str,
    alphabet: &Alphabet,
    resolve: impl Fn(&str) -> Option<Arc<DillMap>>,
) -> Result<InfiniteWordSpec> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix("fix(").and_then(|s| s.strip_suffix(')')) {
        let (name, seed) = inner
            .split_once(',')
            .ok_or_else(|| Error::SpecParse(format!("expected fix(<rule>,<seed>), got {text:?}")))?;
        let rule = resolve(name.trim())
            .ok_or_else(|| Error::SpecParse(format!("unknown rule {:?}", name.trim())))?;
        if rule.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "rule {} uses glyphs {:?}, expected {:?}",
                rule.name(),
                rule.alphabet().glyphs().iter().collect::<String>(),
                alphabet.glyphs().iter().collect::<String>()
            )));
        }
        let mut seed_chars = seed.trim().chars();
        let seed = match (seed_chars.next(), seed_chars.next()) {
            (Some(c), None) => alphabet.letter(c)?,
            _ => return Err(Error::SpecParse(format!("seed must be one glyph, got {seed:?}"))),
        };
        return InfiniteWordSpec::fixed_point(rule, seed);
    }
    let body = text
        .strip_suffix(")^inf")
        .ok_or_else(|| Error::SpecParse(format!("expected t(p)^inf or fix(..), got {text:?}")))?;
    let (transient, period) = body
        .split_once('(')
        .ok_or_else(|| Error::SpecParse(format!("missing '(' in {text:?}")))?;
    InfiniteWordSpec::periodic(alphabet.parse_word(transient)?, alphabet.parse_word(period)?)
}
