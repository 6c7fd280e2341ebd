//! Cross-module properties on random rules and eventually periodic words.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use dillscope_core::analysis::{classify_besicovitch, classify_feldman, components, BesicovitchStatus};
use dillscope_core::dillmap::{apply, apply_as_spec, iterate, iterate_spec, parse_rule, rule_to_text, LocalRule};
use dillscope_core::metrics::{besicovitch_exact_periodic, curve};
use dillscope_core::{builtins, Alphabet, Curve, DillMap, DistanceKind, InfiniteWordSpec, Letter, Rational, Word};

fn word(k: u8, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0..k, 0..=max)
}

fn periodic(k: u8) -> impl Strategy<Value = InfiniteWordSpec> {
    (word(k, 5), prop::collection::vec(0..k, 1..=6))
        .prop_map(|(t, p)| InfiniteWordSpec::periodic(Word::new(t), Word::new(p)).unwrap())
}

/// Rules on `k` letters with diameter `s` and image lengths `1..=3`.
fn rule(k: u8, s: usize, uniform: bool) -> impl Strategy<Value = Arc<DillMap>> {
    let n = (k as usize).pow(s as u32);
    let lens = if uniform {
        (1usize..=3).prop_map(move |l| vec![l; n]).boxed()
    } else {
        prop::collection::vec(1usize..=3, n).boxed()
    };
    lens.prop_flat_map(move |lens| lens.into_iter().map(|l| prop::collection::vec(0..k, l)).collect::<Vec<_>>())
        .prop_map(move |images| {
            let table = images.into_iter().map(Word::new).collect();
            Arc::new(DillMap::new("r", LocalRule::new(Alphabet::new(k as usize).unwrap(), s, table).unwrap()))
        })
}

fn ratio(n: usize, d: usize) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rule_text_round_trips(map in (1usize..=2).prop_flat_map(|s| rule(3, s, false))) {
        let back = parse_rule("r", &rule_to_text(&map)).unwrap();
        prop_assert_eq!(back.rule(), map.rule());
    }

    #[test]
    fn closed_form_image_matches_prefix(map in rule(2, 2, false), x in periodic(2)) {
        let image = apply_as_spec(&map, &x);
        prop_assert!(image.as_periodic().is_some());
        prop_assert_eq!(image.prefix(200).unwrap(), apply(&map, &x, 200).unwrap());
    }

    #[test]
    fn closed_form_orbit_matches_prefix(map in rule(2, 2, false), x in periodic(2), t in 0usize..4) {
        let spec = iterate_spec(&map, &x, t, 1 << 24).unwrap();
        prop_assert_eq!(spec.prefix(128).unwrap(), iterate(&map, &x, t, 128).unwrap());
    }

    /// Uniform diameter-1 maps scale Besicovitch densities by factors between
    /// the smallest and largest image distance over the image length.
    #[test]
    fn diameter_one_sandwich(map in rule(3, 1, true), x in periodic(3), y in periodic(3)) {
        let report = classify_besicovitch(&map);
        prop_assert_eq!(report.status, BesicovitchStatus::WellDefinedUniform);
        let f = map.lower_norm();
        let d = besicovitch_exact_periodic(&x, &y).unwrap();
        let image = besicovitch_exact_periodic(&apply_as_spec(&map, &x), &apply_as_spec(&map, &y)).unwrap();
        prop_assert!(image <= ratio(report.maxd.unwrap(), f) * &d);
        prop_assert!(ratio(report.mind.unwrap(), f) * &d <= image);
    }

    /// Any uniform map satisfies the upper half with coefficient s*maxd/f.
    #[test]
    fn uniform_upper_bound(map in rule(2, 2, true), x in periodic(2), y in periodic(2)) {
        let lipschitz = classify_besicovitch(&map).lipschitz.unwrap();
        let d = besicovitch_exact_periodic(&x, &y).unwrap();
        let image = besicovitch_exact_periodic(&apply_as_spec(&map, &x), &apply_as_spec(&map, &y)).unwrap();
        prop_assert!(image <= lipschitz * d);
    }

    /// Feldman curves never exceed Besicovitch curves.
    #[test]
    fn levenshtein_below_hamming(x in periodic(3), y in periodic(3)) {
        let lengths = [8, 64, 512];
        let h: Curve = curve(DistanceKind::Hamming, &x, &y, &lengths).unwrap();
        let l: Curve = curve(DistanceKind::Levenshtein, &x, &y, &lengths).unwrap();
        for (a, b) in l.samples.iter().zip(&h.samples) {
            prop_assert!(a.normalized <= b.normalized);
        }
    }

    /// Equicontinuous points of a substitution are exactly its maxal letters.
    #[test]
    fn equicontinuous_points_are_maxal(map in rule(3, 1, false)) {
        let points = classify_feldman(&map).equicontinuous_points.unwrap();
        prop_assert_eq!(points, components(&map).unwrap().maxal);
    }
}

#[test]
fn builtins_survive_text_round_trip() {
    for map in builtins::all() {
        let back = parse_rule(map.name(), &rule_to_text(&map)).unwrap();
        assert_eq!(back.rule(), map.rule(), "{}", map.name());
    }
}
