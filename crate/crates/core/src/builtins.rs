//! Rules shipped with the library, stored as rule files under `rules/`.

use std::sync::Arc;

use crate::dillmap::{parse_rule, DillMap};

const SOURCES: [(&str, &str); 9] = [
    ("thue_morse", include_str!("../rules/thue_morse.rule")),
    ("fibonacci", include_str!("../rules/fibonacci.rule")),
    ("doubling", include_str!("../rules/doubling.rule")),
    ("cantor", include_str!("../rules/cantor.rule")),
    ("xor", include_str!("../rules/xor.rule")),
    ("min", include_str!("../rules/min.rule")),
    ("min_doubling", include_str!("../rules/min_doubling.rule")),
    ("one_to_1_00", include_str!("../rules/one_to_1_00.rule")),
    ("zero_keep", include_str!("../rules/zero_keep.rule")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(name, _)| *name)
}

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn get(name: &str) -> Option<Arc<DillMap>> {
    let text = source(name)?;
    Some(Arc::new(parse_rule(name, text).expect("built-in rules parse")))
}

/// Every built-in, in a fixed order.
pub fn all() -> Vec<Arc<DillMap>> {
    names().map(|n| get(n).expect("listed")).collect()
}
