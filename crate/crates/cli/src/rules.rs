//! Resolving rule arguments and word specs.
//!
//! A rule argument is `builtin:NAME`, a path to a rule file, or the bare name
//! of a built-in when no such file exists.

use std::path::Path;
use std::sync::Arc;

use dillscope_core::dillmap::{parse_rule, DEFAULT_MAX_INPUT};
use dillscope_core::words::parse_spec;
use dillscope_core::{builtins, Alphabet, DillMap, Error, InfiniteWordSpec};

use crate::error::{CliError, CliResult};

pub const MAX_INPUT_ENV: &str = "DILLSCOPE_MAX_INPUT";

pub fn load_rule(arg: &str) -> CliResult<Arc<DillMap>> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtins::get(name).ok_or_else(|| unknown_builtin(name));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
        return parse_rule(name, &text).map(Arc::new).map_err(|e| match e {
            Error::RuleParse { line, msg } => CliError::RuleFile {
                file: arg.to_owned(),
                line,
                msg,
            },
            other => CliError::Core(other),
        });
    }
    builtins::get(arg).ok_or_else(|| CliError::Usage(format!("{arg}: no such rule file or built-in rule")))
}

fn unknown_builtin(name: &str) -> CliError {
    let known: Vec<&str> = builtins::names().collect();
    CliError::Usage(format!("unknown built-in rule {name:?} (known: {})", known.join(", ")))
}

/// Rule lookup for `fix(<rule>,<seed>)` specs; failures read as "unknown".
pub fn resolve(name: &str) -> Option<Arc<DillMap>> {
    load_rule(name).ok()
}

pub fn parse_word_spec(text: &str, alphabet: &Alphabet) -> CliResult<InfiniteWordSpec> {
    Ok(parse_spec(text, alphabet, resolve)?)
}

/// Orbit cap: `DILLSCOPE_MAX_INPUT` when set, else the library default.
pub fn max_input() -> CliResult<u64> {
    match std::env::var(MAX_INPUT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_INPUT_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_INPUT),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_forms() {
        assert_eq!(load_rule("builtin:xor").unwrap().name(), "xor");
        assert_eq!(load_rule("fibonacci").unwrap().name(), "fibonacci");
        assert_eq!(load_rule("builtin:nope").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.rule");
        std::fs::write(&path, "alphabet=01\ndiameter=1\n0 -> 1\n0 -> 0\n").unwrap();
        let arg = path.to_str().unwrap();
        match load_rule(arg).unwrap_err() {
            CliError::RuleFile { file, line, .. } => {
                assert_eq!(file, arg);
                assert_eq!(line, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn file_rule_is_named_after_stem() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("swap.rule");
        std::fs::write(&path, "alphabet=01\ndiameter=1\n0 -> 1\n1 -> 0\n").unwrap();
        assert_eq!(load_rule(path.to_str().unwrap()).unwrap().name(), "swap");
    }

    #[test]
    fn specs_resolve_builtins() {
        let a = Alphabet::binary();
        let x = parse_word_spec("fix(fibonacci,0)", &a).unwrap();
        assert_eq!(a.render(&x.prefix(8).unwrap()), "01001010");
        assert!(parse_word_spec("(2)^inf", &a).is_err());
    }
}
