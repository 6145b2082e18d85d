//! Presentations shipped with the crate.

use crate::error::{Error, Result};
use crate::presentation::{make_free_product, parse_presentation, Presentation};

const BUILTINS: &[(&str, &str)] = &[
    ("gamma357", include_str!("../fixtures/gamma357.json")),
    ("gamma234", include_str!("../fixtures/gamma234.json")),
    ("gamma1234", include_str!("../fixtures/gamma1234.json")),
    ("f2-3", include_str!("../fixtures/f2-3.json")),
    ("f3-3", include_str!("../fixtures/f3-3.json")),
    ("f2-4", include_str!("../fixtures/f2-4.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_text(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A shipped fixture by name, or `free:r1,r2,...` for a product of free groups.
pub fn builtin(name: &str) -> Result<Presentation> {
    if let Some(ranks) = name.strip_prefix("free:") {
        let ranks = ranks
            .split(',')
            .map(|r| r.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad rank list `{ranks}`: {e}")))?;
        return make_free_product(&ranks);
    }
    let text = builtin_text(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown builtin `{name}` (known: {}, free:r1,r2,...)",
            builtin_names().join(", ")
        ))
    })?;
    parse_presentation(text)
}
