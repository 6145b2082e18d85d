//! Presentations of k-cube groups.
//!
//! A presentation lists k colors of generators and a set of four-letter
//! relators. Each relator is a representative of a geometric square; the
//! full pointed-square set is obtained with [`close_square_set`].
//!
//! # File format
//!
//! ```text
//! {
//!   "name": "example",
//!   "colors": [["a1", "a2"], ["b1", "b2"]],
//!   "relators": [["a1", "b1", "-a1", "-b1"], ...]
//! }
//! ```
//!
//! A leading `-` marks the formal inverse. Colors list generators only.
//! Unknown keys and trailing characters after the object are rejected.

mod axioms;
mod squares;

pub use axioms::{verify_vh_axioms, AxiomReport, ComponentSize, Witness};
pub use squares::{close_square_set, normalize, orbit, phi, sym_h, sym_r, sym_v, Square, SquareSet};

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};

/// A generator or its formal inverse. Ordering is by color, then index, then sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub color: u16,
    pub index: u16,
    pub inverse: bool,
}

impl Literal {
    pub fn new(color: usize, index: usize, inverse: bool) -> Self {
        Literal {
            color: color as u16,
            index: index as u16,
            inverse,
        }
    }

    pub fn inv(self) -> Self {
        Literal {
            inverse: !self.inverse,
            ..self
        }
    }

    pub fn color(self) -> usize {
        self.color as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    /// Generator names per color; the literal set of color i has twice this length.
    pub colors: Vec<Vec<String>>,
    pub relators: Vec<Square>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    name: String,
    colors: Vec<Vec<String>>,
    relators: Vec<[String; 4]>,
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let raw: RawPresentation = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let lookup = name_lookup(&raw.colors)?;
    let resolve = |s: &str| -> Result<Literal> {
        let (inverse, name) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let &(c, i) = lookup
            .get(name)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
        Ok(Literal::new(c, i, inverse))
    };
    let mut relators = Vec::with_capacity(raw.relators.len());
    for (index, word) in raw.relators.iter().enumerate() {
        let mut sq = [Literal::new(0, 0, false); 4];
        for (slot, s) in sq.iter_mut().zip(word.iter()) {
            *slot = resolve(s)?;
        }
        if !alternates(&sq) {
            return Err(Error::NotAlternating {
                index,
                word: word.join(" "),
            });
        }
        relators.push(sq);
    }
    Ok(Presentation {
        name: raw.name,
        colors: raw.colors,
        relators,
    })
}

fn name_lookup(colors: &[Vec<String>]) -> Result<HashMap<&str, (usize, usize)>> {
    if colors.is_empty() {
        return Err(Error::InvalidPresentation("no colors".into()));
    }
    let mut lookup = HashMap::new();
    for (c, gens) in colors.iter().enumerate() {
        if gens.is_empty() {
            return Err(Error::InvalidPresentation(format!("color {} is empty", c + 1)));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.starts_with('-') {
                return Err(Error::OddColorSize {
                    color: c + 1,
                    name: g.clone(),
                });
            }
            if g.is_empty() || g.chars().any(|ch| ch.is_whitespace()) {
                return Err(Error::InvalidName(g.clone()));
            }
            if lookup.insert(g.as_str(), (c, i)).is_some() {
                return Err(Error::DuplicateGenerator(g.clone()));
            }
        }
    }
    Ok(lookup)
}

fn alternates(sq: &Square) -> bool {
    sq[0].color == sq[2].color && sq[1].color == sq[3].color && sq[0].color != sq[1].color
}

impl Presentation {
    pub fn k(&self) -> usize {
        self.colors.len()
    }

    /// |E_i|, counting inverses.
    pub fn size(&self, color: usize) -> usize {
        2 * self.colors[color].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.k()).map(|c| self.size(c)).collect()
    }

    /// True when every color has at least four literals.
    pub fn is_thick(&self) -> bool {
        self.sizes().iter().all(|&s| s >= 4)
    }

    /// All literals of a color in ascending order.
    pub fn literals(&self, color: usize) -> Vec<Literal> {
        let mut out = Vec::with_capacity(self.size(color));
        for i in 0..self.colors[color].len() {
            out.push(Literal::new(color, i, false));
            out.push(Literal::new(color, i, true));
        }
        out
    }

    pub fn literal_name(&self, l: Literal) -> String {
        let base = &self.colors[l.color()][l.index as usize];
        if l.inverse {
            format!("-{base}")
        } else {
            base.clone()
        }
    }

    pub fn square_names(&self, s: &Square) -> Vec<String> {
        s.iter().map(|&l| self.literal_name(l)).collect()
    }

    pub fn generator_count(&self) -> usize {
        self.colors.iter().map(Vec::len).sum()
    }

    /// Serializes to the presentation file format; `parse_presentation` inverts it.
    pub fn to_json(&self) -> String {
        let q = |s: &str| serde_json::to_string(s).expect("string serialization");
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"name\": {},", q(&self.name));
        let colors: Vec<String> = self
            .colors
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|g| q(g)).collect::<Vec<_>>().join(", ")))
            .collect();
        let _ = writeln!(out, "  \"colors\": [{}],", colors.join(", "));
        out.push_str("  \"relators\": [");
        for (i, r) in self.relators.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            let names: Vec<String> = self.square_names(r).iter().map(|n| q(n)).collect();
            let _ = write!(out, "    [{}]", names.join(", "));
        }
        if !self.relators.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }
}

/// Presentation of F_{r1} x ... x F_{rk}: one commutator per cross-color generator pair.
pub fn make_free_product(ranks: &[usize]) -> Result<Presentation> {
    if ranks.is_empty() {
        return Err(Error::InvalidArgument("at least one factor is required".into()));
    }
    if let Some(&r) = ranks.iter().find(|&&r| r < 2) {
        return Err(Error::InvalidArgument(format!(
            "free factor of rank {r}: every rank must be at least 2"
        )));
    }
    let letter = |c: usize| -> String {
        if ranks.len() <= 26 {
            ((b'a' + c as u8) as char).to_string()
        } else {
            format!("g{}_", c + 1)
        }
    };
    let colors: Vec<Vec<String>> = ranks
        .iter()
        .enumerate()
        .map(|(c, &r)| (1..=r).map(|i| format!("{}{i}", letter(c))).collect())
        .collect();
    let mut relators = Vec::new();
    for p in 0..ranks.len() {
        for q in p + 1..ranks.len() {
            for i in 0..ranks[p] {
                for j in 0..ranks[q] {
                    let x = Literal::new(p, i, false);
                    let y = Literal::new(q, j, false);
                    relators.push([x, y, x.inv(), y.inv()]);
                }
            }
        }
    }
    let name = format!(
        "free-product-{}",
        ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("-")
    );
    Ok(Presentation {
        name,
        colors,
        relators,
    })
}

/// Drops the given colors (0-based) and every relator that uses one of them.
pub fn extract_subpresentation(p: &Presentation, removed: &BTreeSet<usize>) -> Result<Presentation> {
    if let Some(&c) = removed.iter().find(|&&c| c >= p.k()) {
        return Err(Error::InvalidArgument(format!("no color {}", c + 1)));
    }
    if removed.len() >= p.k() {
        return Err(Error::InvalidArgument("cannot remove every color".into()));
    }
    let mut remap = vec![None; p.k()];
    let mut colors = Vec::new();
    for c in 0..p.k() {
        if !removed.contains(&c) {
            remap[c] = Some(colors.len());
            colors.push(p.colors[c].clone());
        }
    }
    let relators = p
        .relators
        .iter()
        .filter_map(|r| {
            let mut out = *r;
            for l in out.iter_mut() {
                l.color = remap[l.color()]? as u16;
            }
            Some(out)
        })
        .collect();
    let kept: Vec<String> = (0..p.k())
        .filter(|c| !removed.contains(c))
        .map(|c| (c + 1).to_string())
        .collect();
    Ok(Presentation {
        name: format!("{}[colors {}]", p.name, kept.join(",")),
        colors,
        relators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{"name": "t", "colors": [["a"], ["b"]], "relators": [["a", "b", "-a", "-b"]]}"#;

    #[test]
    fn parses_and_resolves_literals() {
        let p = parse_presentation(TINY).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.sizes(), vec![2, 2]);
        assert_eq!(p.relators[0][2], Literal::new(0, 0, true));
    }

    #[test]
    fn empty_relator_set_parses() {
        let p = parse_presentation(r#"{"name": "e", "colors": [["a"], ["b"]], "relators": []}"#).unwrap();
        assert!(p.relators.is_empty());
    }

    #[test]
    fn rejects_trailing_garbage() {
        let text = format!("{TINY} x");
        assert!(matches!(parse_presentation(&text), Err(Error::Syntax { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_presentation("{\n  \"name\": 3\n}").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_generator() {
        let text = r#"{"name": "t", "colors": [["a"], ["b"]], "relators": [["a", "c", "-a", "-b"]]}"#;
        assert!(matches!(parse_presentation(text), Err(Error::UnknownGenerator(g)) if g == "c"));
    }

    #[test]
    fn rejects_non_alternating_relator() {
        let text = r#"{"name": "t", "colors": [["a", "x"], ["b"]], "relators": [["a", "x", "-a", "-b"]]}"#;
        assert!(matches!(parse_presentation(text), Err(Error::NotAlternating { .. })));
    }

    #[test]
    fn rejects_inverse_in_color_list() {
        let text = r#"{"name": "t", "colors": [["a", "-a"], ["b"]], "relators": []}"#;
        assert!(matches!(parse_presentation(text), Err(Error::OddColorSize { .. })));
    }

    #[test]
    fn rejects_duplicate_names() {
        let text = r#"{"name": "t", "colors": [["a"], ["a"]], "relators": []}"#;
        assert!(matches!(parse_presentation(text), Err(Error::DuplicateGenerator(_))));
    }

    #[test]
    fn free_product_counts() {
        for (ranks, gens, rels) in [(vec![2, 2, 2], 6, 12), (vec![3, 3, 3], 9, 27), (vec![2, 2, 2, 2], 8, 24)] {
            let p = make_free_product(&ranks).unwrap();
            assert_eq!(p.generator_count(), gens);
            assert_eq!(p.relators.len(), rels);
        }
        assert!(make_free_product(&[2, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        assert_eq!(parse_presentation(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn subpresentation_of_free_product() {
        let p = make_free_product(&[2, 3, 4]).unwrap();
        let sub = extract_subpresentation(&p, &BTreeSet::from([1])).unwrap();
        let direct = make_free_product(&[2, 4]).unwrap();
        assert_eq!(sub.relators, direct.relators);
        assert_eq!(sub.sizes(), direct.sizes());
        let free = extract_subpresentation(&p, &BTreeSet::from([1, 2])).unwrap();
        assert!(free.relators.is_empty());
        assert!(extract_subpresentation(&p, &BTreeSet::from([0, 1, 2])).is_err());
    }
}
