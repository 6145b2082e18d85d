use std::collections::{BTreeMap, HashSet};

use super::{Literal, Presentation};

/// A pointed square (a, b, a', b'), read as the relator word a b a' b'.
pub type Square = [Literal; 4];

pub fn sym_h(s: &Square) -> Square {
    [s[0].inv(), s[3].inv(), s[2].inv(), s[1].inv()]
}

pub fn sym_r(s: &Square) -> Square {
    [s[2], s[3], s[0], s[1]]
}

pub fn sym_v(s: &Square) -> Square {
    [s[2].inv(), s[1].inv(), s[0].inv(), s[3].inv()]
}

/// Reads a square of F(p,q) as a square of F(q,p).
pub fn phi(s: &Square) -> Square {
    [s[3].inv(), s[2].inv(), s[1].inv(), s[0].inv()]
}

/// The square and its three companions, in the order S, S_H, S_R, S_V.
pub fn orbit(s: &Square) -> [Square; 4] {
    [*s, sym_h(s), sym_r(s), sym_v(s)]
}

/// Rewrites a square so that its first color is the smaller one.
pub fn normalize(s: &Square) -> Square {
    if s[0].color > s[1].color {
        phi(s)
    } else {
        *s
    }
}

#[derive(Clone, Debug)]
pub struct SquareSet {
    pub k: usize,
    /// F(p,q) for p < q, each sorted.
    pub components: BTreeMap<(usize, usize), Vec<Square>>,
    members: HashSet<Square>,
    /// Input relators that landed in an orbit already produced by an earlier one.
    pub warnings: Vec<String>,
}

impl SquareSet {
    /// Membership for a square in either orientation.
    pub fn contains(&self, s: &Square) -> bool {
        self.members.contains(&normalize(s))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn component(&self, p: usize, q: usize) -> &[Square] {
        self.components.get(&(p, q)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Square> {
        self.components.values().flatten()
    }

    /// Every square in both orientations: F(p,q) members and their images in F(q,p).
    pub fn oriented(&self) -> impl Iterator<Item = Square> + '_ {
        self.iter().flat_map(|s| [*s, phi(s)])
    }
}

pub fn close_square_set(p: &Presentation) -> SquareSet {
    let mut members = HashSet::new();
    let mut warnings = Vec::new();
    for (i, r) in p.relators.iter().enumerate() {
        let r = normalize(r);
        if members.contains(&r) {
            warnings.push(format!(
                "relator {} ({}) lies in the orbit of an earlier relator",
                i + 1,
                p.square_names(&r).join(" ")
            ));
            continue;
        }
        members.extend(orbit(&r));
    }
    let mut components: BTreeMap<(usize, usize), Vec<Square>> = BTreeMap::new();
    for a in 0..p.k() {
        for b in a + 1..p.k() {
            components.insert((a, b), Vec::new());
        }
    }
    for s in &members {
        components
            .entry((s[0].color(), s[1].color()))
            .or_default()
            .push(*s);
    }
    for v in components.values_mut() {
        v.sort();
    }
    SquareSet {
        k: p.k(),
        components,
        members,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::make_free_product;

    fn lit(c: usize, i: usize) -> Literal {
        Literal::new(c, i, false)
    }

    #[test]
    fn symmetries_form_klein_four_group() {
        let s = [lit(0, 0), lit(1, 0), lit(0, 1), lit(1, 1)];
        for f in [sym_h, sym_r, sym_v] {
            assert_eq!(f(&f(&s)), s);
        }
        assert_eq!(sym_h(&sym_r(&s)), sym_v(&s));
        assert_eq!(phi(&phi(&s)), s);
    }

    #[test]
    fn single_relator_gives_four_squares() {
        let mut p = make_free_product(&[2, 2]).unwrap();
        p.relators.truncate(1);
        let set = close_square_set(&p);
        assert_eq!(set.len(), 4);
        let [a, b, ai, bi] = p.relators[0];
        assert!(set.contains(&[a, b, ai, bi]));
        // cyclic rotation of the relator word, read in F(q,p)
        assert!(set.contains(&[b, ai, bi, a]));
    }

    #[test]
    fn orbit_collision_is_a_warning() {
        let mut p = make_free_product(&[2, 2]).unwrap();
        let r = p.relators[0];
        p.relators.push(sym_r(&r));
        let set = close_square_set(&p);
        assert_eq!(set.warnings.len(), 1);
        assert_eq!(set.len(), 16);
    }

    #[test]
    fn reversed_color_order_is_normalized() {
        let p = make_free_product(&[2, 2]).unwrap();
        let s = p.relators[3];
        assert!(close_square_set(&p).contains(&phi(&s)));
        assert_eq!(normalize(&phi(&s)), s);
    }
}
