use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::squares::{close_square_set, normalize, orbit, SquareSet};
use super::{Literal, Presentation};

const MAX_WITNESSES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: String,
    pub detail: String,
}

/// |F(p,q)| with 1-based colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSize {
    pub p: usize,
    pub q: usize,
    pub size: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub c1_pass: bool,
    pub c2_pass: bool,
    pub c1prime_pass: bool,
    /// Every color has at least four literals.
    pub thick: bool,
    pub witnesses: Vec<Witness>,
    pub component_sizes: Vec<ComponentSize>,
    pub warnings: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.c1_pass && self.c2_pass && self.c1prime_pass && self.thick
    }
}

pub fn verify_vh_axioms(p: &Presentation) -> AxiomReport {
    let set = close_square_set(p);
    let mut witnesses = Vec::new();
    let c1_pass = check_c1(p, &mut witnesses);
    let c2_pass = check_c2(p, &set, &mut witnesses);
    let c1prime_pass = check_c1prime(p, &set, &mut witnesses);
    let sizes = p.sizes();
    let thick = sizes.iter().all(|&s| s >= 4);
    if !thick {
        witnesses.push(Witness {
            axiom: "size".into(),
            detail: format!("color sizes {sizes:?}: every color needs at least four literals"),
        });
    }
    let component_sizes = set
        .components
        .iter()
        .map(|(&(a, b), v)| ComponentSize {
            p: a + 1,
            q: b + 1,
            size: v.len(),
            expected: sizes[a] * sizes[b],
        })
        .collect();
    witnesses.truncate(4 * MAX_WITNESSES);
    AxiomReport {
        c1_pass,
        c2_pass,
        c1prime_pass,
        thick,
        witnesses,
        component_sizes,
        warnings: set.warnings.clone(),
    }
}

fn check_c1(p: &Presentation, witnesses: &mut Vec<Witness>) -> bool {
    let mut pass = true;
    for r in &p.relators {
        let o = orbit(&normalize(r));
        let mut distinct = o.to_vec();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != 4 {
            pass = false;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    axiom: "C1".into(),
                    detail: format!(
                        "orbit of [{}] has only {} distinct members",
                        p.square_names(r).join(" "),
                        distinct.len()
                    ),
                });
            }
        }
    }
    pass
}

/// The four cyclically adjacent position pairs of a square.
const PROJECTIONS: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (3, 0)];

fn check_c2(p: &Presentation, set: &SquareSet, witnesses: &mut Vec<Witness>) -> bool {
    let mut pass = true;
    for (&(a, b), comp) in &set.components {
        for &(i, j) in &PROJECTIONS {
            let mut counts: HashMap<(Literal, Literal), usize> = HashMap::new();
            for s in comp {
                *counts.entry((s[i], s[j])).or_default() += 1;
            }
            // positions 0 and 2 carry color a, positions 1 and 3 color b
            let (ci, cj) = if i % 2 == 0 { (a, b) } else { (b, a) };
            let mut failure = None;
            'pairs: for x in p.literals(ci) {
                for y in p.literals(cj) {
                    match counts.get(&(x, y)).copied().unwrap_or(0) {
                        1 => {}
                        n => {
                            failure = Some(format!(
                                "F({},{}) projection to positions ({},{}): pair ({}, {}) occurs {} times",
                                a + 1,
                                b + 1,
                                i + 1,
                                j + 1,
                                p.literal_name(x),
                                p.literal_name(y),
                                n
                            ));
                            break 'pairs;
                        }
                    }
                }
            }
            if let Some(detail) = failure {
                pass = false;
                if witnesses.len() < 2 * MAX_WITNESSES {
                    witnesses.push(Witness {
                        axiom: "C2".into(),
                        detail,
                    });
                }
            }
        }
    }
    pass
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Product sets E_pE_q and E_qE_p as words identified only through the relators.
///
/// Nodes are the words xy (x in E_p, y in E_q) and yx; a square (a, b, a', b')
/// identifies ab with b'^-1 a'^-1. The condition asks that every class holds
/// exactly one word of each kind and never both ab and b^-1 a^-1.
fn check_c1prime(p: &Presentation, set: &SquareSet, witnesses: &mut Vec<Witness>) -> bool {
    let mut pass = true;
    for (&(a, b), comp) in &set.components {
        let (na, nb) = (p.size(a), p.size(b));
        let pos = |l: Literal| 2 * l.index as usize + l.inverse as usize;
        let pq = |x: Literal, y: Literal| pos(x) * nb + pos(y);
        let qp = |y: Literal, x: Literal| na * nb + pos(y) * na + pos(x);
        let mut uf = UnionFind((0..2 * na * nb).collect());
        for s in comp {
            uf.union(pq(s[0], s[1]), qp(s[3].inv(), s[2].inv()));
        }
        let mut class_counts: HashMap<usize, (usize, usize)> = HashMap::new();
        for x in p.literals(a) {
            for y in p.literals(b) {
                class_counts.entry(uf.find(pq(x, y))).or_default().0 += 1;
                class_counts.entry(uf.find(qp(y, x))).or_default().1 += 1;
            }
        }
        if let Some(&(m, n)) = class_counts.values().find(|&&c| c != (1, 1)) {
            pass = false;
            if witnesses.len() < 3 * MAX_WITNESSES {
                witnesses.push(Witness {
                    axiom: "C1'".into(),
                    detail: format!(
                        "colors ({},{}): a class of E_pE_q + E_qE_p holds {m} words xy and {n} words yx",
                        a + 1,
                        b + 1
                    ),
                });
            }
        }
        let mut torsion = None;
        'outer: for x in p.literals(a) {
            for y in p.literals(b) {
                if uf.find(pq(x, y)) == uf.find(qp(y.inv(), x.inv())) {
                    torsion = Some((x, y));
                    break 'outer;
                }
            }
        }
        if let Some((x, y)) = torsion {
            pass = false;
            if witnesses.len() < 3 * MAX_WITNESSES {
                witnesses.push(Witness {
                    axiom: "C1'".into(),
                    detail: format!(
                        "{}{} equals its own inverse (2-torsion)",
                        p.literal_name(x),
                        p.literal_name(y)
                    ),
                });
            }
        }
    }
    pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{make_free_product, parse_presentation};

    #[test]
    fn free_products_pass() {
        for ranks in [vec![2, 2, 2], vec![3, 3, 3], vec![2, 3], vec![2, 2, 2, 2]] {
            let r = verify_vh_axioms(&make_free_product(&ranks).unwrap());
            assert!(r.passed(), "{ranks:?}: {:?}", r.witnesses);
            for c in &r.component_sizes {
                assert_eq!(c.size, c.expected);
            }
        }
    }

    #[test]
    fn empty_relators_fail_c2() {
        let p = parse_presentation(r#"{"name": "e", "colors": [["a"], ["b"]], "relators": []}"#).unwrap();
        let r = verify_vh_axioms(&p);
        assert!(!r.c2_pass);
        assert!(!r.c1prime_pass);
        assert!(!r.thick);
    }

    #[test]
    fn degenerate_orbit_fails_c1() {
        let text = r#"{"name": "d", "colors": [["a", "x"], ["b", "y"]], "relators": [["a", "b", "a", "b"]]}"#;
        let r = verify_vh_axioms(&parse_presentation(text).unwrap());
        assert!(!r.c1_pass);
        assert!(!r.c1prime_pass);
        assert!(r.witnesses.iter().any(|w| w.axiom == "C1"));
    }

    #[test]
    fn missing_orbit_fails_c2_with_witness() {
        let mut p = make_free_product(&[2, 2]).unwrap();
        p.relators.pop();
        let r = verify_vh_axioms(&p);
        assert!(r.c1_pass);
        assert!(!r.c2_pass);
        assert!(!r.c1prime_pass);
        assert!(r.witnesses.iter().any(|w| w.axiom == "C2"));
    }
}
