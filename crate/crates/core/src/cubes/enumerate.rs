use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{label_count, u_slot, v_slot, w_slot, CubeSet, PointedCube};
use crate::error::{Error, Result};
use crate::par::IntoMaybeParallelIterator;
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;
use crate::presentation::{close_square_set, verify_vh_axioms, Literal, Presentation, Square, SquareSet};

/// One membership condition: the four slots, each possibly read inverted.
#[derive(Clone, Copy, Debug)]
struct Constraint {
    slots: [(usize, bool); 4],
}

/// Conditions (a)–(c) for an n-cube.
fn constraints(n: usize) -> Vec<Constraint> {
    let m = n - 1;
    let mut out = Vec::new();
    let c = |slots| Constraint { slots };
    for l in 0..1usize << m {
        for jj in 0..m {
            if l >> jj & 1 == 1 {
                continue;
            }
            let lj = l | 1 << jj;
            out.push(c([
                (u_slot(n, l), false),
                (v_slot(n, jj, l), false),
                (u_slot(n, lj), false),
                (w_slot(n, jj, l), false),
            ]));
        }
        for ii in 0..m {
            for jj in 0..m {
                if ii == jj || l >> ii & 1 == 1 || l >> jj & 1 == 1 {
                    continue;
                }
                let (li, lj) = (l | 1 << ii, l | 1 << jj);
                out.push(c([
                    (v_slot(n, ii, l), true),
                    (v_slot(n, jj, l), false),
                    (w_slot(n, ii, lj), true),
                    (w_slot(n, jj, li), false),
                ]));
                out.push(c([
                    (w_slot(n, ii, l), false),
                    (w_slot(n, jj, l), true),
                    (v_slot(n, ii, lj), false),
                    (v_slot(n, jj, li), true),
                ]));
            }
        }
    }
    out
}

/// Squares keyed by two cyclically adjacent letters: (position, letter, next letter).
struct AdjacentIndex(HashMap<(u8, Literal, Literal), Square>);

impl AdjacentIndex {
    fn new(set: &SquareSet) -> Self {
        let mut map = HashMap::new();
        for s in set.oriented() {
            for k in 0..4 {
                map.entry((k as u8, s[k], s[(k + 1) % 4])).or_insert(s);
            }
        }
        AdjacentIndex(map)
    }

    fn get(&self, k: usize, a: Literal, b: Literal) -> Option<&Square> {
        self.0.get(&(k as u8, a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureKind {
    /// Two known adjacent letters of a forced face lie in no square.
    MissingSquare,
    /// Propagation stalled with labels left open.
    Undetermined,
    /// Two propagation paths disagree, or a closed face is not a square.
    Inconsistent,
}

#[derive(Clone, Debug)]
struct CornerFailure {
    corner: Vec<Literal>,
    kind: FailureKind,
    face: Option<[Option<Literal>; 4]>,
}

fn read(vals: &[Option<Literal>], c: &Constraint) -> [Option<Literal>; 4] {
    c.slots.map(|(s, inv)| vals[s].map(|l| if inv { l.inv() } else { l }))
}

fn propagate(
    n: usize,
    cons: &[Constraint],
    index: &AdjacentIndex,
    set: &SquareSet,
    directions: &[usize],
    corner: &[Literal],
) -> std::result::Result<PointedCube, CornerFailure> {
    let fail = |kind, face| CornerFailure {
        corner: corner.to_vec(),
        kind,
        face,
    };
    let mut vals: Vec<Option<Literal>> = vec![None; label_count(n)];
    vals[u_slot(n, 0)] = Some(corner[0]);
    for jj in 0..n - 1 {
        vals[v_slot(n, jj, 0)] = Some(corner[jj + 1]);
    }
    let mut progress = true;
    while progress {
        progress = false;
        for c in cons {
            let cur = read(&vals, c);
            if cur.iter().all(Option::is_some) {
                continue;
            }
            let Some(k) = (0..4).find(|&k| cur[k].is_some() && cur[(k + 1) % 4].is_some()) else {
                continue;
            };
            let sq = match index.get(k, cur[k].unwrap(), cur[(k + 1) % 4].unwrap()) {
                Some(s) => *s,
                None => return Err(fail(FailureKind::MissingSquare, Some(cur))),
            };
            for pos in 0..4 {
                let (slot, inv) = c.slots[pos];
                let want = if inv { sq[pos].inv() } else { sq[pos] };
                match vals[slot] {
                    Some(have) if have != want => return Err(fail(FailureKind::Inconsistent, Some(cur))),
                    Some(_) => {}
                    None => {
                        vals[slot] = Some(want);
                        progress = true;
                    }
                }
            }
        }
    }
    if vals.iter().any(Option::is_none) {
        return Err(fail(FailureKind::Undetermined, None));
    }
    let labels: Vec<Literal> = vals.into_iter().map(Option::unwrap).collect();
    for c in cons {
        let face = c.slots.map(|(s, inv)| if inv { labels[s].inv() } else { labels[s] });
        if !set.contains(&face) {
            return Err(fail(FailureKind::Inconsistent, Some(face.map(Some))));
        }
    }
    Ok(PointedCube {
        directions: directions.to_vec(),
        labels,
    })
}

fn corners(p: &Presentation, directions: &[usize]) -> Vec<Vec<Literal>> {
    let mut out: Vec<Vec<Literal>> = vec![Vec::new()];
    for &d in directions {
        let lits = p.literals(d);
        out = out
            .into_iter()
            .flat_map(|pre| {
                lits.iter().map(move |&l| {
                    let mut v = pre.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

/// Subsets of {0..k} of size n in lexicographic order.
pub fn direction_sets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for d in start..k {
            cur.push(d);
            rec(d + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, n, &mut Vec::new(), &mut out);
    out
}

fn enumerate_raw(
    p: &Presentation,
    set: &SquareSet,
    directions: &[usize],
) -> (Vec<PointedCube>, Vec<CornerFailure>) {
    let n = directions.len();
    match n {
        1 => {
            let cubes = p
                .literals(directions[0])
                .into_iter()
                .map(|l| PointedCube {
                    directions: directions.to_vec(),
                    labels: vec![l],
                })
                .collect();
            return (cubes, Vec::new());
        }
        2 => {
            let cubes = set
                .component(directions[0], directions[1])
                .iter()
                .map(|s| PointedCube {
                    directions: directions.to_vec(),
                    labels: vec![s[0], s[2], s[1], s[3]],
                })
                .collect();
            return (cubes, Vec::new());
        }
        _ => {}
    }
    let cons = constraints(n);
    let index = AdjacentIndex::new(set);
    let results: Vec<_> = corners(p, directions)
        .into_maybe_par_iter()
        .map(|corner| propagate(n, &cons, &index, set, directions, &corner))
        .collect();
    let mut cubes = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(c) => cubes.push(c),
            Err(f) => failures.push(f),
        }
    }
    (cubes, failures)
}

fn describe(p: &Presentation, directions: &[usize], f: &CornerFailure) -> String {
    let corner: Vec<String> = f.corner.iter().map(|&l| p.literal_name(l)).collect();
    let dirs: Vec<String> = directions.iter().map(|d| (d + 1).to_string()).collect();
    let mut s = format!(
        "directions {{{}}} corner (u, v_j) = ({}): {:?}",
        dirs.join(","),
        corner.join(", "),
        f.kind
    );
    if let Some(face) = &f.face {
        let names: Vec<String> = face
            .iter()
            .map(|l| l.map(|l| p.literal_name(l)).unwrap_or_else(|| "?".into()))
            .collect();
        s.push_str(&format!(" at face [{}]", names.join(" ")));
    }
    s
}

fn require_squares(p: &Presentation) -> Result<()> {
    let r = verify_vh_axioms(p);
    if !(r.c1_pass && r.c2_pass) {
        return Err(Error::InvalidPresentation(
            "cube enumeration needs C1 and C2 to hold".into(),
        ));
    }
    Ok(())
}

/// Pointed cubes on one direction set (sorted, distinct colors).
pub fn enumerate_cubes_in(p: &Presentation, directions: &[usize]) -> Result<CubeSet> {
    let n = directions.len();
    if n == 0 || directions.windows(2).any(|w| w[0] >= w[1]) || directions.iter().any(|&d| d >= p.k()) {
        return Err(Error::InvalidArgument(format!("bad direction set {directions:?}")));
    }
    require_squares(p)?;
    let set = close_square_set(p);
    let (cubes, failures) = enumerate_raw(p, &set, directions);
    if let Some(f) = failures.first() {
        return Err(Error::C3Violation {
            dimension: n,
            detail: format!("{} ({} corners fail)", describe(p, directions, f), failures.len()),
        });
    }
    Ok(CubeSet::new(n, cubes))
}

/// All pointed n-cubes over every n-element direction set.
pub fn enumerate_cubes(p: &Presentation, n: usize) -> Result<CubeSet> {
    if n == 0 || n > p.k() {
        return Err(Error::InvalidArgument(format!("dimension {n} outside 1..={}", p.k())));
    }
    require_squares(p)?;
    let set = close_square_set(p);
    let mut all = Vec::new();
    for dirs in direction_sets(p.k(), n) {
        let (cubes, failures) = enumerate_raw(p, &set, &dirs);
        if let Some(f) = failures.first() {
            return Err(Error::C3Violation {
                dimension: n,
                detail: format!("{} ({} corners fail)", describe(p, &dirs, f), failures.len()),
            });
        }
        all.extend(cubes);
    }
    Ok(CubeSet::new(n, all))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    pub cubes: usize,
    /// Sum over direction sets of the product of color sizes.
    pub expected: usize,
    pub failed_corners: usize,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C3Report {
    pub pass: bool,
    pub dimensions: Vec<DimensionReport>,
}

/// Runs the extension for n = 3..=k and collects failing corners.
pub fn check_c3(p: &Presentation) -> C3Report {
    let set = close_square_set(p);
    let sizes = p.sizes();
    let mut dims = Vec::new();
    for n in 3..=p.k() {
        let mut cubes = 0;
        let mut expected = 0;
        let mut failed = 0;
        let mut witnesses = Vec::new();
        for dirs in direction_sets(p.k(), n) {
            expected += dirs.iter().map(|&d| sizes[d]).product::<usize>();
            let (c, f) = enumerate_raw(p, &set, &dirs);
            cubes += c.len();
            failed += f.len();
            for x in f.iter().take(5usize.saturating_sub(witnesses.len())) {
                witnesses.push(describe(p, &dirs, x));
            }
        }
        dims.push(DimensionReport {
            n,
            cubes,
            expected,
            failed_corners: failed,
            pass: failed == 0 && cubes == expected,
            witnesses,
        });
    }
    C3Report {
        pass: dims.iter().all(|d| d.pass),
        dimensions: dims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::make_free_product;

    #[test]
    fn constraint_counts() {
        // (a): m 2^(m-1); (b),(c): m(m-1) 2^(m-2) each
        assert_eq!(constraints(3).len(), 4 + 2 * 2);
        assert_eq!(constraints(4).len(), 12 + 2 * 12);
    }

    #[test]
    fn free_product_counts() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        assert_eq!(enumerate_cubes(&p, 3).unwrap().len(), 64);
        assert_eq!(enumerate_cubes(&p, 2).unwrap().len(), 3 * 16);
        assert_eq!(enumerate_cubes(&p, 1).unwrap().len(), 12);
        let q = make_free_product(&[2, 3, 2]).unwrap();
        assert_eq!(enumerate_cubes(&q, 3).unwrap().len(), 4 * 6 * 4);
    }

    #[test]
    fn deleted_orbit_breaks_extension() {
        let mut p = make_free_product(&[2, 2, 2]).unwrap();
        p.relators.remove(5);
        let r = check_c3(&p);
        assert!(!r.pass);
        assert!(!r.dimensions[0].witnesses.is_empty());
    }

    #[test]
    fn direction_sets_are_lexicographic() {
        assert_eq!(direction_sets(4, 3), vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
    }
}
