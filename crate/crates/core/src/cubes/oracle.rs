//! Brute-force cube enumeration, used to cross-check propagation.
//!
//! Searches over all edge labelings of the n-cube with letters of the right
//! colors, pruning as soon as a fully labelled 2-face is not a pointed square.
//! No forcing is used, so the search is exponential; keep it to small inputs.

use super::{CubeSet, PointedCube};
use crate::cubes::enumerate::direction_sets;
use crate::error::{Error, Result};
use crate::presentation::{close_square_set, Literal, Presentation, SquareSet};

struct Shape {
    /// (direction position, base vertex) per edge.
    edges: Vec<(usize, usize)>,
    /// For each edge index, the faces completed once it is assigned.
    closing: Vec<Vec<[(usize, bool); 4]>>,
}

impl Shape {
    fn new(n: usize) -> Self {
        let mut edges = Vec::new();
        for t in 0..n {
            for eps in 0..1usize << n {
                if eps >> t & 1 == 0 {
                    edges.push((t, eps));
                }
            }
        }
        let id = |t: usize, eps: usize| edges.iter().position(|&e| e == (t, eps)).unwrap();
        let mut closing = vec![Vec::new(); edges.len()];
        for d in 0..n {
            for e in d + 1..n {
                for eps in 0..1usize << n {
                    if eps & (1 << d | 1 << e) != 0 {
                        continue;
                    }
                    let face = [
                        (id(d, eps), false),
                        (id(e, eps | 1 << d), false),
                        (id(d, eps | 1 << e), true),
                        (id(e, eps), true),
                    ];
                    let last = face.iter().map(|f| f.0).max().unwrap();
                    closing[last].push(face);
                }
            }
        }
        Shape { edges, closing }
    }
}

fn search(
    shape: &Shape,
    lits: &[Vec<Literal>],
    set: &SquareSet,
    assigned: &mut Vec<Literal>,
    out: &mut Vec<Vec<Literal>>,
) {
    let i = assigned.len();
    if i == shape.edges.len() {
        out.push(assigned.clone());
        return;
    }
    for &l in &lits[shape.edges[i].0] {
        assigned.push(l);
        let ok = shape.closing[i].iter().all(|face| {
            let sq = face.map(|(e, inv)| if inv { assigned[e].inv() } else { assigned[e] });
            set.contains(&sq)
        });
        if ok {
            search(shape, lits, set, assigned, out);
        }
        assigned.pop();
    }
}

/// All edge labelings of cubes on `directions` whose 2-faces are pointed squares.
pub fn brute_force_cubes_in(p: &Presentation, directions: &[usize]) -> Vec<PointedCube> {
    let n = directions.len();
    let set = close_square_set(p);
    let shape = Shape::new(n);
    let lits: Vec<Vec<Literal>> = directions.iter().map(|&d| p.literals(d)).collect();
    let mut found = Vec::new();
    search(&shape, &lits, &set, &mut Vec::new(), &mut found);
    found
        .into_iter()
        .map(|labels| {
            PointedCube::from_edges(directions.to_vec(), |t, eps| {
                labels[shape.edges.iter().position(|&e| e == (t, eps)).unwrap()]
            })
        })
        .collect()
}

/// Largest product of color sizes the oracle accepts.
pub const ORACLE_LIMIT: usize = 10_000;

pub fn brute_force_cubes(p: &Presentation, n: usize) -> Result<CubeSet> {
    if n == 0 || n > p.k() {
        return Err(Error::InvalidArgument(format!("dimension {n} outside 1..={}", p.k())));
    }
    let sizes = p.sizes();
    let mut all = Vec::new();
    for dirs in direction_sets(p.k(), n) {
        let prod: usize = dirs.iter().map(|&d| sizes[d]).product();
        if prod > ORACLE_LIMIT {
            return Err(Error::Unsupported(format!(
                "brute force over {prod} corner configurations (limit {ORACLE_LIMIT})"
            )));
        }
        all.extend(brute_force_cubes_in(p, &dirs));
    }
    Ok(CubeSet::new(n, all))
}
