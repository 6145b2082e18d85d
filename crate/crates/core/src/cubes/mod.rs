//! Pointed n-cubes.
//!
//! A pointed n-cube with directions D = {p} ⊔ J (p the smallest color) stores
//! the label families u^L (in E_p), v_j^L and w_j^L (in E_j) for subsets L of
//! J. Subsets are bitmasks over positions in J.
//!
//! Geometrically, the cube has vertices ε ∈ {0,1}^n with bit 0 for p and bit
//! t for the (t−1)-th element of J. Every edge carries a literal read in the
//! increasing direction of its coordinate; see [`PointedCube::edge`]. Under
//! this reading conditions (a)–(c) say exactly that every 2-face, read from
//! its lowest vertex, is a pointed square.

mod enumerate;
pub mod oracle;

pub use enumerate::{direction_sets as direction_sets_pub, check_c3, enumerate_cubes, enumerate_cubes_in, C3Report, DimensionReport};

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::presentation::{Literal, Presentation, Square};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedCube {
    /// Sorted color indices; the first is the base direction p.
    pub directions: Vec<usize>,
    /// u^L for all L, then v_j^L per j, then w_j^L per j; L in binary order.
    pub labels: Vec<Literal>,
}

/// Drops bit `jj` from a subset mask, closing the gap.
#[inline]
pub(crate) fn compress(l: usize, jj: usize) -> usize {
    (l & ((1 << jj) - 1)) | ((l >> (jj + 1)) << jj)
}

#[inline]
fn parity(l: usize) -> bool {
    l.count_ones() % 2 == 1
}

/// Number of labels of a pointed n-cube, n·2^(n−1).
pub fn label_count(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        n << (n - 1)
    }
}

/// Slot index of u^L.
#[inline]
pub(crate) fn u_slot(_n: usize, l: usize) -> usize {
    l
}

#[inline]
pub(crate) fn v_slot(n: usize, jj: usize, l: usize) -> usize {
    let m = n - 1;
    (1 << m) + (jj << (m - 1)) + compress(l, jj)
}

#[inline]
pub(crate) fn w_slot(n: usize, jj: usize, l: usize) -> usize {
    let m = n - 1;
    (1 << m) + (m << (m - 1)) + (jj << (m - 1)) + compress(l, jj)
}

/// Slot holding the edge in direction position `t` at vertex `eps` (bit t clear),
/// and whether the stored label is the inverse of the forward reading.
#[inline]
pub(crate) fn edge_slot(n: usize, t: usize, eps: usize) -> (usize, bool) {
    let l = eps >> 1;
    if t == 0 {
        (u_slot(n, l), parity(l))
    } else {
        let jj = t - 1;
        let b = eps & 1 == 1;
        if b != parity(l) {
            (v_slot(n, jj, l), false)
        } else {
            (w_slot(n, jj, l), true)
        }
    }
}

impl PointedCube {
    pub fn n(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> usize {
        self.directions[0]
    }

    pub fn u(&self, l: usize) -> Literal {
        self.labels[u_slot(self.n(), l)]
    }

    /// v_j^L for the `jj`-th element of J; bit `jj` of `l` must be clear.
    pub fn v(&self, jj: usize, l: usize) -> Literal {
        self.labels[v_slot(self.n(), jj, l)]
    }

    pub fn w(&self, jj: usize, l: usize) -> Literal {
        self.labels[w_slot(self.n(), jj, l)]
    }

    /// Label of the edge in direction position `t` leaving vertex `eps`
    /// (bit `t` of `eps` clear), read towards increasing coordinate.
    pub fn edge(&self, t: usize, eps: usize) -> Literal {
        let (slot, inv) = edge_slot(self.n(), t, eps);
        let l = self.labels[slot];
        if inv {
            l.inv()
        } else {
            l
        }
    }

    /// Rebuilds a cube from forward edge labels.
    pub fn from_edges(directions: Vec<usize>, edge: impl Fn(usize, usize) -> Literal) -> Self {
        let n = directions.len();
        let mut labels = vec![Literal::new(0, 0, false); label_count(n)];
        for t in 0..n {
            for eps in 0..1usize << n {
                if eps >> t & 1 == 0 {
                    let (slot, inv) = edge_slot(n, t, eps);
                    let l = edge(t, eps);
                    labels[slot] = if inv { l.inv() } else { l };
                }
            }
        }
        PointedCube { directions, labels }
    }

    /// The 2-face spanned by positions d < e at vertex `eps`, read from that vertex.
    pub fn face(&self, d: usize, e: usize, eps: usize) -> Square {
        [
            self.edge(d, eps),
            self.edge(e, eps | 1 << d),
            self.edge(d, eps | 1 << e).inv(),
            self.edge(e, eps).inv(),
        ]
    }

    /// All 2-faces, each read from its lowest vertex.
    pub fn faces(&self) -> Vec<Square> {
        let n = self.n();
        let mut out = Vec::new();
        for d in 0..n {
            for e in d + 1..n {
                for eps in 0..1usize << n {
                    if eps & (1 << d | 1 << e) == 0 {
                        out.push(self.face(d, e, eps));
                    }
                }
            }
        }
        out
    }

    /// Reflection in every direction position whose bit is set in `mask`.
    pub fn reflect(&self, mask: usize) -> Self {
        PointedCube::from_edges(self.directions.clone(), |t, eps| {
            let l = self.edge(t, eps ^ (mask & !(1 << t)));
            if mask >> t & 1 == 1 {
                l.inv()
            } else {
                l
            }
        })
    }

    /// Smallest member of the reflection orbit, with a mask taking it back to `self`.
    pub fn orbit_rep(&self) -> (PointedCube, usize) {
        (0..1usize << self.n())
            .map(|m| (self.reflect(m), m))
            .min()
            .expect("non-empty orbit")
    }

    /// The (n−1)-face with coordinate `t` fixed to `side`, as a cube on D∖{d_t}.
    pub fn facet(&self, t: usize, side: bool) -> PointedCube {
        let mut dirs = self.directions.clone();
        dirs.remove(t);
        let expand = |eps: usize| {
            let low = eps & ((1 << t) - 1);
            let high = (eps >> t) << (t + 1);
            low | high | (side as usize) << t
        };
        PointedCube::from_edges(dirs, |s, eps| {
            let s_full = if s < t { s } else { s + 1 };
            self.edge(s_full, expand(eps))
        })
    }

    pub fn names(&self, p: &Presentation) -> Vec<String> {
        self.labels.iter().map(|&l| p.literal_name(l)).collect()
    }
}

/// Orbit of a cube under the 2^n axis reflections.
pub fn cube_symmetries(c: &PointedCube) -> BTreeSet<PointedCube> {
    (0..1usize << c.n()).map(|m| c.reflect(m)).collect()
}

#[derive(Clone, Debug)]
pub struct CubeSet {
    pub n: usize,
    /// Sorted by (directions, labels).
    pub cubes: Vec<PointedCube>,
    index: HashMap<PointedCube, usize>,
}

impl CubeSet {
    pub fn new(n: usize, mut cubes: Vec<PointedCube>) -> Self {
        cubes.sort();
        cubes.dedup();
        let index = cubes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CubeSet { n, cubes, index }
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn position(&self, c: &PointedCube) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn contains(&self, c: &PointedCube) -> bool {
        self.index.contains_key(c)
    }

    /// Cube counts per direction set.
    pub fn counts_by_directions(&self) -> Vec<(Vec<usize>, usize)> {
        let mut out: Vec<(Vec<usize>, usize)> = Vec::new();
        for c in &self.cubes {
            match out.last_mut() {
                Some((d, k)) if *d == c.directions => *k += 1,
                _ => out.push((c.directions.clone(), 1)),
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubeRecord {
    pub directions: Vec<usize>,
    pub u: Vec<String>,
    pub v: Vec<Vec<String>>,
    pub w: Vec<Vec<String>>,
}

impl CubeRecord {
    /// Names with 1-based directions; v and w are listed per element of J.
    pub fn new(c: &PointedCube, p: &Presentation) -> Self {
        let n = c.n();
        let m = n - 1;
        let name = |l: Literal| p.literal_name(l);
        let u = (0..1usize << m).map(|l| name(c.u(l))).collect();
        let family = |f: &dyn Fn(usize, usize) -> Literal| -> Vec<Vec<String>> {
            (0..m)
                .map(|jj| {
                    (0..1usize << m)
                        .filter(|l| l >> jj & 1 == 0)
                        .map(|l| name(f(jj, l)))
                        .collect()
                })
                .collect()
        };
        CubeRecord {
            directions: c.directions.iter().map(|d| d + 1).collect(),
            u,
            v: family(&|jj, l| c.v(jj, l)),
            w: family(&|jj, l| c.w(jj, l)),
        }
    }
}
