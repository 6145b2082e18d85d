//! Homology of the quotient cube complex M(Γ).
//!
//! M(Γ) has one vertex and one n-cell per reflection orbit of pointed
//! n-cubes. Its homology is computed on the barycentric subdivision: a
//! d-simplex is a top cell c together with a chain of faces
//! F_0 ⊂ … ⊂ F_d = c of the standard cube of c. Vertices are cell
//! barycenters, ordered by cell dimension, so every edge joins distinct
//! barycenters and the ordered-simplex sign convention applies directly.
//! A face dropping F_d is moved into the coordinates of the cell that F_{d−1}
//! is glued to.

use std::collections::HashMap;

use serde::Serialize;

use crate::cubes::{enumerate_cubes, CubeSet, PointedCube};
use crate::error::{Error, Result};
use crate::homology::{homology_from_boundaries, smith_normal_form, AbelianGroup, IntMatrix};
use crate::par::IntoMaybeParallelIterator;
use crate::presentation::Presentation;
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

/// A face of the standard m-cube: per coordinate 0, 1, or free.
type Face = Vec<u8>;
const FREE: u8 = 2;

/// Cells of dimension 0..=k, each an orbit representative.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub k: usize,
    pub cells: Vec<Vec<PointedCube>>,
    index: Vec<HashMap<PointedCube, usize>>,
}

/// Where a face of a cell lands: cell (dimension, id) and the reflection mask
/// from the face's own coordinates to the cell's.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Image {
    dim: usize,
    id: usize,
    mask: usize,
}

impl CellComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    fn locate(&self, c: &PointedCube) -> Result<Image> {
        let (rep, mask) = c.orbit_rep();
        let dim = c.n();
        let id = *self.index[dim]
            .get(&rep)
            .ok_or_else(|| Error::Internal(format!("face {:?} is not a cell", c.labels)))?;
        Ok(Image { dim, id, mask })
    }

    /// Exponent sums of the 2-cells over the 1-cells: the cellular ∂_2.
    pub fn square_exponent_matrix(&self) -> IntMatrix {
        let mut entries = Vec::new();
        for (j, sq) in self.cells.get(2).map(Vec::as_slice).unwrap_or(&[]).iter().enumerate() {
            // boundary word of the square read from its base: e_0, e_1 at 1, e_0^-1 at 2, e_1^-1
            let word = [
                (sq.edge(0, 0), 1i64),
                (sq.edge(1, 1), 1),
                (sq.edge(0, 2), -1),
                (sq.edge(1, 0), -1),
            ];
            for (l, s) in word {
                let edge = PointedCube {
                    directions: vec![l.color()],
                    labels: vec![l],
                };
                let (rep, _) = edge.orbit_rep();
                let sign = if rep == edge { s } else { -s };
                entries.push((self.index[1][&rep], j, sign.into()));
            }
        }
        IntMatrix::from_triplets(self.cells[1].len(), self.cells.get(2).map_or(0, Vec::len), entries)
    }
}

/// Cells from the pointed cube sets S_1..S_k (`sets[n-1]` = S_n).
pub fn cube_complex_from_sets(sets: &[CubeSet]) -> Result<CellComplex> {
    let k = sets.len();
    let mut cells = vec![vec![PointedCube {
        directions: Vec::new(),
        labels: Vec::new(),
    }]];
    for (i, s) in sets.iter().enumerate() {
        let n = i + 1;
        if s.n != n {
            return Err(Error::DimensionMismatch(format!("set {i} holds {}-cubes", s.n)));
        }
        let mut reps: Vec<PointedCube> = s.cubes.iter().map(|c| c.orbit_rep().0).collect();
        reps.sort();
        reps.dedup();
        if reps.len() << n != s.len() {
            return Err(Error::Internal(format!(
                "{} pointed {n}-cubes fall into {} orbits; orbits must have size {}",
                s.len(),
                reps.len(),
                1 << n
            )));
        }
        cells.push(reps);
    }
    let index = cells
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    Ok(CellComplex { k, cells, index })
}

/// The cube complex of a presentation through dimension `max_dim` (default k).
pub fn build_cube_complex(p: &Presentation, max_dim: Option<usize>) -> Result<CellComplex> {
    let top = max_dim.unwrap_or(p.k()).min(p.k());
    let sets = (1..=top).map(|n| enumerate_cubes(p, n)).collect::<Result<Vec<_>>>()?;
    cube_complex_from_sets(&sets)
}

/// Pointed cube of a face, based at its lowest corner.
fn face_cube(c: &PointedCube, f: &Face) -> PointedCube {
    let mut out = c.clone();
    for t in (0..f.len()).rev() {
        if f[t] != FREE {
            out = out.facet(t, f[t] == 1);
        }
    }
    out
}

fn all_faces(m: usize) -> Vec<Face> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..3u8).map(move |x| {
                    let mut g = f.clone();
                    g.push(x);
                    g
                })
            })
            .collect();
    }
    out
}

fn face_dim(f: &Face) -> usize {
    f.iter().filter(|&&x| x == FREE).count()
}

fn contains(big: &Face, small: &Face) -> bool {
    big.iter().zip(small).all(|(&b, &s)| b == FREE || b == s)
}

/// Chains F_0 ⊂ … ⊂ F_d = full cube, listed bottom first.
fn flags(faces: &[Face], m: usize) -> Vec<Vec<Face>> {
    let full = vec![FREE; m];
    let mut out = Vec::new();
    let mut stack = vec![vec![full]];
    while let Some(chain) = stack.pop() {
        let low = chain.last().expect("non-empty chain").clone();
        for f in faces {
            if face_dim(f) < face_dim(&low) && contains(&low, f) {
                let mut c = chain.clone();
                c.push(f.clone());
                stack.push(c);
            }
        }
        let mut c = chain;
        c.reverse();
        out.push(c);
    }
    out.sort();
    out
}

/// Key of a simplex: top cell and its flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SimplexKey {
    dim: usize,
    id: usize,
    flag: Vec<Face>,
}

/// Barycentric subdivision as an ordered Δ-complex.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    /// Per simplex dimension, the barycenters (cell dimension, cell id) of each simplex, in order.
    pub simplices: Vec<Vec<Vec<(usize, usize)>>>,
    /// ∂_1..∂_top; ∂_d has one row per (d−1)-simplex.
    pub boundaries: Vec<IntMatrix>,
}

impl SimplicialComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn has_loops(&self) -> bool {
        self.simplices
            .get(1)
            .is_some_and(|e| e.iter().any(|v| v[0] == v[1]))
    }

    pub fn verify_chain(&self) -> Result<()> {
        for d in 1..self.boundaries.len() {
            if !self.boundaries[d - 1].mul(&self.boundaries[d]).is_zero() {
                return Err(Error::Internal(format!("subdivision boundary {d} composed with {} is not zero", d + 1)));
            }
        }
        Ok(())
    }

    /// The same complex with each simplex oriented by `rank` on barycenters
    /// instead of by cell dimension.
    pub fn reoriented(&self, rank: impl Fn(usize, usize) -> usize) -> SimplicialComplex {
        let sign = |v: &Vec<(usize, usize)>| -> i64 {
            let keys: Vec<usize> = v.iter().map(|&(d, i)| rank(d, i)).collect();
            let mut inversions = 0;
            for a in 0..keys.len() {
                for b in a + 1..keys.len() {
                    if keys[a] > keys[b] {
                        inversions += 1;
                    }
                }
            }
            if inversions % 2 == 0 {
                1
            } else {
                -1
            }
        };
        let signs: Vec<Vec<i64>> = self.simplices.iter().map(|s| s.iter().map(sign).collect()).collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let d = i + 1;
                let mut entries = Vec::new();
                for (r, row) in b.data.iter().enumerate() {
                    for (c, x) in row {
                        let s = signs[d - 1][r] * signs[d][*c as usize];
                        entries.push((r, *c as usize, x * s));
                    }
                }
                IntMatrix::from_triplets(b.rows, b.cols, entries)
            })
            .collect();
        SimplicialComplex {
            simplices: self.simplices.clone(),
            boundaries,
        }
    }
}

/// Barycentric subdivision of cells up to dimension 3.
pub fn barycentric_subdivision(c: &CellComplex) -> Result<SimplicialComplex> {
    if c.k > 3 {
        return Err(Error::Unsupported(format!("subdivision of {}-cells", c.k)));
    }
    let top = c.k;
    let face_lists: Vec<Vec<Face>> = (0..=top).map(all_faces).collect();
    let flag_lists: Vec<Vec<Vec<Face>>> = (0..=top).map(|m| flags(&face_lists[m], m)).collect();

    // images[dim][id][face] for every face of every cell
    let cells: Vec<(usize, usize)> = (0..=top).flat_map(|d| (0..c.cells[d].len()).map(move |i| (d, i))).collect();
    let images: Vec<HashMap<Face, Image>> = cells
        .clone()
        .into_maybe_par_iter()
        .map(|(d, i)| {
            face_lists[d]
                .iter()
                .map(|f| Ok((f.clone(), c.locate(&face_cube(&c.cells[d][i], f))?)))
                .collect::<Result<HashMap<_, _>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let offsets: Vec<usize> = (0..=top).map(|d| (0..d).map(|e| c.cells[e].len()).sum()).collect();
    let image = |d: usize, i: usize, f: &Face| images[offsets[d] + i][f];

    let mut keys: Vec<Vec<SimplexKey>> = vec![Vec::new(); top + 1];
    for &(d, i) in &cells {
        for fl in &flag_lists[d] {
            keys[fl.len() - 1].push(SimplexKey {
                dim: d,
                id: i,
                flag: fl.clone(),
            });
        }
    }
    for k in &mut keys {
        k.sort();
    }
    let position: Vec<HashMap<SimplexKey, usize>> = keys
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
        .collect();

    let simplices = keys
        .iter()
        .map(|v| {
            v.iter()
                .map(|s| {
                    s.flag
                        .iter()
                        .map(|f| {
                            let im = image(s.dim, s.id, f);
                            (im.dim, im.id)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let boundaries = (1..=top)
        .map(|sd| {
            let entries: Vec<(usize, usize, num_bigint::BigInt)> = keys[sd]
                .iter()
                .enumerate()
                .flat_map(|(col, s)| {
                    (0..=sd).map(move |i| {
                        let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                        let face = if i < sd {
                            let mut flag = s.flag.clone();
                            flag.remove(i);
                            SimplexKey {
                                dim: s.dim,
                                id: s.id,
                                flag,
                            }
                        } else {
                            let host = &s.flag[sd - 1];
                            let im = image(s.dim, s.id, host);
                            let free: Vec<usize> = (0..host.len()).filter(|&t| host[t] == FREE).collect();
                            let flag = s.flag[..sd]
                                .iter()
                                .map(|f| {
                                    free.iter()
                                        .enumerate()
                                        .map(|(j, &t)| match f[t] {
                                            FREE => FREE,
                                            x => x ^ ((im.mask >> j) & 1) as u8,
                                        })
                                        .collect()
                                })
                                .collect();
                            SimplexKey {
                                dim: im.dim,
                                id: im.id,
                                flag,
                            }
                        };
                        (face, col, sign)
                    })
                })
                .map(|(face, col, sign)| (position[sd - 1][&face], col, sign.into()))
                .collect();
            IntMatrix::from_triplets(keys[sd - 1].len(), keys[sd].len(), entries)
        })
        .collect();
    Ok(SimplicialComplex { simplices, boundaries })
}

/// H_0..H_top of a subdivided complex.
pub fn cellular_homology(s: &SimplicialComplex) -> Result<Vec<AbelianGroup>> {
    s.verify_chain()?;
    let snfs: Vec<_> = s
        .boundaries
        .iter()
        .collect::<Vec<_>>()
        .into_maybe_par_iter()
        .map(smith_normal_form)
        .collect();
    Ok(homology_from_boundaries(&s.counts(), &snfs))
}

#[derive(Clone, Debug, Serialize)]
pub struct CellularReport {
    pub cell_counts: Vec<usize>,
    pub euler_characteristic: i64,
    pub simplex_counts: Vec<usize>,
    pub loop_free: bool,
    pub homology: Vec<AbelianGroup>,
    /// Alternating sum of the free ranks of the homology.
    pub homology_euler_characteristic: i64,
}

pub fn cellular_report(p: &Presentation) -> Result<CellularReport> {
    let c = build_cube_complex(p, None)?;
    let s = barycentric_subdivision(&c)?;
    let homology = cellular_homology(&s)?;
    let homology_euler_characteristic = homology
        .iter()
        .enumerate()
        .map(|(d, g)| if d % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) })
        .sum();
    Ok(CellularReport {
        cell_counts: c.counts(),
        euler_characteristic: c.euler_characteristic(),
        simplex_counts: s.counts(),
        loop_free: !s.has_loops(),
        homology,
        homology_euler_characteristic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::enumerate_cubes_in;
    use crate::homology::smith_normal_form;
    use crate::presentation::{make_free_product, Literal};

    fn torus() -> CellComplex {
        let p = Presentation {
            name: "torus".into(),
            colors: vec![vec!["a".into()], vec!["b".into()]],
            relators: vec![{
                let a = Literal::new(0, 0, false);
                let b = Literal::new(1, 0, false);
                [a, b, a.inv(), b.inv()]
            }],
        };
        let edges: Vec<PointedCube> = (0..2)
            .flat_map(|c| {
                [false, true].map(|inv| PointedCube {
                    directions: vec![c],
                    labels: vec![Literal::new(c, 0, inv)],
                })
            })
            .collect();
        let squares = enumerate_cubes_in(&p, &[0, 1]).unwrap();
        cube_complex_from_sets(&[CubeSet::new(1, edges), squares]).unwrap()
    }

    fn strings(h: &[AbelianGroup]) -> Vec<String> {
        h.iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn flag_counts() {
        assert_eq!(flags(&all_faces(2), 2).iter().filter(|f| f.len() == 3).count(), 8);
        assert_eq!(flags(&all_faces(3), 3).iter().filter(|f| f.len() == 4).count(), 48);
        assert_eq!(flags(&all_faces(0), 0), vec![vec![Vec::<u8>::new()]]);
    }

    #[test]
    fn torus_homology() {
        let c = torus();
        assert_eq!(c.counts(), vec![1, 2, 1]);
        let s = barycentric_subdivision(&c).unwrap();
        assert_eq!(s.counts()[2], 8);
        assert!(!s.has_loops());
        assert_eq!(strings(&cellular_homology(&s).unwrap()), vec!["Z", "Z^2", "Z"]);
    }

    #[test]
    fn product_of_wedges() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        let r = cellular_report(&p).unwrap();
        assert_eq!(r.cell_counts, vec![1, 6, 12, 8]);
        assert_eq!(strings(&r.homology), vec!["Z", "Z^6", "Z^12", "Z^8"]);
        assert_eq!(r.euler_characteristic, r.homology_euler_characteristic);
    }

    #[test]
    fn first_homology_is_the_abelianisation() {
        let p = make_free_product(&[3, 2]).unwrap();
        let c = build_cube_complex(&p, None).unwrap();
        let h = cellular_homology(&barycentric_subdivision(&c).unwrap()).unwrap();
        let snf = smith_normal_form(&c.square_exponent_matrix());
        let ab = AbelianGroup::new(c.cells[1].len() - snf.rank, snf.torsion().iter().map(|d| d.magnitude().clone()));
        assert_eq!(h[1], ab);
        assert_eq!(ab, AbelianGroup::free(5));
    }

    #[test]
    fn reorientation_keeps_homology() {
        let s = barycentric_subdivision(&torus()).unwrap();
        let r = s.reoriented(|d, i| 100 - 10 * d + i);
        r.verify_chain().unwrap();
        assert_eq!(cellular_homology(&r).unwrap(), cellular_homology(&s).unwrap());
    }
}
