//! Incidence matrices of the k-rank graph on pointed k-cubes.
//!
//! `M_i(A, B) = 1` when B is E_i-adjacent to A: the facet of B with coordinate
//! i equal to 0 is the facet of A with coordinate i equal to 1, and B does not
//! fold back onto A. Rows are indexed by A.

mod validate;

pub use validate::{check_uce, connectivity_aperiodicity, validate_k_graph, KGraphReport, UceMode, UceReport};

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cubes::{CubeSet, PointedCube};
use crate::error::{Error, Result};
use crate::par::IntoMaybeParallelIterator;
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

/// Square matrix of non-negative integers stored as sorted row lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub n: usize,
    pub rows: Vec<Vec<(u32, i64)>>,
}

impl IncidenceMatrix {
    pub fn zero(n: usize) -> Self {
        IncidenceMatrix { n, rows: vec![Vec::new(); n] }
    }

    pub fn from_dense(d: &[Vec<i64>]) -> Self {
        let n = d.len();
        let rows = d
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j as u32, x))
                    .collect()
            })
            .collect();
        IncidenceMatrix { n, rows }
    }

    /// 0/1 matrix from row adjacency lists.
    pub fn from_lists(n: usize, lists: Vec<Vec<u32>>) -> Self {
        let rows = lists
            .into_iter()
            .map(|mut r| {
                r.sort_unstable();
                r.dedup();
                r.into_iter().map(|j| (j, 1)).collect()
            })
            .collect();
        IncidenceMatrix { n, rows }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        let r = &self.rows[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(pos) => r[pos].1,
            Err(_) => 0,
        }
    }

    /// Column indices of non-zero entries in row i.
    pub fn support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().map(|e| e.0 as usize)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().map(|e| e.1).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        let mut s = vec![0; self.n];
        for r in &self.rows {
            for &(j, x) in r {
                s[j as usize] += x;
            }
        }
        s
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.n];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, x) in r {
                rows[j as usize].push((i as u32, x));
            }
        }
        IncidenceMatrix { n: self.n, rows }
    }

    pub fn mul(&self, other: &IncidenceMatrix) -> IncidenceMatrix {
        assert_eq!(self.n, other.n);
        let rows = (0..self.n)
            .into_maybe_par_iter()
            .map(|i| {
                let mut acc: HashMap<u32, i64> = HashMap::new();
                for &(k, x) in &self.rows[i] {
                    for &(j, y) in &other.rows[k as usize] {
                        *acc.entry(j).or_default() += x * y;
                    }
                }
                let mut r: Vec<(u32, i64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
                r.sort_unstable();
                r
            })
            .collect();
        IncidenceMatrix { n: self.n, rows }
    }

    pub fn max_entry(&self) -> i64 {
        self.rows.iter().flatten().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.n]; self.n];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, x) in r {
                d[i][j as usize] = x;
            }
        }
        d
    }

    /// Text export: a line "N N", then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 2 + 16);
        let _ = writeln!(out, "{} {}", self.n, self.n);
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Reorders vertices: entry (i, j) moves to (perm[i], perm[j]).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut rows = vec![Vec::new(); self.n];
        for (i, r) in self.rows.iter().enumerate() {
            rows[perm[i]] = r.iter().map(|&(j, x)| (perm[j as usize] as u32, x)).collect();
        }
        for r in &mut rows {
            r.sort_unstable();
        }
        IncidenceMatrix { n: self.n, rows }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrices {
    pub matrices: Vec<IncidenceMatrix>,
    /// |E_i| per color when the matrices come from a presentation.
    pub color_sizes: Option<Vec<usize>>,
}

impl AdjacencyMatrices {
    pub fn k(&self) -> usize {
        self.matrices.len()
    }

    pub fn n(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.n)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        AdjacencyMatrices {
            matrices: self.matrices.iter().map(|m| m.permuted(perm)).collect(),
            color_sizes: self.color_sizes.clone(),
        }
    }
}

fn check_full(cubes: &CubeSet, sizes: &[usize]) -> Result<()> {
    let k = sizes.len();
    if cubes.n != k || cubes.cubes.iter().any(|c| c.directions.len() != k) {
        return Err(Error::DimensionMismatch(format!(
            "adjacency needs pointed {k}-cubes over all colors, got dimension {}",
            cubes.n
        )));
    }
    Ok(())
}

/// Facet key: the labels of the facet orthogonal to position t on the given side.
fn facet_key(c: &PointedCube, t: usize, side: bool) -> Vec<crate::presentation::Literal> {
    c.facet(t, side).labels
}

/// Incidence matrices by gluing facets: `M_t(A,B) = 1` iff the near t-facet of
/// B equals the far t-facet of A and B's first t-edge is not A's reversed.
pub fn adjacency_matrices(cubes: &CubeSet, sizes: &[usize]) -> Result<AdjacencyMatrices> {
    check_full(cubes, sizes)?;
    let k = sizes.len();
    let n = cubes.len();
    let matrices = (0..k)
        .into_maybe_par_iter()
        .map(|t| {
            let mut near: HashMap<Vec<crate::presentation::Literal>, Vec<u32>> = HashMap::new();
            for (b, c) in cubes.cubes.iter().enumerate() {
                near.entry(facet_key(c, t, false)).or_default().push(b as u32);
            }
            let lists = cubes
                .cubes
                .iter()
                .map(|a| {
                    let back = a.edge(t, 0).inv();
                    near.get(&facet_key(a, t, true))
                        .map(|bs| {
                            bs.iter()
                                .copied()
                                .filter(|&b| cubes.cubes[b as usize].edge(t, 0) != back)
                                .collect()
                        })
                        .unwrap_or_default()
                })
                .collect();
            IncidenceMatrix::from_lists(n, lists)
        })
        .collect();
    Ok(AdjacencyMatrices {
        matrices,
        color_sizes: Some(sizes.to_vec()),
    })
}

/// Reading of the base-direction criterion on v, w.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseCriterion {
    /// v = z^-1 and w = y^-1 at every L.
    EveryL,
    /// v = z^-1 where |L| is even, w = y^-1 where |L| is odd.
    ByParity,
}

/// Entry (A, B) of M_i from the label-family criteria, for A = (u, v, w), B = (x, y, z).
pub fn label_criteria_adjacent(a: &PointedCube, b: &PointedCube, i: usize, base: BaseCriterion) -> bool {
    let m = a.n() - 1;
    let subsets = 0..1usize << m;
    if i == 0 {
        for l in subsets {
            if a.u(l) == b.u(l).inv() {
                return false;
            }
            for jj in 0..m {
                if l >> jj & 1 == 1 {
                    continue;
                }
                let even = l.count_ones() % 2 == 0;
                let need_v = base == BaseCriterion::EveryL || even;
                let need_w = base == BaseCriterion::EveryL || !even;
                if need_v && a.v(jj, l) != b.w(jj, l).inv() {
                    return false;
                }
                if need_w && a.w(jj, l) != b.v(jj, l).inv() {
                    return false;
                }
            }
        }
        return true;
    }
    let ii = i - 1;
    for l in subsets.filter(|l| l >> ii & 1 == 0) {
        let li = l | 1 << ii;
        if b.u(l).inv() != a.u(li) {
            return false;
        }
        for jj in (0..m).filter(|&jj| jj != ii && l >> jj & 1 == 0) {
            if b.v(jj, l).inv() != a.w(jj, li) || b.w(jj, l).inv() != a.v(jj, li) {
                return false;
            }
        }
        if a.v(ii, l) == b.v(ii, l).inv() || a.w(ii, l) == b.w(ii, l).inv() {
            return false;
        }
    }
    true
}

/// Incidence matrices from the label criteria by pairwise comparison.
pub fn adjacency_matrices_by_criteria(
    cubes: &CubeSet,
    sizes: &[usize],
    base: BaseCriterion,
) -> Result<AdjacencyMatrices> {
    check_full(cubes, sizes)?;
    let n = cubes.len();
    let matrices = (0..sizes.len())
        .map(|i| {
            let lists = (0..n)
                .into_maybe_par_iter()
                .map(|a| {
                    (0..n)
                        .filter(|&b| label_criteria_adjacent(&cubes.cubes[a], &cubes.cubes[b], i, base))
                        .map(|b| b as u32)
                        .collect()
                })
                .collect();
            IncidenceMatrix::from_lists(n, lists)
        })
        .collect();
    Ok(AdjacencyMatrices {
        matrices,
        color_sizes: Some(sizes.to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::enumerate_cubes;
    use crate::presentation::make_free_product;

    #[test]
    fn free_product_matrices_agree_across_readings() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        let cubes = enumerate_cubes(&p, 3).unwrap();
        let g = adjacency_matrices(&cubes, &p.sizes()).unwrap();
        for base in [BaseCriterion::EveryL, BaseCriterion::ByParity] {
            assert_eq!(g, adjacency_matrices_by_criteria(&cubes, &p.sizes(), base).unwrap());
        }
        for m in &g.matrices {
            assert!(m.col_sums().iter().all(|&s| s == 3));
            assert!(m.row_sums().iter().all(|&s| s == 3));
        }
    }

    #[test]
    fn sparse_product_and_transpose() {
        let a = IncidenceMatrix::from_dense(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(a.mul(&a).to_dense(), vec![vec![1, 2], vec![0, 1]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(a.to_text(), "2 2\n1 1\n0 1\n");
        assert_eq!(a.permuted(&[1, 0]).to_dense(), vec![vec![1, 0], vec![1, 1]]);
    }
}
