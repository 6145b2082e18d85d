use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::group::AbelianGroup;
use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, smith_normal_form_with_transforms, SnfResult};
use crate::error::{Error, Result};
use crate::par::IntoMaybeParallelIterator;
use crate::rank_graph::{AdjacencyMatrices, IncidenceMatrix};
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

/// N_0, …, N_k: increasing tuples of 0-based colors, lexicographic.
pub fn index_sets(k: usize) -> Vec<Vec<Vec<usize>>> {
    let mut sets = vec![vec![Vec::new()]];
    for l in 1..=k {
        sets.push(crate::cubes::direction_sets_pub(k, l));
    }
    sets
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub k: usize,
    /// Size of each block (vertices of the graph).
    pub n: usize,
    pub index_sets: Vec<Vec<Vec<usize>>>,
    /// ∂_1, …, ∂_k; ∂_p has C(k,p−1)·n rows and C(k,p)·n columns.
    pub boundaries: Vec<IntMatrix>,
}

/// A block ±(I − M_i^T), with i 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockEntry {
    pub sign: i8,
    pub matrix: usize,
}

fn identity_minus_transpose(m: &IncidenceMatrix) -> Vec<(usize, usize, i64)> {
    let mut out: Vec<(usize, usize, i64)> = (0..m.n).map(|i| (i, i, 1)).collect();
    for (a, row) in m.rows.iter().enumerate() {
        for &(b, x) in row {
            out.push((b as usize, a, -x));
        }
    }
    out
}

/// Assembles a block matrix whose (λ, μ) block is `table[λ][μ]`.
pub fn boundary_from_blocks(mats: &[IncidenceMatrix], table: &[Vec<Option<BlockEntry>>]) -> IntMatrix {
    let n = mats.first().map_or(0, |m| m.n);
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    let blocks: Vec<Vec<(usize, usize, i64)>> = mats.iter().map(identity_minus_transpose).collect();
    let mut entries = Vec::new();
    for (bi, line) in table.iter().enumerate() {
        for (bj, e) in line.iter().enumerate() {
            if let Some(e) = e {
                for &(i, j, x) in &blocks[e.matrix] {
                    entries.push((bi * n + i, bj * n + j, BigInt::from(e.sign as i64 * x)));
                }
            }
        }
    }
    IntMatrix::from_triplets(rows * n, cols * n, entries)
}

/// Block layout of ∂_p: (λ, μ) holds (−1)^(i+1)(I − M_{μ_i}^T) when λ is μ without its i-th entry.
fn block_table(sets: &[Vec<Vec<usize>>], p: usize) -> Vec<Vec<Option<BlockEntry>>> {
    sets[p - 1]
        .iter()
        .map(|lambda| {
            sets[p]
                .iter()
                .map(|mu| {
                    (0..mu.len()).find_map(|i| {
                        let mut face = mu.clone();
                        face.remove(i);
                        (face == *lambda).then_some(BlockEntry {
                            sign: if i % 2 == 0 { 1 } else { -1 },
                            matrix: mu[i],
                        })
                    })
                })
                .collect()
        })
        .collect()
}

/// The complex with (D_k)_p = ⊕_{μ ∈ N_p} Z^N.
pub fn build_chain_complex(k: usize, m: &AdjacencyMatrices) -> Result<ChainComplex> {
    if m.k() != k {
        return Err(Error::DimensionMismatch(format!("{} matrices for rank {k}", m.k())));
    }
    for i in 0..k {
        for j in i + 1..k {
            if m.matrices[i].mul(&m.matrices[j]) != m.matrices[j].mul(&m.matrices[i]) {
                return Err(Error::NonCommuting(i + 1, j + 1));
            }
        }
    }
    let sets = index_sets(k);
    let boundaries = (1..=k)
        .into_maybe_par_iter()
        .map(|p| boundary_from_blocks(&m.matrices, &block_table(&sets, p)))
        .collect();
    Ok(ChainComplex {
        k,
        n: m.n(),
        index_sets: sets,
        boundaries,
    })
}

impl ChainComplex {
    /// Ranks of the chain groups C_0, …, C_k.
    pub fn dims(&self) -> Vec<usize> {
        self.index_sets.iter().map(|s| s.len() * self.n).collect()
    }

    /// ∂_p ∘ ∂_{p+1} = 0 for every p.
    pub fn verify_chain(&self) -> Result<()> {
        for p in 1..self.boundaries.len() {
            if !self.boundaries[p - 1].mul(&self.boundaries[p]).is_zero() {
                return Err(Error::Internal(format!("∂_{} ∂_{} is not zero", p, p + 1)));
            }
        }
        Ok(())
    }

    pub fn permuted(&self, perm: &[usize]) -> ChainComplex {
        let n = self.n;
        let full = |blocks: usize| -> Vec<usize> { (0..blocks * n).map(|x| (x / n) * n + perm[x % n]).collect() };
        let sizes: Vec<usize> = self.index_sets.iter().map(Vec::len).collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, b)| b.permuted(&full(sizes[i]), &full(sizes[i + 1])))
            .collect();
        ChainComplex {
            boundaries,
            ..self.clone()
        }
    }
}

/// H_0, …, H_K from the chain ranks c_0..c_K and the SNFs of ∂_1..∂_K.
///
/// H_p = Z^(c_p − rank ∂_p − rank ∂_{p+1}) ⊕ (non-unit divisors of ∂_{p+1}).
/// The torsion comes only from ∂_{p+1}: ker ∂_p is saturated in C_p, so the
/// SNF basis of im ∂_{p+1} extends to a basis of ker ∂_p.
pub fn homology_from_boundaries(dims: &[usize], snfs: &[SnfResult]) -> Vec<AbelianGroup> {
    assert_eq!(dims.len(), snfs.len() + 1, "need one SNF per boundary map");
    (0..dims.len())
        .map(|p| {
            let s = if p == 0 { 0 } else { snfs[p - 1].rank };
            let (r, torsion) = match snfs.get(p) {
                Some(next) => (next.rank, next.torsion()),
                None => (0, Vec::new()),
            };
            let tors: Vec<BigUint> = torsion.iter().map(|d| d.magnitude().clone()).collect();
            AbelianGroup::new(dims[p] - s - r, tors)
        })
        .collect()
}

/// SNFs of every boundary map, computed concurrently.
pub fn boundary_snfs(c: &ChainComplex, transforms: bool) -> Vec<SnfResult> {
    c.boundaries
        .iter()
        .collect::<Vec<_>>()
        .into_maybe_par_iter()
        .map(|b| {
            if transforms {
                smith_normal_form_with_transforms(b)
            } else {
                smith_normal_form(b)
            }
        })
        .collect()
}

pub fn homology_groups(c: &ChainComplex) -> Vec<AbelianGroup> {
    homology_from_boundaries(&c.dims(), &boundary_snfs(c, false))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of the class of `v` in coker(a), from an SNF that carries U.
pub fn order_from_snf(snf: &SnfResult, v: &[BigInt]) -> Result<Order> {
    let t = snf
        .transforms
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("SNF computed without transforms".into()))?;
    if v.len() != snf.rows {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a map with {} rows",
            v.len(),
            snf.rows
        )));
    }
    let y = t.u.apply(v);
    if y[snf.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(Order::Infinite);
    }
    let mut order = BigInt::one();
    for (d, x) in snf.divisors.iter().zip(&y) {
        let part = d / d.gcd(x);
        order = order.lcm(&part);
    }
    Ok(Order::Finite(order.abs().magnitude().clone()))
}

pub fn element_order_in_cokernel(a: &IntMatrix, v: &[BigInt]) -> Result<Order> {
    if v.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a map with {} rows",
            v.len(),
            a.rows
        )));
    }
    order_from_snf(&smith_normal_form_with_transforms(a), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::enumerate_cubes;
    use crate::presentation::make_free_product;
    use crate::rank_graph::adjacency_matrices;

    fn b(sign: i8, m: usize) -> Option<BlockEntry> {
        Some(BlockEntry { sign, matrix: m - 1 })
    }

    /// The k = 3 and k = 4 boundary tables written out by hand.
    fn printed(k: usize) -> Vec<Vec<Vec<Option<BlockEntry>>>> {
        let z = None;
        match k {
            3 => vec![
                vec![vec![b(1, 1), b(1, 2), b(1, 3)]],
                vec![
                    vec![b(-1, 2), b(-1, 3), z],
                    vec![b(1, 1), z, b(-1, 3)],
                    vec![z, b(1, 1), b(1, 2)],
                ],
                vec![vec![b(1, 3)], vec![b(-1, 2)], vec![b(1, 1)]],
            ],
            4 => vec![
                vec![vec![b(1, 1), b(1, 2), b(1, 3), b(1, 4)]],
                vec![
                    vec![b(-1, 2), b(-1, 3), b(-1, 4), z, z, z],
                    vec![b(1, 1), z, z, b(-1, 3), b(-1, 4), z],
                    vec![z, b(1, 1), z, b(1, 2), z, b(-1, 4)],
                    vec![z, z, b(1, 1), z, b(1, 2), b(1, 3)],
                ],
                vec![
                    vec![b(1, 3), b(1, 4), z, z],
                    vec![b(-1, 2), z, b(1, 4), z],
                    vec![z, b(-1, 2), b(-1, 3), z],
                    vec![b(1, 1), z, z, b(1, 4)],
                    vec![z, b(1, 1), z, b(-1, 3)],
                    vec![z, z, b(1, 1), b(1, 2)],
                ],
                vec![vec![b(-1, 4)], vec![b(1, 3)], vec![b(-1, 2)], vec![b(1, 1)]],
            ],
            _ => unreachable!(),
        }
    }

    #[test]
    fn generic_tables_match_written_out_ones() {
        for k in [3, 4] {
            let sets = index_sets(k);
            for (p, table) in printed(k).into_iter().enumerate() {
                assert_eq!(block_table(&sets, p + 1), table, "k={k} p={}", p + 1);
            }
        }
    }

    #[test]
    fn free_product_complex() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        let m = adjacency_matrices(&enumerate_cubes(&p, 3).unwrap(), &p.sizes()).unwrap();
        let c = build_chain_complex(3, &m).unwrap();
        c.verify_chain().unwrap();
        let shapes: Vec<(usize, usize)> = c.boundaries.iter().map(|b| (b.rows, b.cols)).collect();
        assert_eq!(shapes, vec![(64, 192), (192, 192), (192, 64)]);
        let h: Vec<String> = homology_groups(&c).iter().map(|g| g.to_string()).collect();
        assert_eq!(h, vec!["Z^8", "Z^24", "Z^24", "Z^8"]);
    }

    #[test]
    fn zero_map_order_is_infinite() {
        let a = IntMatrix::zeros(1, 1);
        assert_eq!(element_order_in_cokernel(&a, &[BigInt::one()]).unwrap(), Order::Infinite);
        let two = IntMatrix::from_dense(&[vec![6]]);
        assert_eq!(
            element_order_in_cokernel(&two, &[BigInt::from(4)]).unwrap(),
            Order::Finite(3u32.into())
        );
        assert!(element_order_in_cokernel(&two, &[]).is_err());
    }

    #[test]
    fn non_commuting_matrices_are_refused() {
        let a = IncidenceMatrix::from_dense(&[vec![0, 1], vec![0, 0]]);
        let b = IncidenceMatrix::from_dense(&[vec![0, 0], vec![1, 0]]);
        let m = AdjacencyMatrices {
            matrices: vec![a, b],
            color_sizes: None,
        };
        assert!(matches!(build_chain_complex(2, &m), Err(Error::NonCommuting(1, 2))));
    }
}
