use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AdjacencyMatrices, IncidenceMatrix};
use crate::par::IntoMaybeParallelIterator;
use crate::presentation::Presentation;
#[cfg(feature = "parallel")]
use rayon::iter::ParallelIterator;

const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UceMode {
    Sample { count: usize, seed: u64 },
    Exhaustive,
}

impl Default for UceMode {
    fn default() -> Self {
        UceMode::Sample { count: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UceReport {
    pub mode: UceMode,
    pub checked: usize,
    pub failures: usize,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraphReport {
    pub k: usize,
    pub vertices: usize,
    pub is_k_graph: bool,
    pub nonzero_pass: bool,
    pub commutation_pass: bool,
    pub zero_one_pass: bool,
    pub uce_pass: bool,
    /// At least three non-zero entries in every row of every matrix.
    pub row_condition_pass: bool,
    /// Every column of M_i sums to |E_i| − 1; absent without color sizes.
    pub column_sum_pass: Option<bool>,
    /// Every row of M_i sums to |E_i| − 1 (measured, not required).
    pub row_sums_match_columns: Option<bool>,
    /// (min, max) row sum and (min, max) column sum per matrix.
    pub row_sum_range: Vec<(i64, i64)>,
    pub column_sum_range: Vec<(i64, i64)>,
    pub connected: bool,
    pub aperiodic: Option<bool>,
    pub uce: UceReport,
    pub witnesses: Vec<String>,
}

fn range(v: &[i64]) -> (i64, i64) {
    (
        v.iter().copied().min().unwrap_or(0),
        v.iter().copied().max().unwrap_or(0),
    )
}

fn first_difference(a: &IncidenceMatrix, b: &IncidenceMatrix) -> Option<(usize, usize, i64, i64)> {
    for i in 0..a.n {
        if a.rows[i] != b.rows[i] {
            let cols = a.rows[i].iter().chain(&b.rows[i]).map(|e| e.0 as usize);
            for j in cols {
                if a.get(i, j) != b.get(i, j) {
                    return Some((i, j, a.get(i, j), b.get(i, j)));
                }
            }
        }
    }
    None
}

fn first_large(m: &IncidenceMatrix) -> Option<(usize, usize, i64)> {
    m.rows
        .iter()
        .enumerate()
        .find_map(|(i, r)| r.iter().find(|e| e.1 > 1).map(|e| (i, e.0 as usize, e.1)))
}

pub fn validate_k_graph(m: &AdjacencyMatrices, uce_mode: UceMode) -> KGraphReport {
    let k = m.k();
    let mut witnesses = Vec::new();
    let note = |w: String, ws: &mut Vec<String>| {
        if ws.len() < MAX_WITNESSES {
            ws.push(w);
        }
    };

    let nonzero_pass = m.matrices.iter().all(|x| x.nnz() > 0);
    for (i, x) in m.matrices.iter().enumerate() {
        if x.nnz() == 0 {
            note(format!("M_{} is zero", i + 1), &mut witnesses);
        }
    }

    let mut products = std::collections::HashMap::new();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                products.insert((i, j), m.matrices[i].mul(&m.matrices[j]));
            }
        }
    }
    let mut commutation_pass = true;
    for i in 0..k {
        for j in i + 1..k {
            if let Some((r, c, x, y)) = first_difference(&products[&(i, j)], &products[&(j, i)]) {
                commutation_pass = false;
                note(
                    format!("M_{a}M_{b} != M_{b}M_{a} at ({r},{c}): {x} vs {y}", a = i + 1, b = j + 1),
                    &mut witnesses,
                );
            }
        }
    }

    let mut zero_one_pass = true;
    for (i, x) in m.matrices.iter().enumerate() {
        if let Some((r, c, v)) = first_large(x) {
            zero_one_pass = false;
            note(format!("M_{} has entry {v} at ({r},{c})", i + 1), &mut witnesses);
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            if let Some((r, c, v)) = first_large(&products[&(i, j)]) {
                zero_one_pass = false;
                note(format!("M_{}M_{} has entry {v} at ({r},{c})", i + 1, j + 1), &mut witnesses);
            }
            for l in j + 1..k {
                let triple = products[&(i, j)].mul(&m.matrices[l]);
                if let Some((r, c, v)) = first_large(&triple) {
                    zero_one_pass = false;
                    note(
                        format!("M_{}M_{}M_{} has entry {v} at ({r},{c})", i + 1, j + 1, l + 1),
                        &mut witnesses,
                    );
                }
            }
        }
    }

    let mut row_condition_pass = true;
    for (i, x) in m.matrices.iter().enumerate() {
        if let Some(r) = x.rows.iter().position(|r| r.len() < 3) {
            row_condition_pass = false;
            note(
                format!("row {r} of M_{} has {} non-zero entries", i + 1, x.rows[r].len()),
                &mut witnesses,
            );
        }
    }

    let row_sums: Vec<Vec<i64>> = m.matrices.iter().map(IncidenceMatrix::row_sums).collect();
    let col_sums: Vec<Vec<i64>> = m.matrices.iter().map(IncidenceMatrix::col_sums).collect();
    let (column_sum_pass, row_sums_match_columns) = match &m.color_sizes {
        Some(sizes) => {
            let want = |i: usize| sizes[i] as i64 - 1;
            let cols = (0..k).all(|i| col_sums[i].iter().all(|&s| s == want(i)));
            let rows = (0..k).all(|i| row_sums[i].iter().all(|&s| s == want(i)));
            for i in 0..k {
                if let Some(c) = col_sums[i].iter().position(|&s| s != want(i)) {
                    note(
                        format!("column {c} of M_{} sums to {}, expected {}", i + 1, col_sums[i][c], want(i)),
                        &mut witnesses,
                    );
                }
            }
            (Some(cols), Some(rows))
        }
        None => (None, None),
    };

    let uce = check_uce(m, uce_mode);
    let (connected, aperiodic) = flags(m);
    KGraphReport {
        k,
        vertices: m.n(),
        is_k_graph: commutation_pass && zero_one_pass && uce.pass,
        nonzero_pass,
        commutation_pass,
        zero_one_pass,
        uce_pass: uce.pass,
        row_condition_pass,
        column_sum_pass,
        row_sums_match_columns,
        row_sum_range: row_sums.iter().map(|v| range(v)).collect(),
        column_sum_range: col_sums.iter().map(|v| range(v)).collect(),
        connected,
        aperiodic,
        uce,
        witnesses,
    }
}

fn intersect(a: &[(u32, i64)], b: &[(u32, i64)]) -> Vec<u32> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i].0);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// One instance: a vertex, a set of directions, and one neighbour per direction.
#[derive(Clone, Debug)]
struct Instance {
    a: usize,
    dirs: Vec<usize>,
    b: Vec<usize>,
}

/// Checks that the completion exists and is unique. Returns a witness on failure.
fn complete(m: &AdjacencyMatrices, inst: &Instance) -> Option<String> {
    let mat = |d: usize| &m.matrices[d];
    let fail = |what: &str, found: usize| {
        let dirs: Vec<String> = inst.dirs.iter().map(|d| (d + 1).to_string()).collect();
        Some(format!(
            "A={} directions ({}) B={:?}: {} {} candidates",
            inst.a,
            dirs.join(","),
            inst.b,
            found,
            what
        ))
    };
    if inst.dirs.len() == 2 {
        let (p, q) = (inst.dirs[0], inst.dirs[1]);
        let d = intersect(&mat(q).rows[inst.b[0]], &mat(p).rows[inst.b[1]]);
        return if d.len() == 1 { None } else { fail("D", d.len()) };
    }
    let (p, q, r) = (inst.dirs[0], inst.dirs[1], inst.dirs[2]);
    let (bp, bq, br) = (inst.b[0], inst.b[1], inst.b[2]);
    let cpq = intersect(&mat(p).rows[bq], &mat(q).rows[bp]);
    let cpr = intersect(&mat(p).rows[br], &mat(r).rows[bp]);
    let cqr = intersect(&mat(q).rows[br], &mat(r).rows[bq]);
    for (name, c) in [("C_pq", &cpq), ("C_pr", &cpr), ("C_qr", &cqr)] {
        if c.len() != 1 {
            return fail(name, c.len());
        }
    }
    let d1 = intersect(&mat(p).rows[cqr[0] as usize], &mat(q).rows[cpr[0] as usize]);
    let d = intersect(
        &d1.iter().map(|&x| (x, 1)).collect::<Vec<_>>(),
        &mat(r).rows[cpq[0] as usize],
    );
    if d.len() == 1 {
        None
    } else {
        fail("D", d.len())
    }
}

fn direction_tuples(k: usize) -> Vec<Vec<usize>> {
    if k == 2 {
        return vec![vec![0, 1]];
    }
    let mut out = Vec::new();
    for p in 0..k {
        for q in p + 1..k {
            for r in q + 1..k {
                out.push(vec![p, q, r]);
            }
        }
    }
    out
}

/// Unique completion of (A, B_p, B_q, B_r) to a 2x2x2 block; squares for k = 2.
pub fn check_uce(m: &AdjacencyMatrices, mode: UceMode) -> UceReport {
    let k = m.k();
    let n = m.n();
    if k < 2 || n == 0 {
        return UceReport {
            mode,
            checked: 0,
            failures: 0,
            pass: k >= 1,
            witnesses: Vec::new(),
        };
    }
    let tuples = direction_tuples(k);
    let results: Vec<Option<String>> = match mode {
        UceMode::Exhaustive => (0..n)
            .into_maybe_par_iter()
            .map(|a| {
                let mut out = Vec::new();
                for dirs in &tuples {
                    let mut b = vec![0usize; dirs.len()];
                    exhaustive(m, a, dirs, 0, &mut b, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect(),
        UceMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let a = rng.gen_range(0..n);
                let dirs = tuples[rng.gen_range(0..tuples.len())].clone();
                let mut b = Vec::with_capacity(dirs.len());
                let mut missing = None;
                for &d in &dirs {
                    let row = &m.matrices[d].rows[a];
                    if row.is_empty() {
                        missing = Some(d);
                        break;
                    }
                    b.push(row[rng.gen_range(0..row.len())].0 as usize);
                }
                out.push(match missing {
                    Some(d) => Some(format!("vertex {a} has no E_{} neighbour", d + 1)),
                    None => complete(m, &Instance { a, dirs, b }),
                });
            }
            out
        }
    };
    let checked = results.len();
    let failed: Vec<String> = results.into_iter().flatten().collect();
    UceReport {
        mode,
        checked,
        failures: failed.len(),
        pass: failed.is_empty(),
        witnesses: failed.into_iter().take(MAX_WITNESSES).collect(),
    }
}

fn exhaustive(
    m: &AdjacencyMatrices,
    a: usize,
    dirs: &[usize],
    depth: usize,
    b: &mut Vec<usize>,
    out: &mut Vec<Option<String>>,
) {
    if depth == dirs.len() {
        out.push(complete(
            m,
            &Instance {
                a,
                dirs: dirs.to_vec(),
                b: b.clone(),
            },
        ));
        return;
    }
    for &(x, _) in &m.matrices[dirs[depth]].rows[a] {
        b[depth] = x as usize;
        exhaustive(m, a, dirs, depth + 1, b, out);
    }
}

fn reachable(n: usize, adj: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count
}

fn flags(m: &AdjacencyMatrices) -> (bool, Option<bool>) {
    let n = m.n();
    let connected = if n == 0 {
        false
    } else {
        let mut fwd = vec![Vec::new(); n];
        let mut back = vec![Vec::new(); n];
        for x in &m.matrices {
            for (a, r) in x.rows.iter().enumerate() {
                for &(b, _) in r {
                    fwd[a].push(b as usize);
                    back[b as usize].push(a);
                }
            }
        }
        reachable(n, &fwd) == n && reachable(n, &back) == n
    };
    let aperiodic = m.color_sizes.as_ref().map(|s| s.iter().all(|&x| x >= 4));
    (connected, aperiodic)
}

/// Strong connectivity of the union graph, and the |E_i| ≥ 4 aperiodicity test.
pub fn connectivity_aperiodicity(m: &AdjacencyMatrices, p: &Presentation) -> (bool, bool) {
    let (connected, _) = flags(m);
    (connected, p.sizes().iter().all(|&s| s >= 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::enumerate_cubes;
    use crate::presentation::make_free_product;
    use crate::rank_graph::adjacency_matrices;

    #[test]
    fn all_ones_fails_zero_one_and_uce() {
        let ones = IncidenceMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        let m = AdjacencyMatrices {
            matrices: vec![ones.clone(), ones],
            color_sizes: None,
        };
        let r = validate_k_graph(&m, UceMode::Exhaustive);
        assert!(!r.zero_one_pass);
        assert!(!r.uce_pass);
        assert!(!r.is_k_graph);
        assert!(r.uce.witnesses[0].contains("2 D candidates"));
    }

    #[test]
    fn free_product_is_a_three_graph() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        let cubes = enumerate_cubes(&p, 3).unwrap();
        let m = adjacency_matrices(&cubes, &p.sizes()).unwrap();
        let r = validate_k_graph(&m, UceMode::Exhaustive);
        assert!(r.is_k_graph, "{:?}", r.witnesses);
        assert_eq!(r.uce.checked, 64 * 27);
        assert!(r.connected);
        assert_eq!(connectivity_aperiodicity(&m, &p), (true, true));
    }

    #[test]
    fn bfs_oracle_reaches_everything() {
        let p = make_free_product(&[2, 2, 2]).unwrap();
        let cubes = enumerate_cubes(&p, 3).unwrap();
        let m = adjacency_matrices(&cubes, &p.sizes()).unwrap();
        // independent closure: repeated boolean squaring of the union graph
        let n = m.n();
        let mut reach = vec![vec![false; n]; n];
        for x in &m.matrices {
            for (a, r) in x.rows.iter().enumerate() {
                for &(b, _) in r {
                    reach[a][b as usize] = true;
                }
            }
        }
        for mid in 0..n {
            for a in 0..n {
                if reach[a][mid] {
                    for b in 0..n {
                        if reach[mid][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
        }
        assert!(reach.iter().all(|r| r.iter().all(|&x| x)));
    }
}
