use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Integer matrix with arbitrary-precision entries, stored as sorted sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<(u32, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for (i, r) in m.data.iter_mut().enumerate() {
            r.push((i as u32, BigInt::one()));
        }
        m
    }

    pub fn from_dense(d: &[Vec<i64>]) -> Self {
        let cols = d.first().map_or(0, Vec::len);
        let data = d
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j as u32, BigInt::from(x)))
                    .collect()
            })
            .collect();
        IntMatrix {
            rows: d.len(),
            cols,
            data,
        }
    }

    /// Sums duplicate positions and drops zeros.
    pub fn from_triplets(rows: usize, cols: usize, mut entries: Vec<(usize, usize, BigInt)>) -> Self {
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut data: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); rows];
        for (i, j, x) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            let row = &mut data[i];
            match row.last_mut() {
                Some((c, v)) if *c as usize == j => *v += x,
                _ => row.push((j as u32, x)),
            }
        }
        for r in &mut data {
            r.retain(|e| !e.1.is_zero());
        }
        IntMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        let r = &self.data[i];
        match r.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(p) => r[p].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                d[i][*j as usize] = x.clone();
            }
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j as usize].push((i as u32, x.clone()));
            }
        }
        IntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: Vec<u32> = Vec::new();
        for r in &self.data {
            for (k, x) in r {
                for (j, y) in &other.data[*k as usize] {
                    if acc[*j as usize].is_zero() {
                        touched.push(*j);
                    }
                    acc[*j as usize] += x * y;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut row = Vec::new();
            for &j in &touched {
                let v = std::mem::take(&mut acc[j as usize]);
                if !v.is_zero() {
                    row.push((j, v));
                }
            }
            touched.clear();
            data.push(row);
        }
        IntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().map(|(j, x)| x * &v[*j as usize]).sum())
            .collect()
    }

    /// Rows reordered so that row i moves to row_perm[i], likewise for columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut data = vec![Vec::new(); self.rows];
        for (i, r) in self.data.iter().enumerate() {
            let mut row: Vec<(u32, BigInt)> =
                r.iter().map(|(j, x)| (col_perm[*j as usize] as u32, x.clone())).collect();
            row.sort_by_key(|e| e.0);
            data[row_perm[i]] = row;
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Text export: "rows cols", then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.rows, self.cols);
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(BigInt::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}
