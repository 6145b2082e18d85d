//! Smith normal form by sparse elimination.
//!
//! The pivot is the entry of least absolute value, first in row-major order.
//! Its column is cleared with row operations using rounded quotients; a
//! non-zero remainder becomes the new pivot. The pivot row is then cleared
//! with column operations, which touch only that row because the pivot
//! column is already empty. Once every pivot is isolated, a pass of 2x2
//! gcd/lcm moves turns the diagonal into a divisibility chain.
//!
//! Arithmetic runs in checked `i64` and restarts in `BigInt` on overflow.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::ring::Ring;

type Row<R> = Vec<(u32, R)>;

#[derive(Debug)]
struct Overflow;

/// dst + c·src, merged by column.
fn axpy<R: Ring>(dst: &[(u32, R)], c: &R, src: &[(u32, R)]) -> Result<Row<R>, Overflow> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
        let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
        if take_dst {
            out.push(dst[i].clone());
            i += 1;
        } else if take_src {
            out.push((src[j].0, c.mul(&src[j].1).ok_or(Overflow)?));
            j += 1;
        } else {
            let v = dst[i].1.add(&c.mul(&src[j].1).ok_or(Overflow)?).ok_or(Overflow)?;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn lookup<R: Ring>(row: &[(u32, R)], j: u32) -> Option<&R> {
    row.binary_search_by_key(&j, |e| e.0).ok().map(|p| &row[p].1)
}

/// 2x2 row combination: (x, y) <- (a·x + b·y, c·x + d·y).
fn combine<R: Ring>(x: &[(u32, R)], y: &[(u32, R)], m: [&R; 4]) -> Result<(Row<R>, Row<R>), Overflow> {
    let scale = |r: &[(u32, R)], s: &R| -> Result<Row<R>, Overflow> {
        r.iter()
            .map(|(j, v)| Ok((*j, v.mul(s).ok_or(Overflow)?)))
            .filter(|e| !matches!(e, Ok((_, v)) if v.is_zero()))
            .collect()
    };
    let nx = axpy(&scale(x, m[0])?, m[1], y)?;
    let ny = axpy(&scale(x, m[2])?, m[3], y)?;
    Ok((nx, ny))
}

struct Transforms<R> {
    u: Vec<Row<R>>,
    /// (U^-1)^T, stored by rows.
    w: Vec<Row<R>>,
    /// V^T, stored by rows.
    vt: Vec<Row<R>>,
    vinv: Vec<Row<R>>,
}

fn identity_rows<R: Ring>(n: usize) -> Vec<Row<R>> {
    (0..n).map(|i| vec![(i as u32, R::one())]).collect()
}

struct Engine<R> {
    rows: Vec<Row<R>>,
    col_rows: Vec<BTreeSet<u32>>,
    t: Option<Transforms<R>>,
}

struct Raw<R> {
    pivots: Vec<(usize, usize, R)>,
    t: Option<Transforms<R>>,
}

impl<R: Ring> Engine<R> {
    fn new(a: &IntMatrix, track: bool) -> Option<Self> {
        let mut rows = Vec::with_capacity(a.rows);
        let mut col_rows = vec![BTreeSet::new(); a.cols];
        for (i, r) in a.data.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, x) in r {
                row.push((*j, R::from_big(x)?));
                col_rows[*j as usize].insert(i as u32);
            }
            rows.push(row);
        }
        let t = track.then(|| Transforms {
            u: identity_rows(a.rows),
            w: identity_rows(a.rows),
            vt: identity_rows(a.cols),
            vinv: identity_rows(a.cols),
        });
        Some(Engine { rows, col_rows, t })
    }

    fn value(&self, i: usize, j: usize) -> Option<&R> {
        lookup(&self.rows[i], j as u32)
    }

    /// row_i += c·row_j
    fn row_op(&mut self, i: usize, j: usize, c: &R) -> Result<(), Overflow> {
        let new = axpy(&self.rows[i], c, &self.rows[j])?;
        for (col, _) in &self.rows[j] {
            if lookup(&new, *col).is_some() {
                self.col_rows[*col as usize].insert(i as u32);
            } else {
                self.col_rows[*col as usize].remove(&(i as u32));
            }
        }
        self.rows[i] = new;
        if let Some(t) = &mut self.t {
            t.u[i] = axpy(&t.u[i], c, &t.u[j])?;
            let nc = c.neg().ok_or(Overflow)?;
            t.w[j] = axpy(&t.w[j], &nc, &t.w[i])?;
        }
        Ok(())
    }

    /// col_j += c·col_p, where column p holds only row r.
    fn col_op_single(&mut self, r: usize, j: usize, p: usize, c: &R) -> Result<(), Overflow> {
        let src = vec![(j as u32, c.mul(self.value(r, p).unwrap()).ok_or(Overflow)?)];
        let new = axpy(&self.rows[r], &R::one(), &src)?;
        if lookup(&new, j as u32).is_some() {
            self.col_rows[j].insert(r as u32);
        } else {
            self.col_rows[j].remove(&(r as u32));
        }
        self.rows[r] = new;
        if let Some(t) = &mut self.t {
            t.vt[j] = axpy(&t.vt[j], c, &t.vt[p])?;
            let nc = c.neg().ok_or(Overflow)?;
            t.vinv[p] = axpy(&t.vinv[p], &nc, &t.vinv[j])?;
        }
        Ok(())
    }

    /// Smallest entry, ties broken by Markowitz cost to limit fill-in.
    fn find_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &R, usize)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                let cost = (r.len() - 1) * (self.col_rows[*j as usize].len() - 1);
                let better = best.is_none_or(|b| match x.abs_cmp(b.2) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => cost < b.3,
                    std::cmp::Ordering::Greater => false,
                });
                if better {
                    best = Some((i, *j as usize, x, cost));
                    if cost == 0 && x.is_unit() {
                        return Some((i, *j as usize));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    /// Isolates a pivot starting from (r, c); returns its final position.
    fn isolate(&mut self, mut r: usize, mut c: usize) -> Result<(usize, usize), Overflow> {
        loop {
            loop {
                let others: Vec<u32> = self.col_rows[c].iter().copied().filter(|&i| i as usize != r).collect();
                if others.is_empty() {
                    break;
                }
                let p = self.value(r, c).unwrap().clone();
                let mut next: Option<(usize, R)> = None;
                for i in others {
                    let i = i as usize;
                    let q = self.value(i, c).unwrap().nearest_div(&p).ok_or(Overflow)?;
                    self.row_op(i, r, &q.neg().ok_or(Overflow)?)?;
                    if let Some(rem) = self.value(i, c) {
                        if next.as_ref().is_none_or(|n| rem.abs_cmp(&n.1).is_lt()) {
                            next = Some((i, rem.clone()));
                        }
                    }
                }
                if let Some((i, _)) = next {
                    r = i;
                }
            }
            let p = self.value(r, c).unwrap().clone();
            let entries: Vec<(u32, R)> = self.rows[r].iter().filter(|e| e.0 as usize != c).cloned().collect();
            for (j, x) in entries {
                let q = x.nearest_div(&p).ok_or(Overflow)?;
                self.col_op_single(r, j as usize, c, &q.neg().ok_or(Overflow)?)?;
            }
            let rest = self.rows[r]
                .iter()
                .filter(|e| e.0 as usize != c)
                .min_by(|a, b| a.1.abs_cmp(&b.1).then(a.0.cmp(&b.0)));
            match rest {
                None => return Ok((r, c)),
                Some((j, _)) => c = *j as usize,
            }
        }
    }

    fn run(mut self) -> Result<Raw<R>, Overflow> {
        let mut pivots = Vec::new();
        while let Some((r0, c0)) = self.find_pivot() {
            let (r, c) = self.isolate(r0, c0)?;
            let v = self.value(r, c).unwrap().clone();
            self.rows[r].clear();
            self.col_rows[c].remove(&(r as u32));
            pivots.push((r, c, v));
        }
        Ok(Raw { pivots, t: self.t })
    }
}

/// Applies the 2x2 move taking diag(a, b) at pivots s < t to diag(g, ab/g).
fn gcd_lcm_move<R: Ring>(raw: &mut Raw<R>, s: usize, t: usize) -> Result<(), Overflow> {
    let (rs, cs, a) = raw.pivots[s].clone();
    let (rt, ct, b) = raw.pivots[t].clone();
    let (g, x, y) = a.ext_gcd(&b).ok_or(Overflow)?;
    let ag = a.exact_div(&g);
    let bg = b.exact_div(&g);
    let lcm = ag.mul(&b).ok_or(Overflow)?;
    if let Some(tr) = &mut raw.t {
        // L = [[x, y], [-b/g, a/g]] on rows; L^-1 = [[a/g, -y], [b/g, x]]
        let nbg = bg.neg().ok_or(Overflow)?;
        let ny = y.neg().ok_or(Overflow)?;
        let (u1, u2) = combine(&tr.u[rs], &tr.u[rt], [&x, &y, &nbg, &ag])?;
        tr.u[rs] = u1;
        tr.u[rt] = u2;
        // W <- (L^-1)^T W
        let (w1, w2) = combine(&tr.w[rs], &tr.w[rt], [&ag, &bg, &ny, &x])?;
        tr.w[rs] = w1;
        tr.w[rt] = w2;
        // R = [[1, -y·b/g], [1, x·a/g]] on columns; R^-1 = [[x·a/g, y·b/g], [-1, 1]]
        let r01 = y.mul(&bg).ok_or(Overflow)?.neg().ok_or(Overflow)?;
        let r11 = x.mul(&ag).ok_or(Overflow)?;
        let one = R::one();
        let (v1, v2) = combine(&tr.vt[cs], &tr.vt[ct], [&one, &one, &r01, &r11])?;
        tr.vt[cs] = v1;
        tr.vt[ct] = v2;
        let yb = y.mul(&bg).ok_or(Overflow)?;
        let mone = one.neg().ok_or(Overflow)?;
        let (i1, i2) = combine(&tr.vinv[cs], &tr.vinv[ct], [&r11, &yb, &mone, &one])?;
        tr.vinv[cs] = i1;
        tr.vinv[ct] = i2;
    }
    raw.pivots[s].2 = g;
    raw.pivots[t].2 = lcm;
    Ok(())
}

fn normalize<R: Ring>(raw: &mut Raw<R>) -> Result<(), Overflow> {
    // units first, then the rest in elimination order
    let (units, rest): (Vec<_>, Vec<_>) = raw.pivots.drain(..).partition(|p| p.2.is_unit());
    raw.pivots = units.into_iter().chain(rest).collect();
    let first = raw.pivots.iter().position(|p| !p.2.is_unit()).unwrap_or(raw.pivots.len());
    for s in first..raw.pivots.len() {
        for t in s + 1..raw.pivots.len() {
            if !raw.pivots[s].2.divides(&raw.pivots[t].2) {
                gcd_lcm_move(raw, s, t)?;
            }
        }
    }
    for s in 0..raw.pivots.len() {
        if raw.pivots[s].2.is_negative() {
            let (r, _, v) = raw.pivots[s].clone();
            raw.pivots[s].2 = v.neg().ok_or(Overflow)?;
            if let Some(tr) = &mut raw.t {
                for row in [&mut tr.u[r], &mut tr.w[r]] {
                    for e in row.iter_mut() {
                        e.1 = e.1.neg().ok_or(Overflow)?;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Unimodular U, V with U·A·V = S, together with their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfTransforms {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rows: usize,
    pub cols: usize,
    /// Non-zero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<SnfTransforms>,
}

impl SnfResult {
    /// The diagonal matrix S.
    pub fn diagonal(&self) -> IntMatrix {
        let entries = self.divisors.iter().enumerate().map(|(i, d)| (i, i, d.clone())).collect();
        IntMatrix::from_triplets(self.rows, self.cols, entries)
    }

    pub fn unit_count(&self) -> usize {
        self.divisors.iter().filter(|d| d.is_one()).count()
    }

    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

fn rows_to_matrix<R: Ring>(rows: &[Row<R>], order: &[usize], cols: usize) -> IntMatrix {
    let data = order
        .iter()
        .map(|&i| rows[i].iter().map(|(j, x)| (*j, x.to_big())).collect())
        .collect();
    IntMatrix {
        rows: order.len(),
        cols,
        data,
    }
}

fn finish<R: Ring>(raw: Raw<R>, rows: usize, cols: usize) -> SnfResult {
    let divisors: Vec<BigInt> = raw.pivots.iter().map(|p| p.2.to_big()).collect();
    let rank = divisors.len();
    let transforms = raw.t.map(|t| {
        let order = |pivot_index: fn(&(usize, usize, R)) -> usize, n: usize| {
            let mut seen = vec![false; n];
            let mut o: Vec<usize> = raw.pivots.iter().map(pivot_index).collect();
            for &i in &o {
                seen[i] = true;
            }
            o.extend((0..n).filter(|&i| !seen[i]));
            o
        };
        let row_order = order(|p| p.0, rows);
        let col_order = order(|p| p.1, cols);
        // U' = P U, (U'^-1)^T = P (U^-1)^T, V'^T = Q^T V^T, V'^-1 = Q^T V^-1
        let u = rows_to_matrix(&t.u, &row_order, rows);
        let w = rows_to_matrix(&t.w, &row_order, rows);
        let vt = rows_to_matrix(&t.vt, &col_order, cols);
        let v_inv = rows_to_matrix(&t.vinv, &col_order, cols);
        SnfTransforms {
            u,
            u_inv: w.transpose(),
            v: vt.transpose(),
            v_inv,
        }
    });
    SnfResult {
        rows,
        cols,
        divisors,
        rank,
        transforms,
    }
}

fn compute<R: Ring>(a: &IntMatrix, track: bool) -> Option<Result<SnfResult, ()>> {
    let engine = Engine::<R>::new(a, track)?;
    let mut raw = match engine.run() {
        Ok(r) => r,
        Err(Overflow) => return Some(Err(())),
    };
    if normalize(&mut raw).is_err() {
        return Some(Err(()));
    }
    Some(Ok(finish(raw, a.rows, a.cols)))
}

static AUDIT: AtomicBool = AtomicBool::new(false);
static AUDITED: AtomicUsize = AtomicUsize::new(0);

/// When on, every SNF call also builds U, V and checks them with
/// [`verify_snf`], panicking on failure.
pub fn set_snf_audit(on: bool) {
    AUDIT.store(on, Ordering::SeqCst);
}

/// Number of SNF calls checked while the audit was on.
pub fn snf_audit_count() -> usize {
    AUDITED.load(Ordering::SeqCst)
}

fn snf(a: &IntMatrix, track: bool) -> SnfResult {
    if AUDIT.load(Ordering::SeqCst) {
        let mut r = raw_snf(a, true);
        if let Err(e) = verify_snf(a, &r) {
            panic!("SNF audit failed on a {}x{} matrix: {e}", a.rows, a.cols);
        }
        AUDITED.fetch_add(1, Ordering::SeqCst);
        if !track {
            r.transforms = None;
        }
        return r;
    }
    raw_snf(a, track)
}

fn raw_snf(a: &IntMatrix, track: bool) -> SnfResult {
    match compute::<i64>(a, track) {
        Some(Ok(r)) => r,
        _ => match compute::<BigInt>(a, track) {
            Some(Ok(r)) => r,
            _ => unreachable!("BigInt arithmetic does not overflow"),
        },
    }
}

/// Divisors and rank only.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    snf(a, false)
}

/// Also returns U, V and their inverses.
pub fn smith_normal_form_with_transforms(a: &IntMatrix) -> SnfResult {
    snf(a, true)
}

/// Determinant by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    let mut m = a.to_dense();
    let mut sign = <BigInt as One>::one();
    let mut prev = <BigInt as One>::one();
    for k in 0..n {
        if Zero::is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !Zero::is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return <BigInt as Zero>::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return <BigInt as One>::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Largest size at which verification also computes determinants.
pub const DETERMINANT_CHECK_LIMIT: usize = 128;

/// Exact re-check of an SNF: diagonal shape, divisor chain, U·A·V = S, and
/// unimodularity of U and V (via their inverses, plus determinants when small).
pub fn verify_snf(a: &IntMatrix, r: &SnfResult) -> Result<(), String> {
    if r.divisors.iter().any(|d| !d.is_positive()) {
        return Err("non-positive divisor".into());
    }
    if r.divisors.windows(2).any(|w| !Zero::is_zero(&(&w[1] % &w[0]))) {
        return Err("divisors do not form a chain".into());
    }
    let Some(t) = &r.transforms else {
        return Ok(());
    };
    if t.u.mul(a).mul(&t.v) != r.diagonal() {
        return Err("U·A·V differs from S".into());
    }
    if t.u.mul(&t.u_inv) != IntMatrix::identity(a.rows) {
        return Err("U·U^-1 is not the identity".into());
    }
    if t.v.mul(&t.v_inv) != IntMatrix::identity(a.cols) {
        return Err("V·V^-1 is not the identity".into());
    }
    for (name, m) in [("U", &t.u), ("V", &t.v)] {
        if m.rows <= DETERMINANT_CHECK_LIMIT && determinant(m).magnitude() != &One::one() {
            return Err(format!("det {name} is not ±1"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(d: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_dense(d))
            .divisors
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(divisors(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(divisors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(divisors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(divisors(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]]), vec![2, 2, 60]);
    }

    #[test]
    fn transforms_verify() {
        for d in [
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]],
            vec![vec![3, 5, 7, 0], vec![1, -2, 4, 9], vec![6, 10, 14, 0]],
            vec![vec![0, 2], vec![0, 0], vec![4, 0]],
        ] {
            let a = IntMatrix::from_dense(&d);
            let r = smith_normal_form_with_transforms(&a);
            verify_snf(&a, &r).unwrap();
            assert_eq!(r.divisors, smith_normal_form(&a).divisors);
        }
    }

    #[test]
    fn identity_keeps_identity_transforms_valid() {
        let a = IntMatrix::identity(4);
        let r = smith_normal_form_with_transforms(&a);
        assert_eq!(r.diagonal(), a);
        verify_snf(&a, &r).unwrap();
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let a = IntMatrix::from_dense(&[vec![big, big - 1], vec![big - 2, big - 7]]);
        let r = smith_normal_form_with_transforms(&a);
        verify_snf(&a, &r).unwrap();
        let det = determinant(&a);
        let prod: BigInt = r.divisors.iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = IntMatrix::from_dense(&[vec![2, -1, 3], vec![0, 4, 5], vec![1, 1, -2]]);
        // 2(−8−5) − (−1)(0−5) + 3(0−4)
        assert_eq!(determinant(&a), BigInt::from(2 * (-13) - 5 - 12));
    }
}
