//! K-theory statements derived from the homology of the chain complex.
//!
//! For k = 3, 4, 5 the K-groups sit in short exact sequences whose outer
//! terms are homology groups, quotients of them, and unknown subgroups G_i.
//! The unknowns are kept symbolic. The only resolution performed is rank
//! arithmetic: K_0 and K_1 have equal torsion-free rank, and when K-groups
//! are supplied from outside (a Künneth computation, say) each unknown whose
//! rank is forced and whose container is free becomes concrete.

mod identity;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::homology::AbelianGroup;

pub use identity::{identity_order_bounds, IdentityCase, IdentityOrderBounds};

/// A term of an exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Zero,
    /// H_p of the complex.
    H(usize),
    /// A named unknown: G_i, F_2, F_3, K_0, K_1.
    Named(String),
    Quotient(Box<Term>, Box<Term>),
}

impl Term {
    pub fn named(s: &str) -> Term {
        Term::Named(s.to_string())
    }
    fn quo(a: Term, b: Term) -> Term {
        Term::Quotient(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::H(p) => write!(f, "H_{p}"),
            Term::Named(s) => write!(f, "{s}"),
            Term::Quotient(a, b) => {
                let wrap = |t: &Term| match t {
                    Term::Quotient(..) => format!("({t})"),
                    _ => t.to_string(),
                };
                write!(f, "{}/{}", wrap(a), wrap(b))
            }
        }
    }
}

/// 0 → left → middle → right → 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactSequence {
    pub label: String,
    pub left: Term,
    pub middle: Term,
    pub right: Term,
    pub splits: bool,
}

impl fmt::Display for ExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) 0 -> {} -> {} -> {} -> 0", self.label, self.left, self.middle, self.right)?;
        if self.splits {
            write!(f, "  [splits]")?;
        }
        Ok(())
    }
}

/// An unknown subgroup, with the group containing it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Unknown {
    pub name: String,
    pub container: Term,
    pub container_group: Option<AbelianGroup>,
    /// Upper bound on the rank, shared with the other members of `bound_with`.
    pub rank_bound: usize,
    pub bound_with: Vec<String>,
}

/// What is known about a term: the group, or only its torsion-free rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Value {
    Exact(AbelianGroup),
    Rank(usize),
    /// A finite group known only by its order.
    Order(BigUint),
}

impl Value {
    pub fn rank(&self) -> usize {
        match self {
            Value::Exact(g) => g.free_rank,
            Value::Rank(r) => *r,
            Value::Order(_) => 0,
        }
    }

    /// Order when the group is known to be finite.
    pub fn order(&self) -> Option<BigUint> {
        match self {
            Value::Exact(g) => g.order(),
            Value::Rank(_) => None,
            Value::Order(n) => Some(n.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(g) => write!(f, "{g}"),
            Value::Rank(r) => write!(f, "rank {r}"),
            Value::Order(n) => write!(f, "finite of order {n}"),
        }
    }
}

/// r = constant + Σ sign·rank(group of unknowns).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankEquation {
    pub target: String,
    pub constant: i64,
    pub terms: Vec<(i64, Vec<String>, usize)>,
}

impl RankEquation {
    fn range(&self) -> (i64, i64) {
        let mut lo = self.constant;
        let mut hi = self.constant;
        for (s, _, bound) in &self.terms {
            let b = *bound as i64;
            if *s > 0 {
                hi += s * b;
            } else {
                lo += s * b;
            }
        }
        (lo.max(0), hi)
    }

    /// Solves for the term ranks when `value` pins them down uniquely.
    fn solve(&self, value: i64) -> Option<Vec<i64>> {
        let (lo, hi) = self.range();
        if value < lo || value > hi {
            return None;
        }
        let raw_lo: i64 = self.constant + self.terms.iter().filter(|t| t.0 < 0).map(|t| t.0 * t.2 as i64).sum::<i64>();
        if self.terms.len() == 1 {
            let (s, _, _) = &self.terms[0];
            return Some(vec![(value - self.constant) / s]);
        }
        if value == raw_lo {
            return Some(self.terms.iter().map(|t| if t.0 < 0 { t.2 as i64 } else { 0 }).collect());
        }
        if value == hi {
            return Some(self.terms.iter().map(|t| if t.0 > 0 { t.2 as i64 } else { 0 }).collect());
        }
        None
    }
}

impl fmt::Display for RankEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {} = {}", self.target, self.constant)?;
        for (s, names, _) in &self.terms {
            let op = if *s > 0 { '+' } else { '-' };
            if names.len() == 1 {
                write!(f, " {op} rank {}", names[0])?;
            } else {
                write!(f, " {op} rank({})", names.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KTheoryReport {
    pub k: usize,
    pub homologies: Vec<AbelianGroup>,
    pub sequences: Vec<ExactSequence>,
    /// K_1 written as a direct sum, where the statement gives one.
    pub isomorphisms: Vec<(Term, Vec<Term>)>,
    pub unknowns: Vec<Unknown>,
    pub rank_equations: Vec<RankEquation>,
    /// Inclusive range for the common torsion-free rank r of K_0 and K_1.
    pub rank_interval: Option<(usize, usize)>,
    pub resolved: BTreeMap<String, Value>,
    pub k0_description: String,
    pub k1_description: String,
    pub corollaries: Vec<String>,
    pub notes: Vec<String>,
}

/// Optional outside knowledge of K_0 and K_1.
#[derive(Clone, Debug, Default)]
pub struct KTheoryInput {
    pub k0: Option<AbelianGroup>,
    pub k1: Option<AbelianGroup>,
}

struct Builder<'a> {
    h: &'a [AbelianGroup],
    sequences: Vec<ExactSequence>,
    isomorphisms: Vec<(Term, Vec<Term>)>,
    unknowns: Vec<Unknown>,
    equations: Vec<RankEquation>,
    corollaries: Vec<String>,
    notes: Vec<String>,
}

impl<'a> Builder<'a> {
    fn b(&self, p: usize) -> usize {
        self.h[p].free_rank
    }

    fn seq(&mut self, label: &str, left: Term, middle: Term, right: Term, splits: bool) {
        self.sequences.push(ExactSequence {
            label: label.into(),
            left,
            middle,
            right,
            splits,
        });
    }

    fn unknown(&mut self, name: &str, container: Term, bound: usize, bound_with: &[&str]) {
        let container_group = match &container {
            Term::H(p) => Some(self.h[*p].clone()),
            Term::Quotient(a, _) if matches!(**a, Term::H(p) if self.h[p].is_trivial()) => Some(AbelianGroup::trivial()),
            _ => None,
        };
        self.unknowns.push(Unknown {
            name: name.into(),
            container,
            container_group,
            rank_bound: bound,
            bound_with: bound_with.iter().map(|s| s.to_string()).collect(),
        });
    }

    fn eq(&mut self, target: &str, constant: usize, terms: &[(i64, &[&str], usize)]) {
        self.equations.push(RankEquation {
            target: target.into(),
            constant: constant as i64,
            terms: terms
                .iter()
                .map(|(s, n, b)| (*s, n.iter().map(|x| x.to_string()).collect(), *b))
                .collect(),
        });
    }
}

fn g(i: usize) -> Term {
    Term::Named(format!("G_{i}"))
}

fn build_k3(bd: &mut Builder) {
    let (b0, b1, b2, b3) = (bd.b(0), bd.b(1), bd.b(2), bd.b(3));
    bd.unknown("G_0", Term::H(0), b0, &[]);
    bd.unknown("G_1", Term::H(3), b3, &[]);
    bd.seq("K_0", Term::quo(Term::H(0), g(0)), Term::named("K_0"), Term::H(2), false);
    bd.isomorphisms.push((Term::named("K_1"), vec![Term::H(1), g(1)]));
    bd.eq("K_0", b0 + b2, &[(-1, &["G_0"], b0)]);
    bd.eq("K_1", b1, &[(1, &["G_1"], b3)]);
    if bd.h[0].is_trivial() {
        bd.corollaries
            .push("boundary 1 is surjective: K_0 = H_2 and K_1 = H_1 + H_3".into());
    }
    if bd.h[3].is_trivial() {
        bd.corollaries.push(
            "the kernels of I - M_i^T meet in 0: 0 -> H_0 -> K_0 -> H_2 -> 0 and K_1 = H_1".into(),
        );
    }
}

fn build_k4(bd: &mut Builder) {
    let (b0, b1, b2, b3, b4) = (bd.b(0), bd.b(1), bd.b(2), bd.b(3), bd.b(4));
    bd.unknown("G_0", Term::H(0), b0, &[]);
    bd.unknown("G_1", Term::H(4), b4, &[]);
    bd.unknown("G_2", Term::H(1), b1, &[]);
    bd.unknown("G_3", Term::H(3), b3, &[]);
    let a = Term::quo(Term::H(0), g(0));
    bd.seq("i", a.clone(), Term::named("K_0"), Term::quo(Term::named("K_0"), a.clone()), false);
    bd.seq("ii", a, Term::named("F_2"), Term::H(2), false);
    bd.seq("iii", Term::named("F_2"), Term::named("K_0"), g(1), true);
    bd.seq("iv", Term::quo(Term::H(1), g(2)), Term::named("K_1"), g(3), false);
    bd.eq("K_0", b0 + b2, &[(-1, &["G_0"], b0), (1, &["G_1"], b4)]);
    bd.eq("K_1", b1, &[(-1, &["G_2"], b1), (1, &["G_3"], b3)]);
    if bd.h[0].is_trivial() {
        bd.corollaries.push(
            "boundary 1 is surjective: F_2 = H_2, K_0 = H_2 + G_1, 0 -> H_1/G_2 -> K_1 -> H_3 -> 0".into(),
        );
    }
    if bd.h[4].is_trivial() {
        bd.corollaries.push(
            "the kernels of I - M_i^T meet in 0: K_0 = F_2, G_1 = G_2 = 0, 0 -> H_0/G_0 -> K_0 -> H_2 -> 0, \
             0 -> H_1 -> K_1 -> G_3 -> 0"
                .into(),
        );
    }
}

fn build_k5(bd: &mut Builder) {
    let (b0, b1, b2, b3, b4, b5) = (bd.b(0), bd.b(1), bd.b(2), bd.b(3), bd.b(4), bd.b(5));
    bd.unknown("G_0", Term::H(0), b0, &["G_1"]);
    bd.unknown("G_1", Term::quo(Term::H(0), g(0)), b0, &["G_0"]);
    bd.unknown("G_2", Term::H(2), b2, &[]);
    bd.unknown("G_3", Term::H(4), b4, &[]);
    bd.unknown("G_4", Term::H(5), b5, &[]);
    bd.unknown("G_5", Term::H(1), b1, &[]);
    bd.unknown("G_6", Term::H(3), b3, &[]);
    let a = Term::quo(Term::quo(Term::H(0), g(0)), g(1));
    bd.seq("i", a.clone(), Term::named("K_0"), Term::quo(Term::named("K_0"), Term::named("A")), false);
    bd.seq("ii", Term::named("A"), Term::named("F_2"), Term::quo(Term::H(2), g(2)), false);
    bd.seq("iii", Term::named("F_2"), Term::named("K_0"), g(3), false);
    bd.seq("F_3", Term::quo(Term::H(1), g(5)), Term::named("F_3"), g(6), false);
    bd.isomorphisms.push((Term::named("A"), vec![a]));
    bd.isomorphisms.push((Term::named("K_1"), vec![Term::named("F_3"), g(4)]));
    bd.eq(
        "K_0",
        b0 + b2,
        &[(-1, &["G_0", "G_1"], b0), (-1, &["G_2"], b2), (1, &["G_3"], b4)],
    );
    bd.eq("K_1", b1, &[(-1, &["G_5"], b1), (1, &["G_6"], b3), (1, &["G_4"], b5)]);
    bd.notes.push("the differentials behind G_0 and G_1 are not known explicitly; both stay symbolic".into());
}

fn intersect(equations: &[RankEquation]) -> Option<(usize, usize)> {
    let mut lo = 0i64;
    let mut hi = i64::MAX;
    for e in equations {
        let (a, b) = e.range();
        lo = lo.max(a);
        hi = hi.min(b);
    }
    (lo <= hi).then_some((lo as usize, hi as usize))
}

/// Exact sequences and rank bounds for K_*(A(Λ)) from H_0..H_k.
pub fn ktheory_report(h: &[AbelianGroup], input: &KTheoryInput) -> KTheoryReport {
    let k = h.len().saturating_sub(1);
    let mut bd = Builder {
        h,
        sequences: Vec::new(),
        isomorphisms: Vec::new(),
        unknowns: Vec::new(),
        equations: Vec::new(),
        corollaries: Vec::new(),
        notes: Vec::new(),
    };
    match k {
        3 => build_k3(&mut bd),
        4 => build_k4(&mut bd),
        5 => build_k5(&mut bd),
        _ => bd
            .notes
            .push(format!("no exact sequences are available for k = {k}; only homology is reported")),
    }
    let Builder {
        sequences,
        isomorphisms,
        unknowns,
        equations,
        corollaries,
        mut notes,
        ..
    } = bd;
    let rank_interval = if equations.is_empty() { None } else { intersect(&equations) };

    let mut resolved = BTreeMap::new();
    if let Some(k0) = &input.k0 {
        resolved.insert("K_0".to_string(), Value::Exact(k0.clone()));
    }
    if let Some(k1) = &input.k1 {
        resolved.insert("K_1".to_string(), Value::Exact(k1.clone()));
    }
    for u in &unknowns {
        if u.container_group.as_ref().is_some_and(AbelianGroup::is_trivial) {
            resolved.insert(u.name.clone(), Value::Exact(AbelianGroup::trivial()));
        }
    }
    // Vanishing of H_k kills the unknowns fed by it.
    if h.len() > 3 && h[k].is_trivial() {
        let killed: &[&str] = match k {
            3 => &["G_0"],
            4 => &["G_1", "G_2"],
            _ => &[],
        };
        for n in killed {
            resolved.insert(n.to_string(), Value::Exact(AbelianGroup::trivial()));
        }
    }
    let given_rank = input
        .k0
        .as_ref()
        .or(input.k1.as_ref())
        .map(|g| g.free_rank)
        .or(rank_interval.and_then(|(lo, hi)| (lo == hi).then_some(lo)));
    if let (Some(a), Some(b)) = (&input.k0, &input.k1) {
        if a.free_rank != b.free_rank {
            notes.push(format!(
                "supplied K_0 and K_1 have different torsion-free ranks ({} and {})",
                a.free_rank, b.free_rank
            ));
        }
    }
    if let Some(r) = given_rank {
        if rank_interval.is_some_and(|(lo, hi)| r < lo || r > hi) {
            notes.push(format!("supplied torsion-free rank {r} lies outside the derived range"));
        }
        for e in &equations {
            let Some(ranks) = e.solve(r as i64) else {
                continue;
            };
            for ((_, names, _), rank) in e.terms.iter().zip(ranks) {
                if names.len() != 1 {
                    continue;
                }
                let u = unknowns.iter().find(|u| u.name == names[0]).expect("unknown");
                let value = match &u.container_group {
                    Some(c) if c.is_free() => Value::Exact(AbelianGroup::free(rank as usize)),
                    _ => Value::Rank(rank as usize),
                };
                resolved.entry(u.name.clone()).or_insert(value);
            }
        }
    }

    let (k0_description, k1_description) = describe(k, h, rank_interval, input);
    if let Some((lo, hi)) = rank_interval {
        if lo < hi && (3..=5).contains(&k) {
            let odd: Vec<String> = (1..=k).step_by(2).map(|p| format!("H_{p}")).collect();
            notes.push(format!(
                "if the HK conjecture holds, K_1 = {} and r is maximal in [{lo}, {hi}]",
                odd.join(" + ")
            ));
        }
    }
    let mut report = KTheoryReport {
        k,
        homologies: h.to_vec(),
        sequences,
        isomorphisms,
        unknowns,
        rank_equations: equations,
        rank_interval,
        resolved,
        k0_description,
        k1_description,
        corollaries,
        notes,
    };
    // sharpen the descriptions when the sequences pin a group down
    for (name, supplied) in [("K_0", input.k0.is_some()), ("K_1", input.k1.is_some())] {
        if supplied {
            continue;
        }
        if let Some(Value::Exact(g)) = report.evaluate(&Term::named(name)) {
            let d = if name == "K_0" { &mut report.k0_description } else { &mut report.k1_description };
            *d = g.to_string();
        }
    }
    report
}

fn describe(
    k: usize,
    h: &[AbelianGroup],
    interval: Option<(usize, usize)>,
    input: &KTheoryInput,
) -> (String, String) {
    let (rank, range) = match interval {
        Some((lo, hi)) if lo == hi => (format!("Z^{lo}"), String::new()),
        Some((lo, hi)) => ("Z^r".to_string(), format!(", {lo} <= r <= {hi}")),
        None => ("Z^r".to_string(), String::new()),
    };
    let with_torsion = |t: &AbelianGroup| {
        if t.is_trivial() {
            format!("{rank}{range}")
        } else {
            format!("{rank} + {t}{range}")
        }
    };
    let (mut k0, mut k1) = match k {
        3 if h[0].is_trivial() => (h[2].to_string(), h[1].direct_sum(&h[3]).to_string()),
        3 => (
            format!("torsion-free part {rank}{range}; torsion not determined"),
            with_torsion(&h[1].torsion_part()),
        ),
        4 | 5 => {
            let d = format!("torsion-free part {rank}{range}; torsion not determined");
            (d.clone(), d)
        }
        _ => ("not determined".into(), "not determined".into()),
    };
    if let Some(g) = &input.k0 {
        k0 = format!("{g} (supplied)");
    }
    if let Some(g) = &input.k1 {
        k1 = format!("{g} (supplied)");
    }
    (k0, k1)
}

impl KTheoryReport {
    /// The value of a term, when the homology and resolved unknowns fix it.
    pub fn evaluate(&self, t: &Term) -> Option<Value> {
        match t {
            Term::Zero => Some(Value::Exact(AbelianGroup::trivial())),
            Term::H(p) => Some(Value::Exact(self.homologies[*p].clone())),
            Term::Named(n) => self.resolved.get(n).cloned().or_else(|| self.derived(n)),
            Term::Quotient(a, b) => {
                let a = self.evaluate(a)?;
                let b = self.evaluate(b)?;
                match (&b, a.order(), b.order()) {
                    (Value::Exact(g), _, _) if g.is_trivial() => Some(a),
                    (_, Some(x), Some(y)) if (&x % &y) == BigUint::ZERO => Some(Value::Order(x / y)),
                    _ => a.rank().checked_sub(b.rank()).map(Value::Rank),
                }
            }
        }
    }

    /// Named terms defined as middles of sequences whose ends are known.
    fn derived(&self, name: &str) -> Option<Value> {
        if let Some((_, parts)) = self.isomorphisms.iter().find(|(t, _)| *t == Term::Named(name.into())) {
            let vals: Option<Vec<Value>> = parts.iter().map(|p| self.evaluate(p)).collect();
            let vals = vals?;
            if vals.iter().all(|v| matches!(v, Value::Exact(_))) {
                let mut acc = AbelianGroup::trivial();
                for v in vals {
                    if let Value::Exact(g) = v {
                        acc = acc.direct_sum(&g);
                    }
                }
                return Some(Value::Exact(acc));
            }
            let orders: Option<Vec<BigUint>> = vals.iter().map(Value::order).collect();
            return Some(match orders {
                Some(o) => Value::Order(o.iter().product()),
                None => Value::Rank(vals.iter().map(Value::rank).sum()),
            });
        }
        let middle = Term::Named(name.into());
        let s = self
            .sequences
            .iter()
            .filter(|s| s.middle == middle)
            .find(|s| !matches!(s.right, Term::Quotient(ref m, _) if **m == middle))?;
        let l = self.evaluate(&s.left)?;
        let r = self.evaluate(&s.right)?;
        match (&l, &r) {
            (Value::Exact(a), _) if a.is_trivial() => Some(r),
            (_, Value::Exact(b)) if b.is_trivial() => Some(l),
            (Value::Exact(a), Value::Exact(b)) if a.is_free() && b.is_free() => Some(Value::Exact(a.direct_sum(b))),
            (Value::Exact(a), Value::Exact(b)) if s.splits => Some(Value::Exact(a.direct_sum(b))),
            _ => match (l.order(), r.order()) {
                (Some(a), Some(b)) => Some(Value::Order(a * b)),
                _ => Some(Value::Rank(l.rank() + r.rank())),
            },
        }
    }

    /// Rank additivity on every sequence whose three terms are known.
    pub fn check_sequences(&self) -> Result<(), String> {
        for s in &self.sequences {
            let (Some(l), Some(m), Some(r)) = (self.evaluate(&s.left), self.evaluate(&s.middle), self.evaluate(&s.right))
            else {
                continue;
            };
            if l.rank() + r.rank() != m.rank() {
                return Err(format!("{s}: ranks {} + {} != {}", l.rank(), r.rank(), m.rank()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for KTheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}", self.k)?;
        for (p, g) in self.homologies.iter().enumerate() {
            writeln!(f, "H_{p} = {g}")?;
        }
        for u in &self.unknowns {
            write!(f, "{} is a subgroup of {}", u.name, u.container)?;
            match &u.container_group {
                Some(c) => writeln!(f, " = {c}")?,
                None => writeln!(f)?,
            }
        }
        for s in &self.sequences {
            writeln!(f, "{s}")?;
        }
        for (t, parts) in &self.isomorphisms {
            let rhs: Vec<String> = parts.iter().map(Term::to_string).collect();
            writeln!(f, "{t} = {}", rhs.join(" + "))?;
        }
        for e in &self.rank_equations {
            writeln!(f, "{e}")?;
        }
        if let Some((lo, hi)) = self.rank_interval {
            writeln!(f, "r in [{lo}, {hi}]")?;
        }
        for (n, v) in &self.resolved {
            writeln!(f, "{n} = {v}")?;
        }
        writeln!(f, "K_0: {}", self.k0_description)?;
        writeln!(f, "K_1: {}", self.k1_description)?;
        for c in &self.corollaries {
            writeln!(f, "corollary: {c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(s: &str) -> AbelianGroup {
        s.parse().unwrap()
    }

    fn hs(v: &[&str]) -> Vec<AbelianGroup> {
        v.iter().map(|s| grp(s)).collect()
    }

    #[test]
    fn free_cube_of_rank_three() {
        let h = hs(&["Z^8", "Z^24", "Z^24", "Z^8"]);
        let input = KTheoryInput {
            k0: Some(grp("Z^32")),
            k1: Some(grp("Z^32")),
        };
        let r = ktheory_report(&h, &input);
        assert_eq!(r.rank_interval, Some((24, 32)));
        assert_eq!(r.resolved["G_0"], Value::Exact(AbelianGroup::trivial()));
        assert_eq!(r.resolved["G_1"], Value::Exact(grp("Z^8")));
        r.check_sequences().unwrap();
    }

    #[test]
    fn rank_range_for_torsion_example() {
        let h = hs(&[
            "Z^7 + (Z/4)^2 + Z/12",
            "Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2",
            "Z^21 + (Z/4)^2 + Z/12",
            "Z^7",
        ]);
        let r = ktheory_report(&h, &KTheoryInput::default());
        assert_eq!(r.rank_interval, Some((21, 28)));
        assert_eq!(r.k1_description, "Z^r + (Z/2)^6 + (Z/4)^2 + (Z/12)^2, 21 <= r <= 28");
        assert!(r.notes.iter().any(|n| n.starts_with("if the HK conjecture holds")));
    }

    #[test]
    fn vanishing_top_homology_resolves_unknowns() {
        let h = hs(&["Z/5", "(Z/5)^2", "Z/5", "0"]);
        let r = ktheory_report(&h, &KTheoryInput::default());
        assert_eq!(r.evaluate(&Term::named("K_1")), Some(Value::Exact(grp("(Z/5)^2"))));
        assert_eq!(r.evaluate(&Term::named("K_0")), Some(Value::Order(25u32.into())));
        let trivial = hs(&["0", "0", "0", "0", "0", "0"]);
        let r = ktheory_report(&trivial, &KTheoryInput::default());
        for n in ["K_0", "K_1"] {
            assert_eq!(r.evaluate(&Term::named(n)), Some(Value::Exact(AbelianGroup::trivial())), "{n}");
        }
    }

    #[test]
    fn rank_four_free() {
        let h = hs(&["Z^16", "Z^64", "Z^96", "Z^64", "Z^16"]);
        let input = KTheoryInput {
            k0: Some(grp("Z^128")),
            k1: Some(grp("Z^128")),
        };
        let r = ktheory_report(&h, &input);
        assert_eq!(r.sequences.len(), 4);
        assert_eq!(r.resolved["G_2"], Value::Exact(AbelianGroup::trivial()));
        assert_eq!(r.resolved["G_3"], Value::Exact(grp("Z^64")));
        let g01 = r.resolved["G_0"].rank() + r.resolved["G_1"].rank();
        assert_eq!(g01, 16);
        r.check_sequences().unwrap();
    }

    #[test]
    fn surjective_boundary_paths_agree() {
        // H_0 = 0 forces K_0 = H_2 in the sequence and in the corollary.
        let h = hs(&["0", "Z/3", "Z^2", "Z^2"]);
        let r = ktheory_report(&h, &KTheoryInput::default());
        assert_eq!(r.corollaries.len(), 1);
        assert_eq!(r.k0_description, "Z^2");
        assert_eq!(r.k1_description, "Z^2 + Z/3");
        // the sequence path: rank K_0 = b2 exactly, and the interval collapses.
        assert_eq!(r.rank_interval, Some((2, 2)));
        assert_eq!(r.evaluate(&Term::named("K_0")), Some(Value::Exact(h[2].clone())));
        assert_eq!(r.evaluate(&Term::named("K_1")), Some(Value::Exact(h[1].direct_sum(&h[3]))));
    }

    #[test]
    fn rank_five_keeps_unknowns_symbolic() {
        let h = hs(&["Z", "Z^5", "Z^10", "Z^10", "Z^5", "Z"]);
        let r = ktheory_report(&h, &KTheoryInput::default());
        assert_eq!(r.unknowns.len(), 7);
        assert_eq!(r.sequences.len(), 4);
        let (lo, hi) = r.rank_interval.unwrap();
        assert!(lo <= hi);
        assert!(r.resolved.is_empty());
    }

    #[test]
    fn unsupported_rank() {
        let r = ktheory_report(&hs(&["Z", "Z^2", "Z"]), &KTheoryInput::default());
        assert!(r.sequences.is_empty());
        assert!(r.rank_interval.is_none());
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn display_terms() {
        let t = Term::quo(Term::quo(Term::H(0), g(0)), g(1));
        assert_eq!(t.to_string(), "(H_0/G_0)/G_1");
    }
}
