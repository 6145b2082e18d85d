use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Finitely generated abelian group Z^r ⊕ Z/d_1 ⊕ … with d_1 | d_2 | … and d_i ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Z^rank plus cyclic factors in any order; Z/0 counts as Z, Z/1 vanishes.
    pub fn new<I, D>(rank: usize, cyclic: I) -> Self
    where
        I: IntoIterator<Item = D>,
        D: Into<BigUint>,
    {
        let mut free_rank = rank;
        let mut ds: Vec<BigUint> = Vec::new();
        for d in cyclic {
            let d = d.into();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                ds.push(d);
            }
        }
        ds.sort();
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                if !(&ds[j] % &ds[i]).is_zero() {
                    let g = ds[i].gcd(&ds[j]);
                    let l = &ds[i] / &g * &ds[j];
                    ds[i] = g;
                    ds[j] = l;
                }
            }
        }
        ds.retain(|d| !d.is_one());
        AbelianGroup {
            free_rank,
            torsion: ds,
        }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> Self {
        AbelianGroup::new(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// The torsion subgroup.
    pub fn torsion_part(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Order, or None when infinite.
    pub fn order(&self) -> Option<BigUint> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// (d, multiplicity) pairs in increasing d.
    pub fn torsion_counts(&self) -> Vec<(BigUint, usize)> {
        let mut out: Vec<(BigUint, usize)> = Vec::new();
        for d in &self.torsion {
            match out.last_mut() {
                Some((x, c)) if x == d => *c += 1,
                _ => out.push((d.clone(), 1)),
            }
        }
        out
    }

    /// Elementary divisors: prime powers, sorted. Factors above 2^64 are kept whole.
    pub fn primary_decomposition(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        for d in &self.torsion {
            match d.to_u64() {
                Some(mut x) => {
                    let mut p = 2u64;
                    while p * p <= x {
                        if x % p == 0 {
                            let mut q = 1u64;
                            while x % p == 0 {
                                x /= p;
                                q *= p;
                            }
                            out.push(BigUint::from(q));
                        }
                        p += 1;
                    }
                    if x > 1 {
                        out.push(BigUint::from(x));
                    }
                }
                None => out.push(d.clone()),
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for (d, c) in self.torsion_counts() {
            parts.push(if c == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{c}") });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn bad(s: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("cannot parse group `{s}`: {why}"))
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Accepts `0`, `Z`, `Z^a`, `Z/d`, `(Z/d)^b`, `Z/d^b`, joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad(s, "empty"));
        }
        let mut rank = 0usize;
        let mut cyclic: Vec<BigUint> = Vec::new();
        for term in compact.split('+') {
            let num = |t: &str| t.parse::<BigUint>().map_err(|_| bad(s, &format!("bad number `{t}`")));
            let count = |t: &str| t.parse::<usize>().map_err(|_| bad(s, &format!("bad exponent `{t}`")));
            if term == "0" {
                continue;
            }
            if term == "Z" {
                rank += 1;
            } else if let Some(e) = term.strip_prefix("Z^") {
                rank += count(e)?;
            } else if let Some(rest) = term.strip_prefix("(Z/") {
                let (d, e) = match rest.split_once(")^") {
                    Some((d, e)) => (d, count(e)?),
                    None => (rest.strip_suffix(')').ok_or_else(|| bad(s, "unbalanced parenthesis"))?, 1),
                };
                let d = num(d)?;
                cyclic.extend(std::iter::repeat_n(d, e));
            } else if let Some(rest) = term.strip_prefix("Z/") {
                let (d, e) = match rest.split_once('^') {
                    Some((d, e)) => (d, count(e)?),
                    None => (rest, 1),
                };
                let d = num(d)?;
                cyclic.extend(std::iter::repeat_n(d, e));
            } else {
                return Err(bad(s, &format!("unknown term `{term}`")));
            }
        }
        Ok(AbelianGroup::new(rank, cyclic))
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> AbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn display_and_parse() {
        let h = g("Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2");
        assert_eq!(h.free_rank, 21);
        assert_eq!(h.to_string(), "Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2");
        assert_eq!(g("Z/2^3"), g("(Z/2)^3"));
        assert_eq!(g("0").to_string(), "0");
        assert_eq!(g("Z").to_string(), "Z");
        assert!("Q".parse::<AbelianGroup>().is_err());
    }

    #[test]
    fn canonical_form() {
        // Z/2 + Z/3 = Z/6, Z/4 + Z/6 = Z/2 + Z/12
        assert_eq!(g("Z/2 + Z/3"), g("Z/6"));
        assert_eq!(g("Z/4 + Z/6"), g("Z/2 + Z/12"));
        assert_eq!(g("Z/1 + Z"), g("Z"));
        assert_eq!(g("Z/12").primary_decomposition(), vec![3u32.into(), 4u32.into()]);
        assert_eq!(g("(Z/5)^2").order(), Some(25u32.into()));
    }

    #[test]
    fn serde_uses_the_string_form() {
        let h = g("Z^7 + (Z/4)^2 + Z/12");
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, "\"Z^7 + (Z/4)^2 + Z/12\"");
        assert_eq!(serde_json::from_str::<AbelianGroup>(&s).unwrap(), h);
    }

    proptest! {
        #[test]
        fn order_is_product_of_inputs(ds in proptest::collection::vec(1u32..60, 0..6)) {
            let h = AbelianGroup::new(0, ds.iter().map(|&d| BigUint::from(d)));
            let want: BigUint = ds.iter().map(|&d| BigUint::from(d)).product();
            prop_assert_eq!(h.order().unwrap(), want);
            prop_assert!(h.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
            prop_assert_eq!(h.to_string().parse::<AbelianGroup>().unwrap(), h);
        }
    }
}
