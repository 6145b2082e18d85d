//! Integer types the elimination engine runs on: a checked `i64` fast path
//! that reports overflow, and `BigInt`, which never does.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) trait Ring: Clone + PartialEq + Debug + Send + Sync + Sized {
    fn one() -> Self;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> Ordering;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// q with |self − q·d| ≤ |d|/2.
    fn nearest_div(&self, d: &Self) -> Option<Self>;
    fn exact_div(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// (g, s, t) with g = gcd ≥ 0 and s·self + t·o = g.
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
}

impl Ring for i64 {
    fn one() -> Self {
        1
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64().filter(|v| *v != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).filter(|v| *v != i64::MIN)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).filter(|v| *v != i64::MIN)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn nearest_div(&self, d: &Self) -> Option<Self> {
        let (a, d) = (*self as i128, *d as i128);
        let mut q = a.div_euclid(d);
        let r = a - q * d;
        if 2 * r.abs() > d.abs() {
            q += if d > 0 { 1 } else { -1 };
        }
        i64::try_from(q).ok().filter(|v| *v != i64::MIN)
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        *self != 0 && x % self == 0
    }
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = (*self as i128).extended_gcd(&(*o as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((
            i64::try_from(g).ok()?,
            i64::try_from(s).ok().filter(|v| *v != i64::MIN)?,
            i64::try_from(t).ok().filter(|v| *v != i64::MIN)?,
        ))
    }
}

impl Ring for BigInt {
    fn one() -> Self {
        One::one()
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn nearest_div(&self, d: &Self) -> Option<Self> {
        let (mut q, r) = self.div_mod_floor(d);
        let r2: BigInt = r.abs() * 2;
        if r2.magnitude() > d.magnitude() {
            if Signed::is_positive(d) {
                q += 1;
            } else {
                q -= 1;
            }
        }
        Some(q)
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        !Zero::is_zero(self) && Zero::is_zero(&(x % self))
    }
    fn ext_gcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
}
