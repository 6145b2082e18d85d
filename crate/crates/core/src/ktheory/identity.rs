use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::homology::{order_from_snf, Order, SnfResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdentityCase {
    /// ρ odd: the order equals ρ.
    Odd,
    /// 1 ≤ q < k − 1: divisible by ρ/2^q.
    SmallPower,
    /// q ≥ k − 1: divisible by ρ/2^(k−1).
    LargePower,
    /// Every color has two letters, so ρ = 0 and there is no bound.
    Degenerate,
}

/// The order of the class of the unit, Σ = sum of all vertices, in coker ∂_1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityOrderBounds {
    pub rho: u64,
    pub q: u32,
    pub r_odd: u64,
    pub case: IdentityCase,
    pub upper_bound: u64,
    pub lower_divisor: u64,
    pub computed_order: Order,
    pub divides_rho: bool,
    /// (m_i − 2)Σ = 0 in the cokernel, so the order always divides 2ρ.
    pub divides_two_rho: bool,
    pub lower_bound_holds: bool,
    pub equals_rho: bool,
}

/// d | n
fn divides(d: &BigUint, n: &BigUint) -> bool {
    if d.is_zero() {
        return n.is_zero();
    }
    (n % d).is_zero()
}

/// `sizes` are the |E_i|; `d1` must be the SNF of ∂_1 with transforms.
pub fn identity_order_bounds(sizes: &[usize], d1: &SnfResult) -> crate::Result<IdentityOrderBounds> {
    let k = sizes.len();
    let rho = sizes.iter().fold(0u64, |g, &m| g.gcd(&((m as u64) / 2).saturating_sub(1)));
    let (q, r_odd) = if rho == 0 { (0, 0) } else { (rho.trailing_zeros(), rho >> rho.trailing_zeros()) };
    let case = if rho == 0 {
        IdentityCase::Degenerate
    } else if q == 0 {
        IdentityCase::Odd
    } else if (q as usize) < k.saturating_sub(1) {
        IdentityCase::SmallPower
    } else {
        IdentityCase::LargePower
    };
    let lower_divisor = match case {
        IdentityCase::Odd => rho,
        IdentityCase::SmallPower => r_odd,
        IdentityCase::LargePower => rho >> (k - 1),
        IdentityCase::Degenerate => 1,
    };
    let sigma = vec![BigInt::one(); d1.rows];
    let computed_order = order_from_snf(d1, &sigma)?;
    let (divides_rho, divides_two_rho, lower_bound_holds, equals_rho) = match &computed_order {
        Order::Finite(n) => (
            divides(n, &BigUint::from(rho)),
            divides(n, &BigUint::from(2 * rho)),
            divides(&BigUint::from(lower_divisor), n),
            *n == BigUint::from(rho),
        ),
        Order::Infinite => (false, false, true, false),
    };
    Ok(IdentityOrderBounds {
        rho,
        q,
        r_odd,
        case,
        upper_bound: rho,
        lower_divisor,
        computed_order,
        divides_rho,
        divides_two_rho,
        lower_bound_holds,
        equals_rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{smith_normal_form_with_transforms, IntMatrix};

    fn bounds(sizes: &[usize], d1: &[Vec<i64>]) -> IdentityOrderBounds {
        identity_order_bounds(sizes, &smith_normal_form_with_transforms(&IntMatrix::from_dense(d1))).unwrap()
    }

    #[test]
    fn cases() {
        // ∂_1 = [4] on one vertex: Σ has order 4.
        let b = bounds(&[4, 6, 8], &[vec![4]]);
        assert_eq!((b.rho, b.case), (1, IdentityCase::Odd));
        assert!(!b.divides_rho);
        let b = bounds(&[6, 6, 6], &[vec![2]]);
        assert_eq!((b.rho, b.q, b.case, b.lower_divisor), (2, 1, IdentityCase::SmallPower, 1));
        assert!(b.divides_rho && b.lower_bound_holds && b.equals_rho);
        let b = bounds(&[10, 10, 10], &[vec![1]]);
        assert_eq!((b.rho, b.q, b.case, b.lower_divisor), (4, 2, IdentityCase::LargePower, 1));
        let b = bounds(&[2, 2], &[vec![0]]);
        assert_eq!(b.case, IdentityCase::Degenerate);
        assert_eq!(b.computed_order, Order::Infinite);
    }
}
