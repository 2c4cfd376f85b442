//! Brent's variant of Pollard rho.
//!
//! Seeds are fixed: start value 2, polynomial x^2 + c for c = 1, 2, 3, ...

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::mont::{to_u128, BigRing, ModRing, Mont128, Mont64};

const BATCH: u64 = 128;

/// Remaining rho iterations shared across one factorization.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub rho_iterations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rho_iterations: 400_000_000 }
    }
}

fn brent<R: ModRing>(ring: &R, c: u64, left: &mut u64) -> Option<BigUint> {
    let n = ring.modulus();
    let cc = ring.lift(&BigUint::from(c));
    let step = |x: &R::E| ring.add(&ring.mul(x, x), &cc);
    let mut y = ring.lift(&BigUint::from(2u32));
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = ring.one();
    let mut g = BigUint::one();
    let mut len = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..len {
            y = step(&y);
        }
        let mut k = 0;
        while k < len && g.is_one() {
            ys = y.clone();
            let lim = BATCH.min(len - k);
            if *left < lim {
                *left = 0;
                return None;
            }
            *left -= lim;
            for _ in 0..lim {
                y = step(&y);
                q = ring.mul(&q, &ring.diff(&x, &y));
            }
            g = ring.gcd_n(&q);
            k += lim;
        }
        len *= 2;
    }
    if g == n {
        loop {
            ys = step(&ys);
            g = ring.gcd_n(&ring.diff(&x, &ys));
            if !g.is_one() {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// A nontrivial divisor of odd composite `n`, or `None` when the budget runs out.
pub fn find_divisor(n: &BigUint, left: &mut u64) -> Option<BigUint> {
    let mut c = 1u64;
    while *left > 0 {
        let hit = if let Some(v) = n.to_u64().filter(|&v| v < 1 << 63) {
            brent(&Mont64::new(v), c, left)
        } else if n.bits() < 127 {
            brent(&Mont128::new(to_u128(n)), c, left)
        } else {
            brent(&BigRing::new(n.clone()), c, left)
        };
        if hit.is_some() {
            return hit;
        }
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(n: &str) -> BigUint {
        let n: BigUint = n.parse().unwrap();
        let mut left = u64::MAX;
        let d = find_divisor(&n, &mut left).unwrap();
        assert!(d > BigUint::one() && d < n);
        assert_eq!(&n % &d, BigUint::from(0u32));
        d
    }

    #[test]
    fn splits_each_width() {
        split("315121");
        split("1000000016000000063"); // 1000000007 * 1000000009
        split("18446744073709551617"); // 2^64 + 1 = 274177 * 67280421310721
        split(&(1000000000039u128 * 1000000000000037u128).to_string());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let n: BigUint = "1000000016000000063".parse().unwrap();
        let mut left = 10;
        assert!(find_divisor(&n, &mut left).is_none());
        assert_eq!(left, 0);
    }
}
