//! Small-prime sieve, deterministic Miller-Rabin and Baillie-PSW.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mont::{BigRing, ModRing, Mont128, Mont64};

/// Trial-division bound used when rho gives up on a cofactor.
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Primes tried before any probabilistic work.
pub const SMALL_BOUND: u64 = 4096;

/// Below this value the 13 smallest prime bases make Miller-Rabin deterministic.
pub const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed Baillie-PSW; no certificate.
    Probable,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        self != Primality::Composite
    }
}

pub fn primes_below(limit: u64) -> &'static [u64] {
    static SIEVE: OnceLock<Vec<u64>> = OnceLock::new();
    let all = SIEVE.get_or_init(|| sieve(TRIAL_BOUND));
    let end = all.partition_point(|&p| p < limit);
    &all[..end]
}

fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn strong_probable_prime<R: ModRing>(ring: &R, n: &BigUint, base: u64) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let one = ring.one();
    let minus_one = ring.lift(&n_minus_1);
    let mut x = ring.pow(&ring.lift(&BigUint::from(base)), &d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ring.mul(&x, &x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn miller_rabin<R: ModRing>(ring: &R, n: &BigUint, bases: &[u64]) -> bool {
    bases
        .iter()
        .filter(|&&b| BigUint::from(b) % n != BigUint::zero())
        .all(|&b| strong_probable_prime(ring, n, b))
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n)) == Primality::Prime
}

/// Deterministic below 3.3e24, Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> Primality {
    let small = |v: u64| {
        if v < 2 {
            return Some(false);
        }
        for &p in &MR_BASES {
            if v == p {
                return Some(true);
            }
            if v.is_multiple_of(p) {
                return Some(false);
            }
        }
        None
    };
    if let Some(v) = n.to_u64() {
        if let Some(ans) = small(v) {
            return if ans { Primality::Prime } else { Primality::Composite };
        }
        let ok = if v < 1 << 63 {
            miller_rabin(&Mont64::new(v), n, &MR_BASES)
        } else {
            miller_rabin(&Mont128::new(v as u128), n, &MR_BASES)
        };
        return if ok { Primality::Prime } else { Primality::Composite };
    }
    if n.is_even() {
        return Primality::Composite;
    }
    if let Some(v) = n.to_u128() {
        if v < MR_DETERMINISTIC_LIMIT {
            return if miller_rabin(&Mont128::new(v), n, &MR_BASES) {
                Primality::Prime
            } else {
                Primality::Composite
            };
        }
    }
    for &p in primes_below(SMALL_BOUND) {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let ring = BigRing::new(n.clone());
    if !strong_probable_prime(&ring, n, 2) || !strong_lucas(n) {
        return Primality::Composite;
    }
    Primality::Probable
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let n_int = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n_int).to_biguint().unwrap();
    let mut n = n.clone();
    let mut sign = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32().unwrap();
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            sign = -sign;
        }
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        sign
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 if d.abs().to_biguint().as_ref() != Some(n) => return false,
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -d + 2i32 };
    }
    let ni = BigInt::from(n.clone());
    let md = |x: BigInt| x.mod_floor(&ni).to_biguint().unwrap();
    let half = |x: BigUint| if x.is_odd() { (x + n) >> 1 } else { x >> 1 };
    let p = BigUint::one();
    let q = md((BigInt::one() - &d) / 4);
    let dm = md(d);
    let np1 = n + 1u32;
    let s = np1.trailing_zeros().unwrap_or(0);
    let k = &np1 >> s;
    let sub = |a: &BigUint, b: &BigUint| (a + n - (b % n)) % n;

    let mut u = BigUint::one();
    let mut v = p.clone();
    let mut qk = q.clone();
    for i in (0..k.bits() - 1).rev() {
        u = (&u * &v) % n;
        v = sub(&((&v * &v) % n), &((&qk << 1u32) % n));
        qk = (&qk * &qk) % n;
        if k.bit(i) {
            let nu = half((&p * &u + &v) % n);
            let nv = half((&dm * &u + &p * &v) % n);
            u = nu;
            v = nv;
            qk = (&qk * &q) % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = sub(&((&v * &v) % n), &((&qk << 1u32) % n));
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk) % n;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_agree_with_sieve() {
        let ps = primes_below(10_000);
        for v in 0..10_000u64 {
            assert_eq!(is_prime_u64(v), ps.binary_search(&v).is_ok(), "{v}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for v in [
            2047u64,
            1373653,
            25326001,
            3215031751,
            2152302898747,
            3474749660383,
            341550071728321,
            3825123056546413051,
        ] {
            assert!(!is_prime_u64(v), "{v}");
        }
    }

    #[test]
    fn wide_values() {
        let p: BigUint = "170141183460469231731687303715884105727".parse().unwrap(); // 2^127-1
        assert_eq!(is_prime(&p), Primality::Probable);
        let c = &p * BigUint::from(3u32);
        assert_eq!(is_prime(&c), Primality::Composite);
        let p2: BigUint = "12207031".parse().unwrap();
        assert_eq!(is_prime(&p2), Primality::Prime);
        let m61: BigUint = "2305843009213693951".parse().unwrap();
        assert_eq!(is_prime(&m61), Primality::Prime);
        let big: BigUint = "1000000000000000000000000000057".parse().unwrap();
        assert_eq!(is_prime(&big), Primality::Probable);
        assert_eq!(is_prime(&(&big * &big)), Primality::Composite);
    }

    #[test]
    fn lucas_on_known_primes() {
        for v in [5u64, 7, 11, 13, 101, 1009, 1000003] {
            assert!(strong_lucas(&BigUint::from(v)), "{v}");
        }
        // 5459 is a strong Lucas pseudoprime; 5777 as well
        assert!(strong_lucas(&BigUint::from(5459u32)));
        assert!(!strong_lucas(&BigUint::from(5461u32)));
    }
}
