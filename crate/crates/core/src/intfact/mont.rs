//! Montgomery residues for odd moduli below 2^63 and 2^127.

use num_bigint::BigUint;
use num_traits::One;

/// Arithmetic modulo a fixed odd modulus, as consumed by rho and Miller-Rabin.
pub(crate) trait ModRing {
    type E: Clone + PartialEq;
    fn lift(&self, v: &BigUint) -> Self::E;
    fn one(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Any value sharing its gcd with n with a - b.
    fn diff(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn gcd_n(&self, a: &Self::E) -> BigUint;
    fn modulus(&self) -> BigUint;

    fn pow(&self, base: &Self::E, exp: &BigUint) -> Self::E {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

pub(crate) struct Mont64 {
    n: u64,
    ninv: u64,
    r2: u64,
    one: u64,
}

impl Mont64 {
    /// `n` must be odd and below 2^63.
    pub fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n < 1 << 63);
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Mont64 { n, ninv: inv.wrapping_neg(), r2, one: r }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mulm(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mulm(a % self.n, self.r2)
    }
}

impl ModRing for Mont64 {
    type E = u64;
    fn lift(&self, v: &BigUint) -> u64 {
        let r = v % self.n;
        self.to_mont(r.iter_u64_digits().next().unwrap_or(0))
    }
    fn one(&self) -> u64 {
        self.one
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulm(*a, *b)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    #[inline]
    fn diff(&self, a: &u64, b: &u64) -> u64 {
        a.abs_diff(*b)
    }
    fn gcd_n(&self, a: &u64) -> BigUint {
        BigUint::from(num_integer::gcd(*a, self.n))
    }
    fn modulus(&self) -> BigUint {
        BigUint::from(self.n)
    }
}

#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

pub(crate) struct Mont128 {
    n: u128,
    ninv: u128,
    r2: u128,
    one: u128,
}

impl Mont128 {
    /// `n` must be odd and below 2^127.
    pub fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n < 1 << 127);
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let nb = BigUint::from(n);
        let r = (BigUint::one() << 128u32) % &nb;
        let r2 = (&r * &r) % &nb;
        Mont128 {
            n,
            ninv: inv.wrapping_neg(),
            r2: to_u128(&r2),
            one: to_u128(&r),
        }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let u = hi + mh + carry as u128;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub fn mulm(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }
}

pub(crate) fn to_u128(v: &BigUint) -> u128 {
    let mut it = v.iter_u64_digits();
    let lo = it.next().unwrap_or(0) as u128;
    let hi = it.next().unwrap_or(0) as u128;
    lo | (hi << 64)
}

impl ModRing for Mont128 {
    type E = u128;
    fn lift(&self, v: &BigUint) -> u128 {
        let r = to_u128(&(v % BigUint::from(self.n)));
        self.mulm(r, self.r2)
    }
    fn one(&self) -> u128 {
        self.one
    }
    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        self.mulm(*a, *b)
    }
    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    #[inline]
    fn diff(&self, a: &u128, b: &u128) -> u128 {
        a.abs_diff(*b)
    }
    fn gcd_n(&self, a: &u128) -> BigUint {
        BigUint::from(num_integer::gcd(*a, self.n))
    }
    fn modulus(&self) -> BigUint {
        BigUint::from(self.n)
    }
}

/// Plain residues for moduli too wide for the native paths.
pub(crate) struct BigRing {
    n: BigUint,
}

impl BigRing {
    pub fn new(n: BigUint) -> Self {
        BigRing { n }
    }
}

impl ModRing for BigRing {
    type E = BigUint;
    fn lift(&self, v: &BigUint) -> BigUint {
        v % &self.n
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.n
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.n
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.n {
            s - &self.n
        } else {
            s
        }
    }
    fn diff(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            b - a
        }
    }
    fn gcd_n(&self, a: &BigUint) -> BigUint {
        num_integer::Integer::gcd(a, &self.n)
    }
    fn modulus(&self) -> BigUint {
        self.n.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mont64_matches_plain() {
        let n = 1_000_000_007u64;
        let r = Mont64::new(n);
        let a = r.lift(&BigUint::from(123456789u64));
        let b = r.lift(&BigUint::from(987654321u64));
        let c = r.mul(&a, &b);
        let expect = (123456789u128 * 987654321u128 % n as u128) as u64;
        assert_eq!(c, r.lift(&BigUint::from(expect)));
    }

    #[test]
    fn mont128_matches_plain() {
        let n: u128 = (1u128 << 126) + 285; // odd
        let r = Mont128::new(n);
        let x = BigUint::from(0xdead_beef_cafe_babe_1234_5678_9abc_def1u128 >> 3);
        let y = BigUint::from(0x1111_2222_3333_4444_5555_6666_7777_8888u128);
        let prod = (&x * &y) % BigUint::from(n);
        let got = r.mul(&r.lift(&x), &r.lift(&y));
        assert_eq!(got, r.lift(&prod));
    }

    #[test]
    fn wide_multiply() {
        let (hi, lo) = mul_wide(u128::MAX, u128::MAX);
        assert_eq!(hi, u128::MAX - 1);
        assert_eq!(lo, 1);
    }
}
