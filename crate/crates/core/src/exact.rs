//! Exact products of rational coefficients and rational powers of integers.
//!
//! Comparisons never touch floating point: both sides are raised to the lcm
//! of the exponent denominators and compared as integers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub type Exp = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn from_big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `coef * prod(base^exp)` with a positive rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    coef: BigRational,
    powers: Vec<(BigUint, Exp)>,
}

impl PowerProduct {
    pub fn rational(r: BigRational) -> Self {
        assert!(r.is_positive(), "power products are positive");
        PowerProduct { coef: r, powers: Vec::new() }
    }

    pub fn power(base: impl Into<BigUint>, exp: Exp) -> Self {
        PowerProduct { coef: BigRational::one(), powers: vec![(base.into(), exp)] }.normalized()
    }

    pub fn coef(&self) -> &BigRational {
        &self.coef
    }

    pub fn powers(&self) -> &[(BigUint, Exp)] {
        &self.powers
    }

    fn normalized(mut self) -> Self {
        self.powers.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(BigUint, Exp)> = Vec::with_capacity(self.powers.len());
        for (b, e) in self.powers {
            if b.is_one() {
                continue;
            }
            match out.last_mut() {
                Some((lb, le)) if *lb == b => *le += e,
                _ => out.push((b, e)),
            }
        }
        out.retain(|(_, e)| !e.is_zero());
        self.powers = out;
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        PowerProduct {
            coef: &self.coef * &other.coef,
            powers: self.powers.iter().chain(other.powers.iter()).cloned().collect(),
        }
        .normalized()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.mul(&PowerProduct::rational(r.clone()))
    }

    pub fn recip(&self) -> Self {
        PowerProduct {
            coef: self.coef.recip(),
            powers: self.powers.iter().map(|(b, e)| (b.clone(), -e)).collect(),
        }
    }

    /// The exact value when every exponent is an integer.
    pub fn as_rational(&self) -> Option<BigRational> {
        let mut acc = self.coef.clone();
        for (b, e) in &self.powers {
            if !e.is_integer() {
                return None;
            }
            let p = BigRational::from_integer(BigInt::from(b.pow(e.numer().unsigned_abs() as u32)));
            acc = if *e.numer() >= 0 { acc * p } else { acc / p };
        }
        Some(acc)
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let ratio = self.mul(&other.recip());
        let d = ratio
            .powers
            .iter()
            .fold(1i64, |acc, (_, e)| acc.lcm(e.denom()));
        let du = d as u32;
        let mut left = ratio.coef.numer().magnitude().pow(du);
        let mut right = ratio.coef.denom().magnitude().pow(du);
        for (b, e) in &ratio.powers {
            let k = (e.numer() * (d / e.denom())).unsigned_abs() as u32;
            if *e.numer() > 0 {
                left *= b.pow(k);
            } else {
                right *= b.pow(k);
            }
        }
        left.cmp(&right)
    }

    pub fn log10(&self) -> f64 {
        let mut acc = big_log10(self.coef.numer().magnitude()) - big_log10(self.coef.denom().magnitude());
        for (b, e) in &self.powers {
            acc += big_log10(b) * (*e.numer() as f64 / *e.denom() as f64);
        }
        acc
    }

    pub fn approx(&self) -> f64 {
        10f64.powf(self.log10())
    }

    /// Fixed-point with `places` decimals below 10^15, scientific above.
    pub fn to_decimal(&self, places: usize) -> String {
        match self.as_rational() {
            Some(r) => rational_decimal(&r, places),
            None => float_decimal(self.log10(), places),
        }
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.coef.is_one() || self.powers.is_empty() {
            parts.push(self.coef.to_string());
        }
        for (b, e) in &self.powers {
            if e.is_integer() {
                parts.push(format!("{b}^{e}"));
            } else {
                parts.push(format!("{b}^({e})"));
            }
        }
        write!(f, "{}", parts.join(" * "))
    }
}

impl Serialize for PowerProduct {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Ordering of q^(num/den) against a rational.
pub fn compare_power(q: u64, num: i64, den: i64, rhs: &BigRational) -> Ordering {
    assert!(q >= 2 && den > 0);
    if !rhs.is_positive() {
        return Ordering::Greater;
    }
    PowerProduct::power(q, Exp::new(num, den)).cmp_exact(&PowerProduct::rational(rhs.clone()))
}

pub fn big_log10(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).log10();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * 10f64.powf(big_log10(r.numer().magnitude()) - big_log10(r.denom().magnitude()))
    })
}

/// Round-half-up decimal; scientific notation from 10^15 upward.
pub fn rational_decimal(r: &BigRational, places: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    if !a.is_zero() && (big_log10(a.numer().magnitude()) - big_log10(a.denom().magnitude())) >= 15.0 {
        let s = float_decimal(big_log10(a.numer().magnitude()) - big_log10(a.denom().magnitude()), places);
        return if neg { format!("-{s}") } else { s };
    }
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (a * BigRational::from_integer(scale.clone()) + rat(1, 2)).floor().to_integer();
    let (whole, frac) = scaled.div_rem(&scale);
    let body = if places == 0 {
        whole.to_string()
    } else {
        format!("{whole}.{:0>width$}", frac.to_string(), width = places)
    };
    if neg && !scaled.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

fn float_decimal(log10: f64, places: usize) -> String {
    if log10 < 15.0 {
        return format!("{:.*}", places, 10f64.powf(log10));
    }
    let mut exp = log10.floor();
    let mut mant = 10f64.powf(log10 - exp);
    if format!("{:.*}", places, mant).starts_with("10") {
        mant /= 10.0;
        exp += 1.0;
    }
    format!("{:.*}e{}", places, mant, exp as i64)
}

/// A printed decimal such as `0.2333` or `1.95e6`, with one unit of its last digit.
pub fn parse_decimal(s: &str) -> Option<(BigRational, BigRational)> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (whole, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let unit = if shift >= 0 {
        ten.pow(shift)
    } else {
        ten.pow(-shift).recip()
    };
    Some((BigRational::from_integer(digits) * &unit, unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compare_power_examples() {
        let (v, _) = parse_decimal("2078.0165").unwrap();
        assert_eq!(compare_power(5, 13, 2, &v), Ordering::Greater);
        assert_eq!(compare_power(5, 3, 2, &int(2304)), Ordering::Less);
        assert_eq!(compare_power(5, 2, 1, &int(25)), Ordering::Equal);
        assert_eq!(compare_power(5, -2, 1, &rat(1, 25)), Ordering::Equal);
    }

    #[test]
    fn mixed_products() {
        // 2^(1/2) * 3^(1/3) vs 2
        let a = PowerProduct::power(2u32, Exp::new(1, 2)).mul(&PowerProduct::power(3u32, Exp::new(1, 3)));
        assert_eq!(a.cmp_exact(&PowerProduct::rational(int(2))), Ordering::Greater);
        assert_eq!(a.cmp_exact(&PowerProduct::rational(rat(21, 10))), Ordering::Less);
        assert_eq!(a.to_string(), "2^(1/2) * 3^(1/3)");
        let b = PowerProduct::power(4u32, Exp::new(1, 2));
        assert_eq!(b.cmp_exact(&PowerProduct::rational(int(2))), Ordering::Equal);
    }

    #[test]
    fn decimals() {
        assert_eq!(rational_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(rational_decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(rational_decimal(&int(7), 2), "7.00");
        assert_eq!(rational_decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(PowerProduct::power(5u32, Exp::new(13, 2)).to_decimal(4), "34938.5621");
        assert_eq!(rational_decimal(&int(10).pow(20), 2), "1.00e20");
        let (v, u) = parse_decimal("1.95e6").unwrap();
        assert_eq!((v, u), (int(1_950_000), int(10_000)));
        let (v, u) = parse_decimal("0.2333").unwrap();
        assert_eq!((v, u), (rat(2333, 10000), rat(1, 10000)));
    }

    /// floor(x * 10^200) for x = q^(num/den), by an integer root.
    fn fixed200(q: u64, num: i64, den: i64) -> BigUint {
        let ten = BigUint::from(10u32).pow(200 * den as u32);
        let qp = BigUint::from(q).pow(num.unsigned_abs() as u32);
        let radicand = if num >= 0 { qp * ten } else { ten / qp };
        num_integer::Roots::nth_root(&radicand, den as u32)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn agrees_with_200_digit_evaluation(q in 2u64..200, num in -60i64..120, den in 1i64..12, rn in 1u64..u64::MAX, rd in 1u64..1_000_000) {
            let rhs = BigRational::new(rn.into(), rd.into());
            let got = compare_power(q, num, den, &rhs);
            let lhs = BigInt::from(fixed200(q, num, den));
            let scaled = (rhs * BigRational::from_integer(BigInt::from(10u32).pow(200))).floor().to_integer();
            if (&lhs - &scaled).abs() >= BigInt::from(2) {
                prop_assert_eq!(got, lhs.cmp(&scaled));
            }
        }
    }
}
