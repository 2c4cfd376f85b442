//! Factor structure of x^m - 1 over F_q.
//!
//! For d | m' the cyclotomic factor Phi_d(x) splits into phi(d)/ord_d(q)
//! irreducibles of degree ord_d(q); everything here is arithmetic on that fact
//! except [`explicit_xm1_factors`].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, rat};
use crate::gf::{poly, GaloisField, Poly};
use crate::intfact::{divisors, factor_small, p_free_part, prime_power};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XmProfile {
    pub q: u64,
    pub m: u64,
    pub m_prime: u64,
    /// (degree, count), ascending by degree.
    pub classes: Vec<(u32, u64)>,
}

impl XmProfile {
    pub fn factor_count(&self) -> u64 {
        self.classes.iter().map(|&(_, c)| c).sum()
    }

    /// Every factor degree, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        self.classes
            .iter()
            .flat_map(|&(d, c)| std::iter::repeat_n(d, c as usize))
            .collect()
    }

    /// e = ord_{m'}(q), the largest factor degree.
    pub fn order(&self) -> u32 {
        self.classes.last().map_or(1, |&(d, _)| d)
    }

    /// W(x^m - 1) = 2^(number of distinct factors).
    pub fn w(&self) -> BigUint {
        BigUint::one() << self.factor_count()
    }

    /// Phi(x^{m'} - 1) = prod(q^deg - 1).
    pub fn poly_phi(&self) -> BigUint {
        self.classes.iter().fold(BigUint::one(), |acc, &(d, c)| {
            acc * (BigUint::from(self.q).pow(d) - 1u32).pow(c as u32)
        })
    }
}

/// Degrees of the irreducible factors absorbed into g.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GChoice {
    pub degrees: Vec<u32>,
}

impl GChoice {
    pub fn new(mut degrees: Vec<u32>) -> Self {
        degrees.sort_unstable();
        GChoice { degrees }
    }

    /// True when the multiset fits inside the profile.
    pub fn fits(&self, profile: &XmProfile) -> bool {
        let mut have: BTreeMap<u32, u64> = profile.classes.iter().copied().collect();
        self.degrees.iter().all(|d| match have.get_mut(d) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        })
    }
}

pub fn xm1_profile(q: u64, m: u64) -> Result<XmProfile> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let m_prime = p_free_part(m, p);
    let mut classes: BTreeMap<u32, u64> = BTreeMap::new();
    for d in divisors(m_prime) {
        let o = ord_mod(q, d)?;
        *classes.entry(o as u32).or_insert(0) += totient(d) / o;
    }
    Ok(XmProfile { q, m, m_prime, classes: classes.into_iter().collect() })
}

/// Theta(g) = prod(1 - q^-deg) and W(g) = 2^|g|.
pub fn theta_w_of_choice(q: u64, choice: &GChoice) -> (BigRational, BigUint) {
    let theta = choice.degrees.iter().fold(BigRational::one(), |acc, &d| {
        acc * (BigRational::one() - int(BigUint::from(q).pow(d).into_int()).recip())
    });
    (theta, BigUint::one() << choice.degrees.len())
}

trait IntoInt {
    fn into_int(self) -> num_bigint::BigInt;
}

impl IntoInt for BigUint {
    fn into_int(self) -> num_bigint::BigInt {
        num_bigint::BigInt::from(self)
    }
}

pub fn totient(n: u64) -> u64 {
    factor_small(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Least e >= 1 with q^e = 1 mod d.
pub fn ord_mod(q: u64, d: u64) -> Result<u64> {
    if d == 0 || q.gcd(&d) != 1 {
        return Err(Error::NotCoprimeModulus { q, d });
    }
    if d == 1 {
        return Ok(1);
    }
    let mut ord = totient(d);
    for (r, e) in factor_small(ord) {
        for _ in 0..e {
            if powmod(q, ord / r, d) == 1 {
                ord /= r;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaRatio {
    /// Exact value in the special shapes, else the upper bound 1/3.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub value: BigRational,
    pub exact: bool,
    /// M/m' counted from the profile.
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub direct: BigRational,
    pub shape: &'static str,
    /// False when m' | q^2 - 1, where the shape values need not equal M/m'.
    pub in_context: bool,
    pub note: Option<&'static str>,
}

/// sigma(q, m') with m1 = gcd(q - 1, m').
pub fn sigma_ratio(q: u64, m_prime: u64) -> Result<SigmaRatio> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m_prime <= 4 || m_prime.is_multiple_of(p) {
        return Err(Error::SigmaDomain(m_prime));
    }
    let m1 = (q - 1).gcd(&m_prime);
    let profile = xm1_profile(q, m_prime)?;
    let e = profile.order();
    let below: u64 = profile
        .classes
        .iter()
        .filter(|&&(d, _)| d < e)
        .map(|&(_, c)| c)
        .sum();
    let direct = BigRational::new(below.into(), m_prime.into());
    let (value, exact, shape, note) = if m_prime == 2 * m1 {
        (rat(1, 2), true, "2m1", None)
    } else if m_prime == 4 * m1 {
        (rat(3, 8), true, "4m1", None)
    } else if m_prime == 6 * m1 {
        (
            rat(13, 36),
            true,
            "6m1",
            Some("13/36 from the general shape count; 3/8 is also quoted for this shape"),
        )
    } else {
        (rat(1, 3), false, "other", None)
    };
    let in_context = !(q as u128 * q as u128 - 1).is_multiple_of(m_prime as u128);
    Ok(SigmaRatio { value, exact, direct, shape, in_context, note })
}

/// Distinct monic irreducible factors of x^{m'} - 1 over `field`, sorted by degree.
pub fn explicit_xm1_factors_in(field: &GaloisField, m: u64) -> Vec<Poly> {
    let m_prime = p_free_part(m, field.characteristic());
    poly::factor(field, &poly::xm_minus_one(field, m_prime as usize))
        .into_iter()
        .map(|(g, _)| g)
        .collect()
}

/// Same over F_q built as [`GaloisField::new`].
pub fn explicit_xm1_factors(q: u64, m: u64) -> Result<(GaloisField, Vec<Poly>)> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > 1 << 20 || m > 10_000 {
        return Err(Error::InvalidArgument(format!("explicit factoring limited to q <= 2^20, m <= 10^4 (got {q}, {m})")));
    }
    let field = GaloisField::new(p, k)?;
    let fs = explicit_xm1_factors_in(&field, m);
    Ok((field, fs))
}

/// Degrees of a factor list as a profile-style class list.
pub fn degree_classes(factors: &[Poly]) -> Vec<(u32, u64)> {
    let mut classes: BTreeMap<u32, u64> = BTreeMap::new();
    for g in factors {
        *classes.entry(poly::degree(g).unwrap_or(0) as u32).or_insert(0) += 1;
    }
    classes.into_iter().collect()
}

pub fn is_zero_ratio(r: &BigRational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_examples() {
        let p = xm1_profile(5, 15).unwrap();
        assert_eq!((p.m_prime, p.classes.clone()), (3, vec![(1, 1), (2, 1)]));
        let p = xm1_profile(25, 12).unwrap();
        assert_eq!(p.classes, vec![(1, 12)]);
        let p = xm1_profile(5, 11).unwrap();
        assert_eq!(p.classes, vec![(1, 1), (5, 2)]);
        let p = xm1_profile(5, 16).unwrap();
        assert_eq!(p.classes, vec![(1, 4), (2, 2), (4, 2)]);
    }

    #[test]
    fn choice_examples() {
        assert_eq!(theta_w_of_choice(5, &GChoice::new(vec![1])), (rat(4, 5), BigUint::from(2u32)));
        assert_eq!(
            theta_w_of_choice(5, &GChoice::new(vec![1, 1, 1])),
            (rat(64, 125), BigUint::from(8u32))
        );
        assert_eq!(theta_w_of_choice(5, &GChoice::default()), (rat(1, 1), BigUint::one()));
    }

    #[test]
    fn order_examples() {
        assert_eq!(ord_mod(5, 11).unwrap(), 5);
        assert_eq!(ord_mod(5, 2).unwrap(), 1);
        assert_eq!(ord_mod(5, 3).unwrap(), 2);
        assert!(ord_mod(5, 10).is_err());
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_ratio(5, 8).unwrap();
        assert_eq!((s.value.clone(), s.exact), (rat(1, 2), true));
        assert_eq!(s.direct, s.value);
        let s = sigma_ratio(5, 16).unwrap();
        assert_eq!((s.value.clone(), s.exact), (rat(3, 8), true));
        assert_eq!(s.direct, s.value);
        let s = sigma_ratio(5, 7).unwrap();
        assert_eq!((s.value.clone(), s.exact), (rat(1, 3), false));
        assert!(s.direct <= s.value);
        assert!(sigma_ratio(5, 4).is_err());
        // 6m1 shape, but 24 | q^2 - 1: only 4 linear factors sit below e = 2
        let s = sigma_ratio(5, 24).unwrap();
        assert_eq!((s.value.clone(), s.direct.clone(), s.in_context), (rat(13, 36), rat(1, 6), false));
    }

    #[test]
    fn sigma_shapes_match_direct_count() {
        for q in [5u64, 25, 125, 625, 3125] {
            for m_prime in 5..400u64 {
                let Ok(s) = sigma_ratio(q, m_prime) else { continue };
                if s.exact && s.in_context {
                    assert_eq!(s.value, s.direct, "q={q} m'={m_prime}");
                } else {
                    assert!(s.direct <= s.value, "q={q} m'={m_prime}");
                }
            }
        }
    }

    #[test]
    fn explicit_examples() {
        let (f, fs) = explicit_xm1_factors(5, 4).unwrap();
        let shown: Vec<String> = fs.iter().map(|g| poly::format(&f, g)).collect();
        assert_eq!(shown, ["x+1", "x+2", "x+3", "x+4"]);
        let (f, fs) = explicit_xm1_factors(5, 1).unwrap();
        assert_eq!(poly::format(&f, &fs[0]), "x+4");
        let (_, fs) = explicit_xm1_factors(5, 11).unwrap();
        assert_eq!(degree_classes(&fs), vec![(1, 1), (5, 2)]);
    }

    #[test]
    fn explicit_agrees_with_profile() {
        for q in [5u64, 25, 125] {
            let (p, k) = prime_power(q).unwrap();
            let field = GaloisField::new(p, k).unwrap();
            for m in 1..=100u64 {
                let prof = xm1_profile(q, m).unwrap();
                let fs = explicit_xm1_factors_in(&field, m);
                assert_eq!(degree_classes(&fs), prof.classes, "q={q} m={m}");
                assert_eq!(prof.degrees().iter().map(|&d| d as u64).sum::<u64>(), prof.m_prime);
            }
        }
    }

    #[test]
    fn w_depends_on_p_free_part() {
        for m in 1..=200u64 {
            let a = xm1_profile(5, m).unwrap();
            let b = xm1_profile(5, p_free_part(m, 5)).unwrap();
            assert_eq!(a.w(), b.w());
        }
    }

    #[test]
    fn full_theta_is_phi_over_q_power() {
        for q in [5u64, 25, 125] {
            for m in 1..=60u64 {
                let prof = xm1_profile(q, m).unwrap();
                let (theta, _) = theta_w_of_choice(q, &GChoice::new(prof.degrees()));
                let expect = BigRational::new(
                    prof.poly_phi().into_int(),
                    BigUint::from(q).pow(prof.m_prime as u32).into_int(),
                );
                assert_eq!(theta, expect);
            }
        }
    }
}
