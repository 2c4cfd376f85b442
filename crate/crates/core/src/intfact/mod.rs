//! Integer factorization of q^m - 1 and the arithmetic functions built on it.

mod mont;
pub mod prime;
pub mod rho;
mod wire;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
pub use crate::exact::compare_power;
pub use prime::{is_prime, is_prime_u64, Primality, TRIAL_BOUND};
pub use rho::Budget;

/// `value = prod(prime^mult) * cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub value: BigUint,
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub complete: bool,
    /// Every prime factor of `cofactor` exceeds this.
    pub trial_bound: u64,
    /// Some listed prime only passed Baillie-PSW.
    pub probable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBound {
    pub omega_lower: u32,
    pub omega_upper: u32,
    pub exact: bool,
}

impl OmegaBound {
    /// W = 2^omega_upper, the sound side for sufficiency checks.
    pub fn w_upper(&self) -> BigUint {
        BigUint::one() << self.omega_upper
    }

    pub fn w_lower(&self) -> BigUint {
        BigUint::one() << self.omega_lower
    }
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            value: BigUint::one(),
            factors: Vec::new(),
            cofactor: BigUint::one(),
            complete: true,
            trial_bound: TRIAL_BOUND,
            probable: false,
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn omega(&self) -> OmegaBound {
        omega_and_w(self)
    }

    /// Product of the listed prime powers and the cofactor.
    pub fn recompose(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Checks every structural invariant, including primality of listed primes.
    pub fn validate(&self) -> bool {
        let increasing = self.factors.windows(2).all(|w| w[0].0 < w[1].0);
        let mults = self.factors.iter().all(|(_, e)| *e >= 1);
        let primes = self.factors.iter().all(|(p, _)| is_prime(p).is_prime());
        let cof = self.complete == self.cofactor.is_one()
            && (self.cofactor.is_one()
                || prime::primes_below(self.trial_bound.min(TRIAL_BOUND))
                    .iter()
                    .all(|&p| !(&self.cofactor % p).is_zero()));
        increasing && mults && primes && cof && self.recompose() == self.value
    }

    fn from_parts(
        value: BigUint,
        primes: BTreeMap<BigUint, u32>,
        cofactor: BigUint,
        trial_bound: u64,
        probable: bool,
    ) -> Self {
        Factorization {
            value,
            complete: cofactor.is_one(),
            factors: primes.into_iter().collect(),
            cofactor,
            trial_bound,
            probable,
        }
    }

    /// Combines factorizations of coprime-or-not parts into one of their product.
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a Factorization>) -> Self {
        let mut primes = BTreeMap::new();
        let mut value = BigUint::one();
        let mut cofactor = BigUint::one();
        let mut bound = TRIAL_BOUND;
        let mut probable = false;
        for f in parts {
            value *= &f.value;
            cofactor *= &f.cofactor;
            if !f.complete {
                bound = bound.min(f.trial_bound);
            }
            probable |= f.probable;
            for (p, e) in &f.factors {
                *primes.entry(p.clone()).or_insert(0) += e;
            }
        }
        Factorization::from_parts(value, primes, cofactor, bound, probable)
    }
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<(String, u32)> = self.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        serde_json::json!({
            "value": self.value.to_string(),
            "factors": factors,
            "cofactor": self.cofactor.to_string(),
            "complete": self.complete,
            "probable": self.probable,
            "wire": self.to_string(),
        })
        .serialize(s)
    }
}

fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    for k in (2..=n.bits() as u32 / 12).rev() {
        let r = n.nth_root(k);
        if &r.pow(k) == n {
            return Some((r, k));
        }
    }
    None
}

/// Trial division on small primes, then primality testing and Brent rho;
/// cofactors that exhaust the budget are trial-divided to 10^6 and kept.
pub fn factor_integer(n: &BigUint, budget: Budget) -> Factorization {
    assert!(!n.is_zero(), "factor_integer needs n >= 1");
    let mut primes: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    for &p in prime::primes_below(prime::SMALL_BOUND) {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        while (&rest % p).is_zero() {
            rest /= p;
            *primes.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    let mut left = budget.rho_iterations;
    let mut probable = false;
    let mut stuck = Vec::new();
    let mut stack = vec![(rest, 1u32)];
    while let Some((c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        let small_square = BigUint::from(prime::SMALL_BOUND * prime::SMALL_BOUND);
        let status = if c < small_square {
            Primality::Prime
        } else {
            is_prime(&c)
        };
        if status.is_prime() {
            probable |= status == Primality::Probable;
            *primes.entry(c).or_insert(0) += mult;
            continue;
        }
        if let Some((root, k)) = perfect_power(&c) {
            stack.push((root, mult * k));
            continue;
        }
        match rho::find_divisor(&c, &mut left) {
            Some(d) => {
                let other = &c / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => stuck.push((c, mult)),
        }
    }
    let mut cofactor = BigUint::one();
    for (mut c, mult) in stuck {
        for &p in prime::primes_below(TRIAL_BOUND) {
            if p < prime::SMALL_BOUND {
                continue;
            }
            let pb = BigUint::from(p);
            if &pb * &pb > c {
                break;
            }
            while (&c % p).is_zero() {
                c /= p;
                *primes.entry(pb.clone()).or_insert(0) += mult;
            }
        }
        if c.is_one() {
            continue;
        }
        let status = is_prime(&c);
        if status.is_prime() {
            probable |= status == Primality::Probable;
            *primes.entry(c).or_insert(0) += mult;
        } else {
            cofactor *= c.pow(mult);
        }
    }
    Factorization::from_parts(n.clone(), primes, cofactor, TRIAL_BOUND, probable)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_small(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Factorization of a machine word by trial division.
pub fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns 0 for non-squarefree `n`.
pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1);
    let fs = factor_small(n);
    if fs.iter().any(|&(_, e)| e > 1) {
        0
    } else if fs.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `q = p^k` with p prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factor_small(q).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Phi_d(q) via the Moebius product over e | d.
pub fn cyclotomic_value(d: u64, q: &BigUint) -> BigUint {
    assert!(d >= 1);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors(d) {
        let term = q.pow((d / e) as u32) - 1u32;
        match moebius(e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// q^m - 1 split into Phi_d(p) for d | km, each factored and merged.
pub fn factor_q_power_minus_one(q: u64, m: u64, budget: Budget) -> Result<Factorization> {
    factor_q_power_minus_one_with(q, m, |p, d| factor_integer(&cyclotomic_value(d, &BigUint::from(p)), budget))
}

/// Same as [`factor_q_power_minus_one`] with a caller-supplied factorizer for Phi_d(p).
pub fn factor_q_power_minus_one_with(
    q: u64,
    m: u64,
    mut piece: impl FnMut(u64, u64) -> Factorization,
) -> Result<Factorization> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let parts: Vec<Factorization> = divisors(k as u64 * m)
        .into_iter()
        .map(|d| piece(p, d))
        .collect();
    let merged = Factorization::merge(&parts);
    debug_assert_eq!(merged.value, BigUint::from(q).pow(m as u32) - 1u32);
    Ok(merged)
}

pub fn omega_and_w(f: &Factorization) -> OmegaBound {
    let lower = f.factors.len() as u32;
    if f.complete {
        return OmegaBound { omega_lower: lower, omega_upper: lower, exact: true };
    }
    let b = BigUint::from(f.trial_bound.max(2));
    let mut hidden = 0;
    let mut acc = b.clone();
    while acc <= f.cofactor {
        hidden += 1;
        acc *= &b;
    }
    OmegaBound {
        omega_lower: lower,
        omega_upper: lower + hidden,
        exact: false,
    }
}

/// `r0` with r = r0 p^k and p not dividing r0.
pub fn p_free_part(mut r: u64, p: u64) -> u64 {
    assert!(r >= 1 && p >= 2);
    while r.is_multiple_of(p) {
        r /= p;
    }
    r
}

pub fn euler_phi(f: &Factorization) -> BigUint {
    assert!(f.complete, "euler_phi needs a complete factorization");
    f.factors
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32))
}

/// theta(e) = prod(1 - 1/p) over the distinct primes of e.
pub fn theta<'a>(primes: impl IntoIterator<Item = &'a BigUint>) -> BigRational {
    primes.into_iter().fold(BigRational::one(), |acc, p| {
        let p = BigInt::from(p.clone());
        acc * BigRational::new(&p - 1, p)
    })
}
