//! Sufficient conditions for a primitive normal pair (alpha, f(alpha)) with
//! Tr(alpha^-1) = a, all decided in exact arithmetic.
//!
//! Every condition has the shape q^(m/2-1) > rhs. The basic condition uses that
//! exponent (not m/2), and Lambda divides by lambda.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{from_big, int, rat, rational_decimal, to_f64, Exp, PowerProduct};
use crate::intfact::{p_free_part, prime_power, theta};
use crate::polyfact::{theta_w_of_choice, GChoice};
use crate::report::{show_rational, ExactValue};

/// W(a) < C8 a^(1/8) for every positive integer a.
pub fn c8() -> BigRational {
    rat(45147, 10)
}

/// W(a) < C11 a^(1/11) for every positive integer a.
pub fn c11() -> BigRational {
    int(1_110_000_000)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Basic,
    Sieve,
    Modified,
    WbdScreen,
    Cond61,
    Lemma61,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundKind {
    Eighth,
    Eleventh,
}

/// Split of the primes of q^m - 1 into d and p_1..p_r, and of the factors of
/// x^m - 1 into g and g_1..g_s (by degree).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SieveConfig {
    pub d_primes: Vec<BigUint>,
    pub sieved_primes: Vec<BigUint>,
    pub g_choice: GChoice,
    pub sieved_classes: Vec<u32>,
}

impl SieveConfig {
    /// `d` = the primes selected by `in_d`; `g` = `g_degrees` taken out of `degrees`.
    pub fn split(
        primes: &[BigUint],
        in_d: impl Fn(&BigUint) -> bool,
        degrees: &[u32],
        g_degrees: &[u32],
    ) -> Self {
        let (d_primes, sieved_primes) = primes.iter().cloned().partition(|p| in_d(p));
        SieveConfig {
            d_primes,
            sieved_primes,
            g_choice: GChoice::new(g_degrees.to_vec()),
            sieved_classes: multiset_minus(degrees, g_degrees),
        }
    }

    pub fn r(&self) -> usize {
        self.sieved_primes.len()
    }

    pub fn s(&self) -> usize {
        self.sieved_classes.len()
    }

    pub fn d_value(&self) -> BigUint {
        self.d_primes.iter().product()
    }

    pub fn wd(&self) -> BigUint {
        BigUint::one() << self.d_primes.len()
    }

    pub fn wg(&self) -> BigUint {
        BigUint::one() << self.g_choice.degrees.len()
    }

    pub fn lambda(&self, q: u64) -> BigRational {
        slack(q, &self.sieved_primes, &self.sieved_classes)
    }
}

/// Rad(q^m - 1) = kPL and Rad(x^m - 1) = gGH.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModSieveConfig {
    pub k_primes: Vec<BigUint>,
    pub p_primes: Vec<BigUint>,
    pub l_primes: Vec<BigUint>,
    pub g_choice: GChoice,
    pub g_classes: Vec<u32>,
    pub h_classes: Vec<u32>,
}

impl ModSieveConfig {
    pub fn from_sieve(c: &SieveConfig) -> Self {
        ModSieveConfig {
            k_primes: c.d_primes.clone(),
            p_primes: c.sieved_primes.clone(),
            l_primes: Vec::new(),
            g_choice: c.g_choice.clone(),
            g_classes: c.sieved_classes.clone(),
            h_classes: Vec::new(),
        }
    }

    pub fn lambda(&self, q: u64) -> BigRational {
        slack(q, &self.p_primes, &self.g_classes)
    }

    pub fn eps1(&self) -> BigRational {
        self.l_primes.iter().map(|l| from_big(l).recip()).sum()
    }

    pub fn eps2(&self, q: u64) -> BigRational {
        self.h_classes.iter().map(|&d| q_pow_recip(q, d)).sum()
    }
}

fn multiset_minus(all: &[u32], taken: &[u32]) -> Vec<u32> {
    let mut rest = all.to_vec();
    rest.sort_unstable();
    for d in taken {
        if let Some(i) = rest.iter().position(|x| x == d) {
            rest.remove(i);
        }
    }
    rest
}

fn q_pow_recip(q: u64, d: u32) -> BigRational {
    from_big(&BigUint::from(q).pow(d)).recip()
}

/// 1 - 2 sum 1/p - 2 sum q^-deg.
fn slack(q: u64, primes: &[BigUint], classes: &[u32]) -> BigRational {
    let two = int(2);
    let mut l = BigRational::one();
    for p in primes {
        l -= &two / from_big(p);
    }
    for &d in classes {
        l -= &two * q_pow_recip(q, d);
    }
    l
}

/// The right-hand side `main + tail * q^(-m/2)`; `tail` is zero except in the
/// modified sieve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhs {
    pub main: PowerProduct,
    pub tail: BigRational,
}

impl Rhs {
    pub fn exact(main: PowerProduct) -> Self {
        Rhs { main, tail: BigRational::zero() }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::exact(PowerProduct::rational(r))
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.tail.is_zero() {
            self.main.as_rational()
        } else {
            None
        }
    }

    pub fn approx(&self, q: u64, m: u64) -> f64 {
        let mut v = self.main.approx();
        if !self.tail.is_zero() {
            v += to_f64(&self.tail) * (q as f64).powf(-(m as f64) / 2.0);
        }
        v
    }

    pub fn decimal(&self, q: u64, m: u64) -> String {
        match self.as_rational() {
            Some(r) => rational_decimal(&r, 4),
            None if self.tail.is_zero() => self.main.to_decimal(4),
            None => format!("{:.4}", self.approx(q, m)),
        }
    }
}

impl std::fmt::Display for Rhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.tail.is_zero() {
            write!(f, "{}", self.main)
        } else {
            write!(f, "{} + ({}) * q^(-m/2)", self.main, show_rational(&self.tail))
        }
    }
}

/// Echo of the configuration behind a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Config {
    Sieve(SieveConfig),
    Modified(ModSieveConfig),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub method: Method,
    pub q: u64,
    pub m: u64,
    pub n: u64,
    pub lambda: Option<BigRational>,
    pub big_lambda: Option<BigRational>,
    pub eps1: Option<BigRational>,
    pub eps2: Option<BigRational>,
    pub lhs_exponent: Exp,
    pub rhs: Rhs,
    pub holds: bool,
    pub used_bounds: bool,
    pub reason: Option<String>,
    pub config: Option<Config>,
}

impl CriterionReport {
    fn new(method: Method, q: u64, m: u64, n: u64, lhs_exponent: Exp, rhs: Rhs) -> Self {
        CriterionReport {
            method,
            q,
            m,
            n,
            lambda: None,
            big_lambda: None,
            eps1: None,
            eps2: None,
            lhs_exponent,
            rhs,
            holds: false,
            used_bounds: false,
            reason: None,
            config: None,
        }
    }

    pub fn lhs(&self) -> PowerProduct {
        PowerProduct::power(self.q, self.lhs_exponent)
    }

    pub fn lhs_decimal(&self) -> String {
        self.lhs().to_decimal(4)
    }

    pub fn rhs_approx(&self) -> f64 {
        self.rhs.approx(self.q, self.m)
    }

    pub fn with_bounds(mut self, used: bool) -> Self {
        self.used_bounds = used;
        self
    }

    /// Recomputes `holds` from the stored sides, ignoring side conditions.
    pub fn inequality_holds(&self) -> bool {
        decide(self.q, self.m, self.lhs_exponent, &self.rhs)
    }
}

fn half_minus_one(m: u64) -> Exp {
    Exp::new(m as i64 - 2, 2)
}

/// q^e > main + tail q^(-m/2).
fn decide(q: u64, m: u64, e: Exp, rhs: &Rhs) -> bool {
    if rhs.tail.is_zero() {
        return PowerProduct::power(q, e).cmp_exact(&rhs.main) == Ordering::Greater;
    }
    assert_eq!(e, half_minus_one(m), "a tail only occurs against q^(m/2-1)");
    let a = rhs.main.as_rational().expect("rational main part with a tail");
    // With Q = q^(m/2): Q/q > a + b/Q  <=>  q^m - q b > q a Q.
    let qm = from_big(&BigUint::from(q).pow(m as u32));
    let qr = int(q);
    let left = &qm - &qr * &rhs.tail;
    let right = &qr * a;
    let sq = |x: &BigRational| x * x;
    if right.is_positive() {
        left.is_positive() && sq(&left) > sq(&right) * &qm
    } else if right.is_zero() {
        left.is_positive()
    } else {
        !left.is_negative() || sq(&left) < sq(&right) * &qm
    }
}

/// q^(m/2-1) > (2n+1) W1^2 W2^2.
pub fn basic_condition(q: u64, m: u64, n: u64, w1: &BigUint, w2: &BigUint) -> Result<CriterionReport> {
    if m < 3 {
        return Err(Error::MTooSmall(m));
    }
    let rhs = int(2 * n + 1) * from_big(&(w1 * w1 * w2 * w2));
    let mut rep = CriterionReport::new(Method::Basic, q, m, n, half_minus_one(m), Rhs::rational(rhs));
    rep.holds = rep.inequality_holds();
    Ok(rep)
}

/// (lambda, Lambda) with Lambda = (2r + 2s - 1)/lambda + 2.
pub fn prime_sieve_lambda(q: u64, config: &SieveConfig) -> Result<(BigRational, BigRational)> {
    let lambda = config.lambda(q);
    if !lambda.is_positive() {
        return Err(Error::NonpositiveLambda);
    }
    let big = amplification(config.r() + config.s(), &lambda);
    Ok((lambda, big))
}

fn amplification(rs: usize, lambda: &BigRational) -> BigRational {
    int(2 * rs as i64 - 1) / lambda + int(2)
}

/// q^(m/2-1) > (2n+1) W(d)^2 W(g)^2 Lambda.
pub fn prime_sieve_condition(
    q: u64,
    m: u64,
    n: u64,
    config: &SieveConfig,
    wd: &BigUint,
    wg: &BigUint,
) -> CriterionReport {
    let lambda = config.lambda(q);
    let mut rep = CriterionReport::new(
        Method::Sieve,
        q,
        m,
        n,
        half_minus_one(m),
        Rhs::rational(BigRational::one()),
    );
    rep.lambda = Some(lambda.clone());
    rep.config = Some(Config::Sieve(config.clone()));
    if !lambda.is_positive() {
        rep.reason = Some(Error::NonpositiveLambda.to_string());
        return rep;
    }
    let big = amplification(config.r() + config.s(), &lambda);
    let w = from_big(&(wd * wd * wg * wg));
    rep.rhs = Rhs::rational(int(2 * n + 1) * w * &big);
    rep.big_lambda = Some(big);
    rep.holds = rep.inequality_holds();
    rep
}

/// The modified sieve. With L and H empty its rhs equals the prime sieve's.
pub fn modified_sieve_condition(q: u64, m: u64, n: u64, config: &ModSieveConfig) -> Result<CriterionReport> {
    let lambda = config.lambda(q);
    let eps1 = config.eps1();
    let eps2 = config.eps2(q);
    let th_k = theta(&config.k_primes);
    let (th_g, w_g) = theta_w_of_choice(q, &config.g_choice);
    let w_k = BigUint::one() << config.k_primes.len();
    let dens = &th_k * &th_k * &th_g * &th_g;
    let two = int(2);
    let den = &lambda * &dens - &two * (&eps1 + &eps2);
    if !den.is_positive() || !lambda.is_positive() {
        return Err(Error::PreconditionFailed);
    }
    let r = config.p_primes.len() as i64;
    let s = config.g_classes.len() as i64;
    let t = int(config.l_primes.len() as i64);
    let u = int(config.h_classes.len() as i64);
    let n_r = int(n as i64);
    let wsq = from_big(&(&w_k * &w_k * &w_g * &w_g));
    let x = &dens * wsq * (int(2 * r + 2 * s - 1) + &two * &lambda);
    let y = int(n as i64 + 2) * (&t - &eps1) + int(n as i64 + 3) * (&u - &eps2);
    let z = &t + &u - &two * (&eps1 + &eps2);
    let main = (int(2 * n as i64 + 1) * x + y) / &den;
    let tail = -(&n_r * z) / &den;
    let mut rep = CriterionReport::new(
        Method::Modified,
        q,
        m,
        n,
        half_minus_one(m),
        Rhs { main: PowerProduct::rational(main), tail },
    );
    rep.big_lambda = Some(amplification((r + s) as usize, &lambda));
    rep.lambda = Some(lambda);
    rep.eps1 = Some(eps1);
    rep.eps2 = Some(eps2);
    rep.config = Some(Config::Modified(config.clone()));
    rep.holds = rep.inequality_holds();
    Ok(rep)
}

/// Lambda = (2q^2 + (a-6)q + 4)/((a-2)q + 2) with a = (q-1)/m', for d = q^m - 1
/// and g = 1 when m' | q - 1.
pub fn lambda_closed_form(q: u64, m_prime: u64) -> Result<BigRational> {
    if m_prime == 0 || !(q - 1).is_multiple_of(m_prime) {
        return Err(Error::DivisorViolation { m_prime, q_minus_1: q - 1 });
    }
    let a = ((q - 1) / m_prime) as i64;
    let q = q as i64;
    let den = (a - 2) * q + 2;
    if den == 0 {
        return Err(Error::Singular);
    }
    Ok(BigRational::new(
        BigInt::from(2 * q * q + (a - 6) * q + 4),
        BigInt::from(den),
    ))
}

/// Prime sieve with d = q^m - 1, g = 1 and Lambda from the closed form.
pub fn lemma61_condition(q: u64, m: u64, n: u64, w_qm: &BigUint) -> Result<CriterionReport> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let m_prime = p_free_part(m, p);
    let big = lambda_closed_form(q, m_prime)?;
    let rhs = int(2 * n as i64 + 1) * from_big(&(w_qm * w_qm)) * &big;
    let mut rep = CriterionReport::new(Method::Lemma61, q, m, n, half_minus_one(m), Rhs::rational(rhs));
    rep.lambda = Some(BigRational::one() - rat(2 * m_prime as i64, q as i64));
    rep.big_lambda = Some(big);
    rep.holds = rep.inequality_holds();
    Ok(rep)
}

/// q^E > C, with C assembled from one of the W bounds.
pub fn wbd_screen(q: u64, m: u64, exponent: Exp, multiplier: PowerProduct, kind: BoundKind) -> CriterionReport {
    let mut rep = CriterionReport::new(Method::WbdScreen, q, m, 0, exponent, Rhs::exact(multiplier));
    rep.holds = rep.inequality_holds();
    rep.reason = Some(format!("{kind:?} W bound").to_lowercase());
    rep
}

/// q^(m/2-1) > 2(2n+1) m W(q^m-1)^2 2^(2 m sigma).
pub fn cond61_check(q: u64, m: u64, n: u64, w_qm: &BigUint, sigma: &BigRational) -> CriterionReport {
    let coef = int(2 * (2 * n as i64 + 1) * m as i64) * from_big(&(w_qm * w_qm));
    let two_exp = sigma * int(2 * m as i64);
    let exp = Exp::new(
        i64::try_from(two_exp.numer()).expect("small exponent"),
        i64::try_from(two_exp.denom()).expect("small exponent"),
    );
    let rhs = PowerProduct::rational(coef).mul(&PowerProduct::power(2u32, exp));
    let mut rep = CriterionReport::new(Method::Cond61, q, m, n, half_minus_one(m), Rhs::exact(rhs));
    rep.holds = rep.inequality_holds();
    rep
}

fn big_strings(v: &[BigUint]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl Serialize for Config {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        match self {
            Config::Sieve(c) => {
                map.serialize_entry("kind", "sieve")?;
                map.serialize_entry("d", &c.d_value().to_string())?;
                map.serialize_entry("d_primes", &big_strings(&c.d_primes))?;
                map.serialize_entry("r", &c.r())?;
                map.serialize_entry("sieved_primes", &big_strings(&c.sieved_primes))?;
                map.serialize_entry("g_degrees", &c.g_choice.degrees)?;
                map.serialize_entry("s", &c.s())?;
                map.serialize_entry("sieved_degrees", &c.sieved_classes)?;
            }
            Config::Modified(c) => {
                map.serialize_entry("kind", "modified")?;
                map.serialize_entry("k_primes", &big_strings(&c.k_primes))?;
                map.serialize_entry("p_primes", &big_strings(&c.p_primes))?;
                map.serialize_entry("l_primes", &big_strings(&c.l_primes))?;
                map.serialize_entry("g_degrees", &c.g_choice.degrees)?;
                map.serialize_entry("big_g_degrees", &c.g_classes)?;
                map.serialize_entry("h_degrees", &c.h_classes)?;
            }
        }
        map.end()
    }
}

impl Serialize for CriterionReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let opt = |r: &Option<BigRational>| r.as_ref().map(ExactValue::from);
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("method", &self.method)?;
        map.serialize_entry("q", &self.q)?;
        map.serialize_entry("m", &self.m)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("lambda", &opt(&self.lambda))?;
        map.serialize_entry("Lambda", &opt(&self.big_lambda))?;
        map.serialize_entry("eps1", &opt(&self.eps1))?;
        map.serialize_entry("eps2", &opt(&self.eps2))?;
        map.serialize_entry("lhs_exponent", &self.lhs_exponent.to_string())?;
        map.serialize_entry("lhs", &self.lhs_decimal())?;
        map.serialize_entry(
            "rhs",
            &serde_json::json!({
                "exact": self.rhs.to_string(),
                "decimal": self.rhs.decimal(self.q, self.m),
                "approx": self.rhs_approx(),
            }),
        )?;
        map.serialize_entry("holds", &self.holds)?;
        map.serialize_entry("used_bounds", &self.used_bounds)?;
        map.serialize_entry("reason", &self.reason)?;
        map.serialize_entry("config", &self.config)?;
        map.end()
    }
}
