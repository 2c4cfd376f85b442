//! Multiplicative and additive characters on oracle fields, and brute-force
//! checks of the characteristic-function identities, the Weil-type sum
//! bounds, the counting lower bound and the sieving inequality.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{
    inverse_trace_is, is_e_free, is_in_en, is_g_free, trace_abs, trace_to_base, FieldCtx, RationalFunc,
};
use crate::gf::{poly, Elem, Poly};
use crate::intfact::{divisors, factor_small, moebius};
use crate::par::Exec;

/// Deviation allowed in the identity suites.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

fn unit(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * turns)
}

/// chi(g^t) = e(index * t / order), gcd(index, order) = 1; index 0 is the trivial character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MultChar {
    pub order: u64,
    pub index: u64,
}

impl MultChar {
    pub fn trivial() -> Self {
        MultChar { order: 1, index: 0 }
    }

    /// The phi(d) characters of exact order d.
    pub fn of_order(d: u64) -> Vec<MultChar> {
        if d == 1 {
            return vec![Self::trivial()];
        }
        (1..d).filter(|j| j.gcd(&d) == 1).map(|index| MultChar { order: d, index }).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn eval(&self, tables: &Tables, alpha: Elem) -> Complex64 {
        if alpha == 0 {
            return if self.is_trivial() { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let t = tables.log[alpha as usize];
        unit(((self.index as u128 * t as u128) % self.order as u128) as f64 / self.order as f64)
    }
}

/// psi_u(x) = psi_1(u x) with psi_1 the canonical additive character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AddChar {
    pub u: Elem,
}

impl AddChar {
    pub fn eval(&self, ctx: &FieldCtx, tables: &Tables, x: Elem) -> Complex64 {
        tables.psi(ctx.field().mul(self.u, x))
    }
}

/// Discrete logs, absolute traces and per-element orders, computed once per field.
#[derive(Clone, Debug)]
pub struct Tables {
    p: u64,
    log: Vec<u64>,
    abs_trace: Vec<u64>,
    fq_order: Vec<Vec<u32>>,
    add_order: Vec<Vec<u32>>,
    full: Vec<u32>,
    degrees: Vec<u32>,
}

impl Tables {
    pub fn new(ctx: &FieldCtx, exec: Exec) -> Result<Self> {
        let f = ctx.field();
        if !f.has_log_table() {
            return Err(Error::LimitExceeded { size: ctx.size().to_string(), limit: crate::gf::LOG_TABLE_LIMIT });
        }
        let elems: Vec<Elem> = ctx.elements().collect();
        let log = elems.iter().map(|&a| f.log(a).unwrap_or(0)).collect();
        let abs_trace = elems.iter().map(|&a| trace_abs(f, a)).collect();
        let fq_order = exec.map(&elems, |&a| ctx.fq_order(a));
        let add_order = exec.map(&elems, |&u| ctx.additive_order(u));
        let full = ctx.xm1_factors().iter().map(|(_, e)| *e).collect();
        let degrees = ctx.xm1_factors().iter().map(|(g, _)| g.len() as u32 - 1).collect();
        Ok(Tables { p: ctx.p, log, abs_trace, fq_order, add_order, full, degrees })
    }

    /// psi_1 on F_{q^m}.
    pub fn psi(&self, x: Elem) -> Complex64 {
        unit(self.abs_trace[x as usize] as f64 / self.p as f64)
    }

    /// Factors of x^m - 1 dividing (x^m - 1) / Ord(alpha), as a bitmask.
    pub fn comask(&self, alpha: Elem) -> u64 {
        mask_where(&self.fq_order[alpha as usize], &self.full, |o, f| o < f)
    }
}

fn mask_where(a: &[u32], b: &[u32], keep: impl Fn(u32, u32) -> bool) -> u64 {
    a.iter().zip(b).enumerate().filter(|(_, (&x, &y))| keep(x, y)).fold(0, |m, (i, _)| m | 1 << i)
}

fn prime_factors(n: u64) -> Vec<u64> {
    factor_small(n).into_iter().map(|(p, _)| p).collect()
}

fn theta(e: u64) -> f64 {
    prime_factors(e).iter().map(|&p| 1.0 - 1.0 / p as f64).product()
}

fn euler_phi(n: u64) -> f64 {
    n as f64 * theta(n)
}

/// Every monic divisor of x^m - 1, as exponent vectors.
pub fn xm1_divisors(ctx: &FieldCtx) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for (_, e) in ctx.xm1_factors() {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| (0..=*e).map(move |k| {
                let mut w = v.clone();
                w.push(k);
                w
            }))
            .collect();
    }
    out
}

fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    // all submasks, including 0 and mask
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn support(exps: &[u32]) -> u64 {
    mask_where(exps, exps, |x, _| x > 0)
}

fn max_deviation(exec: Exec, elems: &[Elem], f: impl Fn(Elem) -> f64 + Sync + Send) -> f64 {
    exec.map(elems, |&a| f(a)).into_iter().fold(0.0, f64::max)
}

/// max over alpha != 0 of |rho_e(alpha) - [alpha is e-free]|.
pub fn rho_identity_check(ctx: &FieldCtx, tables: &Tables, e: u64, exec: Exec) -> Result<f64> {
    let n = ctx.group_order();
    if e == 0 || !n.is_multiple_of(e) {
        return Err(Error::ENotDivisor(e.to_string()));
    }
    let terms: Vec<(f64, Vec<MultChar>)> = divisors(e)
        .into_iter()
        .filter(|&d| moebius(d) != 0)
        .map(|d| (moebius(d) as f64 / euler_phi(d), MultChar::of_order(d)))
        .collect();
    let th = theta(e);
    let elems: Vec<Elem> = (1..ctx.size()).collect();
    Ok(max_deviation(exec, &elems, |a| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, chars) in &terms {
            let s: Complex64 = chars.iter().map(|c| c.eval(tables, a)).sum();
            acc += s * *w;
        }
        let target = if is_e_free(ctx, a, e).unwrap_or(false) { 1.0 } else { 0.0 };
        (acc * th - target).norm()
    }))
}

/// max over alpha of |eta_g(alpha) - [alpha is g-free]|, g given by exponents.
pub fn eta_identity_check(ctx: &FieldCtx, tables: &Tables, g: &[u32], exec: Exec) -> Result<f64> {
    let gpoly = ctx.poly_from_exponents(g);
    let q = ctx.q as f64;
    let supp = support(g);
    let big_theta: f64 = (0..g.len())
        .filter(|i| supp >> i & 1 == 1)
        .map(|i| 1.0 - q.powi(-(tables.degrees[i] as i32)))
        .product();
    // for each square-free h | g: weight mu'(h)/Phi(h) and the u with psi_u of order h
    let mut terms: Vec<(f64, Vec<Elem>)> = Vec::new();
    for h in subsets(supp) {
        let bits = h.count_ones() as i32;
        let phi: f64 = (0..g.len())
            .filter(|i| h >> i & 1 == 1)
            .map(|i| q.powi(tables.degrees[i] as i32) - 1.0)
            .product();
        let us: Vec<Elem> = ctx
            .elements()
            .filter(|&u| {
                let o = &tables.add_order[u as usize];
                o.iter().enumerate().all(|(i, &x)| x == (h >> i & 1) as u32)
            })
            .collect();
        terms.push(((-1f64).powi(bits) / phi, us));
    }
    let elems: Vec<Elem> = ctx.elements().collect();
    let dev = max_deviation(exec, &elems, |a| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, us) in &terms {
            let s: Complex64 = us.iter().map(|&u| AddChar { u }.eval(ctx, tables, a)).sum();
            acc += s * *w;
        }
        let free = is_g_free(ctx, a, &gpoly).unwrap_or(false);
        (acc * big_theta - if free { 1.0 } else { 0.0 }).norm()
    });
    Ok(dev)
}

/// psi_1 of F_q at a base-encoded element.
fn psi_base(ctx: &FieldCtx, c: Elem) -> Complex64 {
    unit(trace_abs(ctx.base(), c) as f64 / ctx.p as f64)
}

/// max over alpha of |tau_a(alpha) - [Tr(alpha) = a]|, a in base encoding.
pub fn tau_identity_check(ctx: &FieldCtx, tables: &Tables, a: Elem, exec: Exec) -> f64 {
    let base = ctx.base();
    let q = ctx.q;
    let elems: Vec<Elem> = ctx.elements().collect();
    max_deviation(exec, &elems, |alpha| {
        let f = ctx.field();
        let s: Complex64 = (0..q)
            .map(|u| tables.psi(f.mul(ctx.embed(u), alpha)) * psi_base(ctx, base.neg(base.mul(u, a))))
            .sum();
        let target = if trace_to_base(ctx, alpha) == a { 1.0 } else { 0.0 };
        (s / q as f64 - target).norm()
    })
}

/// Largest |sum chi(alpha)| over nontrivial chi and |sum psi_u| over u != 0.
pub fn orthogonality_check(ctx: &FieldCtx, tables: &Tables) -> f64 {
    let n = ctx.group_order();
    let mut worst: f64 = 0.0;
    for d in divisors(n).into_iter().filter(|&d| d > 1) {
        for c in MultChar::of_order(d) {
            let s: Complex64 = (1..ctx.size()).map(|a| c.eval(tables, a)).sum();
            worst = worst.max(s.norm());
        }
    }
    for u in 1..ctx.size() {
        let s: Complex64 = ctx.elements().map(|a| AddChar { u }.eval(ctx, tables, a)).sum();
        worst = worst.max(s.norm());
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct SumBound {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

impl SumBound {
    fn new(lhs: f64, bound: f64) -> Self {
        let holds = lhs <= bound + IDENTITY_TOLERANCE * bound.abs().max(1.0);
        SumBound { lhs, bound, holds }
    }
}

fn is_squarefree(d: u64) -> bool {
    factor_small(d).iter().all(|&(_, e)| e == 1)
}

/// Largest |sum chi(f(alpha))| over the characters of exact order d.
pub fn weil_mult_check(ctx: &FieldCtx, tables: &Tables, f: &RationalFunc, d: u64) -> Result<SumBound> {
    let n = ctx.group_order();
    if d <= 1 || !n.is_multiple_of(d) || !is_squarefree(d) {
        return Err(Error::InvalidArgument(format!("{d} is not a square-free divisor > 1 of {n}")));
    }
    let fact = f.factorization(ctx);
    let all_gcd = fact.iter().fold(0u64, |g, (_, e)| g.gcd(&e.unsigned_abs()));
    if all_gcd % d == 0 {
        return Err(Error::ShapeViolation(d));
    }
    let values: Vec<Elem> = ctx.elements().filter_map(|a| f.eval(ctx, a)).filter(|&v| v != 0).collect();
    let lhs = MultChar::of_order(d)
        .iter()
        .map(|c| values.iter().map(|&v| c.eval(tables, v)).sum::<Complex64>().norm())
        .fold(0.0, f64::max);
    let degree_sum = f.distinct_degree_sum(ctx) as f64;
    Ok(SumBound::new(lhs, (degree_sum - 1.0) * (ctx.size() as f64).sqrt()))
}

/// Nonconstant with every pole order prime to p; excludes g = h^p - h + c.
pub fn additive_admissible(ctx: &FieldCtx, g: &RationalFunc) -> bool {
    let p = ctx.p;
    let (n1, n2) = (g.n1(), g.n2());
    if n1 == 0 && n2 == 0 {
        return false;
    }
    if n1 > n2 && ((n1 - n2) as u64).is_multiple_of(p) {
        return false;
    }
    poly::factor(ctx.field(), &g.den).iter().all(|&(_, e)| !(e as u64).is_multiple_of(p))
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedBound {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
    pub d: [usize; 4],
}

/// |sum chi(f(alpha)) psi_u(g(alpha))| over f(alpha) != 0, inf and g(alpha) != inf.
pub fn weil_mixed_check(
    ctx: &FieldCtx,
    tables: &Tables,
    f: &RationalFunc,
    g: &RationalFunc,
    chi: MultChar,
    psi: AddChar,
) -> Result<MixedBound> {
    if psi.u == 0 {
        return Err(Error::InvalidArgument("additive character must be nontrivial".into()));
    }
    if !additive_admissible(ctx, g) {
        return Err(Error::InvalidArgument("g may be of the shape h^p - h + c".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for a in ctx.elements() {
        let (Some(fv), Some(gv)) = (f.eval(ctx, a), g.eval(ctx, a)) else { continue };
        if fv == 0 {
            continue;
        }
        s += chi.eval(tables, fv) * psi.eval(ctx, tables, gv);
    }
    let f_factors: Vec<Poly> = f.factorization(ctx).into_iter().map(|(h, _)| h).collect();
    let d1 = f.distinct_degree_sum(ctx);
    let d2 = g.n1().saturating_sub(g.n2());
    let d3 = g.n2();
    let d4 = poly::factor(ctx.field(), &g.den)
        .into_iter()
        .filter(|(h, _)| !f_factors.contains(h))
        .map(|(h, _)| h.len() - 1)
        .sum();
    let total = (d1 + d2 + d3 + d4) as f64 - 1.0;
    let b = SumBound::new(s.norm(), total * (ctx.size() as f64).sqrt());
    Ok(MixedBound { lhs: b.lhs, bound: b.bound, holds: b.holds, d: [d1, d2, d3, d4] })
}

/// u1 x + u2 f(x) + u x^{-1}, the additive argument in the main counting sum.
pub fn key_argument(ctx: &FieldCtx, f: &RationalFunc, u1: Elem, u2: Elem, u: Elem) -> Result<RationalFunc> {
    let fe = ctx.field();
    let x = poly::x();
    let x2 = poly::mul(fe, &x, &x);
    let mut num = poly::scale(fe, &poly::mul(fe, &x2, &f.den), u1);
    num = poly::add(fe, &num, &poly::scale(fe, &poly::mul(fe, &x, &f.num), u2));
    num = poly::add(fe, &num, &poly::scale(fe, &f.den, u));
    RationalFunc::reduced(ctx, num, poly::mul(fe, &x, &f.den))
}

/// Per-element data for counting: only alpha outside P with Tr(alpha^{-1}) = a.
pub struct Counter {
    rows: Vec<(u64, u64, u64, u64)>,
    n: u64,
    factors: usize,
}

impl Counter {
    pub fn new(ctx: &FieldCtx, tables: &Tables, f: &RationalFunc, a: Elem) -> Self {
        let excluded = f.excluded(ctx);
        let rows = ctx
            .elements()
            .filter(|x| excluded.binary_search(x).is_err() && inverse_trace_is(ctx, *x, a))
            .filter_map(|x| {
                let y = f.eval(ctx, x)?;
                Some((tables.log[x as usize], tables.comask(x), tables.log[y as usize], tables.comask(y)))
            })
            .collect();
        Counter { rows, n: ctx.group_order(), factors: ctx.xm1_factors().len() }
    }

    /// e1, e2 divide q^m - 1; g1, g2 are factor masks.
    pub fn count(&self, e1: u64, e2: u64, g1: u64, g2: u64) -> u64 {
        debug_assert!(self.n.is_multiple_of(e1) && self.n.is_multiple_of(e2));
        self.rows
            .iter()
            .filter(|&&(l1, c1, l2, c2)| e1.gcd(&l1) == 1 && e2.gcd(&l2) == 1 && g1 & c1 == 0 && g2 & c2 == 0)
            .count() as u64
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.factors) - 1
    }
}

/// N_{f,a}(e1, e2, g1, g2) by enumeration.
pub fn brute_count_n(
    ctx: &FieldCtx,
    tables: &Tables,
    f: &RationalFunc,
    a: Elem,
    (e1, e2): (u64, u64),
    (g1, g2): (&[Elem], &[Elem]),
) -> Result<u64> {
    let n = ctx.group_order();
    for e in [e1, e2] {
        if e == 0 || !n.is_multiple_of(e) {
            return Err(Error::ENotDivisor(e.to_string()));
        }
    }
    let m1 = support(&ctx.divisor_exponents(g1)?);
    let m2 = support(&ctx.divisor_exponents(g2)?);
    Ok(Counter::new(ctx, tables, f, a).count(e1, e2, m1, m2))
}

/// The proof-form lower bound
/// theta theta Theta Theta / q * (q^m - (n+1) q - (2n+1) q^{m/2+1} (W - 1)).
pub fn counting_lower_bound(ctx: &FieldCtx, tables: &Tables, n: usize, (e1, e2): (u64, u64), (g1, g2): (u64, u64)) -> f64 {
    let q = ctx.q as f64;
    let qm = ctx.size() as f64;
    let big_theta = |mask: u64| -> f64 {
        (0..tables.degrees.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| 1.0 - q.powi(-(tables.degrees[i] as i32)))
            .product()
    };
    let w = |k: u32| 2f64.powi(k as i32);
    let ww = w(prime_factors(e1).len() as u32)
        * w(prime_factors(e2).len() as u32)
        * w(g1.count_ones())
        * w(g2.count_ones());
    let dens = theta(e1) * theta(e2) * big_theta(g1) * big_theta(g2);
    let nf = n as f64;
    dens / q * (qm - (nf + 1.0) * q - (2.0 * nf + 1.0) * qm.sqrt() * q * (ww - 1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct SieveInequality {
    pub lhs: u64,
    pub rhs: i64,
    pub holds: bool,
}

/// Sieving inequality for core (d, g) with the remaining primes and factors sieved.
pub fn sieve_inequality(counter: &Counter, d_primes: &[u64], sieved: &[u64], g: u64) -> SieveInequality {
    let d: u64 = d_primes.iter().product();
    let full = counter.full_mask();
    let rest: Vec<u64> = (0..counter.factors).filter(|i| g >> i & 1 == 0).map(|i| 1u64 << i).collect();
    let (r, s) = (sieved.len() as i64, rest.len() as i64);
    let base = counter.count(d, d, g, g) as i64;
    let mut rhs = -(2 * r + 2 * s - 1) * base;
    for &p in sieved {
        rhs += counter.count(p * d, d, g, g) as i64 + counter.count(d, p * d, g, g) as i64;
    }
    for &gi in &rest {
        rhs += counter.count(d, d, gi | g, g) as i64 + counter.count(d, d, g, gi | g) as i64;
    }
    let lhs = counter.count(counter.n, counter.n, full, full);
    SieveInequality { lhs, rhs, holds: lhs as i64 >= rhs }
}

/// One line of a check suite. Character sums hold when `lhs <= bound`;
/// counts hold when `lhs >= bound`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub field: String,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub holds: bool,
    /// Search result; `Some(Null)` when nothing was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    fn deviation(check: &str, ctx: &FieldCtx, parameters: Value, dev: f64) -> Self {
        CheckRecord {
            check: check.into(),
            field: ctx.describe(),
            parameters,
            max_deviation: Some(dev),
            lhs: None,
            bound: None,
            holds: dev < IDENTITY_TOLERANCE,
            witness: None,
        }
    }

    fn bounded(check: &str, ctx: &FieldCtx, parameters: Value, lhs: f64, bound: f64, holds: bool) -> Self {
        CheckRecord {
            check: check.into(),
            field: ctx.describe(),
            parameters,
            max_deviation: None,
            lhs: Some(lhs),
            bound: Some(bound),
            holds,
            witness: None,
        }
    }
}

fn exps_text(ctx: &FieldCtx, exps: &[u32]) -> String {
    ctx.show_poly(&ctx.poly_from_exponents(exps))
}

/// rho for every e | q^m - 1, eta for every g | x^m - 1, tau for every a, orthogonality.
pub fn identity_suite(ctx: &FieldCtx, exec: Exec) -> Result<Vec<CheckRecord>> {
    let tables = Tables::new(ctx, exec)?;
    let mut out = Vec::new();
    for e in divisors(ctx.group_order()) {
        let dev = rho_identity_check(ctx, &tables, e, exec)?;
        out.push(CheckRecord::deviation("rho", ctx, json!({ "e": e }), dev));
    }
    for g in xm1_divisors(ctx) {
        let dev = eta_identity_check(ctx, &tables, &g, exec)?;
        out.push(CheckRecord::deviation("eta", ctx, json!({ "g": exps_text(ctx, &g) }), dev));
    }
    for a in 0..ctx.q {
        let dev = tau_identity_check(ctx, &tables, a, exec);
        out.push(CheckRecord::deviation("tau", ctx, json!({ "a": a }), dev));
    }
    let worst = orthogonality_check(ctx, &tables);
    let tol = IDENTITY_TOLERANCE * ctx.size() as f64;
    out.push(CheckRecord::bounded("orthogonality", ctx, json!({}), worst, tol, worst <= tol));
    Ok(out)
}

fn random_poly(ctx: &FieldCtx, rng: &mut ChaCha8Rng, degree: usize, monic: bool) -> Poly {
    let size = ctx.size();
    let mut c: Poly = (0..=degree).map(|_| rng.gen_range(0..size)).collect();
    if monic || c[degree] == 0 {
        c[degree] = 1;
    }
    c
}

/// Deterministic rational functions of degree sum 1..=max_sum whose
/// multiplicities have gcd 1 (never a constant times a power).
pub fn sample_functions(ctx: &FieldCtx, count: usize, max_sum: usize, seed: u64) -> Vec<RationalFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let total = rng.gen_range(1..=max_sum);
        let n2 = rng.gen_range(0..=total);
        let num = random_poly(ctx, &mut rng, total - n2, false);
        let den = random_poly(ctx, &mut rng, n2, true);
        let Ok(f) = RationalFunc::new(ctx, num, den) else { continue };
        let g = f.factorization(ctx).iter().fold(0u64, |g, (_, e)| g.gcd(&e.unsigned_abs()));
        if g == 1 && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Multiplicative bound for every square-free d > 1 and each sampled f;
/// mixed bound for sampled (f, g, chi, psi) and for the counting sum's own argument.
pub fn weil_suite(ctx: &FieldCtx, extra: &[RationalFunc], per_field: usize, exec: Exec) -> Result<Vec<CheckRecord>> {
    let tables = Tables::new(ctx, exec)?;
    let mut fs = extra.to_vec();
    fs.extend(sample_functions(ctx, per_field, 4, 0x3e11 ^ ctx.size()));
    let orders: Vec<u64> =
        divisors(ctx.group_order()).into_iter().filter(|&d| d > 1 && is_squarefree(d)).collect();
    let mut jobs = Vec::new();
    for f in &fs {
        for &d in &orders {
            jobs.push((f.clone(), d));
        }
    }
    let mut out = Vec::new();
    for (job, res) in jobs.iter().zip(exec.map(&jobs, |(f, d)| weil_mult_check(ctx, &tables, f, *d))) {
        let (f, d) = job;
        let r = res?;
        out.push(CheckRecord::bounded("weil_mult", ctx, json!({ "f": f.show(ctx), "d": d }), r.lhs, r.bound, r.holds));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x3e12 ^ ctx.size());
    let all_chars: Vec<MultChar> = divisors(ctx.group_order()).into_iter().flat_map(MultChar::of_order).collect();
    let mut mixed = Vec::new();
    for f in &fs {
        let mut tries = 0;
        let mut added = 0;
        while added < 2 && tries < 200 {
            tries += 1;
            let total = rng.gen_range(1..=4);
            let n2 = rng.gen_range(0..=total);
            let num = random_poly(ctx, &mut rng, total - n2, false);
            let den = random_poly(ctx, &mut rng, n2, true);
            let Ok(g) = RationalFunc::reduced(ctx, num, den) else { continue };
            if !additive_admissible(ctx, &g) {
                continue;
            }
            let chi = all_chars[rng.gen_range(0..all_chars.len())];
            let u = rng.gen_range(1..ctx.size());
            mixed.push((f.clone(), g, chi, u, "weil_mixed"));
            added += 1;
        }
        // the counting argument u1 x + u2 f + u x^{-1}
        let u1 = rng.gen_range(0..ctx.size());
        let u2 = rng.gen_range(0..ctx.size());
        let u = ctx.embed(rng.gen_range(1..ctx.q));
        if let Ok(g) = key_argument(ctx, f, u1, u2, u) {
            if additive_admissible(ctx, &g) {
                let chi = all_chars[rng.gen_range(0..all_chars.len())];
                mixed.push((poly_x_func(ctx), g, chi, 1, "weil_mixed_key"));
            }
        }
    }
    for (job, res) in
        mixed.iter().zip(exec.map(&mixed, |(f, g, chi, u, _)| weil_mixed_check(ctx, &tables, f, g, *chi, AddChar { u: *u })))
    {
        let (f, g, chi, u, name) = job;
        let r = res?;
        let params = json!({ "f": f.show(ctx), "g": g.show(ctx), "chi": chi, "u": u, "D": r.d });
        out.push(CheckRecord::bounded(name, ctx, params, r.lhs, r.bound, r.holds));
    }
    Ok(out)
}

fn poly_x_func(ctx: &FieldCtx) -> RationalFunc {
    RationalFunc::new(ctx, poly::x(), poly::one()).expect("x is a valid function")
}

fn prime_subsets(primes: &[u64]) -> Vec<Vec<u64>> {
    (0..1u32 << primes.len())
        .map(|mask| primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect())
        .collect()
}

/// Functions for the counting suite when none is supplied.
pub const COUNTING_FUNCTIONS: [&str; 2] = ["x^3+x+1 / x", "x^2+x+2 / x^2+1"];

/// The members of `COUNTING_FUNCTIONS` that are valid and lie in E_n over `ctx`.
pub fn counting_functions(ctx: &FieldCtx) -> Vec<RationalFunc> {
    COUNTING_FUNCTIONS
        .iter()
        .filter_map(|s| RationalFunc::parse(ctx, s).ok())
        .filter(|f| is_in_en(f, ctx, f.degree_sum()))
        .collect()
}

/// Counting lower bound on every radical lattice point and the sieving
/// inequality on every (d, g) split, for each function and each a in F_q.
pub fn counting_suite(ctx: &FieldCtx, fs: &[RationalFunc], exec: Exec) -> Result<Vec<CheckRecord>> {
    let tables = Tables::new(ctx, exec)?;
    let primes = prime_factors(ctx.group_order());
    let rads: Vec<u64> = prime_subsets(&primes).iter().map(|s| s.iter().product()).collect();
    let factors = ctx.xm1_factors().len();
    let masks: Vec<u64> = (0..1u64 << factors).collect();
    let mut jobs = Vec::new();
    for f in fs {
        for a in 0..ctx.q {
            jobs.push((f.clone(), a));
        }
    }
    let per_job = exec.map(&jobs, |(f, a)| {
        let counter = Counter::new(ctx, &tables, f, *a);
        let n = f.degree_sum();
        let mut worst: Option<(f64, f64, Value)> = None;
        let mut lattice_ok = true;
        let mut points = 0u64;
        for &e1 in &rads {
            for &e2 in &rads {
                for &g1 in &masks {
                    for &g2 in &masks {
                        points += 1;
                        let count = counter.count(e1, e2, g1, g2) as f64;
                        let bound = counting_lower_bound(ctx, &tables, n, (e1, e2), (g1, g2));
                        if bound > count {
                            lattice_ok = false;
                        }
                        let slack = count - bound;
                        if worst.as_ref().is_none_or(|w| slack < w.0 - w.1) {
                            worst = Some((count, bound, json!({ "e1": e1, "e2": e2, "g1_mask": g1, "g2_mask": g2 })));
                        }
                    }
                }
            }
        }
        let (count, bound, at) = worst.expect("lattice is nonempty");
        let lattice = CheckRecord::bounded(
            "counting_bound",
            ctx,
            json!({ "f": f.show(ctx), "a": a, "points": points, "tightest": at }),
            count,
            bound,
            lattice_ok,
        );
        let mut sieve = Vec::new();
        for d_primes in prime_subsets(&primes) {
            let sieved: Vec<u64> = primes.iter().copied().filter(|p| !d_primes.contains(p)).collect();
            for &g in &masks {
                let s = sieve_inequality(&counter, &d_primes, &sieved, g);
                sieve.push(CheckRecord::bounded(
                    "sieve_inequality",
                    ctx,
                    json!({ "f": f.show(ctx), "a": a, "d": d_primes.iter().product::<u64>(), "g_mask": g }),
                    s.lhs as f64,
                    s.rhs as f64,
                    s.holds,
                ));
            }
        }
        (lattice, sieve)
    });
    let mut out = Vec::new();
    for (lattice, sieve) in per_job {
        out.push(lattice);
        out.extend(sieve);
    }
    Ok(out)
}
