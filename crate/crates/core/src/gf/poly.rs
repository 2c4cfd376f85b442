//! Dense polynomials over a [`GaloisField`], low degree first, no trailing zeros.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, GaloisField};
use crate::error::{Error, Result};
use crate::intfact::factor_small;

pub type Poly = Vec<Elem>;

/// Base-`base` digits of `t`, exactly `len` of them.
pub fn from_encoding(mut t: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(t % base);
        t /= base;
    }
    out
}

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn x() -> Poly {
    vec![0, 1]
}

pub fn one() -> Poly {
    vec![1]
}

pub fn is_one(a: &[Elem]) -> bool {
    a == [1]
}

/// x^m - 1.
pub fn xm_minus_one(f: &GaloisField, m: usize) -> Poly {
    let mut v = vec![0; m + 1];
    v[0] = f.neg(1);
    v[m] = f.add(v[m], 1);
    trim(v)
}

pub fn add(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn neg(f: &GaloisField, a: &[Elem]) -> Poly {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn sub(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    add(f, a, &neg(f, b))
}

pub fn scale(f: &GaloisField, a: &[Elem], c: Elem) -> Poly {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub fn divrem(f: &GaloisField, a: &[Elem], b: &[Elem]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let inv_lead = f.inv(b[db]);
    let mut r: Poly = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], inv_lead);
        q[dr - db] = c;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[dr - db + i] = f.sub(r[dr - db + i], f.mul(c, bi));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    divrem(f, a, b).1
}

pub fn quo(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    divrem(f, a, b).0
}

pub fn divides(f: &GaloisField, d: &[Elem], a: &[Elem]) -> bool {
    rem(f, a, d).is_empty()
}

pub fn monic(f: &GaloisField, a: &[Elem]) -> Poly {
    match degree(a) {
        Some(d) => scale(f, a, f.inv(a[d])),
        None => Vec::new(),
    }
}

pub fn leading(a: &[Elem]) -> Elem {
    degree(a).map_or(0, |d| a[d])
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn mulmod(f: &GaloisField, a: &[Elem], b: &[Elem], m: &[Elem]) -> Poly {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &GaloisField, a: &[Elem], e: &BigUint, m: &[Elem]) -> Poly {
    let base = rem(f, a, m);
    let mut acc = rem(f, &one(), m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    acc
}

pub fn derivative(f: &GaloisField, a: &[Elem]) -> Poly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.constant((i as u64 % f.characteristic()) as i64)))
        .collect();
    trim(out)
}

pub fn eval(f: &GaloisField, a: &[Elem], x: Elem) -> Elem {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn field_size(f: &GaloisField) -> BigUint {
    BigUint::from(f.size())
}

/// p-th root of a polynomial whose exponents are all multiples of p.
fn pth_root(f: &GaloisField, a: &[Elem]) -> Poly {
    let p = f.characteristic() as usize;
    let back = f.degree() - 1;
    let out = a
        .iter()
        .step_by(p)
        .map(|&c| f.frobenius(c, back))
        .collect();
    trim(out)
}

/// Square-free decomposition of a monic polynomial: (part, multiplicity).
pub fn squarefree(f: &GaloisField, a: &[Elem]) -> Vec<(Poly, u32)> {
    let a = monic(f, a);
    if degree(&a).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = f.characteristic() as u32;
    let mut out = Vec::new();
    let da = derivative(f, &a);
    if da.is_empty() {
        for (g, k) in squarefree(f, &pth_root(f, &a)) {
            out.push((g, k * p));
        }
        return out;
    }
    let mut c = gcd(f, &a, &da);
    let mut w = quo(f, &a, &c);
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(f, &w, &c);
        let z = quo(f, &w, &y);
        if degree(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = quo(f, &c, &w);
    }
    if degree(&c).unwrap_or(0) > 0 {
        for (g, k) in squarefree(f, &pth_root(f, &c)) {
            out.push((g, k * p));
        }
    }
    out
}

/// Distinct-degree split of a monic square-free polynomial: (product, degree).
pub fn distinct_degree(f: &GaloisField, a: &[Elem]) -> Vec<(Poly, usize)> {
    let qsize = field_size(f);
    let mut rest = monic(f, a);
    let mut out = Vec::new();
    let mut h = rem(f, &x(), &rest);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, &qsize, &rest);
        let g = gcd(f, &sub(f, &h, &x()), &rest);
        if !is_one(&g) {
            rest = quo(f, &rest, &g);
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(dr) = degree(&rest).filter(|&dr| dr > 0) {
        out.push((rest, dr));
    }
    out
}

/// Splitting candidates: x, x+1, ..., x+(q-1), then pseudo-random polynomials
/// of degree below `n` from a fixed-seed stream, so runs are reproducible.
struct Candidates {
    linear: u64,
    base: u64,
    len: usize,
    rng: ChaCha8Rng,
}

impl Candidates {
    fn new(base: u64, len: usize) -> Self {
        Candidates { linear: 0, base, len, rng: ChaCha8Rng::seed_from_u64(0x5eed) }
    }
}

impl Iterator for Candidates {
    type Item = Poly;
    fn next(&mut self) -> Option<Poly> {
        if self.linear < self.base {
            self.linear += 1;
            return Some(trim(vec![self.linear - 1, 1]));
        }
        let out = (0..self.len).map(|_| self.rng.gen_range(0..self.base)).collect();
        Some(trim(out))
    }
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &GaloisField, a: &[Elem], d: usize) -> Vec<Poly> {
    let a = monic(f, a);
    let n = degree(&a).unwrap_or(0);
    if n <= d {
        return vec![a];
    }
    let qsize = field_size(f);
    let even = f.characteristic() == 2;
    let exponent = (qsize.pow(d as u32) - 1u32) >> 1;
    let trace_steps = f.degree() as usize * d;
    let candidates = Candidates::new(f.size(), n);
    for cand in candidates {
        let cand = rem(f, &cand, &a);
        let t = if even {
            let mut acc = cand.clone();
            let mut sq = cand;
            for _ in 1..trace_steps {
                sq = mulmod(f, &sq, &sq, &a);
                acc = add(f, &acc, &sq);
            }
            acc
        } else {
            sub(f, &powmod(f, &cand, &exponent, &a), &one())
        };
        let g = gcd(f, &t, &a);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(f, &g, d);
            out.extend(equal_degree(f, &quo(f, &a, &g), d));
            return out;
        }
    }
    unreachable!("candidate enumeration is exhaustive")
}

/// Monic irreducible factors with multiplicity, sorted by (degree, coefficients).
pub fn factor(f: &GaloisField, a: &[Elem]) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (part, k) in squarefree(f, a) {
        for (block, d) in distinct_degree(f, &part) {
            for g in equal_degree(f, &block, d) {
                out.push((g, k));
            }
        }
    }
    out.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
    out
}

/// Rabin's test.
pub fn is_irreducible(f: &GaloisField, a: &[Elem]) -> bool {
    let Some(n) = degree(a) else { return false };
    if n == 0 {
        return false;
    }
    let a = monic(f, a);
    let qsize = field_size(f);
    let frob = |times: usize| {
        let mut h = rem(f, &x(), &a);
        for _ in 0..times {
            h = powmod(f, &h, &qsize, &a);
        }
        h
    };
    if frob(n) != rem(f, &x(), &a) {
        return false;
    }
    factor_small(n as u64)
        .into_iter()
        .all(|(r, _)| is_one(&gcd(f, &sub(f, &frob(n / r as usize), &x()), &a)))
}

/// Distinct roots in the field, ascending.
pub fn roots(f: &GaloisField, a: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = factor(f, a)
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| f.neg(g[0]))
        .collect();
    out.sort_unstable();
    out
}

fn coeff_text(f: &GaloisField, c: Elem) -> String {
    if c < f.characteristic() {
        c.to_string()
    } else {
        f.show(c)
    }
}

/// Descending sparse form, e.g. `x^3+x^2+x+1`.
pub fn format(f: &GaloisField, a: &[Elem]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let coeff = coeff_text(f, c);
        terms.push(match (i, c) {
            (0, _) => coeff,
            (_, 1) => mono,
            _ => format!("{coeff}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Integer-coefficient polynomial in x, e.g. `x^{48}-1` or `3x^2 - x + 4`.
pub fn parse_int_poly(text: &str) -> Result<Vec<i64>> {
    let bad = || Error::Parse(format!("cannot parse polynomial `{text}`"));
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}' && *c != '*')
        .collect();
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(&s);
    if s.is_empty() {
        return Err(bad());
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut pieces = Vec::new();
    for i in 1..=bytes.len() {
        if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
            pieces.push(&s[start..i]);
            start = i;
        }
    }
    for piece in pieces {
        let (sign, body) = match piece.as_bytes()[0] {
            b'-' => (-1i64, &piece[1..]),
            b'+' => (1, &piece[1..]),
            _ => (1, piece),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, exp) = match body.find('x') {
            None => (body.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(ix) => {
                let c = if ix == 0 { 1 } else { body[..ix].parse::<i64>().map_err(|_| bad())? };
                let rest = &body[ix + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (c, e)
            }
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] += sign * coef;
    }
    Ok(coeffs)
}

/// Reduces integer coefficients into the prime subfield.
pub fn from_ints(f: &GaloisField, c: &[i64]) -> Poly {
    trim(c.iter().map(|&v| f.constant(v)).collect())
}

pub fn is_zero(a: &[Elem]) -> bool {
    a.iter().all(|c| c.is_zero())
}
