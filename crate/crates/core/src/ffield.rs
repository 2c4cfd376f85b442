//! Small concrete fields F_{q^m} over F_q: freeness and trace predicates,
//! rational functions and the brute-force existence search.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gf::{poly, Elem, GaloisField, Poly, LOG_TABLE_LIMIT};

/// Largest p^{km} the oracle accepts.
pub const SIZE_LIMIT: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct FieldCtx {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub q: u64,
    field: GaloisField,
    base: GaloisField,
    embed: Vec<Elem>,
    restrict: HashMap<Elem, Elem>,
    /// Irreducible factors of x^m - 1 over F_q with multiplicity, coefficients embedded.
    xm1: Vec<(Poly, u32)>,
}

pub fn build_field(p: u64, k: u32, m: u32) -> Result<FieldCtx> {
    build_field_with_limit(p, k, m, LOG_TABLE_LIMIT)
}

/// Log tables are built only up to `table_limit` elements.
pub fn build_field_with_limit(p: u64, k: u32, m: u32, table_limit: u64) -> Result<FieldCtx> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidArgument("k and m must be positive".into()));
    }
    let too_big = || Error::LimitExceeded { size: format!("{p}^{}", k as u64 * m as u64), limit: SIZE_LIMIT };
    let size = p.checked_pow(k * m).ok_or_else(too_big)?;
    if size > SIZE_LIMIT {
        return Err(too_big());
    }
    let field = GaloisField::with_limit(p, k * m, table_limit)?;
    let base = GaloisField::new(p, k)?;
    let beta = poly::roots(&field, base.modulus())[0];
    let embed: Vec<Elem> = (0..base.size())
        .map(|c| {
            let mut acc = 0;
            let mut pw = 1;
            for d in base.coeffs(c) {
                acc = field.add(acc, field.mul(field.constant(d as i64), pw));
                pw = field.mul(pw, beta);
            }
            acc
        })
        .collect();
    let restrict = embed.iter().enumerate().map(|(c, &e)| (e, c as Elem)).collect();
    let xm1 = poly::factor(&base, &poly::xm_minus_one(&base, m as usize))
        .into_iter()
        .map(|(g, e)| (g.iter().map(|&c| embed[c as usize]).collect(), e))
        .collect();
    Ok(FieldCtx { p, k, m, q: base.size(), field, base, embed, restrict, xm1 })
}

impl FieldCtx {
    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// F_q with its own encoding.
    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    pub fn size(&self) -> u64 {
        self.field.size()
    }

    pub fn group_order(&self) -> u64 {
        self.field.size() - 1
    }

    pub fn embed(&self, c: Elem) -> Elem {
        self.embed[c as usize]
    }

    /// Base encoding of a subfield element.
    pub fn restrict(&self, x: Elem) -> Option<Elem> {
        self.restrict.get(&x).copied()
    }

    /// The subfield F_q as big-field elements, in base-encoding order.
    pub fn subfield(&self) -> &[Elem] {
        &self.embed
    }

    pub fn xm1_factors(&self) -> &[(Poly, u32)] {
        &self.xm1
    }

    pub fn describe(&self) -> String {
        if self.k == 1 {
            format!("F_{}^{}/F_{}", self.p, self.m, self.p)
        } else {
            format!("F_({}^{})^{}/F_{}^{}", self.p, self.k, self.m, self.p, self.k)
        }
    }

    /// alpha, alpha^q, ..., alpha^{q^{m-1}}.
    pub fn conjugates(&self, alpha: Elem) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut x = alpha;
        for _ in 0..self.m {
            out.push(x);
            x = self.field.pow(x, self.q);
        }
        out
    }

    /// h o alpha = sum h_i alpha^{q^i}.
    pub fn apply(&self, h: &[Elem], alpha: Elem) -> Elem {
        let conj = self.conjugates(alpha);
        let m = self.m as usize;
        h.iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| self.field.add(acc, self.field.mul(c, conj[i % m])))
    }

    /// sum h_i alpha^{q^{-i}}: the action dual to `apply` under the trace form.
    pub fn apply_adjoint(&self, h: &[Elem], alpha: Elem) -> Elem {
        let conj = self.conjugates(alpha);
        let m = self.m as usize;
        h.iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| self.field.add(acc, self.field.mul(c, conj[(m - i % m) % m])))
    }

    pub fn poly_from_exponents(&self, exps: &[u32]) -> Poly {
        let mut out = poly::one();
        for ((g, _), &e) in self.xm1.iter().zip(exps) {
            for _ in 0..e {
                out = poly::mul(&self.field, &out, g);
            }
        }
        out
    }

    fn full_exponents(&self) -> Vec<u32> {
        self.xm1.iter().map(|(_, e)| *e).collect()
    }

    fn peel(&self, annihilates: impl Fn(&Poly) -> bool) -> Vec<u32> {
        let mut exps = self.full_exponents();
        for i in 0..exps.len() {
            while exps[i] > 0 {
                exps[i] -= 1;
                if !annihilates(&self.poly_from_exponents(&exps)) {
                    exps[i] += 1;
                    break;
                }
            }
        }
        exps
    }

    /// Exponents of the F_q-order of alpha over the factors of x^m - 1.
    pub fn fq_order(&self, alpha: Elem) -> Vec<u32> {
        self.peel(|h| self.apply(h, alpha) == 0)
    }

    /// F_q-order of the additive character psi_u(x) = psi_1(u x).
    pub fn additive_order(&self, u: Elem) -> Vec<u32> {
        self.peel(|h| self.apply_adjoint(h, u) == 0)
    }

    /// Exponent vector of a divisor g of x^m - 1.
    pub fn divisor_exponents(&self, g: &[Elem]) -> Result<Vec<u32>> {
        let f = &self.field;
        let g = poly::trim(g.to_vec());
        if poly::is_zero(&g) || !poly::divides(f, &g, &poly::xm_minus_one(f, self.m as usize)) {
            return Err(Error::GNotDivisor);
        }
        let mut rest = poly::monic(f, &g);
        let mut out = Vec::with_capacity(self.xm1.len());
        for (h, _) in &self.xm1 {
            let mut e = 0;
            while poly::divides(f, h, &rest) {
                rest = poly::quo(f, &rest, h);
                e += 1;
            }
            out.push(e);
        }
        Ok(out)
    }

    /// Every element, in encoding order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    /// Integer polynomial with coefficients reduced mod p.
    pub fn int_poly(&self, text: &str) -> Result<Poly> {
        Ok(poly::from_ints(&self.field, &poly::parse_int_poly(text)?))
    }

    pub fn show_poly(&self, a: &[Elem]) -> String {
        poly::format(&self.field, a)
    }
}

/// Tr_{F_{q^m}/F_q}, as a big-field element.
pub fn trace_rel(ctx: &FieldCtx, alpha: Elem) -> Elem {
    ctx.conjugates(alpha).into_iter().fold(0, |acc, c| ctx.field.add(acc, c))
}

/// Tr_{F_{q^m}/F_q} in the base encoding.
pub fn trace_to_base(ctx: &FieldCtx, alpha: Elem) -> Elem {
    ctx.restrict(trace_rel(ctx, alpha)).expect("trace lies in F_q")
}

/// Absolute trace to F_p, as a residue.
pub fn trace_abs(field: &GaloisField, alpha: Elem) -> u64 {
    let p = field.characteristic();
    let mut acc = 0;
    let mut x = alpha;
    for _ in 0..field.degree() {
        acc = field.add(acc, x);
        x = field.pow(x, p);
    }
    debug_assert!(acc < p);
    acc
}

pub fn is_primitive(ctx: &FieldCtx, alpha: Elem) -> bool {
    alpha != 0 && ctx.field.order(alpha) == ctx.group_order()
}

pub fn is_e_free(ctx: &FieldCtx, alpha: Elem, e: u64) -> Result<bool> {
    let n = ctx.group_order();
    if e == 0 || !n.is_multiple_of(e) {
        return Err(Error::ENotDivisor(e.to_string()));
    }
    Ok(alpha != 0 && e.gcd(&(n / ctx.field.order(alpha))) == 1)
}

/// gcd(x^m - 1, sum alpha^{q^i} x^i) = 1, computed in F_{q^m}[x].
pub fn is_normal(ctx: &FieldCtx, alpha: Elem) -> bool {
    let f = &ctx.field;
    let h = poly::trim(ctx.conjugates(alpha));
    !poly::is_zero(&h) && poly::is_one(&poly::gcd(f, &poly::xm_minus_one(f, ctx.m as usize), &h))
}

pub fn is_g_free(ctx: &FieldCtx, alpha: Elem, g: &[Elem]) -> Result<bool> {
    let ge = ctx.divisor_exponents(g)?;
    let ord = ctx.fq_order(alpha);
    Ok(ctx
        .xm1
        .iter()
        .zip(ge.iter().zip(&ord))
        .all(|((_, full), (&gi, &oi))| gi == 0 || oi == *full))
}

/// f = num / den over F_{q^m}, coprime, den monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunc {
    pub fn new(ctx: &FieldCtx, num: Poly, den: Poly) -> Result<Self> {
        let f = &ctx.field;
        let (num, den) = (poly::trim(num), poly::trim(den));
        if poly::is_zero(&den) || poly::is_zero(&num) {
            return Err(Error::InvalidArgument("numerator and denominator must be nonzero".into()));
        }
        if !poly::is_one(&poly::gcd(f, &num, &den)) {
            return Err(Error::NotCoprime);
        }
        let lead = f.inv(poly::leading(&den));
        Ok(RationalFunc { num: poly::scale(f, &num, lead), den: poly::scale(f, &den, lead) })
    }

    /// Divides out gcd(num, den) first.
    pub fn reduced(ctx: &FieldCtx, num: Poly, den: Poly) -> Result<Self> {
        let f = &ctx.field;
        let g = poly::gcd(f, &num, &den);
        if poly::is_zero(&g) {
            return Err(Error::InvalidArgument("numerator and denominator must be nonzero".into()));
        }
        Self::new(ctx, poly::quo(f, &num, &g), poly::quo(f, &den, &g))
    }

    /// `num / den` or `num`, integer coefficients reduced mod p.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let (n, d) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let strip = |s: &str| s.trim().trim_start_matches('(').trim_end_matches(')').to_string();
        Self::new(ctx, ctx.int_poly(&strip(n))?, ctx.int_poly(&strip(d))?)
    }

    pub fn n1(&self) -> usize {
        poly::degree(&self.num).unwrap_or(0)
    }

    pub fn n2(&self) -> usize {
        poly::degree(&self.den).unwrap_or(0)
    }

    pub fn degree_sum(&self) -> usize {
        self.n1() + self.n2()
    }

    pub fn eval(&self, ctx: &FieldCtx, alpha: Elem) -> Option<Elem> {
        let f = &ctx.field;
        let d = poly::eval(f, &self.den, alpha);
        (d != 0).then(|| f.div(poly::eval(f, &self.num, alpha), d))
    }

    /// Irreducible factors over F_{q^m}: numerator exponents positive, denominator negative.
    pub fn factorization(&self, ctx: &FieldCtx) -> Vec<(Poly, i64)> {
        let f = &ctx.field;
        let mut out: Vec<(Poly, i64)> =
            poly::factor(f, &self.num).into_iter().map(|(g, e)| (g, e as i64)).collect();
        out.extend(poly::factor(f, &self.den).into_iter().map(|(g, e)| (g, -(e as i64))));
        out
    }

    /// Sum of the degrees of the distinct irreducible factors.
    pub fn distinct_degree_sum(&self, ctx: &FieldCtx) -> usize {
        self.factorization(ctx).iter().map(|(g, _)| g.len() - 1).sum()
    }

    /// The set P: 0 together with the zeros and poles, ascending.
    pub fn excluded(&self, ctx: &FieldCtx) -> Vec<Elem> {
        let f = &ctx.field;
        let mut out = vec![0];
        out.extend(poly::roots(f, &self.num));
        out.extend(poly::roots(f, &self.den));
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn show(&self, ctx: &FieldCtx) -> String {
        format!("({}) / ({})", ctx.show_poly(&self.num), ctx.show_poly(&self.den))
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = |a: &Poly| a.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{}] / [{}]", coeffs(&self.num), coeffs(&self.den))
    }
}

/// gcd of the multiplicities of the irreducible factors other than x.
pub fn exponent_gcd(ctx: &FieldCtx, f: &RationalFunc) -> u64 {
    f.factorization(ctx)
        .iter()
        .filter(|(g, _)| *g != poly::x())
        .fold(0u64, |acc, (_, e)| acc.gcd(&e.unsigned_abs()))
}

/// Membership in the admissible class of degree sum n.
pub fn is_in_en(f: &RationalFunc, ctx: &FieldCtx, n: usize) -> bool {
    f.degree_sum() == n && f.n2() >= 1 && exponent_gcd(ctx, f).gcd(&ctx.group_order()) == 1
}

pub fn eval_rational(f: &RationalFunc, alpha: Elem, ctx: &FieldCtx) -> Option<Elem> {
    f.eval(ctx, alpha)
}

/// Whether alpha^{-1} has trace `a` (base encoding); false at 0.
pub fn inverse_trace_is(ctx: &FieldCtx, alpha: Elem, a: Elem) -> bool {
    alpha != 0 && trace_to_base(ctx, ctx.field.inv(alpha)) == a
}

/// First alpha outside P with alpha and f(alpha) primitive normal and
/// Tr(alpha^{-1}) = a.
pub fn find_alpha(ctx: &FieldCtx, f: &RationalFunc, a: Elem) -> Option<Elem> {
    let excluded = f.excluded(ctx);
    ctx.elements().find(|&alpha| {
        if excluded.binary_search(&alpha).is_ok() || !inverse_trace_is(ctx, alpha, a) {
            return false;
        }
        let Some(image) = f.eval(ctx, alpha) else { return false };
        is_primitive(ctx, alpha) && is_primitive(ctx, image) && is_normal(ctx, alpha) && is_normal(ctx, image)
    })
}

/// First primitive alpha with Tr(alpha^{-1}) = a, ignoring normality and f.
pub fn find_primitive_inverse_trace(ctx: &FieldCtx, a: Elem) -> Option<Elem> {
    ctx.elements().find(|&alpha| is_primitive(ctx, alpha) && inverse_trace_is(ctx, alpha, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfact::{totient, xm1_profile};
    use num_traits::ToPrimitive;

    fn ctx(p: u64, k: u32, m: u32) -> FieldCtx {
        build_field(p, k, m).unwrap()
    }

    #[test]
    fn construction() {
        let c = ctx(5, 1, 2);
        assert_eq!(c.field().modulus(), &[2, 0, 1]);
        let c = ctx(5, 1, 1);
        assert_eq!(c.size(), 5);
        let c = ctx(3, 1, 4);
        assert_eq!(c.field().order(c.field().generator()), 80);
        assert!(matches!(build_field(5, 1, 14), Err(Error::LimitExceeded { .. })));
        let c = ctx(5, 2, 2);
        assert_eq!(c.q, 25);
        for &x in c.subfield() {
            assert_eq!(c.field().pow(x, 25), x);
        }
        let mut sub = c.subfield().to_vec();
        sub.sort_unstable();
        sub.dedup();
        assert_eq!(sub.len(), 25);
        assert_eq!(c.embed(1), 1);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let c = ctx(5, 2, 2);
        let (b, f) = (c.base(), c.field());
        for x in 0..25 {
            for y in 0..25 {
                assert_eq!(c.embed(b.mul(x, y)), f.mul(c.embed(x), c.embed(y)));
                assert_eq!(c.embed(b.add(x, y)), f.add(c.embed(x), c.embed(y)));
            }
        }
    }

    #[test]
    fn traces() {
        let c = ctx(5, 1, 2);
        assert_eq!(trace_rel(&c, 0), 0);
        // beta = x, beta^2 = -2, so beta^5 = 4 beta
        assert_eq!(trace_rel(&c, 5), 0);
        let c = ctx(5, 1, 3);
        let mut fibers = [0u64; 5];
        for a in c.elements() {
            fibers[trace_to_base(&c, a) as usize] += 1;
        }
        assert_eq!(fibers, [25; 5]);
        let c = ctx(5, 2, 2);
        let mut fibers = [0u64; 25];
        for a in c.elements() {
            fibers[trace_to_base(&c, a) as usize] += 1;
        }
        assert!(fibers.iter().all(|&n| n == 25));
    }

    #[test]
    fn inverse_trace_fibers_cover_the_group() {
        let c = ctx(3, 1, 4);
        let total: usize = (0..3).map(|a| c.elements().filter(|&x| inverse_trace_is(&c, x, a)).count()).sum();
        assert_eq!(total as u64, c.group_order());
    }

    #[test]
    fn primitive_and_normal_counts() {
        for (p, k, m) in [(5, 1, 5), (5, 1, 3), (3, 1, 4), (5, 2, 2), (2, 1, 6)] {
            let c = ctx(p, k, m);
            let prim = c.elements().filter(|&a| is_primitive(&c, a)).count() as u64;
            assert_eq!(prim, totient(c.group_order()), "{p} {k} {m}");
            let normal = c.elements().filter(|&a| is_normal(&c, a)).count() as u64;
            let phi = xm1_profile(c.q, m as u64).unwrap().poly_phi().to_u64().unwrap();
            // the profile counts x^{m'} - 1; restore the p-part
            let m_prime = crate::intfact::p_free_part(m as u64, p);
            let scale = c.q.pow(m - m_prime as u32);
            assert_eq!(normal, phi * scale, "{p} {k} {m}");
        }
        let c = ctx(5, 1, 5);
        assert_eq!(c.elements().filter(|&a| is_primitive(&c, a)).count(), 1400);
        assert_eq!(c.elements().filter(|&a| is_normal(&c, a)).count(), 2500);
    }

    #[test]
    fn order_and_gcd_normality_agree() {
        for (p, k, m) in [(5, 1, 5), (3, 1, 4), (5, 1, 3), (5, 2, 2)] {
            let c = ctx(p, k, m);
            let full = c.full_exponents();
            for a in c.elements() {
                assert_eq!(is_normal(&c, a), c.fq_order(a) == full);
                let ord = c.poly_from_exponents(&c.fq_order(a));
                assert_eq!(c.apply(&ord, a), 0);
            }
        }
    }

    #[test]
    fn additive_order_matches_definition() {
        let c = ctx(3, 1, 4);
        let f = c.field();
        for u in c.elements() {
            let h = c.poly_from_exponents(&c.additive_order(u));
            assert!(c.elements().all(|b| trace_abs(f, f.mul(u, c.apply(&h, b))) == 0));
        }
        // order counts mirror element order counts
        let mut by_add = HashMap::new();
        let mut by_elem = HashMap::new();
        for u in c.elements() {
            *by_add.entry(c.additive_order(u)).or_insert(0) += 1;
            *by_elem.entry(c.fq_order(u)).or_insert(0) += 1;
        }
        assert_eq!(by_add, by_elem);
    }

    #[test]
    fn freeness_predicates() {
        let c = ctx(5, 1, 5);
        let n = c.group_order();
        assert!(matches!(is_e_free(&c, 2, 7), Err(Error::ENotDivisor(_))));
        for a in 1..c.size() {
            assert!(is_e_free(&c, a, 1).unwrap());
            assert_eq!(is_e_free(&c, a, n).unwrap(), is_primitive(&c, a));
            assert_eq!(
                is_e_free(&c, a, 44).unwrap(),
                is_e_free(&c, a, 4).unwrap() && is_e_free(&c, a, 11).unwrap()
            );
        }
        let one = poly::one();
        let xm1 = poly::xm_minus_one(c.field(), 5);
        let xm = c.int_poly("x-1").unwrap();
        for a in c.elements() {
            assert!(is_g_free(&c, a, &one).unwrap());
            assert_eq!(is_g_free(&c, a, &xm1).unwrap(), is_normal(&c, a));
            if is_normal(&c, a) {
                assert!(is_g_free(&c, a, &xm).unwrap());
            }
        }
        assert_eq!(is_g_free(&c, 1, &c.int_poly("x+1").unwrap()), Err(Error::GNotDivisor));
    }

    #[test]
    fn rational_functions() {
        let c = ctx(5, 1, 5);
        let f = RationalFunc::parse(&c, "x^3+x+1 / x").unwrap();
        assert_eq!(f.degree_sum(), 4);
        assert!(is_in_en(&f, &c, 4));
        assert_eq!(eval_rational(&f, 0, &c), None);
        let g = RationalFunc::parse(&c, "x^3+x+1").unwrap();
        assert!(!is_in_en(&g, &c, 3));
        let sq = RationalFunc::parse(&c, "x^4+4x^2+4 / x").unwrap();
        assert_eq!(exponent_gcd(&c, &sq), 2);
        assert!(!is_in_en(&sq, &c, 5));
        assert_eq!(RationalFunc::parse(&c, "x^2-1 / x-1"), Err(Error::NotCoprime));
        for a in c.elements() {
            if let Some(v) = f.eval(&c, a) {
                let fe = c.field();
                assert_eq!(fe.mul(v, poly::eval(fe, &f.den, a)), poly::eval(fe, &f.num, a));
            }
        }
    }

    #[test]
    fn search() {
        let c = ctx(5, 1, 2);
        assert_eq!(find_primitive_inverse_trace(&c, 0), None);
        let c = ctx(5, 1, 5);
        let f = RationalFunc::parse(&c, "x^3+x+1 / x").unwrap();
        for a in 0..5 {
            if let Some(alpha) = find_alpha(&c, &f, a) {
                let image = f.eval(&c, alpha).unwrap();
                assert!(is_primitive(&c, alpha) && is_primitive(&c, image));
                assert!(is_normal(&c, alpha) && is_normal(&c, image));
                assert!(inverse_trace_is(&c, alpha, a));
            }
        }
    }
}
