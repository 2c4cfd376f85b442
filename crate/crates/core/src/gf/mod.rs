//! Fields F_{p^n} with elements encoded as integers c0 + c1 p + ... + c_{n-1} p^{n-1}.

pub mod poly;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::intfact::{factor_integer, prime_power, Budget, Factorization};
pub use poly::Poly;

pub type Elem = u64;

/// Default size up to which discrete-log tables are built.
pub const LOG_TABLE_LIMIT: u64 = 1 << 24;

#[derive(Clone, Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct GaloisField {
    p: u64,
    degree: u32,
    size: u64,
    /// Monic modulus over F_p, low degree first.
    modulus: Vec<u64>,
    place: Vec<u64>,
    generator: Elem,
    group_order: Factorization,
    tables: Option<LogTables>,
}

impl GaloisField {
    /// F_p itself: modulus x, elements are residues.
    pub fn prime(p: u64) -> Result<Self> {
        Self::with_limit(p, 1, LOG_TABLE_LIMIT)
    }

    /// F_{p^n} with the least irreducible modulus by integer encoding.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        Self::with_limit(p, n, LOG_TABLE_LIMIT)
    }

    pub fn with_limit(p: u64, n: u32, table_limit: u64) -> Result<Self> {
        if p >= 1 << 31 || !matches!(prime_power(p), Some((_, 1))) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be positive".into()));
        }
        let size = (p as u128).checked_pow(n).filter(|&s| s < 1u128 << 62);
        let Some(_) = size else {
            return Err(Error::LimitExceeded {
                size: format!("{p}^{n}"),
                limit: 1 << 62,
            });
        };
        if n == 1 {
            return Self::with_modulus(p, vec![0, 1], table_limit);
        }
        let base = Self::prime(p)?;
        let tail = p.pow(n);
        for t in 0..tail {
            let mut cand = poly::from_encoding(t, p, n as usize);
            cand.push(1);
            if cand[0] == 0 {
                continue;
            }
            if poly::is_irreducible(&base, &cand) {
                return Self::with_modulus(p, cand, table_limit);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn with_modulus(p: u64, modulus: Vec<u64>, table_limit: u64) -> Result<Self> {
        let degree = (modulus.len() - 1) as u32;
        let size = p.pow(degree);
        let place = (0..degree).map(|i| p.pow(i)).collect();
        let group_order = factor_integer(&BigUint::from(size - 1), Budget::default());
        let mut field = GaloisField {
            p,
            degree,
            size,
            modulus,
            place,
            generator: 0,
            group_order,
            tables: None,
        };
        field.generator = (1..size)
            .find(|&g| field.has_full_order(g))
            .expect("multiplicative group is cyclic");
        if size <= table_limit && size <= u32::MAX as u64 {
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let n = (self.size - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; self.size as usize];
        let mut x: Elem = 1;
        for (t, slot) in exp.iter_mut().enumerate() {
            *slot = x as u32;
            log[x as usize] = t as u32;
            x = self.mul_plain(x, self.generator);
        }
        self.tables = Some(LogTables { exp, log });
    }

    fn has_full_order(&self, g: Elem) -> bool {
        let n = BigUint::from(self.size - 1);
        self.group_order
            .primes()
            .all(|r| self.pow_big(g, &(&n / r)) != 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn group_order(&self) -> &Factorization {
        &self.group_order
    }

    pub fn has_log_table(&self) -> bool {
        self.tables.is_some()
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        poly::from_encoding(a, self.p, self.degree as usize)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Elem {
        c.iter()
            .zip(&self.place)
            .map(|(&ci, &pi)| (ci % self.p) * pi)
            .sum()
    }

    /// Prime-field constant.
    pub fn constant(&self, c: i64) -> Elem {
        c.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &pi in &self.place {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * pi;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        for &pi in &self.place {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * pi;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let n = self.size - 1;
                let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
                t.exp[s as usize] as u64
            }
            None => self.mul_plain(a, b),
        }
    }

    fn mul_plain(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        if self.degree == 1 {
            return ((a as u128 * b as u128) % p as u128) as u64;
        }
        let n = self.degree as usize;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &mi) in self.modulus[..n].iter().enumerate() {
                prod[k - n + i] = (prod[k - n + i] + c * (p - mi)) % p;
            }
            prod[k] = 0;
        }
        self.from_coeffs(&prod[..n])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if let (Some(t), true) = (&self.tables, a != 0) {
            let n = self.size - 1;
            let s = (t.log[a as usize] as u128 * e as u128 % n as u128) as u64;
            return t.exp[s as usize] as u64;
        }
        let mut acc = 1;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: Elem, e: &BigUint) -> Elem {
        if a == 0 {
            return if e.bits() == 0 { 1 } else { 0 };
        }
        let n = BigUint::from(self.size - 1);
        self.pow(a, (e % n).to_u64().unwrap())
    }

    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "zero has no inverse");
        self.pow(a, self.size - 2)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// a^(p^j).
    pub fn frobenius(&self, a: Elem, j: u32) -> Elem {
        let e = BigUint::from(self.p).pow(j);
        self.pow_big(a, &e)
    }

    /// Discrete log to the generator base.
    pub fn log(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a as usize] as u64)
    }

    pub fn exp(&self, t: u64) -> Elem {
        self.pow(self.generator, t % (self.size - 1))
    }

    /// Multiplicative order.
    pub fn order(&self, a: Elem) -> u64 {
        assert!(a != 0);
        let mut ord = self.size - 1;
        for (r, e) in &self.group_order.factors {
            let r = r.to_u64().unwrap();
            for _ in 0..*e {
                if self.pow(a, ord / r) == 1 {
                    ord /= r;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// Elements of the unique subfield of size `q`, ascending by encoding; empty if none.
    pub fn subfield(&self, q: u64) -> Vec<Elem> {
        let n = self.size - 1;
        let is_subfield = (1..=self.degree)
            .any(|j| self.degree.is_multiple_of(j) && self.p.checked_pow(j) == Some(q));
        if !is_subfield {
            return Vec::new();
        }
        let zeta = self.pow(self.generator, n / (q - 1));
        let mut out = vec![0];
        let mut x = 1;
        for _ in 0..q - 1 {
            out.push(x);
            x = self.mul(x, zeta);
        }
        out.sort_unstable();
        out
    }

    pub fn is_one(&self, a: Elem) -> bool {
        a.is_one()
    }

    /// Coefficient-vector rendering `[c0,c1,...]`.
    pub fn show(&self, a: Elem) -> String {
        let parts: Vec<String> = self.coeffs(a).iter().map(u64::to_string).collect();
        format!("[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_modulus_is_x2_plus_2() {
        let f = GaloisField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
    }

    #[test]
    fn f81_generator_order() {
        let f = GaloisField::new(3, 4).unwrap();
        assert_eq!(f.order(f.generator()), 80);
        assert_eq!(f.modulus().len(), 5);
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = GaloisField::new(5, 3).unwrap();
        for a in 0..125 {
            for b in 0..125 {
                assert_eq!(f.mul(a, b), f.mul_plain(a, b));
            }
        }
        let g = GaloisField::with_limit(5, 3, 0).unwrap();
        assert!(!g.has_log_table());
        for a in 1..125 {
            assert_eq!(g.mul(a, g.inv(a)), 1);
        }
    }

    #[test]
    fn field_axioms_small() {
        for (p, n) in [(2u64, 4u32), (3, 3), (7, 2)] {
            let f = GaloisField::new(p, n).unwrap();
            for a in 0..f.size() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.pow(a, f.size()), a);
                for b in 0..f.size().min(40) {
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn subfield_sizes() {
        let f = GaloisField::new(5, 4).unwrap();
        assert_eq!(f.subfield(5), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.subfield(25).len(), 25);
    }
}
