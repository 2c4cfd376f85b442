//! `value = p1^e1 * p2^e2 * ... [* C?]`

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use super::{Factorization, TRIAL_BOUND};
use crate::error::Error;

impl Factorization {
    /// Right-hand side of the wire line, e.g. `2^2 * 11 * 71`.
    pub fn product_string(&self) -> String {
        let mut terms: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            terms.push(format!("{}?", self.cofactor));
        }
        if terms.is_empty() {
            "1".to_string()
        } else {
            terms.join(" * ")
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.value, self.product_string())
    }
}

fn bad(line: &str) -> Error {
    Error::Parse(format!("malformed factorization line `{line}`"))
}

impl FromStr for Factorization {
    type Err = Error;

    /// Rejects lines whose product, ordering or primality checks fail.
    fn from_str(line: &str) -> Result<Self, Error> {
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad(line))?;
        let value: BigUint = lhs.trim().parse().map_err(|_| bad(line))?;
        let mut factors = Vec::new();
        let mut cofactor = BigUint::one();
        for term in rhs.split('*').map(str::trim) {
            if term == "1" {
                continue;
            }
            if let Some(c) = term.strip_suffix('?') {
                cofactor *= c.parse::<BigUint>().map_err(|_| bad(line))?;
                continue;
            }
            let (p, e) = match term.split_once('^') {
                Some((p, e)) => (p, e.parse::<u32>().map_err(|_| bad(line))?),
                None => (term, 1),
            };
            factors.push((p.parse::<BigUint>().map_err(|_| bad(line))?, e));
        }
        let probable = factors
            .iter()
            .any(|(p, _)| super::is_prime(p) == super::Primality::Probable);
        let f = Factorization {
            value,
            complete: cofactor.is_one(),
            factors,
            cofactor,
            trial_bound: TRIAL_BOUND,
            probable,
        };
        if f.validate() {
            Ok(f)
        } else {
            Err(bad(line))
        }
    }
}
