//! Serialization helpers and CSV rows.

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::exact::{rational_decimal, to_f64};

/// `"num/den"` string.
pub fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&show_rational(r))
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&show_rational(r)),
        None => s.serialize_none(),
    }
}

pub fn show_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact value with its 4-place decimal.
#[derive(Clone, Debug, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
    pub approx: f64,
}

impl From<&BigRational> for ExactValue {
    fn from(r: &BigRational) -> Self {
        ExactValue { exact: show_rational(r), decimal: rational_decimal(r, 4), approx: to_f64(r) }
    }
}

use std::io::{Read, Write};

use num_bigint::BigUint;
use serde::Deserialize;

use crate::criteria::{Config, CriterionReport};
use crate::error::{Error, Result};
use crate::search::{PairStatus, RowOutcome, Tag};

/// Table-shaped CSV row: `q,m,d,r,g_degrees,s,lambda,Lambda,lhs,rhs,holds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub q: u64,
    pub m: u64,
    pub d: String,
    pub r: String,
    pub g_degrees: String,
    pub s: String,
    pub lambda: String,
    #[serde(rename = "Lambda")]
    pub big_lambda: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Scan CSV row: the table columns followed by `status,bounds_used`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanCsvRow {
    pub q: u64,
    pub m: u64,
    pub d: String,
    pub r: String,
    pub g_degrees: String,
    pub s: String,
    pub lambda: String,
    #[serde(rename = "Lambda")]
    pub big_lambda: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub status: String,
    pub bounds_used: bool,
}

fn join_degrees(d: &[u32]) -> String {
    d.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

fn product(ps: &[BigUint]) -> String {
    ps.iter().product::<BigUint>().to_string()
}

impl CsvRow {
    pub fn from_report(rep: &CriterionReport) -> Self {
        let dec = |r: &Option<BigRational>| r.as_ref().map(|v| rational_decimal(v, 4)).unwrap_or_default();
        let (d, r, g, s) = match &rep.config {
            Some(Config::Sieve(c)) => (
                c.d_value().to_string(),
                c.r().to_string(),
                join_degrees(&c.g_choice.degrees),
                c.s().to_string(),
            ),
            Some(Config::Modified(c)) => (
                product(&c.k_primes),
                c.p_primes.len().to_string(),
                join_degrees(&c.g_choice.degrees),
                c.g_classes.len().to_string(),
            ),
            None => Default::default(),
        };
        CsvRow {
            q: rep.q,
            m: rep.m,
            d,
            r,
            g_degrees: g,
            s,
            lambda: dec(&rep.lambda),
            big_lambda: dec(&rep.big_lambda),
            lhs: rep.lhs_decimal(),
            rhs: rep.rhs.decimal(rep.q, rep.m),
            holds: rep.holds,
        }
    }
}

impl From<&RowOutcome> for CsvRow {
    fn from(row: &RowOutcome) -> Self {
        CsvRow::from_report(&row.report)
    }
}

fn tag_name(tag: Tag) -> String {
    serde_json::to_value(tag).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

impl From<&PairStatus> for ScanCsvRow {
    fn from(st: &PairStatus) -> Self {
        let base = match &st.certificate {
            Some(rep) => CsvRow::from_report(rep),
            None => CsvRow {
                q: st.q,
                m: st.m,
                d: String::new(),
                r: String::new(),
                g_degrees: String::new(),
                s: String::new(),
                lambda: String::new(),
                big_lambda: String::new(),
                lhs: String::new(),
                rhs: String::new(),
                holds: false,
            },
        };
        ScanCsvRow {
            q: base.q,
            m: base.m,
            d: base.d,
            r: base.r,
            g_degrees: base.g_degrees,
            s: base.s,
            lambda: base.lambda,
            big_lambda: base.big_lambda,
            lhs: base.lhs,
            rhs: base.rhs,
            holds: base.holds,
            status: tag_name(st.tag),
            bounds_used: st.bounds_used,
        }
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_csv<R: Read, T: for<'de> Deserialize<'de>>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(io)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::FactorCache;
    use crate::intfact::Budget;
    use crate::search::{replay_row, resolve_pair, TABLE_ROWS};

    #[test]
    fn table_rows_round_trip() {
        let cache = FactorCache::new(Budget::default());
        let row = CsvRow::from(&replay_row(&TABLE_ROWS[0], 4, &cache).unwrap());
        assert_eq!(row.d, "2");
        assert_eq!((row.r.as_str(), row.s.as_str()), ("5", "2"));
        assert_eq!(row.lambda, "0.2333");
        assert_eq!(row.big_lambda, "57.7227");
        assert_eq!(row.lhs, "34938.5621");
        assert_eq!(row.rhs, "2078.0165");
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("q,m,d,r,g_degrees,s,lambda,Lambda,lhs,rhs,holds\n"));
        let back: Vec<CsvRow> = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, vec![row]);
    }

    #[test]
    fn scan_rows() {
        let cache = FactorCache::new(Budget::default());
        let st = resolve_pair(5, 5, 4, &cache).unwrap();
        let row = ScanCsvRow::from(&st);
        assert_eq!(row.status, "POSSIBLE_EXCEPTION");
        assert!(!row.holds);
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("q,m,d,r,g_degrees,s,lambda,Lambda,lhs,rhs,holds,status,bounds_used\n"));
        let back: Vec<ScanCsvRow> = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, vec![row]);
    }
}
