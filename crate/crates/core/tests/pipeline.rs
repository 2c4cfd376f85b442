use pnsieve::cache::FactorCache;
use pnsieve::charsum::{brute_count_n, Tables};
use pnsieve::ffield::{build_field, find_alpha, RationalFunc};
use pnsieve::gf::poly;
use pnsieve::intfact::Budget;
use pnsieve::par::Exec;
use pnsieve::report::{read_csv, write_csv, CsvRow};
use pnsieve::search::{reproduce_tables, resolve_pair, scan, Tag};

#[test]
fn scan_is_identical_sequential_and_parallel() {
    let cache = FactorCache::new(Budget::default());
    let seq = scan(5, 3, (5, 30), 4, Exec::Sequential, &cache).unwrap();
    let par = scan(5, 3, (5, 30), 4, Exec::with_jobs(4), &cache).unwrap();
    let tags = |r: &pnsieve::search::ScanReport| r.statuses.iter().map(|s| (s.q, s.m, s.tag)).collect::<Vec<_>>();
    assert_eq!(tags(&seq), tags(&par));
    assert_eq!(seq.exceptions, par.exceptions);
    assert_eq!(serde_json::to_string(&seq).unwrap(), serde_json::to_string(&par).unwrap());
}

#[test]
fn cache_file_survives_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let first = FactorCache::with_file(&path, Budget::default()).get(25, 36).unwrap();
    assert!(first.complete);
    // zero budget: anything not already cached would stay incomplete
    let reloaded = FactorCache::with_file(&path, Budget { rho_iterations: 0 }).get(25, 36).unwrap();
    assert_eq!(first, reloaded);
}

#[test]
fn table_csv_round_trips() {
    let cache = FactorCache::new(Budget::default());
    let rows = reproduce_tables(None, Exec::auto(), &cache).unwrap();
    let csv: Vec<CsvRow> = rows.iter().map(CsvRow::from).collect();
    let mut buf = Vec::new();
    write_csv(&mut buf, &csv).unwrap();
    let back: Vec<CsvRow> = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.len(), 44);
    assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::to_value(&csv).unwrap());
}

#[test]
fn table_pairs_resolve() {
    let cache = FactorCache::new(Budget::default());
    for (q, m) in [(5, 15), (5, 36), (125, 7), (125, 8), (25, 12)] {
        let st = resolve_pair(q, m, 4, &cache).unwrap();
        assert!(st.tag.is_verified(), "({q}, {m}) {:?}", st.tag);
        assert!(st.certificate.unwrap().holds);
    }
    assert_eq!(resolve_pair(5, 16, 4, &cache).unwrap().tag, Tag::PossibleException);
}

#[test]
fn search_agrees_with_brute_count() {
    let ctx = build_field(5, 1, 3).unwrap();
    let tables = Tables::new(&ctx, Exec::Sequential).unwrap();
    let f = RationalFunc::parse(&ctx, "x^3+x+1 / x").unwrap();
    let n = ctx.group_order();
    let xm1 = poly::xm_minus_one(ctx.field(), 3);
    for a in 0..ctx.q {
        let count = brute_count_n(&ctx, &tables, &f, a, (n, n), (&xm1, &xm1)).unwrap();
        assert_eq!(find_alpha(&ctx, &f, a).is_some(), count > 0, "a = {a}");
    }
}
