//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hecke_cells::cache::{build_group, BuildInfo, CacheStatus, Config};
use hecke_cells::coxeter::ElementId;
use hecke_cells::group::Group;
use hecke_cells::jring::JElement;
use hecke_cells::validate::golden::{golden_from_engine, golden_from_oracle, GoldenGroup};
use hecke_cells::validate::{
    hecke_j_consistency, run_property_suite, tbasis_oracle_h, type_a_cell_oracle, Status, SuiteOptions, DEFAULT_SEED,
};
use hecke_cells::LaurentPoly;

const SUITE_GROUPS: &[&str] = &["A1", "A2", "A3", "B2", "B3", "I2(5)", "I2(6)", "I2(7)", "I2(8)", "H3"];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(t: &str) -> Group {
    Group::from_type(t).expect("group builds")
}

fn id(g: &Group, w: &str) -> ElementId {
    g.sys.parse_word(w).expect("word parses")
}

/// Exhaustive or sampled property suite on every listed group; H3 runs on a
/// warm KL cache.
fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = Config { cache_dir: Some(dir.path().to_path_buf()), ..Config::default() };
    let mut summary = Vec::new();
    for &t in SUITE_GROUPS {
        let start = Instant::now();
        let g = if t == "H3" {
            build_group(t, &config).map_err(|e| e.to_string())?;
            let (g, info) = build_group(t, &config).map_err(|e| e.to_string())?;
            ensure(info.kl_computed_entries == 0, || "H3 warm build recomputed KL entries".into())?;
            g
        } else {
            group(t)
        };
        let reports = run_property_suite(&g, &SuiteOptions::default());
        if let Some(r) = reports.iter().find(|r| r.status == Status::Fail) {
            return Err(format!("{t} {}: {}", r.check, r.counterexample.clone().unwrap_or_default()));
        }
        let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
        summary.push(format!("{t} {passed} pass/{} skipped in {:.2?}", reports.len() - passed, start.elapsed()));
    }
    Ok(summary.join(", "))
}

fn matrix_unit_gamma(g: &Group) -> BTreeMap<(ElementId, ElementId, ElementId), i64> {
    // E11 = s1, E22 = s2, E12 = s1s2, E21 = s2s1
    let e = [["s1", "s1s2"], ["s2s1", "s2"]].map(|row| row.map(|w| id(g, w)));
    let mut out = BTreeMap::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    if j == k {
                        out.insert((e[i][j], e[k][l], e[i][l]), 1);
                    }
                }
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let fixtures: [(&str, &str); 2] = [("A1", include_str!("fixtures/A1.json")), ("A2", include_str!("fixtures/A2.json"))];
    for (t, text) in fixtures {
        let fixture: GoldenGroup = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let g = group(t);
        ensure(golden_from_oracle(&g.sys).map_err(|e| e.to_string())? == fixture, || format!("{t}: oracle differs from fixture"))?;
        ensure(golden_from_engine(&g).map_err(|e| e.to_string())? == fixture, || format!("{t}: engine differs from fixture"))?;
    }

    let a1 = group("A1");
    let s = id(&a1, "s1");
    let tc = a1.trunc(a1.select_cell(1, None).map_err(|e| e.to_string())?);
    ensure(a1.gamma.get(s, s, s) == 1, || "A1 gamma_{s,s,s} != 1".into())?;
    ensure(tc.psi_x(s).map_err(|e| e.to_string())? == BTreeMap::from([(s, 1)]), || "A1 psi_s".into())?;
    ensure(tc.dim_hom(s, s).map_err(|e| e.to_string())? == 1, || "A1 dim_hom(s,s)".into())?;

    let a2 = group("A2");
    let cell = a2.select_cell(1, None).map_err(|e| e.to_string())?;
    let tc = a2.trunc(cell);
    let (s1, s2) = (id(&a2, "s1"), id(&a2, "s2"));
    ensure(tc.a() == 1, || "A2 middle a".into())?;
    ensure(tc.distinguished() == [s1, s2], || "A2 D".into())?;
    ensure(tc.c_zero() == [s1, s2], || "A2 c0".into())?;
    let expected = matrix_unit_gamma(&a2);
    let mut pairs = 0;
    for &x in tc.elements() {
        for &y in tc.elements() {
            pairs += 1;
            for z in a2.sys.elements() {
                let want = expected.get(&(x, y, z)).copied().unwrap_or(0);
                let got = a2.gamma.get(x, y, z);
                ensure(got == want, || format!("A2 gamma({x},{y},{z}) = {got}, matrix units give {want}"))?;
            }
        }
    }
    ensure(pairs == 16 && expected.len() == 8, || "A2 table shape".into())?;
    for &z in tc.elements() {
        for &u in tc.elements() {
            let want = u64::from([s1, s2].contains(&z) && [s1, s2].contains(&u));
            ensure(tc.dim_hom(z, u).map_err(|e| e.to_string())? == want, || format!("A2 dim_hom({z},{u})"))?;
        }
    }
    ensure(tc.psi_x(s1).map_err(|e| e.to_string())? == BTreeMap::from([(s1, 1), (s2, 1)]), || "A2 psi_s1".into())?;
    ensure(tc.circle(&JElement::t(s1), &JElement::t(s1)).map_err(|e| e.to_string())? == JElement::t(s1), || "A2 t_s1 o t_s1".into())?;

    for &t in SUITE_GROUPS {
        let g = group(t);
        let w0 = g.sys.w_max();
        let c = g.cells.cell_of(w0);
        ensure(c.elements == [w0] && c.a == g.sys.nu() && g.gamma.get(w0, w0, w0) == 1, || format!("{t}: longest-element cell"))?;
    }
    Ok("A1, A2 fixtures; A2 matrix units, dim_hom, psi, circle; w0 cells on all suite groups".into())
}

fn criterion_3() -> Outcome {
    let a2 = group("A2");
    let mid = a2.trunc(a2.select_cell(1, None).map_err(|e| e.to_string())?);
    let mut count = 0;
    for &x in mid.elements() {
        for &y in mid.elements() {
            for &z in mid.elements() {
                hecke_j_consistency(&a2, [x, y, z]).map_err(|v| v.to_string())?;
                count += 1;
            }
        }
    }
    let b3 = group("B3");
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let n = b3.sys.order();
    let mut sampled = 0;
    while sampled < 500 {
        let x = rng.gen_range(0..n);
        let els = &b3.cells.cell_of(x).elements;
        let pick = |rng: &mut ChaCha8Rng| els[rng.gen_range(0..els.len())];
        let t = [x, pick(&mut rng), pick(&mut rng)];
        hecke_j_consistency(&b3, t).map_err(|v| v.to_string())?;
        sampled += 1;
    }
    Ok(format!("{count} A2 triples, {sampled} B3 triples (seed {DEFAULT_SEED})"))
}

/// The one-dimensional representation `T_w -> v^{l(w)}`.
fn trivial_rep(g: &Group, w: ElementId) -> LaurentPoly {
    g.sys.elements().fold(LaurentPoly::zero(), |acc, y| acc + g.kl().p(y, w) * &LaurentPoly::monomial(1, g.sys.length(y) as i32))
}

fn criterion_4() -> Outcome {
    let a1 = group("A1");
    let s = id(&a1, "s1");
    let vv = LaurentPoly::v_plus_inv();
    let h = a1.hecke.h_const(s, s, s);
    ensure(h == vv, || format!("h_(s,s,s) = {h}"))?;
    ensure(tbasis_oracle_h(&a1.sys, s, s, s).map_err(|e| e.to_string())? == vv, || "oracle h_(s,s,s)".into())?;
    let trace = trivial_rep(&a1, s);
    ensure(trace == vv, || format!("tr(c_s) on the trivial representation = {trace}"))?;
    for t in ["A1", "A2", "B2", "A3"] {
        let g = group(t);
        for x in g.sys.elements() {
            for y in g.sys.elements() {
                let lhs = trivial_rep(&g, x) * trivial_rep(&g, y);
                let rhs = g.hecke.product(x, y).terms().iter().fold(LaurentPoly::zero(), |acc, (&z, h)| acc + h * &trivial_rep(&g, z));
                ensure(lhs == rhs, || format!("{t}: specialization not multiplicative on ({x}, {y})"))?;
            }
        }
    }
    Ok(format!("h_(s,s,s) = {h} = tr(c_s); specialization multiplicative on A1, A2, B2, A3"))
}

fn criterion_5() -> Outcome {
    for t in ["A2", "A3"] {
        let g = group(t);
        let rs = type_a_cell_oracle(&g.sys).map_err(|e| e.to_string())?;
        let canon = hecke_cells::validate::rs::canonical;
        ensure(rs.left == canon(g.cells.left.cells.clone()), || format!("{t}: left cells"))?;
        ensure(rs.right == canon(g.cells.right.cells.clone()), || format!("{t}: right cells"))?;
        let two: Vec<Vec<ElementId>> = g.cells.two_sided.iter().map(|c| c.elements.clone()).collect();
        ensure(rs.two_sided == canon(two), || format!("{t}: two-sided cells"))?;
    }
    let mut cells = 0;
    for t in ["A1", "A2", "A3", "A4"] {
        let g = group(t);
        for c in 0..g.cells.two_sided.len() {
            let d = g.jring.center_dimension(c);
            ensure(d == 1, || format!("{t} cell {c}: centre dimension {d}"))?;
            cells += 1;
        }
    }
    Ok(format!("RS agrees on A2, A3; centre dimension 1 on all {cells} cells of A1..A4"))
}

fn criterion_6() -> Outcome {
    let opts = SuiteOptions::default();
    let run = || {
        let g = group("B3");
        (serde_json::to_vec(&run_property_suite(&g, &opts)).unwrap(), serde_json::to_vec(&golden_from_engine(&g).unwrap()).unwrap())
    };
    let (r1, e1) = run();
    let (r2, e2) = run();
    ensure(r1 == r2 && e1 == e2, || "B3 reports differ between runs".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = Config { cache_dir: Some(dir.path().to_path_buf()), ..Config::default() };
    let (cold, cold_info) = build_group("B3", &config).map_err(|e| e.to_string())?;
    let (warm, warm_info) = build_group("B3", &config).map_err(|e| e.to_string())?;
    ensure(cold_info.kl_computed_entries > 0 && cold_info.cache == CacheStatus::Miss, || format!("cold build: {cold_info:?}"))?;
    ensure(warm_info == BuildInfo { kl_computed_entries: 0, cache: CacheStatus::Hit }, || format!("warm build: {warm_info:?}"))?;
    let warm_reports = serde_json::to_vec(&run_property_suite(&warm, &opts)).unwrap();
    ensure(warm_reports == r1, || "warm-cache reports differ".into())?;
    ensure(cold.gamma == warm.gamma, || "warm gamma differs".into())?;
    Ok(format!("byte-identical reports; warm cache computed 0 of {} KL entries", cold_info.kl_computed_entries))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("1 property suite", criterion_1),
        ("2 golden values", criterion_2),
        ("3 Hecke/J consistency", criterion_3),
        ("4 rank-one trace example", criterion_4),
        ("5 type-A validators", criterion_5),
        ("6 determinism and cache", criterion_6),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(msg) => println!("acceptance criterion {name}: PASS ({:.2?}) {msg}", start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("acceptance criterion {name}: FAIL ({:.2?}) {msg}", start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
