use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use hecke_cells::cache::{build_group, BuildInfo, Config};
use hecke_cells::coxeter::ElementId;
use hecke_cells::group::Group;
use hecke_cells::validate::golden::golden_from_oracle;
use hecke_cells::validate::{all_passed, run_property_suite, Fault, Status, SuiteOptions};
use serde_json::{json, Map, Value};

use crate::output::Report;
use crate::{CellSelector, ExportWhat, TruncOp};

fn words(g: &Group, ids: &[ElementId]) -> Vec<String> {
    ids.iter().map(|&w| g.sys.format_word(w)).collect()
}

fn select(g: &Group, sel: &CellSelector) -> Result<usize> {
    let containing = sel.containing.as_deref().map(|w| g.sys.parse_word(w)).transpose()?;
    Ok(g.select_cell(sel.a, containing)?)
}

fn load(group: &str, config: &Config) -> Result<(Group, BuildInfo)> {
    Ok(build_group(group, config)?)
}

pub fn cells(group: &str, config: &Config) -> Result<Report> {
    let (g, _) = load(group, config)?;
    let cells = &g.cells;
    let mut json_cells = Vec::new();
    let mut rows = Vec::new();
    let mut text = format!("{}: {} elements, nu = {}, {} two-sided cells\n", g.sys.type_string(), g.sys.order(), g.sys.nu(), cells.two_sided.len());
    for (i, c) in cells.two_sided.iter().enumerate() {
        let left: Vec<Vec<String>> = c.left_cells.iter().map(|&l| words(&g, &cells.left.cells[l])).collect();
        let right: Vec<Vec<String>> = c.right_cells.iter().map(|&r| words(&g, &cells.right.cells[r])).collect();
        let center = g.jring.center_dimension(i);
        json_cells.push(json!({
            "a": c.a,
            "size": c.elements.len(),
            "elements": words(&g, &c.elements),
            "left_cells": left,
            "right_cells": right,
            "distinguished": words(&g, &c.distinguished),
            "c_zero": words(&g, &c.c_zero),
            "center_dimension": center,
        }));
        for &w in &c.elements {
            rows.push(vec![
                i.to_string(),
                c.a.to_string(),
                g.sys.format_word(w),
                cells.left.cell_of[w].to_string(),
                cells.right.cell_of[w].to_string(),
                cells.is_distinguished(w).to_string(),
                c.in_c_zero(w).to_string(),
            ]);
        }
        let _ = writeln!(
            text,
            "cell {i}: a = {}, size {}, {} left cells, centre dimension {center}\n  elements: {}\n  D: {}\n  c0: {}",
            c.a,
            c.elements.len(),
            c.left_cells.len(),
            words(&g, &c.elements).join(" "),
            words(&g, &c.distinguished).join(" "),
            words(&g, &c.c_zero).join(" "),
        );
    }
    Ok(Report {
        json: json!({ "group": g.sys.type_string(), "order": g.sys.order(), "nu": g.sys.nu(), "generators": g.sys.generator_order(), "cells": json_cells }),
        csv_header: vec!["cell", "a", "element", "left_cell", "right_cell", "distinguished", "c_zero"],
        csv_rows: rows,
        text,
    })
}

pub fn jtable(group: &str, sel: &CellSelector, config: &Config) -> Result<Report> {
    let (g, _) = load(group, config)?;
    let cell = select(&g, sel)?;
    let c = &g.cells.two_sided[cell];
    let w = |x| g.sys.format_word(x);
    let mut gamma = Vec::new();
    let mut table = Vec::new();
    let mut rows = Vec::new();
    let mut text = format!("{} cell a = {}: {}\n", g.sys.type_string(), c.a, words(&g, &c.elements).join(" "));
    for &x in &c.elements {
        for &y in &c.elements {
            let row = g.gamma.row(x, y);
            let product: Map<String, Value> = row.iter().map(|&(z, n)| (w(z), json!(n))).collect();
            table.push(json!({ "x": w(x), "y": w(y), "product": product }));
            if row.is_empty() {
                rows.push(vec![w(x), w(y), String::new(), "0".into()]);
                let _ = writeln!(text, "t_{} t_{} = 0", w(x), w(y));
            } else {
                let terms: Vec<String> = row.iter().map(|&(z, n)| if n == 1 { format!("t_{}", w(z)) } else { format!("{n} t_{}", w(z)) }).collect();
                let _ = writeln!(text, "t_{} t_{} = {}", w(x), w(y), terms.join(" + "));
            }
            for &(z, n) in row {
                gamma.push(json!([w(x), w(y), w(z), n]));
                rows.push(vec![w(x), w(y), w(z), n.to_string()]);
            }
        }
    }
    Ok(Report {
        json: json!({
            "group": g.sys.type_string(),
            "a": c.a,
            "elements": words(&g, &c.elements),
            "gamma": gamma,
            "table": table,
        }),
        csv_header: vec!["x", "y", "z", "gamma"],
        csv_rows: rows,
        text,
    })
}

fn count_map(g: &Group, m: &BTreeMap<ElementId, u64>) -> Map<String, Value> {
    m.iter().map(|(&z, &n)| (g.sys.format_word(z), json!(n))).collect()
}

pub fn truncated(group: &str, sel: &CellSelector, op: &TruncOp, config: &Config) -> Result<Report> {
    let (g, _) = load(group, config)?;
    let tc = g.trunc(select(&g, sel)?);
    let w = |x| g.sys.format_word(x);
    let mut text = String::new();
    let mut rows = Vec::new();
    let (json, header) = match op {
        TruncOp::Psix { x } => {
            let xs = match x {
                Some(word) => vec![g.sys.parse_word(word)?],
                None => tc.elements().to_vec(),
            };
            let mut out = Map::new();
            for x in xs {
                let m = tc.psi_x(x)?;
                for (&z, &n) in &m {
                    rows.push(vec![w(x), w(z), n.to_string()]);
                }
                let parts: Vec<String> = m.iter().map(|(&z, &n)| format!("{}:{n}", w(z))).collect();
                let _ = writeln!(text, "psi_{} = {{{}}}", w(x), parts.join(", "));
                out.insert(w(x), Value::Object(count_map(&g, &m)));
            }
            (Value::Object(out), vec!["x", "z", "multiplicity"])
        }
        TruncOp::Dimhom => {
            let matrix = tc.dim_hom_matrix()?;
            let els = words(&g, tc.elements());
            for (i, row) in matrix.iter().enumerate() {
                for (j, &n) in row.iter().enumerate() {
                    rows.push(vec![els[i].clone(), els[j].clone(), n.to_string()]);
                }
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                let _ = writeln!(text, "{:>12} | {}", els[i], cells.join(" "));
            }
            (json!({ "elements": els, "matrix": matrix }), vec!["z", "u", "dim_hom"])
        }
        TruncOp::Circle => {
            let basis = words(&g, tc.c_zero());
            let mut table: Vec<Vec<Value>> = Vec::new();
            for &a in tc.c_zero() {
                let mut line = Vec::new();
                for &b in tc.c_zero() {
                    let p = tc.circle(&hecke_cells::jring::JElement::t(a), &hecke_cells::jring::JElement::t(b))?;
                    let m: Map<String, Value> = p.terms().iter().map(|(&r, &n)| (w(r), json!(n))).collect();
                    for (&r, &n) in p.terms() {
                        rows.push(vec![w(a), w(b), w(r), n.to_string()]);
                    }
                    let parts: Vec<String> = p.terms().iter().map(|(&r, &n)| format!("{n} t_{}", w(r))).collect();
                    let _ = writeln!(text, "t_{} o t_{} = {}", w(a), w(b), if parts.is_empty() { "0".into() } else { parts.join(" + ") });
                    line.push(Value::Object(m));
                }
                table.push(line);
            }
            (json!({ "basis": basis, "table": table }), vec!["left", "right", "r", "multiplicity"])
        }
        TruncOp::Convmult { seq, w: target } => {
            let ids: Vec<ElementId> = seq.iter().map(|s| g.sys.parse_word(s)).collect::<hecke_cells::Result<_>>()?;
            let targets = match target {
                Some(word) => vec![g.sys.parse_word(word)?],
                None => tc.elements().to_vec(),
            };
            let mut m = BTreeMap::new();
            for t in targets {
                let n = tc.conv_multiplicity(&ids, t)?;
                if n != 0 || target.is_some() {
                    m.insert(t, n);
                }
            }
            for (&z, &n) in &m {
                rows.push(vec![w(z), n.to_string()]);
                let _ = writeln!(text, "{}: {n}", w(z));
            }
            (json!({ "sequence": words(&g, &ids), "multiplicities": count_map(&g, &m) }), vec!["w", "multiplicity"])
        }
    };
    Ok(Report { json, csv_header: header, csv_rows: rows, text })
}

pub fn verify(group: &str, inject_fault: bool, config: &Config) -> Result<(Report, bool)> {
    let (g, info) = load(group, config)?;
    let opts = SuiteOptions { seed: config.seed, inject_fault: inject_fault.then_some(Fault::Gamma), ..SuiteOptions::default() };
    let reports = run_property_suite(&g, &opts);
    let ok = all_passed(&reports);
    let status = |s: Status| serde_json::to_value(s).expect("status").as_str().unwrap_or_default().to_string();
    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &reports {
        let _ = writeln!(text, "{:<5} {:<30} {:?} {} cases", status(r.status), r.check, r.mode, r.cases);
        if let Some(ce) = r.counterexample.as_ref().filter(|_| r.status == Status::Fail) {
            let _ = writeln!(text, "      counterexample: {ce}");
        }
        rows.push(vec![
            r.group.clone(),
            r.check.clone(),
            status(r.status),
            r.seed.to_string(),
            r.cases.to_string(),
            r.counterexample.as_ref().map(Value::to_string).unwrap_or_default(),
        ]);
    }
    let _ = writeln!(text, "{}: {} (kl entries computed: {})", g.sys.type_string(), if ok { "pass" } else { "FAIL" }, info.kl_computed_entries);
    let json = json!({
        "group": g.sys.type_string(),
        "seed": config.seed,
        "status": if ok { "pass" } else { "fail" },
        "build": info,
        "reports": reports,
    });
    Ok((Report { json, csv_header: vec!["group", "check", "status", "seed", "cases", "counterexample"], csv_rows: rows, text }, ok))
}

pub fn export(group: &str, what: ExportWhat, config: &Config) -> Result<Report> {
    if what == ExportWhat::Golden {
        let sys = hecke_cells::CoxeterSystem::from_type_bounded(group, config.bound)?;
        let golden = golden_from_oracle(&sys)?;
        let json = serde_json::to_value(&golden)?;
        let text = serde_json::to_string_pretty(&json)? + "\n";
        return Ok(Report { json, csv_header: vec!["golden"], csv_rows: vec![vec![text.trim_end().to_string()]], text });
    }
    let (g, _) = load(group, config)?;
    let w = |x| g.sys.format_word(x);
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut text = String::new();
    let header = match what {
        ExportWhat::Kl => {
            for (y, x, p) in g.kl().entries() {
                let s = p.to_csv_string();
                let _ = writeln!(text, "p({}, {}) = {p}", w(y), w(x));
                items.push(json!([w(y), w(x), p]));
                rows.push(vec![w(y), w(x), s]);
            }
            vec!["y", "w", "p"]
        }
        ExportWhat::Gamma => {
            for (x, y, z, n) in g.gamma.triples() {
                let _ = writeln!(text, "gamma({}, {}, {}) = {n}", w(x), w(y), w(z));
                items.push(json!([w(x), w(y), w(z), n]));
                rows.push(vec![w(x), w(y), w(z), n.to_string()]);
            }
            vec!["x", "y", "z", "gamma"]
        }
        ExportWhat::Golden => unreachable!(),
    };
    let key = if what == ExportWhat::Kl { "kl" } else { "gamma" };
    Ok(Report { json: json!({ "group": g.sys.type_string(), "generators": g.sys.generator_order(), key: items }), csv_header: header, csv_rows: rows, text })
}
