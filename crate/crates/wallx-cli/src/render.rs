//! Human-readable tables for `--format text`.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::Value;
use wallx_core::io::format_rational;
use wallx_core::quiver::Quiver;
use wallx_core::rootlat::ChamberPath;
use wallx_core::series::{Series, SheafTable};
use wallx_core::toric::{Divisor, SupportFn};

fn row(v: &[i64], width: usize) -> String {
    v.iter().map(|x| format!("{x:>width$}")).collect::<Vec<_>>().join(" ")
}

/// Two-row matrix, top row (y = 1) first, both rows starting at x = ½.
pub fn divisor(d: &Divisor, s: &SupportFn) -> String {
    let w = d.row1.iter().chain(&d.row0).map(|x| x.to_string().len()).max().unwrap_or(1);
    let mut out = format!("{}\n{}\n", row(&d.row1, w), row(&d.row0, w));
    for (j, f) in s.forms.iter().enumerate() {
        let _ = writeln!(out, "psi[{j}] = ({}, {}, {})", f[0], f[1], f[2]);
    }
    out.trim_end().to_string()
}

pub fn quiver(q: &Quiver) -> String {
    let mut out = String::from("arrows:\n");
    for &a in q.arrows() {
        let _ = writeln!(out, "  {:<8} {} -> {}", a.to_string(), q.source(a), q.target(a));
    }
    out.push_str("potential:\n");
    for t in q.potential() {
        let cyc: Vec<String> = t.cycle.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "  {} {}", if t.sign > 0 { '+' } else { '-' }, cyc.join(" "));
    }
    out.trim_end().to_string()
}

pub fn roots(rows: &[Value]) -> String {
    let mut out = format!("{:<24} {:>6} {:>8}\n", "root", "height", "epsilon");
    for r in rows {
        let eps = r.get("epsilon").map_or("-".to_string(), |e| e.to_string());
        let _ = writeln!(out, "{:<24} {:>6} {:>8}", r["root"].to_string(), r["height"].to_string(), eps);
    }
    out.trim_end().to_string()
}

pub fn path(p: &ChamberPath) -> String {
    let mut out = format!("side: {}\n", if p.negative_side { "negative" } else { "positive" });
    let _ = writeln!(out, "{:<4} {:<24} {:>12} {:>3}", "#", "root", "c", "k");
    for (i, c) in p.crossings.iter().enumerate() {
        let _ = writeln!(out, "{:<4} {:<24} {:>12} {:>3}", i + 1, format!("{:?}", c.root.coords), format_rational(&c.c), c.k);
    }
    out.trim_end().to_string()
}

fn monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(k, &x)| if x == 1 { format!("q{k}") } else { format!("q{k}^{x}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

pub fn series(s: &Series) -> String {
    let mut terms: Vec<(&Vec<u32>, String)> = s.terms().iter().map(|(e, c)| (e, c.to_string())).collect();
    terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));
    let w = terms.iter().map(|(_, c)| c.len()).max().unwrap_or(1);
    let mut out = format!("# {} variables, degree <= {}\n", s.nvars(), s.cap());
    for (e, c) in terms {
        let _ = writeln!(out, "{c:>w$}  {}", monomial(e));
    }
    out.trim_end().to_string()
}

pub fn sheaf(t: &SheafTable) -> String {
    let mut out = format!("{:>4} {:<16} {}\n", "n", "beta", "coeff");
    for ((n, beta), c) in t {
        let _ = writeln!(out, "{n:>4} {:<16} {c}", format!("{beta:?}"));
    }
    out.trim_end().to_string()
}

pub fn gv(t: &BTreeMap<(u32, usize, usize), i64>) -> String {
    let mut out = format!("{:>5} {:<10} {:>4}\n", "genus", "[a,b]", "n");
    for ((g, a, b), n) in t {
        let _ = writeln!(out, "{g:>5} {:<10} {n:>4}", format!("[{a},{b}]"));
    }
    out.trim_end().to_string()
}

pub fn ext(v: &Value) -> String {
    ["hom", "ext1", "ext2", "ext3"]
        .iter()
        .filter_map(|k| v.get(*k).map(|x| format!("{k:<5} {x}")))
        .collect::<Vec<_>>()
        .join("\n")
}
