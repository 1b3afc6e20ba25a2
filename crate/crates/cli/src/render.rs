//! Plain-text rendering of reports.

use std::fmt::Write;

use disentangle_core::checker::gallery::GalleryEntry;
use disentangle_core::checker::theorems::TheoremReport;
use disentangle_core::checker::{Report, Verdict, Witness};

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Undecided(reason) => format!("undecided ({reason})"),
        v => v.symbol().to_string(),
    }
}

fn pairs_text(pairs: &[[String; 2]]) -> String {
    let parts: Vec<String> = pairs.iter().map(|[a, b]| format!("{a}->{b}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn witness_lines(id: &str, w: &Witness, out: &mut String) {
    match w {
        Witness::Functions { maps } => {
            for (i, m) in maps.iter().enumerate() {
                let _ = writeln!(out, "  {id} [{}] {}", i + 1, pairs_text(m));
            }
        }
        Witness::Relations { relations } => {
            for (i, r) in relations.iter().enumerate() {
                let _ = writeln!(out, "  {id} [{}] {}", i + 1, pairs_text(r));
            }
        }
        Witness::Kernels { kernels } => {
            for (i, k) in kernels.iter().enumerate() {
                let rows: Vec<String> = k.iter().map(|r| format!("[{}]", r.join(" "))).collect();
                let _ = writeln!(out, "  {id} [{}] {}", i + 1, rows.join(" "));
            }
        }
    }
}

pub fn report(r: &Report) -> String {
    let mut out = String::new();
    let width = r.verdicts.keys().map(String::len).max().unwrap_or(0);
    let _ = writeln!(out, "category: {}", serde_json::to_string(&r.category).unwrap_or_default().trim_matches('"'));
    for (id, v) in &r.verdicts {
        let _ = writeln!(out, "  {id:<width$}  {}", verdict_text(v));
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(out, "witnesses:");
        for (id, w) in &r.witnesses {
            witness_lines(id, w, &mut out);
        }
    }
    for (title, items) in [("warnings", &r.warnings), ("notes", &r.notes)] {
        if !items.is_empty() {
            let _ = writeln!(out, "{title}:");
            for item in items {
                let _ = writeln!(out, "  - {item}");
            }
        }
    }
    out
}

/// Entries sharing a definition list are shown side by side.
pub fn gallery(entries: &[(GalleryEntry, Report)]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < entries.len() {
        let ids: Vec<&String> = entries[i].1.verdicts.keys().collect();
        let mut j = i + 1;
        while j < entries.len() && entries[j].1.verdicts.keys().eq(ids.iter().copied()) {
            j += 1;
        }
        let group = &entries[i..j];
        for (e, _) in group {
            let _ = writeln!(out, "{}: {}", e.name, e.description);
        }
        let width = ids.iter().map(|s| s.len()).max().unwrap_or(0).max("definition".len());
        let cols: Vec<usize> = group.iter().map(|(e, _)| e.name.len().max(9)).collect();
        let _ = write!(out, "\n{:<width$}", "definition");
        for ((e, _), w) in group.iter().zip(&cols) {
            let _ = write!(out, "  {:<w$}", e.name);
        }
        let _ = writeln!(out);
        for id in &ids {
            let _ = write!(out, "{id:<width$}");
            for ((e, r), w) in group.iter().zip(&cols) {
                let got = r.verdicts[*id].symbol();
                let mark = if e.expected.get(*id) == r.verdicts.get(*id) { "" } else { "!" };
                let _ = write!(out, "  {:<w$}", format!("{got}{mark}"));
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(out);
        i = j;
    }
    let mismatches: Vec<&str> = entries
        .iter()
        .filter(|(e, r)| r.verdicts != e.expected)
        .map(|(e, _)| e.name)
        .collect();
    if mismatches.is_empty() {
        let _ = writeln!(out, "all verdicts match the expected values");
    } else {
        let _ = writeln!(out, "verdicts marked ! differ from the expected values: {}", mismatches.join(", "));
    }
    out
}

pub fn theorems(t: &TheoremReport) -> String {
    let mut out = String::new();
    let c = &t.config;
    let _ = writeln!(
        out,
        "seed {} | factor sizes <= {} | factors <= {} | trials: maps {}, kernels {}, actions {}",
        c.seed, c.max_factor_size, c.max_factors, c.map_trials, c.kernel_trials, c.action_trials
    );
    let width = t.suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
    for s in &t.suites {
        let status = if s.ok() { "PASS" } else { "FAIL" };
        let partial = if s.partial { " (partial: budget exceeded)" } else { "" };
        let _ = writeln!(out, "{status} {:<width$}  {}/{}{partial}  {}", s.name, s.passed, s.checked, s.statement);
        if let Some(cx) = &s.counterexample {
            let _ = writeln!(out, "     counterexample: {cx}");
        }
    }
    let passed = t.suites.iter().filter(|s| s.ok()).count();
    let _ = writeln!(out, "{passed}/{} suites passed", t.suites.len());
    out
}

pub fn decompositions(elements: &[String], pairs: &[(Vec<usize>, Vec<usize>)]) -> String {
    let mut out = String::new();
    let names = |s: &[usize]| s.iter().map(|&i| elements[i].as_str()).collect::<Vec<_>>().join(", ");
    for (a, b) in pairs {
        let _ = writeln!(out, "{{{}}} x {{{}}}", names(a), names(b));
    }
    let _ = writeln!(out, "{} decomposition(s)", pairs.len());
    out
}
