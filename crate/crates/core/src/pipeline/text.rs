//! Plain-text rendering of a completion report.

use std::fmt::Write;

use super::{CompletionReport, ReportKind, Status};
use crate::arith::Rationals;
use crate::lattice::IntMatrix;
use crate::series::{SeriesTuple, TruncatedSeries};

/// Renders a series in variables `x1, x2, ...` (or `x, y` for a one-dimensional law).
pub fn render_series(s: &TruncatedSeries<Rationals>, names: &[String]) -> String {
    let mut out = String::new();
    for (m, c) in s.terms() {
        let mono: Vec<String> = m
            .exps()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
            .collect();
        let text = c.to_string();
        let text = text.strip_suffix("/1").map(str::to_string).unwrap_or(text);
        let (neg, abs) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        let sign = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let body = match (abs.as_str(), mono.is_empty()) {
            (a, true) => a.to_string(),
            ("1", false) => mono.join("*"),
            (a, false) => format!("{a}*{}", mono.join("*")),
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn var_names(d: usize, two: bool) -> Vec<String> {
    let base: Vec<String> = (1..=d).map(|i| i.to_string()).collect();
    let mut names: Vec<String> = base.iter().map(|i| if d == 1 { "X".into() } else { format!("X{i}") }).collect();
    if two {
        names.extend(base.iter().map(|i| if d == 1 { "Y".into() } else { format!("Y{i}") }));
    }
    names
}

fn render_tuple(out: &mut String, label: &str, t: &SeriesTuple<Rationals>, two: bool) {
    let names = var_names(t.ctx().num_vars() / if two { 2 } else { 1 }, two);
    for (i, s) in t.components().iter().enumerate() {
        let _ =
            writeln!(out, "  {label}_{} = {} + O(deg {})", i + 1, render_series(s, &names), t.ctx().max_degree() + 1);
    }
}

fn render_matrix(m: &IntMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn render_text(report: &CompletionReport) -> String {
    let mut out = String::new();
    let kind = match report.kind {
        ReportKind::Global => "global",
        ReportKind::Quadratic => "quadratic",
        ReportKind::Local => "local",
    };
    let _ = writeln!(out, "{kind} completion of a torus of dimension {}", report.dimension);
    let _ = writeln!(out, "degree {}, budget {}", report.degree, report.budget);
    if let Some(n) = report.phi_degree {
        let _ = writeln!(out, "Phi checked to degree {n}");
    }
    if let Some(s) = &report.s_choices {
        let _ = writeln!(out, "s = {s:?}");
    }
    if let Some(l) = &report.local {
        let _ = writeln!(out, "p = {}, d_s = {}, d_a = {}", l.p, l.d_s, l.d_a);
        let _ = writeln!(out, "U~_1 = {}", render_matrix(&l.u1_tilde));
        let _ = writeln!(out, "{}", l.summary);
    }
    if !report.xi.is_empty() {
        let _ = writeln!(out, "Xi:");
        for (p, m) in &report.xi {
            let _ = writeln!(out, "  Xi({p}) = {}", render_matrix(m));
        }
    }
    if let (Some(q), Some(e)) = (&report.q, report.e) {
        let _ = writeln!(out, "Q = {} (e = {e})", render_matrix(q));
    }
    match report.parse_law() {
        Ok((law, lambda)) => {
            let _ = writeln!(out, "lambda:");
            render_tuple(&mut out, "lambda", &lambda, false);
            let _ = writeln!(out, "F:");
            render_tuple(&mut out, "F", &law, true);
        }
        Err(e) => {
            let _ = writeln!(out, "unreadable law: {e}");
        }
    }
    let _ = writeln!(out, "checks:");
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        match &c.witness {
            Some(w) => {
                let _ = writeln!(out, "  [{tag}] {}: {w}", c.name);
            }
            None => {
                let _ = writeln!(out, "  [{tag}] {}", c.name);
            }
        }
    }
    let verdict = if report.passed() { "pass" } else { "fail" };
    let _ = writeln!(out, "verdict: {verdict}");
    out
}
