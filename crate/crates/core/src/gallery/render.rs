use std::fmt::Write;

use super::{ClaimStatus, Params, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    Text,
    Json,
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{s}{}", " ".repeat(w.saturating_sub(width(s))))
}

fn params_line(p: &Params) -> String {
    let v = serde_json::to_value(p).expect("params serialize");
    let obj = v.as_object().expect("params are an object");
    obj.iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Aligned claim table with ✓/✗ marks, then ramification rows and a verdict.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.scenario, params_line(&r.params));
    let head = ["", "claim", "lhs", "rhs"];
    let rows: Vec<[String; 4]> = r
        .claims
        .iter()
        .map(|c| {
            let mark = if c.exact_match { "✓" } else { "✗" };
            let mut desc = c.description.clone();
            if c.finite_level {
                desc.push_str(" [finite level]");
            }
            if c.status == ClaimStatus::Indeterminate {
                desc.push_str(" [indeterminate]");
            }
            [mark.to_string(), desc, c.lhs.clone(), c.rhs.clone()]
        })
        .collect();
    let mut w = head.map(width);
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            w[i] = w[i].max(width(cell));
        }
    }
    let line = |cells: [&str; 4]| {
        let s: Vec<String> = cells.iter().enumerate().map(|(i, c)| pad(c, w[i])).collect();
        s.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(head));
    for row in &rows {
        let _ = writeln!(out, "{}", line([&row[0], &row[1], &row[2], &row[3]]));
    }
    if !r.ramification.is_empty() {
        let _ = writeln!(out, "level  n  e  f  d");
        for row in &r.ramification {
            let tag = if row.finite_level { "  [finite level]" } else { "" };
            let _ = writeln!(out, "{:<5}  {}  {}  {}  {}{tag}", row.level, row.n, row.e, row.f, row.d);
        }
    }
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    match r.elapsed_ms {
        Some(ms) => {
            let _ = writeln!(out, "{verdict} ({ms} ms)");
        }
        None => {
            let _ = writeln!(out, "{verdict}");
        }
    }
    out
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize")
}
