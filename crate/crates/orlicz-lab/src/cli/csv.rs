//! CSV projection of reports, for plotting. JSON is the canonical format;
//! the CSV keeps the meta lines as comments and projects the result either as
//! a natural table (diagnostics rows, b-tables, partial sums, bound records)
//! or as flattened key,value pairs.

use serde_json::Value;

use super::{Report, SweepRow};

pub fn scalar_display(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Standard CSV quoting for cells containing separators or quotes.
fn cell(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Depth-first flatten of scalar leaves under dotted keys; arrays are skipped
/// except when every element is scalar and short enough to stay readable.
pub fn flatten_scalars(value: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_scalars(v, key, out);
            }
        }
        Value::Array(items) => {
            if items.len() <= 4 && items.iter().all(|i| !i.is_object() && !i.is_array()) {
                for (i, v) in items.iter().enumerate() {
                    out.push((format!("{prefix}.{i}"), scalar_display(v)));
                }
            }
        }
        scalar => out.push((prefix, scalar_display(scalar))),
    }
}

fn meta_lines(report: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!("# tool,{}\n", report.tool));
    s.push_str(&format!("# version,{}\n", report.version));
    s.push_str(&format!("# command,{}\n", report.command));
    s.push_str(&format!("# config_hash,{}\n", report.config_hash));
    if let Some(seed) = report.seed {
        s.push_str(&format!("# seed,{seed}\n"));
    }
    s
}

pub fn render_csv(report: &Report) -> String {
    let mut s = meta_lines(report);
    let r = &report.result;

    // b-table: rows n, columns m
    if let Some(entries) = r.get("entries").and_then(Value::as_array) {
        let cols = entries
            .first()
            .and_then(Value::as_array)
            .map(|row| row.len())
            .unwrap_or(0);
        s.push('n');
        for m in 1..=cols {
            s.push_str(&format!(",m{m}"));
        }
        s.push('\n');
        for (n, row) in entries.iter().enumerate() {
            s.push_str(&(n + 1).to_string());
            if let Some(row) = row.as_array() {
                for v in row {
                    s.push(',');
                    s.push_str(&scalar_display(v));
                }
            }
            s.push('\n');
        }
        return s;
    }

    // diagnostics: rows {n, sup_norm, gap}
    if let (Some(sup), gaps) = (
        r.get("sup_norms").and_then(Value::as_array),
        r.get("cauchy_gaps").and_then(Value::as_array),
    ) {
        s.push_str("n,sup_norm,gap\n");
        for (i, v) in sup.iter().enumerate() {
            let gap = gaps
                .and_then(|g| g.get(i))
                .map(scalar_display)
                .unwrap_or_default();
            s.push_str(&format!("{},{},{}\n", i + 1, scalar_display(v), gap));
        }
        return s;
    }

    // series test: rows {m, partial_sum}
    if let Some(partials) = r.get("partial_sums").and_then(Value::as_array) {
        s.push_str("m,partial_sum\n");
        for (i, v) in partials.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, scalar_display(v)));
        }
        return s;
    }

    // bound records
    if let Some(records) = r.get("records").and_then(Value::as_array) {
        s.push_str("n,modular_lower,norm_lower\n");
        for rec in records {
            s.push_str(&format!(
                "{},{},{}\n",
                rec.get("n").map(scalar_display).unwrap_or_default(),
                rec.get("modular_lower")
                    .map(scalar_display)
                    .unwrap_or_default(),
                rec.get("norm_lower")
                    .map(scalar_display)
                    .unwrap_or_default(),
            ));
        }
        return s;
    }

    // fallback: flattened key,value pairs
    let mut pairs = Vec::new();
    flatten_scalars(r, String::new(), &mut pairs);
    s.push_str("key,value\n");
    for (k, v) in pairs {
        s.push_str(&format!("{},{}\n", cell(&k), cell(&v)));
    }
    s
}

/// Aggregated sweep table ordered by config index: varied parameters first,
/// then the union of scalar metrics.
pub fn render_sweep(rows: &[SweepRow]) -> String {
    use std::collections::BTreeSet;
    let mut varied_keys: Vec<String> = Vec::new();
    if let Some(first) = rows.first() {
        varied_keys = first.varied.iter().map(|(k, _)| k.clone()).collect();
    }
    let metric_keys: BTreeSet<String> = rows
        .iter()
        .flat_map(|r| r.metrics.iter().map(|(k, _)| k.clone()))
        .collect();

    let mut s = String::from("index,status");
    for k in &varied_keys {
        s.push_str(&format!(",{k}"));
    }
    for k in &metric_keys {
        s.push_str(&format!(",{k}"));
    }
    s.push('\n');
    for row in rows {
        s.push_str(&row.index.to_string());
        s.push(',');
        s.push_str(&cell(&row.status));
        for k in &varied_keys {
            s.push(',');
            if let Some((_, v)) = row.varied.iter().find(|(key, _)| key == k) {
                s.push_str(&cell(v));
            }
        }
        for k in &metric_keys {
            s.push(',');
            if let Some((_, v)) = row.metrics.iter().find(|(key, _)| key == k) {
                s.push_str(&cell(v));
            }
        }
        s.push('\n');
    }
    s
}
