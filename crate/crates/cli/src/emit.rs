//! Rendering of reports as JSON, aligned tables or CSV.

use serde_json::{Map, Value};

/// Rounds every float to 12 significant digits. Integers are left alone.
pub fn round_reals(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            let r: f64 = format!("{x:.11e}").parse().unwrap();
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_reals).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_reals(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and rounded reals; stable under re-emission.
pub fn json(v: &Value) -> String {
    serde_json::to_string_pretty(&round_reals(v.clone())).expect("values always serialize")
}

/// Truncates (not rounds) to four decimals.
pub fn truncate4(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    // Round far below the fourth digit first so 0.29999999999 prints 0.3000.
    let s = format!("{:.10}", x.abs());
    let (int, frac) = s.split_once('.').unwrap();
    let body = format!("{int}.{}", &frac[..4]);
    if x < 0.0 && body.trim_start_matches(['0', '.']).is_empty() {
        body
    } else if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => truncate4(n.as_f64().unwrap()),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join("  "),
        Value::Object(_) => "{..}".into(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Two-column `key value` listing of a nested value.
pub fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, x)| format!("{k:<width$}  {x}\n"))
        .collect()
}

fn columns(rows: &[Map<String, Value>]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn cell(r: &Map<String, Value>, c: &str) -> String {
    r.get(c).map_or_else(|| "-".into(), scalar)
}

/// Column-aligned table for a list of flat records.
pub fn grid(rows: &[Map<String, Value>], cols: &[&str]) -> String {
    let cols: Vec<String> = if cols.is_empty() {
        columns(rows)
    } else {
        cols.iter().map(|s| s.to_string()).collect()
    };
    let cells: Vec<Vec<String>> = rows.iter().map(|r| cols.iter().map(|c| cell(r, c)).collect()).collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap())
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
            + "\n"
    };
    let mut out = line(&cols);
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

/// CSV with full-precision reals; arrays become space-separated fields.
pub fn csv(rows: &[Map<String, Value>], cols: &[&str]) -> Result<String, csv::Error> {
    let cols: Vec<String> = if cols.is_empty() {
        columns(rows)
    } else {
        cols.iter().map(|s| s.to_string()).collect()
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&cols)?;
    for r in rows {
        w.write_record(cols.iter().map(|c| match r.get(c) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(Value::Array(a)) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            Some(x) => x.to_string(),
        }))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
