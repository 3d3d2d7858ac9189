//! Deterministic number and time formatting.

use std::f64::consts::PI;

use serde_json::Value;

/// Magnitudes below this print as zero; they are rounding noise.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.abs() < NOISE_FLOOR {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// `x` with 12 significant digits, shortest form.
pub fn num(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "-".to_string())
}

/// JSON number rounded to 12 significant digits.
pub fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_num)
}

/// `t` as `p·pi/q` when it is one, with `q ≤ 64`.
pub fn pi_multiple(t: f64) -> Option<String> {
    if !t.is_finite() {
        return None;
    }
    if t == 0.0 {
        return Some("0".to_string());
    }
    let r = t / PI;
    for q in 1..=64i64 {
        let p = (r * q as f64).round();
        if p != 0.0 && (t - p * PI / q as f64).abs() < 1e-9 * t.abs().max(1.0) {
            let p = p as i64;
            let head = match p {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                _ => format!("{p}*pi"),
            };
            return Some(if q == 1 { head } else { format!("{head}/{q}") });
        }
    }
    None
}

/// Time in radians plus its π-multiple form when recognized.
pub fn time_label(t: Option<f64>) -> String {
    match t {
        None => "-".to_string(),
        Some(t) => match pi_multiple(t) {
            Some(p) => format!("{} ({p})", num(t)),
            None => num(t),
        },
    }
}

/// Left-aligned plain-text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

/// CSV with minimal quoting.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let esc = |c: &str| {
        if c.contains([',', '"', '\n']) {
            format!("\"{}\"", c.replace('"', "\"\""))
        } else {
            c.to_string()
        }
    };
    let mut out = header.join(",") + "\n";
    for row in rows {
        out += &(row.iter().map(|c| esc(c)).collect::<Vec<_>>().join(",") + "\n");
    }
    out
}
