//! Rendering of command output as aligned text, JSON or CSV.

use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use super::args::Format;

/// What a command produces, independent of the output format.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
    /// Primary table: the CSV body, and the table shown in text mode.
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra `key: value` lines printed under the text table.
    pub summary: Vec<(&'static str, String)>,
    pub exit_code: i32,
}

impl Report {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Table => self.write_table(out),
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_table(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{}{c}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        if !self.headers.is_empty() {
            writeln!(out, "{}", line(self.headers.clone()))?;
            for row in &self.rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
        if !self.summary.is_empty() {
            if !self.headers.is_empty() {
                writeln!(out)?;
            }
            for (k, v) in &self.summary {
                writeln!(out, "{k}: {v}")?;
            }
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        top.insert("inputs".into(), fixed_precision(self.inputs.clone()));
        top.insert("results".into(), fixed_precision(self.results.clone()));
        top.insert("diagnostics".into(), fixed_precision(self.diagnostics.clone()));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(top))?;
        writeln!(out)
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }
}

/// Rewrites every non-integer number with 17 significant digits, so the JSON
/// text depends only on the bits of each value.
pub fn fixed_precision(v: Value) -> Value {
    match v {
        Value::Number(n) => {
            let text = n.as_str();
            if text.contains(['.', 'e', 'E']) {
                let x: f64 = text.parse().expect("serde_json emits valid floats");
                Value::Number(float_number(x))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(fixed_precision).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, fixed_precision(v))).collect()),
        other => other,
    }
}

fn float_number(x: f64) -> Number {
    Number::from_str(&format!("{x:.16e}")).expect("scientific notation is valid JSON")
}

/// JSON float; non-finite values become null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(float_number(x))
    } else {
        Value::Null
    }
}

/// `[re, im]`, matching how `Complex64` serializes.
pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn fixed(x: f64) -> String {
    format!("{x:.12}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn complex_text(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.12}{sign}{:.3e}i", z.re, z.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_get_seventeen_digits() {
        let v = serde_json::json!({"a": 0.1, "b": [3, -2.5e-7], "c": "x"});
        let s = serde_json::to_string(&fixed_precision(v)).unwrap();
        assert_eq!(s, r#"{"a":1.0000000000000001e-1,"b":[3,-2.4999999999999999e-7],"c":"x"}"#);
    }

    #[test]
    fn round_trips_bits() {
        for x in [0.1, 1.0 / 3.0, -25.000000000000004, 6.02e23, 5e-324] {
            let Value::Number(n) = num(x) else { panic!() };
            assert_eq!(n.as_str().parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn table_alignment() {
        let r = Report {
            command: "t",
            inputs: Value::Null,
            results: Value::Null,
            diagnostics: Value::Null,
            headers: vec!["n", "value"],
            rows: vec![vec!["0".into(), "1.5".into()], vec!["10".into(), "-2".into()]],
            summary: vec![("verdict", "pass".into())],
            exit_code: 0,
        };
        let mut out = Vec::new();
        r.write(Format::Table, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), " n  value\n 0    1.5\n10     -2\n\nverdict: pass\n");
        let mut out = Vec::new();
        r.write(Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,value\n0,1.5\n10,-2\n");
    }
}
