//! Deterministic JSON records and CSV tables.

use std::io::{self, Write};

use halfline::{Complex64, ExtendedParam};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Compact JSON with every float written to 17 significant digits.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Keys are sorted because `Map` is ordered.
pub struct OutputRecord {
    pub command: &'static str,
    pub params: Map<String, Value>,
    pub results: Value,
}

impl OutputRecord {
    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params,
            "results": self.results,
        })
    }

    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        let mut ser = serde_json::Serializer::with_formatter(&mut *out, Digits17);
        self.to_value().serialize(&mut ser).map_err(io::Error::other)?;
        writeln!(out)
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn extended(p: ExtendedParam) -> Value {
    match p.value() {
        Some(z) => complex(z),
        None => Value::String("inf".into()),
    }
}

/// A float column in CSV output.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Number(n) if n.is_f64() => float(n.as_f64().unwrap_or(f64::NAN)),
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                Value::Null => "nan".to_string(),
                other => other.to_string(),
            }))?;
        }
        w.flush()
    }

    pub fn to_value(&self) -> Value {
        json!({ "columns": self.header, "rows": self.rows })
    }
}

/// A float cell; non-finite values become `null`.
pub fn cell(x: f64) -> Value {
    json!(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let record = OutputRecord {
            command: "test",
            params: Map::from_iter([("b".to_string(), json!(0.1)), ("a".to_string(), json!(3))]),
            results: json!([1.0 / 3.0]),
        };
        let mut buf = Vec::new();
        record.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "{\"command\":\"test\",\"params\":{\"a\":3,\"b\":1.0000000000000001e-1},\
             \"results\":[3.3333333333333331e-1],\"schema_version\":\"1\"}\n"
        );
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["results"][0].as_f64(), Some(1.0 / 3.0));
    }

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["j", "x"]);
        t.push(vec![json!(-2), cell(0.5)]);
        t.push(vec![json!(1), cell(f64::NAN)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "j,x\n-2,5.0000000000000000e-1\n1,nan\n");
    }
}
