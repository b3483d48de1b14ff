use std::io::Write;

use num_bigint::BigUint;
use serde_json::{Map, Value};

use kneser_core::ExperimentReport;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// An ordered list of named values; big integers are kept as decimal
/// strings.
pub struct Record {
    kind: String,
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { kind: kind.to_string(), fields: Vec::new() }
    }

    pub fn field(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.fields.push((name.to_string(), v.into()));
        self
    }

    pub fn big(self, name: &str, v: &BigUint) -> Self {
        self.field(name, v.to_string())
    }

    /// `name=value` per line.
    pub fn lines(&self) -> String {
        self.fields.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect::<Vec<_>>().join("\n")
    }

    fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("kind".into(), Value::String(self.kind.clone()));
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_str(out: &mut impl Write, s: &str) -> anyhow::Result<()> {
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Writes one record; `text` renders the plain form.
pub fn record(out: &mut impl Write, format: Format, rec: &Record, text: impl Fn(&Record) -> String) -> anyhow::Result<()> {
    match format {
        Format::Text => writeln!(out, "{}", text(rec))?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rec.to_json())?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(rec.fields.iter().map(|(k, _)| k.as_str()))?;
            w.write_record(rec.fields.iter().map(|(_, v)| plain(v)))?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Rows and verdicts of a report. CSV puts both in one table with a
/// `section` column.
pub fn report(out: &mut impl Write, format: Format, rep: &ExperimentReport) -> anyhow::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(rep)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["section", "name", "kind", "value", "rank"])?;
            for row in &rep.rows {
                w.write_record(["row", &row.signature, &row.kind, &row.count.to_string(), &row.rank.to_string()])?;
            }
            for v in &rep.verdicts {
                let status = serde_json::to_value(v.status)?;
                w.write_record(["verdict", &v.claim, &plain(&status), &v.detail, ""])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "{}", rep.experiment)?;
            for row in &rep.rows {
                write!(out, "  #{} {} {}={}", row.rank, row.signature, row.kind, row.count)?;
                for (k, v) in &row.extra {
                    write!(out, " {k}={v}")?;
                }
                writeln!(out)?;
            }
            for v in &rep.verdicts {
                let status = serde_json::to_value(v.status)?;
                writeln!(out, "  [{}] {}: {}", plain(&status), v.claim, v.detail)?;
            }
            if let Some(ms) = rep.duration_ms {
                writeln!(out, "  {ms} ms")?;
            }
        }
    }
    Ok(())
}
