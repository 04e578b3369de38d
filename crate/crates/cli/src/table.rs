//! Column-ordered tables and their CSV / JSON encodings.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use sixstate_core::keyregion::SweepRow;

pub const SWEEP_COLUMNS: [&str; 5] = ["c", "d", "i_ab", "i_ae", "delta"];

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => format!("{x:.16e}"),
            Field::Int(n) => n.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
            Field::Missing => String::new(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Num(x) => s.serialize_f64(*x),
            Field::Int(n) => s.serialize_u64(*n),
            Field::Bool(b) => s.serialize_bool(*b),
            Field::Text(t) => s.serialize_str(t),
            Field::Missing => s.serialize_none(),
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<Option<f64>> for Field {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Field::Missing, Field::Num)
    }
}

impl From<u64> for Field {
    fn from(n: u64) -> Self {
        Field::Int(n)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::Int(n as u64)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Bool(b)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

struct JsonRow<'a>(&'a [&'static str], &'a [Field]);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Single-row table from `(column, value)` pairs.
    pub fn record(fields: Vec<(&'static str, Field)>) -> Self {
        let (columns, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        Self {
            columns,
            rows: vec![row],
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn from_sweep(rows: &[SweepRow]) -> Self {
        let mut t = Table::new(&SWEEP_COLUMNS);
        for r in rows {
            t.push(vec![
                r.c.into(),
                r.d.into(),
                r.i_ab.into(),
                r.i_ae.into(),
                r.delta.into(),
            ]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// JSON array, one object per line, keys in column order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str("  ");
            out.push_str(
                &serde_json::to_string(&JsonRow(&self.columns, row)).expect("finite fields"),
            );
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}

/// Parses CSV written by [`Table::from_sweep`] back into rows.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(SWEEP_COLUMNS) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let v = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| format!("{f:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(SweepRow {
            c: v[0],
            d: v[1],
            i_ab: v[2],
            i_ae: v[3],
            delta: v[4],
            key: v[4] > 0.0,
        });
    }
    Ok(rows)
}
