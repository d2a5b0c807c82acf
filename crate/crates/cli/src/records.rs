//! Tabular output: a header plus rows of typed cells, written as CSV or as
//! newline-delimited JSON objects keyed by the header.

use std::io::Write;

use serde_json::{Map, Value};

use crate::cli::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// Undefined value: empty in CSV, `null` in JSON.
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Float)
    }
}

impl Cell {
    /// Floats use the shortest decimal that round-trips, switching to
    /// exponent notation for very small or large magnitudes.
    fn csv_text(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv_text))?;
                }
                w.flush()?;
            }
            Format::Json => {
                for row in &self.rows {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    serde_json::to_writer(&mut *out, &obj)?;
                    out.write_all(b"\n")?;
                }
                out.flush()?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec![
            "coord_1".into(),
            "c".into(),
            "rank".into(),
            "colormap".into(),
        ]);
        t.rows.push(vec![
            0.1.into(),
            Cell::Text("01".into()),
            Cell::Int(2),
            Cell::Null,
        ]);
        t.rows.push(vec![
            (1.0 / 3.0).into(),
            Cell::Text("10".into()),
            Cell::Int(1),
            0.5.into(),
        ]);
        t
    }

    #[test]
    fn csv_round_trips_floats() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "coord_1,c,rank,colormap\n0.1,01,2,\n0.3333333333333333,10,1,0.5\n"
        );
        assert_eq!(Cell::Float(7.0289e-65).csv_text(), "7.0289e-65");
        assert_eq!(Cell::Float(1.0).csv_text(), "1.0");
        let back: f64 = text
            .lines()
            .nth(2)
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn json_lines_share_the_csv_keys() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"coord_1":0.1,"c":"01","rank":2,"colormap":null}"#
        );
        let v: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
        assert_eq!(v["coord_1"].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn non_finite_floats_are_null_in_json() {
        assert_eq!(Cell::Float(f64::NAN).json(), Value::Null);
    }
}
