use serde_json::Value;
use toric_ding::rat::{self, Rat};
use toric_ding::DhMeasure;

use crate::CliError;

pub fn exact(q: &Rat) -> Value {
    Value::String(rat::format_rat(q))
}

pub fn exact_vec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(exact).collect())
}

/// Float rounded to `precision` decimals; `null` if not finite.
pub fn float(q: &Rat, precision: usize) -> Value {
    float_f64(rat::to_f64(q), precision)
}

pub fn float_f64(x: f64, precision: usize) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.precision$}").parse().expect("formatted float");
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

pub fn float_vec(v: &[Rat], precision: usize) -> Value {
    Value::Array(v.iter().map(|q| float(q, precision)).collect())
}

pub fn float_text(q: &Rat, precision: usize) -> String {
    format!("{:.precision$}", rat::to_f64(q))
}

pub fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

/// `quantity,exact,float` table.
pub fn quantity_csv(rows: &[(String, Rat)], precision: usize) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["quantity", "exact", "float"]).map_err(CliError::io)?;
    for (name, q) in rows {
        w.write_record([name.as_str(), &rat::format_rat(q), &float_text(q, precision)]).map_err(CliError::io)?;
    }
    finish(w)
}

pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(CliError::io)?;
    for r in rows {
        w.write_record(r).map_err(CliError::io)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Long-format plot series.
#[derive(Default)]
pub struct PlotData {
    rows: Vec<(String, f64, f64)>,
}

impl PlotData {
    pub fn push(&mut self, series: &str, x: f64, y: f64) {
        self.rows.push((series.to_string(), x, y));
    }

    /// Density sampled on each piece plus one row per atom.
    pub fn add_measure(&mut self, prefix: &str, m: &DhMeasure, samples: usize) {
        for atom in &m.atoms {
            self.push(&format!("{prefix}atom"), rat::to_f64(&atom.location), rat::to_f64(&atom.mass));
        }
        for piece in &m.pieces {
            let steps = samples.max(2) as i64;
            for i in 0..=steps {
                let t = rat::rat(i, steps);
                let x = &piece.lo + (&piece.hi - &piece.lo) * t;
                self.push(&format!("{prefix}density"), rat::to_f64(&x), rat::to_f64(&piece.density.eval(&x)));
            }
        }
    }

    pub fn to_csv(&self, precision: usize) -> Result<String, CliError> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(s, x, y)| vec![s.clone(), format!("{x:.precision$}"), format!("{y:.precision$}")])
            .collect();
        table_csv(&["series", "x", "y"], &rows)
    }
}
