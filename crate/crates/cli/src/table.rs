use std::fmt::Write as _;

use serde_json::{json, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format!("{x:e}"),
            Value::Int(i) => i.to_string(),
            Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(x) if x.is_finite() => json!(x),
            Value::Num(_) => Json::Null,
            Value::Int(i) => json!(i),
            Value::Text(s) => json!(s),
            Value::Bool(b) => json!(b),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Int(i as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

/// A dataset with a header row; column names carry units in brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Option<Json>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new(), summary: None }
    }

    /// Long format: one named quantity per row.
    pub fn quantities() -> Self {
        Table::new(["quantity", "symbol", "unit", "value"])
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn quantity(&mut self, name: &str, symbol: &str, unit: &str, value: impl Into<Value>) {
        self.push(vec![name.into(), symbol.into(), unit.into(), value.into()]);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric cell in column `col` of the row whose first cell is `key`.
    pub fn get(&self, key: &str, col: &str) -> Option<f64> {
        let c = self.column(col)?;
        self.rows.iter().find(|r| matches!(&r[0], Value::Text(s) if s == key))?[c].as_f64()
    }

    pub fn values(&self, col: &str) -> Option<Vec<f64>> {
        let c = self.column(col)?;
        self.rows.iter().map(|r| r[c].as_f64()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Json> = self.rows.iter().map(|r| Json::Array(r.iter().map(Value::json).collect())).collect();
        let mut doc = json!({ "columns": self.columns, "rows": rows });
        if let Some(summary) = &self.summary {
            doc["summary"] = summary.clone();
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("table is valid JSON");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_numbers() {
        let mut t = Table::quantities();
        t.quantity("speed", "U", "m/s", 1e-4);
        t.quantity("odd, name", "x", "-", 0.1 + 0.2);
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("quantity,symbol,unit,value"));
        assert_eq!(lines.next(), Some("speed,U,m/s,1e-4"));
        let last = lines.next().unwrap();
        assert!(last.starts_with("\"odd, name\""));
        let v: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(v, 0.1 + 0.2);
        assert_eq!(t.get("speed", "value"), Some(1e-4));
    }

    #[test]
    fn json_has_columns_and_nulls() {
        let mut t = Table::new(["x [m]", "ok"]);
        t.push(vec![f64::NAN.into(), true.into()]);
        let doc: Json = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(doc["columns"][0], "x [m]");
        assert!(doc["rows"][0][0].is_null());
    }
}
