//! Tables and their text renderings.

use serde_json::{Map, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    /// Undefined value, written as `nan` / `null`.
    Missing,
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(u64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

/// Plain decimal in `[1e-4, 1e6)`, scientific otherwise; both round-trip.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Missing => "nan".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Missing => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form findings appended after the rows.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Resolved run description written ahead of the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: &'static str,
    pub settings: Vec<(&'static str, String)>,
}

pub fn render_csv(header: &Header, table: &Table) -> String {
    let mut out = format!(
        "# cohdisc {}\n# command = {}\n",
        env!("CARGO_PKG_VERSION"),
        header.command
    );
    for (k, v) in &header.settings {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::to_text).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for note in &table.notes {
        out.push_str(&format!("# {note}\n"));
    }
    out
}

pub fn render_json(header: &Header, table: &Table) -> String {
    let mut config = Map::new();
    for (k, v) in &header.settings {
        config.insert((*k).to_string(), Value::from(v.as_str()));
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (col, cell) in table.columns.iter().zip(row) {
                obj.insert((*col).to_string(), cell.to_json());
            }
            Value::Object(obj)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), Value::from(header.command));
    doc.insert("config".into(), Value::Object(config));
    doc.insert("columns".into(), Value::from(table.columns.clone()));
    doc.insert("rows".into(), Value::Array(rows));
    doc.insert("notes".into(), Value::from(table.notes.clone()));
    let mut text =
        serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(0.24), "0.24");
        assert_eq!(format_number(1.5e-5), "1.5e-5");
        assert_eq!(format_number(2.5e7), "2.5e7");
        assert_eq!(format_number(f64::NAN), "nan");
        for &x in &[1.234_567_890_123e-9, 0.107_219_172_430_448_19, 123_456.789] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn renders_header_rows_and_notes() {
        let header = Header {
            command: "bounds",
            settings: vec![("alpha-sq", "0.24".into())],
        };
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::from(1.0), Cell::Missing]);
        t.notes.push("done".into());
        let csv = render_csv(&header, &t);
        assert!(csv.starts_with("# cohdisc "));
        assert!(csv.contains("# alpha-sq = 0.24\na,b\n1,nan\n# done\n"));
        let json: Value = serde_json::from_str(&render_json(&header, &t)).unwrap();
        assert_eq!(json["rows"][0]["b"], Value::Null);
        assert_eq!(json["config"]["alpha-sq"], "0.24");
    }
}
