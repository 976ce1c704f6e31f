//! Report rows and their two renderings: aligned text and JSON lines.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Informational comparison that does not gate the exit code.
    Flag,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flag => "FLAG",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub section: String,
    pub name: String,
    pub value: Value,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Row {
    pub fn new(section: &str, name: &str, value: impl Into<Value>, unit: &str) -> Self {
        Self {
            section: section.into(),
            name: name.into(),
            value: value.into(),
            unit: unit.into(),
            paper: None,
            tolerance: None,
            status: None,
            note: String::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<Row>,
}

impl Report {
    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn add(&mut self, section: &str, name: &str, value: impl Into<Value>, unit: &str) {
        self.rows.push(Row::new(section, name, value, unit));
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.status == Some(Status::Fail))
    }

    pub fn find(&self, section: &str, name: &str) -> Option<&Row> {
        self.rows.iter().find(|r| r.section == section && r.name == name)
    }

    /// One JSON object per row.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("rows serialize"));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut start = 0;
        while start < self.rows.len() {
            let section = &self.rows[start].section;
            let end = self.rows[start..]
                .iter()
                .position(|r| &r.section != section)
                .map_or(self.rows.len(), |k| start + k);
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str(&format!("[{section}]\n"));
            out.push_str(&table(&self.rows[start..end]));
            start = end;
        }
        out
    }
}

fn table(rows: &[Row]) -> String {
    let compare = rows.iter().any(|r| r.status.is_some());
    let mut cells: Vec<Vec<String>> = vec![];
    if compare {
        cells.push(["quantity", "paper", "computed", "unit", "tolerance", "status", "note"].map(String::from).to_vec());
    }
    for r in rows {
        let mut line = vec![r.name.clone()];
        if compare {
            line.push(r.paper.as_ref().map_or(String::new(), fmt_value));
        }
        line.push(fmt_value(&r.value));
        line.push(r.unit.clone());
        if compare {
            line.push(r.tolerance.clone().unwrap_or_default());
            line.push(r.status.map_or("", Status::as_str).to_string());
        }
        line.push(r.note.clone());
        cells.push(line);
    }
    let cols = cells.iter().map(|c| c.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|k| cells.iter().map(|c| c.get(k).map_or(0, |s| s.chars().count())).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in cells {
        let mut s = String::new();
        for (k, cell) in line.iter().enumerate() {
            if k + 1 == line.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  ", w = widths[k]));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    }
    out
}

pub fn fmt_number(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.fract() == 0.0 && x.abs() < 1e9 {
        format!("{x:.0}")
    } else if (1e-3..1e6).contains(&x.abs()) {
        let s = format!("{x:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.4e}")
    }
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Null => "n/a".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), fmt_number),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.len() == 2 && items.iter().all(Value::is_number) => {
            let re = items[0].as_f64().unwrap_or(0.0);
            let im = items[1].as_f64().unwrap_or(0.0);
            format!("{}{}{}i", fmt_number(re), if im < 0.0 { "-" } else { "+" }, fmt_number(im.abs()))
        }
        other => other.to_string(),
    }
}

/// Converts a float to JSON, mapping non-finite values to null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
