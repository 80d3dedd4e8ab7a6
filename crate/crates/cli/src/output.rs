use std::fmt::Write as _;

use serde_json::Value;

/// A report in both renderings: rows for CSV, a JSON document otherwise.
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}

impl Report {
    pub fn csv(&self, config: &Value) -> String {
        let mut out = String::new();
        writeln!(out, "# config={config}").unwrap();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for r in &self.rows {
            let r: Vec<String> = r.iter().map(|s| field(s)).collect();
            writeln!(out, "{}", r.join(",")).unwrap();
        }
        out
    }

    pub fn json(&self, config: &Value) -> String {
        let mut doc = serde_json::Map::new();
        doc.insert("config".into(), config.clone());
        match &self.json {
            Value::Object(m) => doc.extend(m.clone()),
            other => {
                doc.insert("result".into(), other.clone());
            }
        }
        serde_json::to_string_pretty(&Value::Object(doc)).unwrap() + "\n"
    }
}
