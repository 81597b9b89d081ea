//! Renders command results as JSON, CSV or aligned text.

use cgsieve::report::Table;
use serde_json::Value;

use crate::config::Format;

/// A command result: structured JSON plus a tabular view.
pub struct Output {
    pub json: Value,
    pub tables: Vec<(Option<String>, Table)>,
}

impl Output {
    pub fn new(json: Value, table: Table) -> Self {
        Output { json, tables: vec![(None, table)] }
    }

    pub fn with_section(mut self, title: &str, table: Table) -> Self {
        self.tables.push((Some(title.to_string()), table));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
            Format::Csv | Format::Table => {
                let mut out = String::new();
                for (i, (title, t)) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    if let Some(title) = title {
                        out.push_str(&format!("# {title}\n"));
                    }
                    out.push_str(&if format == Format::Csv { t.to_csv() } else { t.to_text() });
                }
                out
            }
        }
    }
}
