use olkit_core::Report;
use serde::Serialize;
use serde_json::Value;

use crate::format::{to_value, write_value, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonViolation<'a> {
    scope: &'a str,
    law: String,
    witness: &'a [String],
}

#[derive(Serialize)]
struct JsonReport<'a> {
    pass: bool,
    violations: Vec<JsonViolation<'a>>,
    notes: &'a [(String, String)],
}

/// One violation per line as `LAW<tab>WITNESS`, then notes as `# key: value`.
pub fn render_report(r: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => {
            let mut s = String::new();
            for v in &r.violations {
                s.push_str(&v.to_string());
                s.push('\n');
            }
            for (k, v) in &r.notes {
                s.push_str(&format!("# {k}: {v}\n"));
            }
            s
        }
        ReportFormat::Json => {
            let j = JsonReport {
                pass: r.is_pass(),
                violations: r
                    .violations
                    .iter()
                    .map(|v| JsonViolation { scope: &v.scope, law: v.law.to_string(), witness: &v.witness })
                    .collect(),
                notes: &r.notes,
            };
            let mut s = serde_json::to_string_pretty(&j).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// Several documents as one JSON array.
pub fn render_documents(docs: &[Document]) -> String {
    let mut s = String::new();
    write_value(&Value::Array(docs.iter().map(to_value).collect()), 0, &mut s);
    s.push('\n');
    s
}
