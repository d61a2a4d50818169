//! Library side of the `holodual` command-line tool: document parsing,
//! command dispatch and report rendering.

pub mod commands;
pub mod document;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use commands::Command;
use holodual_core::Report;

/// Version of the JSON output layout.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("command `{command}` does not apply to a {kind} document")]
    NotApplicable { command: &'static str, kind: &'static str },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub format_version: u32,
    pub command: &'static str,
    pub input_kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub report: Report,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// Parses, validates and runs one command on document text.
pub fn run(command: Command, text: &str, depth: Option<usize>, seed: u64) -> Result<Outcome, CliError> {
    let doc = document::parse(text)?;
    let subject = document::validate(&doc, depth)?;
    let out = commands::run(command, &subject, seed)?;
    Ok(Outcome {
        format_version: FORMAT_VERSION,
        command: command.name(),
        input_kind: subject.kind(),
        depth,
        seed: (command == Command::Report).then_some(seed),
        result: out.result,
        report: out.report,
    })
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(outcome).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{} ({})\n{}\n", outcome.command, outcome.input_kind, outcome.report);
            if let Some(Value::Object(m)) = &outcome.result {
                for (k, v) in m {
                    s.push_str(&format!("{k}: {v}\n"));
                }
            }
            s
        }
    }
}
