use crate::error::Result;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

pub const TOOL: &str = "ising-series";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Mismatch,
    Partial,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Mismatch => EXIT_MISMATCH,
            Status::Partial => EXIT_PARTIAL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub value: String,
    pub source: String,
    pub flags: Vec<String>,
}

impl Row {
    pub fn series(r: usize, value: impl ToString, source: &str, flags: Vec<String>) -> Self {
        Row {
            r: Some(r),
            t: None,
            x: None,
            value: value.to_string(),
            source: source.to_string(),
            flags,
        }
    }

    pub fn thermal(t: Option<f64>, x: f64, value: f64, source: &str) -> Self {
        Row {
            r: None,
            t,
            x: Some(x),
            value: format!("{value:.15e}"),
            source: source.to_string(),
            flags: Vec::new(),
        }
    }

    pub fn scalar(value: impl ToString, source: &str, flags: Vec<String>) -> Self {
        Row {
            r: None,
            t: None,
            x: None,
            value: value.to_string(),
            source: source.to_string(),
            flags,
        }
    }
}

/// Everything one command produced. Contains no timings, so equal configs give equal bytes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    /// Work limits in force for the run.
    pub budget: BTreeMap<String, u64>,
    pub status: Status,
    pub rows: Vec<Row>,
    pub checks: BTreeMap<String, bool>,
    pub diagnostics: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, config: &impl Serialize) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            budget: BTreeMap::new(),
            status: Status::Ok,
            rows: Vec::new(),
            checks: BTreeMap::new(),
            diagnostics: serde_json::Value::Object(Default::default()),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.insert(name.to_string(), pass);
    }

    pub fn diag(&mut self, key: &str, value: impl Serialize) {
        if let serde_json::Value::Object(m) = &mut self.diagnostics {
            m.insert(key.to_string(), serde_json::to_value(value).expect("diagnostic serializes"));
        }
    }

    /// Partial beats mismatch; a failed check or an explicit mismatch gives `Mismatch`.
    pub fn finish(&mut self, mismatch: bool, partial: bool) {
        self.status = if partial {
            Status::Partial
        } else if mismatch || self.checks.values().any(|&v| !v) {
            Status::Mismatch
        } else {
            Status::Ok
        };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        #[derive(Serialize)]
        struct CsvRow<'a> {
            r: Option<usize>,
            t: Option<f64>,
            x: Option<f64>,
            value: &'a str,
            source: &'a str,
            flags: String,
        }
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(CsvRow {
                r: row.r,
                t: row.t,
                x: row.x,
                value: &row.value,
                source: &row.source,
                flags: row.flags.join(";"),
            })
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}
