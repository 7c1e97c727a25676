//! `key = value` reports.

use std::fmt::Write as _;

/// How much of a report to print.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// Headline values only.
    #[default]
    Summary,
    /// Everything, including per-vertex detail.
    Full,
}

/// Numbers are written with 17 significant digits so that they read back
/// to the same binary64 value.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String, bool)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn text(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string(), false));
        self
    }

    pub fn num(&mut self, key: &str, value: f64) -> &mut Self {
        self.text(key, num(value))
    }

    pub fn opt(&mut self, key: &str, value: Option<f64>) -> &mut Self {
        self.text(key, value.map_or_else(|| "none".into(), num))
    }

    /// A line printed only in full format.
    pub fn detail(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string(), true));
        self
    }

    pub fn warn(&mut self, msg: &str) -> &mut Self {
        self.text("warning", msg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.0 == key).map(|e| e.1.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        for (k, v, full) in &self.entries {
            if !full || format == Format::Full {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        s
    }
}
