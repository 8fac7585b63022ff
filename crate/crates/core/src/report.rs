//! Structured-text reports.
//!
//! A report is a sequence of `key: value` lines. Keys are unique and ordered;
//! values are single-line strings. Every report type in the crate converts to
//! and from this form so emitted reports can be re-read.

use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextReport {
    fields: Vec<(String, String)>,
}

impl TextReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append or replace a field.
    pub fn set(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        let value = value.to_string().replace('\n', " ");
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub(crate) fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::parse(0, format!("report is missing field `{key}`")))
    }

    pub fn fields(&self) -> impl Iterator<Item = (&str, &str)> {
        self.fields.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut report = TextReport::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(k + 1, format!("expected `key: value`, got `{line}`")))?;
            let key = key.trim();
            if report.get(key).is_some() {
                return Err(Error::parse(k + 1, format!("duplicate field `{key}`")));
            }
            report.set(key, value.trim());
        }
        Ok(report)
    }
}

impl fmt::Display for TextReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}
