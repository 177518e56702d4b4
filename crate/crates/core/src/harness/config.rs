//! Flat INI-style experiment configuration.
//!
//! Sections name experiments; keys are `key = value` pairs. `#` or `;`
//! start full-line comments. Keys appearing before any section header
//! are global (`seed`, `out_dir`, `tol`). Errors carry line and column.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub global: Section,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    pub line: usize,
    entries: BTreeMap<String, (String, usize)>,
    order: Vec<String>,
}

impl Section {
    fn new(name: &str, line: usize) -> Self {
        Section {
            name: name.to_string(),
            line,
            entries: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    fn insert(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if self.entries.contains_key(key) {
            return Err(Error::Config {
                line,
                column: 1,
                message: format!("duplicate key '{key}'"),
            });
        }
        self.entries
            .insert(key.to_string(), (value.to_string(), line));
        self.order.push(key.to_string());
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Keys and values in file order, for the CSV config echo.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.order
            .iter()
            .map(|k| (k.clone(), self.entries[k].0.clone()))
            .collect()
    }

    pub fn reject_unknown_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in &self.order {
            if !allowed.contains(&key.as_str()) {
                let line = self.entries[key].1;
                return Err(Error::Config {
                    line,
                    column: 1,
                    message: format!(
                        "unknown key '{key}' in section [{}] (allowed: {})",
                        self.name,
                        allowed.join(", ")
                    ),
                });
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn parse_err(&self, key: &str, line: usize, what: &str) -> Error {
        Error::Config {
            line,
            column: 1,
            message: format!("key '{key}' {what}"),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.raw(key).map(|(v, _)| v).unwrap_or(default)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.raw(key).map(|(v, _)| v).ok_or_else(|| Error::Config {
            line: self.line,
            column: 1,
            message: format!("section [{}] is missing required key '{key}'", self.name),
        })
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse::<f64>()
                .map_err(|_| self.parse_err(key, line, &format!("is not a number: '{v}'"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse::<usize>()
                .map_err(|_| self.parse_err(key, line, &format!("is not a nonnegative integer: '{v}'"))),
        }
    }

    pub fn u64_opt(&self, key: &str) -> Result<Option<u64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| self.parse_err(key, line, &format!("is not an integer: '{v}'"))),
        }
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| self.parse_err(key, line, &format!("is not a number: '{v}'"))),
        }
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some((v, line)) => v
                .split(',')
                .map(|part| {
                    part.trim().parse::<f64>().map_err(|_| {
                        self.parse_err(key, line, &format!("has a non-numeric entry: '{part}'"))
                    })
                })
                .collect(),
        }
    }
}

/// Experiment names the harness knows.
pub const EXPERIMENT_NAMES: [&str; 8] = [
    "multiplier-curve",
    "invert-l2",
    "invert-pointwise",
    "isometry",
    "surjectivity",
    "lemma5",
    "holo-change",
    "path-agreement",
];

pub fn parse(text: &str) -> Result<ConfigFile> {
    let mut global = Section::new("", 0);
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or(Error::Config {
                line: line_no,
                column: raw_line.len(),
                message: "section header is missing ']'".into(),
            })?;
            let name = name.trim();
            if !EXPERIMENT_NAMES.contains(&name) {
                return Err(Error::Config {
                    line: line_no,
                    column: 2,
                    message: format!(
                        "unknown experiment '{name}' (known: {})",
                        EXPERIMENT_NAMES.join(", ")
                    ),
                });
            }
            sections.push(Section::new(name, line_no));
            continue;
        }
        let eq = line.find('=').ok_or(Error::Config {
            line: line_no,
            column: 1,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if key.is_empty() {
            return Err(Error::Config {
                line: line_no,
                column: 1,
                message: "empty key".into(),
            });
        }
        let target = sections.last_mut().unwrap_or(&mut global);
        target.insert(key, value, line_no)?;
    }
    global.reject_unknown_keys(&["seed", "out_dir", "tol"])?;
    if sections.is_empty() {
        return Err(Error::Config {
            line: text.lines().count().max(1),
            column: 1,
            message: "config declares no experiment sections".into(),
        });
    }
    Ok(ConfigFile { global, sections })
}
