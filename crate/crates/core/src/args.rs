//! Compact `name:key=value;key=value` strings used to name symbols, catalog
//! entries and automodels on the command line.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) struct SpecString {
    pub name: String,
    fields: BTreeMap<String, String>,
}

impl SpecString {
    pub fn parse(spec: &str, what: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let mut fields = BTreeMap::new();
        for part in args.split(';').filter(|s| !s.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected key=value in {what} spec, got {part:?}"))
            })?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(SpecString {
            name: name.trim().to_string(),
            fields,
        })
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.fields
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Parse(format!("'{}' needs '{key}='", self.name)))
    }

    pub fn opt(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(String::as_str)
    }

    pub fn complex(&self, key: &str) -> Result<Complex64> {
        parse_complex(self.get(key)?)
    }

    pub fn complex_or(&self, key: &str, default: Complex64) -> Result<Complex64> {
        self.opt(key).map_or(Ok(default), parse_complex)
    }

    pub fn complex_list(&self, key: &str) -> Result<Vec<Complex64>> {
        self.get(key)?.split(',').map(parse_complex).collect()
    }

    pub fn uint_or(&self, key: &str, default: u64) -> Result<u64> {
        self.opt(key).map_or(Ok(default), |v| {
            v.parse().map_err(|_| {
                Error::Parse(format!("'{key}' must be a nonnegative integer, got {v:?}"))
            })
        })
    }
}

/// Parses `1.5`, `-2`, `2+0.3i`, `1e-3i`; a Unicode minus is accepted.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let cleaned = s.trim().replace('−', "-");
    cleaned
        .parse::<Complex64>()
        .map_err(|_| Error::Parse(format!("cannot parse complex number {s:?}")))
}
