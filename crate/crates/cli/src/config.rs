//! Resolved run settings: command-line flags over a flat `key = value` file over defaults.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

use crate::failure::Failure;

/// Settings as text, keyed by flag name (`xi-prime`, `L`, ...). Every lookup records the
/// effective value, defaults included, for the output header.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Failure::validation(format!("config line {}: expected `key = value`, got {raw:?}", k + 1)))?;
            let key = normalize(key);
            if key.is_empty() {
                return Err(Failure::validation(format!("config line {}: empty key", k + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Settings { values, used: RefCell::default() })
    }

    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Overrides with every entry of `other`.
    pub fn overlay(&mut self, other: Settings) {
        self.values.extend(other.values);
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(normalize(key), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        let v = self.values.get(key).map(String::as_str);
        if let Some(v) = v {
            self.used.borrow_mut().insert(key.to_string(), v.to_string());
        }
        v
    }

    /// Value without recording it in the echo; for settings that do not affect results.
    pub fn peek(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Records a value derived from other settings (e.g. the environment).
    pub fn note(&self, key: &str, value: impl Display) {
        self.used.borrow_mut().insert(key.to_string(), value.to_string());
    }

    /// Parsed value or `default`.
    pub fn value<T: std::str::FromStr + Display>(&self, key: &str, default: T) -> Result<T, Failure>
    where
        T::Err: Display,
    {
        match self.get(key) {
            None => {
                self.note(key, &default);
                Ok(default)
            }
            Some(s) => s.parse().map_err(|e| Failure::validation(format!("{key} = {s:?}: {e}"))),
        }
    }

    pub fn optional<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Failure>
    where
        T::Err: Display,
    {
        self.get(key).map(|s| s.parse().map_err(|e| Failure::validation(format!("{key} = {s:?}: {e}")))).transpose()
    }

    pub fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T, Failure>
    where
        T::Err: Display,
    {
        self.optional(key)?.ok_or_else(|| Failure::validation(format!("missing setting `{key}`")))
    }

    /// Comma-separated list or `default`.
    pub fn list<T: std::str::FromStr + Display + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, Failure>
    where
        T::Err: Display,
    {
        match self.get(key) {
            None => {
                self.note(key, default.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                Ok(default.to_vec())
            }
            Some(s) => s
                .split(',')
                .map(|x| x.trim().parse().map_err(|e| Failure::validation(format!("{key} entry {x:?}: {e}"))))
                .collect(),
        }
    }

    /// `key = value` for every setting consulted so far, in key order.
    pub fn echo(&self) -> Vec<String> {
        self.used.borrow().iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.used.borrow().iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_are_overridden_by_flags() {
        let mut s = Settings::parse("xi = 1.5  # left\n\nxi_prime=0.2\n").unwrap();
        assert_eq!(s.get("xi-prime"), Some("0.2"));
        let mut flags = Settings::default();
        flags.set("xi", "2.5");
        s.overlay(flags);
        assert_eq!(s.value("xi", 0.0).unwrap(), 2.5);
        assert_eq!(s.value("theta", 0.3).unwrap(), 0.3);
        assert!(Settings::parse("no equals sign").is_err());
        assert!(s.value::<f64>("xi-prime", 0.0).is_ok());
        s.set("sizes", "4, 6,8");
        assert_eq!(s.list::<usize>("sizes", &[]).unwrap(), vec![4, 6, 8]);
        assert_eq!(s.echo(), vec!["sizes = 4, 6,8", "theta = 0.3", "xi = 2.5", "xi-prime = 0.2"]);
    }
}
