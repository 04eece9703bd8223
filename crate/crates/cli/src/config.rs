//! Flat `key = value` configuration files. `#` starts a comment; blank
//! lines are ignored. Grids are written `start:stop:count` or as a comma
//! list.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim().to_string();
            if k.is_empty() {
                return Err(CliError::Usage(format!("line {}: empty key", n + 1)));
            }
            if entries.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("duplicate key `{k}`")));
            }
        }
        Ok(Self { entries })
    }

    /// Rejects any key not in `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Usage(format!("unknown config key `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn value<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::Usage(format!("`{key}`: cannot parse `{v}`"))),
        }
    }

    pub fn grid(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(v) => parse_grid(v).map_err(|e| CliError::Usage(format!("`{key}`: {e}"))),
        }
    }

    /// A grid whose every point lies in `[lo, hi]`.
    pub fn bounded_grid(
        &self,
        key: &str,
        default: &[f64],
        lo: f64,
        hi: f64,
    ) -> Result<Vec<f64>, CliError> {
        let g = self.grid(key, default)?;
        if let Some(x) = g.iter().find(|x| !(lo..=hi).contains(*x)) {
            return Err(CliError::Usage(format!(
                "`{key}`: {x} outside [{lo}, {hi}]"
            )));
        }
        Ok(g)
    }
}

/// `start:stop:count` (inclusive, evenly spaced) or `a, b, c`. The result
/// is nonempty and strictly monotone.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty grid".into());
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number `{}`", s.trim()))
    };
    let points = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err("range must be start:stop:count".into());
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad count `{}`", parts[2].trim()))?;
        match n {
            0 => return Err("empty grid".into()),
            1 => vec![a],
            _ => (0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if points.iter().any(|x| !x.is_finite()) {
        return Err("non-finite grid point".into());
    }
    let up = points.windows(2).all(|w| w[1] > w[0]);
    let down = points.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err("grid must be strictly monotone".into());
    }
    Ok(points)
}
