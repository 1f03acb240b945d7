//! Layered settings: command-line flags, then QC_* environment variables, then a flat
//! key=value file.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Flag,
    Env,
    File,
    Default,
}

#[derive(Debug, Default)]
pub struct Layers {
    file: HashMap<String, String>,
    /// every resolved setting, for the manifest
    pub resolved: BTreeMap<String, (String, Source)>,
}

impl Layers {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let mut file = HashMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p).map_err(|e| format!("config {}: {e}", p.display()))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config {}:{}: expected key=value", p.display(), n + 1))?;
                file.insert(k.trim().replace('-', "_"), v.trim().to_string());
            }
        }
        Ok(Layers { file, resolved: BTreeMap::new() })
    }

    pub fn get(&mut self, key: &str, flag: Option<&str>) -> Option<String> {
        let env_key = format!("QC_{}", key.to_uppercase());
        let hit = flag
            .map(|v| (v.to_string(), Source::Flag))
            .or_else(|| std::env::var(&env_key).ok().map(|v| (v, Source::Env)))
            .or_else(|| self.file.get(key).map(|v| (v.clone(), Source::File)));
        if let Some((v, s)) = &hit {
            self.resolved.insert(key.to_string(), (v.clone(), *s));
        }
        hit.map(|(v, _)| v)
    }

    pub fn get_or(&mut self, key: &str, flag: Option<&str>, default: &str) -> String {
        match self.get(key, flag) {
            Some(v) => v,
            None => {
                self.resolved.insert(key.to_string(), (default.to_string(), Source::Default));
                default.to_string()
            }
        }
    }

    pub fn int(&mut self, key: &str, flag: Option<&str>) -> Result<Option<i128>, String> {
        self.get(key, flag).map(|v| parse_int(&v).map_err(|e| format!("--{}: {e}", key.replace('_', "-")))).transpose()
    }

    pub fn require_int(&mut self, key: &str, flag: Option<&str>) -> Result<i128, String> {
        self.int(key, flag)?.ok_or_else(|| format!("--{} is required", key.replace('_', "-")))
    }
}

/// Exact integer parsing with optional scientific notation: "12", "-3", "1e8",
/// "2.5e3", "1_000". A value that is not an integer is rejected.
pub fn parse_int(s: &str) -> Result<i128, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    let bad = || format!("'{s}' is not an integer");
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t.as_str(), 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac.is_empty() || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let shift = exp - frac.len() as i32;
    let mut v: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    if shift >= 0 {
        for _ in 0..shift {
            v = v.checked_mul(10).ok_or_else(|| format!("'{s}' is out of range"))?;
        }
    } else {
        let d = 10i128.checked_pow((-shift) as u32).ok_or_else(bad)?;
        if v % d != 0 {
            return Err(bad());
        }
        v /= d;
    }
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        assert_eq!(parse_int("1e8"), Ok(100_000_000));
        assert_eq!(parse_int("2.5e3"), Ok(2500));
        assert_eq!(parse_int("-12"), Ok(-12));
        assert_eq!(parse_int("1_000"), Ok(1000));
        assert_eq!(parse_int("10E2"), Ok(1000));
        assert!(parse_int("1.5").is_err());
        assert!(parse_int("1e-2").is_err());
        assert!(parse_int("abc").is_err());
        assert!(parse_int("").is_err());
        assert!(parse_int("1e40").is_err());
    }
}
