use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use zpk_cycles::dynamics::DEFAULT_BUDGET;

/// Settings that only affect resources and where output goes.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    pub budget: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

impl Settings {
    /// Reads `key = value` lines. `#` starts a comment.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut kv = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut s = Settings::default();
        for (k, v) in kv {
            match k.as_str() {
                "budget" => s.budget = Some(parse_budget(&v)?),
                "out_dir" | "output_dir" => s.out_dir = Some(PathBuf::from(v)),
                other => return Err(format!("unknown config key `{other}` (allowed: budget, out_dir)")),
            }
        }
        Ok(s)
    }
}

pub fn parse_budget(v: &str) -> Result<u64, String> {
    let n: u64 = v.replace('_', "").parse().map_err(|_| format!("budget `{v}` is not a positive integer"))?;
    if n == 0 {
        return Err("budget must be positive".into());
    }
    Ok(n)
}

/// Flag, then `ZPK_BUDGET`, then config file, then the library default.
pub fn resolve_budget(flag: Option<u64>, env: Option<String>, file: &Settings) -> Result<u64, String> {
    if let Some(b) = flag {
        return if b == 0 { Err("budget must be positive".into()) } else { Ok(b) };
    }
    if let Some(v) = env {
        return parse_budget(&v).map_err(|e| format!("ZPK_BUDGET: {e}"));
    }
    Ok(file.budget.unwrap_or(DEFAULT_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let s = Settings::parse("# defaults\nbudget = 1_000\nout_dir=reports # here\n").unwrap();
        assert_eq!(s.budget, Some(1000));
        assert_eq!(s.out_dir, Some(PathBuf::from("reports")));
        assert!(Settings::parse("p = 5").is_err());
        assert!(Settings::parse("budget").is_err());
    }

    #[test]
    fn budget_precedence() {
        let file = Settings { budget: Some(7), out_dir: None };
        assert_eq!(resolve_budget(Some(3), Some("5".into()), &file), Ok(3));
        assert_eq!(resolve_budget(None, Some("5".into()), &file), Ok(5));
        assert_eq!(resolve_budget(None, None, &file), Ok(7));
        assert_eq!(resolve_budget(None, None, &Settings::default()), Ok(DEFAULT_BUDGET));
        assert!(resolve_budget(None, Some("x".into()), &file).is_err());
    }
}
