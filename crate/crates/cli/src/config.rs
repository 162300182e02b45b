//! Flat `key = value` configuration files. Keys are the long flag names;
//! `#` starts a comment. Command-line flags always win over file values.

use std::collections::HashMap;
use std::path::Path;

use wuyang_core::Error;

#[derive(Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!(
                    "{}:{}: expected `key = value`, got '{raw}'",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidInput(format!("config key '{key}' has unparsable value '{raw}'"))
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_flat_key_values_with_comments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "# run settings").unwrap();
        writeln!(f, "delta1-mhz = 30").unwrap();
        writeln!(f, "band = excited  # trailing comment").unwrap();
        drop(f);
        let cfg = FileConfig::load(&path).unwrap();
        assert_eq!(cfg.get::<f64>("delta1-mhz").unwrap(), Some(30.0));
        assert_eq!(cfg.get::<String>("band").unwrap().as_deref(), Some("excited"));
        assert_eq!(cfg.get::<f64>("missing").unwrap(), None);
    }

    #[test]
    fn rejects_malformed_lines_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        std::fs::write(&path, "delta1-mhz 30\n").unwrap();
        assert!(FileConfig::load(&path).is_err());
        std::fs::write(&path, "delta1-mhz = abc\n").unwrap();
        let cfg = FileConfig::load(&path).unwrap();
        assert!(cfg.get::<f64>("delta1-mhz").is_err());
    }
}
