//! Plain-text `key = value` run configuration. Flags always win; the config
//! file only fills in values the command line left unset.

use std::path::Path;
use std::str::FromStr;

use semzsl::data::parse_kv_file;
use semzsl::error::{Error, Result};

#[derive(Debug, Default)]
pub struct ConfigMap {
    pairs: Vec<(String, String)>,
    path: String,
}

impl ConfigMap {
    pub fn load(path: Option<&Path>) -> Result<ConfigMap> {
        match path {
            None => Ok(ConfigMap::default()),
            Some(p) => Ok(ConfigMap {
                pairs: parse_kv_file(p)?,
                path: p.display().to_string(),
            }),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Flag value if given, else the config file's, else the default.
    pub fn pick<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.raw(key) {
            None => Ok(default),
            Some(text) => text.parse().map_err(|_| Error::Manifest {
                path: self.path.clone(),
                msg: format!("{key}: cannot parse {text:?}"),
            }),
        }
    }
}
