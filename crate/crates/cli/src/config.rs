//! Merging of flags, an optional config file and preset defaults.
//!
//! The config file is either TOML or a CSV written by this tool, whose
//! `# key=value` preamble is read back as configuration. Flags win.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
        let values = if first.starts_with("# ") {
            text.lines()
                .take_while(|l| l.starts_with('#'))
                .filter_map(|l| l[1..].trim().split_once('='))
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .collect()
        } else {
            let table: toml::Table = text
                .parse()
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            table
                .into_iter()
                .map(|(k, v)| Ok((k.replace('_', "-"), flatten(&v)?)))
                .collect::<Result<_, CliError>>()?
        };
        Ok(FileConfig { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Rejects keys the command does not understand.
    pub fn check_keys(&self, known: &[&str]) -> Result<(), CliError> {
        // keys recorded in CSV preambles that carry no input
        const INFORMATIONAL: &[&str] = &["command", "columns"];
        for k in self.values.keys() {
            if !known.contains(&k.as_str()) && !INFORMATIONAL.contains(&k.as_str()) {
                return Err(CliError::Config(format!("unknown config key `{k}`")));
            }
        }
        Ok(())
    }
}

fn flatten(v: &toml::Value) -> Result<String, CliError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(a) => a.iter().map(flatten).collect::<Result<Vec<_>, _>>()?.join(","),
        other => return Err(CliError::Config(format!("unsupported config value {other}"))),
    })
}

/// Looks a value up in flag → file order.
pub struct Resolver<'a> {
    pub file: &'a FileConfig,
}

impl Resolver<'_> {
    pub fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .raw(key)
            .map(|s| s.parse::<T>().map_err(|e| CliError::Config(format!("config `{key}={s}`: {e}"))))
            .transpose()
    }

    pub fn get_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .raw(key)
            .map(|s| T::from_str(s, true).map_err(|e| CliError::Config(format!("config `{key}={s}`: {e}"))))
            .transpose()
    }

    pub fn get_list<T>(&self, flag: Option<Vec<T>>, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .raw(key)
            .map(|s| {
                s.split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<T>()
                            .map_err(|e| CliError::Config(format!("config `{key}={s}`: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get::<bool>(None, key)?.unwrap_or(false))
    }
}
