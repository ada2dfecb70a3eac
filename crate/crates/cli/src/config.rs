//! Optional TOML config. Keys match long flag names (with `-` or `_`); a
//! `[command]` table overrides top-level keys, and flags override both.

use std::str::FromStr;

use crate::error::{read_file, CliError};

#[derive(Debug, Default, Clone)]
pub struct Config {
    table: toml::Table,
}

impl Config {
    pub fn load(path: Option<&str>) -> Result<Config, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = read_file(path)?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        Ok(Config { table })
    }

    pub fn parse(text: &str) -> Result<Config, CliError> {
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Config { table })
    }

    fn lookup(&self, command: &str, key: &str) -> Option<&toml::Value> {
        let alt = key.replace('-', "_");
        let find = |t: &'_ toml::Table| t.get(key).or_else(|| t.get(&alt)).is_some();
        let section = self.table.get(command).and_then(|v| v.as_table());
        let t = section.filter(|t| find(t)).unwrap_or(&self.table);
        t.get(key).or_else(|| t.get(&alt))
    }

    /// Config value for `key` converted through its text form.
    pub fn get<T: FromStr>(&self, command: &str, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        let Some(v) = self.lookup(command, key) else {
            return Ok(None);
        };
        let text = match v {
            toml::Value::String(s) => s.clone(),
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Boolean(b) => b.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|x| match x {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            other => {
                return Err(CliError::Usage(format!(
                    "config key {key}: unsupported value {other}"
                )))
            }
        };
        text.parse()
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
    }

    /// Flag value, else config value.
    pub fn pick<T: FromStr>(
        &self,
        flag: Option<T>,
        command: &str,
        key: &str,
    ) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(command, key),
        }
    }

    /// Like [`Config::pick`] with a default.
    pub fn or<T: FromStr>(
        &self,
        flag: Option<T>,
        command: &str,
        key: &str,
        default: T,
    ) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.pick(flag, command, key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(
        &self,
        flag: Option<T>,
        command: &str,
        key: &str,
    ) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, command, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required option --{key}")))
    }
}
