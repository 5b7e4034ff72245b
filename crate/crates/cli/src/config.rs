use std::path::{Path, PathBuf};

use anchorlight_crawler::CrawlConfig;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CONFIG_FILE: &str = "anchorlight.toml";
pub const DEFAULT_INDEX: &str = "anchorlight.db";

/// Settings read from `anchorlight.toml`. Command-line flags override them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppConfig {
    pub index: PathBuf,
    pub preset: String,
    pub crawl: CrawlConfig,
    pub serve: ServeConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServeConfig {
    pub bind: String,
    pub port: u16,
    /// Directory with the browser UI bundle; a placeholder page is served without it.
    pub static_dir: Option<PathBuf>,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            index: PathBuf::from(DEFAULT_INDEX),
            preset: anchorlight_core::query::DEFAULT_PRESET.to_string(),
            crawl: CrawlConfig::default(),
            serve: ServeConfig::default(),
        }
    }
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            bind: "127.0.0.1".to_string(),
            port: 8080,
            static_dir: None,
        }
    }
}

impl AppConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Reads `path`, or the default file in the working directory when
    /// `path` is `None` and that file exists.
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let (path, required) = match path {
            Some(p) => (p.to_path_buf(), true),
            None => (PathBuf::from(DEFAULT_CONFIG_FILE), false),
        };
        match std::fs::read_to_string(&path) {
            Ok(text) => Self::parse(&text).map_err(|e| format!("{}: {e}", path.display())),
            Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(format!("{}: {e}", path.display())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(AppConfig::parse("").unwrap(), AppConfig::default());
    }

    #[test]
    fn sections_override_defaults() {
        let c = AppConfig::parse(
            r#"
index = "ix.db"
preset = "content"

[crawl]
seeds = ["http://example.test/"]
max_depth = 3
per_host_delay = 0

[serve]
port = 9000
"#,
        )
        .unwrap();
        assert_eq!(c.index, PathBuf::from("ix.db"));
        assert_eq!(c.crawl.max_depth, 3);
        assert_eq!(c.crawl.fetch_timeout, 10.0);
        assert_eq!(c.serve.port, 9000);
        assert_eq!(c.serve.bind, "127.0.0.1");
    }

    #[test]
    fn unknown_keys_are_errors() {
        assert!(AppConfig::parse("indx = \"a\"").is_err());
        assert!(AppConfig::parse("[crawl]\ndepth = 2").is_err());
    }

    #[test]
    fn missing_default_file_is_fine_but_explicit_path_is_not() {
        let dir = tempfile::tempdir().unwrap();
        assert!(AppConfig::load(Some(&dir.path().join("nope.toml"))).is_err());
    }
}
