//! Flat `key = value` configuration files. Keys are long option names
//! (`_` and `-` are interchangeable); `command` names the subcommand.
//! Options given on the command line take precedence.

use std::ffi::OsString;
use std::path::Path;

use super::CliError;

/// Global options that take a value; needed to find the subcommand token.
const GLOBAL_VALUED: [&str; 4] = ["--out", "--format", "--config", "--workers"];

#[derive(Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub entries: Vec<(String, String)>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut cfg = ConfigFile::default();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| {
            CliError::parameter(
                "config",
                format!("line {}: expected `key = value`", idx + 1),
            )
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(CliError::parameter(
                "config",
                format!("line {}: empty key", idx + 1),
            ));
        }
        if key == "command" {
            cfg.command = Some(value);
        } else if key != "config" {
            cfg.entries.push((key, value));
        }
    }
    Ok(cfg)
}

/// The `--config` path, if present.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return iter.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Index of the subcommand token, skipping global options and their values.
fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if GLOBAL_VALUED.contains(&s.as_ref()) {
            i += 2;
        } else if s.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

/// Splices configuration entries in front of the explicit options so the
/// latter win.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::io(path.to_string_lossy(), e))?;
    let cfg = parse_config(&text)?;
    let injected: Vec<OsString> = cfg
        .entries
        .iter()
        .filter_map(|(k, v)| match v.as_str() {
            "true" => Some(format!("--{k}")),
            "false" => None,
            _ => Some(format!("--{k}={v}")),
        })
        .map(OsString::from)
        .collect();
    let mut out = args;
    match subcommand_index(&out) {
        Some(i) => {
            out.splice(i + 1..i + 1, injected);
        }
        None => {
            let command = cfg.command.ok_or_else(|| {
                CliError::parameter(
                    "command",
                    "no subcommand given on the command line or in the config",
                )
            })?;
            let mut tail = vec![OsString::from(command)];
            tail.extend(injected);
            out.extend(tail);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_flat_files() {
        let cfg =
            parse_config("# run\ncommand = compare\nalpha_sq = 0.1:1:10  # grid\n\nm=2\n").unwrap();
        assert_eq!(cfg.command.as_deref(), Some("compare"));
        assert_eq!(
            cfg.entries,
            vec![
                ("alpha-sq".into(), "0.1:1:10".into()),
                ("m".into(), "2".into())
            ]
        );
        assert!(parse_config("just words").is_err());
    }

    #[test]
    fn finds_the_subcommand() {
        assert_eq!(
            subcommand_index(&os(&["x", "--out", "f.csv", "compare", "--m", "1"])),
            Some(3)
        );
        assert_eq!(
            subcommand_index(&os(&["x", "--eta-corrected", "bounds"])),
            Some(2)
        );
        assert_eq!(subcommand_index(&os(&["x", "--config", "c.txt"])), None);
    }
}
