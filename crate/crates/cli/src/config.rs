//! `--config FILE` support.
//!
//! The file holds `key = value` lines (`#` starts a comment). Each line
//! becomes a `--key=value` token inserted right after the subcommand, so
//! any flag given on the command line, which comes later, overrides it.
//! `key = true` turns into a bare `--key`; `key = false` is dropped, and
//! so is every key that the command line sets itself (list-valued flags
//! would otherwise accumulate instead of being replaced).

use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Parses the contents of a config file into command-line tokens.
pub fn config_tokens(text: &str) -> Result<Vec<String>, CliError> {
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(CliError::usage(format!(
                "config line {}: empty key",
                lineno + 1
            )));
        }
        if key == "config" {
            return Err(CliError::usage(
                "config files cannot include other config files",
            ));
        }
        match value {
            "true" => tokens.push(format!("--{key}")),
            "false" => {}
            _ => tokens.push(format!("--{key}={value}")),
        }
    }
    Ok(tokens)
}

fn flag_key(token: &str) -> Option<&str> {
    let key = token.strip_prefix("--")?;
    Some(key.split_once('=').map_or(key, |(k, _)| k))
}

fn config_path(args: &[String]) -> Option<&str> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            args.get(i + 1).map(String::as_str)
        } else {
            a.strip_prefix("--config=")
        }
    })
}

/// Returns `args` with the tokens of the `--config` file (if any) spliced
/// in after the subcommand.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    if args.len() < 2 || args[1].starts_with('-') {
        return Ok(args);
    }
    let text = fs::read_to_string(Path::new(path))
        .map_err(|e| CliError::usage(format!("cannot read config {path}: {e}")))?;
    let explicit: Vec<&str> = args[2..].iter().filter_map(|a| flag_key(a)).collect();
    let tokens: Vec<String> = config_tokens(&text)?
        .into_iter()
        .filter(|t| flag_key(t).is_some_and(|k| !explicit.contains(&k)))
        .collect();
    let mut out = Vec::with_capacity(args.len() + tokens.len());
    out.extend_from_slice(&args[..2]);
    out.extend(tokens);
    out.extend_from_slice(&args[2..]);
    Ok(out)
}
