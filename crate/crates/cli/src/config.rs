//! Flat `key = value` run files, expanded into command-line arguments placed
//! before the user's own flags so that the flags win.

use std::ffi::OsString;
use std::path::Path;

use clap::{ArgAction, CommandFactory};

use crate::args::Cli;
use crate::error::CliError;

/// Path given by `--config`, if any, without running the full parser.
fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("config line {}: expected key = value, got '{raw}'", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::config(format!("config line {}: empty key", no + 1)));
        }
        out.push((no + 1, k.replace('_', "-"), v.to_string()));
    }
    Ok(out)
}

/// Arguments equivalent to the entries of a config file for `subcommand`.
fn config_args(subcommand: &str, entries: &[(usize, String, String)]) -> Result<Vec<OsString>, CliError> {
    let cli = Cli::command();
    let sub = cli
        .find_subcommand(subcommand)
        .ok_or_else(|| CliError::config(format!("unknown subcommand '{subcommand}'")))?;
    let mut args = Vec::new();
    for (line, key, value) in entries {
        let unknown = || CliError::config(format!("config line {line}: unknown key '{key}' for {subcommand}"));
        if matches!(key.as_str(), "config" | "help" | "version") {
            return Err(unknown());
        }
        let mut chars = key.chars();
        let short = match (chars.next(), chars.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        };
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) || (short.is_some() && a.get_short() == short))
            .or_else(|| {
                let c = short?;
                sub.get_arguments().find(|a| a.get_short().is_some_and(|s| s.eq_ignore_ascii_case(&c)))
            })
            .ok_or_else(unknown)?;
        let flag = match (arg.get_long(), arg.get_short()) {
            (Some(l), _) => format!("--{l}"),
            (None, Some(s)) => format!("-{s}"),
            (None, None) => return Err(unknown()),
        };
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => args.push(flag.into()),
                "false" => {}
                _ => return Err(CliError::config(format!("config line {line}: '{key}' takes true or false"))),
            }
        } else {
            args.push(flag.into());
            args.push(value.into());
        }
    }
    Ok(args)
}

/// `argv` with the entries of the `--config` file, if present, spliced in
/// right after the subcommand.
pub fn expand_argv(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let Some(subcommand) = argv.get(1).map(|s| s.to_string_lossy().into_owned()) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", Path::new(&path).display())))?;
    let extra = config_args(&subcommand, &parse_config(&text)?)?;
    let mut out = Vec::with_capacity(argv.len() + extra.len());
    out.extend(argv[..2].iter().cloned());
    out.extend(extra);
    out.extend(argv[2..].iter().cloned());
    Ok(out)
}
