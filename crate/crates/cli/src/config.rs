//! `key = value` config files. Keys are long flag names; entries are spliced
//! into the argument list right after the subcommand path so that explicit
//! flags, which come later, override them.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::{Command, CommandFactory};

use crate::args::Cli;

pub fn read(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected `key = value`", path.display(), i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k == "config" {
            return Err(format!("{}:{}: invalid key '{k}'", path.display(), i + 1));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn knows(cmd: &Command, key: &str) -> bool {
    cmd.get_arguments().any(|a| a.get_long() == Some(key))
}

fn all_longs(cmd: &Command, key: &str) -> bool {
    knows(cmd, key) || cmd.get_subcommands().any(|c| all_longs(c, key))
}

/// Full argument list with config entries merged in.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let entries = read(Path::new(&path))?;
    let mut root = Cli::command();
    root.build();
    for (k, _) in &entries {
        if !all_longs(&root, k) {
            return Err(format!("unknown config key '{k}'"));
        }
    }

    let mut leaf = &root;
    let mut insert_at = None;
    for (i, a) in args.iter().enumerate().skip(1) {
        if let Some(sub) = leaf.find_subcommand(a) {
            leaf = sub;
            insert_at = Some(i + 1);
        }
    }
    let Some(at) = insert_at else {
        return Ok(args);
    };
    let spliced: Vec<OsString> = entries
        .iter()
        .filter(|(k, _)| knows(leaf, k))
        .map(|(k, v)| OsString::from(format!("--{k}={v}")))
        .collect();
    let mut out = args[..at].to_vec();
    out.extend(spliced);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}
