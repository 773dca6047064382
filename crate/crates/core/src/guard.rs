//! Pre-execution gate for scripts: refuses code that changes the working
//! directory or reads and writes outside the project.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, IoContext, Result};
use crate::log::{append_events, NewEvent};
use crate::paths::{Normalized, PathProblem, MSG_ABSOLUTE, MSG_OUTSIDE, REMEDY};
use crate::scanner::{scan_script, Mechanism, ScriptFacts};

pub const MSG_SETWD: &str = "setwd() is likely to break reproducibility. Use here::here() instead.";
pub const DEFAULT_RUNNER: &str = "Rscript {script}";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardEntry {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardVerdict {
    pub script: String,
    pub blocking: Vec<GuardEntry>,
    pub warnings: Vec<GuardEntry>,
}

impl GuardVerdict {
    pub fn refuses(&self) -> bool {
        !self.blocking.is_empty()
    }
}

fn entry(line: usize, message: impl Into<String>) -> GuardEntry {
    GuardEntry {
        line,
        message: message.into(),
    }
}

/// Blocking entries and warnings for already scanned facts.
pub fn verdict(facts: &ScriptFacts) -> GuardVerdict {
    let mut blocking: Vec<GuardEntry> = facts.chdir_calls.iter().map(|&l| entry(l, MSG_SETWD)).collect();
    let mut warnings = Vec::new();
    for r in &facts.path_refs {
        match (&r.literal, r.problem(&facts.base_dir)) {
            (None, _) => warnings.push(entry(
                r.line,
                format!("unresolved path expression `{}` in {}", r.expr, r.func),
            )),
            (Some(_), Some(PathProblem::Absolute)) => blocking.push(entry(r.line, MSG_ABSOLUTE)),
            (Some(_), Some(PathProblem::OutsideProject)) => blocking.push(entry(r.line, MSG_OUTSIDE)),
            (Some(lit), Some(PathProblem::NonPortable)) => {
                warnings.push(entry(r.line, format!("non-portable path `{lit}`: {REMEDY}")))
            }
            (Some(_), None) => {}
        }
    }
    blocking.sort_by_key(|e| e.line);
    warnings.sort_by_key(|e| e.line);
    GuardVerdict {
        script: facts.script.clone(),
        blocking,
        warnings,
    }
}

/// Package loads and path references, in line order.
pub fn log_events(facts: &ScriptFacts, root: &Path) -> Vec<NewEvent> {
    let mut events: Vec<(usize, NewEvent)> = facts
        .packages
        .iter()
        .filter_map(|p| {
            let func = match p.mechanism {
                Mechanism::Library => "base::library",
                Mechanism::Require => "base::require",
                Mechanism::NamespaceColon => return None,
            };
            Some((
                p.line,
                NewEvent {
                    path: format!("package:{}", p.name),
                    path_abs: String::new(),
                    func: func.to_string(),
                },
            ))
        })
        .collect();
    for r in &facts.path_refs {
        let path_abs = match r.target(&facts.base_dir) {
            Some(Normalized::Inside(t)) if root.join(&t).exists() => {
                root.join(&t).display().to_string()
            }
            _ => String::new(),
        };
        events.push((
            r.line,
            NewEvent {
                path: r.literal.clone().unwrap_or_else(|| r.expr.clone()),
                path_abs,
                func: r.func.clone(),
            },
        ));
    }
    events.sort_by_key(|(line, _)| *line);
    events.into_iter().map(|(_, e)| e).collect()
}

/// Canonical root and the script's root-relative path.
fn locate(script: &Path, root: &Path) -> Result<(PathBuf, String)> {
    let root = fs::canonicalize(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;
    let abs = fs::canonicalize(script).context(|| format!("reading {}", script.display()))?;
    let rel = abs
        .strip_prefix(&root)
        .map_err(|_| Error::OutsideProject(script.display().to_string()))?;
    let rel = rel
        .components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/");
    Ok((root, rel))
}

/// Scans `script`, records its package loads and path references in the
/// project log and returns the verdict.
pub fn guard_scan(script: &Path, root: &Path) -> Result<GuardVerdict> {
    let (root, rel) = locate(script, root)?;
    let config = Config::load(&root)?;
    let bytes = fs::read(root.join(&rel)).context(|| format!("reading {rel}"))?;
    let facts = scan_script(&rel, &bytes, &config.functions)?;
    append_events(&root, &log_events(&facts, &root))?;
    Ok(verdict(&facts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum GuardRun {
    Refused { verdict: GuardVerdict },
    Ran { verdict: GuardVerdict, status: i32 },
}

/// Splits the runner template on whitespace and substitutes `{script}`;
/// the script is appended when the template does not mention it.
pub fn runner_argv(template: &str, script: &str) -> Result<Vec<String>> {
    let mut argv: Vec<String> = template
        .split_whitespace()
        .map(|t| t.replace("{script}", script))
        .collect();
    if argv.is_empty() {
        return Err(Error::RunnerTemplate(template.to_string()));
    }
    if !template.contains("{script}") {
        argv.push(script.to_string());
    }
    Ok(argv)
}

/// Runs the script through `template` from the project root unless the
/// guard refuses it.
pub fn guard_run(script: &Path, root: &Path, template: &str) -> Result<GuardRun> {
    let verdict = guard_scan(script, root)?;
    if verdict.refuses() {
        return Ok(GuardRun::Refused { verdict });
    }
    let (root, rel) = locate(script, root)?;
    let script_abs = root.join(&rel).display().to_string();
    let argv = runner_argv(template, &script_abs)?;
    let status = Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(&root)
        .status()
        .map_err(|e| match e.kind() {
            ErrorKind::NotFound => Error::RunnerNotFound(argv[0].clone()),
            _ => Error::Io {
                context: format!("running {}", argv[0]),
                source: e,
            },
        })?;
    Ok(GuardRun::Ran {
        verdict,
        status: status.code().unwrap_or(1),
    })
}
