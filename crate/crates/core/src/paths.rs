//! Lexical classification of path strings found in code or given on the
//! command line.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MSG_ABSOLUTE: &str = "Detected absolute paths";
pub const MSG_OUTSIDE: &str = "Detected paths that lead outside the project directory";

pub const REMEDY: &str = "use a project-relative path";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("Detected absolute paths")]
    Absolute(Vec<String>),
    #[error("Detected paths that lead outside the project directory")]
    OutsideProject(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathProblem {
    Absolute,
    OutsideProject,
    NonPortable,
}

impl PathProblem {
    pub fn as_str(self) -> &'static str {
        match self {
            PathProblem::Absolute => "absolute",
            PathProblem::OutsideProject => "outside-project",
            PathProblem::NonPortable => "non-portable",
        }
    }

    pub fn solution(self) -> &'static str {
        match self {
            PathProblem::Absolute => "Replace the absolute path: use a project-relative path",
            PathProblem::OutsideProject => {
                "Move the file into the project directory and use a project-relative path"
            }
            PathProblem::NonPortable => {
                "Use forward slashes and no `~`: use a project-relative path"
            }
        }
    }
}

impl fmt::Display for PathProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathFinding {
    pub path: String,
    pub problem: PathProblem,
    pub solution: String,
}

impl PathFinding {
    pub fn new(path: impl Into<String>, problem: PathProblem) -> Self {
        PathFinding {
            path: path.into(),
            problem,
            solution: problem.solution().to_string(),
        }
    }
}

/// Result of resolving a relative path against a project-relative base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// Root-relative path with `/` separators; `.` for the root itself.
    Inside(String),
    Escapes,
}

impl Normalized {
    pub fn inside(&self) -> Option<&str> {
        match self {
            Normalized::Inside(p) => Some(p),
            Normalized::Escapes => None,
        }
    }
}

fn has_drive_prefix(path: &str) -> bool {
    let b = path.as_bytes();
    b.len() >= 2
        && b[0].is_ascii_alphabetic()
        && b[1] == b':'
}

pub fn path_kind(path: &str) -> Result<PathKind, PathError> {
    if path.is_empty() {
        return Err(PathError::Empty);
    }
    let absolute = path.starts_with('/')
        || path.starts_with('~')
        || path.starts_with('\\')
        || has_drive_prefix(path);
    Ok(if absolute {
        PathKind::Absolute
    } else {
        PathKind::Relative
    })
}

/// `scheme://...` with a scheme of two or more characters, so `C://x` is
/// still a drive path.
pub fn is_remote(path: &str) -> bool {
    let Some((scheme, _)) = path.split_once("://") else {
        return false;
    };
    scheme.len() >= 2
        && scheme.starts_with(|c: char| c.is_ascii_alphabetic())
        && scheme
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

fn segments(path: &str) -> impl Iterator<Item = &str> {
    path.split(['/', '\\']).filter(|s| !s.is_empty())
}

/// Resolves `.` and `..` in `path` lexically against `base`, both relative
/// to the project root.
pub fn normalize_within(path: &str, base: &str) -> Normalized {
    let mut stack: Vec<&str> = Vec::new();
    for seg in segments(base).chain(segments(path)) {
        match seg {
            "." => {}
            ".." => {
                if stack.pop().is_none() {
                    return Normalized::Escapes;
                }
            }
            s => stack.push(s),
        }
    }
    if stack.is_empty() {
        Normalized::Inside(".".to_string())
    } else {
        Normalized::Inside(stack.join("/"))
    }
}

fn is_non_portable(path: &str) -> bool {
    path.contains('\\') || segments(path).any(|s| s.starts_with('~'))
}

/// Classifies one path interpreted from the project-relative directory
/// `base`. Remote URLs yield `None`.
pub fn classify_path(path: &str, base: &str) -> Result<Option<PathProblem>, PathError> {
    if is_remote(path) {
        return Ok(None);
    }
    if path_kind(path)? == PathKind::Absolute {
        return Ok(Some(PathProblem::Absolute));
    }
    if normalize_within(path, base) == Normalized::Escapes {
        return Ok(Some(PathProblem::OutsideProject));
    }
    if is_non_portable(path) {
        return Ok(Some(PathProblem::NonPortable));
    }
    Ok(None)
}

/// Findings for every problematic path, in input order.
pub fn check_path<S: AsRef<str>>(paths: &[S], base: &str) -> Result<Vec<PathFinding>, PathError> {
    let mut findings = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if let Some(problem) = classify_path(p, base)? {
            findings.push(PathFinding::new(p, problem));
        }
    }
    Ok(findings)
}

/// Like [`check_path`] but absolute and escaping paths are errors.
/// Absolute paths take precedence when both occur.
pub fn check_path_strict<S: AsRef<str>>(
    paths: &[S],
    base: &str,
) -> Result<Vec<PathFinding>, PathError> {
    let findings = check_path(paths, base)?;
    let of = |problem| -> Vec<String> {
        findings
            .iter()
            .filter(|f| f.problem == problem)
            .map(|f| f.path.clone())
            .collect()
    };
    let absolute = of(PathProblem::Absolute);
    if !absolute.is_empty() {
        return Err(PathError::Absolute(absolute));
    }
    let outside = of(PathProblem::OutsideProject);
    if !outside.is_empty() {
        return Err(PathError::OutsideProject(outside));
    }
    Ok(findings)
}
