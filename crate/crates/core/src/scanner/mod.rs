//! Static extraction of reproducibility facts from R and R Markdown sources.

pub mod lexer;
pub mod lint;
pub mod markdown;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Config, FnClass, FunctionTable};
use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildGraph};
use crate::paths::{
    classify_path, is_remote, normalize_within, path_kind, Normalized, PathKind, PathProblem,
};
use crate::project::{scan_project, ProjectDir};

use lexer::{tokenize, Token, TokenKind};
pub use lint::{LintFinding, LintRule};
pub use markdown::{extract_code, CodeLine, Extracted, ScriptKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    Library,
    Require,
    NamespaceColon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageFact {
    pub name: String,
    pub mechanism: Mechanism,
    pub line: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Io {
    Read,
    Write,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRef {
    /// The path when it is a literal (or a `here()`/`file.path()` of
    /// literals); `None` for computed expressions.
    pub literal: Option<String>,
    /// Source text of the argument.
    pub expr: String,
    pub func: String,
    pub line: usize,
    pub io: Io,
    /// Resolved from the project root (`here::here`) rather than from the
    /// script's working directory.
    #[serde(default)]
    pub root_anchored: bool,
}

impl PathRef {
    fn base<'a>(&self, script_base: &'a str) -> &'a str {
        if self.root_anchored {
            ""
        } else {
            script_base
        }
    }

    /// Root-relative target, if the literal is relative.
    pub fn target(&self, script_base: &str) -> Option<Normalized> {
        let lit = self.literal.as_deref()?;
        if lit.is_empty() || is_remote(lit) || path_kind(lit).ok()? == PathKind::Absolute {
            return None;
        }
        Some(normalize_within(lit, self.base(script_base)))
    }

    pub fn problem(&self, script_base: &str) -> Option<PathProblem> {
        let lit = self.literal.as_deref()?;
        classify_path(lit, self.base(script_base)).ok().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Call {
    pub func: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFacts {
    pub script: String,
    pub kind: ScriptKind,
    /// Working directory relative paths resolve from: the root for `.R`,
    /// the document's own directory for `.Rmd`.
    pub base_dir: String,
    pub line_count: usize,
    pub packages: Vec<PackageFact>,
    pub path_refs: Vec<PathRef>,
    pub randomness_calls: Vec<Call>,
    pub seed_calls: Vec<usize>,
    pub chdir_calls: Vec<usize>,
    pub lint_findings: Vec<LintFinding>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ScriptFacts {
    pub fn package_names(&self) -> impl Iterator<Item = &str> {
        self.packages.iter().map(|p| p.name.as_str())
    }
}

fn script_base(rel_path: &str, kind: ScriptKind) -> String {
    match kind {
        ScriptKind::RScript => String::new(),
        ScriptKind::RMarkdown => rel_path
            .rsplit_once('/')
            .map(|(d, _)| d.to_string())
            .unwrap_or_default(),
    }
}

/// Decodes a script's bytes; NUL bytes or invalid UTF-8 mean binary.
pub fn decode(script: &str, content: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(content).map_err(|_| Error::NotText(script.to_string()))?;
    if text.contains('\0') {
        return Err(Error::NotText(script.to_string()));
    }
    Ok(text.strip_prefix('\u{feff}').unwrap_or(text).to_string())
}

/// Argument of a call: token range `[start, end)` and optional name.
struct Arg {
    name: Option<String>,
    start: usize,
    end: usize,
}

/// Splits the arguments of the call whose `(` is at `open`; the last
/// argument's `end` is the index of the closing paren.
fn call_args(tokens: &[Token], open: usize) -> Vec<Arg> {
    let mut args = Vec::new();
    let mut depth = 0usize;
    let mut start = open + 1;
    let mut i = open + 1;
    let finish = |start: usize, end: usize, args: &mut Vec<Arg>| {
        if start >= end {
            return;
        }
        let name = match (&tokens[start].kind, tokens.get(start + 1)) {
            (TokenKind::Ident(n) | TokenKind::Str(n), Some(eq)) if eq.is_op("=") && end > start + 1 => {
                Some(n.clone())
            }
            _ => None,
        };
        args.push(Arg { name, start, end });
    };
    while i < tokens.len() {
        let t = &tokens[i];
        if t.is_op("(") || t.is_op("[") || t.is_op("{") {
            depth += 1;
        } else if t.is_op(")") || t.is_op("]") || t.is_op("}") {
            if depth == 0 {
                finish(start, i, &mut args);
                return args;
            }
            depth -= 1;
        } else if t.is_op(",") && depth == 0 {
            finish(start, i, &mut args);
            start = i + 1;
        }
        i += 1;
    }
    finish(start, tokens.len(), &mut args);
    args
}

fn value_range(arg: &Arg) -> (usize, usize) {
    if arg.name.is_some() {
        (arg.start + 2, arg.end)
    } else {
        (arg.start, arg.end)
    }
}

/// Name of the callee at `i` as `(package, name, index of "(")`.
fn callee_at(tokens: &[Token], i: usize) -> Option<(Option<&str>, &str, usize)> {
    let first = tokens[i].ident()?;
    if i > 0 {
        let prev = &tokens[i - 1];
        if prev.is_op("$") || prev.is_op("@") || prev.is_op("::") || prev.is_op(":::") {
            return None;
        }
    }
    let next = tokens.get(i + 1)?;
    if next.is_op("(") {
        return Some((None, first, i + 1));
    }
    if next.is_op("::") || next.is_op(":::") {
        let name = tokens.get(i + 2)?.ident()?;
        if tokens.get(i + 3)?.is_op("(") {
            return Some((Some(first), name, i + 3));
        }
    }
    None
}

/// Resolves a path argument: a single string literal, or `here()` /
/// `file.path()` over literals.
fn path_value(tokens: &[Token], start: usize, end: usize) -> Option<(String, bool)> {
    if end == start + 1 {
        return tokens[start].string().map(|s| (s.to_string(), false));
    }
    let (pkg, name, open) = callee_at(tokens, start)?;
    let anchored = match (pkg, name) {
        (None | Some("here"), "here") => true,
        (None | Some("base"), "file.path") => false,
        _ => return None,
    };
    let args = call_args(tokens, open);
    let close = args.last().map(|a| a.end).unwrap_or(open + 1);
    if close + 1 != end || args.is_empty() {
        return None;
    }
    let parts = args
        .iter()
        .map(|a| {
            (a.name.is_none() && a.end == a.start + 1)
                .then(|| tokens[a.start].string())
                .flatten()
        })
        .collect::<Option<Vec<_>>>()?;
    Some((parts.join("/"), anchored))
}

fn arg_for<'a>(args: &'a [Arg], position: Option<usize>, param: Option<&str>) -> Option<&'a Arg> {
    if let Some(param) = param {
        if let Some(a) = args.iter().find(|a| a.name.as_deref() == Some(param)) {
            return Some(a);
        }
    }
    let position = position?;
    args.iter().filter(|a| a.name.is_none()).nth(position - 1)
}

fn is_true(tokens: &[Token], start: usize, end: usize) -> bool {
    end == start + 1 && matches!(tokens[start].ident(), Some("TRUE" | "T"))
}

/// Extracts the facts of one script. `script` is its project-relative path.
pub fn scan_script(script: &str, content: &[u8], table: &FunctionTable) -> Result<ScriptFacts> {
    let text = decode(script, content)?;
    let kind = ScriptKind::from_path(script).unwrap_or(ScriptKind::RScript);
    let Extracted { lines, warnings } = extract_code(&text, kind);

    let joined = lines
        .iter()
        .map(|l| l.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let tokens = tokenize(&joined);
    let line_of = |t: &Token| lines[t.line].line;

    let mut facts = ScriptFacts {
        script: script.to_string(),
        kind,
        base_dir: script_base(script, kind),
        line_count: text.lines().count(),
        packages: Vec::new(),
        path_refs: Vec::new(),
        randomness_calls: Vec::new(),
        seed_calls: Vec::new(),
        chdir_calls: Vec::new(),
        lint_findings: lint::lint(&lines, &joined, &tokens),
        warnings,
    };

    let add_package = |facts: &mut ScriptFacts, name: &str, mechanism, line| {
        if !facts
            .packages
            .iter()
            .any(|p| p.name == name && p.mechanism == mechanism)
        {
            facts.packages.push(PackageFact {
                name: name.to_string(),
                mechanism,
                line,
            });
        }
    };

    for i in 0..tokens.len() {
        // pkg::name anywhere, called or not
        if let (Some(pkg), Some(sep)) = (tokens[i].ident(), tokens.get(i + 1)) {
            let qualified_prev = i > 0 && (tokens[i - 1].is_op("::") || tokens[i - 1].is_op(":::"));
            if (sep.is_op("::") || sep.is_op(":::"))
                && !qualified_prev
                && tokens.get(i + 2).is_some_and(|t| t.ident().is_some() || t.string().is_some())
            {
                add_package(&mut facts, pkg, Mechanism::NamespaceColon, line_of(&tokens[i]));
            }
        }

        let Some((pkg, name, open)) = callee_at(&tokens, i) else {
            continue;
        };
        let line = line_of(&tokens[i]);

        if matches!(pkg, None | Some("base")) && (name == "library" || name == "require") {
            let args = call_args(&tokens, open);
            let char_only = args.iter().any(|a| {
                a.name.as_deref() == Some("character.only") && {
                    let (s, e) = value_range(a);
                    is_true(&tokens, s, e)
                }
            });
            let target = arg_for(&args, Some(1), Some("package"));
            if let Some(arg) = target {
                let (s, e) = value_range(arg);
                let pkg_name = match &tokens[s].kind {
                    TokenKind::Ident(n) if e == s + 1 && !char_only => Some(n.as_str()),
                    TokenKind::Str(n) if e == s + 1 => Some(n.as_str()),
                    _ => None,
                };
                if let Some(pkg_name) = pkg_name.filter(|n| !n.is_empty()) {
                    let mech = if name == "library" {
                        Mechanism::Library
                    } else {
                        Mechanism::Require
                    };
                    add_package(&mut facts, pkg_name, mech, line);
                }
            }
            continue;
        }

        let Some(entry) = table.lookup(pkg, name) else {
            continue;
        };
        match entry.class {
            FnClass::Random => facts.randomness_calls.push(Call {
                func: entry.qualified(),
                line,
            }),
            FnClass::Seed => facts.seed_calls.push(line),
            FnClass::Chdir => facts.chdir_calls.push(line),
            FnClass::Read | FnClass::Write | FnClass::Io => {
                let args = call_args(&tokens, open);
                let Some(arg) = arg_for(&args, entry.position, entry.param.as_deref()) else {
                    continue;
                };
                let (s, e) = value_range(arg);
                if s >= e {
                    continue;
                }
                let expr = joined[tokens[s].start..tokens[e - 1].end].to_string();
                let func = entry.qualified();
                let path_ref = match path_value(&tokens, s, e) {
                    Some((literal, root_anchored)) => PathRef {
                        literal: Some(literal),
                        expr,
                        func,
                        line,
                        io: match entry.class {
                            FnClass::Read => Io::Read,
                            FnClass::Write => Io::Write,
                            _ => Io::Unknown,
                        },
                        root_anchored,
                    },
                    None => PathRef {
                        literal: None,
                        expr,
                        func,
                        line,
                        io: Io::Unknown,
                        root_anchored: false,
                    },
                };
                facts.path_refs.push(path_ref);
            }
        }
    }
    Ok(facts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFailure {
    pub script: String,
    pub message: String,
}

/// Everything the checks and the analyzer need about one project.
#[derive(Debug, Clone)]
pub struct ProjectScan {
    pub project: ProjectDir,
    pub facts: Vec<ScriptFacts>,
    pub failures: Vec<ScriptFailure>,
    pub graph: BuildGraph,
    pub config: Config,
}

impl ProjectScan {
    /// Scans `root` with the configuration found for it.
    pub fn load(root: &Path) -> Result<ProjectScan> {
        let project = scan_project(root)?;
        let config = Config::load(&project.root)?;
        Ok(Self::from_project(project, config))
    }

    pub fn from_project(project: ProjectDir, config: Config) -> ProjectScan {
        let mut facts = Vec::new();
        let mut failures = Vec::new();
        for file in project.scripts() {
            let path = project.root.join(&file.rel_path);
            let result = fs::read(&path)
                .map_err(|e| Error::Io {
                    context: format!("reading {}", file.rel_path),
                    source: e,
                })
                .and_then(|bytes| scan_script(&file.rel_path, &bytes, &config.functions));
            match result {
                Ok(f) => facts.push(f),
                Err(e) => failures.push(ScriptFailure {
                    script: file.rel_path.clone(),
                    message: e.to_string(),
                }),
            }
        }
        let graph = build_graph(&facts);
        ProjectScan {
            project,
            facts,
            failures,
            graph,
            config,
        }
    }
}
