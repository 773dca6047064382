//! Command-line interface.
//!
//! Exit codes: 0 success, 1 failed checks or problematic paths, 2 usage
//! error, 3 internal error, 4 guard refusal.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analyzer::{apply_move, proj_analyze, proj_pkg_script, AnalysisReport, DEFAULT_PKG_SCRIPT};
use crate::checks::{list_checks, proj_check, CheckName, CheckReport, CheckSelection, CheckState};
use crate::error::Error;
use crate::guard::{guard_run, guard_scan, GuardRun, GuardVerdict, DEFAULT_RUNNER};
use crate::log::{log_clear, log_report, LogReport};
use crate::paths::{check_path, check_path_strict, PathError, PathFinding};
use crate::project::human_size;
use crate::sandbox::sandbox;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_REFUSED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "reprolint", version, about = "Reproducibility linter for R data-analysis projects")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Project root (defaults to the current directory).
    #[arg(long, global = true)]
    root: Option<PathBuf>,

    /// Treat warnings and logged path problems as failures.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct Selection {
    /// Run checks whose name contains this text.
    #[arg(long)]
    contains: Option<String>,
    /// Run checks whose name starts with this text.
    #[arg(long)]
    starts_with: Option<String>,
    /// Run checks whose name ends with this text.
    #[arg(long)]
    ends_with: Option<String>,
    /// Run exactly these checks (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = parse_check)]
    only: Option<Vec<CheckName>>,
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

impl Selection {
    fn into_selection(self) -> CheckSelection {
        if let Some(s) = self.contains {
            CheckSelection::Contains(s)
        } else if let Some(s) = self.starts_with {
            CheckSelection::StartsWith(s)
        } else if let Some(s) = self.ends_with {
            CheckSelection::EndsWith(s)
        } else if let Some(names) = self.only {
            CheckSelection::Exact(names)
        } else {
            CheckSelection::All
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run reproducibility checks.
    Check {
        /// Project directory.
        project: Option<PathBuf>,
        #[command(flatten)]
        selection: Selection,
    },
    /// Report packages, files, move suggestions and problematic paths.
    Analyze { project: Option<PathBuf> },
    /// Check path strings for absolute or escaping paths.
    Path {
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Write an R script installing every referenced package.
    Deps {
        project: Option<PathBuf>,
        /// Output file, relative to the project root.
        #[arg(long, short, default_value = DEFAULT_PKG_SCRIPT)]
        output: String,
    },
    /// Copy the project into a temporary directory and print its path.
    Sandbox { project: Option<PathBuf> },
    /// Gate scripts before running them.
    Guard {
        #[command(subcommand)]
        command: GuardCommand,
    },
    /// Show or clear the event log.
    Log {
        #[command(subcommand)]
        command: LogCommand,
    },
    /// Move a file into a directory, creating it.
    Mv { src: String, dstdir: String },
    /// List the available checks.
    ListChecks,
}

#[derive(Debug, Subcommand)]
enum GuardCommand {
    /// Report what would block the script.
    Scan { script: PathBuf },
    /// Run the script unless it is blocked.
    Run {
        script: PathBuf,
        /// Runner command; `{script}` is replaced by the script path.
        #[arg(long, default_value = DEFAULT_RUNNER)]
        runner: String,
    },
}

#[derive(Debug, Subcommand)]
enum LogCommand {
    Show,
    Clear,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        writeln!(self.out, "{text}")
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let mut io = Io {
        out,
        err,
        format: cli.format,
    };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(Failure::Error(Error::Path(e))) => {
            let _ = writeln!(io.err, "Error: {e}");
            EXIT_FINDINGS
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_INTERNAL
        }
        // A closed reader (e.g. `| head`) is not an error.
        Err(Failure::Write(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Write(e)) => {
            let _ = writeln!(io.err, "error: writing output: {e}");
            EXIT_INTERNAL
        }
    }
}

enum Failure {
    Error(Error),
    Write(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Write(e)
    }
}

fn cwd() -> Result<PathBuf, Error> {
    std::env::current_dir().map_err(|e| Error::Io {
        context: "reading current directory".into(),
        source: e,
    })
}

fn project_root(positional: Option<PathBuf>, global: &Option<PathBuf>) -> Result<PathBuf, Error> {
    match positional.or_else(|| global.clone()) {
        Some(p) => Ok(p),
        None => cwd(),
    }
}

/// Current directory relative to `root`, `""` when outside it.
fn base_within(root: &Path) -> Result<String, Error> {
    let cwd = std::fs::canonicalize(cwd()?).ok();
    let root = std::fs::canonicalize(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;
    Ok(cwd
        .as_deref()
        .and_then(|c| c.strip_prefix(&root).ok())
        .map(|rel| {
            rel.components()
                .map(|c| c.as_os_str().to_string_lossy())
                .collect::<Vec<_>>()
                .join("/")
        })
        .unwrap_or_default())
}

fn dispatch(cli: Cli, io: &mut Io) -> Result<i32, Failure> {
    let strict = cli.strict;
    match cli.command {
        Command::Check { project, selection } => {
            let root = project_root(project, &cli.root)?;
            let report = proj_check(&root, &selection.into_selection())?;
            match io.format {
                Format::Json => io.json(&report)?,
                Format::Human => render_check(&report, io)?,
            }
            let failed = !report.all_passed() || (strict && !report.warnings.is_empty());
            Ok(if failed { EXIT_FINDINGS } else { EXIT_OK })
        }
        Command::Analyze { project } => {
            let root = project_root(project, &cli.root)?;
            let report = proj_analyze(&root)?;
            let name = std::fs::canonicalize(&root)
                .ok()
                .and_then(|r| r.file_name().map(|n| n.to_string_lossy().into_owned()))
                .unwrap_or_default();
            match io.format {
                Format::Json => io.json(&report)?,
                Format::Human => render_analysis(&name, &report, io)?,
            }
            if strict && !report.paths_logged.is_empty() {
                let paths: Vec<&str> = report.paths_logged.iter().map(|f| f.path.as_str()).collect();
                check_path_strict(&paths, "")?;
                return Ok(EXIT_FINDINGS);
            }
            Ok(EXIT_OK)
        }
        Command::Path { paths } => {
            let root = project_root(None, &cli.root)?;
            let base = base_within(&root)?;
            let findings = check_path(&paths, &base).map_err(Error::from)?;
            match io.format {
                Format::Json => io.json(&findings)?,
                Format::Human => render_findings(&findings, io)?,
            }
            check_path_strict(&paths, &base).map_err(Error::from)?;
            Ok(if findings.is_empty() {
                EXIT_OK
            } else {
                EXIT_FINDINGS
            })
        }
        Command::Deps { project, output } => {
            let root = project_root(project, &cli.root)?;
            let path = proj_pkg_script(&root, &output)?;
            match io.format {
                Format::Json => io.json(&json!({ "script": path }))?,
                Format::Human => writeln!(io.out, "{}", path.display())?,
            }
            Ok(EXIT_OK)
        }
        Command::Sandbox { project } => {
            let root = project_root(project, &cli.root)?;
            let path = sandbox(&root)?;
            match io.format {
                Format::Json => io.json(&json!({ "path": path }))?,
                Format::Human => writeln!(io.out, "{}", path.display())?,
            }
            Ok(EXIT_OK)
        }
        Command::Guard { command } => {
            let root = project_root(None, &cli.root)?;
            match command {
                GuardCommand::Scan { script } => {
                    let verdict = guard_scan(&script, &root)?;
                    match io.format {
                        Format::Json => io.json(&verdict)?,
                        Format::Human => render_verdict(&verdict, io)?,
                    }
                    let refused = verdict.refuses() || (strict && !verdict.warnings.is_empty());
                    Ok(if refused { EXIT_REFUSED } else { EXIT_OK })
                }
                GuardCommand::Run { script, runner } => {
                    let outcome = guard_run(&script, &root, &runner)?;
                    if io.format == Format::Json {
                        io.json(&outcome)?;
                    }
                    match outcome {
                        GuardRun::Refused { verdict } => {
                            if io.format == Format::Human {
                                render_verdict(&verdict, io)?;
                            }
                            Ok(EXIT_REFUSED)
                        }
                        GuardRun::Ran { verdict, status } => {
                            if io.format == Format::Human {
                                for w in &verdict.warnings {
                                    writeln!(io.err, "Warning: {}:{}: {}", verdict.script, w.line, w.message)?;
                                }
                            }
                            Ok(status.clamp(0, 255))
                        }
                    }
                }
            }
        }
        Command::Log { command } => {
            let root = project_root(None, &cli.root)?;
            match command {
                LogCommand::Show => {
                    let report = log_report(&root)?;
                    match io.format {
                        Format::Json => io.json(&report)?,
                        Format::Human => render_log(&report, io)?,
                    }
                    Ok(EXIT_OK)
                }
                LogCommand::Clear => {
                    log_clear(&root)?;
                    match io.format {
                        Format::Json => io.json(&json!({ "cleared": true }))?,
                        Format::Human => writeln!(io.out, "Log cleared")?,
                    }
                    Ok(EXIT_OK)
                }
            }
        }
        Command::Mv { src, dstdir } => {
            let root = project_root(None, &cli.root)?;
            let dest = apply_move(&root, &src, &dstdir)?;
            match io.format {
                Format::Json => io.json(&json!({ "from": src, "to": dest }))?,
                Format::Human => writeln!(io.out, "Moved {src} -> {dest}")?,
            }
            Ok(EXIT_OK)
        }
        Command::ListChecks => {
            match io.format {
                Format::Json => io.json(&list_checks())?,
                Format::Human => {
                    for c in list_checks() {
                        writeln!(io.out, "{c}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Left-aligned text table; columns flagged in `right` are right-aligned.
fn table(headers: &[&str], rows: &[Vec<String>], right: &[bool]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| {
                if right.get(i).copied().unwrap_or(false) {
                    format!("{c:>w$}")
                } else {
                    format!("{c:<w$}")
                }
            })
            .collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = line(&mut headers.iter().copied());
    out.push('\n');
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
        out.push('\n');
    }
    out
}

fn render_check(report: &CheckReport, io: &mut Io) -> std::io::Result<()> {
    writeln!(io.out, "-- Running reproducibility checks for {}", report.project)?;
    for o in &report.outcomes {
        let mark = match o.state {
            CheckState::Pass => "v",
            CheckState::Fail => "x",
            CheckState::Error => "!",
        };
        writeln!(io.out, "{mark} {}", o.name.label())?;
        if o.state != CheckState::Pass {
            writeln!(io.out, "    Problem: {}", o.problem)?;
            writeln!(io.out, "    Solution: {}", o.solution)?;
            writeln!(io.out, "    Help: {}", o.help)?;
            for e in &o.evidence {
                writeln!(io.out, "    - {e}")?;
            }
        }
    }
    writeln!(io.out, "-- Summary of reproducibility checks")?;
    let s = &report.summary;
    writeln!(io.out, "v Reproducibility checks passed: {}", s.passed)?;
    if s.failed > 0 {
        writeln!(io.out, "x Reproducibility checks failed: {}", s.failed)?;
    }
    if s.errored > 0 {
        writeln!(io.out, "! Reproducibility checks errored: {}", s.errored)?;
    }
    for w in &report.warnings {
        writeln!(io.err, "Warning: {w}")?;
    }
    Ok(())
}

fn render_analysis(name: &str, r: &AnalysisReport, io: &mut Io) -> std::io::Result<()> {
    writeln!(io.out, "-- Analysis of reproducibility for {name}")?;
    writeln!(io.out, "--   Packages referenced in source code")?;
    let rows: Vec<Vec<String>> = r
        .packages
        .iter()
        .flat_map(|p| {
            p.used_in
                .iter()
                .map(move |f| vec![p.package.clone(), p.n.to_string(), f.clone()])
        })
        .collect();
    write!(io.out, "{}", table(&["package", "N", "used_in"], &rows, &[false, true]))?;

    writeln!(io.out, "--   Files present in directory")?;
    let rows: Vec<Vec<String>> = r
        .files
        .iter()
        .map(|f| vec![f.rel_path.clone(), f.ext.clone(), human_size(f.size), f.mime.clone()])
        .collect();
    write!(
        io.out,
        "{}",
        table(&["file", "ext", "size", "mime"], &rows, &[false, false, true])
    )?;

    writeln!(io.out, "--   Suggestions for moving files")?;
    let rows: Vec<Vec<String>> = r
        .moves
        .iter()
        .map(|m| vec![m.path_rel.clone(), m.dir_rel.clone(), m.cmd.clone()])
        .collect();
    write!(io.out, "{}", table(&["path_rel", "dir_rel", "cmd"], &rows, &[]))?;

    writeln!(io.out, "--   Problematic paths logged")?;
    if r.paths_logged.is_empty() {
        writeln!(io.out, "NULL")?;
    } else {
        render_findings(&r.paths_logged, io)?;
    }
    Ok(())
}

fn render_findings(findings: &[PathFinding], io: &mut Io) -> std::io::Result<()> {
    if findings.is_empty() {
        return writeln!(io.out, "No problematic paths");
    }
    let rows: Vec<Vec<String>> = findings
        .iter()
        .map(|f| vec![f.path.clone(), f.problem.to_string(), f.solution.clone()])
        .collect();
    write!(io.out, "{}", table(&["path", "problem", "solution"], &rows, &[]))
}

fn render_verdict(v: &GuardVerdict, io: &mut Io) -> std::io::Result<()> {
    for b in &v.blocking {
        writeln!(io.err, "Error: {}:{}: {}", v.script, b.line, b.message)?;
    }
    for w in &v.warnings {
        writeln!(io.err, "Warning: {}:{}: {}", v.script, w.line, w.message)?;
    }
    if v.refuses() {
        writeln!(io.out, "{}: refused", v.script)
    } else {
        writeln!(io.out, "{}: ok", v.script)
    }
}

fn render_log(report: &LogReport, io: &mut Io) -> std::io::Result<()> {
    for w in &report.warnings {
        writeln!(io.err, "Warning: {w}")?;
    }
    let rows: Vec<Vec<String>> = report
        .events
        .iter()
        .map(|e| vec![e.path.clone(), e.path_abs.clone(), e.func.clone(), e.timestamp.clone()])
        .collect();
    write!(
        io.out,
        "{}",
        table(&["path", "path_abs", "func", "timestamp"], &rows, &[])
    )
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        Failure::Error(Error::Path(e))
    }
}
