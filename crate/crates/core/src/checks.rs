//! The fifteen reproducibility checks and their selection.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::{Normalized, PathProblem};
use crate::project::{extension, is_readme, Category, FileRecord};
use crate::scanner::ProjectScan;

macro_rules! check_names {
    ($($variant:ident => $name:literal, $label:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum CheckName {
            $($variant,)*
        }

        impl CheckName {
            pub const ALL: &'static [CheckName] = &[$(CheckName::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckName::$variant => $name,)*
                }
            }

            /// Progress line shown while the check runs.
            pub fn label(self) -> &'static str {
                match self {
                    $(CheckName::$variant => $label,)*
                }
            }
        }

        impl FromStr for CheckName {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(CheckName::$variant),)*
                    other => Err(Error::UnknownCheck(other.to_string())),
                }
            }
        }
    };
}

check_names! {
    HasTidyMedia => "has_tidy_media", "Checking for no media files outside inst/";
    HasTidyImages => "has_tidy_images", "Checking for no image files outside inst/";
    HasTidyCode => "has_tidy_code", "Checking for no R scripts outside R/";
    HasTidyRawData => "has_tidy_raw_data", "Checking for no raw data outside data-raw/";
    HasTidyData => "has_tidy_data", "Checking for no derived data outside data/";
    HasTidyScripts => "has_tidy_scripts", "Checking for no R Markdown files outside vignettes/";
    HasReadme => "has_readme", "Checking for a README at the project root";
    HasNoLint => "has_no_lint", "Checking for code style";
    HasProjRoot => "has_proj_root", "Checking for a project root marker";
    HasNoNestedProjRoot => "has_no_nested_proj_root", "Checking for no nested project roots";
    HasOnlyUsedFiles => "has_only_used_files", "Checking for only files used by code";
    HasClearBuildChain => "has_clear_build_chain", "Checking for a clear build chain";
    HasNoAbsolutePaths => "has_no_absolute_paths", "Checking for no absolute paths";
    HasOnlyPortablePaths => "has_only_portable_paths", "Checking for only portable paths";
    HasNoRandomness => "has_no_randomness", "Checking for no unseeded randomness";
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn list_checks() -> &'static [CheckName] {
    CheckName::ALL
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "matcher", content = "value")]
pub enum CheckSelection {
    All,
    Contains(String),
    StartsWith(String),
    EndsWith(String),
    Exact(Vec<CheckName>),
}

impl CheckSelection {
    /// Parses a comma-separated list of check names.
    pub fn exact_from_list(list: &str) -> Result<CheckSelection> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(CheckName::from_str)
            .collect::<Result<Vec<_>>>()
            .map(CheckSelection::Exact)
    }

    pub fn matches(&self, name: CheckName) -> bool {
        let s = name.as_str();
        match self {
            CheckSelection::All => true,
            CheckSelection::Contains(x) => s.contains(x.as_str()),
            CheckSelection::StartsWith(x) => s.starts_with(x.as_str()),
            CheckSelection::EndsWith(x) => s.ends_with(x.as_str()),
            CheckSelection::Exact(names) => names.contains(&name),
        }
    }

    /// Matching checks in canonical order.
    pub fn select(&self) -> Vec<CheckName> {
        CheckName::ALL
            .iter()
            .copied()
            .filter(|&n| self.matches(n))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckState {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: CheckName,
    pub state: CheckState,
    pub problem: String,
    pub solution: String,
    pub help: String,
    pub evidence: Vec<String>,
}

fn help_for(name: CheckName) -> String {
    format!("docs/checks.md#{}", name.as_str())
}

impl CheckOutcome {
    fn pass(name: CheckName) -> Self {
        CheckOutcome {
            name,
            state: CheckState::Pass,
            problem: String::new(),
            solution: String::new(),
            help: help_for(name),
            evidence: Vec::new(),
        }
    }

    /// Passes when `evidence` is empty, fails with it otherwise.
    fn verdict(name: CheckName, evidence: Vec<String>, problem: &str, solution: &str) -> Self {
        if evidence.is_empty() {
            return Self::pass(name);
        }
        CheckOutcome {
            name,
            state: CheckState::Fail,
            problem: problem.to_string(),
            solution: solution.to_string(),
            help: help_for(name),
            evidence,
        }
    }

    fn error(name: CheckName, problem: String) -> Self {
        CheckOutcome {
            name,
            state: CheckState::Error,
            problem,
            solution: "make sure every R script is readable UTF-8 text".to_string(),
            help: help_for(name),
            evidence: Vec::new(),
        }
    }
}

fn outside<'a>(
    files: &'a [FileRecord],
    dir: &'a str,
    pred: impl Fn(&FileRecord) -> bool + 'a,
) -> Vec<String> {
    files
        .iter()
        .filter(|f| pred(f) && !f.is_under(dir))
        .map(|f| f.rel_path.clone())
        .collect()
}

fn numeric_prefix(path: &str) -> Option<u64> {
    let name = path.rsplit('/').next().unwrap_or(path);
    let digits: String = name.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits.parse().ok()
}

fn depends_on_scripts(name: CheckName) -> bool {
    matches!(
        name,
        CheckName::HasNoLint
            | CheckName::HasOnlyUsedFiles
            | CheckName::HasClearBuildChain
            | CheckName::HasNoAbsolutePaths
            | CheckName::HasOnlyPortablePaths
            | CheckName::HasNoRandomness
    )
}

/// Files that code is expected to leave alone: scripts, project files,
/// documentation at the conventional names.
fn exempt_from_usage(f: &FileRecord, scan: &ProjectScan) -> bool {
    if matches!(f.category, Category::Script | Category::ProjectMetadata) {
        return true;
    }
    let name = f.file_name();
    let stem = name.split('.').next().unwrap_or(name);
    if is_readme(name) || stem.eq_ignore_ascii_case("license") || stem.eq_ignore_ascii_case("citation")
    {
        return true;
    }
    // knitted output of a sibling R Markdown document
    if f.category == Category::RenderedDoc {
        let full_stem = name.rsplit_once('.').map(|(s, _)| s).unwrap_or(name);
        return scan.project.files.iter().any(|o| {
            extension(&o.rel_path) == "rmd"
                && o.dir() == f.dir()
                && o.file_name().rsplit_once('.').map(|(s, _)| s) == Some(full_stem)
        });
    }
    false
}

pub fn run_check(name: CheckName, scan: &ProjectScan) -> CheckOutcome {
    use CheckName::*;

    if depends_on_scripts(name) && !scan.failures.is_empty() {
        let list = scan
            .failures
            .iter()
            .map(|f| format!("{} ({})", f.script, f.message))
            .collect::<Vec<_>>()
            .join(", ");
        return CheckOutcome::error(name, format!("Could not scan scripts: {list}"));
    }

    let files = &scan.project.files;
    match name {
        HasTidyMedia => CheckOutcome::verdict(
            name,
            outside(files, "inst", |f| f.category == Category::Media),
            "Media files found outside inst/",
            "move media files into inst/other",
        ),
        HasTidyImages => CheckOutcome::verdict(
            name,
            outside(files, "inst", |f| f.category == Category::Image),
            "Image files found outside inst/",
            "move image files into inst/image",
        ),
        HasTidyCode => CheckOutcome::verdict(
            name,
            outside(files, "R", |f| f.ext == "r"),
            "R scripts found outside R/",
            "move R scripts into R/",
        ),
        HasTidyRawData => CheckOutcome::verdict(
            name,
            outside(files, "data-raw", |f| f.category == Category::RawData),
            "Raw data files found outside data-raw/",
            "move raw data files into data-raw/",
        ),
        HasTidyData => CheckOutcome::verdict(
            name,
            outside(files, "data", |f| f.category == Category::DerivedData),
            "Derived data files found outside data/",
            "move derived data files into data/",
        ),
        HasTidyScripts => CheckOutcome::verdict(
            name,
            outside(files, "vignettes", |f| f.ext == "rmd"),
            "R Markdown files found outside vignettes/",
            "move R Markdown files into vignettes/",
        ),
        HasReadme => {
            let found = files.iter().any(|f| f.at_root() && is_readme(&f.rel_path));
            let evidence = if found {
                vec![]
            } else {
                vec![".".to_string()]
            };
            CheckOutcome::verdict(
                name,
                evidence,
                "No README file found at the project root",
                "add a README file at the project root",
            )
        }
        HasNoLint => {
            let evidence = scan
                .facts
                .iter()
                .flat_map(|f| {
                    f.lint_findings
                        .iter()
                        .map(move |l| format!("{}:{}: {}", f.script, l.line, l.rule.id()))
                })
                .collect();
            CheckOutcome::verdict(
                name,
                evidence,
                "Code does not follow the style rules",
                "fix the listed style issues (line width, <- assignment, spacing)",
            )
        }
        HasProjRoot => {
            let found = scan.project.root_markers.iter().any(|m| !m.contains('/'));
            let evidence = if found {
                vec![]
            } else {
                vec![".".to_string()]
            };
            CheckOutcome::verdict(
                name,
                evidence,
                "No project marker (.Rproj, .here or .git) at the project root",
                "create an RStudio project file (.Rproj) at the project root",
            )
        }
        HasNoNestedProjRoot => CheckOutcome::verdict(
            name,
            scan.project
                .root_markers
                .iter()
                .filter(|m| m.contains('/'))
                .cloned()
                .collect(),
            "Project markers found below the project root",
            "remove nested project files or split the project in two",
        ),
        HasOnlyUsedFiles => {
            let targets: BTreeSet<String> = scan
                .facts
                .iter()
                .flat_map(|f| {
                    f.path_refs
                        .iter()
                        .filter_map(|r| match r.target(&f.base_dir) {
                            Some(Normalized::Inside(t)) => Some(t),
                            _ => None,
                        })
                })
                .collect();
            let used = |f: &FileRecord| {
                targets.contains(&f.rel_path)
                    || targets
                        .iter()
                        .any(|t| t == "." || f.is_under(t))
            };
            let evidence = files
                .iter()
                .filter(|f| !exempt_from_usage(f, scan) && !used(f))
                .map(|f| f.rel_path.clone())
                .collect();
            CheckOutcome::verdict(
                name,
                evidence,
                "Files present that are not read or written by any script",
                "remove unused files or reference them from code",
            )
        }
        HasClearBuildChain => {
            let cyclic = scan.graph.cyclic_scripts();
            if !cyclic.is_empty() {
                return CheckOutcome::verdict(
                    name,
                    cyclic,
                    "Scripts read each other's outputs in a cycle",
                    "break the cycle so every file is written before it is read",
                );
            }
            let scripts: Vec<&str> = scan.graph.scripts().collect();
            let unique = scan
                .graph
                .topological_order()
                .is_some_and(|(_, unique)| unique);
            let prefixes: Option<BTreeSet<u64>> =
                scripts.iter().map(|s| numeric_prefix(s)).collect();
            let numbered = prefixes.is_some_and(|p| p.len() == scripts.len());
            let evidence = if scripts.len() <= 1 || unique || numbered {
                vec![]
            } else {
                scripts.iter().map(|s| s.to_string()).collect()
            };
            CheckOutcome::verdict(
                name,
                evidence,
                "The order in which scripts should run is unclear",
                "prefix script names with their run order (01_clean.R, 02_model.R, ...)",
            )
        }
        HasNoAbsolutePaths => CheckOutcome::verdict(
            name,
            path_evidence(scan, PathProblem::Absolute),
            "Absolute paths found in code",
            "use a project-relative path",
        ),
        HasOnlyPortablePaths => CheckOutcome::verdict(
            name,
            path_evidence(scan, PathProblem::OutsideProject),
            "Paths leading outside the project directory found in code",
            "move the files into the project and use a project-relative path",
        ),
        HasNoRandomness => {
            let evidence = scan
                .facts
                .iter()
                .filter_map(|f| {
                    let first_random = f.randomness_calls.iter().min_by_key(|c| c.line)?;
                    let seeded = f
                        .seed_calls
                        .iter()
                        .min()
                        .is_some_and(|&s| s < first_random.line);
                    (!seeded).then(|| {
                        format!("{}:{}: {}", f.script, first_random.line, first_random.func)
                    })
                })
                .collect();
            CheckOutcome::verdict(
                name,
                evidence,
                "Randomness used without a preceding call to set.seed()",
                "call set.seed() before the first use of randomness",
            )
        }
    }
}

fn path_evidence(scan: &ProjectScan, problem: PathProblem) -> Vec<String> {
    scan.facts
        .iter()
        .flat_map(|f| {
            f.path_refs.iter().filter_map(move |r| {
                (r.problem(&f.base_dir) == Some(problem)).then(|| {
                    format!(
                        "{}:{}: {}",
                        f.script,
                        r.line,
                        r.literal.as_deref().unwrap_or_default()
                    )
                })
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub project: String,
    pub outcomes: Vec<CheckOutcome>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.errored == 0
    }
}

pub fn run_checks(scan: &ProjectScan, selection: &CheckSelection) -> CheckReport {
    let outcomes: Vec<CheckOutcome> = selection
        .select()
        .into_iter()
        .map(|n| run_check(n, scan))
        .collect();
    let mut summary = Summary::default();
    for o in &outcomes {
        match o.state {
            CheckState::Pass => summary.passed += 1,
            CheckState::Fail => summary.failed += 1,
            CheckState::Error => summary.errored += 1,
        }
    }
    let warnings = scan
        .project
        .warnings
        .iter()
        .map(|w| format!("{}: {}", w.path, w.message))
        .chain(scan.facts.iter().flat_map(|f| {
            f.warnings.iter().map(move |w| format!("{}: {}", f.script, w))
        }))
        .collect();
    CheckReport {
        project: scan.project.name(),
        outcomes,
        summary,
        warnings,
    }
}

/// Scans the project at `root` and runs the selected checks.
pub fn proj_check(root: &Path, selection: &CheckSelection) -> Result<CheckReport> {
    let scan = ProjectScan::load(root)?;
    Ok(run_checks(&scan, selection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn project(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (path, content) in files {
            let p = dir.path().join(path);
            fs::create_dir_all(p.parent().unwrap()).unwrap();
            fs::write(p, content).unwrap();
        }
        dir
    }

    fn outcome(dir: &tempfile::TempDir, name: CheckName) -> CheckOutcome {
        let scan = ProjectScan::load(dir.path()).unwrap();
        run_check(name, &scan)
    }

    #[test]
    fn fifteen_in_order() {
        let names: Vec<_> = list_checks().iter().map(|c| c.as_str()).collect();
        assert_eq!(
            names,
            [
                "has_tidy_media",
                "has_tidy_images",
                "has_tidy_code",
                "has_tidy_raw_data",
                "has_tidy_data",
                "has_tidy_scripts",
                "has_readme",
                "has_no_lint",
                "has_proj_root",
                "has_no_nested_proj_root",
                "has_only_used_files",
                "has_clear_build_chain",
                "has_no_absolute_paths",
                "has_only_portable_paths",
                "has_no_randomness",
            ]
        );
        for n in list_checks() {
            assert_eq!(n.as_str().parse::<CheckName>().unwrap(), *n);
        }
    }

    #[test]
    fn selections() {
        assert_eq!(
            CheckSelection::Contains("paths".into()).select(),
            [CheckName::HasNoAbsolutePaths, CheckName::HasOnlyPortablePaths]
        );
        assert_eq!(CheckSelection::StartsWith("has_tidy".into()).select().len(), 6);
        assert_eq!(CheckSelection::EndsWith("root".into()).select().len(), 2);
        assert_eq!(
            CheckSelection::exact_from_list("has_readme").unwrap().select(),
            [CheckName::HasReadme]
        );
        let err = CheckSelection::exact_from_list("has_readme,nope").unwrap_err();
        assert_eq!(err.to_string(), "unknown check: nope");
        assert!(CheckSelection::Contains("PATHS".into()).select().is_empty());
    }

    #[test]
    fn readme_missing() {
        let dir = project(&[("notes.txt", "")]);
        let o = outcome(&dir, CheckName::HasReadme);
        assert_eq!(o.state, CheckState::Fail);
        assert_eq!(o.solution, "add a README file at the project root");
        let dir = project(&[("readme.MD", "")]);
        assert_eq!(outcome(&dir, CheckName::HasReadme).state, CheckState::Pass);
        let dir = project(&[("docs/README.md", "")]);
        assert_eq!(outcome(&dir, CheckName::HasReadme).state, CheckState::Fail);
    }

    #[test]
    fn randomness_needs_earlier_seed() {
        let dir = project(&[("a.R", "rnorm(10)\n")]);
        let o = outcome(&dir, CheckName::HasNoRandomness);
        assert_eq!(o.state, CheckState::Fail);
        assert_eq!(o.evidence, ["a.R:1: stats::rnorm"]);

        let dir = project(&[("a.R", "set.seed(1)\nrnorm(10)\n")]);
        assert_eq!(outcome(&dir, CheckName::HasNoRandomness).state, CheckState::Pass);

        let dir = project(&[("a.R", "rnorm(10)\nset.seed(1)\n")]);
        assert_eq!(outcome(&dir, CheckName::HasNoRandomness).state, CheckState::Fail);

        // a seed in another file does not count
        let dir = project(&[("a.R", "set.seed(1)\n"), ("b.R", "runif(1)\n")]);
        assert_eq!(outcome(&dir, CheckName::HasNoRandomness).state, CheckState::Fail);
    }

    #[test]
    fn tidy_family() {
        let dir = project(&[
            ("R/a.R", ""),
            ("b.R", ""),
            ("data-raw/x.csv", ""),
            ("y.csv", ""),
            ("data/z.rds", ""),
            ("inst/image/p.png", ""),
            ("inst/figs/q.png", ""),
            ("r.png", ""),
            ("clip.mp4", ""),
            ("vignettes/v.Rmd", ""),
            ("w.Rmd", ""),
        ]);
        let scan = ProjectScan::load(dir.path()).unwrap();
        let ev = |n| run_check(n, &scan).evidence;
        assert_eq!(ev(CheckName::HasTidyCode), ["b.R"]);
        assert_eq!(ev(CheckName::HasTidyRawData), ["y.csv"]);
        assert!(ev(CheckName::HasTidyData).is_empty());
        assert_eq!(ev(CheckName::HasTidyImages), ["r.png"]);
        assert_eq!(ev(CheckName::HasTidyMedia), ["clip.mp4"]);
        assert_eq!(ev(CheckName::HasTidyScripts), ["w.Rmd"]);
    }

    #[test]
    fn project_markers() {
        let dir = project(&[("p.Rproj", ""), ("sub/q.Rproj", "")]);
        assert_eq!(outcome(&dir, CheckName::HasProjRoot).state, CheckState::Pass);
        let o = outcome(&dir, CheckName::HasNoNestedProjRoot);
        assert_eq!(o.evidence, ["sub/q.Rproj"]);
        let dir = project(&[("sub/q.Rproj", "")]);
        assert_eq!(outcome(&dir, CheckName::HasProjRoot).state, CheckState::Fail);
    }

    #[test]
    fn used_files() {
        let dir = project(&[
            ("R/a.R", "x <- read.csv('data-raw/in.csv')\nwrite.csv(x, 'out/x.csv')\nlist.files('inst/extdata')\n"),
            ("data-raw/in.csv", ""),
            ("data-raw/stray.csv", ""),
            ("out/x.csv", ""),
            ("inst/extdata/a.txt", ""),
            ("report.Rmd", ""),
            ("report.html", ""),
            ("old.html", ""),
            ("README.md", ""),
            ("LICENSE.md", ""),
            ("p.Rproj", ""),
        ]);
        let o = outcome(&dir, CheckName::HasOnlyUsedFiles);
        assert_eq!(o.evidence, ["data-raw/stray.csv", "old.html"]);
    }

    #[test]
    fn build_chain() {
        let dir = project(&[("a.R", "saveRDS(1, 'x.rds')\n"), ("b.R", "readRDS('x.rds')\n")]);
        assert_eq!(outcome(&dir, CheckName::HasClearBuildChain).state, CheckState::Pass);

        let dir = project(&[("a.R", "1\n"), ("b.R", "2\n")]);
        assert_eq!(outcome(&dir, CheckName::HasClearBuildChain).state, CheckState::Fail);

        let dir = project(&[("01_a.R", "1\n"), ("02_b.R", "2\n")]);
        assert_eq!(outcome(&dir, CheckName::HasClearBuildChain).state, CheckState::Pass);

        let dir = project(&[("1_a.R", "1\n"), ("01_b.R", "2\n")]);
        assert_eq!(outcome(&dir, CheckName::HasClearBuildChain).state, CheckState::Fail);

        let dir = project(&[
            ("01_a.R", "readRDS('y.rds')\nsaveRDS(1, 'x.rds')\n"),
            ("02_b.R", "readRDS('x.rds')\nsaveRDS(1, 'y.rds')\n"),
        ]);
        let o = outcome(&dir, CheckName::HasClearBuildChain);
        assert_eq!(o.state, CheckState::Fail);
        assert_eq!(o.evidence, ["01_a.R", "02_b.R"]);
    }

    #[test]
    fn path_checks() {
        let dir = project(&[(
            "a.R",
            "read.csv('mice.csv')\nread.csv('~/Desktop/my_data.csv')\nread.csv('../../x.csv')\n",
        )]);
        let abs = outcome(&dir, CheckName::HasNoAbsolutePaths);
        assert_eq!(abs.evidence, ["a.R:2: ~/Desktop/my_data.csv"]);
        let port = outcome(&dir, CheckName::HasOnlyPortablePaths);
        assert_eq!(port.evidence, ["a.R:3: ../../x.csv"]);

        let dir = project(&[("a.R", "read.csv('mice.csv')\n")]);
        assert_eq!(outcome(&dir, CheckName::HasNoAbsolutePaths).state, CheckState::Pass);
    }

    #[test]
    fn binary_script_errors_dependent_checks() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.R"), [0u8, 159, 146, 150]).unwrap();
        let report = proj_check(dir.path(), &CheckSelection::All).unwrap();
        assert_eq!(report.summary.errored, 6);
        let lint = &report.outcomes[7];
        assert_eq!(lint.state, CheckState::Error);
        assert!(lint.problem.contains("bad.R"));
    }

    #[test]
    fn empty_project() {
        let dir = tempfile::tempdir().unwrap();
        let report = proj_check(dir.path(), &CheckSelection::All).unwrap();
        let state = |n: CheckName| report.outcomes.iter().find(|o| o.name == n).unwrap().state;
        assert_eq!(state(CheckName::HasReadme), CheckState::Fail);
        assert_eq!(state(CheckName::HasProjRoot), CheckState::Fail);
        assert_eq!(state(CheckName::HasNoAbsolutePaths), CheckState::Pass);
        assert_eq!(state(CheckName::HasOnlyPortablePaths), CheckState::Pass);
        assert_eq!(report.summary.failed, 2);
        assert_eq!(report.summary.passed, 13);
    }
}
