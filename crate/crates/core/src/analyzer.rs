//! Project report: packages, files, move suggestions and problematic paths;
//! plus the package install script and the move executor.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Origin;
use crate::error::{Error, IoContext, Result};
use crate::paths::{normalize_within, path_kind, Normalized, PathError, PathFinding, PathKind};
use crate::project::{is_readme, Category, FileRecord};
use crate::scanner::ProjectScan;

pub const DEFAULT_PKG_SCRIPT: &str = "install_proj_packages.R";

/// Target directories of move suggestions.
pub const MOVE_TARGETS: &[&str] = &["R", "data", "data-raw", "vignettes", "inst/image", "inst/other"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackageRef {
    pub package: String,
    pub n: usize,
    pub used_in: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSuggestion {
    pub path_rel: String,
    pub dir_rel: String,
    pub cmd: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub packages: Vec<PackageRef>,
    pub files: Vec<FileRecord>,
    pub moves: Vec<MoveSuggestion>,
    /// `null` in JSON when empty.
    #[serde(serialize_with = "empty_as_null", deserialize_with = "null_as_empty")]
    pub paths_logged: Vec<PathFinding>,
}

fn empty_as_null<S: Serializer>(v: &[PathFinding], s: S) -> Result<S::Ok, S::Error> {
    if v.is_empty() {
        s.serialize_none()
    } else {
        s.collect_seq(v)
    }
}

fn null_as_empty<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<PathFinding>, D::Error> {
    Ok(Option::<Vec<PathFinding>>::deserialize(d)?.unwrap_or_default())
}

/// Where a file belongs in the compendium layout; `None` for files that stay
/// where they are.
pub fn move_target(f: &FileRecord) -> Option<&'static str> {
    if f.category == Category::ProjectMetadata || is_readme(&f.rel_path) {
        return None;
    }
    let target = match f.category {
        Category::RawData => "data-raw",
        Category::DerivedData => "data",
        Category::Image => "inst/image",
        Category::Script if f.ext == "r" => "R",
        Category::Script if f.ext == "rmd" => "vignettes",
        _ => "inst/other",
    };
    // anything under inst/ is already installed content
    let settled = match target.strip_prefix("inst/") {
        Some(_) => f.is_under("inst"),
        None => f.is_under(target),
    };
    (!settled).then_some(target)
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '/' | '+' | ','));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

pub fn move_command(path_rel: &str, dir_rel: &str) -> String {
    format!("reprolint mv {} {}", shell_quote(path_rel), shell_quote(dir_rel))
}

pub fn analyze(scan: &ProjectScan) -> AnalysisReport {
    let mut by_package: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for f in &scan.facts {
        for name in f.package_names() {
            by_package.entry(name).or_default().insert(&f.script);
        }
    }
    let packages = by_package
        .into_iter()
        .map(|(package, files)| PackageRef {
            package: package.to_string(),
            n: files.len(),
            used_in: files.into_iter().map(str::to_string).collect(),
        })
        .collect();

    let moves = scan
        .project
        .files
        .iter()
        .filter_map(|f| {
            move_target(f).map(|dir| MoveSuggestion {
                path_rel: f.rel_path.clone(),
                dir_rel: dir.to_string(),
                cmd: move_command(&f.rel_path, dir),
            })
        })
        .collect();

    let paths_logged: BTreeSet<PathFinding> = scan
        .facts
        .iter()
        .flat_map(|f| {
            f.path_refs.iter().filter_map(move |r| {
                let problem = r.problem(&f.base_dir)?;
                Some(PathFinding::new(r.literal.clone()?, problem))
            })
        })
        .collect();

    AnalysisReport {
        packages,
        files: scan.project.files.clone(),
        moves,
        paths_logged: paths_logged.into_iter().collect(),
    }
}

pub fn proj_analyze(root: &Path) -> Result<AnalysisReport> {
    Ok(analyze(&ProjectScan::load(root)?))
}

/// Text of the install script for every package the project references.
pub fn pkg_script(scan: &ProjectScan) -> String {
    let names: BTreeSet<&str> = scan.facts.iter().flat_map(|f| f.package_names()).collect();
    let mut cran = Vec::new();
    let mut github = Vec::new();
    for name in names {
        match scan.config.registry.origin(name) {
            Origin::Cran => cran.push(format!("'{name}'")),
            Origin::Github(slug) => github.push(format!("remotes::install_github('{slug}')")),
            Origin::Base => {}
        }
    }
    let mut out = String::from(
        "# Run this script to install the required packages for this R project.\n\
         # Packages hosted on CRAN...\n",
    );
    if !cran.is_empty() {
        out.push_str(&format!("install.packages(c( {} ))\n", cran.join(", ")));
    }
    out.push_str("# Packages hosted on GitHub...\n");
    for line in github {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Writes the install script to `output` (relative to the project root)
/// and returns its absolute path.
pub fn proj_pkg_script(root: &Path, output: &str) -> Result<PathBuf> {
    let scan = ProjectScan::load(root)?;
    let rel = inside_project(output)?;
    let path = scan.project.root.join(rel);
    fs::write(&path, pkg_script(&scan)).context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Validates a project-relative path argument and returns it normalized.
fn inside_project(path: &str) -> Result<String> {
    if path_kind(path)? == PathKind::Absolute {
        return Err(PathError::Absolute(vec![path.to_string()]).into());
    }
    match normalize_within(path, "") {
        Normalized::Inside(p) => Ok(p),
        Normalized::Escapes => Err(PathError::OutsideProject(vec![path.to_string()]).into()),
    }
}

/// Moves `src` into directory `dst_dir`, both relative to `root`, creating
/// the directory. Returns the new project-relative path.
pub fn apply_move(root: &Path, src: &str, dst_dir: &str) -> Result<String> {
    let src = inside_project(src)?;
    let dst_dir = inside_project(dst_dir)?;
    let from = root.join(&src);
    if !from.is_file() {
        return Err(Error::Io {
            context: format!("moving {src}"),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        });
    }
    let name = src.rsplit('/').next().unwrap_or(&src);
    let dest_rel = if dst_dir == "." {
        name.to_string()
    } else {
        format!("{dst_dir}/{name}")
    };
    let to = root.join(&dest_rel);
    if to.exists() {
        return Err(Error::DestinationExists(dest_rel));
    }
    let dir = root.join(&dst_dir);
    fs::create_dir_all(&dir).context(|| format!("creating {}", dir.display()))?;
    fs::rename(&from, &to).context(|| format!("moving {src} to {dest_rel}"))?;
    Ok(dest_rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::PathProblem;

    fn project(files: &[(&str, &str)]) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for (path, content) in files {
            let p = dir.path().join(path);
            fs::create_dir_all(p.parent().unwrap()).unwrap();
            fs::write(p, content).unwrap();
        }
        dir
    }

    #[test]
    fn targets() {
        let t = |p: &str| move_target(&FileRecord::new(p, 0));
        assert_eq!(t("mice.csv"), Some("data-raw"));
        assert_eq!(t("data-raw/mice.csv"), None);
        assert_eq!(t("data/mice.csv"), Some("data-raw"));
        assert_eq!(t("x.rds"), Some("data"));
        assert_eq!(t("a.R"), Some("R"));
        assert_eq!(t("R/sub/a.R"), None);
        assert_eq!(t("analysis.Rmd"), Some("vignettes"));
        assert_eq!(t("p.png"), Some("inst/image"));
        assert_eq!(t("inst/figs/p.png"), None);
        assert_eq!(t("doc.docx"), Some("inst/other"));
        assert_eq!(t("blob.xyz"), Some("inst/other"));
        assert_eq!(t("README.md"), None);
        assert_eq!(t("miceps.Rproj"), None);
        assert_eq!(t("LICENSE"), None);
        for p in ["a.csv", "a.rds", "a.R", "a.Rmd", "a.png", "a.mp4", "a.txt"] {
            assert!(MOVE_TARGETS.contains(&t(p).unwrap()));
        }
    }

    #[test]
    fn commands_quote_when_needed() {
        assert_eq!(move_command("mice.csv", "data-raw"), "reprolint mv mice.csv data-raw");
        assert_eq!(
            move_command("my file's.csv", "data-raw"),
            r"reprolint mv 'my file'\''s.csv' data-raw"
        );
    }

    #[test]
    fn packages_count_files() {
        let dir = project(&[
            ("a.R", "library(dplyr)\ndplyr::filter(x)\n"),
            ("b.R", "require('dplyr')\nlibrary(tidyr)\n"),
        ]);
        let r = proj_analyze(dir.path()).unwrap();
        assert_eq!(
            r.packages,
            [
                PackageRef {
                    package: "dplyr".into(),
                    n: 2,
                    used_in: vec!["a.R".into(), "b.R".into()]
                },
                PackageRef {
                    package: "tidyr".into(),
                    n: 1,
                    used_in: vec!["b.R".into()]
                },
            ]
        );
    }

    #[test]
    fn problematic_paths_are_listed_once() {
        let dir = project(&[(
            "a.R",
            "read.csv('~/x.csv')\nread.csv('~/x.csv')\nread.csv('../y.csv')\nread.csv('ok.csv')\n",
        )]);
        let r = proj_analyze(dir.path()).unwrap();
        assert_eq!(
            r.paths_logged,
            [
                PathFinding::new("../y.csv", PathProblem::OutsideProject),
                PathFinding::new("~/x.csv", PathProblem::Absolute),
            ]
        );
    }

    #[test]
    fn empty_paths_serialize_as_null() {
        let dir = project(&[("a.R", "1\n")]);
        let r = proj_analyze(dir.path()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["paths_logged"].is_null());
        let back: AnalysisReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn install_script_sections() {
        let dir = project(&[
            ("a.R", "library(zoo)\nlibrary(stats)\nlibrary(foo)\nlibrary(abc)\n"),
            (".reprolint/config.tsv", "github\tfoo=user/foo\n"),
        ]);
        let path = proj_pkg_script(dir.path(), DEFAULT_PKG_SCRIPT).unwrap();
        assert!(path.ends_with(DEFAULT_PKG_SCRIPT));
        assert_eq!(
            fs::read_to_string(path).unwrap(),
            "# Run this script to install the required packages for this R project.\n\
             # Packages hosted on CRAN...\n\
             install.packages(c( 'abc', 'zoo' ))\n\
             # Packages hosted on GitHub...\n\
             remotes::install_github('user/foo')\n"
        );

        let dir = project(&[]);
        let path = proj_pkg_script(dir.path(), "deps.R").unwrap();
        assert_eq!(
            fs::read_to_string(path).unwrap(),
            "# Run this script to install the required packages for this R project.\n\
             # Packages hosted on CRAN...\n\
             # Packages hosted on GitHub...\n"
        );
        assert!(proj_pkg_script(dir.path(), "../out.R").is_err());
    }

    #[test]
    fn moves_files() {
        let dir = project(&[("mice.csv", "x"), ("data-raw/old.csv", "")]);
        assert_eq!(apply_move(dir.path(), "mice.csv", "data-raw").unwrap(), "data-raw/mice.csv");
        assert_eq!(fs::read_to_string(dir.path().join("data-raw/mice.csv")).unwrap(), "x");
        assert!(!dir.path().join("mice.csv").exists());

        fs::write(dir.path().join("old.csv"), "").unwrap();
        assert!(matches!(
            apply_move(dir.path(), "old.csv", "data-raw"),
            Err(Error::DestinationExists(_))
        ));
        assert!(apply_move(dir.path(), "old.csv", "../elsewhere").is_err());
        assert!(apply_move(dir.path(), "missing.csv", "data").is_err());
    }
}
