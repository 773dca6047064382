//! Function tables and the package registry.
//!
//! Both are plain text, one `class<TAB>pattern` entry per line. The shipped
//! defaults are extended by the file named in `REPROLINT_CONFIG` and then by
//! `<root>/.reprolint/config.tsv`; later entries win.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, IoContext, Result};
use crate::project::STATE_DIR;

pub const CONFIG_ENV: &str = "REPROLINT_CONFIG";
pub const PROJECT_CONFIG: &str = "config.tsv";

const DEFAULT_FUNCTIONS: &str = include_str!("../tables/functions.tsv");
const DEFAULT_REGISTRY: &str = include_str!("../tables/registry.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnClass {
    Read,
    Write,
    /// Path argument of unknown direction.
    Io,
    Random,
    Seed,
    Chdir,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnEntry {
    pub class: FnClass,
    pub package: Option<String>,
    pub name: String,
    /// 1-based position of the path argument; `None` when it can only be
    /// passed by name.
    pub position: Option<usize>,
    pub param: Option<String>,
}

impl FnEntry {
    /// `pkg::name` when the entry is qualified, else `name`.
    pub fn qualified(&self) -> String {
        match &self.package {
            Some(p) => format!("{p}::{}", self.name),
            None => self.name.clone(),
        }
    }

    fn parse(class: FnClass, pattern: &str) -> Option<FnEntry> {
        let (callee, arg) = match pattern.split_once('@') {
            Some((c, a)) => (c, Some(a)),
            None => (pattern, None),
        };
        let (package, name) = match callee.split_once("::") {
            Some((p, n)) => (Some(p.to_string()), n),
            None => (None, callee),
        };
        if name.is_empty() || package.as_deref() == Some("") {
            return None;
        }
        let (position, param) = match arg {
            None => (Some(1), None),
            Some(a) => {
                let (pos, param) = match a.split_once(':') {
                    Some((p, n)) => (p, Some(n.to_string())),
                    None => (a, None),
                };
                let position = if pos.is_empty() {
                    None
                } else {
                    Some(pos.parse::<usize>().ok().filter(|&p| p > 0)?)
                };
                if position.is_none() && param.is_none() {
                    return None;
                }
                (position, param)
            }
        };
        Some(FnEntry {
            class,
            package,
            name: name.to_string(),
            position,
            param,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctionTable {
    entries: Vec<FnEntry>,
}

impl FunctionTable {
    pub fn entries(&self) -> &[FnEntry] {
        &self.entries
    }

    pub fn push(&mut self, entry: FnEntry) {
        self.entries.push(entry);
    }

    /// Finds the entry for a call written as `name(...)` or `pkg::name(...)`.
    /// Entries added later take precedence, and an entry qualified with the
    /// call's own package beats a looser match.
    pub fn lookup(&self, package: Option<&str>, name: &str) -> Option<&FnEntry> {
        let mut candidates = self.entries.iter().rev().filter(|e| {
            e.name == name
                && match (package, e.package.as_deref()) {
                    (Some(called), Some(own)) => called == own,
                    _ => true,
                }
        });
        let first = candidates.next()?;
        if package.is_some() && first.package.as_deref() != package {
            if let Some(exact) = candidates.find(|e| e.package.as_deref() == package) {
                return Some(exact);
            }
        }
        Some(first)
    }

    pub fn of_class(&self, class: FnClass) -> impl Iterator<Item = &FnEntry> {
        self.entries.iter().filter(move |e| e.class == class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "origin", content = "slug")]
pub enum Origin {
    Cran,
    Github(String),
    Base,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<(String, Origin)>,
}

impl Registry {
    pub fn insert(&mut self, package: impl Into<String>, origin: Origin) {
        let package = package.into();
        self.entries.retain(|(p, _)| *p != package);
        self.entries.push((package, origin));
    }

    /// Unlisted packages resolve to CRAN.
    pub fn origin(&self, package: &str) -> Origin {
        self.entries
            .iter()
            .find(|(p, _)| p == package)
            .map(|(_, o)| o.clone())
            .unwrap_or(Origin::Cran)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub functions: FunctionTable,
    pub registry: Registry,
}

impl Config {
    /// The shipped tables only.
    pub fn builtin() -> Config {
        let mut config = Config::default();
        config
            .extend_from_str(DEFAULT_FUNCTIONS, "<builtin functions>")
            .expect("builtin function table parses");
        config
            .extend_from_str(DEFAULT_REGISTRY, "<builtin registry>")
            .expect("builtin registry parses");
        config
    }

    /// Builtin tables, then `REPROLINT_CONFIG`, then the project-local file.
    pub fn load(root: &Path) -> Result<Config> {
        let mut config = Config::builtin();
        if let Some(path) = std::env::var_os(CONFIG_ENV) {
            config.extend_from_file(Path::new(&path))?;
        }
        let local = root.join(STATE_DIR).join(PROJECT_CONFIG);
        if local.is_file() {
            config.extend_from_file(&local)?;
        }
        Ok(config)
    }

    pub fn extend_from_file(&mut self, path: &Path) -> Result<()> {
        let text =
            fs::read_to_string(path).context(|| format!("reading config {}", path.display()))?;
        self.extend_from_str(&text, &path.display().to_string())
    }

    pub fn extend_from_str(&mut self, text: &str, source: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Config {
                path: source.to_string(),
                line: i + 1,
                message,
            };
            let (class, pattern) = line
                .split_once('\t')
                .ok_or_else(|| err("expected class<TAB>pattern".into()))?;
            let (class, pattern) = (class.trim(), pattern.trim());
            let fn_class = match class {
                "read" => Some(FnClass::Read),
                "write" => Some(FnClass::Write),
                "io" => Some(FnClass::Io),
                "random" => Some(FnClass::Random),
                "seed" => Some(FnClass::Seed),
                "chdir" => Some(FnClass::Chdir),
                _ => None,
            };
            if let Some(fn_class) = fn_class {
                let entry = FnEntry::parse(fn_class, pattern)
                    .ok_or_else(|| err(format!("bad function pattern `{pattern}`")))?;
                self.functions.push(entry);
                continue;
            }
            match class {
                "cran" => self.registry.insert(pattern, Origin::Cran),
                "base" => self.registry.insert(pattern, Origin::Base),
                "github" => {
                    let (name, slug) = match pattern.split_once('=') {
                        Some((n, s)) => (n.to_string(), s),
                        None => {
                            let name = pattern.rsplit('/').next().unwrap_or(pattern);
                            (name.to_string(), pattern)
                        }
                    };
                    if name.is_empty() || slug.split('/').filter(|s| !s.is_empty()).count() != 2 {
                        return Err(err(format!("bad github slug `{pattern}`")));
                    }
                    self.registry.insert(name, Origin::Github(slug.to_string()));
                }
                other => return Err(err(format!("unknown class `{other}`"))),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables_parse() {
        let c = Config::builtin();
        let random: Vec<_> = c
            .functions
            .of_class(FnClass::Random)
            .map(|e| e.name.as_str())
            .collect();
        assert_eq!(
            random,
            [
                "sample", "sample.int", "rnorm", "runif", "rbinom", "rpois", "rexp", "rbeta",
                "rgamma", "rcauchy", "rt", "rchisq"
            ]
        );
        assert_eq!(c.registry.origin("stats"), Origin::Base);
        assert_eq!(c.registry.origin("dplyr"), Origin::Cran);
    }

    #[test]
    fn pattern_forms() {
        let e = FnEntry::parse(FnClass::Write, "readr::write_csv@2:file").unwrap();
        assert_eq!(e.package.as_deref(), Some("readr"));
        assert_eq!(e.position, Some(2));
        assert_eq!(e.param.as_deref(), Some("file"));
        assert_eq!(e.qualified(), "readr::write_csv");

        let e = FnEntry::parse(FnClass::Write, "save@:file").unwrap();
        assert_eq!(e.position, None);
        assert_eq!(e.package, None);

        let e = FnEntry::parse(FnClass::Read, "f").unwrap();
        assert_eq!(e.position, Some(1));

        assert!(FnEntry::parse(FnClass::Read, "f@0").is_none());
        assert!(FnEntry::parse(FnClass::Read, "f@").is_none());
        assert!(FnEntry::parse(FnClass::Read, "::f").is_none());
    }

    #[test]
    fn lookup_rules() {
        let c = Config::builtin();
        let t = &c.functions;
        assert_eq!(t.lookup(None, "read_csv").unwrap().qualified(), "readr::read_csv");
        assert_eq!(
            t.lookup(Some("readr"), "read_csv").unwrap().qualified(),
            "readr::read_csv"
        );
        assert!(t.lookup(Some("other"), "read_csv").is_none());
        assert!(t.lookup(None, "mean").is_none());
    }

    #[test]
    fn later_entries_override() {
        let mut c = Config::builtin();
        c.extend_from_str("write\tread_csv@1\ngithub\tfoo=user/foo\ncran\tmypkg\n", "t")
            .unwrap();
        assert_eq!(c.functions.lookup(None, "read_csv").unwrap().class, FnClass::Write);
        assert_eq!(c.registry.origin("foo"), Origin::Github("user/foo".into()));
        assert_eq!(c.registry.origin("mypkg"), Origin::Cran);
    }

    #[test]
    fn github_name_from_slug() {
        let mut c = Config::default();
        c.extend_from_str("github\tuser/bar\n", "t").unwrap();
        assert_eq!(c.registry.origin("bar"), Origin::Github("user/bar".into()));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let mut c = Config::default();
        let err = c.extend_from_str("# c\n\nbogus\tx\n", "cfg").unwrap_err();
        assert_eq!(err.to_string(), "cfg:3: invalid config entry: unknown class `bogus`");
        assert!(c.extend_from_str("read x", "cfg").is_err());
        assert!(c.extend_from_str("github\tnoslash", "cfg").is_err());
    }
}
