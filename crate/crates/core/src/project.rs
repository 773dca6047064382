//! Project directory model: walking, file classification and project markers.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::error::{Error, Result};

/// Directory holding the tool's own state (log, project-local config).
pub const STATE_DIR: &str = ".reprolint";

/// Directories that are never descended into. `.git` still counts as a
/// project marker.
const SKIPPED_DIRS: &[&str] = &[STATE_DIR, ".git", ".Rproj.user"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    RawData,
    DerivedData,
    Script,
    RenderedDoc,
    Image,
    Media,
    TextDoc,
    ProjectMetadata,
    Other,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::RawData => "raw-data",
            Category::DerivedData => "derived-data",
            Category::Script => "script",
            Category::RenderedDoc => "rendered-doc",
            Category::Image => "image",
            Category::Media => "media",
            Category::TextDoc => "text-doc",
            Category::ProjectMetadata => "project-metadata",
            Category::Other => "other",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const UNKNOWN_MIME: &str = "application/octet-stream";

/// Type key → (MIME, category). Keys are lowercase extensions, or the
/// lowercase file name (leading dot stripped) for extensionless files such
/// as `LICENSE` or `.gitignore`.
pub const TYPE_TABLE: &[(&str, &str, Category)] = &[
    ("csv", "text/csv", Category::RawData),
    ("tsv", "text/tab-separated-values", Category::RawData),
    ("xls", "application/vnd.ms-excel", Category::RawData),
    (
        "xlsx",
        "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
        Category::RawData,
    ),
    ("json", "application/json", Category::RawData),
    ("xml", "application/xml", Category::RawData),
    ("rds", "application/x-rds", Category::DerivedData),
    ("rda", "application/x-rdata", Category::DerivedData),
    ("rdata", "application/x-rdata", Category::DerivedData),
    ("feather", "application/vnd.apache.arrow.file", Category::DerivedData),
    ("parquet", "application/vnd.apache.parquet", Category::DerivedData),
    ("r", "text/x-r", Category::Script),
    ("rmd", "text/x-markdown", Category::Script),
    ("py", "text/x-python", Category::Script),
    ("sql", "application/sql", Category::Script),
    ("html", "text/html", Category::RenderedDoc),
    ("pdf", "application/pdf", Category::RenderedDoc),
    (
        "docx",
        "application/vnd.openxmlformats-officedocument.wordprocessingml.document",
        Category::RenderedDoc,
    ),
    ("png", "image/png", Category::Image),
    ("jpg", "image/jpeg", Category::Image),
    ("jpeg", "image/jpeg", Category::Image),
    ("gif", "image/gif", Category::Image),
    ("svg", "image/svg+xml", Category::Image),
    ("bmp", "image/bmp", Category::Image),
    ("tiff", "image/tiff", Category::Image),
    ("mp3", "audio/mpeg", Category::Media),
    ("mp4", "video/mp4", Category::Media),
    ("wav", "audio/wav", Category::Media),
    ("mov", "video/quicktime", Category::Media),
    ("avi", "video/x-msvideo", Category::Media),
    ("md", "text/markdown", Category::TextDoc),
    ("txt", "text/plain", Category::TextDoc),
    ("bib", "text/x-bibtex", Category::TextDoc),
    ("rproj", "text/rstudio", Category::ProjectMetadata),
    ("gitignore", "text/plain", Category::ProjectMetadata),
    ("license", "text/plain", Category::ProjectMetadata),
    ("citation", "text/plain", Category::ProjectMetadata),
    ("here", "text/plain", Category::ProjectMetadata),
];

const R_KEYS: &[&str] = &["r", "rmd", "rproj", "rds", "rda", "rdata"];

fn file_name(rel_path: &str) -> &str {
    rel_path.rsplit(['/', '\\']).next().unwrap_or(rel_path)
}

/// Lowercase extension without the dot; empty when the name has none.
/// A leading dot (`.gitignore`) does not start an extension.
pub fn extension(rel_path: &str) -> String {
    let name = file_name(rel_path);
    match name.rfind('.') {
        Some(i) if i > 0 => name[i + 1..].to_ascii_lowercase(),
        _ => String::new(),
    }
}

fn type_key(rel_path: &str) -> String {
    let ext = extension(rel_path);
    if ext.is_empty() {
        file_name(rel_path).trim_start_matches('.').to_ascii_lowercase()
    } else {
        ext
    }
}

pub fn classify_file(rel_path: &str) -> (&'static str, Category) {
    let key = type_key(rel_path);
    TYPE_TABLE
        .iter()
        .find(|(k, _, _)| *k == key)
        .map(|&(_, mime, cat)| (mime, cat))
        .unwrap_or((UNKNOWN_MIME, Category::Other))
}

pub fn is_data_file(path: &str) -> bool {
    matches!(classify_file(path).1, Category::RawData | Category::DerivedData)
}

pub fn is_image_file(path: &str) -> bool {
    classify_file(path).1 == Category::Image
}

pub fn is_text_file(path: &str) -> bool {
    let (mime, cat) = classify_file(path);
    mime.starts_with("text/") && matches!(cat, Category::TextDoc | Category::ProjectMetadata)
}

pub fn is_r_file(path: &str) -> bool {
    R_KEYS.contains(&type_key(path).as_str())
}

/// True for `README`, `readme.md`, `ReadMe.txt`, ...
pub fn is_readme(rel_path: &str) -> bool {
    let name = file_name(rel_path);
    let stem = name.split('.').next().unwrap_or(name);
    stem.eq_ignore_ascii_case("readme")
}

/// Renders a byte count with 1024-based units, e.g. `39`, `14.33K`.
pub fn human_size(bytes: u64) -> String {
    const UNITS: &[&str] = &["K", "M", "G", "T"];
    if bytes < 1024 {
        return bytes.to_string();
    }
    let mut value = bytes as f64 / 1024.0;
    let mut unit = 0;
    while value >= 1024.0 && unit + 1 < UNITS.len() {
        value /= 1024.0;
        unit += 1;
    }
    format!("{value:.2}{}", UNITS[unit])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub rel_path: String,
    pub ext: String,
    pub size: u64,
    pub mime: String,
    pub category: Category,
}

impl FileRecord {
    pub fn new(rel_path: impl Into<String>, size: u64) -> Self {
        let rel_path = rel_path.into();
        let (mime, category) = classify_file(&rel_path);
        FileRecord {
            ext: extension(&rel_path),
            size,
            mime: mime.to_string(),
            category,
            rel_path,
        }
    }

    pub fn file_name(&self) -> &str {
        file_name(&self.rel_path)
    }

    /// Directory part of the relative path, empty at root.
    pub fn dir(&self) -> &str {
        self.rel_path.rsplit_once('/').map(|(d, _)| d).unwrap_or("")
    }

    pub fn at_root(&self) -> bool {
        !self.rel_path.contains('/')
    }

    pub fn is_under(&self, dir: &str) -> bool {
        self.rel_path
            .strip_prefix(dir)
            .is_some_and(|rest| rest.starts_with('/'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanWarning {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectDir {
    pub root: PathBuf,
    pub files: Vec<FileRecord>,
    pub root_markers: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<ScanWarning>,
}

impl ProjectDir {
    pub fn name(&self) -> String {
        self.root
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.root.display().to_string())
    }

    pub fn file(&self, rel_path: &str) -> Option<&FileRecord> {
        self.files
            .binary_search_by(|f| f.rel_path.as_str().cmp(rel_path))
            .ok()
            .map(|i| &self.files[i])
    }

    /// R and R Markdown sources, the files the script scanner reads.
    pub fn scripts(&self) -> impl Iterator<Item = &FileRecord> {
        self.files.iter().filter(|f| is_script_source(&f.rel_path))
    }
}

pub fn is_script_source(rel_path: &str) -> bool {
    matches!(extension(rel_path).as_str(), "r" | "rmd")
}

fn is_marker_file(name: &str) -> bool {
    name == ".here" || extension(name) == "rproj"
}

fn rel_string(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Walks `root` and records every file below it.
///
/// Symlinks are recorded as entries but never followed. Unreadable entries
/// become warnings; the walk continues past them.
pub fn scan_project(root: &Path) -> Result<ProjectDir> {
    let meta = fs::metadata(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;
    if !meta.is_dir() {
        return Err(Error::NotAProject(root.to_path_buf()));
    }
    let root = fs::canonicalize(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;

    let mut files = Vec::new();
    let mut markers = Vec::new();
    let mut warnings = Vec::new();

    let mut walk = WalkDir::new(&root)
        .follow_links(false)
        .sort_by_file_name()
        .into_iter();

    while let Some(entry) = walk.next() {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                let path = err
                    .path()
                    .map(|p| rel_string(&root, p))
                    .unwrap_or_default();
                warnings.push(ScanWarning {
                    path,
                    message: err.to_string(),
                });
                continue;
            }
        };
        if entry.depth() == 0 {
            continue;
        }
        let rel = rel_string(&root, entry.path());
        let name = entry.file_name().to_string_lossy();

        if name == ".git" {
            // directory in a checkout, plain file in worktrees and submodules
            markers.push(rel);
            if entry.file_type().is_dir() {
                walk.skip_current_dir();
            }
            continue;
        }
        if entry.file_type().is_dir() {
            if SKIPPED_DIRS.contains(&name.as_ref()) {
                walk.skip_current_dir();
            }
            continue;
        }
        if is_marker_file(&name) {
            markers.push(rel.clone());
        }
        let size = match entry.metadata() {
            Ok(m) => m.len(),
            Err(err) => {
                warnings.push(ScanWarning {
                    path: rel.clone(),
                    message: err.to_string(),
                });
                0
            }
        };
        files.push(FileRecord::new(rel, size));
    }

    files.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
    markers.sort();

    Ok(ProjectDir {
        root,
        files,
        root_markers: markers,
        warnings,
    })
}
