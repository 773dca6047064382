#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tempfile::TempDir;
use walkdir::WalkDir;

pub const FIXTURE: &str = "project_miceps";

pub fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(FIXTURE)
}

/// Copy of the miceps fixture at `<tmp>/project_miceps`.
pub fn fixture_copy() -> (TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let dest = tmp.path().join(FIXTURE);
    copy_dir(&fixture(), &dest);
    (tmp, dest)
}

pub fn copy_dir(src: &Path, dest: &Path) {
    for entry in WalkDir::new(src) {
        let entry = entry.unwrap();
        let target = dest.join(entry.path().strip_prefix(src).unwrap());
        if entry.file_type().is_dir() {
            fs::create_dir_all(&target).unwrap();
        } else {
            fs::copy(entry.path(), &target).unwrap();
        }
    }
}

/// Writes `files` under a fresh temp dir named `proj`.
pub fn project(files: &[(&str, &[u8])]) -> (TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("proj");
    fs::create_dir_all(&root).unwrap();
    for (path, content) in files {
        let p = root.join(path);
        fs::create_dir_all(p.parent().unwrap()).unwrap();
        fs::write(p, content).unwrap();
    }
    (tmp, root)
}

/// Relative path and SHA-256 of every file, sorted.
pub fn file_hashes(root: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = WalkDir::new(root)
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
            let digest = Sha256::digest(fs::read(e.path()).unwrap());
            (rel, format!("{digest:x}"))
        })
        .collect();
    out.sort();
    out
}

/// One digest over paths and contents of the whole tree.
pub fn tree_hash(root: &Path) -> String {
    let mut h = Sha256::new();
    for (rel, digest) in file_hashes(root) {
        h.update(rel.as_bytes());
        h.update([0]);
        h.update(digest.as_bytes());
        h.update([0]);
    }
    format!("{:x}", h.finalize())
}
