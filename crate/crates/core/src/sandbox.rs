//! Throwaway copies of a project for checking self-containment.

use std::fs;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{Error, IoContext, Result};
use crate::project::STATE_DIR;

/// Copies the project into a fresh temporary directory as
/// `<tmp>/<project name>` and returns that path. The copy is left in place;
/// a failed copy is removed.
pub fn sandbox(root: &Path) -> Result<PathBuf> {
    let meta = fs::metadata(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;
    if !meta.is_dir() {
        return Err(Error::NotAProject(root.to_path_buf()));
    }
    let root = fs::canonicalize(root).map_err(|_| Error::NotAProject(root.to_path_buf()))?;
    let name = root
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_else(|| "project".into());
    let tmp = tempfile::Builder::new()
        .prefix("reprolint-sandbox-")
        .tempdir()
        .context(|| "creating temporary directory".to_string())?;
    let dest = tmp.path().join(name);
    copy_tree(&root, &dest)?;
    Ok(tmp.keep().join(dest.file_name().expect("dest has a name")))
}

fn copy_tree(src: &Path, dest: &Path) -> Result<()> {
    fs::create_dir_all(dest).context(|| format!("creating {}", dest.display()))?;
    let walk = WalkDir::new(src)
        .follow_links(false)
        .min_depth(1)
        .into_iter()
        .filter_entry(|e| e.file_name() != STATE_DIR);
    for entry in walk {
        let entry = entry.map_err(|e| Error::Io {
            context: format!("copying {}", src.display()),
            source: e.into(),
        })?;
        let rel = entry.path().strip_prefix(src).expect("walk stays below src");
        let target = dest.join(rel);
        let ctx = || format!("copying {}", entry.path().display());
        let ft = entry.file_type();
        if ft.is_dir() {
            fs::create_dir_all(&target).context(ctx)?;
        } else if ft.is_symlink() {
            copy_symlink(entry.path(), &target).context(ctx)?;
        } else {
            fs::copy(entry.path(), &target).context(ctx)?;
        }
    }
    Ok(())
}

#[cfg(unix)]
fn copy_symlink(src: &Path, target: &Path) -> std::io::Result<()> {
    std::os::unix::fs::symlink(fs::read_link(src)?, target)
}

#[cfg(not(unix))]
fn copy_symlink(src: &Path, target: &Path) -> std::io::Result<()> {
    fs::copy(src, target).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copies_everything_but_state() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("proj");
        fs::create_dir_all(root.join("data")).unwrap();
        fs::create_dir_all(root.join(STATE_DIR)).unwrap();
        fs::write(root.join("data/a.csv"), "x,y\n").unwrap();
        fs::write(root.join(".hidden"), "h").unwrap();
        fs::write(root.join(STATE_DIR).join("log.tsv"), "").unwrap();

        let copy = sandbox(&root).unwrap();
        assert_eq!(copy.file_name().unwrap(), "proj");
        assert_eq!(fs::read_to_string(copy.join("data/a.csv")).unwrap(), "x,y\n");
        assert_eq!(fs::read_to_string(copy.join(".hidden")).unwrap(), "h");
        assert!(!copy.join(STATE_DIR).exists());
        assert!(root.join(STATE_DIR).join("log.tsv").exists());
        fs::remove_dir_all(copy.parent().unwrap()).unwrap();
    }

    #[test]
    fn empty_project() {
        let dir = tempfile::tempdir().unwrap();
        let copy = sandbox(dir.path()).unwrap();
        assert!(copy.is_dir());
        assert_eq!(fs::read_dir(&copy).unwrap().count(), 0);
        fs::remove_dir_all(copy.parent().unwrap()).unwrap();
    }

    #[test]
    fn missing_root() {
        assert!(matches!(
            sandbox(Path::new("/definitely/not/here")),
            Err(Error::NotAProject(_))
        ));
    }
}
