//! Append-only event log at `<root>/.reprolint/log.tsv`.
//!
//! One tab-separated event per line under the header
//! `path<TAB>path_abs<TAB>func<TAB>timestamp`. Tabs, newlines and
//! backslashes inside fields are backslash-escaped. Appends and truncation
//! hold an exclusive lock on the file.

use std::fs::{self, File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{IoContext, Result};
use crate::project::STATE_DIR;

pub const LOG_FILE: &str = "log.tsv";
pub const LOG_HEADER: &str = "path\tpath_abs\tfunc\ttimestamp";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEvent {
    pub path: String,
    pub path_abs: String,
    pub func: String,
    /// ISO-8601, UTC, second precision.
    pub timestamp: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogReport {
    pub events: Vec<LogEvent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn log_path(root: &Path) -> PathBuf {
    root.join(STATE_DIR).join(LOG_FILE)
}

fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(field: &str) -> Option<String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

fn is_timestamp(s: &str) -> bool {
    chrono::DateTime::parse_from_rfc3339(s).is_ok()
}

impl LogEvent {
    fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            escape(&self.path),
            escape(&self.path_abs),
            escape(&self.func),
            self.timestamp
        )
    }

    fn parse(line: &str) -> Option<LogEvent> {
        let fields: Vec<&str> = line.split('\t').collect();
        let [path, path_abs, func, timestamp] = fields[..] else {
            return None;
        };
        let event = LogEvent {
            path: unescape(path)?,
            path_abs: unescape(path_abs)?,
            func: unescape(func)?,
            timestamp: timestamp.to_string(),
        };
        (!event.func.is_empty() && is_timestamp(timestamp)).then_some(event)
    }
}

/// An event before it is stamped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewEvent {
    pub path: String,
    pub path_abs: String,
    pub func: String,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
}

fn last_timestamp(text: &str) -> Option<&str> {
    text.lines()
        .rev()
        .find_map(|l| LogEvent::parse(l).is_some().then(|| l.rsplit('\t').next()).flatten())
}

/// Appends `events` with one shared timestamp, never earlier than the last
/// one already in the log. Returns the events as written.
pub fn append_events(root: &Path, events: &[NewEvent]) -> Result<Vec<LogEvent>> {
    if events.is_empty() {
        return Ok(Vec::new());
    }
    let path = log_path(root);
    let ctx = || format!("writing log {}", path.display());
    fs::create_dir_all(path.parent().expect("log path has a parent")).context(ctx)?;
    let mut file = OpenOptions::new()
        .read(true)
        .append(true)
        .create(true)
        .open(&path)
        .context(ctx)?;
    file.lock().context(ctx)?;

    let mut existing = String::new();
    // a log with invalid UTF-8 is still appendable; its lines are skipped on report
    let mut raw = Vec::new();
    file.read_to_end(&mut raw).context(ctx)?;
    existing.push_str(&String::from_utf8_lossy(&raw));

    let mut stamp = now();
    if let Some(last) = last_timestamp(&existing) {
        if last > stamp.as_str() {
            stamp = last.to_string();
        }
    }
    let written: Vec<LogEvent> = events
        .iter()
        .map(|e| LogEvent {
            path: e.path.clone(),
            path_abs: e.path_abs.clone(),
            func: e.func.clone(),
            timestamp: stamp.clone(),
        })
        .collect();

    let mut buf = String::new();
    if existing.is_empty() {
        buf.push_str(LOG_HEADER);
        buf.push('\n');
    } else if !existing.ends_with('\n') {
        buf.push('\n');
    }
    for e in &written {
        buf.push_str(&e.to_line());
        buf.push('\n');
    }
    file.write_all(buf.as_bytes()).context(ctx)?;
    file.flush().context(ctx)?;
    file.unlock().context(ctx)?;
    Ok(written)
}

/// All events in append order; unparsable lines become warnings.
pub fn log_report(root: &Path) -> Result<LogReport> {
    let path = log_path(root);
    let raw = match fs::read(&path) {
        Ok(raw) => raw,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(LogReport::default()),
        Err(e) => return Err(e).context(|| format!("reading log {}", path.display())),
    };
    let mut report = LogReport::default();
    for (i, line) in raw.split(|&b| b == b'\n').enumerate() {
        if line.is_empty() {
            continue;
        }
        let parsed = std::str::from_utf8(line).ok().and_then(|l| {
            if i == 0 && l == LOG_HEADER {
                return Some(None);
            }
            LogEvent::parse(l).map(Some)
        });
        match parsed {
            Some(Some(event)) => report.events.push(event),
            Some(None) => {}
            None => report
                .warnings
                .push(format!("{}:{}: skipped corrupt log line", LOG_FILE, i + 1)),
        }
    }
    Ok(report)
}

/// Empties the log. Succeeds when there is none.
pub fn log_clear(root: &Path) -> Result<()> {
    let path = log_path(root);
    let file = match OpenOptions::new().write(true).open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(e).context(|| format!("clearing log {}", path.display())),
    };
    truncate_locked(file).context(|| format!("clearing log {}", path.display()))
}

fn truncate_locked(mut file: File) -> std::io::Result<()> {
    file.lock()?;
    file.set_len(0)?;
    file.seek(SeekFrom::Start(0))?;
    file.unlock()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(path: &str, func: &str) -> NewEvent {
        NewEvent {
            path: path.into(),
            path_abs: String::new(),
            func: func.into(),
        }
    }

    #[test]
    fn fresh_project_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert!(log_report(dir.path()).unwrap().events.is_empty());
        log_clear(dir.path()).unwrap();
        log_clear(dir.path()).unwrap();
    }

    #[test]
    fn round_trip_with_escapes() {
        let dir = tempfile::tempdir().unwrap();
        let weird = ev("a\tb\\c\nd", "base::library");
        let written = append_events(dir.path(), &[weird.clone(), ev("x.csv", "utils::read.csv")])
            .unwrap();
        let text = fs::read_to_string(log_path(dir.path())).unwrap();
        assert!(text.starts_with(&format!("{LOG_HEADER}\n")));
        assert_eq!(text.lines().count(), 3);
        let report = log_report(dir.path()).unwrap();
        assert_eq!(report.events, written);
        assert_eq!(report.events[0].path, weird.path);
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn timestamps_never_go_backwards() {
        let dir = tempfile::tempdir().unwrap();
        let path = log_path(dir.path());
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, format!("{LOG_HEADER}\np\t\tf\t2999-01-01T00:00:00Z\n")).unwrap();
        let written = append_events(dir.path(), &[ev("q", "g")]).unwrap();
        assert_eq!(written[0].timestamp, "2999-01-01T00:00:00Z");
    }

    #[test]
    fn corrupt_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        append_events(dir.path(), &[ev("a", "f")]).unwrap();
        let path = log_path(dir.path());
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"garbage\n\xff\xfe\t\t\t\nx\t\t\tnot-a-time\n").unwrap();
        drop(f);
        append_events(dir.path(), &[ev("b", "f")]).unwrap();
        let report = log_report(dir.path()).unwrap();
        let paths: Vec<_> = report.events.iter().map(|e| e.path.as_str()).collect();
        assert_eq!(paths, ["a", "b"]);
        assert_eq!(report.warnings.len(), 3);
    }

    #[test]
    fn clear_then_append() {
        let dir = tempfile::tempdir().unwrap();
        append_events(dir.path(), &[ev("a", "f")]).unwrap();
        log_clear(dir.path()).unwrap();
        assert!(log_report(dir.path()).unwrap().events.is_empty());
        append_events(dir.path(), &[ev("b", "f")]).unwrap();
        let report = log_report(dir.path()).unwrap();
        assert_eq!(report.events.len(), 1);
        assert_eq!(report.events[0].path, "b");
    }

    #[test]
    fn concurrent_appends_do_not_interleave() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let handles: Vec<_> = (0..8)
            .map(|t| {
                let root = root.clone();
                std::thread::spawn(move || {
                    for i in 0..20 {
                        append_events(&root, &[ev(&format!("{t}-{i}"), "f")]).unwrap();
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        let report = log_report(&root).unwrap();
        assert_eq!(report.events.len(), 160);
        assert!(report.warnings.is_empty());
        assert!(report.events.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    }
}
