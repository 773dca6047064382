use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScriptKind {
    RScript,
    RMarkdown,
}

impl ScriptKind {
    pub fn from_path(rel_path: &str) -> Option<Self> {
        match crate::project::extension(rel_path).as_str() {
            "r" => Some(ScriptKind::RScript),
            "rmd" => Some(ScriptKind::RMarkdown),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeLine {
    pub text: String,
    /// 1-based line number in the source file.
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extracted {
    pub lines: Vec<CodeLine>,
    pub warnings: Vec<String>,
}

enum State {
    Text,
    Chunk {
        ticks: usize,
        opened: usize,
        pending: Vec<CodeLine>,
    },
    Fence {
        ticks: usize,
        opened: usize,
    },
}

fn fence_ticks(trimmed: &str) -> usize {
    trimmed.chars().take_while(|&c| c == '`').count()
}

fn is_closing(trimmed: &str, ticks: usize) -> bool {
    let n = fence_ticks(trimmed);
    n >= ticks && trimmed[n..].trim().is_empty()
}

fn opens_r_chunk(info: &str) -> bool {
    let info = info.trim_start();
    let Some(rest) = info.strip_prefix('{') else {
        return false;
    };
    let mut chars = rest.chars();
    matches!(chars.next(), Some('r' | 'R')) && matches!(chars.next(), Some(' ' | ',' | '}'))
}

/// Returns the R code in `source` with original line numbers. R Markdown
/// keeps only lines inside ```` ```{r} ```` chunks, minus `#|` option lines.
pub fn extract_code(source: &str, kind: ScriptKind) -> Extracted {
    if kind == ScriptKind::RScript {
        return Extracted {
            lines: source
                .lines()
                .enumerate()
                .map(|(i, l)| CodeLine {
                    text: l.to_string(),
                    line: i + 1,
                })
                .collect(),
            warnings: Vec::new(),
        };
    }

    let mut out = Extracted::default();
    let mut state = State::Text;
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        state = match state {
            State::Text => {
                let ticks = fence_ticks(trimmed);
                if ticks < 3 {
                    State::Text
                } else if opens_r_chunk(&trimmed[ticks..]) {
                    State::Chunk {
                        ticks,
                        opened: line,
                        pending: Vec::new(),
                    }
                } else {
                    State::Fence {
                        ticks,
                        opened: line,
                    }
                }
            }
            State::Chunk {
                ticks,
                opened,
                mut pending,
            } => {
                if is_closing(trimmed, ticks) {
                    out.lines.append(&mut pending);
                    State::Text
                } else {
                    if !trimmed.starts_with("#|") {
                        pending.push(CodeLine {
                            text: raw.to_string(),
                            line,
                        });
                    }
                    State::Chunk {
                        ticks,
                        opened,
                        pending,
                    }
                }
            }
            State::Fence { ticks, opened } => {
                if is_closing(trimmed, ticks) {
                    State::Text
                } else {
                    State::Fence { ticks, opened }
                }
            }
        };
    }
    match state {
        State::Text => {}
        State::Chunk { opened, .. } => out
            .warnings
            .push(format!("unterminated code chunk opened at line {opened}")),
        State::Fence { opened, .. } => out
            .warnings
            .push(format!("unterminated fence opened at line {opened}")),
    }
    out
}
