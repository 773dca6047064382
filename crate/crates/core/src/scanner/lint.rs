use serde::{Deserialize, Serialize};

use super::lexer::Token;
use super::markdown::CodeLine;

pub const MAX_LINE_WIDTH: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LintRule {
    LineLength,
    AssignmentEquals,
    CommaSpacing,
    TrailingWhitespace,
}

impl LintRule {
    pub fn id(self) -> &'static str {
        match self {
            LintRule::LineLength => "line_length",
            LintRule::AssignmentEquals => "assignment_equals",
            LintRule::CommaSpacing => "comma_spacing",
            LintRule::TrailingWhitespace => "trailing_whitespace",
        }
    }

    pub fn message(self) -> &'static str {
        match self {
            LintRule::LineLength => "line is longer than 80 characters",
            LintRule::AssignmentEquals => "use <- for assignment, not =",
            LintRule::CommaSpacing => "put a space after a comma",
            LintRule::TrailingWhitespace => "trailing whitespace",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub rule: LintRule,
    pub line: usize,
}

/// `lines` are the code lines the tokens were lexed from, joined with `\n`
/// into `text`.
pub fn lint(lines: &[CodeLine], text: &str, tokens: &[Token]) -> Vec<LintFinding> {
    let mut out = Vec::new();
    for l in lines {
        if l.text.chars().count() > MAX_LINE_WIDTH {
            out.push(LintFinding {
                rule: LintRule::LineLength,
                line: l.line,
            });
        }
        if l.text.ends_with([' ', '\t']) {
            out.push(LintFinding {
                rule: LintRule::TrailingWhitespace,
                line: l.line,
            });
        }
    }

    // parens and brackets only; `=` inside braces is still an assignment
    let mut depth: i64 = 0;
    for t in tokens {
        let line = || lines[t.line].line;
        if t.is_op("(") || t.is_op("[") {
            depth += 1;
        } else if t.is_op(")") || t.is_op("]") {
            depth = (depth - 1).max(0);
        } else if t.is_op("=") && depth == 0 {
            out.push(LintFinding {
                rule: LintRule::AssignmentEquals,
                line: line(),
            });
        } else if t.is_op(",") {
            let next = text[t.end..].chars().next();
            let spaced = match next {
                None => true,
                Some(c) => c.is_whitespace() || matches!(c, ')' | ']' | ','),
            };
            if !spaced {
                out.push(LintFinding {
                    rule: LintRule::CommaSpacing,
                    line: line(),
                });
            }
        }
    }
    out.sort_by_key(|f| (f.line, f.rule));
    out
}
