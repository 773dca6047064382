//! A small R tokenizer. It knows enough of the language to tell comments,
//! strings, identifiers and operators apart; it does not build a syntax tree.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    Number,
    Op(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// 0-based line index into the lexed text.
    pub line: usize,
    /// Byte range into the lexed text.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is_op(&self, op: &str) -> bool {
        matches!(&self.kind, TokenKind::Op(o) if o == op)
    }

    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(s) => Some(s),
            _ => None,
        }
    }

    pub fn string(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Str(s) => Some(s),
            _ => None,
        }
    }
}

const MULTI_OPS: &[&str] = &[
    ":::", "<<-", "->>", "::", "<-", "->", "<=", ">=", "==", "!=", "&&", "||", "|>",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '.' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '.' || c == '_'
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn push(&mut self, kind: TokenKind, start: usize, line: usize) {
        self.tokens.push(Token {
            kind,
            line,
            start,
            end: self.pos,
        });
    }

    fn run(mut self) -> Vec<Token> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            let line = self.line;
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if (c == 'r' || c == 'R') && matches!(self.peek_at(1), Some('"' | '\'')) {
                self.bump();
                let s = self.raw_string();
                self.push(TokenKind::Str(s), start, line);
            } else if c == '"' || c == '\'' {
                let s = self.string(c);
                self.push(TokenKind::Str(s), start, line);
            } else if c == '`' {
                self.bump();
                let mut name = String::new();
                while let Some(c) = self.bump() {
                    if c == '`' {
                        break;
                    }
                    name.push(c);
                }
                self.push(TokenKind::Ident(name), start, line);
            } else if c.is_ascii_digit()
                || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()))
            {
                self.number();
                self.push(TokenKind::Number, start, line);
            } else if is_ident_start(c) {
                while self.peek().is_some_and(is_ident_char) {
                    self.bump();
                }
                let name = self.src[start..self.pos].to_string();
                self.push(TokenKind::Ident(name), start, line);
            } else if c == '%' {
                self.bump();
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                    if c == '%' {
                        break;
                    }
                }
                let op = self.src[start..self.pos].to_string();
                self.push(TokenKind::Op(op), start, line);
            } else {
                let rest = &self.src[self.pos..];
                let op = MULTI_OPS
                    .iter()
                    .find(|op| rest.starts_with(**op))
                    .map(|op| op.to_string())
                    .unwrap_or_else(|| c.to_string());
                for _ in 0..op.chars().count() {
                    self.bump();
                }
                self.push(TokenKind::Op(op), start, line);
            }
        }
        self.tokens
    }

    fn number(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '.' {
                let exp = matches!(c, 'e' | 'E');
                self.bump();
                if exp && matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn string(&mut self, quote: char) -> String {
        self.bump();
        let mut out = String::new();
        while let Some(c) = self.bump() {
            match c {
                c if c == quote => break,
                '\\' => match self.bump() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('r') => out.push('\r'),
                    Some('0') => out.push('\0'),
                    Some(other) => out.push(other),
                    None => break,
                },
                c => out.push(c),
            }
        }
        out
    }

    /// `r"(...)"`, `R'[...]'`, `r"--{...}--"`; the prefix letter is consumed.
    fn raw_string(&mut self) -> String {
        let quote = self.bump().unwrap_or('"');
        let mut dashes = 0;
        while self.peek() == Some('-') {
            self.bump();
            dashes += 1;
        }
        let close = match self.bump() {
            Some('(') => ')',
            Some('[') => ']',
            Some('{') => '}',
            // not a valid raw string; treat the rest as an ordinary string
            _ => return self.string_tail(quote),
        };
        let terminator: String = std::iter::once(close)
            .chain(std::iter::repeat_n('-', dashes))
            .chain(std::iter::once(quote))
            .collect();
        let body_start = self.pos;
        match self.src[body_start..].find(&terminator) {
            Some(off) => {
                let body = self.src[body_start..body_start + off].to_string();
                while self.pos < body_start + off + terminator.len() {
                    self.bump();
                }
                body
            }
            None => {
                let body = self.src[body_start..].to_string();
                while self.bump().is_some() {}
                body
            }
        }
    }

    fn string_tail(&mut self, quote: char) -> String {
        let mut out = String::new();
        while let Some(c) = self.bump() {
            if c == quote {
                break;
            }
            out.push(c);
        }
        out
    }
}

pub fn tokenize(src: &str) -> Vec<Token> {
    Lexer {
        src,
        pos: 0,
        line: 0,
        tokens: Vec::new(),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).into_iter().map(|t| t.kind).collect()
    }

    fn ident(s: &str) -> TokenKind {
        TokenKind::Ident(s.into())
    }

    fn op(s: &str) -> TokenKind {
        TokenKind::Op(s.into())
    }

    #[test]
    fn call_with_string() {
        assert_eq!(
            kinds("read.csv(\"a b.csv\") # read.csv('x')"),
            vec![
                ident("read.csv"),
                op("("),
                TokenKind::Str("a b.csv".into()),
                op(")"),
            ]
        );
    }

    #[test]
    fn qualified_and_operators() {
        assert_eq!(
            kinds("x <- pkg:::f(1e-3) %>% g"),
            vec![
                ident("x"),
                op("<-"),
                ident("pkg"),
                op(":::"),
                ident("f"),
                op("("),
                TokenKind::Number,
                op(")"),
                op("%>%"),
                ident("g"),
            ]
        );
    }

    #[test]
    fn escapes_and_raw_strings() {
        assert_eq!(
            kinds(r#""C:\\Users\\x" 'it\'s' r"(a\b)" R'-[x]-'"#),
            vec![
                TokenKind::Str("C:\\Users\\x".into()),
                TokenKind::Str("it's".into()),
                TokenKind::Str("a\\b".into()),
                TokenKind::Str("x".into()),
            ]
        );
    }

    #[test]
    fn hash_inside_string_is_not_comment() {
        let toks = kinds("f(\"#x\") # y");
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[2], TokenKind::Str("#x".into()));
    }

    #[test]
    fn line_numbers() {
        let toks = tokenize("a\n\n  b(\n'c\nd')");
        let lines: Vec<_> = toks.iter().map(|t| t.line).collect();
        assert_eq!(lines, vec![0, 2, 2, 3, 4]);
    }

    #[test]
    fn backtick_names_and_numbers() {
        assert_eq!(
            kinds("`my var` <- .5 + 0x1F + 2L"),
            vec![
                ident("my var"),
                op("<-"),
                TokenKind::Number,
                op("+"),
                TokenKind::Number,
                op("+"),
                TokenKind::Number,
            ]
        );
    }

    #[test]
    fn unterminated_string_runs_to_end() {
        assert_eq!(kinds("f('abc"), vec![ident("f"), op("("), TokenKind::Str("abc".into())]);
    }
}
