//! S-expression reader with source positions.

use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SexpKind {
    Symbol(String),
    Keyword(String),
    Numeral(String),
    Decimal(String),
    /// Digits of a `#b` literal.
    Binary(String),
    /// Digits of a `#x` literal.
    Hex(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub line: usize,
    pub col: usize,
}

impl Sexp {
    pub fn symbol(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.symbol() == Some(name)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::Parse {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    pub(crate) fn sort_error(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::Sort {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> FrontendError {
        FrontendError::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, FrontendError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else { return Ok(None) };
        let kind = match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.err(line, col, "unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read()?.expect("non-empty input")),
                    }
                }
                SexpKind::List(items)
            }
            ')' => return Err(self.err(line, col, "unexpected ')'")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(line, col, "unterminated string literal")),
                        Some('"') if self.peek() == Some('"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                SexpKind::Str(unescape(&s).map_err(|m| self.err(line, col, m))?)
            }
            '|' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(line, col, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(c) => s.push(c),
                    }
                }
                SexpKind::Symbol(s)
            }
            _ => {
                let mut tok = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '"' | '|') {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                classify(&tok).map_err(|m| self.err(line, col, m))?
            }
        };
        Ok(Some(Sexp { kind, line, col }))
    }
}

fn classify(tok: &str) -> Result<SexpKind, String> {
    if let Some(rest) = tok.strip_prefix("#b") {
        if rest.is_empty() || !rest.chars().all(|c| c == '0' || c == '1') {
            return Err(format!("malformed binary literal {tok}"));
        }
        return Ok(SexpKind::Binary(rest.to_string()));
    }
    if let Some(rest) = tok.strip_prefix("#x") {
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(format!("malformed hexadecimal literal {tok}"));
        }
        return Ok(SexpKind::Hex(rest.to_string()));
    }
    if let Some(rest) = tok.strip_prefix(':') {
        return Ok(SexpKind::Keyword(rest.to_string()));
    }
    if tok.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        if tok.chars().all(|c| c.is_ascii_digit()) {
            return Ok(SexpKind::Numeral(tok.to_string()));
        }
        if let Some((a, b)) = tok.split_once('.') {
            if !a.is_empty()
                && !b.is_empty()
                && a.chars().all(|c| c.is_ascii_digit())
                && b.chars().all(|c| c.is_ascii_digit())
            {
                return Ok(SexpKind::Decimal(tok.to_string()));
            }
        }
        return Err(format!("malformed numeric literal {tok}"));
    }
    Ok(SexpKind::Symbol(tok.to_string()))
}

/// Decodes `\u{X}` and `\uXXXX` escapes of SMT-LIB string literals.
fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '\\' && chars.get(i + 1) == Some(&'u') {
            let (hex, next) = if chars.get(i + 2) == Some(&'{') {
                let end = chars[i + 3..]
                    .iter()
                    .position(|&c| c == '}')
                    .map(|p| i + 3 + p);
                match end {
                    Some(end) if end > i + 3 && end - (i + 3) <= 5 => {
                        (chars[i + 3..end].iter().collect::<String>(), end + 1)
                    }
                    _ => {
                        out.push(chars[i]);
                        i += 1;
                        continue;
                    }
                }
            } else if i + 6 <= chars.len() && chars[i + 2..i + 6].iter().all(char::is_ascii_hexdigit) {
                (chars[i + 2..i + 6].iter().collect::<String>(), i + 6)
            } else {
                out.push(chars[i]);
                i += 1;
                continue;
            };
            let code = u32::from_str_radix(&hex, 16).map_err(|_| format!("bad escape \\u{{{hex}}}"))?;
            out.push(char::from_u32(code).ok_or_else(|| format!("bad code point {code:#x}"))?);
            i = next;
        } else {
            out.push(chars[i]);
            i += 1;
        }
    }
    Ok(out)
}

/// Reads every top-level s-expression of `text`.
pub fn parse_sexps(text: &str) -> Result<Vec<Sexp>, FrontendError> {
    let mut reader = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(s) = reader.read()? {
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = parse_sexps("; comment\n(assert (= x #b101))").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].line, s[0].col), (2, 1));
        let items = s[0].list().unwrap();
        assert!(items[0].is_symbol("assert"));
        let inner = items[1].list().unwrap();
        assert_eq!(inner[2].kind, SexpKind::Binary("101".into()));
    }

    #[test]
    fn strings_and_quoted_symbols() {
        let s = parse_sexps(r#""a""b" |x y| "\u{48}i""#).unwrap();
        assert_eq!(s[0].kind, SexpKind::Str("a\"b".into()));
        assert_eq!(s[1].kind, SexpKind::Symbol("x y".into()));
        assert_eq!(s[2].kind, SexpKind::Str("Hi".into()));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_sexps("(a\n  (b)").unwrap_err();
        assert!(matches!(err, FrontendError::Parse { line: 1, col: 1, .. }));
        let err = parse_sexps("x )").unwrap_err();
        assert!(matches!(err, FrontendError::Parse { line: 1, col: 3, .. }));
    }
}
