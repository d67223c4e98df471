//! Tokenizer shared by the model and blueprint file parsers.
//!
//! Both formats are brace-delimited blocks of `key = value` entries separated
//! by commas, semicolons or newlines. `#` starts a comment running to the end
//! of the line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Punct(char),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if "{}[]()=,;".contains(c) {
            i += 1;
            col += 1;
            Tok::Punct(c)
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(Error::parse(start_line, start_col, "unterminated string"))
                    }
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            Tok::Str(s)
        } else if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            let begin = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || "+-.".contains(chars[i]))
            {
                // a sign is only part of the number at the start or after an exponent
                if (chars[i] == '-' || chars[i] == '+')
                    && i > begin
                    && !matches!(chars[i - 1], 'e' | 'E')
                {
                    break;
                }
                i += 1;
            }
            let text: String = chars[begin..i].iter().collect();
            col += i - begin;
            let value = text.parse::<f64>().map_err(|_| {
                Error::parse(start_line, start_col, format!("malformed number `{text}`"))
            })?;
            Tok::Number(value)
        } else if c.is_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - begin;
            Tok::Ident(chars[begin..i].iter().collect())
        } else {
            return Err(Error::parse(
                start_line,
                start_col,
                format!("unexpected character `{c}`"),
            ));
        };
        out.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    Ok(out)
}

pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        let lines = src.lines().count().max(1);
        let last = src.lines().last().map_or(0, |l| l.chars().count());
        Ok(Cursor {
            tokens,
            pos: 0,
            end: (lines, last + 1),
        })
    }

    pub fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn next(&mut self) -> Result<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t.ok_or_else(|| Error::parse(self.end.0, self.end.1, "unexpected end of input"))
    }

    /// Location of the next token, for error reporting.
    pub fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse(l, c, message)
    }

    pub fn is_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Punct(p), .. }) if *p == c)
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    /// Skips any run of `,` and `;` separators.
    pub fn skip_separators(&mut self) {
        while self.eat_punct(',') || self.eat_punct(';') {}
    }

    pub fn ident(&mut self) -> Result<(String, usize, usize)> {
        let (l, c) = self.here();
        match self.next()?.tok {
            Tok::Ident(s) => Ok((s, l, c)),
            other => Err(Error::parse(l, c, format!("expected a name, found {other:?}"))),
        }
    }

    pub fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == name)
    }

    pub fn string(&mut self) -> Result<String> {
        let (l, c) = self.here();
        match self.next()?.tok {
            Tok::Str(s) => Ok(s),
            other => Err(Error::parse(l, c, format!("expected a quoted string, found {other:?}"))),
        }
    }

    pub fn number(&mut self) -> Result<f64> {
        let (l, c) = self.here();
        match self.next()?.tok {
            Tok::Number(v) => Ok(v),
            other => Err(Error::parse(l, c, format!("expected a number, found {other:?}"))),
        }
    }

    /// `[a, b, ...]` with an element parser.
    pub fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect_punct('[')?;
        let mut out = Vec::new();
        loop {
            if self.eat_punct(']') {
                return Ok(out);
            }
            out.push(item(self)?);
            if !self.eat_punct(',') && !self.is_punct(']') {
                return Err(self.error("expected `,` or `]`"));
            }
        }
    }
}
