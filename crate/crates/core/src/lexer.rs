//! Tokenizer shared by the group, formula, series and polynomial grammars.

use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(&'static str),
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(s) => write!(f, "{s}"),
        }
    }
}

const SYMBOLS: &[&str] =
    &["/\\", "\\/", "<=", ">=", "!=", "(", ")", "{", "}", ",", ":", "+", "-", "*", "/", "^", "<", ">", "=", "~", "."];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unexpected character {ch:?} at byte {pos}")]
pub struct LexError {
    pub ch: char,
    pub pos: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Tok>, LexError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(text[start..i].parse().expect("digits")));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(text[start..i].to_string()));
            continue;
        }
        for sym in SYMBOLS {
            if text[i..].starts_with(sym) {
                out.push(Tok::Sym(sym));
                i += sym.len();
                continue 'outer;
            }
        }
        let ch = text[i..].chars().next().unwrap_or('?');
        return Err(LexError { ch, pos: i });
    }
    Ok(out)
}

/// Cursor over a token slice with small lookahead helpers.
#[derive(Clone)]
pub struct Cursor<'a> {
    toks: &'a [Tok],
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Tok]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_ident(&mut self, s: &str) -> bool {
        if self.is_ident(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn describe(&self) -> String {
        match self.peek() {
            Some(t) => format!("'{t}' (token {})", self.pos),
            None => "end of input".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_connectives() {
        let t = tokenize("x <= y /\\ ~cong(y,2,0) \\/ in_H(x,1)").unwrap();
        assert!(t.contains(&Tok::Sym("/\\")));
        assert!(t.contains(&Tok::Sym("\\/")));
        assert!(t.contains(&Tok::Ident("in_H".into())));
        assert!(t.contains(&Tok::Sym("<=")));
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(tokenize("x # y").is_err());
    }
}
