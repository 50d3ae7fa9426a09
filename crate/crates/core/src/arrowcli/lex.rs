//! Tokens shared by the term and program syntaxes.

use std::fmt;

/// A source position, 1-based. Positions never take part in equality, so
/// syntax trees compare by shape alone.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 13] = ["<-", "-<", "->", "(", ")", "{", "}", ",", ";", "=", ":", "*", "_"];

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

/// Splits `text` into tokens. `--` starts a comment running to the end of
/// the line.
pub fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, (Pos, String)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let pos = Pos { line: i + 1, col: k + 1 };
            let c = chars[k];
            if c.is_whitespace() {
                k += 1;
                continue;
            }
            if c == '-' && chars.get(k + 1) == Some(&'-') {
                break;
            }
            if ident_char(c) && !(c == '_' && !chars.get(k + 1).is_some_and(|&d| ident_char(d))) {
                let start = k;
                while k < chars.len() && ident_char(chars[k]) {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().collect()), pos));
                continue;
            }
            let rest: String = chars[k..chars.len().min(k + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push((Tok::Sym(s), pos));
                    k += s.chars().count();
                }
                None => return Err((pos, format!("unexpected character `{c}`"))),
            }
        }
    }
    Ok(out)
}

/// A cursor over lexed tokens.
pub struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, (Pos, String)> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let end = Pos { line: lines, col: text.lines().last().map_or(0, |l| l.chars().count()) + 1 };
        Ok(Cursor { toks, at: 0, end })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.at + k).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    pub fn done(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.at += 1;
        t
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == w)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.at += 1;
        }
        hit
    }

    pub fn unexpected(&self, wanted: &str) -> (Pos, String) {
        match self.peek() {
            Some(t) => (self.pos(), format!("expected {wanted}, found {t}")),
            None => (self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), (Pos, String)> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), (Pos, String)> {
        if self.is_word(w) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Pos), (Pos, String)> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_and_comments() {
        let toks: Vec<Tok> = lex("y <- f -< x; -- note\n_ -> z").unwrap().into_iter().map(|(t, _)| t).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("y".into()),
                Tok::Sym("<-"),
                Tok::Ident("f".into()),
                Tok::Sym("-<"),
                Tok::Ident("x".into()),
                Tok::Sym(";"),
                Tok::Sym("_"),
                Tok::Sym("->"),
                Tok::Ident("z".into()),
            ]
        );
    }

    #[test]
    fn underscore_names_stay_whole() {
        let toks = lex("sigma_R_A _x").unwrap();
        assert_eq!(toks[0].0, Tok::Ident("sigma_R_A".into()));
        assert_eq!(toks[1].0, Tok::Ident("_x".into()));
    }

    #[test]
    fn bad_character_has_a_position() {
        let (pos, msg) = lex("a\n  b ?").unwrap_err();
        assert_eq!((pos.line, pos.col), (2, 5));
        assert!(msg.contains('?'));
    }
}
