//! Text form of words.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! product := factor ( '*'? factor )*
//! factor  := atom ( '^' integer )?
//! atom    := name | '1' | '(' product ')' | '[' product ',' product ']'
//! ```
//!
//! `[u,v]` is `u v u^-1 v^-1`. The printer emits names joined by `*` with
//! inverses as `name^-1` and the identity as `1`; parsing the printed form
//! gives back the same word.

use super::{push_reduced, FreeWord, Letter};
use crate::error::{Error, Result};

/// Generator names for a free group of fixed rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// `x1, x2, ..., x{rank}`.
    Standard { rank: u32 },
    /// Explicit names; generator `i` is `names[i - 1]`.
    Named(Vec<String>),
}

impl Alphabet {
    pub fn standard(rank: u32) -> Self {
        Alphabet::Standard { rank }
    }

    pub fn named<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Alphabet::Named(names.into_iter().map(Into::into).collect())
    }

    pub fn rank(&self) -> u32 {
        match self {
            Alphabet::Standard { rank } => *rank,
            Alphabet::Named(n) => n.len() as u32,
        }
    }

    pub fn name(&self, generator: u32) -> String {
        match self {
            Alphabet::Standard { .. } => format!("x{generator}"),
            Alphabet::Named(n) => n[generator as usize - 1].clone(),
        }
    }

    fn lookup(&self, name: &str) -> Option<u32> {
        match self {
            Alphabet::Standard { rank } => {
                let i: u32 = name.strip_prefix('x')?.parse().ok()?;
                (i >= 1 && i <= *rank).then_some(i)
            }
            Alphabet::Named(n) => n.iter().position(|s| s == name).map(|p| p as u32 + 1),
        }
    }

    pub fn format(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = letters
            .iter()
            .map(|l| {
                let name = self.name(l.generator());
                if l.is_positive() {
                    name
                } else {
                    format!("{name}^-1")
                }
            })
            .collect();
        parts.join("*")
    }

    pub fn parse(&self, text: &str) -> Result<FreeWord> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, alphabet: self };
        let letters = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(FreeWord::from_letters_unchecked(self.rank(), letters))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

fn invert(v: &[Letter]) -> Vec<Letter> {
    v.iter().rev().map(|l| l.inverse()).collect()
}

fn append(buf: &mut Vec<Letter>, v: &[Letter]) {
    for &l in v {
        push_reduced(buf, l);
    }
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn product(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => return Ok(out),
                Some(b'*') => {
                    self.pos += 1;
                    if matches!(self.peek(), None | Some(b')' | b']' | b',' | b'*')) {
                        return Err(self.error("dangling '*'"));
                    }
                }
                _ => {
                    let f = self.factor()?;
                    append(&mut out, &f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Vec<Letter>> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.integer()?;
        let unit = if e < 0 { invert(&base) } else { base };
        let mut out = Vec::new();
        for _ in 0..e.unsigned_abs() {
            append(&mut out, &unit);
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse { pos: start, msg: "expected integer".into() })
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.product()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(b',')?;
                let b = self.product()?;
                self.expect(b']')?;
                let mut out = Vec::new();
                append(&mut out, &a);
                append(&mut out, &b);
                append(&mut out, &invert(&a));
                append(&mut out, &invert(&b));
                Ok(out)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_'
                        || self.src[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.alphabet.lookup(name) {
                    Some(i) => Ok(vec![Letter::raw(i as i32)]),
                    None => Err(Error::Parse { pos: start, msg: format!("unknown generator '{name}'") }),
                }
            }
            _ => Err(self.error("expected generator, '1', '(' or '['")),
        }
    }
}
