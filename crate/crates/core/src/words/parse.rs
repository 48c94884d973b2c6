//! Recursive-descent parser for the word grammar.
//!
//! ```text
//! word  := item*
//! item  := atom ('^' int)?
//! atom  := T(i,..) | Y(a,b) | A(i,j) | B(i,j) | C(i,j;k) | D(1,j,k,l)
//!        | Bname(i,j) | Gamma | delta(k) | eps(j,k) | zeta(k,l)
//!        | zetabar(k,l) | eta(i,j;k) | alpha(i;l)
//!        | [word, word] | conj(word, word) | (word) | 1
//! ```

use super::{BoundaryLetter, Letter, McgWord, NamedLetter, WordError};
use crate::homology::{Generator, TorelliTag};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    g: usize,
}

pub(super) fn parse_word(text: &str, g: usize) -> Result<McgWord, WordError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        g,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(w)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<McgWord, WordError> {
        let mut acc = McgWord::identity(self.g);
        loop {
            match self.peek() {
                None | Some(b',') | Some(b']') | Some(b')') => return Ok(acc),
                _ => {
                    let item = self.item()?;
                    acc = acc.mul(&item)?;
                }
            }
        }
    }

    fn item(&mut self) -> Result<McgWord, WordError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.exponent()?;
            Ok(atom.pow(e))
        } else {
            Ok(atom)
        }
    }

    fn exponent(&mut self) -> Result<i64, WordError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.signed_int()?;
            self.expect(b')')?;
            Ok(e)
        } else {
            self.signed_int()
        }
    }

    fn signed_int(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| WordError::Syntax {
                pos: start,
                msg: "expected integer".into(),
            })
    }

    fn index(&mut self) -> Result<usize, WordError> {
        let start = self.pos;
        let v = self.signed_int()?;
        usize::try_from(v).map_err(|_| WordError::Syntax {
            pos: start,
            msg: "expected non-negative index".into(),
        })
    }

    /// Comma- or semicolon-separated indices; returns groups split at ';'.
    fn index_list(&mut self) -> Result<Vec<Vec<usize>>, WordError> {
        self.expect(b'(')?;
        let mut groups = vec![Vec::new()];
        loop {
            let i = self.index()?;
            groups.last_mut().expect("non-empty").push(i);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b';') => {
                    self.pos += 1;
                    groups.push(Vec::new());
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(groups);
                }
                _ => return Err(self.error("expected ',', ';' or ')'")),
            }
        }
    }

    fn shaped(&self, groups: Vec<Vec<usize>>, shape: &[usize], start: usize) -> Result<Vec<usize>, WordError> {
        let lens: Vec<usize> = groups.iter().map(Vec::len).collect();
        if lens != shape {
            return Err(WordError::Syntax {
                pos: start,
                msg: format!("wrong index pattern {lens:?}, expected {shape:?}"),
            });
        }
        Ok(groups.into_iter().flatten().collect())
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn single(&self, letter: Letter, start: usize) -> Result<McgWord, WordError> {
        McgWord::letter(self.g, letter, 1).map_err(|e| match e {
            WordError::Syntax { .. } => e,
            other => WordError::Syntax {
                pos: start,
                msg: other.to_string(),
            },
        })
    }

    fn atom(&mut self) -> Result<McgWord, WordError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                return McgWord::commutator(&a, &b);
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b')')?;
                return Ok(a);
            }
            Some(b'1') => {
                self.pos += 1;
                return Ok(McgWord::identity(self.g));
            }
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(self.error("expected a letter")),
        }
        let name = self.ident();
        let letter = match name.as_str() {
            "Gamma" => Letter::Gen(Generator::Torelli(TorelliTag::Gamma)),
            "conj" => {
                self.expect(b'(')?;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b')')?;
                return McgWord::conjugate(&a, &b);
            }
            "T" => {
                let groups = self.index_list()?;
                if groups.len() != 1 {
                    return Err(WordError::Syntax {
                        pos: start,
                        msg: "twist indices use ',' only".into(),
                    });
                }
                let mut s = groups.into_iter().next().expect("one group");
                s.sort_unstable();
                Letter::Gen(Generator::Twist(s))
            }
            "Y" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::slide(v[0], v[1])
            }
            "A" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Named(NamedLetter::A(v[0], v[1]))
            }
            "B" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Named(NamedLetter::B(v[0], v[1]))
            }
            "C" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2, 1], start))?;
                Letter::Named(NamedLetter::C(v[0], v[1], v[2]))
            }
            "D" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[4], start))?;
                if v[0] != 1 {
                    return Err(WordError::Syntax {
                        pos: start,
                        msg: "D family requires first index 1".into(),
                    });
                }
                Letter::Named(NamedLetter::D(v[1], v[2], v[3]))
            }
            "Bname" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Gen(Generator::Torelli(TorelliTag::Beta(v[0], v[1])))
            }
            "delta" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[1], start))?;
                Letter::Boundary(BoundaryLetter::Delta(v[0]))
            }
            "eps" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Boundary(BoundaryLetter::Epsilon(v[0], v[1]))
            }
            "zeta" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Boundary(BoundaryLetter::Zeta(v[0], v[1]))
            }
            "zetabar" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2], start))?;
                Letter::Boundary(BoundaryLetter::ZetaBar(v[0], v[1]))
            }
            "eta" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[2, 1], start))?;
                Letter::Boundary(BoundaryLetter::Eta(v[0], v[1], v[2]))
            }
            "alpha" => {
                let v = self.index_list().and_then(|g| self.shaped(g, &[1, 1], start))?;
                Letter::Boundary(BoundaryLetter::AlphaPunct(v[0], v[1]))
            }
            _ => {
                return Err(WordError::Syntax {
                    pos: start,
                    msg: format!("unknown letter {name:?}"),
                })
            }
        };
        self.single(letter, start)
    }
}
