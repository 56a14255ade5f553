use num_bigint::BigInt;

use super::{Gen, Word};

/// Malformed word text. `pos` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

/// Parse a word.
///
/// ```text
/// word := item+
/// item := atom pow?
/// atom := 'x' | 't' | '1' | '(' word ')' | 'c(' word ',' word ')' | 'k(' word ',' word ')'
/// pow  := '^' int
/// ```
///
/// `c(u,v)` is `v^-1 u v` and `k(u,v)` is `u^-1 v^-1 u v`. Whitespace may
/// separate any two tokens.
pub fn parse_word(text: &str) -> Result<Word, SyntaxError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SyntaxError {
        SyntaxError {
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

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> Result<Word, SyntaxError> {
        let mut w = Word::identity();
        let mut items = 0;
        while let Some(c) = self.peek() {
            if matches!(c, b')' | b',') {
                break;
            }
            w = w.mul(&self.item()?);
            items += 1;
        }
        if items == 0 {
            return Err(self.err("expected a word"));
        }
        Ok(w)
    }

    fn item(&mut self) -> Result<Word, SyntaxError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            return match atom.runs() {
                [] => Ok(atom),
                [(g, a)] => Ok(Word::gen_pow(*g, a * e)),
                _ => {
                    let k = i64::try_from(&e)
                        .map_err(|_| self.err("exponent too large for a compound word"))?;
                    Ok(atom.pow(k))
                }
            };
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word, SyntaxError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Word::gen_pow(Gen::X, 1))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Word::gen_pow(Gen::T, 1))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(c @ (b'c' | b'k')) => {
                self.pos += 1;
                self.expect(b'(')?;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b')')?;
                Ok(if c == b'c' {
                    u.conj(&v)
                } else {
                    Word::commutator(&u, &v)
                })
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<BigInt, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.err("expected an integer exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        s.parse::<BigInt>().map_err(|_| SyntaxError {
            pos: start,
            msg: "bad integer".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_tokens() {
        let w = parse_word("x^3 t^-2").unwrap();
        assert_eq!(
            w.runs(),
            &[(Gen::X, BigInt::from(3)), (Gen::T, BigInt::from(-2))]
        );
    }

    #[test]
    fn knot_relator() {
        let w = parse_word("c(x^-3,t) x^2 c(x^2,t^2)").unwrap();
        assert_eq!(w.to_string(), "t^-1 x^-3 t x^2 t^-2 x^2 t^2");
    }

    #[test]
    fn commutator() {
        assert_eq!(parse_word("k(x,t)").unwrap().to_string(), "x^-1 t^-1 x t");
        assert_eq!(
            parse_word("k(x, c(x,t))").unwrap().to_string(),
            "x^-1 t^-1 x^-1 t x t^-1 x t"
        );
    }

    #[test]
    fn powers_of_groups() {
        assert_eq!(parse_word("(x t)^-2").unwrap().to_string(), "t^-1 x^-1 t^-1 x^-1");
        assert_eq!(parse_word("xt").unwrap().to_string(), "x t");
        assert!(parse_word("x^0").unwrap().is_identity());
        assert_eq!(
            parse_word("x^123456789012345678901234567890").unwrap().runs()[0].1,
            "123456789012345678901234567890".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_word("x^").unwrap_err().pos, 2);
        assert_eq!(parse_word("x y").unwrap_err().pos, 2);
        assert_eq!(parse_word("c(x t)").unwrap_err().pos, 5);
        assert!(parse_word("").is_err());
        assert!(parse_word("(x").is_err());
        assert!(parse_word("x)").is_err());
    }
}
