use thiserror::Error;

use super::{MetaVar, Scheme, Term};

/// A syntax error with the byte offset where it was detected.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Characters allowed in symbol and meta-variable names.
pub fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '?' | ';' | '{' | '}' | '[' | ']' | '"' | ':')
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected an identifier");
        }
        Ok(&self.src[start..self.pos])
    }

    fn scheme(&mut self) -> Result<Scheme, ParseError> {
        self.skip_ws();
        if self.peek() == Some('?') {
            self.pos += 1;
            let name = self.ident()?;
            if name.contains('=') {
                return self.err("meta-variable names may not contain `=`");
            }
            return Ok(Scheme::Var(MetaVar::new(name)));
        }
        let head = self.ident()?;
        self.skip_ws();
        let mut args = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                args.push(self.scheme()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected `,` or `)`"),
                }
            }
        }
        Ok(Scheme::App(head.into(), args))
    }
}

/// Parses a scheme: `name`, `name(s1,...,sk)` or `?var`.
pub fn parse_scheme(src: &str) -> Result<Scheme, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let s = p.scheme()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("trailing input");
    }
    Ok(s)
}

/// Parses a ground term; meta-variables are rejected.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let s = parse_scheme(src)?;
    s.to_term().ok_or_else(|| ParseError {
        offset: src.find('?').unwrap_or(0),
        message: "meta-variable in a ground term".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_insensitive() {
        let a = parse_term(" imp ( a ,\n f( b ) ) ").unwrap();
        assert_eq!(a.to_string(), "imp(a,f(b))");
    }

    #[test]
    fn unicode_names() {
        let a = parse_term("→(a,∧(b,c))").unwrap();
        assert_eq!(a.args().len(), 2);
        assert_eq!(a.head(), "→");
    }

    #[test]
    fn errors() {
        assert!(parse_term("f(a").is_err());
        assert!(parse_term("f(a))").is_err());
        assert!(parse_term("f(?x)").is_err());
        assert!(parse_term("").is_err());
        assert!(parse_scheme("f(,a)").is_err());
        assert_eq!(parse_scheme("f(?x, a)").unwrap().to_string(), "f(?x,a)");
    }
}
