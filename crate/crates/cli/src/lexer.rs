//! Tokens for the session grammar. Newlines are significant except inside
//! brackets and braces, so long complexes can span several lines.

use crate::error::{CliError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte span in the source.
    pub start: usize,
    pub end: usize,
}

const PUNCT: [&str; 16] = ["->", "..", "=", "|", ",", ":", "{", "}", "[", "]", "^", "*", "+", "-", "(", ")"];

pub fn tokenize(src: &str) -> Result<Vec<Token>, CliError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    let mut depth = 0i32;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = Pos { line, col: src[line_start..i].chars().count() + 1 };
        match c {
            b'\n' => {
                if depth == 0 {
                    out.push(Token { tok: Tok::Newline, pos, start: i, end: i + 1 });
                }
                i += 1;
                line += 1;
                line_start = i;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() => i += 1,
            c if c.is_ascii_digit() => {
                let s = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v = src[s..i]
                    .parse::<i64>()
                    .map_err(|_| CliError::parse(pos, format!("integer `{}` is too large", &src[s..i])))?;
                out.push(Token { tok: Tok::Int(v), pos, start: s, end: i });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let s = i;
                while i < bytes.len() {
                    let b = bytes[i];
                    let hyphen = b == b'-' && bytes.get(i + 1).is_some_and(|n| n.is_ascii_alphabetic());
                    if b.is_ascii_alphanumeric() || b == b'_' || hyphen {
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Ident(src[s..i].to_string()), pos, start: s, end: i });
            }
            _ => {
                let p = PUNCT.iter().find(|p| src[i..].starts_with(**p)).ok_or_else(|| {
                    CliError::parse(pos, format!("unexpected character `{}`", src[i..].chars().next().unwrap()))
                })?;
                match *p {
                    "[" | "{" | "(" => depth += 1,
                    "]" | "}" | ")" => depth -= 1,
                    _ => {}
                }
                out.push(Token { tok: Tok::Punct(p), pos, start: i, end: i + p.len() });
                i += p.len();
            }
        }
    }
    let pos = Pos { line, col: src[line_start..].chars().count() + 1 };
    out.push(Token { tok: Tok::Newline, pos, start: src.len(), end: src.len() });
    out.push(Token { tok: Tok::Eof, pos, start: src.len(), end: src.len() });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyphenated_words_and_windows() {
        let t: Vec<Tok> = tokenize("complete-res M -2..3 C->D").unwrap().into_iter().map(|t| t.tok).collect();
        assert_eq!(t[0], Tok::Ident("complete-res".into()));
        assert_eq!(t[2], Tok::Punct("-"));
        assert_eq!(t[3], Tok::Int(2));
        assert_eq!(t[4], Tok::Punct(".."));
        assert_eq!(t[6], Tok::Ident("C".into()));
        assert_eq!(t[7], Tok::Punct("->"));
    }

    #[test]
    fn newlines_inside_brackets_are_dropped() {
        let t = tokenize("a [[x,\n y]]\nb").unwrap();
        let lines = t.iter().filter(|t| t.tok == Tok::Newline).count();
        assert_eq!(lines, 2);
        assert_eq!(t.last().unwrap().pos.line, 3);
    }

    #[test]
    fn positions_are_one_based() {
        let err = tokenize("ring Q\n  @").unwrap_err();
        assert_eq!(err.to_string(), "2:3: unexpected character `@`");
    }
}
