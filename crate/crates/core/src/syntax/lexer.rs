use crate::terms::RESERVED_CHARS;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    Name(String),
    /// A quoted symbol; the empty quote denotes the empty string.
    Quoted(String),
    Punct(char),
    Arrow,
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// `#` starts a comment running to the end of the line.
pub(super) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut line_start) = (1, 0);
    while let Some(&(i, c)) = chars.peek() {
        let col = text[line_start..i].chars().count() + 1;
        let at = |tok| Token { tok, line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = i + 1;
        } else if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
        } else if text[i..].starts_with("->") {
            chars.next();
            chars.next();
            out.push(at(Tok::Arrow));
        } else if c == '\'' || c == '"' {
            chars.next();
            let start = i + 1;
            let end = loop {
                match chars.next() {
                    Some((j, d)) if d == c => break j,
                    Some((_, '\n')) | None => {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            message: "unterminated quote".into(),
                        })
                    }
                    Some(_) => {}
                }
            };
            out.push(at(Tok::Quoted(text[start..end].to_string())));
        } else if RESERVED_CHARS.contains(&c) {
            chars.next();
            out.push(at(Tok::Punct(c)));
        } else {
            let start = i;
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_whitespace() || RESERVED_CHARS.contains(&d) || text[j..].starts_with("->") {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push(at(Tok::Name(text[start..end].to_string())));
        }
    }
    Ok(out)
}
