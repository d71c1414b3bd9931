use super::alphabet::{is_parameter_name, RESERVED_CHARS};
use super::{Context, RankedAlphabet, Symbol, Term, TermError, Tree};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn error(&self, message: impl Into<String>) -> TermError {
        TermError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TermError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn name(&mut self) -> Result<(usize, &'a str), TermError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            if c.is_whitespace() || RESERVED_CHARS.contains(&c) || rest[i..].starts_with("->") {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos = start + end;
        Ok((start, &rest[..end]))
    }
}

enum Raw<'a> {
    Node(usize, &'a str, Vec<Raw<'a>>),
}

fn raw_term<'a>(cur: &mut Cursor<'a>) -> Result<Raw<'a>, TermError> {
    let (pos, name) = cur.name()?;
    let mut children = Vec::new();
    if cur.peek() == Some('(') {
        cur.expect('(')?;
        loop {
            children.push(raw_term(cur)?);
            match cur.peek() {
                Some(',') => cur.expect(',')?,
                Some(')') => {
                    cur.expect(')')?;
                    break;
                }
                _ => return Err(cur.error("expected ',' or ')'")),
            }
        }
    }
    Ok(Raw::Node(pos, name, children))
}

fn parse_raw(text: &str) -> Result<Raw<'_>, TermError> {
    let mut cur = Cursor { text, pos: 0 };
    let raw = raw_term(&mut cur)?;
    if cur.peek().is_some() {
        return Err(cur.error("trailing input"));
    }
    Ok(raw)
}

fn to_term(raw: &Raw<'_>, alphabet: &RankedAlphabet, arity: usize) -> Result<Term, TermError> {
    let Raw::Node(pos, name, children) = raw;
    if is_parameter_name(name) && !alphabet.contains(name) {
        let index: usize = name[1..]
            .parse()
            .map_err(|_| TermError::Syntax { pos: *pos, message: format!("bad parameter {name}") })?;
        if !children.is_empty() {
            return Err(TermError::Syntax {
                pos: *pos,
                message: "parameters have no children".into(),
            });
        }
        if index == 0 || index > arity {
            return Err(TermError::ParamOutOfRange { index, arity });
        }
        return Ok(Term::Param(index - 1));
    }
    match alphabet.arity(name) {
        None => Err(TermError::UnknownLetter(name.to_string())),
        Some(a) if a != children.len() => Err(TermError::ArityMismatch {
            letter: name.to_string(),
            expected: a,
            found: children.len(),
        }),
        Some(_) => Ok(Term::Node(
            Symbol::from(*name),
            children
                .iter()
                .map(|c| to_term(c, alphabet, arity))
                .collect::<Result<_, _>>()?,
        )),
    }
}

/// Parses `term := name | name '(' term (',' term)* ')'` and checks arities.
pub fn parse_term(text: &str, alphabet: &RankedAlphabet) -> Result<Tree, TermError> {
    let raw = parse_raw(text)?;
    let term = to_term(&raw, alphabet, 0)?;
    Ok(term.to_tree().expect("arity-0 term has no parameters"))
}

/// Parses a context body in which `x1..x{arity}` denote parameters.
pub fn parse_context(
    text: &str,
    alphabet: &RankedAlphabet,
    arity: usize,
) -> Result<Context, TermError> {
    let raw = parse_raw(text)?;
    Context::new(arity, to_term(&raw, alphabet, arity)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> RankedAlphabet {
        RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).unwrap()
    }

    #[test]
    fn parses_leaf_and_nested() {
        let t = parse_term("c", &abc()).unwrap();
        assert_eq!(t, Tree::leaf("c"));
        let t = parse_term("a(b(c),c)", &abc()).unwrap();
        assert_eq!(
            t,
            Tree::node("a", vec![Tree::node("b", vec![Tree::leaf("c")]), Tree::leaf("c")])
        );
        assert_eq!(t.to_string(), "a(b(c),c)");
        assert_eq!(parse_term(" a( b(c) , c ) ", &abc()).unwrap(), t);
    }

    #[test]
    fn arity_and_letter_errors() {
        assert!(matches!(
            parse_term("a(b,c)", &abc()),
            Err(TermError::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_term("d", &abc()),
            Err(TermError::UnknownLetter(_))
        ));
        match parse_term("a(c,", &abc()) {
            Err(TermError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_term("c c", &abc()), Err(TermError::Syntax { .. })));
    }

    #[test]
    fn parses_contexts() {
        let ctx = parse_context("a(x1,b(x2))", &abc(), 2).unwrap();
        assert_eq!(ctx.arity(), 2);
        assert_eq!(ctx.to_string(), "a(x1,b(x2))");
        assert!(parse_context("a(x1,x3)", &abc(), 2).is_err());
        assert!(parse_context("x1(c)", &abc(), 1).is_err());
    }
}
