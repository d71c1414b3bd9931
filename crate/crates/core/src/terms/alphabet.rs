use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

use super::{Symbol, TermError};

/// Characters that cannot appear in any name (letters, states, registers...).
pub const RESERVED_CHARS: &[char] = &[
    '(', ')', ',', '<', '>', '|', '.', ';', ':', '{', '}', '=', '\'', '"', '#',
];

/// Checks the lexical rules shared by every kind of name in the definition formats.
pub fn validate_name(name: &str) -> Result<(), TermError> {
    let bad = |reason: &str| TermError::InvalidName {
        name: name.to_string(),
        reason: reason.to_string(),
    };
    if name.is_empty() {
        return Err(bad("empty"));
    }
    if let Some(c) = name
        .chars()
        .find(|c| c.is_whitespace() || RESERVED_CHARS.contains(c))
    {
        return Err(bad(&format!("contains reserved character {c:?}")));
    }
    if name.contains("->") {
        return Err(bad("contains \"->\""));
    }
    if name == "_" {
        return Err(bad("`_` is the wildcard"));
    }
    Ok(())
}

/// `x1`, `x2`, ... denote context parameters and cannot be letters.
pub fn is_parameter_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('x') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

/// A finite ranked alphabet. Declaration order is significant: it fixes the
/// canonical enumeration order of trees.
#[derive(Clone, PartialEq, Eq)]
pub struct RankedAlphabet {
    letters: IndexMap<Symbol, usize>,
    neutral: BTreeSet<Symbol>,
}

impl RankedAlphabet {
    pub fn new<I, S>(letters: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<Symbol>,
    {
        let mut map = IndexMap::new();
        for (name, arity) in letters {
            let name = name.into();
            validate_name(name.as_str())?;
            if is_parameter_name(name.as_str()) {
                return Err(TermError::InvalidName {
                    name: name.to_string(),
                    reason: "names of the form x<digits> are reserved for parameters".into(),
                });
            }
            if map.insert(name.clone(), arity).is_some() {
                return Err(TermError::DuplicateName(name.to_string()));
            }
        }
        Ok(RankedAlphabet {
            letters: map,
            neutral: BTreeSet::new(),
        })
    }

    /// Marks letters as neutral (erased by `yield`). Each must be nullary.
    pub fn with_neutral<I, S>(mut self, names: I) -> Result<Self, TermError>
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        for name in names {
            let name = name.into();
            match self.letters.get(&name) {
                None => return Err(TermError::UnknownLetter(name.to_string())),
                Some(&0) => {
                    self.neutral.insert(name);
                }
                Some(_) => return Err(TermError::NeutralNotNullary(name.to_string())),
            }
        }
        Ok(self)
    }

    pub fn arity(&self, letter: &str) -> Option<usize> {
        self.letters.get(letter).copied()
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.letters.get_index_of(letter)
    }

    pub fn letter(&self, index: usize) -> (&Symbol, usize) {
        let (s, a) = self.letters.get_index(index).expect("letter index in range");
        (s, *a)
    }

    pub fn letters(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.letters.iter().map(|(s, a)| (s, *a))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: &str) -> bool {
        self.letters.contains_key(letter)
    }

    pub fn is_neutral(&self, letter: &str) -> bool {
        self.neutral.contains(letter)
    }

    pub fn neutral(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.neutral.iter()
    }

    pub fn max_arity(&self) -> usize {
        self.letters.values().copied().max().unwrap_or(0)
    }

    pub fn nullary(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.letters.iter().filter(|(_, a)| **a == 0).map(|(s, _)| s)
    }

    /// True when every letter of `self` is a letter of `other` with the same arity.
    pub fn is_subset_of(&self, other: &RankedAlphabet) -> bool {
        self.letters
            .iter()
            .all(|(s, a)| other.letters.get(s) == Some(a))
    }

    /// Same letters with the same arities, ignoring declaration order.
    pub fn same_letters(&self, other: &RankedAlphabet) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// For an alphabet of unary letters plus exactly one nullary end marker,
    /// returns that end marker.
    pub fn string_end_marker(&self) -> Option<&Symbol> {
        if self.letters.values().any(|&a| a > 1) {
            return None;
        }
        let mut nullary = self.nullary();
        let end = nullary.next()?;
        if nullary.next().is_some() {
            return None;
        }
        Some(end)
    }

    /// The unary letters (in declaration order).
    pub fn unary_letters(&self) -> impl Iterator<Item = &Symbol> + '_ {
        self.letters.iter().filter(|(_, a)| **a == 1).map(|(s, _)| s)
    }

    /// Builds the string-encoding alphabet: one unary letter per symbol plus the
    /// nullary end marker.
    pub fn unary_for(symbols: &[Symbol], end: &Symbol) -> Result<Self, TermError> {
        let letters = symbols
            .iter()
            .cloned()
            .map(|s| (s, 1))
            .chain(std::iter::once((end.clone(), 0)));
        RankedAlphabet::new(letters)
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, a)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}:{a}")?;
            if self.neutral.contains(s) {
                f.write_str(" neutral")?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reserved_names() {
        assert!(RankedAlphabet::new([("a(b", 0)]).is_err());
        assert!(RankedAlphabet::new([("x1", 0)]).is_err());
        assert!(RankedAlphabet::new([("a b", 0)]).is_err());
        assert!(RankedAlphabet::new([("a->b", 0)]).is_err());
        assert!(RankedAlphabet::new([("a", 0), ("a", 1)]).is_err());
        assert!(RankedAlphabet::new([("x", 0), ("r+", 1), ("r-", 0)]).is_ok());
    }

    #[test]
    fn neutral_letters_must_be_nullary() {
        let abc = RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).unwrap();
        assert!(abc.clone().with_neutral(["b"]).is_err());
        assert!(abc.clone().with_neutral(["z"]).is_err());
        let n = abc.with_neutral(["c"]).unwrap();
        assert!(n.is_neutral("c"));
        assert_eq!(n.to_string(), "{a:2,b:1,c:0 neutral}");
    }

    #[test]
    fn end_marker_detection() {
        let u = RankedAlphabet::new([("a", 1), ("b", 1), ("e", 0)]).unwrap();
        assert_eq!(u.string_end_marker().unwrap().as_str(), "e");
        let abc = RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).unwrap();
        assert!(abc.string_end_marker().is_none());
        let two = RankedAlphabet::new([("a", 1), ("e", 0), ("f", 0)]).unwrap();
        assert!(two.string_end_marker().is_none());
    }
}
