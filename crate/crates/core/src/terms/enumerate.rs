use super::{RankedAlphabet, Symbol, TermError, Tree, Word};

/// All trees over `alphabet` with at most `max_nodes` nodes, each exactly once,
/// ordered by node count, then lexicographically by preorder label sequence
/// (letters compared by declaration order).
pub fn enumerate_trees(alphabet: &RankedAlphabet, max_nodes: usize) -> Result<Vec<Tree>, TermError> {
    if alphabet.nullary().next().is_none() {
        return Err(TermError::NoNullaryLetter);
    }
    let by_size = trees_by_size(alphabet, max_nodes);
    Ok(by_size.into_iter().flatten().collect())
}

/// `result[n]` holds the trees with exactly `n` nodes, in canonical order.
pub fn trees_by_size(alphabet: &RankedAlphabet, max_nodes: usize) -> Vec<Vec<Tree>> {
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(); max_nodes + 1];
    for n in 1..=max_nodes {
        let mut trees = Vec::new();
        for (letter, arity) in alphabet.letters() {
            if arity == 0 {
                if n == 1 {
                    trees.push(Tree::leaf(letter.clone()));
                }
                continue;
            }
            if n < 1 + arity {
                continue;
            }
            for sizes in compositions(n - 1, arity) {
                product(&sizes, &by_size, &mut Vec::new(), &mut |children| {
                    trees.push(Tree::node(letter.clone(), children.to_vec()));
                });
            }
        }
        trees.sort_by_cached_key(|t| preorder_key(t, alphabet));
        by_size[n] = trees;
    }
    by_size
}

fn preorder_key(t: &Tree, alphabet: &RankedAlphabet) -> Vec<usize> {
    t.preorder()
        .into_iter()
        .map(|s| alphabet.index_of(s.as_str()).unwrap_or(usize::MAX))
        .collect()
}

/// Ordered ways to write `total` as a sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product(sizes: &[usize], by_size: &[Vec<Tree>], acc: &mut Vec<Tree>, emit: &mut impl FnMut(&[Tree])) {
    match sizes.split_first() {
        None => emit(acc),
        Some((&s, rest)) => {
            for t in &by_size[s] {
                acc.push(t.clone());
                product(rest, by_size, acc, emit);
                acc.pop();
            }
        }
    }
}

/// All words over `symbols` of length at most `max_len`, by length then
/// lexicographically in the given symbol order.
pub fn enumerate_words(symbols: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut layer = vec![Word::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * symbols.len());
        for w in &layer {
            for s in symbols {
                let mut v = w.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(ts: &[Tree]) -> Vec<String> {
        ts.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn single_nullary() {
        let al = RankedAlphabet::new([("c", 0)]).unwrap();
        assert_eq!(strs(&enumerate_trees(&al, 2).unwrap()), ["c"]);
    }

    #[test]
    fn unary_chain() {
        let al = RankedAlphabet::new([("b", 1), ("c", 0)]).unwrap();
        assert_eq!(strs(&enumerate_trees(&al, 3).unwrap()), ["c", "b(c)", "b(b(c))"]);
    }

    #[test]
    fn canonical_order_uses_declaration_order() {
        let al = RankedAlphabet::new([("a", 2), ("b", 1), ("c", 0)]).unwrap();
        assert_eq!(
            strs(&enumerate_trees(&al, 4).unwrap()),
            [
                "c",
                "b(c)",
                "a(c,c)",
                "b(b(c))",
                "a(b(c),c)",
                "a(c,b(c))",
                "b(a(c,c))",
                "b(b(b(c)))"
            ]
        );
    }

    #[test]
    fn requires_a_nullary_letter() {
        let al = RankedAlphabet::new([("b", 1)]).unwrap();
        assert!(matches!(enumerate_trees(&al, 3), Err(TermError::NoNullaryLetter)));
    }

    #[test]
    fn words_in_length_then_lex_order() {
        let ab = [Symbol::from("a"), Symbol::from("b")];
        let ws: Vec<String> = enumerate_words(&ab, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }
}
