use std::collections::BTreeSet;

use super::{checked_pow, OracleError, MAX_ENUMERATION};
use crate::blocks::BlockType;
use crate::model::NormalLcl;
use crate::relation::Relation;

/// Types of all `σ`-blocks with at most `max_len` letters, each computed by
/// searching paths in the input graph restricted to the block.
pub fn oracle_block_types(
    p: &NormalLcl,
    sigma: usize,
    max_len: usize,
) -> Result<BTreeSet<BlockType>, OracleError> {
    if sigma >= p.nin() {
        return Err(OracleError::Scope(format!("unknown letter {sigma}")));
    }
    let words = (1..max_len.max(1)).try_fold(0u64, |acc, l| {
        checked_pow(p.nin(), l).and_then(|c| acc.checked_add(c))
    });
    if words.is_none_or(|w| w > MAX_ENUMERATION) {
        return Err(OracleError::Budget(format!(
            "{} input letters, blocks up to length {max_len}",
            p.nin()
        )));
    }
    let mut out = BTreeSet::new();
    let mut word = vec![sigma];
    extend(p, sigma, max_len, &mut word, &mut out);
    Ok(out)
}

fn extend(p: &NormalLcl, sigma: usize, max_len: usize, word: &mut Vec<usize>, out: &mut BTreeSet<BlockType>) {
    if word.len() >= 2 && word[word.len() - 1] == sigma {
        out.insert(BlockType(type_by_search(p, word)));
    }
    if word.len() == max_len {
        return;
    }
    for b in 0..p.nin() {
        word.push(b);
        extend(p, sigma, max_len, word, out);
        word.pop();
    }
}

/// `(a, b)` is in the type iff a path of the layered graph joins `(0, a)` and
/// `(t, b)`; found by a depth-first search from every start.
fn type_by_search(p: &NormalLcl, word: &[usize]) -> Relation {
    let k = p.nout();
    let t = word.len() - 1;
    let mut pairs = Vec::new();
    for a in 0..k {
        let mut seen = vec![vec![false; k]; t + 1];
        let mut stack = vec![(0usize, a)];
        seen[0][a] = true;
        while let Some((i, x)) = stack.pop() {
            if i == t {
                continue;
            }
            for y in 0..k {
                if !seen[i + 1][y] && p.allows(word[i], word[i + 1], x, y) {
                    seen[i + 1][y] = true;
                    stack.push((i + 1, y));
                }
            }
        }
        for b in 0..k {
            if seen[t][b] {
                pairs.push((a, b));
            }
        }
    }
    Relation::from_pairs(k, pairs)
}
