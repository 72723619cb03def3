//! Built-in example problems.

use crate::gen::BlockFamily;
use crate::model::{Alphabet, GeneralLcl, NormalLcl};

fn alpha(labels: &[&str]) -> Alphabet {
    Alphabet::new(labels.iter().copied()).expect("catalog alphabets are valid")
}

/// No-input problem whose allowed pairs are exactly `pairs`.
pub fn no_input(name: &str, outputs: &[&str], pairs: &[(usize, usize)]) -> NormalLcl {
    NormalLcl::with_allowed(
        name,
        alpha(&["u"]),
        alpha(outputs),
        pairs.iter().map(|&(x, y)| (0, 0, x, y)),
    )
}

/// Single output `R` with a self-loop.
pub fn all_red() -> NormalLcl {
    no_input("all-red", &["R"], &[(0, 0)])
}

/// Two isolated self-loop states: label everything 1 or everything 2.
pub fn two_constants() -> NormalLcl {
    no_input("two-constants", &["1", "2"], &[(0, 0), (1, 1)])
}

pub fn two_coloring() -> NormalLcl {
    no_input("2-coloring", &["W", "B"], &[(0, 1), (1, 0)])
}

pub fn three_coloring() -> NormalLcl {
    let pairs: Vec<_> = (0..3)
        .flat_map(|x| (0..3).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    no_input("3-coloring", &["1", "2", "3"], &pairs)
}

/// Mark every `k`-th node: the directed `k`-cycle `1 → 2 → ... → k → 1`.
pub fn mark_kth(k: usize) -> NormalLcl {
    assert!(k >= 1);
    let labels: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let pairs: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    no_input(&format!("mark-{k}th"), &refs, &pairs)
}

/// Maximal independent set. `0P`: previous node is in the set; `0N`: next is.
pub fn mis() -> NormalLcl {
    no_input(
        "mis",
        &["1", "0P", "0N"],
        &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0)],
    )
}

/// Everything allowed, `nout` output letters.
pub fn trivially_true(nout: usize) -> NormalLcl {
    let labels: Vec<String> = (0..nout).map(|i| format!("o{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let pairs: Vec<_> = (0..nout)
        .flat_map(|x| (0..nout).map(move |y| (x, y)))
        .collect();
    no_input("trivially-true", &refs, &pairs)
}

/// Nothing allowed.
pub fn unsolvable() -> NormalLcl {
    no_input("unsolvable", &["x"], &[])
}

/// Inputs `L` (block start) and `o`; blocks share a color, adjacent blocks differ.
pub fn three_coloring_of_blocks() -> NormalLcl {
    let mut p = NormalLcl::new("3-coloring-of-blocks", alpha(&["L", "o"]), alpha(&["R", "G", "B"]));
    for left in 0..2 {
        for x in 0..3 {
            p.allow(left, 1, x, x);
            for y in 0..3 {
                if x != y {
                    p.allow(left, 0, x, y);
                }
            }
        }
    }
    p
}

/// Edge permutations on `{0, 1}`: input `i` (identity) or `s` (swap) sits on
/// the right endpoint of each edge.
pub fn identity_swap() -> NormalLcl {
    let mut p = NormalLcl::new("identity-swap", alpha(&["i", "s"]), alpha(&["0", "1"]));
    for left in 0..2 {
        for x in 0..2 {
            p.allow(left, 0, x, x);
            p.allow(left, 1, x, 1 - x);
        }
    }
    p
}

/// Output must equal the input.
pub fn copy_input() -> NormalLcl {
    let mut p = NormalLcl::new("copy-input", alpha(&["a", "b"]), alpha(&["a", "b"]));
    for a in 0..2 {
        for b in 0..2 {
            p.allow(a, b, a, b);
        }
    }
    p
}

/// All built-in normal-form problems by name.
pub fn by_name(name: &str) -> Option<NormalLcl> {
    Some(match name {
        "all-red" => all_red(),
        "two-constants" => two_constants(),
        "2-coloring" => two_coloring(),
        "3-coloring" => three_coloring(),
        "mark-3rd" => mark_kth(3),
        "mis" => mis(),
        "3-coloring-of-blocks" => three_coloring_of_blocks(),
        "identity-swap" => identity_swap(),
        "copy-input" => copy_input(),
        "unsolvable" => unsolvable(),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &[
    "all-red",
    "two-constants",
    "2-coloring",
    "3-coloring",
    "mark-3rd",
    "mis",
    "3-coloring-of-blocks",
    "identity-swap",
    "copy-input",
    "unsolvable",
];

fn general_no_input<F: Fn(&[usize]) -> bool>(
    name: &str,
    outputs: &[&str],
    radius: usize,
    accept: F,
) -> GeneralLcl {
    let k = outputs.len();
    let len = 2 * radius + 1;
    let mut windows = Vec::new();
    let mut word = vec![0usize; len];
    loop {
        if accept(&word) {
            windows.push(word.iter().map(|&o| (0, o)).collect());
        }
        // odometer, last position fastest
        let mut i = len;
        loop {
            if i == 0 {
                return GeneralLcl::new(name, alpha(&["u"]), alpha(outputs), radius, windows)
                    .expect("catalog windows are valid");
            }
            i -= 1;
            word[i] += 1;
            if word[i] < k {
                break;
            }
            word[i] = 0;
        }
    }
}

/// 3-coloring as radius-1 windows.
pub fn three_coloring_general() -> GeneralLcl {
    general_no_input("3-coloring-r1", &["1", "2", "3"], 1, |w| {
        w[0] != w[1] && w[1] != w[2]
    })
}

/// 2-coloring as radius-1 windows.
pub fn two_coloring_general() -> GeneralLcl {
    general_no_input("2-coloring-r1", &["W", "B"], 1, |w| w[0] != w[1] && w[1] != w[2])
}

/// Constant labelling as radius-1 windows.
pub fn all_red_general() -> GeneralLcl {
    general_no_input("all-red-r1", &["R"], 1, |_| true)
}

/// Copy the input, radius 0.
pub fn copy_input_general() -> GeneralLcl {
    GeneralLcl::new(
        "copy-input-r0",
        alpha(&["a", "b"]),
        alpha(&["a", "b"]),
        0,
        vec![vec![(0, 0)], vec![(1, 1)]],
    )
    .expect("catalog windows are valid")
}

/// Three blocks over the identity/swap letters, anchored at `i`: lengths 2, 3, 4.
pub fn chain_family() -> BlockFamily {
    let a = alpha(&["i", "s"]);
    let blocks = ["ii", "isi", "issi"].map(|w| a.parse_word(w).expect("catalog words parse"));
    BlockFamily::new("chain3", a, 0, blocks.to_vec()).expect("catalog family is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(three_coloring().num_allowed(), 6);
        assert_eq!(mark_kth(3).num_allowed(), 3);
        assert_eq!(mis().num_allowed(), 5);
        assert_eq!(three_coloring_of_blocks().num_allowed(), 2 * 3 + 2 * 6);
        assert_eq!(identity_swap().num_allowed(), 8);
        assert_eq!(three_coloring_general().windows().len(), 12);
        assert_eq!(two_coloring_general().windows().len(), 2);
    }

    #[test]
    fn names_resolve() {
        for n in NAMES {
            assert!(by_name(n).is_some(), "{n}");
        }
    }
}
