//! Permutations induced by permutation blocks and the groups they generate.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::subpartition::Subpartition;
use crate::relation::Relation;

/// A permutation of `∇`-classes: `self.0[c]` is the image of class `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn fixes(&self, c: usize) -> bool {
        self.0[c] as usize == c
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|c| self.fixes(c))
    }
}

/// Per-class constraints a type imposes once `(∇, ℙ)` is fixed.
#[derive(Debug, Clone)]
pub struct TypeConstraints {
    /// `need[i]`: ℙ-classes that class `i` must lie below.
    pub need: Vec<u8>,
    pub perms: Vec<Perm>,
}

/// Conditions 1, 3 and 4 (which do not depend on the order), together with
/// the order requirements of condition 2. `None` if 3 or 4 fail, including
/// when 4 forces a non-function or a non-injection.
pub fn constraints(t: &Relation, sp: &Subpartition) -> Option<TypeConstraints> {
    let k = sp.parts().len();
    let deg = sp.degree();
    let mut need = vec![0u8; k];
    let mut forced: Vec<Option<u8>> = vec![None; deg];
    for (a, b) in t.pairs() {
        let pa = sp.part(a);
        let pb = sp.part(b);
        need[pa] |= 1 << pb;
        let ca = sp.nabla_class(a);
        if pa == pb {
            match (ca, sp.nabla_class(b)) {
                (None, _) => return None,
                (Some(ca), Some(cb)) => match forced[ca] {
                    Some(x) if x as usize != cb => return None,
                    _ => forced[ca] = Some(cb as u8),
                },
                (Some(_), None) => {}
            }
        }
    }
    let mut hit = 0u64;
    for &f in forced.iter().flatten() {
        if hit >> f & 1 == 1 {
            return None;
        }
        hit |= 1 << f;
    }
    Some(TypeConstraints {
        need,
        perms: completions(sp, &forced),
    })
}

/// `ℙ`-invariant bijections extending a forced partial injection, in
/// lexicographic order.
fn completions(sp: &Subpartition, forced: &[Option<u8>]) -> Vec<Perm> {
    let deg = forced.len();
    let mut taken = vec![false; deg];
    for &f in forced.iter().flatten() {
        taken[f as usize] = true;
    }
    let part_of: Vec<usize> = (0..deg).map(|c| sp.part_of_class(c)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<u8> = vec![0; deg];
    fn rec(
        c: usize,
        forced: &[Option<u8>],
        part_of: &[usize],
        taken: &mut [bool],
        cur: &mut Vec<u8>,
        out: &mut Vec<Perm>,
    ) {
        if c == forced.len() {
            out.push(Perm(cur.clone()));
            return;
        }
        if let Some(f) = forced[c] {
            cur[c] = f;
            rec(c + 1, forced, part_of, taken, cur, out);
            return;
        }
        for t in 0..forced.len() {
            if !taken[t] && part_of[t] == part_of[c] {
                taken[t] = true;
                cur[c] = t as u8;
                rec(c + 1, forced, part_of, taken, cur, out);
                taken[t] = false;
            }
        }
    }
    rec(0, forced, &part_of, &mut taken, &mut cur, &mut out);
    out
}

/// All permutations `π` for which `t` is a permutation block of `sp`.
pub fn permutations_of_block(t: &Relation, sp: &Subpartition) -> Vec<Perm> {
    match constraints(t, sp) {
        Some(c) if order_admits(&c.need, sp) => c.perms,
        _ => Vec::new(),
    }
}

pub fn order_admits(need: &[u8], sp: &Subpartition) -> bool {
    need.iter().zip(sp.up()).all(|(&n, &u)| n & !u == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    pub degree: usize,
    pub elements: BTreeSet<Perm>,
}

/// Closure of `gens` under composition; `None` for an empty generator set.
pub fn group_closure(gens: &[Perm]) -> Option<PermGroup> {
    let first = gens.first()?;
    let degree = first.degree();
    let mut elements: BTreeSet<Perm> = gens.iter().cloned().collect();
    let mut queue: VecDeque<Perm> = elements.iter().cloned().collect();
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let h = e.then(g);
            if elements.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    Some(PermGroup { degree, elements })
}

/// Least `∇`-class fixed by every element.
pub fn has_fixed_point(g: &PermGroup) -> Option<usize> {
    (0..g.degree).find(|&c| g.elements.iter().all(|e| e.fixes(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(size: usize, nabla: Vec<u8>, parts: Vec<u8>, up: Vec<u8>) -> Subpartition {
        Subpartition::new(size, nabla, parts, up).unwrap()
    }

    #[test]
    fn swap_type_gives_swap() {
        let s = sp(2, vec![1, 2], vec![3], vec![1]);
        let swap = Relation::from_pairs(2, [(0, 1), (1, 0)]);
        assert_eq!(permutations_of_block(&swap, &s), vec![Perm(vec![1, 0])]);
    }

    #[test]
    fn full_type_has_no_permutation() {
        let s = sp(2, vec![1, 2], vec![3], vec![1]);
        assert!(permutations_of_block(&Relation::full(2), &s).is_empty());
    }

    #[test]
    fn empty_type_gives_empty_permutation() {
        let s = sp(2, vec![], vec![3], vec![1]);
        assert_eq!(permutations_of_block(&Relation::empty(2), &s), vec![Perm(vec![])]);
    }

    #[test]
    fn unforced_classes_take_all_completions() {
        // ∇ = {0},{1} inside ℙ class {0,1}; the type only crosses ℙ classes
        let s = sp(3, vec![1, 2], vec![3, 4], vec![3, 2]);
        let t = Relation::from_pairs(3, [(0, 2)]);
        let ps = permutations_of_block(&t, &s);
        assert_eq!(ps, vec![Perm(vec![0, 1]), Perm(vec![1, 0])]);
        // the reverse direction violates the order
        let back = Relation::from_pairs(3, [(2, 0)]);
        assert!(permutations_of_block(&back, &s).is_empty());
    }

    #[test]
    fn outside_dom_within_class_fails() {
        let s = sp(2, vec![1], vec![3], vec![1]);
        let t = Relation::from_pairs(2, [(1, 0)]);
        assert!(permutations_of_block(&t, &s).is_empty());
    }

    #[test]
    fn non_injective_forcing_fails() {
        let s = sp(2, vec![1, 2], vec![3], vec![1]);
        let t = Relation::from_pairs(2, [(0, 0), (1, 0)]);
        assert!(permutations_of_block(&t, &s).is_empty());
    }

    #[test]
    fn closures() {
        let swap = Perm(vec![1, 0]);
        let g = group_closure(&[swap.clone()]).unwrap();
        assert_eq!(g.elements.len(), 2);
        assert!(g.elements.contains(&Perm::identity(2)));
        assert_eq!(has_fixed_point(&g), None);

        let c3 = Perm(vec![1, 2, 0]);
        let g = group_closure(&[c3]).unwrap();
        assert_eq!(g.elements.len(), 3);
        assert_eq!(has_fixed_point(&g), None);

        assert!(group_closure(&[]).is_none());
        let id = group_closure(&[Perm::identity(3)]).unwrap();
        assert_eq!(has_fixed_point(&id), Some(0));

        let empty = group_closure(&[Perm(vec![])]).unwrap();
        assert_eq!(has_fixed_point(&empty), None);
    }

    #[test]
    fn symmetric_group_order() {
        let g = group_closure(&[Perm(vec![1, 0, 2]), Perm(vec![1, 2, 0])]).unwrap();
        assert_eq!(g.elements.len(), 6);
    }
}
