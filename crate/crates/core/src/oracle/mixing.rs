use std::collections::BTreeSet;

use super::{oracle_block_types, OracleError, SearchBudget};
use crate::model::NormalLcl;

/// A subpartition written as label functions: `nabla[a]` is the class id of
/// `a` (or `None` outside the domain), `part[a]` its `ℙ`-class, and
/// `le[i][j]` the order on `ℙ`-classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaiveSub {
    pub nabla: Vec<Option<usize>>,
    pub part: Vec<usize>,
    pub le: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub mixing: bool,
    pub witness: Option<(usize, NaiveSub)>,
}

fn canon<T: Copy + PartialEq>(f: &[Option<T>]) -> Vec<Option<usize>> {
    let mut seen: Vec<T> = Vec::new();
    f.iter()
        .map(|x| {
            x.map(|v| match seen.iter().position(|&s| s == v) {
                Some(i) => i,
                None => {
                    seen.push(v);
                    seen.len() - 1
                }
            })
        })
        .collect()
}

/// All functions `[n] → [m]`, each as a vector.
fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |v| {
                    let mut g = f.clone();
                    g.push(v);
                    g
                })
            })
            .collect();
    }
    out
}

fn orders(k: usize) -> Vec<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << (k * k)) {
        let le: Vec<Vec<bool>> = (0..k)
            .map(|i| (0..k).map(|j| bits >> (i * k + j) & 1 == 1).collect())
            .collect();
        let reflexive = (0..k).all(|i| le[i][i]);
        let antisym = (0..k).all(|i| (0..k).all(|j| i == j || !(le[i][j] && le[j][i])));
        let trans = (0..k).all(|i| (0..k).all(|j| (0..k).all(|l| !(le[i][j] && le[j][l]) || le[i][l])));
        if reflexive && antisym && trans {
            out.push(le);
        }
    }
    out
}

fn naive_subpartitions(n: usize) -> Vec<NaiveSub> {
    let nablas: BTreeSet<Vec<Option<usize>>> = functions(n, n + 1)
        .into_iter()
        .map(|f| {
            let g: Vec<Option<usize>> = f.iter().map(|&v| if v == n { None } else { Some(v) }).collect();
            canon(&g)
        })
        .collect();
    let parts: BTreeSet<Vec<usize>> = functions(n, n)
        .into_iter()
        .map(|f| {
            let g: Vec<Option<usize>> = f.into_iter().map(Some).collect();
            canon(&g).into_iter().map(|x| x.unwrap()).collect()
        })
        .collect();
    let mut out = Vec::new();
    for nabla in &nablas {
        for part in &parts {
            let ok = (0..n).all(|a| {
                (0..n).all(|b| match (nabla[a], nabla[b]) {
                    (Some(x), Some(y)) if x == y => part[a] == part[b],
                    _ => true,
                })
            });
            if !ok {
                continue;
            }
            let k = part.iter().max().map_or(0, |m| m + 1);
            for le in orders(k) {
                out.push(NaiveSub {
                    nabla: nabla.clone(),
                    part: part.clone(),
                    le,
                });
            }
        }
    }
    out
}

/// Number of subpartitions of an `n`-letter alphabet, counted naively.
pub fn naive_subpartition_count(n: usize) -> usize {
    naive_subpartitions(n).len()
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn induces(t: &[(usize, usize)], sp: &NaiveSub, pi: &[usize]) -> bool {
    let n = sp.part.len();
    // class representatives
    let rep = |c: usize| (0..n).find(|&a| sp.nabla[a] == Some(c)).unwrap();
    for (c, &img) in pi.iter().enumerate() {
        if sp.part[rep(c)] != sp.part[rep(img)] {
            return false;
        }
    }
    for &(a, b) in t {
        if !sp.le[sp.part[a]][sp.part[b]] {
            return false;
        }
        if sp.nabla[a].is_none() && sp.part[a] == sp.part[b] {
            return false;
        }
        if let (Some(ca), Some(cb)) = (sp.nabla[a], sp.nabla[b]) {
            if sp.part[a] == sp.part[b] && pi[ca] != cb {
                return false;
            }
        }
    }
    true
}

fn closure(gens: &BTreeSet<Vec<usize>>) -> BTreeSet<Vec<usize>> {
    let mut set = gens.clone();
    loop {
        let mut added = Vec::new();
        for x in &set {
            for y in &set {
                let z: Vec<usize> = x.iter().map(|&c| y[c]).collect();
                if !set.contains(&z) {
                    added.push(z);
                }
            }
        }
        if added.is_empty() {
            return set;
        }
        set.extend(added);
    }
}

pub fn oracle_is_mixing(p: &NormalLcl, budget: &SearchBudget) -> Result<OracleVerdict, OracleError> {
    if p.nout() > 3 || p.nin() > 2 {
        return Err(OracleError::Scope(format!(
            "oracle decider handles |Σ_in| <= 2 and |Σ_out| <= 3, got {} and {}",
            p.nin(),
            p.nout()
        )));
    }
    let subs = naive_subpartitions(p.nout());
    for sigma in 0..p.nin() {
        let types: Vec<Vec<(usize, usize)>> = oracle_block_types(p, sigma, budget.max_block_length)?
            .into_iter()
            .map(|t| t.0.pairs().collect())
            .collect();
        for sp in &subs {
            let deg = sp.nabla.iter().flatten().max().map_or(0, |m| m + 1);
            let perms = permutations(deg);
            let mut gamma = BTreeSet::new();
            for t in &types {
                for pi in &perms {
                    if induces(t, sp, pi) {
                        gamma.insert(pi.clone());
                    }
                }
            }
            if gamma.is_empty() {
                continue;
            }
            let group = closure(&gamma);
            let fixed = (0..deg).any(|c| group.iter().all(|g| g[c] == c));
            if !fixed {
                return Ok(OracleVerdict {
                    mixing: true,
                    witness: Some((sigma, sp.clone())),
                });
            }
        }
    }
    Ok(OracleVerdict {
        mixing: false,
        witness: None,
    })
}
