//! Classification of problems without inputs through their output automaton.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Alphabet, NormalLcl};
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("problem has {0} input letters; the automaton needs exactly one")]
    HasInputs(usize),
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("walk length must be at least 1")]
    ZeroLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scc {
    pub states: Vec<usize>,
    /// gcd of closed-walk lengths inside the component; 0 if it has no edge.
    pub period: u64,
}

#[derive(Debug, Clone)]
pub struct ProblemAutomaton {
    pub states: Alphabet,
    pub edges: Relation,
    /// Sorted by least member; members ascending.
    pub sccs: Vec<Scc>,
}

impl ProblemAutomaton {
    pub fn n(&self) -> usize {
        self.states.len()
    }

    pub fn scc_of(&self, s: usize) -> usize {
        self.sccs
            .iter()
            .position(|c| c.states.contains(&s))
            .expect("sccs partition the states")
    }
}

pub fn build_automaton(p: &NormalLcl) -> Result<ProblemAutomaton, AutomatonError> {
    if p.nin() != 1 {
        return Err(AutomatonError::HasInputs(p.nin()));
    }
    Ok(automaton_from_edges(p.sigma_out.clone(), p.edge(0, 0).clone()))
}

pub fn automaton_from_edges(states: Alphabet, edges: Relation) -> ProblemAutomaton {
    let n = states.len();
    let mut g = DiGraph::<(), ()>::with_capacity(n, edges.len());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (a, b) in edges.pairs() {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let mut sccs: Vec<Scc> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut states: Vec<usize> = c.into_iter().map(|v| v.index()).collect();
            states.sort_unstable();
            let period = period_of(&edges, &states);
            Scc { states, period }
        })
        .collect();
    sccs.sort_by_key(|c| c.states[0]);
    ProblemAutomaton {
        states,
        edges,
        sccs,
    }
}

/// Period of a strongly connected set via BFS levels from its least member.
fn period_of(edges: &Relation, states: &[usize]) -> u64 {
    let n = edges.size();
    let mut inside = vec![false; n];
    for &s in states {
        inside[s] = true;
    }
    let mut level = vec![u64::MAX; n];
    level[states[0]] = 0;
    let mut queue = std::collections::VecDeque::from([states[0]]);
    while let Some(u) = queue.pop_front() {
        for v in edges.successors(u) {
            if inside[v] && level[v] == u64::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    for &u in states {
        for v in edges.successors(u) {
            if inside[v] {
                g = gcd(g, (level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NoInputClass {
    #[serde(rename = "CONSTANT_O1")]
    ConstantO1,
    #[serde(rename = "LOGSTAR")]
    LogStar,
    #[serde(rename = "GLOBAL")]
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErgodicCertificate {
    pub state: usize,
    pub label: String,
    /// Closed walks of every length `>= k0` exist at `state`.
    pub k0: u64,
    pub cycle_lengths: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Loop { state: usize, label: String },
    Ergodic(ErgodicCertificate),
    Periodic { components: Vec<PeriodicComponent> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicComponent {
    pub states: Vec<String>,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoInputVerdict {
    pub class: NoInputClass,
    pub certificate: Certificate,
}

/// Lengths `L <= limit` of closed walks at `s`, ascending.
fn closed_walk_lengths(a: &ProblemAutomaton, s: usize, limit: u64) -> Vec<u64> {
    let words = a.edges.words();
    let mut cur = crate::relation::bitset_singleton(words, s);
    let mut out = Vec::new();
    for len in 1..=limit {
        cur = a.edges.image(&cur);
        if crate::relation::bitset_contains(&cur, s) {
            out.push(len);
        }
    }
    out
}

pub fn classify_no_input(a: &ProblemAutomaton) -> NoInputVerdict {
    if let Some(s) = (0..a.n()).find(|&s| a.edges.contains(s, s)) {
        return NoInputVerdict {
            class: NoInputClass::ConstantO1,
            certificate: Certificate::Loop {
                state: s,
                label: a.states.label(s).to_string(),
            },
        };
    }
    if let Some(c) = a.sccs.iter().find(|c| c.period == 1) {
        let s = c.states[0];
        let m = c.states.len() as u64;
        // the semigroup of closed-walk lengths contains every L >= (m-1)^2 + 1;
        // some L ≡ 1 mod c1 lies below c1 + that bound
        let limit = 2 * m * m + 2;
        let lens = closed_walk_lengths(a, s, limit + m);
        let c1 = lens[0];
        let c2 = *lens
            .iter()
            .find(|&&l| l > c1 && gcd(c1, l) == 1)
            .expect("aperiodic component has coprime closed-walk lengths");
        return NoInputVerdict {
            class: NoInputClass::LogStar,
            certificate: Certificate::Ergodic(ErgodicCertificate {
                state: s,
                label: a.states.label(s).to_string(),
                k0: c1 * c2,
                cycle_lengths: (c1, c2),
            }),
        };
    }
    NoInputVerdict {
        class: NoInputClass::Global,
        certificate: Certificate::Periodic {
            components: a
                .sccs
                .iter()
                .filter(|c| c.period >= 2)
                .map(|c| PeriodicComponent {
                    states: c.states.iter().map(|&s| a.states.label(s).to_string()).collect(),
                    period: c.period,
                })
                .collect(),
        },
    }
}

/// Lexicographically least closed walk `s → ... → s` with exactly `k` edges,
/// returned as its `k + 1` states.
pub fn walk_of_length(
    a: &ProblemAutomaton,
    s: usize,
    k: usize,
) -> Result<Option<Vec<usize>>, AutomatonError> {
    if s >= a.n() {
        return Err(AutomatonError::UnknownState(s));
    }
    if k == 0 {
        return Err(AutomatonError::ZeroLength);
    }
    Ok(walk_between(&a.edges, s, s, k))
}

/// Lexicographically least walk `from → ... → to` with exactly `k` edges.
pub fn walk_between(edges: &Relation, from: usize, to: usize, k: usize) -> Option<Vec<usize>> {
    let words = edges.words();
    // can[j]: states from which `to` is reachable in exactly j steps
    let mut can = Vec::with_capacity(k + 1);
    can.push(crate::relation::bitset_singleton(words, to));
    for j in 1..=k {
        let next = edges.preimage(&can[j - 1]);
        can.push(next);
    }
    if !crate::relation::bitset_contains(&can[k], from) {
        return None;
    }
    let mut walk = Vec::with_capacity(k + 1);
    walk.push(from);
    let mut cur = from;
    for step in 0..k {
        let need = &can[k - step - 1];
        cur = edges
            .successors(cur)
            .find(|&v| crate::relation::bitset_contains(need, v))
            .expect("feasibility table guarantees a successor");
        walk.push(cur);
    }
    Some(walk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn auto(p: &NormalLcl) -> ProblemAutomaton {
        build_automaton(p).unwrap()
    }

    #[test]
    fn two_coloring_has_period_two() {
        let a = auto(&catalog::two_coloring());
        assert_eq!(a.edges.pairs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(a.sccs.len(), 1);
        assert_eq!(a.sccs[0].period, 2);
        assert_eq!(classify_no_input(&a).class, NoInputClass::Global);
    }

    #[test]
    fn three_coloring_is_aperiodic() {
        let a = auto(&catalog::three_coloring());
        assert_eq!(a.sccs.len(), 1);
        assert_eq!(a.sccs[0].period, 1);
        let v = classify_no_input(&a);
        assert_eq!(v.class, NoInputClass::LogStar);
        match v.certificate {
            Certificate::Ergodic(c) => {
                assert_eq!((c.state, c.cycle_lengths, c.k0), (0, (2, 3), 6));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loops_are_constant() {
        let a = auto(&catalog::all_red());
        assert_eq!(
            classify_no_input(&a).certificate,
            Certificate::Loop {
                state: 0,
                label: "R".into()
            }
        );
        assert_eq!(
            classify_no_input(&auto(&catalog::two_constants())).class,
            NoInputClass::ConstantO1
        );
    }

    #[test]
    fn mark_third_is_global() {
        let a = auto(&catalog::mark_kth(3));
        assert_eq!(a.sccs[0].period, 3);
        assert_eq!(classify_no_input(&a).class, NoInputClass::Global);
    }

    #[test]
    fn mis_threshold() {
        let v = classify_no_input(&auto(&catalog::mis()));
        assert_eq!(v.class, NoInputClass::LogStar);
        let Certificate::Ergodic(c) = v.certificate else { panic!() };
        assert_eq!(c.k0, 6);
    }

    #[test]
    fn walks() {
        let a = auto(&catalog::three_coloring());
        assert_eq!(walk_of_length(&a, 0, 2).unwrap(), Some(vec![0, 1, 0]));
        assert_eq!(walk_of_length(&a, 0, 3).unwrap(), Some(vec![0, 1, 2, 0]));
        let b = auto(&catalog::two_coloring());
        assert_eq!(walk_of_length(&b, 0, 3).unwrap(), None);
        let r = auto(&catalog::all_red());
        assert_eq!(walk_of_length(&r, 0, 1).unwrap(), Some(vec![0, 0]));
        assert_eq!(walk_of_length(&r, 2, 1), Err(AutomatonError::UnknownState(2)));
        assert_eq!(walk_of_length(&r, 0, 0), Err(AutomatonError::ZeroLength));
    }

    #[test]
    fn rejects_inputs() {
        assert_eq!(
            build_automaton(&catalog::identity_swap()).unwrap_err(),
            AutomatonError::HasInputs(2)
        );
    }

    #[test]
    fn isolated_state_has_period_zero() {
        let a = auto(&catalog::no_input("x", &["a", "b"], &[(0, 1)]));
        assert_eq!(a.sccs.iter().map(|c| c.period).collect::<Vec<_>>(), vec![0, 0]);
        assert_eq!(classify_no_input(&a).class, NoInputClass::Global);
    }
}
