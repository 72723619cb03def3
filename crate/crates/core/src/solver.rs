//! Exact solving and counting on finite cycles and paths.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::model::{LabeledInstance, ModelError, NormalLcl, Topology};
use crate::relation::{bitset_contains, bitset_full, bitset_singleton, iter_bits, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("node {index}: output letter out of alphabet")]
    OutputOutOfAlphabet { index: usize },
    #[error("instance has {n} nodes; exact counting is capped at {cap}")]
    CountCap { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "coloring", rename_all = "UPPERCASE")]
pub enum Solution {
    Sat(Vec<usize>),
    Unsat,
}

impl Solution {
    pub fn is_sat(&self) -> bool {
        matches!(self, Solution::Sat(_))
    }

    pub fn coloring(&self) -> Option<&[usize]> {
        match self {
            Solution::Sat(c) => Some(c),
            Solution::Unsat => None,
        }
    }
}

/// Relation between the output at node 0 and the output at `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceFront {
    pub position: usize,
    pub reach: Relation,
}

fn edge_rel<'a>(p: &'a NormalLcl, inst: &LabeledInstance, i: usize, j: usize) -> &'a Relation {
    p.edge(inst.inputs[i], inst.inputs[j])
}

/// Fronts for positions `0..=m`, where `m` is `n` on a cycle (back at node 0)
/// and `n - 1` on a path.
pub fn slice_fronts(p: &NormalLcl, inst: &LabeledInstance) -> Result<Vec<SliceFront>, SolveError> {
    inst.check(p.nin())?;
    let mut fronts = vec![SliceFront {
        position: 0,
        reach: Relation::identity(p.nout()),
    }];
    for (i, j) in inst.edges() {
        let reach = fronts[i].reach.then(edge_rel(p, inst, i, j));
        fronts.push(SliceFront {
            position: i + 1,
            reach,
        });
    }
    Ok(fronts)
}

pub fn solve_instance(p: &NormalLcl, inst: &LabeledInstance) -> Result<Solution, SolveError> {
    inst.check(p.nin())?;
    let n = inst.n();
    let k = p.nout();
    let words = Relation::empty(k).words();
    let edges: Vec<(usize, usize)> = inst.edges().collect();

    // backward feasibility: feas[i] = outputs at node i extendable to the end
    let (start, last): (Vec<u64>, Vec<u64>) = match inst.topology {
        Topology::Cycle => {
            let mut around = Relation::identity(k);
            for &(i, j) in &edges {
                around = around.then(edge_rel(p, inst, i, j));
            }
            match (0..k).find(|&a| around.contains(a, a)) {
                Some(a) => (bitset_singleton(words, a), bitset_singleton(words, a)),
                None => return Ok(Solution::Unsat),
            }
        }
        Topology::Path => (bitset_full(words, k), bitset_full(words, k)),
    };
    let steps = edges.len();
    let mut feas: Vec<Vec<u64>> = vec![Vec::new(); steps + 1];
    feas[steps] = last;
    for s in (0..steps).rev() {
        let (i, j) = edges[s];
        feas[s] = edge_rel(p, inst, i, j).preimage(&feas[s + 1]);
    }
    let first = feas[0]
        .iter()
        .zip(&start)
        .map(|(a, b)| a & b)
        .collect::<Vec<u64>>();
    let Some(c0) = iter_bits(&first).next() else {
        return Ok(Solution::Unsat);
    };
    let mut out = vec![0usize; n];
    out[0] = c0;
    let mut cur = c0;
    for s in 0..steps.min(n - 1) {
        let (i, j) = edges[s];
        cur = edge_rel(p, inst, i, j)
            .successors(cur)
            .find(|&y| bitset_contains(&feas[s + 1], y))
            .expect("feasibility table guarantees a successor");
        out[j] = cur;
    }
    Ok(Solution::Sat(out))
}

/// Edges `(i, successor(i))` whose quadruple is disallowed, by left index.
pub fn verify_solution(p: &NormalLcl, inst: &LabeledInstance, out: &[usize]) -> Result<Vec<usize>, SolveError> {
    if out.len() != inst.n() {
        return Err(ModelError::LengthMismatch {
            expected: inst.n(),
            got: out.len(),
        }
        .into());
    }
    inst.check(p.nin())?;
    if let Some(index) = out.iter().position(|&o| o >= p.nout()) {
        return Err(SolveError::OutputOutOfAlphabet { index });
    }
    Ok(inst
        .edges()
        .filter(|&(i, j)| !p.allows(inst.inputs[i], inst.inputs[j], out[i], out[j]))
        .map(|(i, _)| i)
        .collect())
}

pub const DEFAULT_COUNT_CAP: usize = 1 << 16;

/// Exact number of valid colorings via transfer vectors.
pub fn count_solutions(p: &NormalLcl, inst: &LabeledInstance, cap: usize) -> Result<BigUint, SolveError> {
    inst.check(p.nin())?;
    let n = inst.n();
    if n > cap {
        return Err(SolveError::CountCap { n, cap });
    }
    let k = p.nout();
    let edges: Vec<(usize, usize)> = inst.edges().collect();
    let step = |v: &[BigUint], rel: &Relation| -> Vec<BigUint> {
        let mut w = vec![BigUint::ZERO; k];
        for (x, y) in rel.pairs() {
            if v[x] != BigUint::ZERO {
                w[y] += &v[x];
            }
        }
        w
    };
    match inst.topology {
        Topology::Path => {
            let mut v = vec![BigUint::from(1u32); k];
            for &(i, j) in &edges {
                v = step(&v, edge_rel(p, inst, i, j));
            }
            Ok(v.into_iter().sum())
        }
        Topology::Cycle => {
            let mut total = BigUint::ZERO;
            for a in 0..k {
                let mut v = vec![BigUint::ZERO; k];
                v[a] = BigUint::from(1u32);
                for &(i, j) in &edges {
                    v = step(&v, edge_rel(p, inst, i, j));
                }
                total += &v[a];
            }
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_coloring_cycles() {
        let p = catalog::two_coloring();
        assert_eq!(
            solve_instance(&p, &LabeledInstance::cycle(vec![0; 4])).unwrap(),
            Solution::Sat(vec![0, 1, 0, 1])
        );
        assert_eq!(solve_instance(&p, &LabeledInstance::cycle(vec![0; 5])).unwrap(), Solution::Unsat);
    }

    #[test]
    fn blocks_instance() {
        let p = catalog::three_coloring_of_blocks();
        // L o o L o L o o o
        let inst = LabeledInstance::cycle(vec![0, 1, 1, 0, 1, 0, 1, 1, 1]);
        let Solution::Sat(c) = solve_instance(&p, &inst).unwrap() else { panic!() };
        assert!(verify_solution(&p, &inst, &c).unwrap().is_empty());
        assert_eq!(&c[0..3], &[c[0]; 3]);
        assert_ne!(c[2], c[3]);
    }

    #[test]
    fn verify_cases() {
        let p = catalog::two_coloring();
        let inst = LabeledInstance::cycle(vec![0; 4]);
        assert!(verify_solution(&p, &inst, &[0, 1, 0, 1]).unwrap().is_empty());
        assert_eq!(verify_solution(&p, &inst, &[0, 0, 1, 0]).unwrap(), vec![0, 3]);
        assert_eq!(
            verify_solution(&p, &inst, &[0, 0, 5, 0]),
            Err(SolveError::OutputOutOfAlphabet { index: 2 })
        );
        assert!(verify_solution(&p, &inst, &[0]).is_err());
    }

    #[test]
    fn counts() {
        let p = catalog::two_coloring();
        let c = |p: &NormalLcl, n| count_solutions(p, &LabeledInstance::cycle(vec![0; n]), 100).unwrap();
        assert_eq!(c(&p, 4), BigUint::from(2u32));
        assert_eq!(c(&p, 5), BigUint::ZERO);
        assert_eq!(c(&catalog::trivially_true(2), 3), BigUint::from(8u32));
        assert_eq!(
            count_solutions(&catalog::three_coloring(), &LabeledInstance::path(vec![0; 3]), 100).unwrap(),
            BigUint::from(12u32)
        );
    }

    #[test]
    fn long_cycle_count_does_not_overflow() {
        // proper 3-colorings of C_n: 2^n + 2(-1)^n
        let n = 200;
        let got = count_solutions(&catalog::three_coloring(), &LabeledInstance::cycle(vec![0; n]), 1000).unwrap();
        assert_eq!(got, (BigUint::from(1u32) << n) + BigUint::from(2u32));
    }

    #[test]
    fn single_node_cycle_needs_a_loop() {
        let inst = LabeledInstance::cycle(vec![0]);
        assert_eq!(solve_instance(&catalog::two_coloring(), &inst).unwrap(), Solution::Unsat);
        assert_eq!(solve_instance(&catalog::all_red(), &inst).unwrap(), Solution::Sat(vec![0]));
    }

    #[test]
    fn paths() {
        let p = catalog::two_coloring();
        assert_eq!(
            solve_instance(&p, &LabeledInstance::path(vec![0; 3])).unwrap(),
            Solution::Sat(vec![0, 1, 0])
        );
        let fronts = slice_fronts(&p, &LabeledInstance::path(vec![0; 3])).unwrap();
        assert_eq!(fronts.len(), 3);
        assert_eq!(fronts[2].reach, Relation::identity(2));
    }
}
