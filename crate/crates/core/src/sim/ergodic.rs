use super::{mark_gaps, ruling_set, Phase, SimError, SimulationTrace};
use crate::automaton::{build_automaton, walk_of_length, ErgodicCertificate};
use crate::model::{LabeledInstance, NormalLcl};
use crate::solver::verify_solution;

/// Marks a `(k0+1, k0+2)` ruling set with the anchor state and fills every
/// gap with the least closed walk of that length.
pub fn solve_ergodic(
    p: &NormalLcl,
    inst: &LabeledInstance,
    cert: Option<&ErgodicCertificate>,
) -> Result<SimulationTrace, SimError> {
    let cert = cert.ok_or(SimError::MissingCertificate)?;
    let a = build_automaton(p)?;
    inst.check(p.nin())?;
    let k = cert.k0 as usize + 1;
    let rs = ruling_set(inst, k)?;
    let walk = |d: usize| -> Result<Vec<usize>, SimError> {
        walk_of_length(&a, cert.state, d)?.ok_or(SimError::WalkAbsent(d))
    };
    let (short, long) = (walk(k)?, walk(k + 1)?);

    let n = inst.n();
    let mut outputs = vec![usize::MAX; n];
    let start = rs.marks.iter().position(|&m| m).expect("ruling sets are non-empty");
    let mut pos = start;
    for d in mark_gaps_from(&rs.marks, start) {
        let walk = if d == k { &short } else { &long };
        for (j, &s) in walk[..d].iter().enumerate() {
            outputs[(pos + j) % n] = s;
        }
        pos += d;
    }
    debug_assert!(outputs.iter().all(|&o| o != usize::MAX));
    let violations = verify_solution(p, inst, &outputs)?;
    let label_rounds = k as u64 + 1;
    let mut phases = rs.phases;
    phases.push(Phase {
        name: "fill".into(),
        rounds: label_rounds,
    });
    Ok(SimulationTrace {
        algorithm: "ergodic".into(),
        n,
        rounds_used: rs.rounds_used + label_rounds,
        outputs,
        gaps: Some(distinct(mark_gaps(&rs.marks))),
        marks: Some(rs.marks),
        violations,
        phases,
    })
}

fn mark_gaps_from(marks: &[bool], start: usize) -> Vec<usize> {
    let n = marks.len();
    let mut out = Vec::new();
    let mut last = start;
    for step in 1..=n {
        let i = (start + step) % n;
        if marks[i] {
            out.push((i + n - last) % n);
            last = i;
        }
    }
    if let Some(d) = out.last_mut() {
        if *d == 0 {
            *d = n;
        }
    }
    out
}

fn distinct(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}
