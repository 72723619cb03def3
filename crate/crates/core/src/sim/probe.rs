use serde::Serialize;

use super::SimError;
use crate::model::{LabeledInstance, NormalLcl};
use crate::oracle::window::min_violations;
use crate::oracle::SearchBudget;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub t: usize,
    pub instance: usize,
    pub n: usize,
    pub min_violations: usize,
}

/// Fewest violations any input-only radius-`t` rule reaches on each
/// instance, for every `t <= t_max`.
pub fn probe_locality(
    p: &NormalLcl,
    instances: &[LabeledInstance],
    t_max: usize,
    budget: &SearchBudget,
) -> Result<Vec<ProbeRow>, SimError> {
    let mut rows = Vec::new();
    for t in 0..=t_max {
        for (idx, inst) in instances.iter().enumerate() {
            inst.check(p.nin())?;
            rows.push(ProbeRow {
                t,
                instance: idx,
                n: inst.n(),
                min_violations: min_violations(p, t, inst, budget)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_coloring_fails_somewhere() {
        let p = catalog::two_coloring();
        let insts = [16, 17].map(|n| LabeledInstance::cycle(vec![0; n]));
        let rows = probe_locality(&p, &insts, 1, &SearchBudget::default()).unwrap();
        assert!(rows.iter().filter(|r| r.t == 1).any(|r| r.min_violations >= 1));
    }

    #[test]
    fn trivially_true_is_free() {
        let p = catalog::trivially_true(2);
        let rows = probe_locality(&p, &[LabeledInstance::cycle(vec![0; 9])], 0, &SearchBudget::default()).unwrap();
        assert_eq!(rows[0].min_violations, 0);
    }
}
