use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SimError, SimulationTrace};
use crate::model::{LabeledInstance, NormalLcl, Topology};
use crate::oracle::WindowRule;
use crate::par::{self, Exec};
use crate::solver::verify_solution;

/// What a node sees: `2t+1` positions centered on itself, in orientation
/// order.
#[derive(Debug, Clone, Copy)]
pub struct View<'a> {
    pub inputs: &'a [usize],
    pub ids: Option<&'a [u64]>,
    pub bits: Option<&'a [u64]>,
}

type Rule = dyn Fn(&View<'_>) -> usize + Send + Sync;

pub struct ViewAlgorithm {
    pub name: String,
    pub radius: usize,
    rule: Box<Rule>,
}

impl ViewAlgorithm {
    pub fn new<F>(name: impl Into<String>, radius: usize, rule: F) -> Self
    where
        F: Fn(&View<'_>) -> usize + Send + Sync + 'static,
    {
        ViewAlgorithm {
            name: name.into(),
            radius,
            rule: Box::new(rule),
        }
    }

    pub fn from_window_rule(rule: WindowRule) -> Self {
        let t = rule.radius;
        ViewAlgorithm::new(format!("window-rule-r{t}"), t, move |v| rule.apply(v.inputs))
    }

    pub fn apply(&self, v: &View<'_>) -> usize {
        (self.rule)(v)
    }
}

/// Per-node random words derived from `seed`.
pub fn random_bits(seed: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

fn window<T: Copy>(xs: &[T], i: usize, t: usize) -> Vec<T> {
    let n = xs.len();
    (0..=2 * t).map(|j| xs[(i + n * (t + 1) + j - t) % n]).collect()
}

pub fn run_view_algorithm(
    alg: &ViewAlgorithm,
    p: &NormalLcl,
    inst: &LabeledInstance,
    exec: Exec,
) -> Result<SimulationTrace, SimError> {
    inst.check(p.nin())?;
    if inst.topology != Topology::Cycle {
        return Err(SimError::NotACycle);
    }
    let n = inst.n();
    let t = alg.radius;
    if n <= 2 * t {
        return Err(SimError::TooSmall {
            n,
            reason: format!("views of radius {t} need n > {}", 2 * t),
        });
    }
    let bits = inst.seed.map(|s| random_bits(s, n));
    if inst.ids.is_none() && bits.is_none() {
        return Err(SimError::MissingIdsOrSeed);
    }
    let outputs = par::map_range(exec, n, |i| {
        let inputs = window(&inst.inputs, i, t);
        let ids = inst.ids.as_ref().map(|ids| window(ids, i, t));
        let b = bits.as_ref().map(|b| window(b, i, t));
        alg.apply(&View {
            inputs: &inputs,
            ids: ids.as_deref(),
            bits: b.as_deref(),
        })
    });
    if let Some(node) = outputs.iter().position(|&o| o >= p.nout()) {
        return Err(SimError::InvalidOutput {
            node,
            output: outputs[node],
        });
    }
    let violations = verify_solution(p, inst, &outputs)?;
    Ok(SimulationTrace {
        algorithm: alg.name.clone(),
        n,
        rounds_used: t as u64,
        outputs,
        marks: None,
        gaps: None,
        violations,
        phases: Vec::new(),
    })
}
