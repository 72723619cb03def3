//! Search for input-only window rules.

use serde::Serialize;

use super::{checked_pow, Deadline, OracleError, SearchBudget};
use crate::model::{LabeledInstance, NormalLcl};

/// Views with more letters than this are never searched.
const MAX_VIEWS: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleEntry {
    pub view: String,
    pub output: String,
}

/// A radius-`t` rule mapping each `(2t+1)`-letter input view to an output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowRule {
    pub radius: usize,
    #[serde(skip)]
    nin: usize,
    #[serde(skip)]
    table: Vec<usize>,
    pub rules: Vec<RuleEntry>,
}

impl WindowRule {
    pub fn new(p: &NormalLcl, radius: usize, table: Vec<usize>) -> WindowRule {
        let nin = p.nin();
        let len = 2 * radius + 1;
        let rules = table
            .iter()
            .enumerate()
            .map(|(code, &o)| RuleEntry {
                view: p.sigma_in.render(&decode(code, nin, len)),
                output: p.sigma_out.label(o).to_string(),
            })
            .collect();
        WindowRule {
            radius,
            nin,
            table,
            rules,
        }
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, view: &[usize]) -> usize {
        self.table[encode(view, self.nin)]
    }

    /// Outputs on a cycle (views wrap around).
    pub fn run(&self, inst: &LabeledInstance) -> Vec<usize> {
        let views = views_of(inst, self.radius, self.nin);
        views.iter().map(|&v| self.table[v]).collect()
    }
}

fn encode(view: &[usize], nin: usize) -> usize {
    view.iter().fold(0, |acc, &x| acc * nin + x)
}

fn decode(mut code: usize, nin: usize, len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = code % nin;
        code /= nin;
    }
    v
}

/// View code of every node; the view of `i` covers `i-t ..= i+t` cyclically.
pub fn views_of(inst: &LabeledInstance, t: usize, nin: usize) -> Vec<usize> {
    let n = inst.n();
    (0..n)
        .map(|i| {
            let view: Vec<usize> = (0..=2 * t)
                .map(|j| inst.inputs[(i + n * (t + 1) + j - t) % n])
                .collect();
            encode(&view, nin)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowSearch {
    Found(WindowRule),
    None,
    BudgetExceeded,
}

/// Finds the lexicographically first rule valid on every input labelling.
///
/// Every edge of a cycle with at least `2t+2` nodes sees `2t+2` consecutive
/// inputs, and every such string occurs on some cycle, so checking the rule on
/// all `|Σ_in|^(2t+2)` strings is exact.
pub fn find_window_algorithm(
    p: &NormalLcl,
    t: usize,
    budget: &SearchBudget,
) -> Result<WindowSearch, OracleError> {
    if t > budget.max_rule_radius {
        return Err(OracleError::Budget(format!(
            "radius {t} above the cap {}",
            budget.max_rule_radius
        )));
    }
    let nin = p.nin();
    let k = p.nout();
    let views = checked_pow(nin, 2 * t + 1).filter(|&v| v <= MAX_VIEWS);
    let Some(views) = views else {
        return Err(OracleError::Budget(format!("{nin}^{} views", 2 * t + 1)));
    };
    let views = views as usize;
    let len = 2 * t + 2;
    // constraints grouped by the larger of their two view codes
    let mut cons: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); views];
    for w in 0..views * nin {
        let digits = decode(w, nin, len);
        let v1 = w / nin;
        let v2 = w % views;
        cons[v1.max(v2)].push((v1, v2, digits[t], digits[t + 1]));
    }
    let deadline = Deadline::new(budget);
    let mut assign: Vec<usize> = vec![0; views];
    let mut v = 0usize;
    let mut steps: u64 = 0;
    let mut fresh = true;
    loop {
        if !fresh {
            assign[v] += 1;
        }
        fresh = false;
        if assign[v] >= k {
            if v == 0 {
                return Ok(WindowSearch::None);
            }
            assign[v] = 0;
            v -= 1;
            continue;
        }
        steps += 1;
        if steps % 4096 == 0 && deadline.expired() {
            return Ok(WindowSearch::BudgetExceeded);
        }
        let ok = cons[v]
            .iter()
            .all(|&(v1, v2, a, b)| p.allows(a, b, assign[v1], assign[v2]));
        if ok {
            if v + 1 == views {
                return Ok(WindowSearch::Found(WindowRule::new(p, t, assign)));
            }
            v += 1;
            assign[v] = 0;
            fresh = true;
        }
    }
}

/// Fewest violated edges any radius-`t` input rule achieves on one cycle,
/// with a minimizing table restricted to the views that occur.
pub fn min_violations(
    p: &NormalLcl,
    t: usize,
    inst: &LabeledInstance,
    budget: &SearchBudget,
) -> Result<usize, OracleError> {
    let nin = p.nin();
    let k = p.nout();
    let codes = views_of(inst, t, nin);
    let mut distinct: Vec<usize> = codes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let space = checked_pow(k, distinct.len());
    if space.is_none_or(|s| s > super::MAX_ENUMERATION) {
        return Err(OracleError::Budget(format!(
            "{k}^{} rule tables on this instance",
            distinct.len()
        )));
    }
    let slot: std::collections::HashMap<usize, usize> =
        distinct.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let m = distinct.len();
    // edge cost depends on the pair of view slots
    let mut edges: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); m];
    for (i, j) in inst.edges() {
        let (si, sj) = (slot[&codes[i]], slot[&codes[j]]);
        edges[si.max(sj)].push((si, sj, inst.inputs[i], inst.inputs[j]));
    }
    let deadline = Deadline::new(budget);
    let mut best = usize::MAX;
    let mut assign = vec![0usize; m];
    let mut steps = 0u64;
    fn rec(
        s: usize,
        cost: usize,
        p: &NormalLcl,
        edges: &[Vec<(usize, usize, usize, usize)>],
        assign: &mut Vec<usize>,
        best: &mut usize,
        steps: &mut u64,
        deadline: &Deadline,
    ) -> bool {
        if cost >= *best {
            return true;
        }
        if s == assign.len() {
            *best = cost;
            return true;
        }
        for o in 0..p.nout() {
            *steps += 1;
            if *steps % 4096 == 0 && deadline.expired() {
                return false;
            }
            assign[s] = o;
            let add = edges[s]
                .iter()
                .filter(|&&(a, b, x, y)| !p.allows(x, y, assign[a], assign[b]))
                .count();
            if !rec(s + 1, cost + add, p, edges, assign, best, steps, deadline) {
                return false;
            }
        }
        true
    }
    if !rec(0, 0, p, &edges, &mut assign, &mut best, &mut steps, &deadline) {
        return Err(OracleError::Budget("wallclock".into()));
    }
    Ok(best)
}
