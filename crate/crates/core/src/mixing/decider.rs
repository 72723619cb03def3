use serde::Serialize;
use thiserror::Error;

use super::perm::{constraints, group_closure, order_admits, permutations_of_block, Perm, TypeConstraints};
use super::subpartition::{bases, posets, CapExceeded, Subpartition, SubpartitionDesc, MAX_LABELS};
use crate::automaton::{build_automaton, classify_no_input, NoInputClass, NoInputVerdict};
use crate::blocks::{block_type, enumerate_block_types, BlockError, TypeAtlas};
use crate::model::NormalLcl;
use crate::oracle::window::{find_window_algorithm, WindowRule, WindowSearch};
use crate::oracle::SearchBudget;
use crate::par::{self, Exec};
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MixingError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Block(#[from] BlockError),
}

#[derive(Debug, Clone, Copy)]
pub struct DeciderConfig {
    pub cap_out: usize,
    /// Keep going after the first witness is impossible; in this mode every
    /// non-mixing candidate is summarised.
    pub full: bool,
    pub exec: Exec,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            cap_out: 6,
            full: false,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub block: String,
    #[serde(skip)]
    pub letters: Vec<usize>,
    pub permutation: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingWitness {
    pub anchor: String,
    #[serde(skip)]
    pub anchor_index: usize,
    #[serde(skip)]
    pub subpartition: Subpartition,
    #[serde(rename = "subpartition")]
    pub subpartition_desc: SubpartitionDesc,
    pub generators: Vec<Generator>,
    pub group: Vec<Perm>,
    /// The witness is the empty type: some input labelling has no solution.
    pub unsolvable_instance: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateSummary {
    pub anchor: String,
    pub subpartition: SubpartitionDesc,
    pub fixed_class: usize,
    pub permutation_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingVerdict {
    pub mixing: bool,
    pub witness: Option<MixingWitness>,
    pub candidates_checked: usize,
    /// Candidates with at least one permutation block.
    pub candidates_with_blocks: usize,
    /// Per-candidate fixed classes; only filled in full mode.
    pub summary: Vec<CandidateSummary>,
}

struct UnitResult {
    checked: usize,
    with_blocks: usize,
    witness: Option<MixingWitness>,
    summary: Vec<CandidateSummary>,
}

struct AnchorTypes {
    atlas: TypeAtlas,
    types: Vec<(Relation, Vec<usize>)>,
}

pub fn is_mixing(p: &NormalLcl, cfg: &DeciderConfig) -> Result<MixingVerdict, MixingError> {
    let size = p.nout();
    let cap = cfg.cap_out.min(MAX_LABELS);
    if size > cap {
        return Err(CapExceeded { size, cap }.into());
    }
    let anchors: Vec<usize> = (0..p.nin()).collect();
    let atlases = par::map(cfg.exec, &anchors, |&s| enumerate_block_types(p, s));
    let mut per_anchor = Vec::with_capacity(atlases.len());
    for a in atlases {
        let atlas = a?;
        let types = atlas
            .achievable
            .iter()
            .map(|(t, w)| (t.0.clone(), w.clone()))
            .collect();
        per_anchor.push(AnchorTypes { atlas, types });
    }

    let bases = bases(size);
    // base-major, so the empty-domain candidate of every anchor comes first
    let units: Vec<(usize, usize)> = (0..bases.len())
        .flat_map(|b| anchors.iter().map(move |&s| (s, b)))
        .collect();
    let full = cfg.full;
    let eval = |&(s, b): &(usize, usize)| {
        let (nabla, parts) = &bases[b];
        eval_unit(p, &per_anchor[s], nabla, parts, full)
    };
    let results = if full {
        par::map(cfg.exec, &units, eval)
    } else {
        par::prefix_until(cfg.exec, &units, eval, |r| r.witness.is_some())
    };

    let mut verdict = MixingVerdict {
        mixing: false,
        witness: None,
        candidates_checked: 0,
        candidates_with_blocks: 0,
        summary: Vec::new(),
    };
    for r in results {
        if verdict.witness.is_none() {
            verdict.candidates_checked += r.checked;
            verdict.candidates_with_blocks += r.with_blocks;
        }
        verdict.summary.extend(r.summary);
        if verdict.witness.is_none() && r.witness.is_some() {
            verdict.witness = r.witness;
            verdict.mixing = true;
            if !full {
                break;
            }
        }
    }
    Ok(verdict)
}

fn eval_unit(p: &NormalLcl, at: &AnchorTypes, nabla: &[u8], parts: &[u8], full: bool) -> UnitResult {
    let size = p.nout();
    let k = parts.len();
    let base = Subpartition::new(size, nabla.to_vec(), parts.to_vec(), (0..k).map(|i| 1u8 << i).collect())
        .expect("canonical bases are valid");
    let cons: Vec<(usize, TypeConstraints)> = at
        .types
        .iter()
        .enumerate()
        .filter_map(|(i, (t, _))| constraints(t, &base).map(|c| (i, c)))
        .filter(|(_, c)| !c.perms.is_empty())
        .collect();
    let posets = posets(k);
    let mut out = UnitResult {
        checked: 0,
        with_blocks: 0,
        witness: None,
        summary: Vec::new(),
    };
    if cons.is_empty() {
        out.checked = posets.len();
        return out;
    }
    let deg = nabla.len();
    let all_classes: u64 = if deg == 64 { u64::MAX } else { (1u64 << deg) - 1 };
    for up in posets {
        out.checked += 1;
        let sp = base.with_order(up.clone());
        let mut fixed = all_classes;
        let mut blocks = 0;
        for (_, c) in &cons {
            if order_admits(&c.need, &sp) {
                blocks += 1;
                for pm in &c.perms {
                    for cl in 0..deg {
                        if !pm.fixes(cl) {
                            fixed &= !(1u64 << cl);
                        }
                    }
                }
            }
        }
        if blocks == 0 {
            continue;
        }
        out.with_blocks += 1;
        if fixed != 0 {
            if full {
                out.summary.push(CandidateSummary {
                    anchor: p.sigma_in.label(at.atlas.anchor).to_string(),
                    subpartition: sp.describe(&p.sigma_out),
                    fixed_class: fixed.trailing_zeros() as usize,
                    permutation_blocks: blocks,
                });
            }
            continue;
        }
        out.witness = Some(build_witness(p, at, &cons, sp));
        return out;
    }
    out
}

fn build_witness(
    p: &NormalLcl,
    at: &AnchorTypes,
    cons: &[(usize, TypeConstraints)],
    sp: Subpartition,
) -> MixingWitness {
    let mut chosen: Vec<Generator> = Vec::new();
    let mut perms: Vec<Perm> = Vec::new();
    for (ti, c) in cons {
        if !order_admits(&c.need, &sp) {
            continue;
        }
        for pm in &c.perms {
            let covered = match group_closure(&perms) {
                Some(g) => g.elements.contains(pm),
                None => pm.is_identity() && sp.degree() > 0,
            };
            if !covered {
                perms.push(pm.clone());
                let letters = at.types[*ti].1.clone();
                chosen.push(Generator {
                    block: p.sigma_in.render(&letters),
                    letters,
                    permutation: pm.clone(),
                });
            }
        }
    }
    let group = group_closure(&perms).expect("witness has generators");
    MixingWitness {
        anchor: p.sigma_in.label(at.atlas.anchor).to_string(),
        anchor_index: at.atlas.anchor,
        subpartition_desc: sp.describe(&p.sigma_out),
        unsolvable_instance: sp.degree() == 0,
        subpartition: sp,
        generators: chosen,
        group: group.elements.into_iter().collect(),
    }
}

/// Re-derives every generator from its block and checks the group is closed
/// and fixed-point free.
pub fn verify_witness(p: &NormalLcl, w: &MixingWitness) -> Result<(), String> {
    if w.generators.is_empty() {
        return Err("no generators".into());
    }
    for g in &w.generators {
        if g.letters.first() != Some(&w.anchor_index) {
            return Err(format!("block {} does not start with the anchor", g.block));
        }
        let t = block_type(p, &g.letters).map_err(|e| e.to_string())?;
        if !permutations_of_block(&t.0, &w.subpartition).contains(&g.permutation) {
            return Err(format!("block {} does not induce its permutation", g.block));
        }
    }
    let gens: Vec<Perm> = w.generators.iter().map(|g| g.permutation.clone()).collect();
    let closed = group_closure(&gens).expect("non-empty");
    if closed.elements.iter().cloned().collect::<Vec<_>>() != w.group {
        return Err("group is not the closure of the generators".into());
    }
    if super::perm::has_fixed_point(&closed).is_some() {
        return Err("group has a fixed class".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComplexityClass {
    O1,
    #[serde(rename = "LOGSTAR")]
    LogStar,
    #[serde(rename = "BOREL")]
    Borel,
    #[serde(rename = "GLOBAL")]
    Global,
}

impl std::fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ComplexityClass::O1 => "O1",
            ComplexityClass::LogStar => "LOGSTAR",
            ComplexityClass::Borel => "BOREL",
            ComplexityClass::Global => "GLOBAL",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyConfig {
    pub decider: DeciderConfig,
    /// Largest radius tried when certifying constant-round solvability.
    pub o1_radius: usize,
    pub budget: SearchBudget,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            decider: DeciderConfig::default(),
            o1_radius: 1,
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Mixing(#[from] MixingError),
    #[error("internal inconsistency: automaton says {automaton:?} but mixing = {mixing}")]
    Inconsistent { automaton: NoInputClass, mixing: bool },
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub problem: String,
    pub mixing: bool,
    pub class: ComplexityClass,
    pub witness: Option<MixingWitness>,
    pub candidates_checked: usize,
    pub no_input_class: Option<NoInputVerdict>,
    pub window_rule: Option<WindowRule>,
    pub summary: Vec<CandidateSummary>,
    pub notes: Vec<String>,
}

pub fn classify(p: &NormalLcl, cfg: &ClassifyConfig) -> Result<ClassReport, ClassifyError> {
    let mut notes = Vec::new();
    if p.nin() == 1 {
        let a = build_automaton(p).expect("single input letter");
        let v = classify_no_input(&a);
        let class = match v.class {
            NoInputClass::ConstantO1 => ComplexityClass::O1,
            NoInputClass::LogStar => ComplexityClass::LogStar,
            NoInputClass::Global => ComplexityClass::Global,
        };
        let cap = cfg.decider.cap_out.min(MAX_LABELS);
        let (mixing, verdict) = if p.nout() <= cap {
            let m = is_mixing(p, &cfg.decider)?;
            if m.mixing != (v.class == NoInputClass::Global) {
                return Err(ClassifyError::Inconsistent {
                    automaton: v.class,
                    mixing: m.mixing,
                });
            }
            (m.mixing, Some(m))
        } else {
            notes.push(format!(
                "mixing cross-check skipped: {} output letters exceed the cap of {cap}",
                p.nout()
            ));
            (v.class == NoInputClass::Global, None)
        };
        return Ok(report(p, class, mixing, verdict, Some(v), None, notes));
    }

    let m = is_mixing(p, &cfg.decider)?;
    if m.mixing {
        return Ok(report(p, ComplexityClass::Global, true, Some(m), None, None, notes));
    }
    let mut rule = None;
    for t in 0..=cfg.o1_radius {
        match find_window_algorithm(p, t, &cfg.budget) {
            Ok(WindowSearch::Found(r)) => {
                rule = Some(r);
                break;
            }
            Ok(WindowSearch::None) => {}
            Ok(WindowSearch::BudgetExceeded) | Err(_) => {
                notes.push(format!("constant-round search at radius {t} exhausted its budget"));
                break;
            }
        }
    }
    let class = if rule.is_some() {
        ComplexityClass::O1
    } else {
        notes.push(format!("no constant-round rule with radius <= {}", cfg.o1_radius));
        ComplexityClass::Borel
    };
    Ok(report(p, class, false, Some(m), None, rule, notes))
}

fn report(
    p: &NormalLcl,
    class: ComplexityClass,
    mixing: bool,
    verdict: Option<MixingVerdict>,
    no_input: Option<NoInputVerdict>,
    rule: Option<WindowRule>,
    mut notes: Vec<String>,
) -> ClassReport {
    let (witness, checked, summary) = match verdict {
        Some(v) => (v.witness, v.candidates_checked, v.summary),
        None => (None, 0, Vec::new()),
    };
    if witness.as_ref().is_some_and(|w| w.unsolvable_instance) {
        notes.push("UNSOLVABLE_INSTANCE".into());
    }
    ClassReport {
        problem: p.name.clone(),
        mixing,
        class,
        witness,
        candidates_checked: checked,
        no_input_class: no_input,
        window_rule: rule,
        summary,
        notes,
    }
}
