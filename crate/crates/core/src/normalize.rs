//! Reduction from general (radius-r) form to normal (pairwise) form.
//!
//! Output letters of the normal form are the accepted windows of the general
//! problem, in declaration order, labelled `w0, w1, ...`.

use crate::model::{Alphabet, GeneralLcl, LabeledInstance, ModelError, NormalLcl, Topology};

pub fn normalize(p: &GeneralLcl) -> NormalLcl {
    let r = p.radius;
    let ws = p.windows();
    let nin = p.sigma_in.len();
    let sigma_out = if ws.is_empty() {
        // keep the alphabet non-empty; nothing is allowed
        Alphabet::generated(1, |_| "w_none".to_string())
    } else {
        Alphabet::generated(ws.len(), |i| format!("w{i}"))
    };
    let mut np = NormalLcl::new(format!("{}_nf", p.name), p.sigma_in.clone(), sigma_out);
    for (u, wu) in ws.iter().enumerate() {
        for (v, wv) in ws.iter().enumerate() {
            if wu[1..] != wv[..2 * r] {
                continue;
            }
            let a = wu[r].0;
            let b = wv[r].0;
            debug_assert!(a < nin && b < nin);
            np.allow(a, b, u, v);
        }
    }
    np
}

/// Center outputs of a normal-form solution.
pub fn project_solution(p: &GeneralLcl, np_solution: &[usize]) -> Result<Vec<usize>, ModelError> {
    if np_solution.is_empty() {
        return Err(ModelError::EmptyInstance);
    }
    let ws = p.windows();
    np_solution
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            ws.get(w)
                .map(|win| win[p.radius].1)
                .ok_or(ModelError::LabelOutOfAlphabet { index: i })
        })
        .collect()
}

/// Replaces each node's output by the index of the window it sees.
pub fn lift_solution(
    p: &GeneralLcl,
    inst: &LabeledInstance,
    outputs: &[usize],
) -> Result<Vec<usize>, ModelError> {
    check_normalizable(p, inst)?;
    if outputs.len() != inst.n() {
        return Err(ModelError::LengthMismatch {
            expected: inst.n(),
            got: outputs.len(),
        });
    }
    (0..inst.n())
        .map(|i| {
            p.window_index(&p.window_at(&inst.inputs, outputs, i))
                .ok_or(ModelError::RejectedWindow { index: i })
        })
        .collect()
}

/// Normal-form workflows need a cycle of length at least `2r + 2`.
pub fn check_normalizable(p: &GeneralLcl, inst: &LabeledInstance) -> Result<(), ModelError> {
    if inst.topology != Topology::Cycle {
        return Err(ModelError::Topology(
            "general-form problems are checked on cycles only".into(),
        ));
    }
    let need = 2 * p.radius + 2;
    if inst.n() < need {
        return Err(ModelError::InstanceTooShort {
            n: inst.n(),
            radius: p.radius,
            need,
        });
    }
    inst.check(p.sigma_in.len())
}
