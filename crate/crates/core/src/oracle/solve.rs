use super::{checked_pow, OracleError, SearchBudget, MAX_ENUMERATION};
use crate::model::{LabeledInstance, NormalLcl};

/// Every valid coloring, in lexicographic order, by trying all of them.
pub fn oracle_solve(
    p: &NormalLcl,
    inst: &LabeledInstance,
    budget: &SearchBudget,
) -> Result<Vec<Vec<usize>>, OracleError> {
    let n = inst.n();
    let k = p.nout();
    if n > budget.max_instance_n || checked_pow(k, n).is_none_or(|c| c > MAX_ENUMERATION) {
        return Err(OracleError::Budget(format!("{k}^{n} colorings")));
    }
    if let Some(&bad) = inst.inputs.iter().find(|&&a| a >= p.nin()) {
        return Err(OracleError::Scope(format!("input letter {bad} out of range")));
    }
    let mut out = Vec::new();
    let mut col = vec![0usize; n];
    loop {
        let ok = inst
            .edges()
            .all(|(i, j)| p.allows(inst.inputs[i], inst.inputs[j], col[i], col[j]));
        if ok {
            out.push(col.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            col[i] += 1;
            if col[i] < k {
                break;
            }
            col[i] = 0;
        }
    }
}
