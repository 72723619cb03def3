use lcllab::crosscheck::{
    check_atlas, check_mixing, check_solver, check_window_soundness, exhaustive_small_family, random_pairs,
    random_problems, CheckReport,
};
use lcllab::catalog;
use lcllab::oracle::SearchBudget;
use lcllab::Exec;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct CheckSummary {
    pub full: bool,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Quick sizes by default; `full` runs the exhaustive family and the large
/// random suites.
pub fn run(budget: &SearchBudget, exec: Exec, full: bool, seed: u64) -> CheckSummary {
    let scale = if full { 1 } else { 10 };
    let mut checks = Vec::new();
    let mut mixing = random_problems(seed ^ 0x6d69, 200 / scale, &[1, 2], 3);
    if full {
        mixing.extend(exhaustive_small_family());
    }
    checks.push(check_mixing(&mixing, budget, exec));
    let mut atlas = random_problems(seed ^ 0x6174, 100 / scale, &[1, 2, 3], 2);
    atlas.extend(random_problems(seed ^ 0x6175, 100 / scale, &[1, 2, 3], 3));
    checks.push(check_atlas(&atlas, 6, exec));
    checks.push(check_solver(&random_pairs(seed ^ 0x736f, 500 / scale, 10), budget, exec));
    let mut window = vec![catalog::trivially_true(2), catalog::copy_input(), catalog::all_red()];
    window.extend(random_problems(seed ^ 0x7769, 40 / scale, &[1, 2], 2));
    checks.push(check_window_soundness(&window, 1, 1000 / scale, 10_000 / scale, seed, budget));
    CheckSummary {
        full,
        seed,
        passed: checks.iter().all(CheckReport::passed),
        checks,
    }
}
