#![allow(dead_code)]

use lcllab::crosscheck::random_problem;
use lcllab::NormalLcl;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn problem(seed: u64, nin: usize, nout: usize, density: f64) -> NormalLcl {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_problem(&mut rng, nin, nout, density, format!("p{seed}"))
}

/// All words over `k` letters of length `n`, last position fastest.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| (0..k).map(move |a| [w.clone(), vec![a]].concat()))
            .collect();
    }
    out
}
