use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GenError;
use crate::blocks::block_type;
use crate::mixing::{permutations_of_block, Subpartition};
use crate::model::{Alphabet, LabeledInstance, NormalLcl};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockFamily {
    pub name: String,
    pub sigma_in: Alphabet,
    pub anchor: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl BlockFamily {
    pub fn new(
        name: impl Into<String>,
        sigma_in: Alphabet,
        anchor: usize,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self, GenError> {
        if blocks.is_empty() {
            return Err(GenError::EmptyFamily);
        }
        for (index, b) in blocks.iter().enumerate() {
            if b.len() < 2 {
                return Err(GenError::ShortBlock { index });
            }
            if b[0] != anchor || b[b.len() - 1] != anchor {
                return Err(GenError::BadEndpoint { index });
            }
            if let Some(i) = b.iter().position(|&a| a >= sigma_in.len()) {
                return Err(crate::model::ModelError::LabelOutOfAlphabet { index: i }.into());
            }
        }
        Ok(BlockFamily {
            name: name.into(),
            sigma_in,
            anchor,
            blocks,
        })
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.lengths().into_iter().max().unwrap_or(0)
    }

    /// Checks every block realizes at least one permutation of `sp`.
    pub fn verify_permutation_blocks(&self, p: &NormalLcl, sp: &Subpartition) -> Result<(), GenError> {
        for (index, b) in self.blocks.iter().enumerate() {
            let t = block_type(p, b)?;
            if permutations_of_block(&t.0, sp).is_empty() {
                return Err(GenError::NotPermutation { index });
            }
        }
        Ok(())
    }
}

/// A chain state: `(letter, position in block, block)`. The last letter of
/// each block is not a state; it is the first letter of the next block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct State {
    pub letter: usize,
    pub position: usize,
    pub block: usize,
}

#[derive(Debug, Clone)]
pub struct MarkovChain {
    pub states: Vec<State>,
    /// Index of `(0, block)` in `states`.
    first: Vec<usize>,
}

impl MarkovChain {
    pub fn new(f: &BlockFamily) -> Self {
        let mut states = Vec::new();
        let mut first = Vec::new();
        for (i, b) in f.blocks.iter().enumerate() {
            first.push(states.len());
            for (j, &letter) in b[..b.len() - 1].iter().enumerate() {
                states.push(State {
                    letter,
                    position: j,
                    block: i,
                });
            }
        }
        MarkovChain { states, first }
    }

    pub fn num_blocks(&self) -> usize {
        self.first.len()
    }

    fn is_last(&self, s: usize) -> bool {
        s + 1 == self.states.len() || self.states[s + 1].block != self.states[s].block
    }

    /// Outgoing transitions of state `s` with their probabilities.
    pub fn transition_row(&self, s: usize) -> Vec<(usize, f64)> {
        if self.is_last(s) {
            let p = 1.0 / self.num_blocks() as f64;
            self.first.iter().map(|&t| (t, p)).collect()
        } else {
            vec![(s + 1, 1.0)]
        }
    }

    pub fn step<R: Rng>(&self, s: usize, rng: &mut R) -> usize {
        if self.is_last(s) {
            self.first[rng.random_range(0..self.num_blocks())]
        } else {
            s + 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockMark {
    pub block: usize,
    pub start: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampledChain {
    #[serde(skip)]
    pub instance: LabeledInstance,
    pub requested_n: usize,
    pub n: usize,
    pub seed: u64,
    /// Positions dropped before the first block start.
    pub dropped_prefix: usize,
    pub marks: Vec<BlockMark>,
}

impl MarkovChain {
    /// Walks `n` steps from a uniform state and keeps the complete blocks,
    /// so the cycle closes at a block boundary.
    pub fn sample(&self, f: &BlockFamily, n: usize, seed: u64) -> Result<SampledChain, GenError> {
        if n < f.max_len() {
            return Err(GenError::TooSmall { n, need: f.max_len() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = rng.random_range(0..self.states.len());
        let mut walk = Vec::with_capacity(n);
        for _ in 0..n {
            walk.push(s);
            s = self.step(s, &mut rng);
        }
        let Some(begin) = walk.iter().position(|&s| self.states[s].position == 0) else {
            return Err(GenError::NoCompleteBlock(n));
        };
        let Some(end) = walk.iter().rposition(|&s| self.is_last(s)) else {
            return Err(GenError::NoCompleteBlock(n));
        };
        if end < begin {
            return Err(GenError::NoCompleteBlock(n));
        }
        let kept = &walk[begin..=end];
        let inputs = kept.iter().map(|&s| self.states[s].letter).collect();
        let marks = kept
            .iter()
            .map(|&s| BlockMark {
                block: self.states[s].block,
                start: self.states[s].position == 0,
            })
            .collect();
        Ok(SampledChain {
            instance: LabeledInstance::cycle(inputs).with_seed(seed),
            requested_n: n,
            n: kept.len(),
            seed,
            dropped_prefix: begin,
            marks,
        })
    }
}

pub fn sample_chain(f: &BlockFamily, n: usize, seed: u64) -> Result<SampledChain, GenError> {
    MarkovChain::new(f).sample(f, n, seed)
}

impl SampledChain {
    /// Re-reads the letters at the marked boundaries; every segment must be
    /// its block without the closing anchor, followed by the anchor.
    pub fn factors_into(&self, f: &BlockFamily) -> bool {
        let inputs = &self.instance.inputs;
        let n = inputs.len();
        if n == 0 || !self.marks[0].start {
            return false;
        }
        let mut p = 0;
        while p < n {
            let m = self.marks[p];
            if !m.start || m.block >= f.blocks.len() {
                return false;
            }
            let b = &f.blocks[m.block];
            let body = b.len() - 1;
            if p + body > n {
                return false;
            }
            for j in 0..body {
                let mj = self.marks[p + j];
                if inputs[p + j] != b[j] || mj.block != m.block || mj.start != (j == 0) {
                    return false;
                }
            }
            if inputs[(p + body) % n] != f.anchor {
                return false;
            }
            p += body;
        }
        true
    }

    /// Sequence of block indices in order.
    pub fn block_sequence(&self) -> Vec<usize> {
        self.marks.iter().filter(|m| m.start).map(|m| m.block).collect()
    }

    /// Fraction of blocks of each index.
    pub fn block_frequencies(&self, num_blocks: usize) -> Vec<f64> {
        let seq = self.block_sequence();
        let mut c = vec![0usize; num_blocks];
        for &b in &seq {
            c[b] += 1;
        }
        c.into_iter().map(|x| x as f64 / seq.len() as f64).collect()
    }
}
