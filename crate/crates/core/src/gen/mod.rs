//! Adversarial input labellings: block chains and superblocks.

use thiserror::Error;

use crate::blocks::BlockError;
use crate::model::ModelError;

mod chain;
mod superblock;

pub use chain::{sample_chain, BlockFamily, BlockMark, MarkovChain, SampledChain, State};
pub use superblock::superblock_instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("a family needs at least one block")]
    EmptyFamily,
    #[error("block {index} is shorter than 2 letters")]
    ShortBlock { index: usize },
    #[error("block {index} does not start and end with the anchor")]
    BadEndpoint { index: usize },
    #[error("block {index} is not a permutation block for the attached subpartition")]
    NotPermutation { index: usize },
    #[error("n = {n} is below the longest block ({need})")]
    TooSmall { n: usize, need: usize },
    #[error("the walk of length {0} completed no block")]
    NoCompleteBlock(usize),
    #[error("superblock length must be at least 1 and m at least 2")]
    Superblock,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Block(#[from] BlockError),
}
