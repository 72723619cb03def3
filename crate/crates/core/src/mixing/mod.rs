//! Deciding whether a problem is mixing.

pub mod decider;
pub mod perm;
pub mod subpartition;

pub use decider::{
    classify, is_mixing, verify_witness, ClassReport, ClassifyConfig, ClassifyError, ComplexityClass,
    DeciderConfig, Generator, MixingError, MixingVerdict, MixingWitness,
};
pub use perm::{group_closure, has_fixed_point, permutations_of_block, Perm, PermGroup};
pub use subpartition::{enumerate_subpartitions, CapExceeded, Subpartition, SubpartitionDesc};
