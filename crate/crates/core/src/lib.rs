//! Classification, solving and simulation of locally checkable labelings on
//! cycles and paths.

pub mod automaton;
pub mod blocks;
pub mod catalog;
pub mod gen;
pub mod mixing;
pub mod model;
pub mod normalize;
pub mod oracle;
pub mod par;
pub mod parse;
pub mod relation;
pub mod sim;
pub mod solver;

pub use model::{Alphabet, GeneralLcl, LabeledInstance, Lcl, ModelError, NormalLcl, Topology};
pub use par::Exec;
pub use relation::Relation;
pub mod crosscheck;
