//! Edge relations of the input graph, block types, and the atlas of all
//! achievable block types for an anchor letter.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::model::NormalLcl;
use crate::relation::{DimensionMismatch, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("unknown input letter {0}")]
    UnknownLetter(usize),
    #[error("a block needs at least 2 letters, got {0}")]
    TooShort(usize),
    #[error("block must start and end with the same letter")]
    MismatchedEndpoints,
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRelation {
    pub left_input: usize,
    pub right_input: usize,
    pub rel: Relation,
}

pub fn edge_relation(p: &NormalLcl, a: usize, b: usize) -> Result<EdgeRelation, BlockError> {
    for x in [a, b] {
        if x >= p.nin() {
            return Err(BlockError::UnknownLetter(x));
        }
    }
    Ok(EdgeRelation {
        left_input: a,
        right_input: b,
        rel: p.edge(a, b).clone(),
    })
}

pub fn compose(r1: &Relation, r2: &Relation) -> Result<Relation, BlockError> {
    Ok(r1.compose(r2)?)
}

/// The type of a block: which (first output, last output) pairs extend to a
/// valid labelling of the whole block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockType(pub Relation);

impl BlockType {
    pub fn rel(&self) -> &Relation {
        &self.0
    }
}

impl Serialize for BlockType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_bit_string())
    }
}

/// Composed relation of the edges of `word` (any word of length >= 1).
pub fn word_relation(p: &NormalLcl, word: &[usize]) -> Relation {
    let mut acc = Relation::identity(p.nout());
    for w in word.windows(2) {
        acc = acc.then(p.edge(w[0], w[1]));
    }
    acc
}

pub fn block_type(p: &NormalLcl, block: &[usize]) -> Result<BlockType, BlockError> {
    if block.len() < 2 {
        return Err(BlockError::TooShort(block.len()));
    }
    if let Some(&x) = block.iter().find(|&&x| x >= p.nin()) {
        return Err(BlockError::UnknownLetter(x));
    }
    if block[0] != block[block.len() - 1] {
        return Err(BlockError::MismatchedEndpoints);
    }
    Ok(BlockType(word_relation(p, block)))
}

#[derive(Debug, Clone)]
pub struct TypeAtlas {
    pub anchor: usize,
    /// Each achievable type with its shortest, lexicographically least witness.
    pub achievable: BTreeMap<BlockType, Vec<usize>>,
    pub empty_witness: Option<Vec<usize>>,
    /// Length (in letters) of the longest witness needed.
    pub depth: usize,
    pub states_explored: usize,
}

impl TypeAtlas {
    pub fn empty_type_reachable(&self) -> bool {
        self.empty_witness.is_some()
    }

    pub fn types(&self) -> impl Iterator<Item = &BlockType> {
        self.achievable.keys()
    }
}

struct Node {
    letter: usize,
    parent: Option<usize>,
}

/// Breadth-first closure over `(last letter, accumulated relation)` states.
///
/// Letters are appended in canonical order, so the first time a state is
/// reached its path is the shortest and lexicographically least.
pub fn enumerate_block_types(p: &NormalLcl, sigma: usize) -> Result<TypeAtlas, BlockError> {
    if sigma >= p.nin() {
        return Err(BlockError::UnknownLetter(sigma));
    }
    let nin = p.nin();
    let mut nodes: Vec<Node> = vec![Node {
        letter: sigma,
        parent: None,
    }];
    let mut rels: Vec<Relation> = vec![Relation::identity(p.nout())];
    let mut seen: HashMap<(usize, Relation), usize> = HashMap::new();
    let mut queue = VecDeque::from([0usize]);
    let mut achievable = BTreeMap::new();
    let mut depth = 0;

    let witness = |nodes: &[Node], mut i: usize| {
        let mut w = Vec::new();
        loop {
            w.push(nodes[i].letter);
            match nodes[i].parent {
                Some(j) => i = j,
                None => break,
            }
        }
        w.reverse();
        w
    };

    while let Some(i) = queue.pop_front() {
        let last = nodes[i].letter;
        for b in 0..nin {
            let rel = rels[i].then(p.edge(last, b));
            let key = (b, rel);
            if seen.contains_key(&key) {
                continue;
            }
            let id = nodes.len();
            nodes.push(Node {
                letter: b,
                parent: Some(i),
            });
            let (_, rel) = key.clone();
            seen.insert(key, id);
            if b == sigma {
                let w = witness(&nodes, id);
                depth = depth.max(w.len());
                achievable.insert(BlockType(rel.clone()), w);
            }
            rels.push(rel);
            queue.push_back(id);
        }
    }

    let empty = BlockType(Relation::empty(p.nout()));
    let empty_witness = achievable.get(&empty).cloned();
    Ok(TypeAtlas {
        anchor: sigma,
        achievable,
        empty_witness,
        depth,
        states_explored: seen.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasEntry {
    pub relation: String,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasDump {
    pub anchor: String,
    pub types: Vec<AtlasEntry>,
    pub empty_type_reachable: bool,
    pub empty_witness: Option<String>,
}

pub fn dump_atlas(p: &NormalLcl, atlas: &TypeAtlas) -> AtlasDump {
    AtlasDump {
        anchor: p.sigma_in.label(atlas.anchor).to_string(),
        types: atlas
            .achievable
            .iter()
            .map(|(t, w)| AtlasEntry {
                relation: t.0.to_bit_string(),
                witness: p.sigma_in.render(w),
            })
            .collect(),
        empty_type_reachable: atlas.empty_type_reachable(),
        empty_witness: atlas.empty_witness.as_ref().map(|w| p.sigma_in.render(w)),
    }
}
