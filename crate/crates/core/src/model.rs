//! LCL problems in general (windowed) and normal (pairwise) form, plus finite
//! cycle/path instances.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown label `{label}`")]
    UnknownLabel {
        line: usize,
        column: usize,
        label: String,
    },
    #[error("duplicate alphabet entry `{0}`")]
    DuplicateLabel(String),
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("window has {got} positions, expected {expected}")]
    WindowLength { expected: usize, got: usize },
    #[error("node {index}: label out of alphabet")]
    LabelOutOfAlphabet { index: usize },
    #[error("instance must have at least one node")]
    EmptyInstance,
    #[error("ids: expected {expected} values, got {got}")]
    IdCount { expected: usize, got: usize },
    #[error("ids must be distinct (repeated id {0})")]
    DuplicateId(u64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cycle of length {n} is too short for radius {radius} (need at least {need})")]
    InstanceTooShort { n: usize, radius: usize, need: usize },
    #[error("window at node {index} is not accepted")]
    RejectedWindow { index: usize },
    #[error("unsupported topology: {0}")]
    Topology(String),
}

/// An ordered, duplicate-free, non-empty set of labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(labels: I) -> Result<Self, ModelError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(ModelError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Alphabet { labels })
    }

    /// `count` labels produced by `f(i)`; panics on duplicates.
    pub fn generated(count: usize, f: impl Fn(usize) -> String) -> Self {
        Alphabet::new((0..count).map(f)).expect("generated labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Renders a word; labels are concatenated when all are one character,
    /// space-separated otherwise.
    pub fn render(&self, word: &[usize]) -> String {
        let compact = self.labels.iter().all(|l| l.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&i| self.label(i)).collect();
        if compact {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Inverse of [`Alphabet::render`].
    pub fn parse_word(&self, text: &str) -> Option<Vec<usize>> {
        let text = text.trim();
        if text.contains(char::is_whitespace) || self.labels.iter().any(|l| l.chars().count() != 1)
        {
            text.split_whitespace().map(|t| self.index(t)).collect()
        } else {
            text.chars().map(|c| self.index(&c.to_string())).collect()
        }
    }
}

/// A window of `2r+1` `(input, output)` pairs; index `r` is the center.
pub type Window = Vec<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralLcl {
    pub name: String,
    pub sigma_in: Alphabet,
    pub sigma_out: Alphabet,
    pub radius: usize,
    windows: Vec<Window>,
    index: HashMap<Window, usize>,
}

impl GeneralLcl {
    pub fn new(
        name: impl Into<String>,
        sigma_in: Alphabet,
        sigma_out: Alphabet,
        radius: usize,
        windows: Vec<Window>,
    ) -> Result<Self, ModelError> {
        let mut p = GeneralLcl {
            name: name.into(),
            sigma_in,
            sigma_out,
            radius,
            windows: Vec::new(),
            index: HashMap::new(),
        };
        for w in windows {
            p.add_window(w)?;
        }
        Ok(p)
    }

    /// Adds a window; duplicates are ignored.
    pub fn add_window(&mut self, w: Window) -> Result<(), ModelError> {
        let expected = 2 * self.radius + 1;
        if w.len() != expected {
            return Err(ModelError::WindowLength {
                expected,
                got: w.len(),
            });
        }
        for (i, &(a, x)) in w.iter().enumerate() {
            if a >= self.sigma_in.len() || x >= self.sigma_out.len() {
                return Err(ModelError::LabelOutOfAlphabet { index: i });
            }
        }
        if !self.index.contains_key(&w) {
            self.index.insert(w.clone(), self.windows.len());
            self.windows.push(w);
        }
        Ok(())
    }

    /// Accepted windows in declaration order.
    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn window_index(&self, w: &[(usize, usize)]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn accepts(&self, w: &[(usize, usize)]) -> bool {
        self.index.contains_key(w)
    }

    pub fn window_len(&self) -> usize {
        2 * self.radius + 1
    }

    /// The window seen by node `i` of a cycle labelled by `inputs`/`outputs`.
    pub fn window_at(&self, inputs: &[usize], outputs: &[usize], i: usize) -> Window {
        let n = inputs.len();
        let r = self.radius;
        (0..=2 * r)
            .map(|j| {
                let k = (i + n * (r + 1) + j - r) % n;
                (inputs[k], outputs[k])
            })
            .collect()
    }

    /// Nodes of a cycle whose window is rejected.
    pub fn violations(&self, inst: &LabeledInstance, outputs: &[usize]) -> Result<Vec<usize>, ModelError> {
        if inst.topology != Topology::Cycle {
            return Err(ModelError::Topology(
                "general-form checking needs a cycle".into(),
            ));
        }
        if outputs.len() != inst.n() {
            return Err(ModelError::LengthMismatch {
                expected: inst.n(),
                got: outputs.len(),
            });
        }
        Ok((0..inst.n())
            .filter(|&i| !self.accepts(&self.window_at(&inst.inputs, outputs, i)))
            .collect())
    }
}

/// Pairwise LCL: a predicate on `(in_left, in_right, out_left, out_right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalLcl {
    pub name: String,
    pub sigma_in: Alphabet,
    pub sigma_out: Alphabet,
    edges: Vec<Relation>,
}

impl NormalLcl {
    /// A problem with nothing allowed.
    pub fn new(name: impl Into<String>, sigma_in: Alphabet, sigma_out: Alphabet) -> Self {
        let nin = sigma_in.len();
        let nout = sigma_out.len();
        NormalLcl {
            name: name.into(),
            sigma_in,
            sigma_out,
            edges: vec![Relation::empty(nout); nin * nin],
        }
    }

    pub fn with_allowed<I>(name: impl Into<String>, sigma_in: Alphabet, sigma_out: Alphabet, quads: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, usize, usize)>,
    {
        let mut p = NormalLcl::new(name, sigma_in, sigma_out);
        for (a, b, x, y) in quads {
            p.allow(a, b, x, y);
        }
        p
    }

    pub fn nin(&self) -> usize {
        self.sigma_in.len()
    }

    pub fn nout(&self) -> usize {
        self.sigma_out.len()
    }

    pub fn allow(&mut self, a: usize, b: usize, x: usize, y: usize) {
        let nin = self.nin();
        self.edges[a * nin + b].insert(x, y);
    }

    pub fn forbid(&mut self, a: usize, b: usize, x: usize, y: usize) {
        let nin = self.nin();
        self.edges[a * nin + b].remove(x, y);
    }

    #[inline]
    pub fn allows(&self, a: usize, b: usize, x: usize, y: usize) -> bool {
        self.edges[a * self.nin() + b].contains(x, y)
    }

    /// `{(x, y) : allows(a, b, x, y)}`.
    #[inline]
    pub fn edge(&self, a: usize, b: usize) -> &Relation {
        &self.edges[a * self.nin() + b]
    }

    /// Allowed quadruples in canonical `(a, b, x, y)` order.
    pub fn quadruples(&self) -> Vec<(usize, usize, usize, usize)> {
        let nin = self.nin();
        let mut out = Vec::new();
        for a in 0..nin {
            for b in 0..nin {
                for (x, y) in self.edge(a, b).pairs() {
                    out.push((a, b, x, y));
                }
            }
        }
        out
    }

    pub fn num_allowed(&self) -> usize {
        self.edges.iter().map(Relation::len).sum()
    }

    /// Same problem with outputs relabelled by `perm` (old index → new index)
    /// and the output alphabet reordered accordingly.
    pub fn permute_outputs(&self, perm: &[usize]) -> NormalLcl {
        let mut labels = vec![String::new(); self.nout()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = self.sigma_out.label(old).to_string();
        }
        let out = Alphabet::new(labels).expect("permutation of a valid alphabet");
        NormalLcl::with_allowed(
            self.name.clone(),
            self.sigma_in.clone(),
            out,
            self.quadruples()
                .into_iter()
                .map(|(a, b, x, y)| (a, b, perm[x], perm[y])),
        )
    }

    /// Same problem with inputs relabelled by `perm`.
    pub fn permute_inputs(&self, perm: &[usize]) -> NormalLcl {
        let mut labels = vec![String::new(); self.nin()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = self.sigma_in.label(old).to_string();
        }
        let inp = Alphabet::new(labels).expect("permutation of a valid alphabet");
        NormalLcl::with_allowed(
            self.name.clone(),
            inp,
            self.sigma_out.clone(),
            self.quadruples()
                .into_iter()
                .map(|(a, b, x, y)| (perm[a], perm[b], x, y)),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lcl {
    General(GeneralLcl),
    Normal(NormalLcl),
}

impl Lcl {
    pub fn name(&self) -> &str {
        match self {
            Lcl::General(p) => &p.name,
            Lcl::Normal(p) => &p.name,
        }
    }

    pub fn sigma_in(&self) -> &Alphabet {
        match self {
            Lcl::General(p) => &p.sigma_in,
            Lcl::Normal(p) => &p.sigma_in,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Cycle,
    Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub topology: Topology,
    pub inputs: Vec<usize>,
    pub ids: Option<Vec<u64>>,
    pub seed: Option<u64>,
}

impl LabeledInstance {
    pub fn cycle(inputs: Vec<usize>) -> Self {
        LabeledInstance {
            topology: Topology::Cycle,
            inputs,
            ids: None,
            seed: None,
        }
    }

    pub fn path(inputs: Vec<usize>) -> Self {
        LabeledInstance {
            topology: Topology::Path,
            inputs,
            ids: None,
            seed: None,
        }
    }

    pub fn with_ids(mut self, ids: Vec<u64>) -> Self {
        self.ids = Some(ids);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn n(&self) -> usize {
        self.inputs.len()
    }

    pub fn successor(&self, i: usize) -> Option<usize> {
        match self.topology {
            Topology::Cycle => Some((i + 1) % self.n()),
            Topology::Path if i + 1 < self.n() => Some(i + 1),
            Topology::Path => None,
        }
    }

    /// Directed edges `(i, successor(i))`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).filter_map(move |i| self.successor(i).map(|j| (i, j)))
    }

    /// Checks the shape invariants against an input alphabet of size `nin`.
    pub fn check(&self, nin: usize) -> Result<(), ModelError> {
        if self.inputs.is_empty() {
            return Err(ModelError::EmptyInstance);
        }
        if let Some(index) = self.inputs.iter().position(|&a| a >= nin) {
            return Err(ModelError::LabelOutOfAlphabet { index });
        }
        if let Some(ids) = &self.ids {
            if ids.len() != self.n() {
                return Err(ModelError::IdCount {
                    expected: self.n(),
                    got: ids.len(),
                });
            }
            let mut sorted = ids.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(ModelError::DuplicateId(w[0]));
            }
        }
        Ok(())
    }
}

pub fn validate_instance(p: &NormalLcl, inst: &LabeledInstance) -> Result<(), ModelError> {
    inst.check(p.nin())
}
