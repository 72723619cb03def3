//! Subpartitions of the output alphabet: a partial equivalence `∇`, a full
//! partition `ℙ` coarser than `∇`, and a partial order on `ℙ`'s classes.
//!
//! Sets of labels are `u8` masks, so alphabets are limited to 8 letters.

use std::sync::OnceLock;

use serde::Serialize;

use crate::model::Alphabet;

pub const MAX_LABELS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subpartition {
    size: usize,
    /// `∇` classes, ordered by least member.
    nabla: Vec<u8>,
    /// `ℙ` classes, ordered by least member.
    parts: Vec<u8>,
    /// `up[i]`: mask of `ℙ`-classes `j` with `i ⪯ j` (reflexive).
    up: Vec<u8>,
}

impl Subpartition {
    /// Builds and validates a subpartition. `up` must be reflexive.
    pub fn new(size: usize, nabla: Vec<u8>, parts: Vec<u8>, up: Vec<u8>) -> Result<Self, String> {
        let sp = Subpartition {
            size,
            nabla,
            parts,
            up,
        };
        sp.validate()?;
        Ok(sp)
    }

    fn validate(&self) -> Result<(), String> {
        if self.size > MAX_LABELS {
            return Err(format!("at most {MAX_LABELS} labels"));
        }
        let full: u8 = if self.size == 8 { 0xff } else { (1u8 << self.size) - 1 };
        let disjoint_cover = |classes: &[u8]| {
            let mut acc = 0u8;
            for &c in classes {
                if c == 0 || acc & c != 0 || c & !full != 0 {
                    return None;
                }
                acc |= c;
            }
            Some(acc)
        };
        disjoint_cover(&self.nabla).ok_or("∇ classes must be disjoint and non-empty")?;
        if disjoint_cover(&self.parts) != Some(full) {
            return Err("ℙ must partition the alphabet".into());
        }
        for &c in &self.nabla {
            if !self.parts.iter().any(|&p| c & !p == 0) {
                return Err("each ∇ class must lie inside one ℙ class".into());
            }
        }
        let k = self.parts.len();
        if self.up.len() != k {
            return Err("order has the wrong arity".into());
        }
        for i in 0..k {
            if self.up[i] >> i & 1 == 0 {
                return Err("order must be reflexive".into());
            }
            for j in 0..k {
                if i != j && self.le(i, j) && self.le(j, i) {
                    return Err("order must be antisymmetric".into());
                }
                if self.le(i, j) {
                    for l in 0..k {
                        if self.le(j, l) && !self.le(i, l) {
                            return Err("order must be transitive".into());
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Same `(∇, ℙ)` with another order taken from [`posets`].
    pub(crate) fn with_order(&self, up: Vec<u8>) -> Subpartition {
        debug_assert_eq!(up.len(), self.parts.len());
        Subpartition {
            size: self.size,
            nabla: self.nabla.clone(),
            parts: self.parts.clone(),
            up,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nabla(&self) -> &[u8] {
        &self.nabla
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.nabla.len()
    }

    pub fn dom(&self) -> u8 {
        self.nabla.iter().fold(0, |a, &c| a | c)
    }

    pub fn in_dom(&self, a: usize) -> bool {
        self.dom() >> a & 1 == 1
    }

    pub fn nabla_class(&self, a: usize) -> Option<usize> {
        self.nabla.iter().position(|&c| c >> a & 1 == 1)
    }

    pub fn part(&self, a: usize) -> usize {
        self.parts
            .iter()
            .position(|&c| c >> a & 1 == 1)
            .expect("ℙ covers every label")
    }

    /// `ℙ`-class of the `∇`-class `c`.
    pub fn part_of_class(&self, c: usize) -> usize {
        self.part(self.nabla[c].trailing_zeros() as usize)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn up(&self) -> &[u8] {
        &self.up
    }

    pub fn describe(&self, alpha: &Alphabet) -> SubpartitionDesc {
        let names = |m: u8| -> Vec<String> {
            (0..self.size)
                .filter(|&a| m >> a & 1 == 1)
                .map(|a| alpha.label(a).to_string())
                .collect()
        };
        let k = self.parts.len();
        let mut order = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && self.le(i, j) {
                    order.push((i, j));
                }
            }
        }
        SubpartitionDesc {
            nabla: self.nabla.iter().map(|&c| names(c)).collect(),
            parts: self.parts.iter().map(|&c| names(c)).collect(),
            order,
        }
    }
}

/// Labelled view for reports. `order` lists strict pairs `(i, j)` of
/// `ℙ`-class indices with `i ≺ j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubpartitionDesc {
    pub nabla: Vec<Vec<String>>,
    pub parts: Vec<Vec<String>>,
    pub order: Vec<(usize, usize)>,
}

/// All partitions of the set `mask`, in restricted-growth order over its
/// members ascending; classes ordered by least member.
pub fn set_partitions(mask: u8) -> Vec<Vec<u8>> {
    let elems: Vec<u8> = (0..8).filter(|&i| mask >> i & 1 == 1).collect();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; elems.len()];
    fn rec(i: usize, max: usize, elems: &[u8], rgs: &mut Vec<usize>, out: &mut Vec<Vec<u8>>) {
        if i == elems.len() {
            let mut classes = vec![0u8; if elems.is_empty() { 0 } else { max + 1 }];
            for (e, &c) in elems.iter().zip(rgs.iter()) {
                classes[c] |= 1 << e;
            }
            out.push(classes);
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for c in 0..=limit {
            rgs[i] = c;
            rec(i + 1, max.max(c), elems, rgs, out);
        }
    }
    rec(0, 0, &elems, &mut rgs, &mut out);
    out
}

/// All partial orders on `k` points as reflexive up-set masks.
///
/// Built by inserting points one at a time with a down-closed set below and
/// an up-closed set above, which yields each order exactly once.
pub fn posets(k: usize) -> &'static [Vec<u8>] {
    static CACHE: [OnceLock<Vec<Vec<u8>>>; MAX_LABELS + 1] = [const { OnceLock::new() }; MAX_LABELS + 1];
    CACHE[k].get_or_init(|| {
        // strict up-sets
        let mut cur: Vec<Vec<u8>> = vec![vec![]];
        for m in 0..k {
            let mut next = Vec::new();
            let all: u16 = 1 << m;
            for up in &cur {
                for d in 0..all {
                    let d = d as u8;
                    // every x with something of D above it must be in D
                    if (0..m).any(|x| d >> x & 1 == 0 && up[x] & d != 0) {
                        continue;
                    }
                    let mut common: u8 = if m == 0 { 0 } else { ((1u16 << m) - 1) as u8 };
                    for x in 0..m {
                        if d >> x & 1 == 1 {
                            common &= up[x];
                        }
                    }
                    for u in 0..all {
                        let u = u as u8;
                        if u & d != 0 || u & !common != 0 && d != 0 {
                            continue;
                        }
                        if (0..m).any(|x| u >> x & 1 == 1 && up[x] & !u != 0) {
                            continue;
                        }
                        let mut nu = up.clone();
                        for (x, item) in nu.iter_mut().enumerate() {
                            if d >> x & 1 == 1 {
                                *item |= 1 << m;
                            }
                        }
                        nu.push(u);
                        next.push(nu);
                    }
                }
            }
            cur = next;
        }
        cur.into_iter()
            .map(|up| up.iter().enumerate().map(|(i, &u)| u | 1 << i).collect())
            .collect()
    })
}

/// `(∇, ℙ)` pairs in canonical order: `dom(∇)` ascending, then `∇`, then `ℙ`.
pub fn bases(size: usize) -> Vec<(Vec<u8>, Vec<u8>)> {
    let full: u8 = if size == 8 { 0xff } else { ((1u16 << size) - 1) as u8 };
    let all_parts = set_partitions(full);
    let mut out = Vec::new();
    for dom in 0..=full as u16 {
        let dom = dom as u8;
        for nabla in set_partitions(dom) {
            for parts in &all_parts {
                let coarser = nabla.iter().all(|&c| parts.iter().any(|&p| c & !p == 0));
                if coarser {
                    out.push((nabla.clone(), parts.clone()));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("output alphabet has {size} letters; the cap is {cap}")]
pub struct CapExceeded {
    pub size: usize,
    pub cap: usize,
}

/// Every subpartition of an alphabet of `size` letters in canonical order.
pub fn enumerate_subpartitions(
    size: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Subpartition>, CapExceeded> {
    if size > cap.min(MAX_LABELS) || size == 0 {
        return Err(CapExceeded {
            size,
            cap: cap.min(MAX_LABELS),
        });
    }
    Ok(bases(size).into_iter().flat_map(move |(nabla, parts)| {
        posets(parts.len()).iter().map(move |up| Subpartition {
            size,
            nabla: nabla.clone(),
            parts: parts.clone(),
            up: up.clone(),
        })
    }))
}
