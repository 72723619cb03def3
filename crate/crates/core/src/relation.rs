//! Binary relations on a finite label set, stored as row-major bit matrices.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// A relation `R ⊆ S × S` on `S = {0, .., size-1}`.
///
/// Row `a` holds the bitset `{b : (a, b) ∈ R}`. Ordering is lexicographic on
/// `(size, rows)` which gives atlases and certificates a stable order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

fn words_for(size: usize) -> usize {
    size.div_ceil(64).max(1)
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        let words = words_for(size);
        Relation {
            size,
            words,
            bits: vec![0; words * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for a in 0..size {
            r.insert(a, a);
        }
        r
    }

    pub fn full(size: usize) -> Self {
        let mut r = Relation::empty(size);
        for a in 0..size {
            for b in 0..size {
                r.insert(a, b);
            }
        }
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(size: usize, pairs: I) -> Self {
        let mut r = Relation::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        debug_assert!(a < self.size && b < self.size);
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.size && b < self.size, "pair out of range");
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        assert!(a < self.size && b < self.size, "pair out of range");
        self.bits[a * self.words + b / 64] &= !(1 << (b % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Number of pairs in the relation.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The row of `a` as a bitset over the codomain.
    #[inline]
    pub fn row(&self, a: usize) -> &[u64] {
        &self.bits[a * self.words..(a + 1) * self.words]
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&b| self.contains(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    /// Relational composition: `(a, c)` is in the result iff some `b` has
    /// `(a, b) ∈ self` and `(b, c) ∈ other`.
    pub fn compose(&self, other: &Relation) -> Result<Relation, DimensionMismatch> {
        if self.size != other.size {
            return Err(DimensionMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked variant of [`Relation::compose`]; panics on size mismatch.
    pub fn then(&self, other: &Relation) -> Relation {
        assert_eq!(self.size, other.size, "relation size mismatch");
        let mut out = Relation::empty(self.size);
        let w = self.words;
        for a in 0..self.size {
            let dst = a * w;
            for b in self.successors(a) {
                let src = other.row(b);
                for (i, word) in src.iter().enumerate() {
                    out.bits[dst + i] |= word;
                }
            }
        }
        out
    }

    /// Image of a set (given as a bitset of `words` words) under the relation.
    pub fn image(&self, set: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for a in iter_bits(set).take_while(|&a| a < self.size) {
            for (o, w) in out.iter_mut().zip(self.row(a)) {
                *o |= w;
            }
        }
        out
    }

    /// Preimage of a set: all `a` with some successor in `set`.
    pub fn preimage(&self, set: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for a in 0..self.size {
            if self.row(a).iter().zip(set).any(|(r, s)| r & s != 0) {
                out[a / 64] |= 1 << (a % 64);
            }
        }
        out
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Row-major `0`/`1` string of length `size²`.
    pub fn to_bit_string(&self) -> String {
        let mut s = String::with_capacity(self.size * self.size);
        for a in 0..self.size {
            for b in 0..self.size {
                s.push(if self.contains(a, b) { '1' } else { '0' });
            }
        }
        s
    }

    pub fn from_bit_string(size: usize, s: &str) -> Option<Relation> {
        if s.len() != size * size {
            return None;
        }
        let mut r = Relation::empty(size);
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => r.insert(i / size, i % size),
                '0' => {}
                _ => return None,
            }
        }
        Some(r)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation({}: {{", self.size)?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}})")
    }
}

/// Iterate the set bit positions of a multi-word bitset.
pub fn iter_bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            }
        })
    })
}

pub fn bitset_contains(set: &[u64], a: usize) -> bool {
    set[a / 64] >> (a % 64) & 1 == 1
}

pub fn bitset_singleton(words: usize, a: usize) -> Vec<u64> {
    let mut s = vec![0u64; words];
    s[a / 64] |= 1 << (a % 64);
    s
}

pub fn bitset_full(words: usize, size: usize) -> Vec<u64> {
    let mut s = vec![0u64; words];
    for a in 0..size {
        s[a / 64] |= 1 << (a % 64);
    }
    s
}
