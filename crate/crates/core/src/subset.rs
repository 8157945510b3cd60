//! Vertex subsets over a fixed domain `0..domain_size`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// A subset of `{0, .., domain_size-1}` stored as a dense bitset with a
/// cached cardinality. Membership is O(1); iteration is ascending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexSubset {
    domain: usize,
    words: Vec<u64>,
    len: usize,
}

impl VertexSubset {
    pub fn empty(domain: usize) -> Self {
        VertexSubset {
            domain,
            words: vec![0; domain.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(domain: usize) -> Self {
        let mut s = VertexSubset::empty(domain);
        for v in 0..domain {
            s.insert(v);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(domain: usize, indices: I) -> Result<Self> {
        let mut s = VertexSubset::empty(domain);
        for v in indices {
            if v >= domain {
                return Err(Error::invalid(format!(
                    "vertex index {v} out of domain 0..{domain}"
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.domain && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Inserts `v`; returns true if it was absent. Panics if out of domain.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.domain, "vertex {v} out of domain 0..{}", self.domain);
        let (w, b) = (v / 64, 1u64 << (v % 64));
        if self.words[w] & b == 0 {
            self.words[w] |= b;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Removes `v`; returns true if it was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.words[v / 64] &= !(1u64 << (v % 64));
        self.len -= 1;
        true
    }

    pub fn is_subset_of(&self, other: &VertexSubset) -> bool {
        self.domain == other.domain
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Ascending member iterator.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Serialize for VertexSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}
