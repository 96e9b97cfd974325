//! Set partitions in restricted-growth form.
//!
//! A partition of `{0, .., n-1}` is stored as a label vector where `labels[i]`
//! is the block of element `i` and blocks are numbered by first appearance.
//! This canonical form makes equality, refinement and products cheap and
//! deterministic.

use crate::error::{Error, Result};
use std::fmt;

/// A set partition of `{0, .., n-1}` in restricted-growth form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    block_count: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary label assignment by first appearance.
    pub fn from_assignment(assignment: &[usize]) -> Partition {
        let mut relabel: Vec<Option<usize>> = vec![None; assignment.len()];
        let mut labels = Vec::with_capacity(assignment.len());
        let mut next = 0usize;
        let mut seen = std::collections::HashMap::new();
        for &a in assignment {
            let l = *seen.entry(a).or_insert_with(|| {
                let l = next;
                next += 1;
                l
            });
            labels.push(l);
        }
        let _ = &mut relabel;
        Partition {
            labels,
            block_count: next,
        }
    }

    /// Builds a partition from explicit blocks; they must disjointly cover `{0, .., n-1}`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let mut assignment = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} outside ground set of size {n}"
                    )));
                }
                if assignment[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {i} appears in two blocks"
                    )));
                }
                assignment[i] = b;
            }
        }
        if let Some(i) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "element {i} not covered by any block"
            )));
        }
        Ok(Partition::from_assignment(&assignment))
    }

    /// The one-block partition (the terminal object of the partition lattice).
    pub fn coarsest(n: usize) -> Partition {
        Partition {
            labels: vec![0; n],
            block_count: if n == 0 { 0 } else { 1 },
        }
    }

    /// The all-singletons partition.
    pub fn finest(n: usize) -> Partition {
        Partition {
            labels: (0..n).collect(),
            block_count: n,
        }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Blocks in canonical order (by first appearance), each sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l].push(i);
        }
        blocks
    }

    /// True when every block of `self` is contained in a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        assert_eq!(self.ground_size(), other.ground_size());
        let mut image = vec![usize::MAX; self.block_count];
        for (i, &l) in self.labels.iter().enumerate() {
            let target = other.labels[i];
            if image[l] == usize::MAX {
                image[l] = target;
            } else if image[l] != target {
                return false;
            }
        }
        true
    }

    /// Coarsest common refinement: blocks are the nonempty pairwise intersections.
    pub fn product(&self, other: &Partition) -> Partition {
        assert_eq!(self.ground_size(), other.ground_size());
        let stride = other.block_count.max(1);
        let paired: Vec<usize> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| a * stride + b)
            .collect();
        Partition::from_assignment(&paired)
    }

    /// Block index of each element of `other`'s ground set under the coarser
    /// partition, i.e. the surjection map when `self.refines(other)`.
    pub fn refinement_map(&self, other: &Partition) -> Option<Vec<usize>> {
        if !self.refines(other) {
            return None;
        }
        let mut image = vec![usize::MAX; self.block_count];
        for (i, &l) in self.labels.iter().enumerate() {
            image[l] = other.labels[i];
        }
        Some(image)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        let rendered: Vec<String> = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{{{}}}", rendered.join("|"))
    }
}
