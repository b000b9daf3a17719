//! Seeds and their breadth-first trees.
//!
//! A seed `(X_1, X_2, ...)` describes a rooted tree in which node `i` has
//! `X_i` children and nodes are labelled level by level, left to right. Only
//! a finite prefix is ever held; [`TreeView`] records what that prefix
//! determines and [`Explorer`] is the incremental walk shared by the exact
//! engine, the property evaluator and the samplers.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The first `k` offspring counts of a seed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedPrefix {
    counts: Vec<u32>,
}

impl SeedPrefix {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptySeed);
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// The prefix length `k`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The first `min(k, len)` counts.
    pub fn truncated(&self, k: usize) -> SeedPrefix {
        let k = k.clamp(1, self.counts.len());
        Self {
            counts: self.counts[..k].to_vec(),
        }
    }
}

impl FromStr for SeedPrefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|part| part.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::SeedSyntax(s.to_string()))?;
        Self::new(counts)
    }
}

impl fmt::Display for SeedPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// What a finite prefix says about the size of the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// The tree has exactly `n` nodes and all of them were explored.
    Complete(usize),
    /// The first `explored` nodes were visited and more exist.
    Incomplete { explored: usize },
}

impl Status {
    pub fn is_complete(self) -> bool {
        matches!(self, Status::Complete(_))
    }
}

/// One node as seen by the exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    /// 1-based breadth-first label.
    pub index: usize,
    /// Depth below the root (root is 0). Engines that only track parity
    /// pass `level % 2` here.
    pub level: u32,
    pub children: u32,
    /// Number of labels in use after this node's children were attached.
    /// Engines may saturate this once it exceeds their horizon.
    pub generated: usize,
}

/// Breadth-first exploration state.
///
/// `next` is the label of the next node to visit, `generated` the number of
/// labels handed out, and `level_end` the last label on the level of `next`
/// (or of the last visited node). The tree is complete once
/// `next > generated`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Explorer {
    next: usize,
    generated: usize,
    level_end: usize,
    level: u32,
}

impl Default for Explorer {
    fn default() -> Self {
        Self::new()
    }
}

impl Explorer {
    pub fn new() -> Self {
        Self {
            next: 1,
            generated: 1,
            level_end: 1,
            level: 0,
        }
    }

    /// Label of the next node to visit.
    pub fn next_index(&self) -> usize {
        self.next
    }

    pub fn generated(&self) -> usize {
        self.generated
    }

    /// Nodes visited so far.
    pub fn explored(&self) -> usize {
        self.next - 1
    }

    pub fn is_complete(&self) -> bool {
        self.next > self.generated
    }

    pub fn status(&self) -> Status {
        if self.is_complete() {
            Status::Complete(self.generated)
        } else {
            Status::Incomplete {
                explored: self.explored(),
            }
        }
    }

    /// Level the next node sits on.
    pub fn peek_level(&self) -> u32 {
        if self.next > self.level_end {
            self.level + 1
        } else {
            self.level
        }
    }

    /// Visits the next node, giving it `children` children.
    ///
    /// Must not be called on a complete exploration.
    pub fn visit(&mut self, children: u32) -> Node {
        debug_assert!(!self.is_complete());
        if self.next > self.level_end {
            self.level += 1;
            self.level_end = self.generated;
        }
        self.generated += children as usize;
        let node = Node {
            index: self.next,
            level: self.level,
            children,
            generated: self.generated,
        };
        self.next += 1;
        node
    }

    /// Clamps label bookkeeping at `limit`. Every label above `limit` is
    /// treated alike, which is exact for questions about nodes `<= limit - 1`.
    pub fn saturate(&mut self, limit: usize) {
        self.generated = self.generated.min(limit);
        self.level_end = self.level_end.min(limit);
    }

    /// Replaces the stored level by `f(level)`; used by engines that track
    /// only level parity.
    pub fn map_level(&mut self, f: impl FnOnce(u32) -> u32) {
        self.level = f(self.level);
    }
}

/// Breadth-first reconstruction of the tree from a seed prefix.
///
/// Only nodes that exist and whose label is at most `k` are recorded; those
/// are exactly the nodes whose child count is part of the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeView {
    parent: Vec<Option<usize>>,
    level: Vec<u32>,
    children: Vec<u32>,
    status: Status,
    generated: usize,
}

impl TreeView {
    pub fn num_nodes_known(&self) -> usize {
        self.level.len()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Labels handed out by the prefix, including nodes whose own count lies
    /// beyond it.
    pub fn generated(&self) -> usize {
        self.generated
    }

    /// Parent of node `index`, `None` for the root or unknown nodes.
    pub fn parent(&self, index: usize) -> Option<usize> {
        self.parent.get(index.checked_sub(1)?).copied().flatten()
    }

    pub fn level(&self, index: usize) -> Option<u32> {
        self.level.get(index.checked_sub(1)?).copied()
    }

    pub fn children(&self, index: usize) -> Option<u32> {
        self.children.get(index.checked_sub(1)?).copied()
    }

    /// `(index, level, children)` for every known node in label order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        self.level
            .iter()
            .zip(&self.children)
            .enumerate()
            .map(|(i, (&l, &c))| (i + 1, l, c))
    }

    /// Number of known nodes whose level satisfies `filter`.
    pub fn level_count(&self, filter: impl Fn(u32) -> bool) -> usize {
        self.level.iter().filter(|&&l| filter(l)).count()
    }
}

/// Rebuilds the labelled tree encoded by `seed`.
pub fn build_tree(seed: &SeedPrefix) -> TreeView {
    let mut parent = Vec::new();
    let mut level = Vec::new();
    let mut children = Vec::new();
    // parent_of[j] is the parent of label j + 1 for every label generated so far
    let mut parent_of: Vec<Option<usize>> = vec![None];
    let mut level_of: Vec<u32> = vec![0];
    let mut explorer = Explorer::new();

    for &count in seed.counts() {
        if explorer.is_complete() {
            break;
        }
        let node = explorer.visit(count);
        parent.push(parent_of[node.index - 1]);
        level.push(level_of[node.index - 1]);
        children.push(count);
        let cap = seed.len() + 1;
        for _ in 0..count {
            if parent_of.len() >= cap {
                break;
            }
            parent_of.push(Some(node.index));
            level_of.push(level_of[node.index - 1] + 1);
        }
    }

    TreeView {
        parent,
        level,
        children,
        status: explorer.status(),
        generated: explorer.generated(),
    }
}

/// Number of known nodes of `tree` whose level passes `filter`.
pub fn level_counts(tree: &TreeView, filter: impl Fn(u32) -> bool) -> usize {
    tree.level_count(filter)
}
