//! Cut-trees and the marking-erasing process.
//!
//! Removing the edges of a tree one at a time splits its vertex set
//! recursively; the cut-tree records that splitting as a rooted binary tree
//! whose leaves are the vertices and whose internal nodes are the blocks that
//! get split. Burning a block is a mark on its internal node, and since a
//! burnt block is never split again, only marks with no marked ancestor
//! matter.
//!
//! Node layout: nodes `0..n` are the leaves (node `i` is vertex `i + 1`);
//! node `n + k - 1` is the internal node split at step `k`. Split-steps grow
//! along every root-to-leaf path, so a parent always has a smaller index than
//! its internal children, and a pass in index order is a top-down pass.

use crate::dsu::DisjointSets;
use crate::dynamics::{CoinVector, DynamicsOutcome, EdgeOrder};
use crate::error::{invalid, Result};
use crate::treegen::LabeledTree;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTree {
    n: usize,
    parent: Vec<u32>,
    size: Vec<u32>,
    /// Children of internal node with split-step `k` at index `k - 1`.
    children: Vec<[u32; 2]>,
    /// The tree edge removed at step `k` at index `k - 1` (1-based labels).
    split_edge: Vec<(u32, u32)>,
}

impl CutTree {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> u32 {
        if self.n == 1 {
            0
        } else {
            self.n as u32
        }
    }

    pub fn is_leaf(&self, node: u32) -> bool {
        (node as usize) < self.n
    }

    /// Internal node split at 1-based `step`.
    pub fn internal_node(&self, step: usize) -> u32 {
        debug_assert!(step >= 1 && step < self.n);
        (self.n + step - 1) as u32
    }

    /// Split-step of an internal node, `None` for leaves.
    pub fn split_step(&self, node: u32) -> Option<usize> {
        (!self.is_leaf(node)).then(|| node as usize - self.n + 1)
    }

    pub fn leaf_count(&self, node: u32) -> u32 {
        self.size[node as usize]
    }

    pub fn parent(&self, node: u32) -> Option<u32> {
        let p = self.parent[node as usize];
        (p != NONE).then_some(p)
    }

    pub fn children(&self, node: u32) -> Option<[u32; 2]> {
        self.split_step(node).map(|k| self.children[k - 1])
    }

    /// The tree edge whose removal splits this node's block.
    pub fn split_edge(&self, node: u32) -> Option<(u32, u32)> {
        self.split_step(node).map(|k| self.split_edge[k - 1])
    }

    /// Vertex label carried by a leaf.
    pub fn leaf_label(&self, node: u32) -> Option<u32> {
        self.is_leaf(node).then_some(node + 1)
    }

    /// Sorted vertex labels of the block generated by `node`.
    pub fn block(&self, node: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size[node as usize] as usize);
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            match self.children(x) {
                Some([a, b]) => {
                    stack.push(a);
                    stack.push(b);
                }
                None => out.push(x + 1),
            }
        }
        out.sort_unstable();
        out
    }

    /// Checks the structural invariants: leaf and internal counts, sizes
    /// adding up, parent/child consistency, and split-steps increasing away
    /// from the root.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.parent.len() != 2 * n - 1 || self.size.len() != 2 * n - 1 {
            return invalid("cut-tree arena must hold 2n-1 nodes");
        }
        if self.children.len() != n - 1 || self.split_edge.len() != n - 1 {
            return invalid("cut-tree must have n-1 internal nodes");
        }
        let root = self.root();
        if self.parent[root as usize] != NONE || self.size[root as usize] as usize != n {
            return invalid("root must be parentless with leaf-count n");
        }
        for node in 0..(2 * n - 1) as u32 {
            if node != root {
                let p = self.parent[node as usize];
                if p == NONE || self.is_leaf(p) || (!self.is_leaf(node) && p >= node) {
                    return invalid(format!("node {node} has a bad parent"));
                }
                if !self.children(p).unwrap().contains(&node) {
                    return invalid(format!("node {node} missing from its parent's children"));
                }
            }
            match self.children(node) {
                None => {
                    if self.size[node as usize] != 1 {
                        return invalid("leaves have leaf-count 1");
                    }
                }
                Some([a, b]) => {
                    if self.size[node as usize] != self.size[a as usize] + self.size[b as usize] {
                        return invalid(format!("leaf-count of node {node} is not additive"));
                    }
                    for c in [a, b] {
                        if !self.is_leaf(c) && c <= node {
                            return invalid("split-steps must increase towards the leaves");
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Indented text rendering, one node per line: `<block> step <k>` for
    /// internal nodes, `<block>` for leaves.
    pub fn render(&self, label: impl Fn(u32) -> String) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((node, depth)) = stack.pop() {
            let block: Vec<String> = self.block(node).into_iter().map(&label).collect();
            out.push_str(&"  ".repeat(depth));
            out.push('{');
            out.push_str(&block.join(","));
            out.push('}');
            if let Some(k) = self.split_step(node) {
                out.push_str(&format!(" step {k}"));
            }
            out.push('\n');
            if let Some([a, b]) = self.children(node) {
                stack.push((b, depth + 1));
                stack.push((a, depth + 1));
            }
        }
        out
    }
}

/// Builds the cut-tree by replaying the removals backwards: inserting the
/// edges from last to first merges components with a disjoint-set forest,
/// and the merge performed for edge `e_k` creates the node split at step `k`.
pub fn build_cut_tree(tree: &LabeledTree, order: &EdgeOrder) -> Result<CutTree> {
    let n = tree.n();
    order.check_for(tree)?;
    let total = 2 * n - 1;
    let mut parent = vec![NONE; total];
    let mut size = vec![1u32; total];
    let mut children = vec![[NONE; 2]; n - 1];
    let mut split_edge = vec![(0, 0); n - 1];
    // top[r] = cut-tree node currently standing for the component rooted at r
    let mut top: Vec<u32> = (0..n as u32).collect();
    let mut sets = DisjointSets::new(n);
    let edges = tree.edges();
    for (pos, &e) in order.as_slice().iter().enumerate().rev() {
        let (u, v) = edges[e as usize];
        let (ru, rv) = (sets.find(u - 1), sets.find(v - 1));
        let node = (n + pos) as u32;
        let (a, b) = (top[ru as usize], top[rv as usize]);
        parent[a as usize] = node;
        parent[b as usize] = node;
        size[node as usize] = size[a as usize] + size[b as usize];
        children[pos] = [a, b];
        split_edge[pos] = (u, v);
        let r = sets.union(ru, rv).expect("tree edges never close a cycle");
        top[r as usize] = node;
    }
    Ok(CutTree {
        n,
        parent,
        size,
        children,
        split_edge,
    })
}

/// Marks on internal nodes, identified by their 1-based split-step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkSet {
    /// Steps whose coin is 1, ascending.
    pub raw: Vec<usize>,
    /// Raw marks with no marked proper ancestor, ascending.
    pub kept: Vec<usize>,
}

/// Marks the internal node of step `k` when `coins[k]` is set, then erases
/// every mark lying below another mark.
pub fn mark_and_erase(ct: &CutTree, coins: &CoinVector) -> Result<MarkSet> {
    let n = ct.n;
    if coins.len() != n - 1 {
        return invalid(format!(
            "coin vector has length {}, expected {}",
            coins.len(),
            n - 1
        ));
    }
    let bits = coins.as_slice();
    // covered[k-1]: some proper ancestor of step k is marked
    let mut covered = vec![false; n.saturating_sub(1)];
    let mut marks = MarkSet::default();
    for k in 1..n {
        let node = ct.internal_node(k);
        if k > 1 {
            let pk = ct.split_step(ct.parent[node as usize]).unwrap();
            covered[k - 1] = covered[pk - 1] || bits[pk - 1];
        }
        if bits[k - 1] {
            marks.raw.push(k);
            if !covered[k - 1] {
                marks.kept.push(k);
            }
        }
    }
    Ok(marks)
}

/// Reads the dynamics observables off a marked cut-tree: kept marks are the
/// burnt blocks (in order of split-step), every leaf outside them is a
/// fireproof vertex, and fireproof components are joined along the edges
/// whose internal node lies outside all burnt blocks.
pub fn read_outcome(ct: &CutTree, marks: &MarkSet) -> DynamicsOutcome {
    let n = ct.n;
    let mut burnt = vec![false; 2 * n - 1];
    for &k in &marks.kept {
        burnt[ct.internal_node(k) as usize] = true;
    }
    for node in n..2 * n - 1 {
        if !burnt[node] {
            let p = ct.parent[node];
            burnt[node] = p != NONE && burnt[p as usize];
        }
    }
    for leaf in 0..n {
        let p = ct.parent[leaf];
        burnt[leaf] = p != NONE && burnt[p as usize];
    }

    let burnt_by_appearance: Vec<usize> = marks
        .kept
        .iter()
        .map(|&k| ct.size[ct.internal_node(k) as usize] as usize)
        .collect();
    let fire_steps = marks.kept.clone();
    let burnt_total: usize = burnt_by_appearance.iter().sum();

    let mut sets = DisjointSets::new(n);
    for k in 1..n {
        if burnt[n + k - 1] {
            continue;
        }
        let (u, v) = ct.split_edge[k - 1];
        if !burnt[u as usize - 1] && !burnt[v as usize - 1] {
            sets.union(u - 1, v - 1);
        }
    }
    let mut fireproof_components = Vec::new();
    for v in 0..n as u32 {
        if !burnt[v as usize] && sets.find(v) == v {
            fireproof_components.push(sets.set_size(v) as usize);
        }
    }
    fireproof_components.sort_unstable_by(|a, b| b.cmp(a));

    DynamicsOutcome::from_parts(
        n - burnt_total,
        burnt_by_appearance,
        fire_steps,
        fireproof_components,
    )
}

/// The full fast pipeline: build, mark, read.
pub fn simulate(tree: &LabeledTree, order: &EdgeOrder, coins: &CoinVector) -> Result<DynamicsOutcome> {
    let ct = build_cut_tree(tree, order)?;
    let marks = mark_and_erase(&ct, coins)?;
    Ok(read_outcome(&ct, &marks))
}
