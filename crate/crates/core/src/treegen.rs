//! Uniform labeled trees through the Prüfer bijection.
//!
//! All public interfaces speak 1-based labels `1..=n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`enumerate_trees`] (`8^6 = 262144` trees).
pub const ENUMERATION_MAX_N: usize = 8;

/// An unrooted tree on the labels `1..=n`, stored as its `n - 1` edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl LabeledTree {
    /// Builds a tree from an edge list, checking that it is a spanning tree of
    /// `1..=n`.
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        let tree = Self { n, edges };
        tree.validate()?;
        Ok(tree)
    }

    /// The single-vertex tree.
    pub fn singleton() -> Self {
        Self { n: 1, edges: Vec::new() }
    }

    pub(crate) fn from_edges_unchecked(n: usize, edges: Vec<(u32, u32)>) -> Self {
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Checks edge count, label range, and acyclicity (which together with
    /// the count implies connectivity).
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return invalid("a tree needs at least one vertex");
        }
        if self.edges.len() != self.n - 1 {
            return invalid(format!(
                "a tree on {} vertices has {} edges, got {}",
                self.n,
                self.n - 1,
                self.edges.len()
            ));
        }
        let mut sets = DisjointSets::new(self.n);
        for &(u, v) in &self.edges {
            for w in [u, v] {
                if w == 0 || w as usize > self.n {
                    return invalid(format!("label {w} outside 1..={}", self.n));
                }
            }
            if sets.union(u - 1, v - 1).is_none() {
                return invalid(format!("edge {u}-{v} closes a cycle"));
            }
        }
        Ok(())
    }

    /// Adjacency lists indexed by 0-based vertex; entries are `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(u32, u32)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u as usize - 1].push((v - 1, i as u32));
            adj[v as usize - 1].push((u - 1, i as u32));
        }
        adj
    }

    /// Edge set in a canonical form (each pair ordered, list sorted).
    pub fn canonical_edges(&self) -> Vec<(u32, u32)> {
        let mut e: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Renders the edge-list text format: a `n=<n>` header then one `u v` per line.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_edge_list_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty edge list".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad header {header:?}")))?;
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        for line in lines {
            let mut parts = line.split_whitespace().map(str::parse::<u32>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return invalid(format!("bad edge line {line:?}")),
            }
        }
        Self::new(n, edges)
    }
}

/// A Prüfer code: `n - 2` labels from `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PruferSequence {
    n: usize,
    symbols: Vec<u32>,
}

impl PruferSequence {
    pub fn new(n: usize, symbols: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return invalid(format!("Prüfer sequences need n >= 2, got {n}"));
        }
        if symbols.len() != n - 2 {
            return invalid(format!(
                "Prüfer sequence for n={n} has length {}, got {}",
                n - 2,
                symbols.len()
            ));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s == 0 || s as usize > n) {
            return invalid(format!("symbol {s} outside 1..={n}"));
        }
        Ok(Self { n, symbols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }
}

/// Linear-time decoding. The edge list comes out in the order the leaves are
/// attached.
pub fn prufer_decode(seq: &PruferSequence) -> LabeledTree {
    let n = seq.n;
    // degree[v] for 1-based v, index 0 unused
    let mut degree = vec![1u32; n + 1];
    for &s in &seq.symbols {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 1usize;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in &seq.symbols {
        edges.push((leaf as u32, v));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 && (v as usize) < ptr {
            leaf = v as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, n as u32));
    LabeledTree::from_edges_unchecked(n, edges)
}

/// Linear-time encoding; rejects edge lists that are not spanning trees.
pub fn prufer_encode(tree: &LabeledTree) -> Result<PruferSequence> {
    tree.validate()?;
    let n = tree.n;
    if n < 2 {
        return invalid("Prüfer encoding needs n >= 2");
    }
    // Root at n and record parents.
    let adj = tree.adjacency();
    let mut parent = vec![u32::MAX; n];
    let mut stack = vec![(n - 1) as u32];
    parent[n - 1] = (n - 1) as u32;
    while let Some(u) = stack.pop() {
        for &(w, _) in &adj[u as usize] {
            if parent[w as usize] == u32::MAX {
                parent[w as usize] = u;
                stack.push(w);
            }
        }
    }
    let mut degree: Vec<u32> = adj.iter().map(|a| a.len() as u32).collect();
    let mut symbols = Vec::with_capacity(n - 2);
    let mut ptr = 0usize;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for _ in 0..n - 2 {
        let next = parent[leaf] as usize;
        symbols.push(next as u32 + 1);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    Ok(PruferSequence { n, symbols })
}

/// Uniform draw among the `n^(n-2)` labeled trees on `1..=n`.
pub fn sample_uniform_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<LabeledTree> {
    match n {
        0 => invalid("cannot sample a tree on zero vertices"),
        1 => Ok(LabeledTree::singleton()),
        _ => {
            let symbols = (0..n - 2)
                .map(|_| rng.random_range(1..=n as u32))
                .collect();
            Ok(prufer_decode(&PruferSequence { n, symbols }))
        }
    }
}

/// All labeled trees on `1..=n`, in lexicographic Prüfer order.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumeration> {
    if !(2..=ENUMERATION_MAX_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("2..={ENUMERATION_MAX_N}"),
        });
    }
    Ok(TreeEnumeration {
        n,
        next: Some(vec![1; n - 2]),
    })
}

/// Iterator returned by [`enumerate_trees`].
#[derive(Debug, Clone)]
pub struct TreeEnumeration {
    n: usize,
    next: Option<Vec<u32>>,
}

impl Iterator for TreeEnumeration {
    type Item = LabeledTree;

    fn next(&mut self) -> Option<LabeledTree> {
        let current = self.next.take()?;
        let tree = prufer_decode(&PruferSequence {
            n: self.n,
            symbols: current.clone(),
        });
        // odometer increment, last position fastest
        let mut succ = current;
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if (succ[i] as usize) < self.n {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 1;
        }
        Some(tree)
    }
}
