//! The fire dynamics on a tree.
//!
//! Edges are visited once each in a uniform random order. A visited edge that
//! is still flammable is set on fire with probability `p` (and then its whole
//! flammable component burns at once) or fireproofed otherwise; an edge
//! already burnt is skipped. A vertex is fireproof when all its edges are.
//!
//! Two engines share one contract: [`run_forward`] replays the dynamics
//! literally and is the reference, [`run_dynamics`] goes through the cut-tree
//! pipeline in [`crate::cuttree`].

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cuttree;
use crate::dsu::DisjointSets;
use crate::error::{invalid, Error, Result};
use crate::treegen::LabeledTree;

/// Largest tree accepted by [`run_marked_process`].
pub const MARKED_PROCESS_MAX_N: usize = 10_000_000;

/// A permutation of the edge indices `0..n-1`; position `k - 1` holds the
/// edge visited at step `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeOrder(Vec<u32>);

impl EdgeOrder {
    pub fn new(order: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &e in &order {
            match seen.get_mut(e as usize) {
                Some(s) if !*s => *s = true,
                _ => return invalid(format!("edge order is not a permutation (entry {e})")),
            }
        }
        Ok(Self(order))
    }

    pub fn identity(edges: usize) -> Self {
        Self((0..edges as u32).collect())
    }

    pub fn random<R: Rng + ?Sized>(edges: usize, rng: &mut R) -> Self {
        let mut v: Vec<u32> = (0..edges as u32).collect();
        v.shuffle(rng);
        Self(v)
    }

    /// Every order on `edges` edges, in lexicographic order.
    pub fn all(edges: usize) -> impl Iterator<Item = EdgeOrder> {
        let mut next = Some((0..edges as u32).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            if next_permutation(&mut succ) {
                next = Some(succ);
            }
            Some(EdgeOrder(current))
        })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn check_for(&self, tree: &LabeledTree) -> Result<()> {
        if self.0.len() != tree.n() - 1 {
            return invalid(format!(
                "edge order has length {}, tree has {} edges",
                self.0.len(),
                tree.n() - 1
            ));
        }
        Ok(())
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// One Bernoulli(p) coin per step; `true` means "set on fire if still
/// flammable". Coins of steps whose edge is already burnt go unused.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoinVector(Vec<bool>);

impl CoinVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, p: f64, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random_bool(p)).collect())
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Everything the dynamics produce on one tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsOutcome {
    /// Number of fireproof vertices.
    pub fireproof: usize,
    /// Number of burnt vertices.
    pub burnt: usize,
    /// Number of burnt components.
    pub kappa: usize,
    /// Burnt component sizes in order of ignition.
    pub burnt_by_appearance: Vec<usize>,
    /// Same sizes, non-increasing.
    pub burnt_ranked: Vec<usize>,
    /// 1-based steps of the ignitions, increasing.
    pub fire_steps: Vec<usize>,
    /// Fireproof component sizes, non-increasing.
    pub fireproof_components: Vec<usize>,
}

impl DynamicsOutcome {
    pub(crate) fn from_parts(
        fireproof: usize,
        burnt_by_appearance: Vec<usize>,
        fire_steps: Vec<usize>,
        mut fireproof_components: Vec<usize>,
    ) -> Self {
        let mut burnt_ranked = burnt_by_appearance.clone();
        burnt_ranked.sort_unstable_by(|a, b| b.cmp(a));
        fireproof_components.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            fireproof,
            burnt: burnt_by_appearance.iter().sum(),
            kappa: burnt_by_appearance.len(),
            burnt_by_appearance,
            burnt_ranked,
            fire_steps,
            fireproof_components,
        }
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.fireproof + self.burnt
    }

    pub fn largest_fireproof_component(&self) -> usize {
        self.fireproof_components.first().copied().unwrap_or(0)
    }

    /// Checks the bookkeeping identities between the fields.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: &str| invalid::<()>(format!("outcome invariant violated: {m}"));
        if self.burnt_by_appearance.iter().sum::<usize>() != self.burnt {
            return bad("burnt sizes do not sum to B");
        }
        if self.fireproof_components.iter().sum::<usize>() != self.fireproof {
            return bad("fireproof components do not sum to I");
        }
        if self.kappa != self.fire_steps.len() || self.kappa != self.burnt_by_appearance.len() {
            return bad("kappa mismatch");
        }
        if self.fire_steps.windows(2).any(|w| w[0] >= w[1]) {
            return bad("fire steps not strictly increasing");
        }
        let mut sorted = self.burnt_by_appearance.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted != self.burnt_ranked {
            return bad("ranked sizes are not the sorted appearance sizes");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EdgeState {
    Flammable,
    Fireproof,
    Burnt,
}

/// Literal replay of the dynamics. Each fire is propagated by a graph search
/// over the currently flammable edges, so the cost is O(n²) in the worst case.
pub fn run_forward(tree: &LabeledTree, order: &EdgeOrder, coins: &CoinVector) -> Result<DynamicsOutcome> {
    let n = tree.n();
    order.check_for(tree)?;
    if coins.len() != n - 1 {
        return invalid(format!("coin vector has length {}, expected {}", coins.len(), n - 1));
    }
    let adj = tree.adjacency();
    let edges = tree.edges();
    let mut state = vec![EdgeState::Flammable; n - 1];
    let mut burnt_sizes = Vec::new();
    let mut fire_steps = Vec::new();
    let mut visited = vec![false; n];
    let mut stack = Vec::new();
    for (pos, (&e, &fire)) in order.as_slice().iter().zip(coins.as_slice()).enumerate() {
        let e = e as usize;
        match state[e] {
            EdgeState::Burnt | EdgeState::Fireproof => continue,
            EdgeState::Flammable if !fire => state[e] = EdgeState::Fireproof,
            EdgeState::Flammable => {
                let (u, _) = edges[e];
                let mut reached = Vec::new();
                stack.push(u - 1);
                visited[u as usize - 1] = true;
                while let Some(x) = stack.pop() {
                    reached.push(x);
                    for &(y, ei) in &adj[x as usize] {
                        if state[ei as usize] == EdgeState::Flammable {
                            state[ei as usize] = EdgeState::Burnt;
                            if !visited[y as usize] {
                                visited[y as usize] = true;
                                stack.push(y);
                            }
                        }
                    }
                }
                burnt_sizes.push(reached.len());
                fire_steps.push(pos + 1);
            }
        }
    }
    let is_fireproof: Vec<bool> = adj
        .iter()
        .map(|a| a.iter().all(|&(_, ei)| state[ei as usize] == EdgeState::Fireproof))
        .collect();
    let mut sets = DisjointSets::new(n);
    for (i, &(u, v)) in edges.iter().enumerate() {
        if state[i] == EdgeState::Fireproof && is_fireproof[u as usize - 1] && is_fireproof[v as usize - 1] {
            sets.union(u - 1, v - 1);
        }
    }
    let mut components = Vec::new();
    for v in 0..n as u32 {
        if is_fireproof[v as usize] && sets.find(v) == v {
            components.push(sets.set_size(v) as usize);
        }
    }
    let fireproof = is_fireproof.iter().filter(|&&f| f).count();
    Ok(DynamicsOutcome::from_parts(fireproof, burnt_sizes, fire_steps, components))
}

/// Draws the edge order, then one coin per step, and runs the cut-tree
/// pipeline. Stream consumption is `n - 1` coins after the shuffle regardless
/// of what burns.
pub fn run_dynamics<R: Rng + ?Sized>(tree: &LabeledTree, p: f64, rng: &mut R) -> Result<DynamicsOutcome> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    let edges = tree.n() - 1;
    let order = EdgeOrder::random(edges, rng);
    let coins = CoinVector::random(edges, p, rng);
    cuttree::simulate(tree, &order, &coins)
}

/// Step of the first ignition, `None` when nothing ever burns.
pub fn first_fire_step(outcome: &DynamicsOutcome) -> Option<usize> {
    outcome.fire_steps.first().copied()
}

/// The marked-subtree process: after the `k`-th removal (`k = 1..=n-2`), a
/// remaining edge is chosen uniformly (so a component is chosen with
/// probability proportional to its edge count) and the vertex count of its
/// component is recorded. Nothing burns; removals continue to the end.
///
/// The forest after `k` removals consists of the edges at positions `k..`
/// of `order`, so the sizes are read off a disjoint-set forest filled in
/// reverse order, after all the uniform choices have been drawn in forward
/// order.
pub fn run_marked_process<R: Rng + ?Sized>(
    tree: &LabeledTree,
    order: &EdgeOrder,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = tree.n();
    if n < 3 {
        return invalid(format!("the marked process needs n >= 3, got {n}"));
    }
    if n > MARKED_PROCESS_MAX_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n.to_string(),
            range: format!("3..={MARKED_PROCESS_MAX_N}"),
        });
    }
    order.check_for(tree)?;
    let m = n - 1;
    // chosen[k-1] = position (in `order`) of the edge picked after k removals
    let chosen: Vec<usize> = (1..=n - 2).map(|k| rng.random_range(k..m)).collect();
    let edges = tree.edges();
    let order = order.as_slice();
    let mut sets = DisjointSets::new(n);
    let mut sizes = vec![0usize; n - 2];
    for k in (1..=n - 2).rev() {
        let (u, v) = edges[order[k] as usize];
        sets.union(u - 1, v - 1);
        let (cu, _) = edges[order[chosen[k - 1]] as usize];
        sizes[k - 1] = sets.set_size(cu - 1) as usize;
    }
    Ok(sizes)
}

/// Conditional mean of the marked size after each removal given the tree and
/// the order: `sum s(s-1) / (n-1-k)` over the components of the forest.
pub fn marked_process_conditional_means(tree: &LabeledTree, order: &EdgeOrder) -> Result<Vec<f64>> {
    let n = tree.n();
    if n < 3 {
        return invalid(format!("the marked process needs n >= 3, got {n}"));
    }
    order.check_for(tree)?;
    let edges = tree.edges();
    let order = order.as_slice();
    let mut sets = DisjointSets::new(n);
    // running sum of s(s-1) over components
    let mut weight: u128 = 0;
    let mut means = vec![0.0; n - 2];
    for k in (1..=n - 2).rev() {
        let (u, v) = edges[order[k] as usize];
        let (a, b) = (sets.set_size(u - 1) as u128, sets.set_size(v - 1) as u128);
        sets.union(u - 1, v - 1);
        let s = a + b;
        weight = weight + s * (s - 1) - a * (a - 1) - b * (b - 1);
        means[k - 1] = weight as f64 / (n - 1 - k) as f64;
    }
    Ok(means)
}

/// The forest present just before the first ignition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstFireForest {
    /// Step of the first ignition.
    pub zeta: usize,
    /// Sizes of the `zeta` components left by the first `zeta - 1` removals,
    /// ordered by the smallest vertex label they contain.
    pub sizes: Vec<usize>,
    /// Index into `sizes` of the component that burns at step `zeta`.
    pub burnt_index: usize,
}

pub fn subtree_forest_at_first_fire(
    tree: &LabeledTree,
    order: &EdgeOrder,
    coins: &CoinVector,
) -> Result<FirstFireForest> {
    let n = tree.n();
    order.check_for(tree)?;
    if coins.len() != n - 1 {
        return invalid(format!("coin vector has length {}, expected {}", coins.len(), n - 1));
    }
    let zeta = coins
        .as_slice()
        .iter()
        .position(|&b| b)
        .ok_or_else(|| Error::ConditioningFailed("no coin is set, so no fire ever starts".into()))?
        + 1;
    let edges = tree.edges();
    let mut sets = DisjointSets::new(n);
    for &e in &order.as_slice()[zeta - 1..] {
        let (u, v) = edges[e as usize];
        sets.union(u - 1, v - 1);
    }
    let (burning, _) = edges[order.as_slice()[zeta - 1] as usize];
    let burning_root = sets.find(burning - 1);
    let mut sizes = Vec::with_capacity(zeta);
    let mut burnt_index = 0;
    let mut seen_root = vec![false; n];
    for v in 0..n as u32 {
        let r = sets.find(v);
        if !seen_root[r as usize] {
            seen_root[r as usize] = true;
            if r == burning_root {
                burnt_index = sizes.len();
            }
            sizes.push(sets.set_size(r) as usize);
        }
    }
    Ok(FirstFireForest {
        zeta,
        sizes,
        burnt_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure::{figure_coins, figure_order, figure_tree};
    use crate::treegen::{enumerate_trees, sample_uniform_tree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn figure_forward() {
        let out = run_forward(&figure_tree(), &figure_order(), &figure_coins()).unwrap();
        assert_eq!(out.burnt_by_appearance, vec![4, 2]);
        assert_eq!(out.fireproof, 5);
        assert_eq!(out.fire_steps, vec![6, 9]);
        assert_eq!(out.fireproof_components, vec![2, 1, 1, 1]);
        out.check_invariants().unwrap();
    }

    #[test]
    fn no_fire_and_immediate_fire() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = sample_uniform_tree(30, &mut rng).unwrap();
        let order = EdgeOrder::random(29, &mut rng);
        let out = run_forward(&t, &order, &CoinVector::from_bits(vec![false; 29])).unwrap();
        assert_eq!((out.fireproof, out.burnt, out.kappa), (30, 0, 0));
        assert_eq!(first_fire_step(&out), None);
        let mut bits = vec![false; 29];
        bits[0] = true;
        let out = run_forward(&t, &order, &CoinVector::from_bits(bits)).unwrap();
        assert_eq!((out.fireproof, out.burnt), (0, 30));
        assert_eq!(out.burnt_by_appearance, vec![30]);
        assert_eq!(out.fire_steps, vec![1]);
        assert_eq!(first_fire_step(&out), Some(1));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let t = figure_tree();
        assert!(run_forward(&t, &EdgeOrder::identity(10), &CoinVector::from_bits(vec![false; 9])).is_err());
        assert!(run_forward(&t, &EdgeOrder::identity(8), &CoinVector::from_bits(vec![false; 8])).is_err());
        assert!(EdgeOrder::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn single_vertex_is_fireproof() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = run_dynamics(&LabeledTree::singleton(), 0.7, &mut rng).unwrap();
        assert_eq!((out.fireproof, out.burnt), (1, 0));
        assert_eq!(out.fireproof_components, vec![1]);
    }

    #[test]
    fn two_vertices_burn_at_step_one() {
        let t = LabeledTree::new(2, vec![(1, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut burnt = 0;
        for _ in 0..4000 {
            let out = run_dynamics(&t, 0.5, &mut rng).unwrap();
            if out.burnt == 2 {
                burnt += 1;
                assert_eq!(out.fire_steps, vec![1]);
            } else {
                assert_eq!(out.fireproof, 2);
            }
        }
        // 4000 fair coins: 6 standard deviations is about 190
        assert!((burnt as i64 - 2000).abs() < 190, "{burnt}");
    }

    #[test]
    fn coupling_exhaustive_small_trees() {
        // every tree and order with n <= 5, every coin vector
        for n in 2..=5 {
            for tree in enumerate_trees(n).unwrap() {
                for order in EdgeOrder::all(n - 1) {
                    for mask in 0u32..(1 << (n - 1)) {
                        let coins = CoinVector::from_bits((0..n - 1).map(|i| mask >> i & 1 == 1).collect());
                        let a = run_forward(&tree, &order, &coins).unwrap();
                        let b = cuttree::simulate(&tree, &order, &coins).unwrap();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn fire_steps_are_first_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let t = sample_uniform_tree(40, &mut rng).unwrap();
            let order = EdgeOrder::random(39, &mut rng);
            let coins = CoinVector::random(39, 0.1, &mut rng);
            let out = run_forward(&t, &order, &coins).unwrap();
            out.check_invariants().unwrap();
            assert_eq!(first_fire_step(&out), coins.as_slice().iter().position(|&b| b).map(|i| i + 1));
            for &k in &out.fire_steps {
                assert!(coins.as_slice()[k - 1]);
            }
        }
    }

    #[test]
    fn marked_process_path_and_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // path 1-2-3, edge {1,2} is index 0
        let path = LabeledTree::new(3, vec![(1, 2), (2, 3)]).unwrap();
        for _ in 0..20 {
            assert_eq!(run_marked_process(&path, &EdgeOrder::identity(2), &mut rng).unwrap(), vec![2]);
        }
        let star = LabeledTree::new(4, vec![(1, 2), (1, 3), (1, 4)]).unwrap();
        for _ in 0..20 {
            let sizes = run_marked_process(&star, &EdgeOrder::identity(3), &mut rng).unwrap();
            assert_eq!(sizes[0], 3);
            assert_eq!(sizes[1], 2);
        }
        assert!(run_marked_process(&LabeledTree::new(2, vec![(1, 2)]).unwrap(), &EdgeOrder::identity(1), &mut rng).is_err());
    }

    /// Oracle: explicit recomputation of component sizes after each removal.
    #[test]
    fn marked_process_matches_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = 25;
            let t = sample_uniform_tree(n, &mut rng).unwrap();
            let order = EdgeOrder::random(n - 1, &mut rng);
            let means = marked_process_conditional_means(&t, &order).unwrap();
            let mut fork = rng.clone();
            let sizes = run_marked_process(&t, &order, &mut fork).unwrap();
            let picks: Vec<usize> = (1..=n - 2).map(|k| rng.random_range(k..n - 1)).collect();
            for k in 1..=n - 2 {
                let mut sets = DisjointSets::new(n);
                for &e in &order.as_slice()[k..] {
                    let (u, v) = t.edges()[e as usize];
                    sets.union(u - 1, v - 1);
                }
                let (cu, _) = t.edges()[order.as_slice()[picks[k - 1]] as usize];
                assert_eq!(sizes[k - 1], sets.set_size(cu - 1) as usize);
                let mut expect = 0.0;
                for &e in &order.as_slice()[k..] {
                    let (u, _) = t.edges()[e as usize];
                    expect += sets.set_size(u - 1) as f64;
                }
                expect /= (n - 1 - k) as f64;
                assert!((means[k - 1] - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn first_fire_forest_small() {
        let t = LabeledTree::new(2, vec![(1, 2)]).unwrap();
        let f = subtree_forest_at_first_fire(&t, &EdgeOrder::identity(1), &CoinVector::from_bits(vec![true])).unwrap();
        assert_eq!((f.zeta, f.sizes.clone()), (1, vec![2]));
        assert!(matches!(
            subtree_forest_at_first_fire(&t, &EdgeOrder::identity(1), &CoinVector::from_bits(vec![false])),
            Err(Error::ConditioningFailed(_))
        ));
        let path = LabeledTree::new(3, vec![(1, 2), (2, 3)]).unwrap();
        let f = subtree_forest_at_first_fire(&path, &EdgeOrder::identity(2), &CoinVector::from_bits(vec![false, true])).unwrap();
        assert_eq!(f.zeta, 2);
        assert_eq!(f.sizes, vec![1, 2]);
        assert_eq!(f.burnt_index, 1);
    }

    #[test]
    fn permutations_enumerated() {
        assert_eq!(EdgeOrder::all(4).count(), 24);
        assert_eq!(EdgeOrder::all(0).count(), 1);
    }
}
