//! Marks on a uniform rooted Cayley tree, erased below the topmost ones, and
//! the closed-form law of the root component size and mark count.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::special::ln_gamma;
use crate::error::{invalid, Result};
use crate::treegen::sample_uniform_tree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedMarkOutcome {
    /// size of the component containing the root
    pub c0: usize,
    /// number of kept marks
    pub m: usize,
    pub others_ranked: Vec<usize>,
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        invalid(format!("p must lie in [0, 1], got {p}"))
    }
}

/// Uniform rooted tree on `n` vertices; each non-root vertex is marked with
/// probability `p`, marks with a marked strict ancestor are erased, and the
/// edge above each kept mark is cut.
pub fn rooted_mark_outcome<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<RootedMarkOutcome> {
    if n < 2 {
        return invalid(format!("rooted marks need n >= 2, got {n}"));
    }
    check_p(p)?;
    let tree = sample_uniform_tree(n, rng)?;
    let root = rng.random_range(0..n as u32);
    let adjacency = tree.adjacency();

    let mut parent = vec![u32::MAX; n];
    let mut bfs = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    parent[root as usize] = root;
    while let Some(v) = queue.pop_front() {
        bfs.push(v);
        for &(w, _) in &adjacency[v as usize] {
            if parent[w as usize] == u32::MAX {
                parent[w as usize] = v;
                queue.push_back(w);
            }
        }
    }

    let marked: Vec<bool> = (0..n as u32).map(|v| v != root && rng.random_bool(p)).collect();
    // covered[v]: v or one of its ancestors carries a mark
    let mut covered = vec![false; n];
    let mut kept = Vec::new();
    for &v in &bfs {
        let v = v as usize;
        let above = v != root as usize && covered[parent[v] as usize];
        covered[v] = above || marked[v];
        if marked[v] && !above {
            kept.push(v);
        }
    }
    let mut subtree = vec![1usize; n];
    for &v in bfs.iter().rev() {
        if v != root {
            subtree[parent[v as usize] as usize] += subtree[v as usize];
        }
    }
    let mut others: Vec<usize> = kept.iter().map(|&v| subtree[v]).collect();
    others.sort_unstable_by(|a, b| b.cmp(a));
    Ok(RootedMarkOutcome { c0: n - others.iter().sum::<usize>(), m: others.len(), others_ranked: others })
}

/// `P(C0 = x, M = y)` for `y >= 1`:
/// `n! (x(1-p))^{x-1} (xp)^y (n-x)^{n-x-y-1} / (n^{n-1} x! (y-1)! (n-x-y)!)`,
/// and `P(C0 = n, M = 0) = (1-p)^{n-1}`.
pub fn rooted_joint_pmf(n: usize, p: f64, x: usize, y: usize) -> Result<f64> {
    if n < 2 {
        return invalid(format!("rooted marks need n >= 2, got {n}"));
    }
    check_p(p)?;
    if y == 0 {
        return Ok(if x == n { (1.0 - p).powi(n as i32 - 1) } else { 0.0 });
    }
    if x == 0 || x + y > n {
        return Ok(0.0);
    }
    if p == 0.0 || (p == 1.0 && x > 1) {
        return Ok(0.0);
    }
    let (nf, xf, yf) = (n as f64, x as f64, y as f64);
    let mut ln = ln_gamma(nf + 1.0) + yf * (xf * p).ln() - (nf - 1.0) * nf.ln()
        - ln_gamma(xf + 1.0)
        - ln_gamma(yf)
        - ln_gamma(nf - xf - yf + 1.0)
        + (nf - xf - yf - 1.0) * (nf - xf).ln();
    if x > 1 {
        ln += (xf - 1.0) * (xf * (1.0 - p)).ln();
    }
    Ok(ln.exp())
}

/// `P(M = y | C0 = x)` for `x < n`: `M - 1 ~ Binomial(n-x-1, xp/(n-x+xp))`.
pub fn rooted_conditional_mark_pmf(n: usize, p: f64, x: usize, y: usize) -> Result<f64> {
    if n < 2 || x == 0 || x >= n {
        return invalid(format!("conditioning on C0={x} needs 1 <= x < n={n}"));
    }
    check_p(p)?;
    if y == 0 || y > n - x {
        return Ok(0.0);
    }
    let trials = (n - x - 1) as f64;
    let k = (y - 1) as f64;
    let q = x as f64 * p / ((n - x) as f64 + x as f64 * p);
    if q == 0.0 {
        return Ok(if y == 1 { 1.0 } else { 0.0 });
    }
    if q == 1.0 {
        return Ok(if y == n - x { 1.0 } else { 0.0 });
    }
    let ln = ln_gamma(trials + 1.0) - ln_gamma(k + 1.0) - ln_gamma(trials - k + 1.0)
        + k * q.ln()
        + (trials - k) * (1.0 - q).ln();
    Ok(ln.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn joint_pmf_normalises_with_the_unmarked_mass() {
        for n in [2usize, 3, 5, 8, 12, 30] {
            for p in [0.1, 0.5] {
                let mut total = 0.0;
                for x in 1..=n {
                    for y in 0..=n - x {
                        total += rooted_joint_pmf(n, p, x, y).unwrap();
                    }
                }
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn two_vertices() {
        let p = 0.37;
        assert_abs_diff_eq!(rooted_joint_pmf(2, p, 1, 1).unwrap(), p, epsilon = 1e-13);
        assert_abs_diff_eq!(rooted_joint_pmf(2, p, 2, 0).unwrap(), 1.0 - p, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hits = (0..40_000)
            .filter(|_| {
                let o = rooted_mark_outcome(2, p, &mut rng).unwrap();
                o.c0 == 1 && o.m == 1 && o.others_ranked == vec![1]
            })
            .count();
        let sd = (p * (1.0 - p) / 40_000.0).sqrt();
        assert!((hits as f64 / 40_000.0 - p).abs() < 4.0 * sd);
    }

    #[test]
    fn conditional_is_the_joint_ratio() {
        let (n, p, x) = (30usize, 0.2, 5usize);
        let marginal: f64 = (1..=n - x).map(|y| rooted_joint_pmf(n, p, x, y).unwrap()).sum();
        for y in 1..=n - x {
            let ratio = rooted_joint_pmf(n, p, x, y).unwrap() / marginal;
            assert_abs_diff_eq!(ratio, rooted_conditional_mark_pmf(n, p, x, y).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn outcome_invariants_and_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let o = rooted_mark_outcome(25, 0.3, &mut rng).unwrap();
            assert_eq!(o.c0 + o.others_ranked.iter().sum::<usize>(), 25);
            assert_eq!(o.m, o.others_ranked.len());
            assert!(o.others_ranked.windows(2).all(|w| w[0] >= w[1]));
        }
        let none = rooted_mark_outcome(10, 0.0, &mut rng).unwrap();
        assert_eq!((none.c0, none.m), (10, 0));
        // every non-root vertex marked: only children of the root keep marks
        let all = rooted_mark_outcome(10, 1.0, &mut rng).unwrap();
        assert_eq!(all.c0, 1);
        assert!(rooted_mark_outcome(1, 0.5, &mut rng).is_err());
        assert!(rooted_mark_outcome(5, 1.5, &mut rng).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn small_tree_matches_joint_pmf() {
        let (n, p) = (6usize, 0.3);
        let reps = 200_000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut counts = vec![vec![0u64; n + 1]; n + 1];
        for _ in 0..reps {
            let o = rooted_mark_outcome(n, p, &mut rng).unwrap();
            counts[o.c0][o.m] += 1;
        }
        for x in 1..=n {
            for y in 0..=n - x {
                let e = rooted_joint_pmf(n, p, x, y).unwrap();
                let f = counts[x][y] as f64 / reps as f64;
                assert!((f - e).abs() < 5.0 * (e * (1.0 - e) / reps as f64).sqrt() + 1e-9, "({x},{y}): {f} vs {e}");
            }
        }
    }
}
