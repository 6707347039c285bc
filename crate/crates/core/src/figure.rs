//! The eleven-vertex worked example used throughout the documentation and the
//! `cuttree-demo` suite. Vertices `a..k` are labels `1..11`.

use crate::dynamics::{CoinVector, EdgeOrder};
use crate::treegen::LabeledTree;

/// Edges listed in their removal order (so the identity order applies).
const EDGES: [(u8, u8); 10] = [
    (b'j', b'a'),
    (b'f', b'i'),
    (b'e', b'h'),
    (b'i', b'b'),
    (b'j', b'c'),
    (b'k', b'e'),
    (b'g', b'f'),
    (b'a', b'd'),
    (b'i', b'j'),
    (b'e', b'a'),
];

fn label_of(c: u8) -> u32 {
    (c - b'a' + 1) as u32
}

pub fn figure_tree() -> LabeledTree {
    let edges = EDGES.iter().map(|&(u, v)| (label_of(u), label_of(v))).collect();
    LabeledTree::new(11, edges).expect("worked example is a tree")
}

pub fn figure_order() -> EdgeOrder {
    EdgeOrder::identity(10)
}

/// Fire at steps 6 and 9, fireproof everywhere else.
pub fn figure_coins() -> CoinVector {
    CoinVector::from_bits((1..=10).map(|k| k == 6 || k == 9).collect())
}

/// Letter name of a label of the worked example.
pub fn figure_label(label: u32) -> String {
    char::from(b'a' + (label - 1) as u8).to_string()
}
