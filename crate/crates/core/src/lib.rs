//! Finite tree-coloring properties behind reaping invariants of Boolean
//! algebras: deciding and certifying `P(i, j, k, m)`, checking polarized
//! partition witnesses, and deriving the order on reaping pairs.

pub mod coloring;
pub mod combinatorics;
pub mod engine;
pub mod error;
pub mod family;
pub mod general;
pub mod kb;
pub mod polarized;
pub mod search;
pub mod tree;

pub use coloring::{digit_sum_coloring, Coloring, ColoringRecord};
pub use engine::{
    decide, decide_general, decide_with, find_monochromatic_subtree, lift, DecideOptions, Decision,
    FailureBasis, HoldsReason, PropertyQuery, SearchRecord, SearchStatus, Verdict,
};
pub use error::EngineError;
pub use family::{defeats, min_colors, min_colors_witness, ColorSetFamily, MinColors};
pub use general::{enumerate_general_trees, GeneralTree};
pub use kb::{Fact, KnowledgeBase, Pair, Relation};
pub use polarized::{
    check_witness, modular_witness, search_witness, PolMatrix, PolQuery, PolSearchOutcome,
};
pub use search::{search_counterexample, search_counterexample_with, SearchOptions, SearchOutcome};
pub use tree::{
    enumerate_subtrees, leaf_index, leaf_path, subtree_leaves, LeafPath, SubtreeCert, TreeShape,
};
