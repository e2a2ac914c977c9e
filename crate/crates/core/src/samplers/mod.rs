//! Spanning-tree samplers.

mod enumerate;
mod exact;
mod mst;
mod wilson;

pub use enumerate::{enumerate_spanning_trees, TreeDistribution, ENUMERATION_MAX_N};
pub use exact::{
    sequential_exact_sample, sequential_exact_sample_capped, sequential_tree_log_prob,
    DEFAULT_EXACT_CAP,
};
pub use mst::{max_weight_spanning_tree, mst_kruskal, mst_of_open_edges, mst_sparse};
pub use wilson::{
    default_step_budget, gumbel_argmax, loop_erase, wilson_run, wilson_sample, WilsonRun,
};
