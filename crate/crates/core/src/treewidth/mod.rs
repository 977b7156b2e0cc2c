//! Exact MAD trees by dynamic programming over a nice tree decomposition.
//!
//! Each table entry is indexed by the tree edges inside the bag (`F`), the
//! below connections (bag vertices joined through forgotten vertices), and
//! per bag vertex the number of tree vertices hanging off it through
//! undecided edges (`abov`) and through forgotten edges (`below`). The stored
//! value is the least total contribution of the forgotten edges.

mod decomposition;
mod dp;

pub use decomposition::{
    heuristic_tree_decomposition, min_degree_tree_decomposition, to_nice,
    tree_decomposition_from_order, NiceNode, NiceTreeDecomposition, NodeKind, TreeDecomposition,
};
pub use dp::{
    process_forget, process_introduce, process_join, process_leaf, solve_treewidth,
    treewidth_optimum, DpIndex, DpTable, TreewidthSolution, MAX_BAG,
};
