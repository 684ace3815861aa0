//! Tree and branch decompositions.

mod bicograph;
mod branch;
mod json;
mod simple_form;
mod tree;

pub use bicograph::{bicograph_recognize, BiCoNode, BiCotree, Recognition};
pub use branch::{validate_branch_decomposition, BdReport, BdViolation, BranchDecomposition};
pub use json::{
    branch_decomposition_from_json, branch_decomposition_to_json, tree_decomposition_from_json,
    tree_decomposition_to_json,
};
pub use simple_form::{normalize_simple_form, SimpleFormDecomposition};
pub use tree::{
    elimination_ordering, exact_treewidth, exact_treewidth_with_limit, heuristic_tree_decomposition,
    tree_decomposition_from_ordering, validate_tree_decomposition, Heuristic, TdViolation, TreeDecomposition,
    DEFAULT_EXACT_LIMIT,
};
