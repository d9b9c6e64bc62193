//! Exact enumeration and verification tools for the branch statistic on
//! labeled trees that model regions of braid-arrangement deformations
//! `A_S(n)`: hyperplanes `x_i - x_j = s` for `s` in a finite integer set `S`.
//!
//! * [`tree`]: labeled `(m+1)`-ary plane trees and their primitive functions.
//! * [`setsys`]: offset sets, transitivity, and the named families.
//! * [`enumerate`]: the tree sets `T_S(n)`, branches, compartments, and the
//!   constructions relating them.
//! * [`charpoly`]: characteristic polynomials by finite-field point counts
//!   and by the exponential-sequence series identity.
//! * [`catalan`]: closed formulas for the extended Catalan family and the
//!   coefficient inequality suite.
//! * [`dyck`]: labeled m-Dyck paths and their statistics.

pub mod catalan;
pub mod charpoly;
pub mod dyck;
pub mod enumerate;
pub mod setsys;
pub mod tree;

pub use catalan::{
    catalan_coeff_by_inversion, catalan_coeff_by_trunks, forest_count, stirling_first,
    stirling_second, total_trees, trunk_shape_count, verify_inequalities, Triangle,
};
pub use charpoly::{abs_coeffs, chi_esa, chi_ff, IntPolynomial};
pub use dyck::{
    enumerate_paths, path_distribution, path_to_tree, tree_to_path, LabeledDyckPath, PathStatistic,
};
pub use enumerate::{
    branch_count, branch_distribution, branch_nodes, compartment_distribution, compartments,
    decompose_branches, enumerate_shapes, enumerate_trees, glue_branches, lift_disconnected,
    lower_connected, satisfies_condition_s, Shape, Statistic, StatisticDistribution,
};
pub use setsys::{family, parse_set_spec, Family, OffsetSet};
pub use tree::{LabeledTree, Subtree};
