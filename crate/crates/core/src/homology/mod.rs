//! Exact integer homology.
//!
//! Smith normal forms are computed by [`smith_normal_form`]. The chain complex
//! of a family of commuting incidence matrices has in degree p one copy of
//! Z^N for each increasing p-tuple of colors, and its boundary blocks are
//! ±(I − M_i^T).

mod complex;
mod group;
mod matrix;
mod ring;
mod snf;

pub use complex::{
    boundary_from_blocks, build_chain_complex, element_order_in_cokernel, homology_from_boundaries,
    boundary_snfs, homology_groups, index_sets, order_from_snf, BlockEntry, ChainComplex, Order,
};
pub use group::AbelianGroup;
pub use matrix::IntMatrix;
pub use snf::{
    determinant, set_snf_audit, smith_normal_form, snf_audit_count, smith_normal_form_with_transforms, verify_snf, SnfResult, SnfTransforms,
    DETERMINANT_CHECK_LIMIT,
};
