//! Closed-form contraction criteria for 3×3 and 4×4 upper-triangular complex
//! matrices, checked against an eigenvalue oracle.
//!
//! The criteria decide `||T|| <= 1` from explicit polynomial inequalities in
//! the entries of `T`. Everything is cross-checked by [`oracle`], which
//! computes the spectrum of `I - T* T` with Jacobi rotations and never looks at
//! the criteria.
//!
//! [`parrott`] recovers the corner disks a second way, by completing the
//! corner of a block matrix, and [`mobius`] supplies the disk automorphisms
//! used to move a diagonal entry to zero first. [`fuzz`] drives seeded
//! comparisons against the oracle.

pub mod criteria;
pub mod dense;
pub mod error;
pub mod fuzz;
pub mod json;
pub mod mobius;
pub mod oracle;
pub mod parrott;
pub mod scalar;
pub mod tolerance;
pub mod tri;
pub mod verdict;

pub use criteria::{
    beta_disk_3x3, check_4x4_omega3_zero, check_contraction_2x2, check_contraction_3x3,
    check_contraction_4x4, gamma_disk, Disk,
};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use json::{parse_matrix, Record};
pub use mobius::{mobius_scalar, mobius_transform_dense, mobius_transform_triangular};
pub use oracle::{hermitian_eigen, is_contraction_oracle, operator_norm, EigenDecomposition};
pub use parrott::{matrix_power_2x2, parrott_check, parrott_corner_disk, ParrottBlocks};
pub use scalar::{defect_product, ComplexScalar};
pub use tolerance::Tolerances;
pub use tri::{TriMatrix3, TriMatrix4};
pub use verdict::{Branch, Verdict};
