//! Lie-algebraic substrate: algebras, representations, group elements and
//! Haar quadrature for the catalog groups.

pub mod algebra;
pub mod group;
pub mod haar;
pub mod rep;

pub use algebra::{CMat, DualBasisPair, LieAlgebraSpec, StructureConstants};
pub use group::{exp_map, exp_matrix, unitarity_residual, GroupElement, GroupId};
pub use haar::{haar_quadrature, haar_quadrature_for, HaarQuadrature};
pub use rep::{casimir, Casimir, RepKind, Representation};
