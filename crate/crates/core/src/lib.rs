//! Explicit Riemannian metrics on free involution quotients of sphere
//! products and on twisted doubles of disk bundles over real projective
//! spaces, together with the tools to certify them.
//!
//! * [`geom`]: coordinate tensor calculus and sampled curvature scans.
//! * [`builders`]: warped disks, round and collapsed spheres, products,
//!   quotients, rotation loops and glued doubles.
//! * [`pin`]: mod-2 characteristic classes of projective spaces, pin
//!   obstructions, the Brown invariant and the bordism ledger.
//! * [`collapse`]: torus-action structures and collapsing metric families.
//! * [`catalog`]: the manifold catalog and the batch command surface.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builders;
pub mod catalog;
pub mod collapse;
pub mod geom;
pub mod pin;
