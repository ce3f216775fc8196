//! Exact computations around the stratification of line bundles on a
//! k-gonal curve by the splitting type of their pushforward to the
//! projective line.
//!
//! The crate has three layers:
//!
//! * [`splitting`] and [`poset`] — pure combinatorics of splitting types:
//!   twist cohomology profiles, the dominance order and its Hasse diagrams,
//!   the u-invariant, balanced-plus-balanced pattern recognition.
//! * [`classify`] — enumeration of the predicted irreducible components of
//!   the Brill-Noether loci of a general k-gonal curve, with dimensions,
//!   irreducibility flags and the distinguished twist sets.
//! * [`field`], [`laurent`], [`matrix`], [`birkhoff`], [`cohomology`],
//!   [`ext`], [`experiments`] — exact linear algebra over F_p[t, t^-1]:
//!   constructive splitting of transition matrices, section counts by two
//!   independent routes, extension classes, and randomized verification
//!   harnesses for the bundle-level statements.
//!
//! Every operation is deterministic; randomized experiments take an explicit
//! seed and derive one independent stream per trial, so reports are
//! byte-identical across worker counts.
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `hbn` binary exposes the same operations as subcommands.

pub mod birkhoff;
pub mod classify;
pub mod cli;
pub mod cohomology;
pub mod experiments;
pub mod ext;
pub mod field;
pub mod laurent;
pub mod matrix;
pub mod poset;
pub mod splitting;

pub use birkhoff::{birkhoff_factorize, Factorization};
pub use classify::{
    classify_components, rho, ComponentKind, ComponentRecord, GonalContext, Query,
};
pub use cohomology::h0_twist;
pub use ext::{extension_transition, is_split_extension, random_ext_class, surjective_at, ExtClass};
pub use field::{FieldElem, Prime};
pub use laurent::LaurentPoly;
pub use matrix::LaurentMatrix;
pub use splitting::{BBType, SplittingType};
