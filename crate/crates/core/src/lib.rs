//! Classical q-ary codes mapped onto face operators built from complete sets
//! of mutually unbiased bases, and the discrete Wigner functions they define.
//!
//! Field elements are addressed everywhere by their canonical index
//! `sum c_i p^i`. Facet labels list the value for the computational
//! (`∞`) basis first, then the bases `0, α, α², …, α^(q-1) = 1`.

pub mod codes;
pub mod error;
pub mod faceops;
pub mod gfield;
pub mod mub;
pub mod qlinalg;
pub mod wigner;

pub use error::{Error, Result};
pub use gfield::{FieldElement, FieldSpec, GaloisField, GaloisRing, RingElement};
pub use qlinalg::{ComplexMatrix, ComplexVector};

/// Default comparison tolerance for numerical identities.
pub const TOLERANCE: f64 = 1e-9;
