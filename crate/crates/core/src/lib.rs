//! Finite-dimensional operator algebras.
//!
//! Builds subalgebras of M_n from generators and analyses them: antisymmetry
//! (A ∩ A* ⊆ C·I) and its hereditary form, invariant and semi-invariant
//! subspaces with their compressions, simultaneous triangularization,
//! Jordanesque block bases, the structured families T_n, D_v, J_v and A_⪯,
//! quantum chain and antichain combinatorics for nilpotent algebras, and
//! reachability for Kraus channels.
//!
//! Everything is generic over [`Scalar`]: [`GaussRat`] gives exact answers on
//! rational inputs, [`Cplx`] handles irrational data under a
//! [`ToleranceConfig`].

pub mod antisymmetry;
pub mod channels;
pub mod error;
pub mod families;
pub mod invariant;
pub mod io;
pub mod linalg;
pub mod matspan;
pub mod qposet;
pub mod random;
pub mod scalar;
pub mod triangular;

pub use error::{Error, Result};
pub use linalg::{Mat, Subspace, Vector};
pub use matspan::{MatSpan, OperatorAlgebra, Provenance};
pub use scalar::{with_tolerance, Cplx, GaussRat, Scalar, ToleranceConfig};
