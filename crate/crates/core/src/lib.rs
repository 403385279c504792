//! Exact certification of polarized cone-preserving linear maps.
//!
//! The crate decides whether an invertible rational linear map preserving a
//! closed convex cone has an interior eigenvector whose eigenvalue `q`
//! controls every power of the map, and produces a certificate when it does.
//! Around that decision sit the supporting calculators: polyhedral cone
//! faces, Néron–Severi arithmetic on a product of elliptic curves, and
//! Reid–Tai ages of cyclic quotient singularities.
//!
//! All verdicts are computed in exact rational arithmetic. The only
//! floating-point routine, [`cones::distance_point_to_cone`], is diagnostic.

pub mod cones;
pub mod dynamics;
pub mod exactalg;
pub mod nslattice;
pub mod singularities;

pub use cones::{build_cone, psd_cone_oracle, ConeError, ConeOracle, Face, Membership, PolyhedralCone, PsdCone};
pub use dynamics::{decide_polarization, ConeMap, Decision, DynamicsError, PolarizationCertificate};
pub use exactalg::{AlgebraicNumber, ExactError, QMatrix, QPoly, Rat};
pub use nslattice::{NsError, SymClass};
pub use singularities::{CyclicActionElement, SingError};
