//! Exact-arithmetic toolkit for lattice heights, lattice-point counts and
//! small integral points avoiding hypersurfaces and sublattice unions.
//!
//! All arithmetic is arbitrary precision: integers are `BigInt`, scalar
//! quantities that can be fractional are `BigRational`, and every bound is
//! evaluated as an exact rational (irrational terms such as `sqrt(M)` enter
//! through outward-rounded rational enclosures), so certificate checks are
//! never subject to rounding.
//!
//! ```
//! use heightscout::avoidance::{find_point_outside, AvoidanceInstance};
//! use heightscout::counting::DEFAULT_ENUM_BUDGET;
//! use heightscout::lattice::Lattice;
//!
//! let omega = Lattice::standard(2);
//! let x_axis = Lattice::from_columns(2, &[vec![1, 0]])?;
//! let inst = AvoidanceInstance::new(omega, vec![x_axis])?;
//! let cert = find_point_outside(&inst, DEFAULT_ENUM_BUDGET)?;
//! assert_eq!(cert.found, 1.into()); // the point (0, 1)
//! assert!(cert.bound_satisfied());
//! # Ok::<(), heightscout::Error>(())
//! ```

pub mod avoidance;
pub mod certificate;
pub mod cli;
pub mod counting;
pub mod error;
pub mod interchange;
pub mod lattice;
pub mod linalg;
pub mod numeric;
pub mod plank;
pub mod polysearch;

pub use error::{Error, Result};
