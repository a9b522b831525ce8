//! Exact combinatorial calculus for mod-p theta operators on PEL-type
//! Shimura data.
//!
//! The crate works entirely at the level of the discrete invariants attached
//! to a unitary (case A) or symplectic (case C) datum at an unramified prime:
//!
//! - [`datum`]: sigma-orbits of embeddings, the star involution, CM type and
//!   signature, with validation and a canonical serialized form.
//! - [`polygon`]: mu-ordinary Newton polygons, ordinariness, slope counts and
//!   slope-filtration ranks.
//! - [`weights`]: dominant weights, the predicates (scalar, symmetric, good,
//!   simple, ...), Hasse-invariant weights, and the Upsilon twist.
//! - [`schur`]: exact Schur-functor combinatorics: Weyl dimensions,
//!   Littlewood-Richardson products, Cauchy and plethysm decompositions,
//!   Levi branching, and a Young-symmetrizer brute-force oracle.
//! - [`crystal`]: the standard mu-ordinary F-crystal per orbit and the exact
//!   p-adic valuations of Frobenius powers; ground truth for the Hasse
//!   exponents and the slope filtration.
//! - [`theta`]: applicability predicates and exact weight maps for every
//!   differential operator in the calculus, plus a theta-cycle explorer.
//! - [`galois`]: similitude-twist exponents and the cyclotomic-twist ledger
//!   for weights of modularity.
//!
//! All arithmetic is exact: integers, big integers, and rationals. No floats.

pub mod crystal;
pub mod datum;
pub mod galois;
pub mod polygon;
pub mod sample;
pub mod schur;
pub mod theta;
pub mod weights;

pub use datum::{validate_datum, Case, DatumDoc, DatumError, Embedding, Orbit, ShimuraDatum};
pub use polygon::NewtonPolygon;
pub use weights::Weight;
