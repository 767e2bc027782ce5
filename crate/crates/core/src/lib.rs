//! Exact-arithmetic toolkit for root systems, weight-polytope geometry,
//! partition combinatorics, nilpotent orbits, and the extended affine Hecke
//! algebra — everything needed to decide whether an infinitesimal-character
//! parameter is *very weakly unipotent*.
//!
//! The decision procedure lives in [`unipcheck`]: given a Cartan type and a
//! rational weight `λ`, it enumerates the lattice points strictly inside the
//! convex hull of the Weyl orbit of `λ` (off the orbit itself), groups them
//! into Weyl classes by dominant representative, attaches to each class a
//! nilpotent orbit induced from the Levi where the coroots integral on `λ`
//! vanish on the class's members, and tests the closure comparisons that
//! define very weak unipotence. A fast sufficient test based on "triangular"
//! coordinate sequences is provided alongside the direct check, and the two
//! can be run together and cross-asserted.
//!
//! All arithmetic is exact: weights are vectors of `i64`-backed rationals,
//! Laurent polynomials have integer coefficients, and the only sampling
//! (the matrix oracle for Richardson orbits in [`orbits`]) is deterministic
//! under a caller-supplied seed.

pub mod hecke;
pub mod orbits;
pub mod partitions;
pub mod rat;
pub mod rootsys;
pub mod triangular;
pub mod unipcheck;
pub mod weightgeom;

pub use rat::Rat;
