//! delzant-kit: exact calculus of Delzant polygons in the plane.
//!
//! The crate provides, over an exact scalar ring Q[symbols] with a certified
//! order:
//!
//! - validation and edge data of Delzant polygons (rational lengths,
//!   combinatorial self-intersections, perimeter, area);
//! - the AGL(2,Z) action, canonical forms, and congruence testing;
//! - corner chopping and blow-down, with the induced maps on the free
//!   abelian group of edges, its intersection pairing, and the reduced
//!   intersection form of the ambient manifold;
//! - recursive decomposition of any Delzant polygon into a standard triangle
//!   or Hirzebruch trapezoid plus a chopping sequence;
//! - complete enumeration of lattice classes of prescribed self-intersection
//!   in a period window over Z^{1,k} with the Minkowski form;
//! - classification of toric actions from manifold invariants, and a grid
//!   census generator for regression testing.

pub mod census;
pub mod classify;
pub mod decomposition;
pub mod error;
pub mod homology;
pub mod json;
pub mod minkowski;
pub mod polygon;
pub mod scalar;

pub use error::{Error, NotDelzantReason, Result};
pub use polygon::{ChopStep, DelzantPolygon, EdgeData, LatticeVec, Point, UnimodularAffineMap};
pub use scalar::{Monomial, RatInterval, Rational, Refiner, Scalar, SymbolTable};
