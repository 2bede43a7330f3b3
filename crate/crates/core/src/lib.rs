//! Defect Dijkgraaf–Witten state sums for knots with Seifert surfaces.
//!
//! The pipeline is: a flag-like [`StratifiedTriangulation`] of `K ⊂ Σ ⊂ M`,
//! a finite 3-parcel [`Parcel`] (a category over the chain `1 < 2 < 3`), and
//! optionally a [`PartialCocycle`]. [`untwisted_invariant`] counts colorings,
//! [`twisted_invariant`] weights them by the cocycle. Both are exact.

#![allow(clippy::needless_range_loop)]

pub mod cocycle;
pub mod complex;
pub mod cyclotomic;
pub mod fixtures;
pub mod group;
pub mod io;
pub mod moves;
pub mod parcel;
pub mod report;
pub mod statesum;
pub mod stratum;
pub mod subdivision;
pub mod walk;

mod search;

pub use cocycle::{FullCocycle, PartialCocycle};
pub use complex::{DirectedEdge, StratifiedTriangulation, VertexId, VertexTable};
pub use cyclotomic::{CycValue, CyclotomicSum};
pub use fixtures::s3_join_fixture;
pub use moves::{MoveDescriptor, MoveKind};
pub use parcel::{Arrow, Parcel};
pub use report::Report;
pub use statesum::{twisted_invariant, untwisted_invariant, Coloring};
pub use stratum::Stratum;
pub use subdivision::{barycentric_subdivision, stellar_subdivide};
pub use walk::{random_walk, WalkConfig};
