//! Permutation representations of triangle groups Δ(p,q,r): handle-based
//! composition of coset diagrams, block structure of the composed actions,
//! and exact verification of the resulting group orders.
//!
//! The crate is organized bottom-up:
//!
//! - [`perm`]: exact permutation arithmetic (right action, 1-based points);
//! - [`group`]: orbits, Schreier–Sims stabilizer chains, block systems,
//!   block actions and kernels, recognition predicates;
//! - [`triangle`]: representations of Δ(p,q,r), handles, equivalence,
//!   centralizers, and search;
//! - [`compose`]: the handle-splicing compositions and their block systems;
//! - [`analyze`]: imprimitivity reports, F_p-module dimensions, and the
//!   structure verdicts for composed alternating representations;
//! - [`repfile`]: the JSON file format and run manifests used by the CLI;
//! - [`dot`]: DOT export of coset diagrams;
//! - [`sweep`]: the per-degree conjecture sweep harness.

pub mod analyze;
pub mod compose;
pub mod dot;
pub mod group;
pub mod perm;
pub mod repfile;
pub mod sweep;
pub mod triangle;

pub use group::{BlockSystem, Bsgs, GeneratedGroup};
pub use perm::{Parity, PermError, Permutation, Point};
pub use triangle::{Handle, Representation, TrianglePresentation};
