//! Persistence minimal Quillen models for filtered simply connected rational
//! spaces, computed in exact rational arithmetic.
//!
//! Spaces enter as cell-attachment data. From them the crate builds free
//! differential graded Lie models stage by stage, minimalizes them, and reads
//! off rational homotopy (`π_*`) and homology (`H_*`) barcodes together with
//! interleaving-distance bounds between pairs of filtrations.
//!
//! Module map:
//!
//! * [`qlinalg`]: exact matrices, graded spaces, chain complexes, homology.
//! * [`freelie`]: free graded Lie algebras in a Lyndon–Hall basis, derivations
//!   and free dgl's.
//! * [`cecobar`]: Chevalley–Eilenberg chains, the Quillen (cobar) functor,
//!   duals and the adjunction homology check.
//! * [`models`]: sphere models, cell attachment, minimalization, `π_*`, `H_*`.
//! * [`persist`]: persistence modules on finite grids, shifts, barcodes,
//!   interleaving certificates and distances.
//! * [`pipeline`]: end-to-end persistence models and stability reports.
//! * [`cli`]: the `quillen` command line front end.

pub mod cecobar;
pub mod cli;
pub mod error;
pub mod freelie;
pub mod io;
pub mod models;
pub mod par;
pub mod persist;
pub mod pipeline;
pub mod qlinalg;

pub use error::{Error, Result};
