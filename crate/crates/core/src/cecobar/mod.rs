//! The Cartan–Eilenberg–Chevalley construction `C⁎`, the Quillen
//! construction `𝓛`, degreewise duals, and the homology-level adjunction check.
//!
//! Suspension conventions: `(sL)_i = L_{i−1}` and `(s⁻¹C)_i = C_{i+1}`. Words
//! in `ΛsL` are kept sorted by basis index (which sorts by degree) with
//! Koszul signs from transpositions of `sx`'s.

mod adjunction;
mod ce;
mod coalgebra;
mod cobar;
mod dual;
mod finite;


pub use adjunction::{adjunction_homology_check, AdjunctionReport};
#[doc(hidden)]
pub use ce::{ce_construction_with, CeOptions};
pub use ce::ce_construction;
pub use coalgebra::{CDGCoalgebra, CoTerm, UNIT};
pub use cobar::quillen_construction;
pub use dual::{dualize, CdgAlgebra};
pub use finite::{FiniteDgl, Sparse};
