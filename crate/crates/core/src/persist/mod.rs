//! Persistence modules on finite grids of critical values: shifts,
//! interleaving certificates, barcodes, and interleaving distances.

mod barcode;
mod category;
mod certificate;
mod distance;
mod functor;
mod grid;
mod module;

#[cfg(test)]
mod tests;

pub use barcode::{barcode, dims_from_bars, interval_module, Bar, Barcode, BarcodeFile};
pub use category::{Category, Dgl, GrVec};
pub use certificate::{sample_points, verify_interleaving, InterleavingCertificate, Verification};
pub use distance::{
    bottleneck, bottleneck_exhaustive, deletion_cost, interleaving_distance, interleaving_distance_with,
    match_cost, Distance, Solver, EXHAUSTIVE_LIMIT,
};
pub use functor::{pushforward, pushforward_certificate, Functor, Identity};
pub use grid::Grid;
pub use module::PersistenceModule;
