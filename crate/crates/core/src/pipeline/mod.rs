//! End-to-end orchestration: persistence models of filtered cell complexes,
//! their `π_*`, `H_*` and generator barcodes, and stability reports for
//! pairs of filtrations.

mod file;
mod functors;
mod model;
mod pairs;
mod report;


pub use file::{GeneratorEntry, MinimalEntry, ModelFile, StageEntry, MODEL_KIND};
pub use functors::{GeneratorFunctor, HomologyFunctor, LinearHomologyFunctor, SuspendedGeneratorFunctor};
pub use model::{
    build_persistence_model, generator_barcode, h_barcode, linear_homology_barcode, pi_barcode,
    PersistenceQuillenModel,
};
pub use pairs::{delay_pair, plain_pair, shift_pair, FiltrationPair};
pub use report::{certificate_bound, stability_report, Check, ModelBarcodes, StabilityReport, NOT_AVAILABLE, NOT_COMPUTED};
