//! Free and minimal Lie models of spaces given by cell attachments, and the
//! invariants `π_*` and `H_*` read off them.

mod cells;
mod invariants;
mod minimal;
mod sphere;


pub use cells::{
    attach_cells, describe_values, point_model, skeletal_models, CellComplexDescription, CellSpec, StageSpec,
};
pub use invariants::{
    ce_projection, h_star, lie_representative_linear_part, pi_star, suspended_linear_complex,
    suspended_linear_homology, PiStar,
};
pub use minimal::{minimalize, MinimalModel};
pub use sphere::{sphere_homology_closed_form, sphere_model, sphere_model_named};

use crate::freelie::FreeDgl;

/// A free dgl together with a note on what it models.
#[derive(Clone, Debug)]
pub struct LieModel {
    pub dgl: FreeDgl,
    pub provenance: String,
}
