use crate::error::{Error, Result};
use crate::freelie::{DglMorphism, FreeDgl};
use crate::models::{minimalize, skeletal_models, CellComplexDescription, MinimalModel};
use crate::persist::{barcode, pushforward, Barcode, Dgl, Grid, PersistenceModule};

use super::functors::{GeneratorFunctor, HomologyFunctor, LinearHomologyFunctor, SuspendedGeneratorFunctor};

/// Free persistence model with inclusion structure maps and, optionally,
/// its stagewise minimalization.
#[derive(Clone, Debug)]
pub struct PersistenceQuillenModel {
    pub name: String,
    pub truncation: i32,
    pub free: PersistenceModule<Dgl>,
    /// Minimal stages `M_t` with maps `ψ_t ∘ ι ∘ σ_s`; every stage minimal.
    pub minimal: Option<PersistenceModule<Dgl>>,
    /// Per-stage `ψ`, `σ`; empty for models loaded from a file.
    pub minimal_data: Vec<MinimalModel>,
}

impl PersistenceQuillenModel {
    /// Degree cutoff for barcodes: homology of the Lie models is compared
    /// in degrees `<= N − 2`.
    pub fn cutoff(&self) -> i32 {
        self.truncation - 2
    }

    pub fn grid(&self) -> &Grid {
        self.free.grid()
    }

    pub fn stages_minimal(&self) -> Vec<bool> {
        self.free.objects().iter().map(FreeDgl::is_minimal).collect()
    }

    pub fn minimal_module(&self) -> Result<&PersistenceModule<Dgl>> {
        self.minimal.as_ref().ok_or_else(|| Error::validation("model was built without minimalization"))
    }
}

/// Stage models from cell attachments; with `minimal` also the persistence
/// minimal model.
pub fn build_persistence_model(
    desc: &CellComplexDescription,
    truncation: i32,
    minimal: bool,
) -> Result<PersistenceQuillenModel> {
    if truncation < 3 {
        return Err(Error::truncation(format!("truncation must be >= 3, got {truncation}")));
    }
    let stages = skeletal_models(desc, truncation)?;
    let grid = Grid::new(desc.values())?;
    let objects: Vec<FreeDgl> = stages.into_iter().map(|m| m.dgl).collect();
    let maps = objects
        .windows(2)
        .enumerate()
        .map(|(i, w)| DglMorphism::inclusion(&w[0], &w[1]).map_err(|e| e.context(format!("stage {}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let cat = Dgl { truncation };
    let free = PersistenceModule::new(cat, grid.clone(), objects, maps)?;
    let (minimal_module, minimal_data) = if minimal {
        let data = crate::par::map(free.objects(), minimalize)
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| e.context(format!("stage {i}"))))
            .collect::<Result<Vec<_>>>()?;
        let objects: Vec<FreeDgl> = data.iter().map(|m| m.minimal.clone()).collect();
        let mut maps = Vec::new();
        for (i, inc) in free.maps().iter().enumerate() {
            let m = data[i].section.then(inc)?.then(&data[i + 1].projection)?;
            maps.push(m);
        }
        (Some(PersistenceModule::new(cat, grid, objects, maps)?), data)
    } else {
        (None, Vec::new())
    };
    Ok(PersistenceQuillenModel {
        name: desc.name.clone(),
        truncation,
        free,
        minimal: minimal_module,
        minimal_data,
    })
}

/// `π_*` barcode: homology of the Lie models, degree `k` reported as `π_{k+1}`.
pub fn pi_barcode(module: &PersistenceModule<Dgl>, cutoff: i32) -> Result<Barcode> {
    let h = pushforward(module, &HomologyFunctor { cutoff })?;
    Ok(barcode(&h).shift_degrees(1))
}

/// `H_*` barcode `sV ⊕ ℚ` of a persistence minimal model.
pub fn h_barcode(minimal: &PersistenceModule<Dgl>, cutoff: i32) -> Result<Barcode> {
    let h = pushforward(minimal, &SuspendedGeneratorFunctor { cutoff })?;
    Ok(barcode(&h))
}

/// `sH(V, d_V) ⊕ ℚ` barcode of any persistence free model.
pub fn linear_homology_barcode(free: &PersistenceModule<Dgl>, cutoff: i32) -> Result<Barcode> {
    let h = pushforward(free, &LinearHomologyFunctor { cutoff })?;
    Ok(barcode(&h))
}

/// Barcode of the generator module `Q(M_t)`.
pub fn generator_barcode(module: &PersistenceModule<Dgl>, cutoff: i32) -> Result<Barcode> {
    let q = pushforward(module, &GeneratorFunctor { cutoff })?;
    Ok(barcode(&q))
}
