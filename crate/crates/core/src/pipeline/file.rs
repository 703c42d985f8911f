use serde::{Deserialize, Serialize};

use super::model::PersistenceQuillenModel;
use crate::error::{Error, Result};
use crate::freelie::{DglMorphism, FreeDgl, FreeLieAlgebra, Generator};
use crate::io;
use crate::persist::{Dgl, PersistenceModule};
use crate::qlinalg::Rational;

pub const MODEL_KIND: &str = "persistence-quillen-model";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i32,
    /// Differential of the generator as Lie element text.
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    #[serde(with = "io::rational")]
    pub value: Rational,
    pub minimal: bool,
    pub generators: Vec<GeneratorEntry>,
}

/// Minimal stages with explicit structure maps: images of the source
/// generators of map `i: M_i → M_{i+1}`, written in the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalEntry {
    pub stages: Vec<StageEntry>,
    pub maps: Vec<Vec<String>>,
}

/// Serialized [`PersistenceQuillenModel`]; free structure maps are the
/// inclusions of generators by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub kind: String,
    pub name: String,
    pub truncation: i32,
    pub free: Vec<StageEntry>,
    pub minimal: Option<MinimalEntry>,
}

fn stage_entry(value: &Rational, dgl: &FreeDgl) -> StageEntry {
    let alg = dgl.algebra();
    StageEntry {
        value: value.clone(),
        minimal: dgl.is_minimal(),
        generators: dgl
            .generators()
            .iter()
            .zip(dgl.differential_values())
            .map(|(g, v)| GeneratorEntry { name: g.name.clone(), degree: g.degree, d: alg.format(v) })
            .collect(),
    }
}

fn stage_dgl(entry: &StageEntry, truncation: i32) -> Result<FreeDgl> {
    let gens = entry.generators.iter().map(|g| Generator::new(g.name.clone(), g.degree)).collect();
    let alg = FreeLieAlgebra::new(gens, truncation)?;
    let values = entry.generators.iter().map(|g| alg.parse(&g.d)).collect::<Result<Vec<_>>>()?;
    let dgl = FreeDgl::new(alg, values)?;
    if dgl.is_minimal() != entry.minimal {
        return Err(Error::validation(format!("minimal flag {} does not match the differential", entry.minimal)));
    }
    Ok(dgl)
}

fn grid_values(stages: &[StageEntry]) -> Vec<Rational> {
    stages.iter().map(|s| s.value.clone()).collect()
}

impl ModelFile {
    pub fn from_model(model: &PersistenceQuillenModel) -> Self {
        let values = model.grid().values();
        let entries = |m: &PersistenceModule<Dgl>| -> Vec<StageEntry> {
            values.iter().zip(m.objects()).map(|(t, d)| stage_entry(t, d)).collect()
        };
        let minimal = model.minimal.as_ref().map(|m| MinimalEntry {
            stages: entries(m),
            maps: m
                .maps()
                .iter()
                .map(|f| f.images().iter().map(|x| f.target().algebra().format(x)).collect())
                .collect(),
        });
        ModelFile {
            format_version: io::FORMAT_VERSION,
            kind: MODEL_KIND.to_string(),
            name: model.name.clone(),
            truncation: model.truncation,
            free: entries(&model.free),
            minimal,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = io::from_json(text, "model")?;
        io::check_version(f.format_version, "model")?;
        if f.kind != MODEL_KIND {
            return Err(Error::validation(format!("expected kind `{MODEL_KIND}`, got `{}`", f.kind)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        io::to_json(self)
    }

    /// Rebuilds the model; every stage, map and minimal flag is re-checked.
    pub fn to_model(&self) -> Result<PersistenceQuillenModel> {
        if self.truncation < 3 {
            return Err(Error::truncation(format!("truncation must be >= 3, got {}", self.truncation)));
        }
        let cat = Dgl { truncation: self.truncation };
        let grid = crate::persist::Grid::new(grid_values(&self.free))?;
        let objects = self
            .free
            .iter()
            .enumerate()
            .map(|(i, s)| stage_dgl(s, self.truncation).map_err(|e| e.context(format!("free stage {i}"))))
            .collect::<Result<Vec<_>>>()?;
        let maps = objects
            .windows(2)
            .enumerate()
            .map(|(i, w)| DglMorphism::inclusion(&w[0], &w[1]).map_err(|e| e.context(format!("free stage {}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        let free = PersistenceModule::new(cat, grid.clone(), objects, maps)?;
        let minimal = match &self.minimal {
            None => None,
            Some(m) => {
                if grid_values(&m.stages) != grid.values() {
                    return Err(Error::validation("minimal stages must share the free grid"));
                }
                let objects = m
                    .stages
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let d = stage_dgl(s, self.truncation).map_err(|e| e.context(format!("minimal stage {i}")))?;
                        if !d.is_minimal() {
                            return Err(Error::validation(format!("minimal stage {i} is not minimal")));
                        }
                        Ok(d)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if m.maps.len() + 1 != objects.len() {
                    return Err(Error::Dimension(format!("{} minimal maps for {} stages", m.maps.len(), objects.len())));
                }
                let maps = m
                    .maps
                    .iter()
                    .enumerate()
                    .map(|(i, images)| {
                        let (s, t) = (&objects[i], &objects[i + 1]);
                        let parsed = images.iter().map(|x| t.algebra().parse(x)).collect::<Result<Vec<_>>>()?;
                        DglMorphism::new(s.clone(), t.clone(), parsed).map_err(|e| e.context(format!("minimal map {i}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(PersistenceModule::new(cat, grid, objects, maps)?)
            }
        };
        Ok(PersistenceQuillenModel {
            name: self.name.clone(),
            truncation: self.truncation,
            free,
            minimal,
            minimal_data: Vec::new(),
        })
    }
}
