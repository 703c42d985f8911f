use serde::{Deserialize, Serialize};

use super::LieModel;
use crate::error::{Error, Result};
use crate::freelie::{derive_via_tensor, FreeDgl, FreeLieAlgebra, Generator, Letter, LieElement};
use crate::io;
use crate::qlinalg::Rational;

/// One cell `D^dimension` attached along the cycle `attach`, written in the
/// generators of the model it is attached to. It adds the generator `name`
/// of degree `dimension − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub name: String,
    pub dimension: i32,
    pub attach: String,
}

/// Cells entering the filtration at `value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    #[serde(with = "io::rational")]
    pub value: Rational,
    pub cells: Vec<CellSpec>,
}

/// A filtered cell complex: stages with strictly increasing filtration
/// values, each attaching finitely many cells to the previous stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellComplexDescription {
    pub format_version: u32,
    pub name: String,
    pub stages: Vec<StageSpec>,
}

impl CellComplexDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        let d: Self = io::from_json(text, "cell complex")?;
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        io::check_version(self.format_version, "cell complex")?;
        if self.stages.is_empty() {
            return Err(Error::validation("cell complex has no stages"));
        }
        for (i, w) in self.stages.windows(2).enumerate() {
            if w[0].value >= w[1].value {
                return Err(Error::validation(format!(
                    "stage values must increase strictly (stage {} then stage {})",
                    i,
                    i + 1
                )));
            }
        }
        for (i, s) in self.stages.iter().enumerate() {
            for c in &s.cells {
                check_dimension(c).map_err(|e| e.context(format!("stage {i}")))?;
            }
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<Rational> {
        self.stages.iter().map(|s| s.value.clone()).collect()
    }
}

fn check_dimension(c: &CellSpec) -> Result<()> {
    if c.dimension < 2 {
        return Err(Error::validation(format!(
            "cell `{}` has dimension {}; the complex must be simply connected (dimension >= 2)",
            c.name, c.dimension
        )));
    }
    Ok(())
}

/// The model of a point: the free Lie algebra on no generators.
pub fn point_model(truncation: i32) -> Result<LieModel> {
    let alg = FreeLieAlgebra::new(Vec::new(), truncation)?;
    Ok(LieModel { dgl: FreeDgl::with_zero_differential(alg)?, provenance: "point".into() })
}

/// `𝕃_{V⊕W}` with `dw_α = z_α`. Every attaching class must be zero or a
/// cycle of degree `dimension − 2` in the given model.
pub fn attach_cells(model: &LieModel, cells: &[CellSpec]) -> Result<LieModel> {
    let old = &model.dgl;
    let old_alg = old.algebra();
    let mut gens: Vec<Generator> = old.generators().to_vec();
    for c in cells {
        check_dimension(c)?;
        gens.push(Generator::new(c.name.clone(), c.dimension - 1));
    }
    let alg = FreeLieAlgebra::new(gens, old.truncation())?;
    let n_old = old.generators().len();
    let ident: Vec<Option<Letter>> = (0..n_old).map(|i| Some(i as Letter)).collect();
    let mut values = Vec::with_capacity(alg.generators().len());
    for v in old.differential_values() {
        values.push(alg.transport(v, old_alg, &ident)?);
    }
    for c in cells {
        let z = alg.parse(&c.attach).map_err(|e| e.context(format!("attaching class of `{}`", c.name)))?;
        if let Some((w, _)) = alg.expand(&z).into_iter().find(|(w, _)| w.iter().any(|&l| l as usize >= n_old)) {
            return Err(Error::validation(format!(
                "attaching class of `{}` uses a generator added in the same stage (word {})",
                c.name,
                alg.format_word(&w)
            )));
        }
        if !z.is_zero() && z.degree() != Some(c.dimension - 2) {
            return Err(Error::validation(format!(
                "attaching class of `{}` must have degree {}, got `{}`",
                c.name,
                c.dimension - 2,
                alg.format(&z)
            )));
        }
        let dz = derive_via_tensor(&alg, -1, &values[..n_old], &z)?;
        if !dz.is_zero() {
            return Err(Error::validation(format!(
                "attaching class of `{}` is not a cycle: d({}) = {}",
                c.name,
                alg.format(&z),
                alg.format(&dz)
            )));
        }
        values.push(z);
    }
    let names: Vec<&str> = cells.iter().map(|c| c.name.as_str()).collect();
    Ok(LieModel {
        dgl: FreeDgl::new(alg, values)?,
        provenance: if names.is_empty() { model.provenance.clone() } else { format!("{} + cells {}", model.provenance, names.join(",")) },
    })
}

/// Free models of the stages, each obtained from the previous one by
/// attaching cells; structure maps are the inclusions of generators.
pub fn skeletal_models(desc: &CellComplexDescription, truncation: i32) -> Result<Vec<LieModel>> {
    desc.validate()?;
    let mut current = point_model(truncation)?;
    let mut out = Vec::with_capacity(desc.stages.len());
    for (i, s) in desc.stages.iter().enumerate() {
        current = attach_cells(&current, &s.cells).map_err(|e| e.context(format!("stage {i}")))?;
        current.provenance = format!("{} stage {i}", desc.name);
        out.push(current.clone());
    }
    Ok(out)
}

/// Generator values of a model as text, keyed by generator name.
pub fn describe_values(dgl: &FreeDgl) -> Vec<(String, String)> {
    dgl.generators()
        .iter()
        .zip(dgl.differential_values())
        .map(|(g, v): (&Generator, &LieElement)| (g.name.clone(), dgl.algebra().format(v)))
        .collect()
}
