use std::collections::BTreeMap;

use crate::cecobar::UNIT;
use crate::error::{Error, Result};
use crate::freelie::{DglMorphism, FreeDgl};
use crate::models::suspended_linear_complex;
use crate::persist::{Dgl, Functor, GrVec};
use crate::qlinalg::complex::induced_on_homology;
use crate::qlinalg::{GradedLinearMap, GradedVectorSpace, Matrix};

/// `H_*` of a free dgl in degrees `<= cutoff`, in representative bases.
#[derive(Clone, Copy, Debug)]
pub struct HomologyFunctor {
    pub cutoff: i32,
}

impl Functor<Dgl, GrVec> for HomologyFunctor {
    fn target_category(&self) -> GrVec {
        GrVec
    }

    fn object(&self, x: &FreeDgl) -> Result<GradedVectorSpace> {
        Ok(x.homology_shared(self.cutoff).as_space("h").truncated(self.cutoff))
    }

    fn morphism(&self, f: &DglMorphism) -> Result<GradedLinearMap> {
        let (hs, ht) = (f.source().homology_shared(self.cutoff), f.target().homology_shared(self.cutoff));
        let (s, t) = (self.object(f.source())?, self.object(f.target())?);
        let mut mats = BTreeMap::new();
        for k in s.degrees() {
            if t.dim(k) > 0 {
                mats.insert(k, induced_on_homology(&f.matrix(k), hs.degrees.get(&k), ht.degrees.get(&k)));
            }
        }
        GradedLinearMap::new(s, t, 0, mats)
    }
}

/// Generator module `Q`: `V` in degrees `<= cutoff` and the linear parts of
/// morphisms.
#[derive(Clone, Copy, Debug)]
pub struct GeneratorFunctor {
    pub cutoff: i32,
}

impl Functor<Dgl, GrVec> for GeneratorFunctor {
    fn target_category(&self) -> GrVec {
        GrVec
    }

    fn object(&self, x: &FreeDgl) -> Result<GradedVectorSpace> {
        Ok(x.generator_space().truncated(self.cutoff))
    }

    fn morphism(&self, f: &DglMorphism) -> Result<GradedLinearMap> {
        restrict(&f.linear_part(), self.cutoff, 0)
    }
}

/// `H_*(X) = sV ⊕ ℚ` for minimal models: generators of degree `<= cutoff`
/// moved up one degree, plus the unit in degree 0.
#[derive(Clone, Copy, Debug)]
pub struct SuspendedGeneratorFunctor {
    pub cutoff: i32,
}

impl Functor<Dgl, GrVec> for SuspendedGeneratorFunctor {
    fn target_category(&self) -> GrVec {
        GrVec
    }

    fn object(&self, x: &FreeDgl) -> Result<GradedVectorSpace> {
        if !x.is_minimal() {
            return Err(Error::validation("H_* = sV ⊕ ℚ needs minimal stages"));
        }
        Ok(with_unit(&x.generator_space().truncated(self.cutoff).shifted(1, "s")))
    }

    fn morphism(&self, f: &DglMorphism) -> Result<GradedLinearMap> {
        let (s, t) = (self.object(f.source())?, self.object(f.target())?);
        let q = f.linear_part();
        let mut mats = BTreeMap::from([(0, Matrix::identity(1))]);
        for k in q.source.degrees().filter(|&k| k <= self.cutoff) {
            mats.insert(k + 1, q.matrix(k));
        }
        GradedLinearMap::new(s, t, 0, mats)
    }
}

/// `sH(V, d_V) ⊕ ℚ` for arbitrary free models, with maps induced by `Q`.
#[derive(Clone, Copy, Debug)]
pub struct LinearHomologyFunctor {
    pub cutoff: i32,
}

impl LinearHomologyFunctor {
    fn homology(&self, x: &FreeDgl) -> crate::qlinalg::Homology {
        suspended_linear_complex(x).homology(self.cutoff + 1)
    }
}

impl Functor<Dgl, GrVec> for LinearHomologyFunctor {
    fn target_category(&self) -> GrVec {
        GrVec
    }

    fn object(&self, x: &FreeDgl) -> Result<GradedVectorSpace> {
        Ok(self.homology(x).as_space("h"))
    }

    fn morphism(&self, f: &DglMorphism) -> Result<GradedLinearMap> {
        let (hs, ht) = (self.homology(f.source()), self.homology(f.target()));
        let (s, t) = (hs.as_space("h"), ht.as_space("h"));
        let q = f.linear_part();
        let mut mats = BTreeMap::new();
        for k in s.degrees() {
            if t.dim(k) == 0 {
                continue;
            }
            let chain = if k == 0 { Matrix::identity(1) } else { q.matrix(k - 1) };
            mats.insert(k, induced_on_homology(&chain, hs.degrees.get(&k), ht.degrees.get(&k)));
        }
        GradedLinearMap::new(s, t, 0, mats)
    }
}

fn with_unit(space: &GradedVectorSpace) -> GradedVectorSpace {
    let mut s = GradedVectorSpace::new();
    s.push(0, UNIT).expect("fresh");
    for k in space.degrees() {
        for name in space.basis(k) {
            s.push(k, name.clone()).expect("unique names");
        }
    }
    s
}

fn restrict(f: &GradedLinearMap, cutoff: i32, degree: i32) -> Result<GradedLinearMap> {
    let (s, t) = (f.source.truncated(cutoff), f.target.truncated(cutoff + degree));
    let mats: BTreeMap<i32, Matrix> = s.degrees().map(|k| (k, f.matrix(k))).collect();
    GradedLinearMap::new(s, t, degree, mats)
}

