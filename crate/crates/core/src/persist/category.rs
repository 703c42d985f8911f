use crate::error::{Error, Result};
use crate::freelie::{DglMorphism, FreeDgl, FreeLieAlgebra, LieElement};
use crate::qlinalg::{GradedLinearMap, GradedVectorSpace};

/// The operations persistence modules and interleavings need from their
/// target category. Morphism equality is strict equality of representatives.
pub trait Category: Clone + Send + Sync {
    type Object: Clone + Send + Sync;
    type Morphism: Clone + Send + Sync;

    fn identity(&self, x: &Self::Object) -> Self::Morphism;
    /// `g ∘ f`
    fn compose(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;
    fn equal(&self, f: &Self::Morphism, g: &Self::Morphism) -> bool;
    fn zero_object(&self) -> Self::Object;
    fn zero_morphism(&self, source: &Self::Object, target: &Self::Object) -> Result<Self::Morphism>;
    /// Structural check that `f: source → target`; fails with a dimension error.
    fn check(&self, f: &Self::Morphism, source: &Self::Object, target: &Self::Object) -> Result<()>;
    fn is_zero_object(&self, x: &Self::Object) -> bool;
}

/// Graded vector spaces and degree-0 linear maps.
#[derive(Clone, Copy, Debug, Default)]
pub struct GrVec;

impl Category for GrVec {
    type Object = GradedVectorSpace;
    type Morphism = GradedLinearMap;

    fn identity(&self, x: &GradedVectorSpace) -> GradedLinearMap {
        GradedLinearMap::identity(x)
    }

    fn compose(&self, f: &GradedLinearMap, g: &GradedLinearMap) -> Result<GradedLinearMap> {
        f.then(g)
    }

    fn equal(&self, f: &GradedLinearMap, g: &GradedLinearMap) -> bool {
        f.same_map(g)
    }

    fn zero_object(&self) -> GradedVectorSpace {
        GradedVectorSpace::new()
    }

    fn zero_morphism(&self, s: &GradedVectorSpace, t: &GradedVectorSpace) -> Result<GradedLinearMap> {
        Ok(GradedLinearMap::zero(s.clone(), t.clone(), 0))
    }

    fn check(&self, f: &GradedLinearMap, s: &GradedVectorSpace, t: &GradedVectorSpace) -> Result<()> {
        if f.degree != 0 {
            return Err(Error::Dimension(format!("map has degree {}, expected 0", f.degree)));
        }
        if &f.source != s || &f.target != t {
            return Err(Error::Dimension(format!(
                "map {:?} → {:?} does not match objects {:?} → {:?}",
                f.source.dims(),
                f.target.dims(),
                s.dims(),
                t.dims()
            )));
        }
        Ok(())
    }

    fn is_zero_object(&self, x: &GradedVectorSpace) -> bool {
        x.total_dim() == 0
    }
}

/// Free dgl's truncated at a common degree and strict dgl morphisms.
#[derive(Clone, Copy, Debug)]
pub struct Dgl {
    pub truncation: i32,
}

impl Category for Dgl {
    type Object = FreeDgl;
    type Morphism = DglMorphism;

    fn identity(&self, x: &FreeDgl) -> DglMorphism {
        DglMorphism::identity(x)
    }

    fn compose(&self, f: &DglMorphism, g: &DglMorphism) -> Result<DglMorphism> {
        if !f.target().same_as(g.source()) {
            return Err(Error::Dimension("composition: target/source dgl's differ".into()));
        }
        f.then(g)
    }

    fn equal(&self, f: &DglMorphism, g: &DglMorphism) -> bool {
        f.source().same_as(g.source()) && f.target().same_as(g.target()) && f.same_as(g)
    }

    fn zero_object(&self) -> FreeDgl {
        let alg = FreeLieAlgebra::new(Vec::new(), self.truncation).expect("empty algebra");
        FreeDgl::with_zero_differential(alg).expect("zero dgl")
    }

    fn zero_morphism(&self, s: &FreeDgl, t: &FreeDgl) -> Result<DglMorphism> {
        DglMorphism::new(s.clone(), t.clone(), vec![LieElement::zero(); s.generators().len()])
    }

    fn check(&self, f: &DglMorphism, s: &FreeDgl, t: &FreeDgl) -> Result<()> {
        if !f.source().same_as(s) || !f.target().same_as(t) {
            return Err(Error::Dimension(format!(
                "morphism {} → {} does not match objects {} → {}",
                f.source().algebra(),
                f.target().algebra(),
                s.algebra(),
                t.algebra()
            )));
        }
        Ok(())
    }

    fn is_zero_object(&self, x: &FreeDgl) -> bool {
        x.generators().is_empty()
    }
}
