use super::category::Category;
use super::certificate::InterleavingCertificate;
use super::module::PersistenceModule;
use crate::error::{Error, Result};

/// A functor `C → D` on the objects and morphisms that actually occur.
pub trait Functor<C: Category, D: Category>: Sync {
    fn target_category(&self) -> D;
    fn object(&self, x: &C::Object) -> Result<D::Object>;
    /// Image of `f`; source and target are the images of `f`'s ends.
    fn morphism(&self, f: &C::Morphism) -> Result<D::Morphism>;
}

/// The identity functor.
#[derive(Clone, Copy, Debug)]
pub struct Identity<C>(pub C);

impl<C: Category> Functor<C, C> for Identity<C> {
    fn target_category(&self) -> C {
        self.0.clone()
    }

    fn object(&self, x: &C::Object) -> Result<C::Object> {
        Ok(x.clone())
    }

    fn morphism(&self, f: &C::Morphism) -> Result<C::Morphism> {
        Ok(f.clone())
    }
}

/// `F∘X`. Checks that `F` preserves the identity at every stored object and
/// the composite of each pair of consecutive structure maps.
pub fn pushforward<C: Category, D: Category, F: Functor<C, D>>(
    module: &PersistenceModule<C>,
    functor: &F,
) -> Result<PersistenceModule<D>> {
    let cat = functor.target_category();
    let src = &module.category;
    let objects = crate::par::map(module.objects(), |x| functor.object(x)).into_iter().collect::<Result<Vec<_>>>()?;
    let maps = crate::par::map(module.maps(), |m| functor.morphism(m)).into_iter().collect::<Result<Vec<_>>>()?;
    for (i, x) in module.objects().iter().enumerate() {
        let fid = functor.morphism(&src.identity(x))?;
        if !cat.equal(&fid, &cat.identity(&objects[i])) {
            return Err(Error::invariant("functor preserves identities", format!("grid point {i}")));
        }
    }
    for i in 0..module.maps().len().saturating_sub(1) {
        let whole = functor.morphism(&src.compose(&module.maps()[i], &module.maps()[i + 1])?)?;
        let parts = cat.compose(&maps[i], &maps[i + 1])?;
        if !cat.equal(&whole, &parts) {
            return Err(Error::invariant("functor preserves composites", format!("maps {i} and {}", i + 1)));
        }
    }
    PersistenceModule::new(cat, module.grid().clone(), objects, maps)
}

/// Image of a certificate under `F`; a δ-interleaving stays a δ-interleaving.
pub fn pushforward_certificate<C: Category, D: Category, F: Functor<C, D>>(
    cert: &InterleavingCertificate<C>,
    functor: &F,
) -> Result<InterleavingCertificate<D>> {
    cert.map(|m| functor.morphism(m))
}
