use super::category::Category;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::qlinalg::Rational;

/// Functor from `(ℝ, ≤)` with constant interpolation between grid values:
/// `X_t = objects[i]` for `t_i <= t < t_{i+1}`, the zero object below `t_1`.
/// Only consecutive structure maps are stored; longer ones are composites.
#[derive(Clone, Debug)]
pub struct PersistenceModule<C: Category> {
    pub category: C,
    grid: Grid,
    objects: Vec<C::Object>,
    maps: Vec<C::Morphism>,
}

impl<C: Category> PersistenceModule<C> {
    /// `maps[i]: objects[i] → objects[i + 1]`.
    pub fn new(category: C, grid: Grid, objects: Vec<C::Object>, maps: Vec<C::Morphism>) -> Result<Self> {
        if objects.len() != grid.len() || maps.len() + 1 != grid.len() {
            return Err(Error::Dimension(format!(
                "module over {} grid points needs as many objects and one fewer map (got {} and {})",
                grid.len(),
                objects.len(),
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            category.check(m, &objects[i], &objects[i + 1]).map_err(|e| e.context(format!("structure map {i}")))?;
        }
        Ok(PersistenceModule { category, grid, objects, maps })
    }

    /// Constant module with identity structure maps.
    pub fn constant(category: C, grid: Grid, object: C::Object) -> Self {
        let id = category.identity(&object);
        let n = grid.len();
        PersistenceModule { category, grid, objects: vec![object; n], maps: vec![id; n - 1] }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn objects(&self) -> &[C::Object] {
        &self.objects
    }

    pub fn maps(&self) -> &[C::Morphism] {
        &self.maps
    }

    pub fn at(&self, t: &Rational) -> C::Object {
        match self.grid.index_at(t) {
            Some(i) => self.objects[i].clone(),
            None => self.category.zero_object(),
        }
    }

    /// `X_{s ≤ t}`
    pub fn map(&self, s: &Rational, t: &Rational) -> Result<C::Morphism> {
        if s > t {
            return Err(Error::validation(format!("structure map needs s <= t, got {s} > {t}")));
        }
        match (self.grid.index_at(s), self.grid.index_at(t)) {
            (Some(i), Some(j)) => self.map_index(i, j),
            (None, _) => self.category.zero_morphism(&self.category.zero_object(), &self.at(t)),
            (Some(_), None) => unreachable!("s <= t"),
        }
    }

    /// Composite of the stored maps from index `i` to index `j`.
    pub fn map_index(&self, i: usize, j: usize) -> Result<C::Morphism> {
        let mut m = self.category.identity(&self.objects[i]);
        for k in i..j {
            m = self.category.compose(&m, &self.maps[k])?;
        }
        Ok(m)
    }

    /// `X(δ)_r = X_{r+δ}`: the grid moves down by `δ`.
    pub fn shift(&self, delta: &Rational) -> Result<Self> {
        if delta < &Rational::from_integer(0.into()) {
            return Err(Error::validation("shift needs δ >= 0"));
        }
        Ok(PersistenceModule {
            category: self.category.clone(),
            grid: self.grid.shifted(delta),
            objects: self.objects.clone(),
            maps: self.maps.clone(),
        })
    }

    /// Same objects and maps on a translated grid (for building δ-shift pairs
    /// in either direction).
    pub fn translated(&self, by: &Rational) -> Self {
        PersistenceModule {
            category: self.category.clone(),
            grid: self.grid.shifted(&-by.clone()),
            objects: self.objects.clone(),
            maps: self.maps.clone(),
        }
    }

    /// `φ^{X,δ}_t = X_{t ≤ t+δ}`
    pub fn phi(&self, t: &Rational, delta: &Rational) -> Result<C::Morphism> {
        self.map(t, &(t + delta))
    }
}

