use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Finite-type graded vector space with a named ordered basis per degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedVectorSpace {
    components: BTreeMap<i32, Vec<String>>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a space from `(degree, name)` pairs, keeping their order.
    pub fn from_basis<I, S>(basis: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, S)>,
        S: Into<String>,
    {
        let mut space = Self::new();
        for (deg, name) in basis {
            space.push(deg, name)?;
        }
        Ok(space)
    }

    /// Appends a basis element; names must be unique within a degree.
    pub fn push(&mut self, degree: i32, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        let comp = self.components.entry(degree).or_default();
        if comp.contains(&name) {
            return Err(Error::validation(format!("duplicate basis name `{name}` in degree {degree}")));
        }
        comp.push(name);
        Ok(comp.len() - 1)
    }

    /// Sets the whole basis of one degree.
    pub fn set_component(&mut self, degree: i32, names: Vec<String>) -> Result<()> {
        let unique: HashSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::validation(format!("duplicate basis names in degree {degree}")));
        }
        if names.is_empty() {
            self.components.remove(&degree);
        } else {
            self.components.insert(degree, names);
        }
        Ok(())
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn basis(&self, degree: i32) -> &[String] {
        self.components.get(&degree).map_or(&[], Vec::as_slice)
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.iter().filter(|(_, b)| !b.is_empty()).map(|(d, _)| *d)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees().last()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    /// Dimension table, zero degrees omitted.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.components.iter().filter(|(_, b)| !b.is_empty()).map(|(d, b)| (*d, b.len())).collect()
    }

    /// Shifts every degree by `by`, prefixing names.
    pub fn shifted(&self, by: i32, prefix: &str) -> Self {
        GradedVectorSpace {
            components: self
                .components
                .iter()
                .map(|(d, b)| (d + by, b.iter().map(|n| format!("{prefix}{n}")).collect()))
                .collect(),
        }
    }

    /// Keeps only degrees `<= max`.
    pub fn truncated(&self, max: i32) -> Self {
        GradedVectorSpace { components: self.components.range(..=max).map(|(d, b)| (*d, b.clone())).collect() }
    }
}

/// Degree-homogeneous linear map between graded spaces.
///
/// `matrices[k]` maps degree `k` of the source to degree `k + degree` of the
/// target; a missing entry is the zero map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    pub source: GradedVectorSpace,
    pub target: GradedVectorSpace,
    pub degree: i32,
    matrices: BTreeMap<i32, Matrix>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree: i32,
        matrices: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        for (k, m) in &matrices {
            let want = (target.dim(k + degree), source.dim(*k));
            if m.shape() != want {
                return Err(Error::Dimension(format!(
                    "matrix at degree {k} has shape {:?}, expected {:?}",
                    m.shape(),
                    want
                )));
            }
        }
        let matrices = matrices.into_iter().filter(|(_, m)| m.rows() > 0 && m.cols() > 0).collect();
        Ok(GradedLinearMap { source, target, degree, matrices })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree: i32) -> Self {
        GradedLinearMap { source, target, degree, matrices: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let matrices = space.degrees().map(|d| (d, Matrix::identity(space.dim(d)))).collect();
        GradedLinearMap { source: space.clone(), target: space.clone(), degree: 0, matrices }
    }

    /// Matrix at source degree `k`, zero-filled when absent.
    pub fn matrix(&self, k: i32) -> Matrix {
        self.matrices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(k + self.degree), self.source.dim(k)))
    }

    pub fn matrix_ref(&self, k: i32) -> Option<&Matrix> {
        self.matrices.get(&k)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        if self.target != other.source {
            return Err(Error::Dimension("composition: target/source spaces differ".into()));
        }
        let mut out = BTreeMap::new();
        for k in self.source.degrees() {
            let m = other.matrix(k + self.degree).mul(&self.matrix(k));
            if !m.is_zero() {
                out.insert(k, m);
            }
        }
        GradedLinearMap::new(self.source.clone(), other.target.clone(), self.degree + other.degree, out)
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.values().all(Matrix::is_zero)
    }

    /// Equality as linear maps (absent and explicit zero matrices agree).
    pub fn same_map(&self, other: &GradedLinearMap) -> bool {
        self.degree == other.degree
            && self.source == other.source
            && self.target == other.target
            && self.source.degrees().all(|k| self.matrix(k) == other.matrix(k))
    }

    pub fn apply(&self, k: i32, v: &[num_rational::BigRational]) -> Vec<num_rational::BigRational> {
        let m = self.matrix(k);
        if v.iter().all(Zero::is_zero) {
            return vec![Zero::zero(); m.rows()];
        }
        m.apply(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> GradedVectorSpace {
        GradedVectorSpace::from_basis([(1, "a"), (1, "b"), (2, "c")]).unwrap()
    }

    #[test]
    fn dims_and_duplicates() {
        let s = space();
        assert_eq!(s.dim(1), 2);
        assert_eq!(s.dim(3), 0);
        assert_eq!(s.total_dim(), 3);
        assert!(GradedVectorSpace::from_basis([(1, "a"), (1, "a")]).is_err());
        assert!(GradedVectorSpace::from_basis([(1, "a"), (2, "a")]).is_ok());
    }

    #[test]
    fn identity_composes() {
        let s = space();
        let id = GradedLinearMap::identity(&s);
        let m = GradedLinearMap::new(
            s.clone(),
            s.clone(),
            1,
            [(1, Matrix::from_i64(&[&[1, 2]]))].into_iter().collect(),
        )
        .unwrap();
        assert!(id.then(&m).unwrap().same_map(&m));
        assert!(m.then(&id).unwrap().same_map(&m));
        // degree 1 map twice lands in degree 3, which is empty
        assert!(m.then(&m).unwrap().is_zero());
    }

    #[test]
    fn shape_checked() {
        let s = space();
        let bad = GradedLinearMap::new(s.clone(), s, 0, [(1, Matrix::identity(3))].into_iter().collect());
        assert!(matches!(bad, Err(Error::Dimension(_))));
    }
}
