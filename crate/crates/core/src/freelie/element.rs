use std::collections::BTreeMap;

use num_traits::Zero;

use super::algebra::{FreeLieAlgebra, HallIndex};
use crate::qlinalg::rational::Rational;

/// ℚ-linear combination of Hall basis elements of some [`FreeLieAlgebra`].
///
/// The representation is canonical: no zero coefficients are stored, so
/// equality of elements is equality of the maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    terms: BTreeMap<HallIndex, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(idx: HallIndex) -> Self {
        let mut e = Self::zero();
        e.terms.insert(idx, Rational::from_integer(1.into()));
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (HallIndex, Rational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HallIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: HallIndex) -> Rational {
        self.terms.get(&idx).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, idx: HallIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add_scaled(&mut self, other: &LieElement, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (i, v) in &other.terms {
            self.add_term(*i, v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> LieElement {
        if c.is_zero() {
            return LieElement::zero();
        }
        LieElement { terms: self.terms.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// Total degree if the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|i| i.degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// Homogeneous components by total degree.
    pub fn components(&self) -> BTreeMap<i32, LieElement> {
        let mut out: BTreeMap<i32, LieElement> = BTreeMap::new();
        for (i, c) in &self.terms {
            out.entry(i.degree).or_default().terms.insert(*i, c.clone());
        }
        out
    }

    pub fn component(&self, degree: i32) -> LieElement {
        LieElement { terms: self.terms.iter().filter(|(i, _)| i.degree == degree).map(|(i, c)| (*i, c.clone())).collect() }
    }

    /// Part of bracket length exactly `k`.
    pub fn length_part(&self, alg: &FreeLieAlgebra, k: usize) -> LieElement {
        LieElement {
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| alg.element(**i).length == k)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Decomposition by bracket length.
    pub fn by_length(&self, alg: &FreeLieAlgebra) -> BTreeMap<usize, LieElement> {
        let mut out: BTreeMap<usize, LieElement> = BTreeMap::new();
        for (i, c) in &self.terms {
            out.entry(alg.element(*i).length).or_default().terms.insert(*i, c.clone());
        }
        out
    }

    /// Coordinates in degree `degree` as a dense vector.
    pub fn dense(&self, alg: &FreeLieAlgebra, degree: i32) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); alg.dim(degree)];
        for (i, c) in &self.terms {
            if i.degree == degree {
                v[i.pos as usize] = c.clone();
            }
        }
        v
    }

    pub fn from_dense(degree: i32, v: &[Rational]) -> LieElement {
        LieElement::from_terms(
            v.iter().enumerate().map(|(p, c)| (HallIndex { degree, pos: p as u32 }, c.clone())),
        )
    }
}

impl std::ops::Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer(1.into()));
        out
    }
}

impl std::ops::Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from_integer((-1).into()));
        out
    }
}

impl std::ops::Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&Rational::from_integer((-1).into()))
    }
}
