use std::collections::BTreeMap;

use num_traits::Zero;

use super::graded::{GradedLinearMap, GradedVectorSpace};
use super::matrix::Matrix;
use super::rational::Rational;
use crate::error::{Error, Result};
use crate::par;

/// Graded space with a degree −1 differential squaring to zero.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    differential: GradedLinearMap,
}

impl ChainComplex {
    /// Validates the degree and checks `d∘d = 0` degree by degree.
    pub fn new(differential: GradedLinearMap) -> Result<Self> {
        if differential.degree != -1 {
            return Err(Error::validation(format!("differential has degree {}, expected -1", differential.degree)));
        }
        if differential.source != differential.target {
            return Err(Error::validation("differential must be an endomorphism"));
        }
        let space = &differential.source;
        let degrees: Vec<i32> = space.degrees().collect();
        let failures = par::map(&degrees, |&k| {
            let dd = differential.matrix(k - 1).mul(&differential.matrix(k));
            (!dd.is_zero()).then_some(k)
        });
        if let Some(k) = failures.into_iter().flatten().next() {
            return Err(Error::invariant("d∘d = 0", format!("degree {k}")));
        }
        Ok(ChainComplex { differential })
    }

    /// Complex with zero differential.
    pub fn zero_differential(space: GradedVectorSpace) -> Self {
        ChainComplex { differential: GradedLinearMap::zero(space.clone(), space, -1) }
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.differential.source
    }

    pub fn differential(&self) -> &GradedLinearMap {
        &self.differential
    }

    /// `d_k : C_k → C_{k-1}`
    pub fn d(&self, k: i32) -> Matrix {
        self.differential.matrix(k)
    }

    /// Homology with representative cycles in every degree `<= max_degree`.
    pub fn homology(&self, max_degree: i32) -> Homology {
        let degrees: Vec<i32> = self.space().degrees().filter(|&k| k <= max_degree).collect();
        let parts = par::map(&degrees, |&k| HomologyDegree::compute(k, self.d(k), self.d(k + 1)));
        Homology { degrees: degrees.into_iter().zip(parts).collect() }
    }

    /// Homology dimensions only, via sparse ranks.
    pub fn homology_dims(&self, max_degree: i32) -> BTreeMap<i32, usize> {
        let degrees: Vec<i32> = self.space().degrees().filter(|&k| k <= max_degree).collect();
        let mut needed: Vec<i32> = degrees.iter().flat_map(|&k| [k, k + 1]).collect();
        needed.sort_unstable();
        needed.dedup();
        let ranks: BTreeMap<i32, usize> = needed
            .iter()
            .copied()
            .zip(par::map(&needed, |&k| self.differential.matrix_ref(k).map_or(0, Matrix::rank)))
            .collect();
        degrees
            .into_iter()
            .map(|k| (k, self.space().dim(k) - ranks[&k] - ranks[&(k + 1)]))
            .collect()
    }
}

/// Homology of one degree with chosen representatives.
#[derive(Clone, Debug)]
pub struct HomologyDegree {
    pub degree: i32,
    pub chain_dim: usize,
    d_out: Matrix,
    pub cycles: Vec<Vec<Rational>>,
    pub boundaries: Vec<Vec<Rational>>,
    pub representatives: Vec<Vec<Rational>>,
    /// Columns: boundaries then representatives; used to classify cycles.
    frame: Matrix,
}

impl HomologyDegree {
    fn compute(degree: i32, d_out: Matrix, d_in: Matrix) -> Self {
        let chain_dim = d_out.cols();
        let cycles = d_out.reduce().kernel;
        let boundaries = if d_in.cols() == 0 { Vec::new() } else { d_in.reduce().image };
        let mut cols = boundaries.clone();
        cols.extend(cycles.iter().cloned());
        let stacked = Matrix::from_columns(chain_dim, &cols);
        let red = stacked.reduce();
        let representatives: Vec<Vec<Rational>> = red
            .pivot_cols
            .iter()
            .filter(|&&c| c >= boundaries.len())
            .map(|&c| cols[c].clone())
            .collect();
        let mut frame_cols = boundaries.clone();
        frame_cols.extend(representatives.iter().cloned());
        let frame = Matrix::from_columns(chain_dim, &frame_cols);
        HomologyDegree { degree, chain_dim, d_out, cycles, boundaries, representatives, frame }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_cycle(&self, v: &[Rational]) -> bool {
        self.d_out.apply(v).iter().all(Zero::is_zero)
    }

    /// Coordinates of the class of `v` in the representative basis, or `None`
    /// when `v` is not a cycle.
    pub fn classify(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.is_cycle(v) {
            return None;
        }
        let x = self.frame.solve(v)?;
        Some(x[self.boundaries.len()..].to_vec())
    }

    pub fn is_boundary(&self, v: &[Rational]) -> bool {
        self.classify(v).is_some_and(|c| c.iter().all(Zero::is_zero))
    }
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub degrees: BTreeMap<i32, HomologyDegree>,
}

impl Homology {
    pub fn dim(&self, k: i32) -> usize {
        self.degrees.get(&k).map_or(0, HomologyDegree::dim)
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().filter(|(_, h)| h.dim() > 0).map(|(k, h)| (*k, h.dim())).collect()
    }

    pub fn as_space(&self, prefix: &str) -> GradedVectorSpace {
        let mut s = GradedVectorSpace::new();
        for (k, h) in &self.degrees {
            s.set_component(*k, (0..h.dim()).map(|i| format!("{prefix}{k}_{i}")).collect()).expect("fresh names");
        }
        s
    }
}

/// Degree-0 map commuting with differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    pub map: GradedLinearMap,
}

/// Outcome of [`ChainMap::is_quasi_iso`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub is_quasi_iso: bool,
    pub first_failure: Option<i32>,
    pub checked_up_to: i32,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, map: GradedLinearMap) -> Result<Self> {
        if map.degree != 0 || &map.source != source.space() || &map.target != target.space() {
            return Err(Error::Dimension("chain map spaces or degree do not match".into()));
        }
        for k in source.space().degrees() {
            let lhs = map.matrix(k - 1).mul(&source.d(k));
            let rhs = target.d(k).mul(&map.matrix(k));
            if lhs != rhs {
                return Err(Error::invariant("f∘d = d∘f", format!("degree {k}")));
            }
        }
        Ok(ChainMap { source, target, map })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap { source: c.clone(), target: c.clone(), map: GradedLinearMap::identity(c.space()) }
    }

    /// Matrix of `H_k(f)` in the representative bases of `hs` and `ht`.
    pub fn induced(&self, k: i32, hs: &Homology, ht: &Homology) -> Matrix {
        induced_on_homology(&self.map.matrix(k), hs.degrees.get(&k), ht.degrees.get(&k))
    }

    /// `H(g∘f)` against `H(g)∘H(f)` is tested in the integration suite; this
    /// is the predicate itself: `H(f)` bijective in every degree `<= max_degree`.
    pub fn is_quasi_iso(&self, max_degree: i32) -> QuasiIsoReport {
        let hs = self.source.homology(max_degree);
        let ht = self.target.homology(max_degree);
        let mut degrees: Vec<i32> =
            self.source.space().degrees().chain(self.target.space().degrees()).filter(|&k| k <= max_degree).collect();
        degrees.sort_unstable();
        degrees.dedup();
        for k in degrees {
            let (a, b) = (hs.dim(k), ht.dim(k));
            if a != b || (a > 0 && self.induced(k, &hs, &ht).rank() != a) {
                return QuasiIsoReport { is_quasi_iso: false, first_failure: Some(k), checked_up_to: max_degree };
            }
        }
        QuasiIsoReport { is_quasi_iso: true, first_failure: None, checked_up_to: max_degree }
    }
}

/// Induced map on homology for a chain-level matrix `f_k`.
pub fn induced_on_homology(f: &Matrix, src: Option<&HomologyDegree>, tgt: Option<&HomologyDegree>) -> Matrix {
    let rows = tgt.map_or(0, HomologyDegree::dim);
    let Some(src) = src else { return Matrix::zeros(rows, 0) };
    let cols: Vec<Vec<Rational>> = src
        .representatives
        .iter()
        .map(|r| match tgt {
            Some(t) => t.classify(&f.apply(r)).expect("chain map sends cycles to cycles"),
            None => Vec::new(),
        })
        .collect();
    Matrix::from_columns(rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(d: i64) -> ChainComplex {
        let s = GradedVectorSpace::from_basis([(1, "x"), (0, "y")]).unwrap();
        let m = GradedLinearMap::new(s.clone(), s, -1, [(1, Matrix::from_i64(&[&[d]]))].into_iter().collect()).unwrap();
        ChainComplex::new(m).unwrap()
    }

    #[test]
    fn zero_differential_homology_is_space() {
        let s = GradedVectorSpace::from_basis([(0, "a"), (2, "b"), (2, "c")]).unwrap();
        let c = ChainComplex::zero_differential(s.clone());
        assert_eq!(c.homology(10).dims(), s.dims());
        assert_eq!(c.homology_dims(10), s.dims());
    }

    #[test]
    fn acyclic_two_term() {
        let c = two_term(1);
        assert!(c.homology(5).dims().is_empty());
        assert!(c.homology_dims(5).values().all(|&d| d == 0));
        let c0 = two_term(0);
        assert_eq!(c0.homology(5).dims(), [(0, 1), (1, 1)].into_iter().collect());
    }

    #[test]
    fn rejects_nonzero_square() {
        let s = GradedVectorSpace::from_basis([(2, "a"), (1, "b"), (0, "c")]).unwrap();
        let m = GradedLinearMap::new(
            s.clone(),
            s,
            -1,
            [(2, Matrix::from_i64(&[&[1]])), (1, Matrix::from_i64(&[&[1]]))].into_iter().collect(),
        )
        .unwrap();
        assert!(matches!(ChainComplex::new(m), Err(Error::Invariant { .. })));
    }

    #[test]
    fn identity_and_zero_maps() {
        let c = two_term(0);
        assert!(ChainMap::identity(&c).is_quasi_iso(5).is_quasi_iso);
        let z = ChainMap::new(c.clone(), c.clone(), GradedLinearMap::zero(c.space().clone(), c.space().clone(), 0)).unwrap();
        let r = z.is_quasi_iso(5);
        assert!(!r.is_quasi_iso);
        assert_eq!(r.first_failure, Some(0));
    }

    #[test]
    fn rejects_non_chain_map() {
        let a = two_term(1);
        let b = two_term(0);
        // identity matrices do not intertwine d = 1 with d = 0
        let f = GradedLinearMap::identity(a.space());
        let f = GradedLinearMap::new(a.space().clone(), b.space().clone(), 0, (0..=1).map(|k| (k, f.matrix(k))).collect()).unwrap();
        assert!(ChainMap::new(a, b, f).is_err());
    }

    #[test]
    fn boundary_membership() {
        let c = two_term(2);
        let h = c.homology(5);
        let h0 = &h.degrees[&0];
        assert!(h0.is_boundary(&[crate::qlinalg::rational::int(3)]));
    }
}
