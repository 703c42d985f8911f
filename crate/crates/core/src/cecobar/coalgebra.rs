use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use super::finite::{add_sparse, Sparse};
use crate::error::{Error, Result};
use crate::par;
use crate::qlinalg::rational::sign;
use crate::qlinalg::{ChainComplex, GradedLinearMap, GradedVectorSpace, Matrix, Rational};

/// Name reserved for the co-augmentation `1` in degree 0.
pub const UNIT: &str = "1";

/// One term `coef · left ⊗ right` of a reduced coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoTerm {
    pub coef: Rational,
    pub left: usize,
    pub right: usize,
}

/// Co-augmented dg coalgebra `C = ℚ·1 ⊕ C̄`, stored through `C̄`.
///
/// `Δc = c⊗1 + 1⊗c + Δ̄c` on `C̄` and `Δ1 = 1⊗1`, so the counit law holds by
/// construction. Coassociativity, `d² = 0` and `Δd = (d⊗1 + 1⊗d)Δ` are
/// checked on every basis element.
#[derive(Clone, Debug)]
pub struct CDGCoalgebra {
    names: Vec<String>,
    degrees: Vec<i32>,
    coproduct: Vec<Vec<CoTerm>>,
    differential: Vec<Sparse>,
    truncation: i32,
}

type Tensor2 = BTreeMap<(usize, usize), Rational>;
type Tensor3 = BTreeMap<(usize, usize, usize), Rational>;

fn add2(t: &mut Tensor2, k: (usize, usize), c: Rational) {
    let e = t.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn add3(t: &mut Tensor3, k: (usize, usize, usize), c: Rational) {
    let e = t.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

impl CDGCoalgebra {
    pub fn new(
        basis: Vec<(String, i32)>,
        coproduct: Vec<Vec<CoTerm>>,
        differential: Vec<Sparse>,
        truncation: i32,
    ) -> Result<Self> {
        let c = Self::unchecked(basis, coproduct, differential, truncation)?;
        c.check_laws()?;
        Ok(c)
    }

    pub(crate) fn unchecked(
        basis: Vec<(String, i32)>,
        coproduct: Vec<Vec<CoTerm>>,
        differential: Vec<Sparse>,
        truncation: i32,
    ) -> Result<Self> {
        let n = basis.len();
        if coproduct.len() != n || differential.len() != n {
            return Err(Error::validation("coproduct and differential need one entry per basis element"));
        }
        let (names, degrees): (Vec<String>, Vec<i32>) = basis.into_iter().unzip();
        let mut seen = HashSet::new();
        for (name, &d) in names.iter().zip(&degrees) {
            if name == UNIT {
                return Err(Error::validation("`1` is the co-augmentation and is implicit in the reduced part"));
            }
            if d < 1 {
                return Err(Error::validation(format!("`{name}` has degree {d}; the reduced part lives in degrees >= 1")));
            }
            if d > truncation {
                return Err(Error::truncation(format!("`{name}` has degree {d} above truncation {truncation}")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::validation(format!("duplicate basis element `{name}`")));
            }
        }
        for i in 0..n {
            for t in &coproduct[i] {
                if t.left >= n || t.right >= n || degrees[t.left] + degrees[t.right] != degrees[i] {
                    return Err(Error::validation(format!("Δ̄({}) has a term of the wrong degree", names[i])));
                }
            }
            for (j, _) in &differential[i] {
                if *j >= n || degrees[*j] != degrees[i] - 1 {
                    return Err(Error::validation(format!("d({}) is not of degree {}", names[i], degrees[i] - 1)));
                }
            }
        }
        Ok(CDGCoalgebra { names, degrees, coproduct, differential, truncation })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn truncation(&self) -> i32 {
        self.truncation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `Δ̄(e_i)`
    pub fn reduced_coproduct(&self, i: usize) -> &[CoTerm] {
        &self.coproduct[i]
    }

    pub fn d(&self, i: usize) -> &Sparse {
        &self.differential[i]
    }

    fn delta_bar(&self, i: usize) -> Tensor2 {
        let mut t = Tensor2::new();
        for term in &self.coproduct[i] {
            add2(&mut t, (term.left, term.right), term.coef.clone());
        }
        t
    }

    fn check_laws(&self) -> Result<()> {
        let failures = par::map_range(0..self.dim(), |i| self.check_element(i).err());
        match failures.into_iter().flatten().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn check_element(&self, i: usize) -> Result<()> {
        let name = &self.names[i];
        // d² = 0
        let mut dd = BTreeMap::new();
        for (j, c) in &self.differential[i] {
            add_sparse(&mut dd, &self.differential[*j], c);
        }
        if !dd.is_empty() {
            return Err(Error::invariant("d² = 0", format!("d²({name}) ≠ 0")));
        }
        // (Δ̄⊗1)Δ̄ = (1⊗Δ̄)Δ̄
        let mut lhs = Tensor3::new();
        let mut rhs = Tensor3::new();
        for t in &self.coproduct[i] {
            for u in &self.coproduct[t.left] {
                add3(&mut lhs, (u.left, u.right, t.right), &t.coef * &u.coef);
            }
            for u in &self.coproduct[t.right] {
                add3(&mut rhs, (t.left, u.left, u.right), &t.coef * &u.coef);
            }
        }
        if lhs != rhs {
            return Err(Error::invariant("coassociativity", name.clone()));
        }
        // Δ̄d = (d⊗1 + 1⊗d)Δ̄
        let mut lhs = Tensor2::new();
        for (j, c) in &self.differential[i] {
            for (k, v) in self.delta_bar(*j) {
                add2(&mut lhs, k, c * v);
            }
        }
        let mut rhs = Tensor2::new();
        for t in &self.coproduct[i] {
            for (a, c) in &self.differential[t.left] {
                add2(&mut rhs, (*a, t.right), &t.coef * c);
            }
            let s = sign(self.degrees[t.left] as i64);
            for (b, c) in &self.differential[t.right] {
                add2(&mut rhs, (t.left, *b), &t.coef * c * &s);
            }
        }
        // d of a degree-1 element would land on 1; excluded by the degree check
        if lhs != rhs {
            return Err(Error::invariant("Δ is a chain map", name.clone()));
        }
        Ok(())
    }

    /// First element with `τΔ̄ ≠ Δ̄`, if any.
    pub fn cocommutativity_witness(&self) -> Option<&str> {
        (0..self.dim())
            .find(|&i| {
                let t = self.delta_bar(i);
                let mut flipped = Tensor2::new();
                for (&(a, b), c) in &t {
                    add2(&mut flipped, (b, a), c * sign((self.degrees[a] * self.degrees[b]) as i64));
                }
                flipped != t
            })
            .map(|i| self.names[i].as_str())
    }

    pub fn is_cocommutative(&self) -> bool {
        self.cocommutativity_witness().is_none()
    }

    /// `C` as a graded space with `1` in degree 0.
    pub fn space(&self) -> GradedVectorSpace {
        let mut s = GradedVectorSpace::new();
        s.push(0, UNIT).expect("fresh");
        for (n, d) in self.names.iter().zip(&self.degrees) {
            s.push(*d, n.clone()).expect("unique names");
        }
        s
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.space().dims()
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let space = self.space();
        let mut pos = Vec::with_capacity(self.dim());
        let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
        for d in &self.degrees {
            let c = counts.entry(*d).or_default();
            pos.push(*c);
            *c += 1;
        }
        let mut mats: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (i, v) in self.differential.iter().enumerate() {
            if v.is_empty() {
                continue;
            }
            let d = self.degrees[i];
            let m = mats.entry(d).or_insert_with(|| Matrix::zeros(space.dim(d - 1), space.dim(d)));
            for (j, c) in v {
                m[(pos[*j], pos[i])] = c.clone();
            }
        }
        let map = GradedLinearMap::new(space.clone(), space, -1, mats).expect("shapes from the space");
        ChainComplex::new(map).expect("d² = 0 checked on construction")
    }

    /// Homology dimensions in degrees `<= max_degree`, unit included.
    pub fn homology_dims(&self, max_degree: i32) -> BTreeMap<i32, usize> {
        self.chain_complex().homology_dims(max_degree)
    }
}
