use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freelie::{FreeDgl, HallIndex, LieElement};
use crate::qlinalg::rational::sign;
use crate::qlinalg::{ChainComplex, GradedLinearMap, GradedVectorSpace, Matrix, Rational};

/// Sparse vector over a basis, sorted by index, no zero entries.
pub type Sparse = Vec<(usize, Rational)>;

pub(crate) fn add_sparse(acc: &mut BTreeMap<usize, Rational>, v: &[(usize, Rational)], c: &Rational) {
    for (i, x) in v {
        let e = acc.entry(*i).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

fn to_sparse(m: BTreeMap<usize, Rational>) -> Sparse {
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Finite-dimensional dgl given by structure constants.
///
/// Basis elements are sorted by degree. Brackets are stored for `i <= j`;
/// the other order follows from graded antisymmetry.
#[derive(Clone, Debug)]
pub struct FiniteDgl {
    names: Vec<String>,
    degrees: Vec<i32>,
    differential: Vec<Sparse>,
    brackets: BTreeMap<(usize, usize), Sparse>,
}

impl FiniteDgl {
    /// Validates degrees, antisymmetry on squares, Jacobi, Leibniz and `d² = 0`.
    pub fn new(
        basis: Vec<(String, i32)>,
        differential: Vec<Sparse>,
        brackets: BTreeMap<(usize, usize), Sparse>,
    ) -> Result<Self> {
        let dgl = Self::unchecked(basis, differential, brackets)?;
        dgl.check_laws()?;
        Ok(dgl)
    }

    fn unchecked(
        basis: Vec<(String, i32)>,
        differential: Vec<Sparse>,
        brackets: BTreeMap<(usize, usize), Sparse>,
    ) -> Result<Self> {
        let n = basis.len();
        if differential.len() != n {
            return Err(Error::validation(format!("differential has {} entries for {n} basis elements", differential.len())));
        }
        for w in basis.windows(2) {
            if w[0].1 > w[1].1 {
                return Err(Error::validation("basis must be sorted by degree"));
            }
        }
        let (names, degrees): (Vec<String>, Vec<i32>) = basis.into_iter().unzip();
        let mut seen = std::collections::HashSet::new();
        for (name, &d) in names.iter().zip(&degrees) {
            if d < 1 {
                return Err(Error::validation(format!("`{name}` has degree {d}; dgl's here are connected")));
            }
            if !seen.insert(name) {
                return Err(Error::validation(format!("duplicate basis element `{name}`")));
            }
        }
        let check = |v: &Sparse, want: i32, what: &str| -> Result<()> {
            for (i, _) in v {
                if *i >= n || degrees[*i] != want {
                    return Err(Error::validation(format!("{what} is not homogeneous of degree {want}")));
                }
            }
            Ok(())
        };
        for (i, v) in differential.iter().enumerate() {
            check(v, degrees[i] - 1, &format!("d({})", names[i]))?;
        }
        for (&(i, j), v) in &brackets {
            if i > j || j >= n {
                return Err(Error::validation(format!("bracket key ({i},{j}) must satisfy i <= j < {n}")));
            }
            check(v, degrees[i] + degrees[j], &format!("[{},{}]", names[i], names[j]))?;
        }
        Ok(FiniteDgl { names, degrees, differential, brackets })
    }

    /// The quotient of a free dgl by its elements of degree above the truncation.
    pub fn from_free(dgl: &FreeDgl) -> Self {
        Self::from_free_up_to(dgl, dgl.truncation())
    }

    /// Quotient by degrees above `max_degree` (at most the truncation).
    pub fn from_free_up_to(dgl: &FreeDgl, max_degree: i32) -> Self {
        let alg = dgl.algebra();
        let max_degree = max_degree.min(alg.truncation());
        let mut idx: Vec<HallIndex> = Vec::new();
        for n in alg.degrees().filter(|&n| n <= max_degree) {
            idx.extend((0..alg.dim(n)).map(|p| HallIndex { degree: n, pos: p as u32 }));
        }
        let pos: BTreeMap<HallIndex, usize> = idx.iter().enumerate().map(|(i, h)| (*h, i)).collect();
        let sparse = |x: &LieElement| -> Sparse {
            x.terms().filter_map(|(h, c)| pos.get(h).map(|&i| (i, c.clone()))).collect()
        };
        let basis: Vec<(String, i32)> = idx.iter().map(|h| (alg.basis_name(*h), h.degree)).collect();
        let differential: Vec<Sparse> = idx.iter().map(|h| sparse(dgl.derivation().on_basis(*h))).collect();
        let pairs: Vec<(usize, usize)> = (0..idx.len())
            .flat_map(|i| (i..idx.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| idx[i].degree + idx[j].degree <= max_degree)
            .collect();
        let values = crate::par::map(&pairs, |&(i, j)| {
            sparse(&alg.bracket_truncated(&LieElement::basis(idx[i]), &LieElement::basis(idx[j])))
        });
        let brackets = pairs.into_iter().zip(values).filter(|(_, v)| !v.is_empty()).collect();
        Self::unchecked(basis, differential, brackets).expect("Hall data is well formed")
    }

    /// Abelian dgl with zero differential.
    pub fn abelian(basis: Vec<(String, i32)>) -> Result<Self> {
        let n = basis.len();
        Self::new(basis, vec![Vec::new(); n], BTreeMap::new())
    }

    pub fn zero() -> Self {
        Self::unchecked(Vec::new(), Vec::new(), BTreeMap::new()).expect("empty data")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn max_degree(&self) -> i32 {
        self.degrees.last().copied().unwrap_or(0)
    }

    pub fn d(&self, i: usize) -> &Sparse {
        &self.differential[i]
    }

    /// `[e_i, e_j]`
    pub fn bracket(&self, i: usize, j: usize) -> Sparse {
        if i <= j {
            return self.brackets.get(&(i, j)).cloned().unwrap_or_default();
        }
        let s = -sign((self.degrees[i] * self.degrees[j]) as i64);
        self.brackets.get(&(j, i)).map_or(Vec::new(), |v| v.iter().map(|(k, c)| (*k, c * &s)).collect())
    }

    fn bracket_vec(&self, x: &Sparse, y: &Sparse) -> Sparse {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                add_sparse(&mut acc, &self.bracket(*i, *j), &(a * b));
            }
        }
        to_sparse(acc)
    }

    fn d_vec(&self, x: &Sparse) -> Sparse {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            add_sparse(&mut acc, &self.differential[*i], a);
        }
        to_sparse(acc)
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.dim();
        let unit = |i: usize| vec![(i, Rational::from_integer(1.into()))];
        for i in 0..n {
            if self.degrees[i] % 2 == 0 && !self.bracket(i, i).is_empty() {
                return Err(Error::invariant("graded antisymmetry", format!("[{0},{0}] ≠ 0", self.names[i])));
            }
            if !self.d_vec(&self.differential[i]).is_empty() {
                return Err(Error::invariant("d² = 0", self.names[i].clone()));
            }
            for j in 0..n {
                // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                let lhs = self.d_vec(&self.bracket(i, j));
                let mut acc = BTreeMap::new();
                add_sparse(&mut acc, &self.bracket_vec(&self.differential[i], &unit(j)), &Rational::from_integer(1.into()));
                add_sparse(&mut acc, &self.bracket_vec(&unit(i), &self.differential[j]), &sign(self.degrees[i] as i64));
                if lhs != to_sparse(acc) {
                    return Err(Error::invariant("Leibniz", format!("d[{},{}]", self.names[i], self.names[j])));
                }
                for k in 0..n {
                    // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                    let lhs = self.bracket_vec(&unit(i), &self.bracket(j, k));
                    let mut acc = BTreeMap::new();
                    add_sparse(&mut acc, &self.bracket_vec(&self.bracket(i, j), &unit(k)), &Rational::from_integer(1.into()));
                    let s = sign((self.degrees[i] * self.degrees[j]) as i64);
                    add_sparse(&mut acc, &self.bracket_vec(&unit(j), &self.bracket(i, k)), &s);
                    if lhs != to_sparse(acc) {
                        return Err(Error::invariant(
                            "Jacobi",
                            format!("({}, {}, {})", self.names[i], self.names[j], self.names[k]),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> GradedVectorSpace {
        GradedVectorSpace::from_basis(self.names.iter().zip(&self.degrees).map(|(n, d)| (*d, n.clone())))
            .expect("names are unique")
    }

    /// Position of each basis element inside its degree.
    fn positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            out.push(self.degrees[..i].iter().filter(|&&d| d == self.degrees[i]).count());
        }
        out
    }

    pub fn chain_complex(&self) -> ChainComplex {
        let space = self.space();
        let pos = self.positions();
        let mut mats: BTreeMap<i32, Matrix> = BTreeMap::new();
        for (i, v) in self.differential.iter().enumerate() {
            let d = self.degrees[i];
            let m = mats.entry(d).or_insert_with(|| Matrix::zeros(space.dim(d - 1), space.dim(d)));
            for (j, c) in v {
                m[(pos[*j], pos[i])] = c.clone();
            }
        }
        let map = GradedLinearMap::new(space.clone(), space, -1, mats).expect("shapes from the space");
        ChainComplex::new(map).expect("d² = 0 checked on construction")
    }
}
