use std::collections::BTreeMap;

use num_traits::Zero;

use super::coalgebra::{CDGCoalgebra, CoTerm};
use super::finite::{add_sparse, Sparse};
use crate::error::Result;
use crate::qlinalg::rational::sign;
use crate::qlinalg::Rational;

/// Degreewise dual of a co-augmented coalgebra: a unital commutative dg
/// algebra `ℚ·1 ⊕ C̄*` with the unit dual to the counit.
///
/// The product of dual basis elements is `φ_a·φ_b = Σ_c (−1)^{|a||b|} ⟨Δ̄c, a⊗b⟩ φ_c`
/// on the reduced part; the differential is the transpose of `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgAlgebra {
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
    /// `φ_a·φ_b` for reduced basis elements.
    pub product: BTreeMap<(usize, usize), Sparse>,
    /// Degree +1 differential on the reduced part.
    pub differential: Vec<Sparse>,
    pub truncation: i32,
}

/// Dual algebra of `c` in degrees `<= truncation(c)`.
pub fn dualize(c: &CDGCoalgebra) -> CdgAlgebra {
    let n = c.dim();
    let mut product: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    let mut differential: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
    for i in 0..n {
        for t in c.reduced_coproduct(i) {
            let s = sign((c.degree(t.left) * c.degree(t.right)) as i64);
            add_sparse(product.entry((t.left, t.right)).or_default(), &[(i, &t.coef * s)], &Rational::from_integer(1.into()));
        }
        for (j, v) in c.d(i) {
            add_sparse(&mut differential[*j], &[(i, v.clone())], &Rational::from_integer(1.into()));
        }
    }
    CdgAlgebra {
        names: c.names().to_vec(),
        degrees: (0..n).map(|i| c.degree(i)).collect(),
        product: product.into_iter().map(|(k, v)| (k, v.into_iter().collect())).filter(|(_, v): &(_, Sparse)| !v.is_empty()).collect(),
        differential: differential.into_iter().map(|m| m.into_iter().collect()).collect(),
        truncation: c.truncation(),
    }
}

impl CdgAlgebra {
    /// Dualizes back to the coalgebra (validated).
    pub fn dualize(&self) -> Result<CDGCoalgebra> {
        let n = self.names.len();
        let mut coproduct: Vec<Vec<CoTerm>> = vec![Vec::new(); n];
        for (&(a, b), v) in &self.product {
            let s = sign((self.degrees[a] * self.degrees[b]) as i64);
            for (c, coef) in v {
                coproduct[*c].push(CoTerm { coef: coef * &s, left: a, right: b });
            }
        }
        let mut differential: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); n];
        for (j, v) in self.differential.iter().enumerate() {
            for (i, c) in v {
                differential[*i].insert(j, c.clone());
            }
        }
        let basis = self.names.iter().cloned().zip(self.degrees.iter().copied()).collect();
        CDGCoalgebra::new(
            basis,
            coproduct,
            differential.into_iter().map(|m| m.into_iter().collect()).collect(),
            self.truncation,
        )
    }

    /// Product of reduced elements; the unit component is always zero.
    pub fn multiply(&self, x: &Sparse, y: &Sparse) -> Sparse {
        let mut acc = BTreeMap::new();
        for (a, p) in x {
            for (b, q) in y {
                if let Some(v) = self.product.get(&(*a, *b)) {
                    add_sparse(&mut acc, v, &(p * q));
                }
            }
        }
        acc.into_iter().filter(|(_, c): &(usize, Rational)| !c.is_zero()).collect()
    }

    /// `φ_a φ_b = (−1)^{|a||b|} φ_b φ_a` for all pairs.
    pub fn is_graded_commutative(&self) -> bool {
        self.product.iter().all(|(&(a, b), v)| {
            let s = sign((self.degrees[a] * self.degrees[b]) as i64);
            let flipped: Sparse = self.product.get(&(b, a)).map_or(Vec::new(), |w| w.iter().map(|(i, c)| (*i, c * &s)).collect());
            &flipped == v
        })
    }

    /// Dimensions per degree, unit included in degree 0.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::from([(0, 1)]);
        for d in &self.degrees {
            *out.entry(*d).or_default() += 1;
        }
        out
    }
}
