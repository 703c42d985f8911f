use std::collections::BTreeMap;
use std::sync::Arc;

use super::algebra::{add_to, FreeLieAlgebra, HallIndex, Tensor};
use super::element::LieElement;
use crate::error::{Error, Result};
use crate::par;
use crate::qlinalg::rational::sign;
use crate::qlinalg::Matrix;

/// Derivation of a free Lie algebra, tabulated on the whole Hall basis.
///
/// Values are extended along the Hall factorization of each basis element
/// by `θ[a,b] = [θa,b] + (−1)^{k·|a|}[a,θb]`. Parts landing above the
/// truncation are dropped, so for positive `k` this is the induced map on
/// the truncated quotient.
#[derive(Clone, Debug)]
pub struct Derivation {
    degree: i32,
    images: BTreeMap<i32, Vec<LieElement>>,
}

/// Extends generator values to a derivation of degree `degree`.
pub fn extend_derivation(alg: &Arc<FreeLieAlgebra>, degree: i32, values: &[LieElement]) -> Result<Derivation> {
    let gens = alg.generators();
    if values.len() != gens.len() {
        return Err(Error::validation(format!(
            "derivation needs {} generator values, got {}",
            gens.len(),
            values.len()
        )));
    }
    for (g, v) in gens.iter().zip(values) {
        if !v.is_zero() && v.degree() != Some(g.degree + degree) {
            return Err(Error::validation(format!(
                "value on `{}` must be homogeneous of degree {}",
                g.name,
                g.degree + degree
            )));
        }
    }
    let mut images: BTreeMap<i32, Vec<LieElement>> = BTreeMap::new();
    let degrees: Vec<i32> = alg.degrees().collect();
    for n in degrees {
        let basis = alg.basis(n);
        let row = par::map_range(0..basis.len(), |p| {
            let h = &basis[p];
            match h.factors {
                None => {
                    let gi = h.word.leaves()[0] as usize;
                    values[gi].clone()
                }
                Some((a, b)) => {
                    let ta = &images[&a.degree][a.pos as usize];
                    let tb = &images[&b.degree][b.pos as usize];
                    let (ea, eb) = (LieElement::basis(a), LieElement::basis(b));
                    let mut out = alg.bracket_truncated(ta, &eb);
                    let s = sign(degree as i64 * a.degree as i64);
                    out.add_scaled(&alg.bracket_truncated(&ea, tb), &s);
                    out
                }
            }
        });
        images.insert(n, row);
    }
    Ok(Derivation { degree, images })
}

impl Derivation {
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn on_basis(&self, idx: HallIndex) -> &LieElement {
        &self.images[&idx.degree][idx.pos as usize]
    }

    pub fn apply(&self, x: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (idx, c) in x.terms() {
            out.add_scaled(self.on_basis(*idx), c);
        }
        out
    }

    /// Matrix from degree `n` to degree `n + k` in Hall coordinates.
    pub fn matrix(&self, alg: &FreeLieAlgebra, n: i32) -> Matrix {
        let target = n + self.degree;
        let cols: Vec<_> = self.images.get(&n).map_or(Vec::new(), |imgs| imgs.iter().map(|e| e.dense(alg, target)).collect());
        Matrix::from_columns(alg.dim(target), &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(|v| v.iter().all(LieElement::is_zero))
    }
}

/// Applies the derivation with the given generator values to `x` through the
/// tensor algebra. Letters without a value act as cycles. Needs no tabulation,
/// so it suits partially specified differentials.
pub fn derive_via_tensor(alg: &FreeLieAlgebra, degree: i32, values: &[LieElement], x: &LieElement) -> Result<LieElement> {
    let gens = alg.generators();
    let expanded: Vec<Tensor> = values.iter().map(|v| alg.expand(v)).collect();
    let mut out = Tensor::new();
    for (w, c) in alg.expand(x) {
        let mut prefix = 0i64;
        for (p, &l) in w.iter().enumerate() {
            if let Some(img) = expanded.get(l as usize) {
                let s = sign(degree as i64 * prefix);
                for (u, e) in img {
                    let word: Vec<_> = w[..p].iter().chain(u.iter()).chain(w[p + 1..].iter()).copied().collect();
                    if alg.word_degree(&word) <= alg.truncation() {
                        add_to(&mut out, &word, &(&c * e * &s));
                    }
                }
            }
            prefix += gens[l as usize].degree as i64;
        }
    }
    alg.decompose(&out)
}
