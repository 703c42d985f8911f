use std::collections::BTreeMap;

use crate::cecobar::{ce_construction, FiniteDgl, UNIT};
use crate::error::{Error, Result};
use crate::freelie::{DglMorphism, FreeDgl, LieElement};
use crate::qlinalg::{ChainComplex, ChainMap, GradedLinearMap, GradedVectorSpace, Homology, Matrix, Rational};

/// Rational homotopy read off a Lie model: `π_{k+1} ⊗ ℚ = H_k(L)`, with the
/// bracket induced on representative cycles.
#[derive(Clone, Debug)]
pub struct PiStar {
    dgl: FreeDgl,
    pub homology: Homology,
}

impl PiStar {
    /// `dim π_j ⊗ ℚ` keyed by `j`, nonzero entries only.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.homology.dims().into_iter().map(|(k, d)| (k + 1, d)).collect()
    }

    /// `dim H_k(L)` keyed by `k`, nonzero entries only.
    pub fn lie_dims(&self) -> BTreeMap<i32, usize> {
        self.homology.dims()
    }

    /// Largest `k` with `H_k(L)` computed exactly.
    pub fn max_degree(&self) -> i32 {
        self.homology.degrees.keys().next_back().copied().unwrap_or(0)
    }

    pub fn representative(&self, k: i32, i: usize) -> Option<LieElement> {
        let h = self.homology.degrees.get(&k)?;
        h.representatives.get(i).map(|v| LieElement::from_dense(k, v))
    }

    /// Class of `[r_i, r_j]` for representatives `r_i ∈ H_p`, `r_j ∈ H_q`, in
    /// the representative basis of `H_{p+q}`; `None` if `p + q` lies beyond
    /// the computed range.
    pub fn bracket(&self, p: i32, i: usize, q: i32, j: usize) -> Option<Vec<Rational>> {
        let (x, y) = (self.representative(p, i)?, self.representative(q, j)?);
        let h = self.homology.degrees.get(&(p + q))?;
        let z = self.dgl.algebra().bracket(&x, &y).ok()?;
        h.classify(&z.dense(self.dgl.algebra(), p + q))
    }
}

/// `H(L)` in degrees below the truncation, reported as `π_{*+1}`.
pub fn pi_star(dgl: &FreeDgl) -> PiStar {
    PiStar { dgl: dgl.clone(), homology: dgl.homology(dgl.truncation() - 1) }
}

/// `H_*(X) = sV ⊕ ℚ` for a minimal model: `1` in degree 0 and `s<name>` in
/// degree `|g| + 1` for every generator `g`.
pub fn h_star(minimal: &FreeDgl) -> Result<GradedVectorSpace> {
    if !minimal.is_minimal() {
        return Err(Error::validation("h_star needs a minimal model; minimalize first"));
    }
    let mut s = GradedVectorSpace::new();
    s.push(0, UNIT)?;
    for g in minimal.generators() {
        s.push(g.degree + 1, format!("s{}", g.name))?;
    }
    Ok(s)
}

/// Dimensions of `sH(V, d_V) ⊕ ℚ`, nonzero entries only.
pub fn suspended_linear_homology(dgl: &FreeDgl) -> BTreeMap<i32, usize> {
    let lin = dgl.linear_part();
    let top = lin.space().max_degree().unwrap_or(0);
    let mut out: BTreeMap<i32, usize> =
        lin.homology_dims(top).into_iter().filter(|(_, d)| *d > 0).map(|(k, d)| (k + 1, d)).collect();
    out.insert(0, 1);
    out
}

/// `(sV ⊕ ℚ, d̄)` with `d̄(sv) = −s(d_V v)` and `1` a cycle.
pub fn suspended_linear_complex(dgl: &FreeDgl) -> ChainComplex {
    let lin = dgl.linear_part();
    let mut space = GradedVectorSpace::new();
    space.push(0, UNIT).expect("fresh");
    for g in dgl.generators() {
        space.push(g.degree + 1, format!("s{}", g.name)).expect("unique names");
    }
    let mut mats = BTreeMap::new();
    for k in lin.space().degrees() {
        let m = lin.d(k);
        if !m.is_zero() {
            mats.insert(k + 1, m.scale(&-Rational::from_integer(1.into())));
        }
    }
    let map = GradedLinearMap::new(space.clone(), space, -1, mats).expect("shapes from the generator space");
    ChainComplex::new(map).expect("suspension of a differential")
}

/// `C⁎(𝕃_V) → (sV ⊕ ℚ, d̄)`: kills `Λ^{≥2}` and brackets, keeps `1` and `sv`.
pub fn ce_projection(dgl: &FreeDgl, truncation: i32) -> Result<ChainMap> {
    let ce = ce_construction(&FiniteDgl::from_free(dgl), truncation)?;
    let source = ce.chain_complex();
    let target = suspended_linear_complex(dgl);
    let mut mats = BTreeMap::new();
    for k in source.space().degrees() {
        let (sb, tb) = (source.space().basis(k), target.space().basis(k));
        if tb.is_empty() {
            continue;
        }
        let mut m = Matrix::zeros(tb.len(), sb.len());
        for (c, name) in sb.iter().enumerate() {
            if let Some(r) = tb.iter().position(|t| t == name) {
                m[(r, c)] = Rational::from_integer(1.into());
            }
        }
        mats.insert(k, m);
    }
    let map = GradedLinearMap::new(source.space().clone(), target.space().clone(), 0, mats)?;
    ChainMap::new(source, target, map)
}

/// `Q(φ)`: the generator component of a Lie representative.
pub fn lie_representative_linear_part(rep: &DglMorphism) -> GradedLinearMap {
    rep.linear_part()
}
