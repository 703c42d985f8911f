use std::collections::BTreeMap;

use super::LieModel;
use crate::error::{Error, Result};
use crate::freelie::{FreeDgl, FreeLieAlgebra, Generator};

/// `𝕃(v)` with `|v| = n − 1` and `d = 0`, the free Lie model of `Sⁿ`.
pub fn sphere_model(n: i32, truncation: i32) -> Result<LieModel> {
    sphere_model_named(n, "v", truncation)
}

pub fn sphere_model_named(n: i32, name: &str, truncation: i32) -> Result<LieModel> {
    if n <= 1 {
        return Err(Error::validation(format!("sphere dimension must be >= 2, got {n}")));
    }
    let alg = FreeLieAlgebra::new(vec![Generator::new(name, n - 1)], truncation)?;
    Ok(LieModel { dgl: FreeDgl::with_zero_differential(alg)?, provenance: format!("S^{n}") })
}

/// Closed form of `H(𝕃(v))` for `|v| = n − 1`, restricted to degrees below
/// `truncation`: one class `v`, plus `[v,v]` when `|v|` is odd.
pub fn sphere_homology_closed_form(n: i32, truncation: i32) -> BTreeMap<i32, usize> {
    let k = n - 1;
    let mut out = BTreeMap::new();
    if k < truncation {
        out.insert(k, 1);
    }
    if k % 2 == 1 && 2 * k < truncation {
        out.insert(2 * k, 1);
    }
    out
}
