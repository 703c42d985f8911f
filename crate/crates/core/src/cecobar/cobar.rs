use std::collections::HashSet;
use std::sync::Arc;

use super::coalgebra::CDGCoalgebra;
use crate::error::{Error, Result};
use crate::freelie::{FreeDgl, FreeLieAlgebra, Generator, LieElement};
use crate::qlinalg::rational::{frac, int, sign};

/// Sign of the linear part: `d₀(s⁻¹c) = D0_SIGN · s⁻¹(dc)`.
const D0_SIGN: i64 = -1;

/// Generator name for `s⁻¹c`: `s_inv_` plus the name with non-identifier
/// characters replaced, disambiguated by position when needed.
fn desuspended_names(c: &CDGCoalgebra) -> Vec<String> {
    let mut seen = HashSet::new();
    (0..c.dim())
        .map(|i| {
            let clean: String =
                c.name(i).chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '_' { ch } else { '_' }).collect();
            let mut name = format!("s_inv_{clean}");
            if !seen.insert(name.clone()) {
                name = format!("{name}_{i}");
                seen.insert(name.clone());
            }
            name
        })
        .collect()
}

/// `𝓛(C) = (𝕃(s⁻¹C̄), d₀ + d₁)` truncated at `truncation(C) − 1`, with
/// `d₁(s⁻¹c) = ½ Σ (−1)^{|a_i|} [s⁻¹a_i, s⁻¹b_i]` over the stored terms of `Δ̄c`.
pub fn quillen_construction(c: &CDGCoalgebra) -> Result<FreeDgl> {
    if let Some(w) = c.cocommutativity_witness() {
        return Err(Error::validation(format!("coalgebra is not cocommutative at `{w}`")));
    }
    if let Some(i) = (0..c.dim()).find(|&i| c.degree(i) < 2) {
        return Err(Error::validation(format!(
            "`{}` has degree {}; the reduced part must be concentrated in degrees >= 2",
            c.name(i),
            c.degree(i)
        )));
    }
    if c.truncation() < 2 {
        return Err(Error::truncation("coalgebra truncation must be >= 2"));
    }
    let names = desuspended_names(c);
    let gens = (0..c.dim()).map(|i| Generator::new(names[i].clone(), c.degree(i) - 1)).collect();
    let alg = Arc::new(FreeLieAlgebra::new(gens, c.truncation() - 1)?);
    let half = frac(1, 2);
    let values = crate::par::map_range(0..c.dim(), |i| -> Result<LieElement> {
        let mut v = LieElement::zero();
        for (j, coef) in c.d(i) {
            v.add_scaled(&alg.gen(*j), &(coef * int(D0_SIGN)));
        }
        for t in c.reduced_coproduct(i) {
            let b = alg.bracket(&alg.gen(t.left), &alg.gen(t.right))?;
            v.add_scaled(&b, &(&half * &t.coef * sign(c.degree(t.left) as i64)));
        }
        Ok(v)
    });
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    FreeDgl::new(alg, values).map_err(|e| match e {
        Error::Invariant { what, witness } => Error::Invariant { what: format!("Quillen construction: {what}"), witness },
        e => e,
    })
}
