use std::collections::BTreeMap;

use serde::Serialize;

use super::ce::ce_construction;
use super::cobar::quillen_construction;
use super::finite::FiniteDgl;
use crate::error::{Error, Result};

/// Per-degree comparison of `H(𝓛C⁎(L))` with `H(L)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub truncation: i32,
    pub cutoff: i32,
    pub lie: BTreeMap<i32, usize>,
    pub cobar: BTreeMap<i32, usize>,
    pub agrees: bool,
    pub first_mismatch: Option<i32>,
}

/// Compares homology dimensions through degree `truncation − 2`.
///
/// `L` must be exact through degree `truncation − 1`; `C⁎(L)` is built in
/// degrees `<= truncation` and `𝓛C⁎(L)` is exact through `truncation − 1`.
pub fn adjunction_homology_check(l: &FiniteDgl, truncation: i32) -> Result<AdjunctionReport> {
    let cutoff = truncation - 2;
    if cutoff < 1 {
        return Err(Error::truncation(format!(
            "truncation {truncation} leaves no degree to compare (need >= 3)"
        )));
    }
    let c = ce_construction(l, truncation)?;
    let cobar = quillen_construction(&c)?;
    let lie_h = l.chain_complex().homology_dims(cutoff);
    let cobar_h = cobar.homology_dims(cutoff);
    let lie: BTreeMap<i32, usize> = (1..=cutoff).map(|k| (k, lie_h.get(&k).copied().unwrap_or(0))).collect();
    let cobar: BTreeMap<i32, usize> = (1..=cutoff).map(|k| (k, cobar_h.get(&k).copied().unwrap_or(0))).collect();
    let first_mismatch = (1..=cutoff).find(|k| lie[k] != cobar[k]);
    Ok(AdjunctionReport { truncation, cutoff, lie, cobar, agrees: first_mismatch.is_none(), first_mismatch })
}
