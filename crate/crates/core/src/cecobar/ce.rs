use std::collections::BTreeMap;

use num_traits::Zero;

use super::coalgebra::{CDGCoalgebra, CoTerm};
use super::finite::{FiniteDgl, Sparse};
use crate::error::{Error, Result};
use crate::par;
use crate::qlinalg::rational::{int, sign_i};
use crate::qlinalg::Rational;

/// Knobs for [`ce_construction_with`]; the default is the correct construction.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CeOptions {
    /// Drop the `(−1)^{|x_i|+1}` factor of `d₁` (mutation testing only).
    pub drop_bracket_sign: bool,
}

/// Word in `ΛsL`: basis indices of `L`, sorted; odd `sx` appear at most once.
type Mono = Vec<u32>;

struct Ce<'a> {
    l: &'a FiniteDgl,
    /// `|sx| = |x| + 1`
    sdeg: Vec<i64>,
}

impl Ce<'_> {
    fn mono_degree(&self, m: &[u32]) -> i32 {
        m.iter().map(|&i| self.sdeg[i as usize] as i32).sum()
    }

    /// Sorts a word, returning the Koszul sign, or `None` if it vanishes.
    fn normalize(&self, mut w: Vec<u32>) -> Option<(i64, Mono)> {
        let mut s = 1i64;
        for i in 1..w.len() {
            let mut j = i;
            while j > 0 && w[j - 1] > w[j] {
                s *= sign_i(self.sdeg[w[j - 1] as usize] * self.sdeg[w[j] as usize]);
                w.swap(j - 1, j);
                j -= 1;
            }
        }
        if w.windows(2).any(|p| p[0] == p[1] && self.sdeg[p[0] as usize] % 2 == 1) {
            return None;
        }
        Some((s, w))
    }

    fn enumerate(&self, max: i32) -> BTreeMap<i32, Vec<Mono>> {
        let mut out: BTreeMap<i32, Vec<Mono>> = BTreeMap::new();
        let mut stack: Vec<(Mono, i32)> = vec![(Vec::new(), 0)];
        while let Some((m, deg)) = stack.pop() {
            if !m.is_empty() {
                out.entry(deg).or_default().push(m.clone());
            }
            let start = m.last().map_or(0, |&l| if self.sdeg[l as usize] % 2 == 0 { l } else { l + 1 });
            for i in start..self.l.dim() as u32 {
                let d = deg + self.sdeg[i as usize] as i32;
                if d <= max {
                    let mut next = m.clone();
                    next.push(i);
                    stack.push((next, d));
                }
            }
        }
        for v in out.values_mut() {
            v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        }
        out
    }

    fn name(&self, m: &[u32]) -> String {
        m.iter().map(|&i| format!("s{}", self.l.name(i as usize))).collect::<Vec<_>>().join("∧")
    }

    fn differential(&self, m: &[u32], opts: CeOptions) -> BTreeMap<Mono, Rational> {
        let mut acc: BTreeMap<Mono, Rational> = BTreeMap::new();
        let mut push = |w: Vec<u32>, c: Rational| {
            if let Some((s, w)) = self.normalize(w) {
                let e = acc.entry(w).or_insert_with(Rational::zero);
                *e += c * int(s);
            }
        };
        let degs: Vec<i64> = m.iter().map(|&i| self.sdeg[i as usize]).collect();
        // d₀ = −Σ (−1)^{n_i} sx_1∧…∧s(dx_i)∧…
        let mut n_i = 0i64;
        for (p, &x) in m.iter().enumerate() {
            for (t, c) in self.l.d(x as usize) {
                let mut w = m.to_vec();
                w[p] = *t as u32;
                push(w, -c * int(sign_i(n_i)));
            }
            n_i += degs[p];
        }
        // d₁ = Σ_{i<j} (−1)^{|x_i|+1} (−1)^{n_ij} s[x_i,x_j]∧(rest)
        for i in 0..m.len() {
            let before_i: i64 = degs[..i].iter().sum();
            for j in i + 1..m.len() {
                let before_j: i64 = degs[..j].iter().sum::<i64>() - degs[i];
                let n_ij = degs[i] * before_i + degs[j] * before_j;
                let mut s = sign_i(n_ij);
                if !opts.drop_bracket_sign {
                    s *= sign_i(degs[i]);
                }
                let bracket: Sparse = self.l.bracket(m[i] as usize, m[j] as usize);
                for (t, c) in bracket {
                    let mut w = vec![t as u32];
                    w.extend(m.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &x)| x));
                    push(w, c * int(s));
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Reduced coproduct: proper nonempty position subsets, shuffle-signed.
    fn coproduct(&self, m: &[u32]) -> BTreeMap<(Mono, Mono), Rational> {
        let k = m.len();
        let mut acc: BTreeMap<(Mono, Mono), Rational> = BTreeMap::new();
        for mask in 1u32..(1 << k) - 1 {
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut exp = 0i64;
            let mut right_deg = 0i64;
            for (p, &x) in m.iter().enumerate() {
                let d = self.sdeg[x as usize];
                if mask & (1 << p) != 0 {
                    exp += d * right_deg;
                    left.push(x);
                } else {
                    right_deg += d;
                    right.push(x);
                }
            }
            *acc.entry((left, right)).or_insert_with(Rational::zero) += int(sign_i(exp));
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }
}

/// `C⁎(L) = (ΛsL, d₀ + d₁)` in degrees `<= truncation`.
///
/// Exact provided `L` is exact through degree `truncation − 1`.
pub fn ce_construction(l: &FiniteDgl, truncation: i32) -> Result<CDGCoalgebra> {
    ce_construction_with(l, truncation, CeOptions::default())
}

#[doc(hidden)]
pub fn ce_construction_with(l: &FiniteDgl, truncation: i32, opts: CeOptions) -> Result<CDGCoalgebra> {
    if truncation < 1 {
        return Err(Error::truncation(format!("CE truncation must be >= 1, got {truncation}")));
    }
    let ce = Ce { l, sdeg: l.degrees().iter().map(|&d| d as i64 + 1).collect() };
    let monos: Vec<Mono> = ce.enumerate(truncation).into_values().flatten().collect();
    let index: BTreeMap<&Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = par::map(&monos, |m| (ce.differential(m, opts), ce.coproduct(m)));
    let mut coproduct = Vec::with_capacity(monos.len());
    let mut differential = Vec::with_capacity(monos.len());
    for (d, delta) in rows {
        let mut dv: Sparse = d.into_iter().map(|(w, c)| (index[&w], c)).collect();
        dv.sort_by_key(|(i, _)| *i);
        differential.push(dv);
        coproduct.push(
            delta
                .into_iter()
                .map(|((a, b), coef)| CoTerm { coef, left: index[&a], right: index[&b] })
                .collect(),
        );
    }
    let basis = monos.iter().map(|m| (ce.name(m), ce.mono_degree(m))).collect();
    CDGCoalgebra::new(basis, coproduct, differential, truncation).map_err(|e| match e {
        Error::Invariant { what, witness } => {
            Error::Invariant { what: format!("CE construction: {what}"), witness }
        }
        e => e,
    })
}
