use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::barcode::{Bar, Barcode};
use crate::qlinalg::rational::{format_rational, parse_rational};
use crate::qlinalg::Rational;

/// Nonnegative rational or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(Rational),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Rational::zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Distance::Finite(r) => Some(r),
            Distance::Infinite => None,
        }
    }

    pub fn max(self, other: Distance) -> Distance {
        if self >= other { self } else { other }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(r) => f.write_str(&format_rational(r)),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text.trim() == "inf" {
            return Ok(Distance::Infinite);
        }
        parse_rational(&text).map(Distance::Finite).map_err(serde::de::Error::custom)
    }
}

/// Cost of matching two bars of the same degree.
pub fn match_cost(a: &Bar, b: &Bar) -> Distance {
    let db = (&a.birth - &b.birth).abs();
    match (&a.death, &b.death) {
        (None, None) => Distance::Finite(db),
        (Some(x), Some(y)) => Distance::Finite(db.max((x - y).abs())),
        _ => Distance::Infinite,
    }
}

/// Cost of leaving a bar unmatched: half its length.
pub fn deletion_cost(a: &Bar) -> Distance {
    match &a.death {
        None => Distance::Infinite,
        Some(d) => Distance::Finite((d - &a.birth) / Rational::from_integer(2.into())),
    }
}

/// Bottleneck distance between two bar multisets (all of one degree) via
/// threshold search over candidate costs with bipartite matching.
pub fn bottleneck(a: &[&Bar], b: &[&Bar]) -> Distance {
    let mut candidates: Vec<Rational> = vec![Rational::zero()];
    for x in a {
        for y in b {
            if let Distance::Finite(c) = match_cost(x, y) {
                candidates.push(c);
            }
        }
    }
    for x in a.iter().chain(b.iter()) {
        if let Distance::Finite(c) = deletion_cost(x) {
            candidates.push(c);
        }
    }
    candidates.sort();
    candidates.dedup();
    let feasible = |eps: &Rational| perfect_matching_exists(a, b, &Distance::Finite(eps.clone()));
    if !candidates.last().is_some_and(&feasible) {
        return Distance::Infinite;
    }
    // smallest feasible candidate; feasibility is monotone in ε
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Distance::Finite(candidates[lo].clone())
}

/// Left vertices: `a` then diagonal copies of `b`; right vertices: `b` then
/// diagonal copies of `a`.
fn perfect_matching_exists(a: &[&Bar], b: &[&Bar], eps: &Distance) -> bool {
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..na {
        for j in 0..nb {
            if &match_cost(a[i], b[j]) <= eps {
                adj[i].push(j);
            }
        }
        if &deletion_cost(a[i]) <= eps {
            adj[i].push(nb + i);
        }
    }
    for j in 0..nb {
        if &deletion_cost(b[j]) <= eps {
            adj[na + j].push(j);
        }
        adj[na + j].extend((0..na).map(|i| nb + i));
    }
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, &adj, &mut seen, &mut match_right) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none_or(|w| augment(w, adj, seen, match_right)) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// Bottleneck distance by enumerating every partial matching. Exponential;
/// meant for cross-checking on small inputs.
pub fn bottleneck_exhaustive(a: &[&Bar], b: &[&Bar]) -> Distance {
    fn go(i: usize, a: &[&Bar], b: &[&Bar], used: &mut Vec<bool>, cost: Distance, best: &mut Distance) {
        if cost >= *best {
            return;
        }
        if i == a.len() {
            let mut c = cost;
            for (j, y) in b.iter().enumerate() {
                if !used[j] {
                    c = c.max(deletion_cost(y));
                }
            }
            if c < *best {
                *best = c;
            }
            return;
        }
        go(i + 1, a, b, used, cost.clone().max(deletion_cost(a[i])), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(i + 1, a, b, used, cost.clone().max(match_cost(a[i], b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = Distance::Infinite;
    let mut used = vec![false; b.len()];
    go(0, a, b, &mut used, Distance::zero(), &mut best);
    best
}

/// Which matching solver [`interleaving_distance_with`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Bipartite,
    Exhaustive,
    /// Exhaustive when both sides of a degree have at most
    /// [`EXHAUSTIVE_LIMIT`] bars in total, bipartite otherwise.
    Auto,
}

pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Interleaving distance of interval-decomposable graded modules: the
/// maximum over degrees of the bottleneck distance.
pub fn interleaving_distance(a: &Barcode, b: &Barcode) -> Distance {
    interleaving_distance_with(a, b, Solver::Auto)
}

pub fn interleaving_distance_with(a: &Barcode, b: &Barcode, solver: Solver) -> Distance {
    let degrees: Vec<i32> = a.degrees().union(&b.degrees()).copied().collect();
    let per = crate::par::map(&degrees, |&k| {
        let (x, y) = (a.in_degree(k), b.in_degree(k));
        let exhaustive = match solver {
            Solver::Bipartite => false,
            Solver::Exhaustive => true,
            Solver::Auto => x.len() + y.len() <= EXHAUSTIVE_LIMIT,
        };
        if exhaustive { bottleneck_exhaustive(&x, &y) } else { bottleneck(&x, &y) }
    });
    per.into_iter().fold(Distance::zero(), Distance::max)
}
