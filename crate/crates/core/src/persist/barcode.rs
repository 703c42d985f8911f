use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::category::GrVec;
use super::grid::Grid;
use super::module::PersistenceModule;
use crate::error::{Error, Result};
use crate::io;
use crate::qlinalg::rational::format_rational;
use crate::qlinalg::{GradedLinearMap, GradedVectorSpace, Matrix, Rational};

/// Half-open interval `[birth, death)` in one degree; `death = None` is `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bar {
    pub degree: i32,
    #[serde(with = "io::rational")]
    pub birth: Rational,
    #[serde(with = "io::rational_or_inf")]
    pub death: Option<Rational>,
}

impl Bar {
    pub fn new(degree: i32, birth: Rational, death: Option<Rational>) -> Result<Self> {
        if let Some(d) = &death {
            if d <= &birth {
                return Err(Error::validation(format!("bar needs birth < death, got [{birth}, {d})")));
            }
        }
        Ok(Bar { degree, birth, death })
    }

    pub fn finite(degree: i32, birth: i64, death: i64) -> Self {
        Bar::new(degree, Rational::from_integer(birth.into()), Some(Rational::from_integer(death.into())))
            .expect("birth < death")
    }

    pub fn infinite(degree: i32, birth: i64) -> Self {
        Bar { degree, birth: Rational::from_integer(birth.into()), death: None }
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// `(degree, birth, death)` with `∞` after every finite death.
    fn key(&self) -> (i32, &Rational, bool, Option<&Rational>) {
        (self.degree, &self.birth, self.death.is_none(), self.death.as_ref())
    }
}

impl PartialOrd for Bar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let death = self.death.as_ref().map_or("inf".to_string(), format_rational);
        write!(f, "({}, {}, {})", self.degree, format_rational(&self.birth), death)
    }
}

/// Sorted multiset of bars.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort();
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn degrees(&self) -> BTreeSet<i32> {
        self.bars.iter().map(|b| b.degree).collect()
    }

    pub fn in_degree(&self, k: i32) -> Vec<&Bar> {
        self.bars.iter().filter(|b| b.degree == k).collect()
    }

    /// Relabels degree `k` as `k + by`.
    pub fn shift_degrees(&self, by: i32) -> Barcode {
        Barcode::new(self.bars.iter().map(|b| Bar { degree: b.degree + by, ..b.clone() }).collect())
    }

    /// Keeps degrees `<= max`.
    pub fn up_to_degree(&self, max: i32) -> Barcode {
        Barcode { bars: self.bars.iter().filter(|b| b.degree <= max).cloned().collect() }
    }

    pub fn merged(&self, other: &Barcode) -> Barcode {
        Barcode::new(self.bars.iter().chain(other.bars.iter()).cloned().collect())
    }

    /// Number of bars in degree `k` alive on all of `[s, t]`: the rank of
    /// the structure map `s ≤ t` of the interval decomposition.
    pub fn rank(&self, k: i32, s: &Rational, t: &Rational) -> usize {
        self.bars
            .iter()
            .filter(|b| b.degree == k && &b.birth <= s && b.death.as_ref().is_none_or(|d| t < d))
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,birth,death\n");
        for b in &self.bars {
            let death = b.death.as_ref().map_or("inf".to_string(), format_rational);
            out.push_str(&format!("{},{},{}\n", b.degree, format_rational(&b.birth), death));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Barcode> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "degree,birth,death" => {}
            other => return Err(Error::validation(format!("barcode CSV header expected, got {other:?}"))),
        }
        let mut bars = Vec::new();
        for (n, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [deg, birth, death] = fields[..] else {
                return Err(Error::validation(format!("barcode CSV line {}: expected 3 fields", n + 2)));
            };
            let degree = deg.parse().map_err(|_| Error::parse(deg, "degree must be an integer"))?;
            let birth = crate::qlinalg::rational::parse_rational(birth)?;
            let death = if death == "inf" { None } else { Some(crate::qlinalg::rational::parse_rational(death)?) };
            bars.push(Bar::new(degree, birth, death)?);
        }
        Ok(Barcode::new(bars))
    }

    pub fn to_compact_string(&self) -> String {
        self.bars.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Interval decomposition of a graded-vector-space module by
/// inclusion–exclusion on the ranks `r(i, j)` of the maps `t_i ≤ t_j`.
pub fn barcode(module: &PersistenceModule<GrVec>) -> Barcode {
    let objects = module.objects();
    let grid = module.grid().values();
    let m = grid.len();
    let degrees: BTreeSet<i32> = objects.iter().flat_map(|o| o.degrees().collect::<Vec<_>>()).collect();
    let degrees: Vec<i32> = degrees.into_iter().collect();
    let per_degree = crate::par::map(&degrees, |&k| {
        // r[i][j] for j >= i; r[i][m] = 0 (past the last value nothing dies)
        let mut r = vec![vec![0i64; m + 1]; m];
        for i in 0..m {
            let mut acc = Matrix::identity(objects[i].dim(k));
            r[i][i] = objects[i].dim(k) as i64;
            for j in i + 1..m {
                acc = module.maps()[j - 1].matrix(k).mul(&acc);
                r[i][j] = acc.rank() as i64;
            }
        }
        let rank = |i: isize, j: usize| -> i64 { if i < 0 { 0 } else { r[i as usize][j] } };
        let mut bars = Vec::new();
        for i in 0..m {
            for j in i + 1..=m {
                let ii = i as isize;
                let mu = rank(ii, j - 1) - rank(ii, j) - rank(ii - 1, j - 1) + rank(ii - 1, j);
                debug_assert!(mu >= 0, "negative interval multiplicity");
                let death = (j < m).then(|| grid[j].clone());
                for _ in 0..mu.max(0) {
                    bars.push(Bar { degree: k, birth: grid[i].clone(), death: death.clone() });
                }
            }
        }
        bars
    });
    Barcode::new(per_degree.into_iter().flatten().collect())
}

/// JSON file wrapper for barcodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeFile {
    pub format_version: u32,
    pub name: String,
    /// `"pi"`, `"h"`, or a free label.
    pub kind: String,
    pub bars: Vec<Bar>,
}

impl BarcodeFile {
    pub fn new(name: impl Into<String>, kind: impl Into<String>, barcode: &Barcode) -> Self {
        BarcodeFile { format_version: io::FORMAT_VERSION, name: name.into(), kind: kind.into(), bars: barcode.bars.clone() }
    }

    pub fn barcode(&self) -> Barcode {
        Barcode::new(self.bars.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = io::from_json(text, "barcode")?;
        io::check_version(f.format_version, "barcode")?;
        for b in &f.bars {
            Bar::new(b.degree, b.birth.clone(), b.death.clone())?;
        }
        Ok(f)
    }
}

/// Per-degree dimension of the module at each grid point, reconstructed
/// from bars; used to cross-check decompositions.
pub fn dims_from_bars(barcode: &Barcode, grid: &[Rational]) -> BTreeMap<i32, Vec<usize>> {
    let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for k in barcode.degrees() {
        out.insert(k, grid.iter().map(|t| barcode.rank(k, t, t)).collect());
    }
    out
}

/// Direct sum of interval modules on `grid`. Every birth must be a grid
/// value and every finite death a grid value or lie past the last one.
pub fn interval_module(grid: &Grid, barcode: &Barcode) -> Result<PersistenceModule<GrVec>> {
    let values = grid.values();
    for b in barcode.bars() {
        if !values.contains(&b.birth) {
            return Err(Error::validation(format!("bar {b} is not born on a grid value")));
        }
        if let Some(d) = &b.death {
            if d <= values.last().expect("nonempty grid") && !values.contains(d) {
                return Err(Error::validation(format!("bar {b} does not die on a grid value")));
            }
        }
    }
    let alive = |b: &Bar, t: &Rational| &b.birth <= t && b.death.as_ref().is_none_or(|d| t < d);
    let objects: Vec<GradedVectorSpace> = values
        .iter()
        .map(|t| {
            GradedVectorSpace::from_basis(
                barcode.bars().iter().enumerate().filter(|(_, b)| alive(b, t)).map(|(i, b)| (b.degree, format!("b{i}"))),
            )
            .expect("bar indices are unique")
        })
        .collect();
    let mut maps = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        let (s, t) = (&objects[i], &objects[i + 1]);
        let mut mats = BTreeMap::new();
        for k in s.degrees() {
            let mut m = Matrix::zeros(t.dim(k), s.dim(k));
            for (c, name) in s.basis(k).iter().enumerate() {
                if let Some(r) = t.basis(k).iter().position(|n| n == name) {
                    m[(r, c)] = Rational::from_integer(1.into());
                }
            }
            mats.insert(k, m);
        }
        maps.push(GradedLinearMap::new(s.clone(), t.clone(), 0, mats)?);
    }
    PersistenceModule::new(GrVec, grid.clone(), objects, maps)
}
