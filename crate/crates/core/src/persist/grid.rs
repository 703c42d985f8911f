use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::qlinalg::Rational;

/// Strictly increasing, nonempty list of critical values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid(Vec<Rational>);

#[derive(Serialize, Deserialize)]
struct GridRepr(#[serde(with = "io::rational_vec")] Vec<Rational>);

impl TryFrom<GridRepr> for Grid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.0)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr(g.0)
    }
}

impl Grid {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("grid needs at least one value"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("grid values must increase strictly"));
        }
        Ok(Grid(values))
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> &Rational {
        &self.0[0]
    }

    /// Index of the largest grid value `<= t`; `None` below the grid.
    pub fn index_at(&self, t: &Rational) -> Option<usize> {
        self.0.partition_point(|v| v <= t).checked_sub(1)
    }

    /// Every value translated by `−delta`.
    pub fn shifted(&self, delta: &Rational) -> Grid {
        Grid(self.0.iter().map(|v| v - delta).collect())
    }
}
