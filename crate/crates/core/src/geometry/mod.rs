//! Exact rational geometry: linear programming, vertex-listed polytopes,
//! hulls and volumes in low dimension, and lattice-point counting.

pub mod hull;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod montecarlo;
pub mod polytope;

pub use hull::{exact_volume, hull_facets, ConvexHull, Facet, Volume};
pub use lattice::{count_lattice_points, fit_ehrhart, fit_ehrhart_default, EhrhartPoly};
pub use linalg::{affine_hull, affine_rank, AffineHull};
pub use lp::{lp_optimize, Constraint, LpOutcome, Sense};
pub use montecarlo::{monte_carlo_volume, McEstimate};
pub use polytope::{
    extreme_points, extreme_points_certified, membership, membership_batch, membership_in, Membership,
    PointStatus, VPolytope,
};

use crate::rational::{to_f64, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::ops::Index;

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoint(#[serde(with = "crate::rational::serde_q::vec")] pub Vec<Q>);

impl RationalPoint {
    pub fn new(coords: Vec<Q>) -> Self {
        RationalPoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalPoint(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dot(&self, other: &[Q]) -> Q {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn sub(&self, other: &RationalPoint) -> Vec<Q> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn scaled(&self, k: &Q) -> RationalPoint {
        RationalPoint(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn squared_distance(&self, other: &RationalPoint) -> Q {
        self.sub(other).iter().fold(Q::zero(), |acc, x| acc + x * x)
    }
}

impl Index<usize> for RationalPoint {
    type Output = Q;

    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl From<Vec<Q>> for RationalPoint {
    fn from(v: Vec<Q>) -> Self {
        RationalPoint(v)
    }
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}
