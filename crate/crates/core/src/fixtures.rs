//! Small named configurations used by tests, the CLI and the acceptance run.

use crate::error::Result;
use crate::exactlat::IntVector;
use crate::iv;
use crate::monoid::{monoid_over, AffineMonoid};
use crate::polycone::RationalPolytope;

/// The two readings of the star-shaped simplex in the free sum counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PstarReading {
    /// `conv{-(1,1,1), e1+e2, e1+e3, e2+e3}`, 5 lattice points.
    Simplex,
    /// The same hull with `e1, e2, e3` listed as well, 8 lattice points.
    SevenPoints,
}

/// The segment `[0,1]`.
pub fn seg_points() -> Vec<IntVector> {
    vec![iv![0], iv![1]]
}

pub fn seg() -> Result<RationalPolytope> {
    RationalPolytope::from_integer_points(&seg_points())
}

/// The segment `[-1,2]`.
pub fn qseg_points() -> Vec<IntVector> {
    vec![iv![-1], iv![0], iv![1], iv![2]]
}

pub fn qseg() -> Result<RationalPolytope> {
    RationalPolytope::from_integer_points(&[iv![-1], iv![2]])
}

/// The two diagonals of the unit square.
pub fn diag() -> (Vec<IntVector>, Vec<IntVector>) {
    (vec![iv![1, 0], iv![0, 1]], vec![iv![0, 0], iv![1, 1]])
}

pub fn unit_square_points() -> Vec<IntVector> {
    vec![iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]
}

pub fn unit_square() -> Result<RationalPolytope> {
    RationalPolytope::from_integer_points(&unit_square_points())
}

/// Vertices of the prism `Δ² × Δ¹`.
pub fn prism_points() -> Vec<IntVector> {
    vec![iv![0, 0, 0], iv![1, 0, 0], iv![0, 1, 0], iv![0, 0, 1], iv![1, 0, 1], iv![0, 1, 1]]
}

pub fn prism_monoid() -> Result<AffineMonoid> {
    monoid_over(&prism_points())
}

/// First identification in the prism chain: `((0,1,1),1) ~ ((1,0,0),1)`.
pub fn prism_first_pair() -> (IntVector, IntVector) {
    (iv![0, 1, 1, 1], iv![1, 0, 0, 1])
}

/// Second identification, in the original coordinates.
pub fn prism_second_pair() -> (IntVector, IntVector) {
    (iv![0, 1, 0, 1], iv![0, 0, 1, 1])
}

/// Vertices of `[0,1]^3`.
pub fn cube_points() -> Vec<IntVector> {
    (0..8).map(|i| iv![i & 1, (i >> 1) & 1, (i >> 2) & 1]).collect()
}

pub fn cube_monoid() -> Result<AffineMonoid> {
    monoid_over(&cube_points())
}

/// `((1,1,0),1) + ((0,0,1),1) = (1,1,1,2)`.
pub fn cube_split() -> Vec<IntVector> {
    vec![iv![1, 1, 0, 1], iv![0, 0, 1, 1]]
}

pub fn pstar_points(reading: PstarReading) -> Vec<IntVector> {
    let mut pts = vec![iv![-1, -1, -1], iv![1, 1, 0], iv![1, 0, 1], iv![0, 1, 1]];
    if reading == PstarReading::SevenPoints {
        pts.extend([iv![1, 0, 0], iv![0, 1, 0], iv![0, 0, 1]]);
    }
    pts
}

pub fn pstar(reading: PstarReading) -> Result<RationalPolytope> {
    RationalPolytope::from_integer_points(&pstar_points(reading))
}

/// All lattice points of the star simplex, origin included.
pub fn pstar_lattice_points(reading: PstarReading) -> Vec<IntVector> {
    let mut pts = pstar_points(reading);
    pts.push(iv![0, 0, 0]);
    pts
}

/// `P` and `Q` placed in `R^4`: `P` in the first three coordinates and `Q`
/// on the fourth axis.
pub fn pstar_qseg(reading: PstarReading) -> Result<(RationalPolytope, RationalPolytope)> {
    Ok((pstar(reading)?.embed(4, 0)?, qseg()?.embed(4, 3)?))
}

/// Lattice point sets `A` and `B` of the embedded pair.
pub fn pstar_qseg_points(reading: PstarReading) -> (Vec<IntVector>, Vec<IntVector>) {
    let z = IntVector::zeros(1);
    let a = pstar_lattice_points(reading).iter().map(|p| p.concat(&z)).collect();
    let b = qseg_points()
        .iter()
        .map(|p| IntVector::zeros(3).concat(p))
        .collect();
    (a, b)
}
