//! Affine monoids: construction, direct sums, identification quotients,
//! Hilbert bases and normality, and the splitting test for localizations
//! at a face.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{
    denominator_lcm, hnf, rational_solve, solve_nonneg_integral_graded, to_rational_vec,
    value_matrix_surjects, IntMatrix, IntVector, Lattice, SmithForm,
};
use crate::polycone::{Cone, Face};
use crate::series::TruncatedSeries;

/// Largest rank accepted by [`hilbert_basis`].
pub const MAX_HILBERT_RANK: usize = 6;
/// Largest number of extreme rays accepted by [`hilbert_basis`].
pub const MAX_HILBERT_RAYS: usize = 20;
const MAX_PARALLELEPIPED_POINTS: u64 = 200_000;

/// Finitely generated submonoid of `Z^m`.
#[derive(Clone, Debug)]
pub struct AffineMonoid {
    ambient_dim: usize,
    generators: Vec<IntVector>,
    group: Lattice,
    cone: Cone,
    rank: usize,
    grading: Option<IntVector>,
    normal: OnceLock<bool>,
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.generators == other.generators
    }
}

impl AffineMonoid {
    /// Monoid generated by `generators`; zeros and duplicates are dropped.
    pub fn new(generators: Vec<IntVector>, ambient_dim: usize) -> Result<AffineMonoid> {
        let mut seen = BTreeSet::new();
        let mut gens = Vec::new();
        for g in generators {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: g.len(),
                });
            }
            if !g.is_zero() && seen.insert(g.clone()) {
                gens.push(g);
            }
        }
        let group = Lattice::from_vectors(&gens, ambient_dim)?;
        let cone = Cone::new(gens.clone(), group.clone())?;
        let rank = group.rank();
        let grading = positive_grading_of(&cone);
        Ok(AffineMonoid {
            ambient_dim,
            generators: gens,
            group,
            cone,
            rank,
            grading,
            normal: OnceLock::new(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// The group `gp(M)` generated by the monoid.
    pub fn group(&self) -> &Lattice {
        &self.group
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// True iff 0 is the only unit.
    pub fn is_positive(&self) -> bool {
        self.cone.is_pointed()
    }

    /// A functional positive on all nonzero elements, when the monoid is positive.
    pub fn positive_grading(&self) -> Option<&IntVector> {
        self.grading.as_ref()
    }

    /// The last coordinate, as a functional.
    pub fn standard_grading(&self) -> IntVector {
        IntVector::unit(self.ambient_dim, self.ambient_dim - 1)
    }

    /// Normality, computed once and cached.
    pub fn is_normal(&self) -> Result<bool> {
        if let Some(&b) = self.normal.get() {
            return Ok(b);
        }
        let b = is_normal(self)?;
        Ok(*self.normal.get_or_init(|| b))
    }

    /// Exact membership test.
    pub fn contains(&self, v: &IntVector) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        if v.is_zero() {
            return Ok(true);
        }
        if !self.group.contains(v) || !self.cone.contains(v) {
            return Ok(false);
        }
        match &self.grading {
            Some(w) => Ok(solve_nonneg_integral_graded(&self.generators, v, w)?.is_some()),
            None => Err(Error::Unsupported(
                "membership in a monoid with nontrivial units".into(),
            )),
        }
    }

    /// Heights of `x` over all facets, in facet order.
    pub fn heights(&self, x: &IntVector) -> Result<Vec<BigInt>> {
        self.cone
            .facets()
            .iter()
            .map(|f| crate::polycone::height(x, f))
            .collect()
    }

    /// Elements grouped by degree `0..=n` under `w`, which must be positive
    /// on every generator.
    pub fn elements_by_degree(&self, w: &IntVector, n: usize) -> Result<Vec<BTreeSet<IntVector>>> {
        let degs = self.generator_degrees(w)?;
        let mut levels: Vec<BTreeSet<IntVector>> = vec![BTreeSet::new(); n + 1];
        levels[0].insert(IntVector::zeros(self.ambient_dim));
        for k in 1..=n {
            let mut level = BTreeSet::new();
            for (g, &d) in self.generators.iter().zip(&degs) {
                if d <= k {
                    for e in &levels[k - d] {
                        level.insert(e + g);
                    }
                }
            }
            levels[k] = level;
        }
        Ok(levels)
    }

    fn generator_degrees(&self, w: &IntVector) -> Result<Vec<usize>> {
        if w.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: w.len(),
            });
        }
        self.generators
            .iter()
            .map(|g| {
                let d = g.dot(w);
                if !d.is_positive() {
                    return Err(Error::precondition(
                        "positive grading",
                        format!("generator {g} has degree {d}"),
                    ));
                }
                d.to_usize()
                    .ok_or_else(|| Error::Resource(format!("degree {d} too large")))
            })
            .collect()
    }

    /// Hilbert function values `H(M, 0..=n)` under the grading `w`.
    pub fn hilbert_function(&self, w: &IntVector, n: usize) -> Result<Vec<BigInt>> {
        Ok(self
            .elements_by_degree(w, n)?
            .iter()
            .map(|l| BigInt::from(l.len()))
            .collect())
    }

    /// Univariate Hilbert series under `w`, truncated at `n`.
    pub fn hilbert_series(&self, w: &IntVector, n: usize) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::univariate(&self.hilbert_function(w, n)?))
    }

    /// Fine Hilbert series, graded and truncated by the last coordinate.
    pub fn fine_hilbert_series(&self, n: usize) -> Result<TruncatedSeries> {
        let w = self.standard_grading();
        let mut s = TruncatedSeries::zero(self.ambient_dim, n);
        for level in self.elements_by_degree(&w, n)? {
            for e in level {
                s.add_term(e, BigInt::one());
            }
        }
        Ok(s)
    }
}

fn positive_grading_of(cone: &Cone) -> Option<IntVector> {
    if !cone.is_pointed() {
        return None;
    }
    let l = cone
        .facets()
        .iter()
        .fold(BigInt::one(), |acc, f| acc.lcm(&f.denom));
    let mut w = IntVector::zeros(cone.ambient_dim());
    for f in cone.facets() {
        w = &w + &f.coeffs.scale(&(&l / &f.denom));
    }
    Some(w)
}

/// The monoid `M(A)` generated by the vectors `(a, 1)`.
pub fn monoid_over(points: &[IntVector]) -> Result<AffineMonoid> {
    let m = points
        .first()
        .map(IntVector::len)
        .ok_or_else(|| Error::Degenerate("empty point configuration".into()))?;
    let gens: Vec<IntVector> = points
        .iter()
        .map(|p| {
            if p.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: p.len(),
                });
            }
            Ok(p.concat(&IntVector::from_i64s(&[1])))
        })
        .collect::<Result<_>>()?;
    AffineMonoid::new(gens, m + 1)
}

/// Block embedding of `M` and `N` into `Z^(m+n)`.
pub fn direct_sum(m: &AffineMonoid, n: &AffineMonoid) -> Result<AffineMonoid> {
    let zm = IntVector::zeros(m.ambient_dim);
    let zn = IntVector::zeros(n.ambient_dim);
    let gens = m
        .generators
        .iter()
        .map(|g| g.concat(&zn))
        .chain(n.generators.iter().map(|g| zm.concat(g)))
        .collect();
    AffineMonoid::new(gens, m.ambient_dim + n.ambient_dim)
}

/// The image of `M` in `gp(M)/Z(x-y)`, coordinatized as `Z^(rank-1)`.
#[derive(Clone, Debug)]
pub struct IdentificationQuotient {
    pub source: AffineMonoid,
    pub x: IntVector,
    pub y: IntVector,
    pub image: AffineMonoid,
    /// Maps coordinates in the basis of `gp(M)` to coordinates of the image.
    pub projection: IntMatrix,
    // coordinate change u with u * coords(x - y) = +-e_0, and its inverse
    u: IntMatrix,
    u_inv: IntMatrix,
}

impl IdentificationQuotient {
    /// Image of an element of `gp(M)`.
    pub fn project(&self, v: &IntVector) -> Result<IntVector> {
        let c = self
            .source
            .group
            .coordinates(v)
            .ok_or_else(|| Error::Membership(format!("{v} is not in the group of the monoid")))?;
        Ok(self.projection.left_mul_vec(&IntVector(c)))
    }

    /// The functional induced on the image by `w`, if `w(x) = w(y)`.
    pub fn descend_functional(&self, w: &IntVector) -> Option<IntVector> {
        let t = IntVector(
            self.source
                .group
                .basis_vectors()
                .iter()
                .map(|b| b.dot(w))
                .collect(),
        );
        let h = self.u_inv.left_mul_vec(&t);
        if !h[0].is_zero() {
            return None;
        }
        Some(IntVector(h.0[1..].to_vec()))
    }

    /// Coordinate change on `gp(M)` putting `x - y` on the first axis.
    pub fn coordinate_change(&self) -> &IntMatrix {
        &self.u
    }
}

/// Identifies `x` and `y` in `M`.
pub fn quotient_by_identification(
    m: &AffineMonoid,
    x: &IntVector,
    y: &IntVector,
) -> Result<IdentificationQuotient> {
    if x == y {
        return Err(Error::Degenerate("x and y coincide".into()));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if !m.contains(v)? {
            return Err(Error::Membership(format!("{name} = {v} is not in the monoid")));
        }
    }
    let diff = x - y;
    let z = m
        .group
        .coordinates(&diff)
        .ok_or_else(|| Error::Internal("difference of members outside the group".into()))?;
    let z = IntVector(z);
    if !z.content().is_one() {
        return Err(Error::Torsion(format!(
            "x - y = {diff} is divisible by {} in the group of the monoid",
            z.content()
        )));
    }
    let r = m.rank;
    let col = IntMatrix::from_rows(&z.iter().map(|e| IntVector(vec![e.clone()])).collect::<Vec<_>>(), 1)?;
    let f = SmithForm::compute(&col);
    // row-vector convention: new coordinates are c * u^T
    let ut = f.u.transpose();
    let keep: Vec<usize> = (1..r).collect();
    let projection = ut.select_cols(&keep);
    let image_gens: Vec<IntVector> = m
        .generators
        .iter()
        .map(|g| {
            let c = m.group.coordinates(g).expect("generators lie in the group");
            projection.left_mul_vec(&IntVector(c))
        })
        .collect();
    let image = AffineMonoid::new(image_gens, r - 1)?;
    Ok(IdentificationQuotient {
        source: m.clone(),
        x: x.clone(),
        y: y.clone(),
        image,
        projection,
        u: f.u,
        u_inv: f.u_inv,
    })
}

/// Applies identifications one after another; each later pair is given in
/// the coordinates of the original monoid and projected along the way.
pub fn successive_identifications(
    m: &AffineMonoid,
    pairs: &[(IntVector, IntVector)],
) -> Result<Vec<IdentificationQuotient>> {
    let mut out: Vec<IdentificationQuotient> = Vec::new();
    let mut current = m.clone();
    for (x, y) in pairs {
        let (mut px, mut py) = (x.clone(), y.clone());
        for q in &out {
            px = q.project(&px)?;
            py = q.project(&py)?;
        }
        let q = quotient_by_identification(&current, &px, &py)?;
        current = q.image.clone();
        out.push(q);
    }
    Ok(out)
}

/// Intersection of `l` with the linear span of `c`.
fn lattice_in_span(c: &Cone, l: &Lattice) -> Result<Lattice> {
    let eqs = c.equations();
    let basis = l.basis_vectors();
    if eqs.is_empty() {
        return Ok(l.clone());
    }
    let mut be = IntMatrix::zeros(basis.len(), eqs.len());
    for (i, b) in basis.iter().enumerate() {
        for (j, e) in eqs.iter().enumerate() {
            be[(i, j)] = b.dot(e);
        }
    }
    let (h, u) = hnf(&be);
    let kernel: Vec<IntVector> = (0..h.rows())
        .filter(|&i| h.row(i).is_zero())
        .map(|i| l.point(u.row(i).entries()))
        .collect();
    Lattice::from_vectors(&kernel, l.ambient_dim())
}

/// The minimal generating set of `c ∩ l`, sorted lexicographically.
pub fn hilbert_basis(c: &Cone, l: &Lattice) -> Result<Vec<IntVector>> {
    if !c.is_pointed() {
        return Err(Error::Unsupported("Hilbert basis of a cone that is not pointed".into()));
    }
    if l.ambient_dim() != c.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: c.ambient_dim(),
            found: l.ambient_dim(),
        });
    }
    let d = c.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let lat = lattice_in_span(c, l)?;
    if lat.rank() != d {
        return Err(Error::Structural("lattice does not span the cone".into()));
    }
    if d > MAX_HILBERT_RANK {
        return Err(Error::Resource(format!("Hilbert basis in rank {d} exceeds {MAX_HILBERT_RANK}")));
    }
    let basis = lat.basis_vectors();
    let bt: Vec<Vec<_>> = (0..c.ambient_dim())
        .map(|i| basis.iter().map(|b| num_rational::BigRational::from_integer(b[i].clone())).collect())
        .collect();
    let rays: Vec<IntVector> = c
        .extreme_ray_indices()
        .into_iter()
        .map(|i| {
            let x = rational_solve(&bt, &to_rational_vec(&c.generators()[i]))
                .ok_or_else(|| Error::Internal("ray outside the span".into()))?;
            let q = denominator_lcm(&x);
            Ok(IntVector(x.iter().map(|e| (e * &q).to_integer()).collect()).primitive())
        })
        .collect::<Result<_>>()?;
    if rays.len() > MAX_HILBERT_RAYS {
        return Err(Error::Resource(format!(
            "Hilbert basis with {} extreme rays exceeds {MAX_HILBERT_RAYS}",
            rays.len()
        )));
    }
    let full = Cone::with_saturated_lattice(rays.clone(), d)?;
    let simplices = pulling_triangulation(&rays, (0..rays.len()).collect(), d)?;

    let mut candidates: BTreeSet<IntVector> = rays.iter().cloned().collect();
    let mut budget = MAX_PARALLELEPIPED_POINTS;
    for s in &simplices {
        let gens: Vec<IntVector> = s.iter().map(|&i| rays[i].clone()).collect();
        for p in parallelepiped_points(&gens, &mut budget)? {
            if !p.is_zero() {
                candidates.insert(p);
            }
        }
    }
    let w = positive_grading_of(&full).expect("pointed");
    let mut by_degree: Vec<(BigInt, IntVector)> =
        candidates.into_iter().map(|v| (v.dot(&w), v)).collect();
    by_degree.sort();
    let mut irreducible: Vec<IntVector> = Vec::new();
    for (i, (dh, h)) in by_degree.iter().enumerate() {
        let reducible = by_degree[..i]
            .iter()
            .any(|(dc, cand)| dc < dh && full.contains(&(h - cand)));
        if !reducible {
            irreducible.push(h.clone());
        }
    }
    let mut out: Vec<IntVector> = irreducible.iter().map(|c| lat.point(c.entries())).collect();
    out.sort();
    Ok(out)
}

/// Pulling triangulation of the cone over `idx` (a `k`-dimensional cone
/// whose generators are its extreme rays).
fn pulling_triangulation(rays: &[IntVector], idx: Vec<usize>, k: usize) -> Result<Vec<Vec<usize>>> {
    if idx.len() == k {
        return Ok(vec![idx]);
    }
    let sub: Vec<IntVector> = idx.iter().map(|&i| rays[i].clone()).collect();
    let cone = Cone::with_saturated_lattice(sub, rays[0].len())?;
    let apex = idx[0];
    let mut out = Vec::new();
    for f in cone.facets() {
        if f.vanishes_on(&rays[apex]) {
            continue;
        }
        let on: Vec<usize> = idx.iter().copied().filter(|&i| f.vanishes_on(&rays[i])).collect();
        for mut t in pulling_triangulation(rays, on, k - 1)? {
            t.insert(0, apex);
            out.push(t);
        }
    }
    Ok(out)
}

/// Lattice points of `{sum l_i g_i : 0 <= l_i < 1}` for linearly independent
/// integer rows `g_i` spanning `Q^d`.
fn parallelepiped_points(gens: &[IntVector], budget: &mut u64) -> Result<Vec<IntVector>> {
    let d = gens.len();
    let g = IntMatrix::from_rows(gens, d)?;
    let f = SmithForm::compute(&g);
    let diag: Vec<u64> = (0..d)
        .map(|i| f.s[(i, i)].to_u64().ok_or_else(|| Error::Resource("simplicial cone volume too large".into())))
        .collect::<Result<_>>()?;
    let count: u64 = diag.iter().product();
    if count > *budget {
        return Err(Error::Resource("too many fundamental parallelepiped points".into()));
    }
    *budget -= count;
    let gt: Vec<Vec<_>> = (0..d)
        .map(|i| gens.iter().map(|r| num_rational::BigRational::from_integer(r[i].clone())).collect())
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut a = vec![0u64; d];
    loop {
        let av = IntVector(a.iter().map(|&x| BigInt::from(x)).collect());
        let p = f.v_inv.left_mul_vec(&av);
        let lambda = rational_solve(&gt, &to_rational_vec(&p)).expect("independent rows");
        let mut point = p;
        for (li, gi) in lambda.iter().zip(gens) {
            let fl = li.floor().to_integer();
            if !fl.is_zero() {
                point = &point - &gi.scale(&fl);
            }
        }
        out.push(point);
        // odometer over prod [0, d_i)
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            a[i] += 1;
            if a[i] < diag[i] {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

/// True iff every Hilbert basis element of `(cone(M), gp(M))` lies in `M`.
pub fn is_normal(m: &AffineMonoid) -> Result<bool> {
    if !m.is_positive() {
        return Err(Error::Unsupported("normality test needs a positive monoid".into()));
    }
    for h in hilbert_basis(&m.cone, &m.group)? {
        if !m.contains(&h)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a normal monoid and a codimension-`n` face `g`: true iff exactly `n`
/// facets contain `g` and their forms map `gp(M)` onto `Z^n`.
pub fn localization_is_free(m: &AffineMonoid, g: &Face, n: usize) -> Result<bool> {
    let dim = m.cone.verify_face(g)?;
    if dim + n != m.rank {
        return Err(Error::Structural(format!(
            "face of dimension {dim} does not have codimension {n} in rank {}",
            m.rank
        )));
    }
    if g.zero_form_indices.len() != n {
        return Ok(false);
    }
    let basis = m.group.basis_vectors();
    let mut values = IntMatrix::zeros(basis.len(), n);
    for (i, b) in basis.iter().enumerate() {
        for (j, &fi) in g.zero_form_indices.iter().enumerate() {
            values[(i, j)] = m.cone.facets()[fi].value(b)?;
        }
    }
    Ok(value_matrix_surjects(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;
    use crate::polycone::faces_of_codim;

    fn prism() -> AffineMonoid {
        monoid_over(&[iv![0, 0, 0], iv![1, 0, 0], iv![0, 1, 0], iv![0, 0, 1], iv![1, 0, 1], iv![0, 1, 1]]).unwrap()
    }

    #[test]
    fn monoids_over_points() {
        let m = monoid_over(&[iv![0]]).unwrap();
        assert_eq!(m.generators(), &[iv![0, 1]]);
        assert_eq!(m.rank(), 1);
        let m = monoid_over(&[iv![-1], iv![0], iv![1], iv![2]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.group(), &Lattice::full(2));
        let p = prism();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.group(), &Lattice::full(4));
        assert_eq!(p.cone().facets().len(), 5);
    }

    #[test]
    fn direct_sums() {
        let z = AffineMonoid::new(vec![iv![1]], 1).unwrap();
        let s = direct_sum(&z, &z).unwrap();
        assert_eq!(s.generators(), &[iv![1, 0], iv![0, 1]]);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn membership() {
        let m = AffineMonoid::new(vec![iv![2, 0], iv![0, 1], iv![1, 1]], 2).unwrap();
        assert!(m.contains(&iv![3, 1]).unwrap());
        assert!(!m.contains(&iv![1, 0]).unwrap());
        assert!(!m.contains(&iv![-1, 2]).unwrap());
    }

    #[test]
    fn figure_chain_identifications() {
        let p = prism();
        let x = iv![0, 1, 1, 1];
        let y = iv![1, 0, 0, 1];
        let q = quotient_by_identification(&p, &x, &y).unwrap();
        assert_eq!(q.image.rank(), 3);
        assert_eq!(q.project(&x).unwrap(), q.project(&y).unwrap());
        assert!(q.project(&(&x - &y)).unwrap().is_zero());
        let w = q.descend_functional(&p.standard_grading()).unwrap();
        assert_eq!(q.image.hilbert_function(&w, 1).unwrap()[1], BigInt::from(5));
        let u = iv![0, 1, 0, 1];
        let v = iv![0, 0, 1, 1];
        let chain = successive_identifications(&p, &[(x, y), (u, v)]).unwrap();
        let last = &chain[1];
        assert_eq!(last.image.rank(), 2);
        let w2 = last.descend_functional(&w).unwrap();
        assert_eq!(last.image.hilbert_function(&w2, 1).unwrap()[1], BigInt::from(4));
    }

    #[test]
    fn identification_errors() {
        let m = AffineMonoid::new(vec![iv![1, 0], iv![0, 1]], 2).unwrap();
        assert!(matches!(quotient_by_identification(&m, &iv![2, 0], &iv![0, 2]), Err(Error::Torsion(_))));
        assert!(matches!(quotient_by_identification(&m, &iv![1, 0], &iv![1, 0]), Err(Error::Degenerate(_))));
        assert!(matches!(quotient_by_identification(&m, &iv![-1, 0], &iv![0, 1]), Err(Error::Membership(_))));
        let q = quotient_by_identification(&m, &iv![1, 0], &iv![0, 1]).unwrap();
        assert_eq!(q.image.rank(), 1);
        assert_eq!(q.image.generators().len(), 1);
    }

    #[test]
    fn hilbert_bases() {
        let orth = Cone::with_saturated_lattice(vec![iv![1, 0], iv![0, 1]], 2).unwrap();
        assert_eq!(hilbert_basis(&orth, &Lattice::full(2)).unwrap(), vec![iv![0, 1], iv![1, 0]]);
        let c = Cone::with_saturated_lattice(vec![iv![1, 0], iv![1, 2]], 2).unwrap();
        assert_eq!(hilbert_basis(&c, &Lattice::full(2)).unwrap(), vec![iv![1, 0], iv![1, 1], iv![1, 2]]);
        let sq = Cone::with_saturated_lattice(vec![iv![0, 0, 1], iv![1, 0, 1], iv![0, 1, 1], iv![1, 1, 1]], 3).unwrap();
        assert_eq!(hilbert_basis(&sq, &Lattice::full(3)).unwrap().len(), 4);
    }

    #[test]
    fn hilbert_basis_of_low_dimensional_cone() {
        // the half point (1/2, 1/2) gives the generator (1,1,2) in Z^3
        let c = Cone::with_saturated_lattice(vec![iv![1, 1, 2]], 3).unwrap();
        assert_eq!(hilbert_basis(&c, &Lattice::full(3)).unwrap(), vec![iv![1, 1, 2]]);
        let c = Cone::with_saturated_lattice(vec![iv![2, 2, 2]], 3).unwrap();
        assert_eq!(hilbert_basis(&c, &Lattice::full(3)).unwrap(), vec![iv![1, 1, 1]]);
    }

    #[test]
    fn normality_examples() {
        let m = AffineMonoid::new(vec![iv![1, 0, 0], iv![0, 1, 0], iv![1, 1, 2]], 3).unwrap();
        assert!(is_normal(&m).unwrap());
        let m = AffineMonoid::new(vec![iv![2, 0], iv![1, 1], iv![0, 2]], 2).unwrap();
        assert!(is_normal(&m).unwrap());
        let m = AffineMonoid::new(vec![iv![2], iv![3]], 1).unwrap();
        assert!(!is_normal(&m).unwrap());
        // gp has index 2, so (1,1) is not a group element and this is normal
        let m = AffineMonoid::new(vec![iv![1, 0], iv![1, 2]], 2).unwrap();
        assert!(is_normal(&m).unwrap());
        let m = AffineMonoid::new(vec![iv![3, 0], iv![2, 1], iv![0, 3]], 2).unwrap();
        assert!(!is_normal(&m).unwrap());
    }

    #[test]
    fn square_monoid_is_normal() {
        let m = monoid_over(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        assert!(is_normal(&m).unwrap());
        assert!(is_normal(&prism()).unwrap());
    }

    #[test]
    fn localizations() {
        let cube = monoid_over(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        for g in faces_of_codim(cube.cone(), 2) {
            assert!(localization_is_free(&cube, &g, 2).unwrap());
        }
        for g in faces_of_codim(cube.cone(), 1) {
            assert!(localization_is_free(&cube, &g, 1).unwrap());
        }
        let c = AffineMonoid::new(vec![iv![1, 0], iv![1, 1], iv![1, 2]], 2).unwrap();
        let apex = faces_of_codim(c.cone(), 2);
        assert_eq!(apex.len(), 1);
        assert!(!localization_is_free(&c, &apex[0], 2).unwrap());
        let bogus = Face {
            zero_form_indices: vec![0],
            dim: 0,
            generator_indices: vec![],
        };
        assert!(localization_is_free(&c, &bogus, 2).is_err());
    }

    #[test]
    fn hilbert_functions() {
        let sq = monoid_over(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        let h: Vec<i64> = sq
            .hilbert_function(&sq.standard_grading(), 4)
            .unwrap()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(h, vec![1, 4, 9, 16, 25]);
        let fine = sq.fine_hilbert_series(3).unwrap();
        assert!(fine.is_zero_one());
        assert_eq!(fine.specialize().coeffs(), sq.hilbert_function(&sq.standard_grading(), 3).unwrap());
    }
}
