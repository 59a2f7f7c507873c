//! Rational cones and polytopes: facets by double description, faces of a
//! given codimension, lattice heights over facets, and Z-affine hulls.
//!
//! Support forms are normalized to be primitive on the cone's reference
//! lattice, which need not be all of `Z^m`. A form is stored as an integer
//! functional on the ambient space together with a positive denominator; its
//! values on the reference lattice are integers.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{denominator_lcm, rational_solve, IntMatrix, IntVector, Lattice, SaturatedFrame};

/// Primitive linear functional vanishing on one facet of a cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportForm {
    pub coeffs: IntVector,
    pub denom: BigInt,
}

impl SupportForm {
    fn normalized(coeffs: IntVector, denom: BigInt) -> SupportForm {
        let h = coeffs.content().gcd(&denom);
        if h.is_one() || h.is_zero() {
            return SupportForm { coeffs, denom };
        }
        SupportForm {
            coeffs: IntVector(coeffs.iter().map(|c| c / &h).collect()),
            denom: denom / h,
        }
    }

    pub fn eval(&self, v: &IntVector) -> BigRational {
        BigRational::new(self.coeffs.dot(v), self.denom.clone())
    }

    /// Value on a point of the reference lattice.
    pub fn value(&self, v: &IntVector) -> Result<BigInt> {
        let (q, r) = self.coeffs.dot(v).div_rem(&self.denom);
        if !r.is_zero() {
            return Err(Error::Membership(format!(
                "{v} is not in the reference lattice of the form {self}"
            )));
        }
        Ok(q)
    }

    pub fn vanishes_on(&self, v: &IntVector) -> bool {
        self.coeffs.dot(v).is_zero()
    }
}

impl fmt::Display for SupportForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.coeffs)
        } else {
            write!(f, "{}/{}", self.coeffs, self.denom)
        }
    }
}

/// A face, identified by the facets whose forms vanish on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub zero_form_indices: Vec<usize>,
    pub dim: usize,
    pub generator_indices: Vec<usize>,
}

/// The cone generated by integer vectors, with a reference lattice of the
/// same rank inside its linear span.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<IntVector>,
    lattice: Lattice,
    frame: SaturatedFrame,
    facets: Vec<SupportForm>,
    // facet normals in the coordinates of `frame`
    coord_forms: Vec<IntVector>,
    pointed: bool,
}

impl Cone {
    /// Cone over `generators`; `lattice` must span the same rational space.
    pub fn new(generators: Vec<IntVector>, lattice: Lattice) -> Result<Cone> {
        let ambient_dim = lattice.ambient_dim();
        let span = Lattice::from_vectors(&generators, ambient_dim)?;
        let frame = SaturatedFrame::of(&span);
        let d = frame.rank();
        if lattice.rank() != d || !lattice.basis_vectors().iter().all(|b| frame.in_span(b)) {
            return Err(Error::Structural(
                "reference lattice does not span the linear span of the cone".into(),
            ));
        }
        let coord_gens: Vec<IntVector> = generators.iter().map(|g| frame.coordinates(g)).collect();
        let mut rays = if d == 0 {
            Vec::new()
        } else {
            dual_extreme_rays(&coord_gens, d)
        };
        let mut forms: Vec<(SupportForm, IntVector)> = rays
            .drain(..)
            .map(|y| (frame.coords.transpose().left_mul_vec(&y), y))
            .map(|(amb, y)| {
                let g = lattice
                    .basis_vectors()
                    .iter()
                    .fold(BigInt::zero(), |acc, b| acc.gcd(&b.dot(&amb)));
                (SupportForm::normalized(amb, g), y)
            })
            .collect();
        forms.sort();
        let (facets, coord_forms): (Vec<_>, Vec<_>) = forms.into_iter().unzip();
        let pointed = d == 0 || rank_of(&coord_forms, d) == d;
        Ok(Cone {
            ambient_dim,
            generators,
            lattice,
            frame,
            facets,
            coord_forms,
            pointed,
        })
    }

    /// Cone whose reference lattice is the saturation of the span: `Z^m`
    /// intersected with the linear span of the generators.
    pub fn with_saturated_lattice(generators: Vec<IntVector>, ambient_dim: usize) -> Result<Cone> {
        let span = Lattice::from_vectors(&generators, ambient_dim)?;
        let sat = SaturatedFrame::of(&span).lattice();
        Cone::new(generators, sat)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.frame.rank()
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn facets(&self) -> &[SupportForm] {
        &self.facets
    }

    /// Integer functionals cutting out the linear span.
    pub fn equations(&self) -> Vec<IntVector> {
        self.frame.equations.transpose().row_vectors()
    }

    pub fn in_span(&self, v: &IntVector) -> bool {
        self.frame.in_span(v)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        v.len() == self.ambient_dim
            && self.in_span(v)
            && self.facets.iter().all(|f| !f.coeffs.dot(v).is_negative())
    }

    /// Indices of generators spanning extreme rays, one per ray.
    pub fn extreme_ray_indices(&self) -> Vec<usize> {
        if !self.pointed {
            return Vec::new();
        }
        let d = self.dim();
        let mut seen: BTreeSet<IntVector> = BTreeSet::new();
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let on: Vec<IntVector> = self
                .facets
                .iter()
                .zip(&self.coord_forms)
                .filter(|(f, _)| f.vanishes_on(g))
                .map(|(_, y)| y.clone())
                .collect();
            if rank_of(&on, d) + 1 == d && seen.insert(g.primitive()) {
                out.push(i);
            }
        }
        out
    }

    /// Generators on which all listed facet forms vanish.
    pub fn generators_on(&self, facet_indices: &[usize]) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| {
                facet_indices
                    .iter()
                    .all(|&f| self.facets[f].vanishes_on(&self.generators[g]))
            })
            .collect()
    }

    /// Facets whose forms vanish on all listed generators.
    pub fn facets_containing(&self, generator_indices: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| {
                generator_indices
                    .iter()
                    .all(|&g| self.facets[f].vanishes_on(&self.generators[g]))
            })
            .collect()
    }

    fn rank_of_generators(&self, idx: &[usize]) -> usize {
        let vs: Vec<IntVector> = idx.iter().map(|&i| self.generators[i].clone()).collect();
        rank_of(&vs, self.ambient_dim)
    }

    /// Checks that `face` is a face of this cone and returns its true dimension.
    pub fn verify_face(&self, face: &Face) -> Result<usize> {
        if face.zero_form_indices.iter().any(|&i| i >= self.facets.len()) {
            return Err(Error::Structural("face refers to an unknown facet".into()));
        }
        let gens = self.generators_on(&face.zero_form_indices);
        let closure = if gens.is_empty() && self.pointed {
            (0..self.facets.len()).collect()
        } else {
            self.facets_containing(&gens)
        };
        if closure != face.zero_form_indices {
            return Err(Error::Structural(
                "facet set is not the full vanishing set of a face".into(),
            ));
        }
        Ok(self.rank_of_generators(&gens))
    }
}

fn rank_of(vs: &[IntVector], cols: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vs, cols).expect("consistent shape").rank()
}

/// Extreme rays of `{y : a . y >= 0 for all rows a}` for a full-rank row set
/// in `Z^d`, by incremental double description.
fn dual_extreme_rays(rows: &[IntVector], d: usize) -> Vec<IntVector> {
    // Greedy choice of d independent rows.
    let mut basis: Vec<usize> = Vec::new();
    for (i, _) in rows.iter().enumerate() {
        let mut trial: Vec<IntVector> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if rank_of(&trial, d) == trial.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    assert_eq!(basis.len(), d, "rows must have full rank");

    let n = rows.len();
    let mut processed = vec![false; n];
    for &b in &basis {
        processed[b] = true;
    }
    let a_b: Vec<Vec<BigRational>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|e| BigRational::from_integer(e.clone())).collect())
        .collect();
    let mut rays: Vec<(IntVector, Vec<bool>)> = Vec::with_capacity(d);
    for j in 0..d {
        let e: Vec<BigRational> = (0..d)
            .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        let x = rational_solve(&a_b, &e).expect("basis rows are independent");
        let q = denominator_lcm(&x);
        let v = IntVector(x.iter().map(|xi| (xi * &q).to_integer()).collect()).primitive();
        let mut zeros = vec![false; n];
        for (k, &b) in basis.iter().enumerate() {
            zeros[b] = k != j;
        }
        rays.push((v, zeros));
    }

    for i in 0..n {
        if processed[i] {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(v, _)| rows[i].dot(v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_negative()).collect();
        let mut next: Vec<(IntVector, Vec<bool>)> = Vec::new();
        for (r, (v, z)) in rays.iter().enumerate() {
            if !vals[r].is_negative() {
                let mut z = z.clone();
                z[i] = vals[r].is_zero();
                next.push((v.clone(), z));
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common: Vec<bool> = (0..n).map(|k| rays[p].1[k] && rays[q].1[k]).collect();
                let count = common.iter().filter(|&&c| c).count();
                if count + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| {
                    r == p || r == q || !(0..n).all(|k| !common[k] || rays[r].1[k])
                });
                if !adjacent {
                    continue;
                }
                let v = &rays[q].0.scale(&vals[p]) + &rays[p].0.scale(&-&vals[q]);
                let mut z = common;
                z[i] = true;
                next.push((v.primitive(), z));
            }
        }
        processed[i] = true;
        rays = next;
    }
    rays.into_iter().map(|(v, _)| v).collect()
}

/// Facet support forms of `c`, primitive on its reference lattice.
pub fn facets(c: &Cone) -> Vec<SupportForm> {
    c.facets().to_vec()
}

/// All faces of codimension `codim`, ordered by their facet-index sets.
pub fn faces_of_codim(c: &Cone, codim: usize) -> Vec<Face> {
    let d = c.dim();
    if codim > d {
        return Vec::new();
    }
    if codim == 0 {
        return vec![Face {
            zero_form_indices: Vec::new(),
            dim: d,
            generator_indices: (0..c.generators().len()).collect(),
        }];
    }
    let nf = c.facets().len();
    let mut found: BTreeSet<Face> = BTreeSet::new();
    let mut combo: Vec<usize> = (0..codim).collect();
    if codim > nf {
        return Vec::new();
    }
    loop {
        let gens = c.generators_on(&combo);
        if c.rank_of_generators(&gens) == d - codim {
            let zero = if gens.is_empty() {
                (0..nf).collect()
            } else {
                c.facets_containing(&gens)
            };
            found.insert(Face {
                zero_form_indices: zero,
                dim: d - codim,
                generator_indices: gens,
            });
        }
        // next combination in lexicographic order
        let mut k = codim;
        loop {
            if k == 0 {
                return found.into_iter().collect();
            }
            k -= 1;
            if combo[k] < nf - codim + k {
                combo[k] += 1;
                for j in k + 1..codim {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Lattice height of `x` over the facet of `f`.
pub fn height(x: &IntVector, f: &SupportForm) -> Result<BigInt> {
    let h = f.value(x)?;
    if h.is_negative() {
        return Err(Error::NegativeHeight { height: h.to_string() });
    }
    Ok(h)
}

/// Z-affine hull of a point set: a base point and the lattice of directions.
pub fn z_affine_hull(points: &[IntVector]) -> Result<(IntVector, Lattice)> {
    let base = points
        .first()
        .cloned()
        .ok_or_else(|| Error::Degenerate("empty point list".into()))?;
    let diffs: Vec<IntVector> = points[1..].iter().map(|p| p - &base).collect();
    let dirs = Lattice::from_vectors(&diffs, base.len())?;
    Ok((base, dirs))
}

/// An integer functional positive on every nonzero point of the cone
/// generated by `gens`, or `None` when that cone is not pointed.
pub fn positive_grading(gens: &[IntVector], ambient_dim: usize) -> Result<Option<IntVector>> {
    let cone = Cone::with_saturated_lattice(gens.to_vec(), ambient_dim)?;
    if !cone.is_pointed() {
        return Ok(None);
    }
    if cone.dim() == 0 {
        return Ok(Some(IntVector::zeros(ambient_dim)));
    }
    let l = cone
        .facets()
        .iter()
        .fold(BigInt::one(), |acc, f| acc.lcm(&f.denom));
    let mut w = IntVector::zeros(ambient_dim);
    for f in cone.facets() {
        let k = &l / &f.denom;
        w = &w + &f.coeffs.scale(&k);
    }
    Ok(Some(w))
}

/// Parses `"p/q"` or `"p"` as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Polytope given by rational vertices; redundant points are dropped on
/// construction.
#[derive(Clone, Debug)]
pub struct RationalPolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<BigRational>>,
    cone: Cone,
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl RationalPolytope {
    pub fn new(points: Vec<Vec<BigRational>>) -> Result<RationalPolytope> {
        let ambient_dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Degenerate("polytope without points".into()))?;
        for p in &points {
            if p.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: p.len(),
                });
            }
        }
        let gens: Vec<IntVector> = points.iter().map(|p| homogenize(p)).collect();
        let cone = Cone::with_saturated_lattice(gens, ambient_dim + 1)?;
        let keep = cone.extreme_ray_indices();
        let vertices: Vec<Vec<BigRational>> = keep.iter().map(|&i| points[i].clone()).collect();
        let gens: Vec<IntVector> = keep.iter().map(|&i| cone.generators()[i].clone()).collect();
        let cone = Cone::with_saturated_lattice(gens, ambient_dim + 1)?;
        Ok(RationalPolytope {
            ambient_dim,
            vertices,
            cone,
        })
    }

    pub fn from_integer_points(points: &[IntVector]) -> Result<RationalPolytope> {
        RationalPolytope::new(
            points
                .iter()
                .map(|p| p.iter().map(|e| BigRational::from_integer(e.clone())).collect())
                .collect(),
        )
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(points: &[&[(i64, i64)]]) -> Result<RationalPolytope> {
        RationalPolytope::new(
            points
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    /// Dimension of the affine hull; zero for a point.
    pub fn dim(&self) -> usize {
        self.cone.dim() - 1
    }

    /// Cone over `P x {1}` in `Z^(m+1)`, with the saturated lattice.
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn is_lattice_polytope(&self) -> bool {
        polytope_denominator(self).is_one()
    }

    pub fn contains(&self, point: &[BigRational]) -> bool {
        point.len() == self.ambient_dim && self.cone.contains(&homogenize(point))
    }

    /// Coordinatewise bounds `(floor(k * min), ceil... )` of the dilate `kP`.
    pub fn integer_box(&self, k: &BigInt) -> Vec<(BigInt, BigInt)> {
        let k = BigRational::from_integer(k.clone());
        (0..self.ambient_dim)
            .map(|i| {
                let lo = self.vertices.iter().map(|v| &v[i] * &k).min().expect("nonempty");
                let hi = self.vertices.iter().map(|v| &v[i] * &k).max().expect("nonempty");
                (lo.ceil().to_integer(), hi.floor().to_integer())
            })
            .collect()
    }

    /// Translates by an integer vector.
    pub fn translate(&self, t: &IntVector) -> Result<RationalPolytope> {
        RationalPolytope::new(
            self.vertices
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(t.iter())
                        .map(|(a, b)| a + BigRational::from_integer(b.clone()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Embeds into a larger space, placing coordinates at `offset`.
    pub fn embed(&self, ambient_dim: usize, offset: usize) -> Result<RationalPolytope> {
        RationalPolytope::new(
            self.vertices
                .iter()
                .map(|v| {
                    let mut w = vec![BigRational::zero(); ambient_dim];
                    for (i, x) in v.iter().enumerate() {
                        w[offset + i] = x.clone();
                    }
                    w
                })
                .collect(),
        )
    }
}

/// `(q p, q)` for the least `q` clearing the denominators of `p`.
pub fn homogenize(p: &[BigRational]) -> IntVector {
    let q = denominator_lcm(p);
    let mut v: Vec<BigInt> = p.iter().map(|x| (x * &q).to_integer()).collect();
    v.push(q);
    IntVector(v)
}

/// Least common multiple of all vertex coordinate denominators.
pub fn polytope_denominator(p: &RationalPolytope) -> BigInt {
    p.vertices
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&denominator_lcm(v)))
}
