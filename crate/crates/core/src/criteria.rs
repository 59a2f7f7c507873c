//! Checkers for primeness and normality of binomial quotients of affine
//! monoid algebras, and for the series factorizations of free sums.
//!
//! Every checker returns a [`Verdict`]: a list of named checks with JSON
//! witnesses. Checks whose name starts with `info:` are informational and do
//! not enter `holds`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ehrhart::fine_ehrhart_truncated;
use crate::error::{Error, Result};
use crate::exactlat::{
    denominator_lcm, is_unimodular_element, rational_solve, solve_integral, to_rational_vec,
    torsion_invariants, IntMatrix, IntVector, Lattice, SaturatedFrame,
};
use crate::monoid::{
    direct_sum, localization_is_free, monoid_over, quotient_by_identification, AffineMonoid,
    IdentificationQuotient,
};
use crate::polycone::{faces_of_codim, height, homogenize, polytope_denominator, z_affine_hull, Face, RationalPolytope, SupportForm};
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub checks: Vec<Check>,
}

impl Default for Verdict {
    fn default() -> Self {
        Verdict::new()
    }
}

impl Verdict {
    pub fn new() -> Self {
        Verdict {
            holds: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool, witness: Value) {
        let name = name.into();
        if !ok && !name.starts_with("info:") {
            self.holds = false;
        }
        self.checks.push(Check { name, ok, witness });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copies the checks of `other`, prefixing their names.
    fn absorb(&mut self, prefix: &str, other: &Verdict) {
        for c in &other.checks {
            let name = match c.name.strip_prefix("info:") {
                Some(rest) => format!("info:{prefix}:{rest}"),
                None => format!("{prefix}:{}", c.name),
            };
            self.push(name, c.ok, c.witness.clone());
        }
    }
}

/// How the normality of the input monoid is established.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormalityMode {
    /// Compute the Hilbert basis and test membership.
    #[default]
    Verify,
    /// Trust the caller; recorded in the verdict.
    Asserted,
}

/// Which heights may witness the subfacet condition of the normality test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairingMode {
    /// `ht(x, F') = 1` or `ht(y, F'') = 1`, where `F'` contains `y` and `F''`
    /// contains `x`.
    #[default]
    Proof,
    /// Any of the four heights of `x`, `y` over the two facets equals 1.
    Literal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub normality: NormalityMode,
    pub pairing: PairingMode,
    /// Truncation for series identities; `None` picks `max(12, q(d+2))`.
    pub truncation: Option<usize>,
}

pub(crate) fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub(crate) fn vec_json(v: &IntVector) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn ints_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn rational_json(q: &BigRational) -> Value {
    if q.is_integer() {
        int_json(q.numer())
    } else {
        json!(format!("{}/{}", q.numer(), q.denom()))
    }
}

fn form_json(index: usize, f: &SupportForm) -> Value {
    json!({"index": index, "coeffs": vec_json(&f.coeffs), "denom": int_json(&f.denom)})
}

fn face_json(m: &AffineMonoid, g: &Face) -> Value {
    json!({
        "facets": g.zero_form_indices,
        "dim": g.dim,
        "forms": g.zero_form_indices.iter().map(|&i| form_json(i, &m.cone().facets()[i])).collect::<Vec<_>>(),
    })
}

fn ensure_normal(m: &AffineMonoid, opts: &CheckOptions, v: &mut Verdict, label: &str) -> Result<()> {
    match opts.normality {
        NormalityMode::Asserted => {
            v.push(format!("info:normality_asserted{label}"), true, Value::Null);
            Ok(())
        }
        NormalityMode::Verify => {
            if m.is_normal()? {
                Ok(())
            } else {
                Err(Error::precondition(
                    "normal monoid",
                    format!("the monoid{label} is not normal; the criteria apply to normal monoids only"),
                ))
            }
        }
    }
}

/// Membership and non-invertibility of each element.
fn ensure_members(m: &AffineMonoid, xs: &[&IntVector]) -> Result<()> {
    for x in xs {
        if x.len() != m.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: m.ambient_dim(),
                found: x.len(),
            });
        }
        if x.is_zero() {
            return Err(Error::Unsupported(
                "the element 0 is a unit; sequences involving units are not handled".into(),
            ));
        }
        if !m.is_positive() {
            return Err(Error::Unsupported(
                "monoids with nontrivial units are not handled".into(),
            ));
        }
        if !m.contains(x)? {
            return Err(Error::Membership(format!("{x} is not in the monoid")));
        }
    }
    Ok(())
}

fn facet_cover(m: &AffineMonoid, x: &IntVector, y: &IntVector) -> Result<(bool, Value)> {
    let hx = m.heights(x)?;
    let hy = m.heights(y)?;
    for (i, f) in m.cone().facets().iter().enumerate() {
        if hx[i].is_positive() && hy[i].is_positive() {
            return Ok((
                false,
                json!({"facet": form_json(i, f), "height_x": int_json(&hx[i]), "height_y": int_json(&hy[i])}),
            ));
        }
    }
    Ok((true, json!({"facets": m.cone().facets().len()})))
}

/// Every facet of `cone(M)` contains `x` or `y`.
pub fn check_monomial_pair_regular(m: &AffineMonoid, x: &IntVector, y: &IntVector) -> Result<Verdict> {
    check_monomial_pair_regular_with(m, x, y, &CheckOptions::default())
}

pub fn check_monomial_pair_regular_with(
    m: &AffineMonoid,
    x: &IntVector,
    y: &IntVector,
    opts: &CheckOptions,
) -> Result<Verdict> {
    if x == y {
        return Err(Error::Degenerate("x and y coincide".into()));
    }
    let mut v = Verdict::new();
    ensure_normal(m, opts, &mut v, "")?;
    ensure_members(m, &[x, y])?;
    let (ok, w) = facet_cover(m, x, y)?;
    v.push("facet_cover", ok, w);
    Ok(v)
}

/// Facet cover plus torsionfreeness of `gp(M)/Z(x-y)`.
pub fn check_prime(m: &AffineMonoid, x: &IntVector, y: &IntVector) -> Result<Verdict> {
    check_prime_with(m, x, y, &CheckOptions::default())
}

pub fn check_prime_with(m: &AffineMonoid, x: &IntVector, y: &IntVector, opts: &CheckOptions) -> Result<Verdict> {
    let mut v = check_monomial_pair_regular_with(m, x, y, opts)?;
    let diff = x - y;
    let tors = torsion_invariants(m.group(), std::slice::from_ref(&diff))?;
    v.push(
        "torsionfree",
        tors.is_empty(),
        json!({"difference": vec_json(&diff), "torsion": ints_json(&tors)}),
    );
    Ok(v)
}

/// Pairwise facet cover and a torsionfree quotient by the rank `n-1`
/// group of differences.
pub fn check_prime_mult(m: &AffineMonoid, xs: &[IntVector]) -> Result<Verdict> {
    check_prime_mult_with(m, xs, &CheckOptions::default())
}

pub fn check_prime_mult_with(m: &AffineMonoid, xs: &[IntVector], opts: &CheckOptions) -> Result<Verdict> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::precondition("n >= 2", "need at least two elements"));
    }
    let mut v = Verdict::new();
    ensure_normal(m, opts, &mut v, "")?;
    ensure_members(m, &xs.iter().collect::<Vec<_>>())?;
    let heights: Vec<Vec<BigInt>> = xs.iter().map(|x| m.heights(x)).collect::<Result<_>>()?;
    let mut cover = (true, json!({"facets": m.cone().facets().len()}));
    'facets: for (i, f) in m.cone().facets().iter().enumerate() {
        let positive: Vec<usize> = (0..n).filter(|&j| heights[j][i].is_positive()).collect();
        if positive.len() > 1 {
            cover = (
                false,
                json!({
                    "facet": form_json(i, f),
                    "elements": positive,
                    "heights": (0..n).map(|j| int_json(&heights[j][i])).collect::<Vec<_>>(),
                }),
            );
            break 'facets;
        }
    }
    v.push("pairwise_facet_cover", cover.0, cover.1);
    let diffs: Vec<IntVector> = xs.windows(2).map(|w| &w[0] - &w[1]).collect();
    let rank = IntMatrix::from_rows(&diffs, m.ambient_dim())?.rank();
    v.push("differences_rank", rank + 1 == n, json!({"rank": rank, "expected": n - 1}));
    let tors = torsion_invariants(m.group(), &diffs)?;
    v.push("torsionfree", tors.is_empty(), json!({"torsion": ints_json(&tors)}));
    Ok(v)
}

fn on_face(m: &AffineMonoid, g: &Face, x: &IntVector) -> bool {
    g.zero_form_indices.iter().all(|&i| m.cone().facets()[i].vanishes_on(x))
}

/// Normality of `M/(x ~ y)` by the subfacet criterion.
pub fn check_normal_quotient(m: &AffineMonoid, x: &IntVector, y: &IntVector) -> Result<Verdict> {
    check_normal_quotient_with(m, x, y, &CheckOptions::default())
}

pub fn check_normal_quotient_with(
    m: &AffineMonoid,
    x: &IntVector,
    y: &IntVector,
    opts: &CheckOptions,
) -> Result<Verdict> {
    let prime = check_prime_with(m, x, y, opts)?;
    let mut v = Verdict::new();
    if !prime.holds {
        v.push("precondition:prime", false, serde_json::to_value(&prime).expect("serializable"));
        return Ok(v);
    }
    v.absorb("prime", &prime);
    v.push(
        "info:pairing",
        true,
        json!(match opts.pairing {
            PairingMode::Proof => "proof",
            PairingMode::Literal => "literal",
        }),
    );
    let facets = m.cone().facets();
    let mut free_fail: Option<Value> = None;
    let mut height_fail: Option<Value> = None;
    let mut examined = 0usize;
    for g in faces_of_codim(m.cone(), 2) {
        if on_face(m, &g, x) || on_face(m, &g, y) {
            continue;
        }
        examined += 1;
        if !localization_is_free(m, &g, 2)? {
            if free_fail.is_none() {
                free_fail = Some(face_json(m, &g));
            }
            continue;
        }
        let (f1, f2) = (g.zero_form_indices[0], g.zero_form_indices[1]);
        let h = |p: &IntVector, i: usize| height(p, &facets[i]);
        let (hx1, hx2, hy1, hy2) = (h(x, f1)?, h(x, f2)?, h(y, f1)?, h(y, f2)?);
        let ok = match opts.pairing {
            PairingMode::Literal => [&hx1, &hx2, &hy1, &hy2].iter().any(|t| t.is_one()),
            PairingMode::Proof => {
                // F' is the facet containing y, F'' the one containing x
                let (fp, fpp) = if hy1.is_zero() { (f1, f2) } else { (f2, f1) };
                if !facets[fp].vanishes_on(y) || !facets[fpp].vanishes_on(x) {
                    return Err(Error::Internal(
                        "subfacet incidence contradicts the facet cover".into(),
                    ));
                }
                h(x, fp)?.is_one() || h(y, fpp)?.is_one()
            }
        };
        if !ok && height_fail.is_none() {
            let mut w = face_json(m, &g);
            w["heights"] = json!({
                "x": [int_json(&hx1), int_json(&hx2)],
                "y": [int_json(&hy1), int_json(&hy2)],
            });
            height_fail = Some(w);
        }
    }
    let summary = json!({"subfacets_examined": examined});
    v.push("localization_free", free_fail.is_none(), free_fail.unwrap_or_else(|| summary.clone()));
    v.push("height_one", height_fail.is_none(), height_fail.unwrap_or(summary));
    Ok(v)
}

/// Normality of `M/(x_1 ~ ... ~ x_n)` by the codimension-`n` face criterion.
pub fn check_normal_mult(m: &AffineMonoid, xs: &[IntVector]) -> Result<Verdict> {
    check_normal_mult_with(m, xs, &CheckOptions::default())
}

pub fn check_normal_mult_with(m: &AffineMonoid, xs: &[IntVector], opts: &CheckOptions) -> Result<Verdict> {
    let prime = check_prime_mult_with(m, xs, opts)?;
    let mut v = Verdict::new();
    if !prime.holds {
        v.push("precondition:prime_mult", false, serde_json::to_value(&prime).expect("serializable"));
        return Ok(v);
    }
    v.absorb("prime_mult", &prime);
    let n = xs.len();
    let facets = m.cone().facets();
    let mut free_fail: Option<Value> = None;
    let mut height_fail: Option<Value> = None;
    let mut all_one_fail: Option<Value> = None;
    let mut examined = 0usize;
    for g in faces_of_codim(m.cone(), n) {
        if xs.iter().any(|x| on_face(m, &g, x)) {
            continue;
        }
        examined += 1;
        if !localization_is_free(m, &g, n)? {
            if free_fail.is_none() {
                free_fail = Some(face_json(m, &g));
            }
            continue;
        }
        let table: Vec<Vec<BigInt>> = g
            .zero_form_indices
            .iter()
            .map(|&i| xs.iter().map(|x| height(x, &facets[i])).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let nonzero: Vec<&BigInt> = table.iter().flatten().filter(|h| !h.is_zero()).collect();
        let ones = nonzero.iter().filter(|h| h.is_one()).count();
        let mut w = face_json(m, &g);
        w["heights"] = Value::Array(table.iter().map(|r| ints_json(r)).collect());
        if ones + 1 < n && height_fail.is_none() {
            height_fail = Some(w.clone());
        }
        if ones < nonzero.len() && all_one_fail.is_none() {
            all_one_fail = Some(w);
        }
    }
    let summary = json!({"faces_examined": examined});
    v.push("localization_free", free_fail.is_none(), free_fail.unwrap_or_else(|| summary.clone()));
    v.push("heights_one_but_one", height_fail.is_none(), height_fail.unwrap_or_else(|| summary.clone()));
    v.push("info:all_heights_one", all_one_fail.is_none(), all_one_fail.unwrap_or(summary));
    Ok(v)
}

/// Identifies `x` in `M` with `y` in `N` inside `M ⊕ N` and decides
/// normality of the result from the heights of `x` and `y`.
pub fn identified_sum(
    m: &AffineMonoid,
    n: &AffineMonoid,
    x: &IntVector,
    y: &IntVector,
) -> Result<(IdentificationQuotient, Verdict)> {
    identified_sum_with(m, n, x, y, &CheckOptions::default())
}

pub fn identified_sum_with(
    m: &AffineMonoid,
    n: &AffineMonoid,
    x: &IntVector,
    y: &IntVector,
    opts: &CheckOptions,
) -> Result<(IdentificationQuotient, Verdict)> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::Degenerate("x and y are both zero".into()));
    }
    let mut v = Verdict::new();
    ensure_normal(m, opts, &mut v, " M")?;
    ensure_normal(n, opts, &mut v, " N")?;
    for (mon, p, name) in [(m, x, "x"), (n, y, "y")] {
        if !mon.contains(p)? {
            return Err(Error::Membership(format!("{name} = {p} is not in its monoid")));
        }
    }
    let s = direct_sum(m, n)?;
    let bx = x.concat(&IntVector::zeros(n.ambient_dim()));
    let by = IntVector::zeros(m.ambient_dim()).concat(y);
    let diff = &bx - &by;
    let unimodular = is_unimodular_element(&diff, s.group())?;
    v.push("unimodular", unimodular, json!({"difference": vec_json(&diff)}));
    if let (Some(dx), Some(dy)) = (x.last(), y.last()) {
        let g = dx.gcd(dy);
        v.push(
            "info:degree_pair_unimodular",
            g.is_one(),
            json!({"degrees": [int_json(dx), int_json(dy)]}),
        );
    }
    let q = quotient_by_identification(&s, &bx, &by)?;
    let hm = m.heights(x)?;
    let hn = n.heights(y)?;
    let le1 = |h: &[BigInt]| h.iter().all(|t| t <= &BigInt::one());
    v.push("info:heights_x_le_1", le1(&hm), ints_json(&hm));
    v.push("info:heights_y_le_1", le1(&hn), ints_json(&hn));
    v.push(
        "normal_side",
        le1(&hm) || le1(&hn),
        json!({"heights_x": ints_json(&hm), "heights_y": ints_json(&hn)}),
    );
    Ok((q, v))
}

/// A pair of point configurations glued at a common point.
#[derive(Clone, Debug)]
pub struct FreeSumConfig {
    pub a: Vec<IntVector>,
    pub b: Vec<IntVector>,
    /// `(junction, 0)` and `(0, junction)` in `Z^(m+1) ⊕ Z^(m+1)`.
    pub identified: (IntVector, IntVector),
    /// `(k p0, k)`.
    pub junction: IntVector,
    pub p0: Vec<BigRational>,
    pub k: BigInt,
}

/// Result of comparing both sides of a series factorization.
#[derive(Clone, Debug)]
pub struct SeriesIdentity {
    pub holds: bool,
    pub mismatched_degrees: Vec<usize>,
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
}

impl SeriesIdentity {
    fn compare(lhs: TruncatedSeries, rhs: TruncatedSeries) -> Self {
        let mismatched_degrees = lhs.mismatched_degrees(&rhs);
        SeriesIdentity {
            holds: mismatched_degrees.is_empty(),
            mismatched_degrees,
            lhs,
            rhs,
        }
    }

    fn witness(&self) -> Value {
        json!({
            "mismatched_degrees": self.mismatched_degrees,
            "lhs_standard": ints_json(&self.lhs.specialize().coeffs()),
            "rhs_standard": ints_json(&self.rhs.specialize().coeffs()),
        })
    }
}

impl FreeSumConfig {
    pub fn ambient_dim(&self) -> usize {
        self.junction.len() - 1
    }

    pub fn monoid_a(&self) -> Result<AffineMonoid> {
        monoid_over(&self.a)
    }

    pub fn monoid_b(&self) -> Result<AffineMonoid> {
        monoid_over(&self.b)
    }

    pub fn monoid_union(&self) -> Result<AffineMonoid> {
        let mut pts = self.a.clone();
        pts.extend(self.b.iter().cloned());
        monoid_over(&pts)
    }

    /// `M(A) ⊕ M(B)` modulo the identification of the two junction copies.
    pub fn quotient(&self) -> Result<IdentificationQuotient> {
        let s = direct_sum(&self.monoid_a()?, &self.monoid_b()?)?;
        quotient_by_identification(&s, &self.identified.0, &self.identified.1)
    }

    /// Compares `H_{M(A∪B)}` with `(1 - T^junction) H_{M(A)} H_{M(B)}` in the
    /// fine grading up to standard degree `n`.
    pub fn verify_identity(&self, n: usize) -> Result<SeriesIdentity> {
        let lhs = self.monoid_union()?.fine_hilbert_series(n)?;
        let rhs = self
            .monoid_a()?
            .fine_hilbert_series(n)?
            .mul(&self.monoid_b()?.fine_hilbert_series(n)?)?
            .apply_one_minus_tg(&self.junction)?;
        Ok(SeriesIdentity::compare(lhs, rhs))
    }
}

fn same_dims(a: &[IntVector], b: &[IntVector]) -> Result<usize> {
    let m = a
        .first()
        .or(b.first())
        .map(IntVector::len)
        .ok_or_else(|| Error::Degenerate("empty point configuration".into()))?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate("empty point configuration".into()));
    }
    for p in a.iter().chain(b) {
        if p.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.len(),
            });
        }
    }
    Ok(m)
}

fn embedded_pair(junction: &IntVector) -> (IntVector, IntVector) {
    let z = IntVector::zeros(junction.len());
    (junction.concat(&z), z.concat(junction))
}

/// Free sum of point configurations: `0` in both, spans meeting only in `0`.
pub fn free_sum_config(a: &[IntVector], b: &[IntVector]) -> Result<FreeSumConfig> {
    let m = same_dims(a, b)?;
    let zero = IntVector::zeros(m);
    if !a.contains(&zero) {
        return Err(Error::Structural("free sum: 0 is not in A".into()));
    }
    if !b.contains(&zero) {
        return Err(Error::Structural("free sum: 0 is not in B".into()));
    }
    let ra = Lattice::from_vectors(a, m)?.rank();
    let rb = Lattice::from_vectors(b, m)?.rank();
    let all: Vec<IntVector> = a.iter().chain(b).cloned().collect();
    let rab = Lattice::from_vectors(&all, m)?.rank();
    if ra + rb != rab {
        return Err(Error::Structural(format!(
            "free sum: the spans of A and B meet in a nonzero subspace (ranks {ra} + {rb} != {rab})"
        )));
    }
    let junction = IntVector::unit(m + 1, m);
    Ok(FreeSumConfig {
        a: a.to_vec(),
        b: b.to_vec(),
        identified: embedded_pair(&junction),
        junction,
        p0: vec![BigRational::zero(); m],
        k: BigInt::one(),
    })
}

/// Primitive integer vectors spanning the directions of the affine hull.
fn affine_directions(points: &[Vec<BigRational>]) -> Vec<IntVector> {
    let base = &points[0];
    let mut chosen: Vec<IntVector> = Vec::new();
    for p in &points[1..] {
        let d: Vec<BigRational> = p.iter().zip(base).map(|(a, b)| a - b).collect();
        let q = denominator_lcm(&d);
        let v = IntVector(d.iter().map(|x| (x * &q).to_integer()).collect());
        if v.is_zero() {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(v.primitive());
        if IntMatrix::from_rows(&trial, base.len()).expect("shape").rank() == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// The single common point of two affine hulls.
pub fn affine_hull_intersection(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let m = a[0].len();
    let u = affine_directions(a);
    let w = affine_directions(b);
    let mut both = u.clone();
    both.extend(w.iter().cloned());
    if !both.is_empty() && IntMatrix::from_rows(&both, m)?.rank() < both.len() {
        return Err(Error::Structural(
            "affine hulls are parallel in some direction and do not meet in a single point".into(),
        ));
    }
    // a0 + U s = b0 + W t
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            u.iter()
                .map(|d| BigRational::from_integer(d[i].clone()))
                .chain(w.iter().map(|d| BigRational::from_integer(-d[i].clone())))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = b[0].iter().zip(&a[0]).map(|(x, y)| x - y).collect();
    let sol = if both.is_empty() {
        if rhs.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        }
    } else {
        rational_solve(&rows, &rhs)
    };
    let s = sol.ok_or_else(|| Error::Structural("affine hulls do not meet".into()))?;
    Ok((0..m)
        .map(|i| {
            let mut x = a[0][i].clone();
            for (k, d) in u.iter().enumerate() {
                x += &s[k] * BigRational::from_integer(d[i].clone());
            }
            x
        })
        .collect())
}

fn to_rational_points(ps: &[IntVector]) -> Vec<Vec<BigRational>> {
    ps.iter().map(to_rational_vec).collect()
}

/// Configurations whose affine hulls meet in one rational point `p0`.
pub fn rational_point_sum_config(a: &[IntVector], b: &[IntVector]) -> Result<FreeSumConfig> {
    let m = same_dims(a, b)?;
    let p0 = affine_hull_intersection(&to_rational_points(a), &to_rational_points(b))?;
    let k = denominator_lcm(&p0);
    let mut j: Vec<BigInt> = p0.iter().map(|x| (x * &k).to_integer()).collect();
    j.push(k.clone());
    let junction = IntVector(j);
    for (pts, name) in [(a, "M(A)"), (b, "M(B)")] {
        if !monoid_over(pts)?.contains(&junction)? {
            return Err(Error::Membership(format!("{junction} is not in {name}")));
        }
    }
    debug_assert_eq!(junction.len(), m + 1);
    Ok(FreeSumConfig {
        a: a.to_vec(),
        b: b.to_vec(),
        identified: embedded_pair(&junction),
        junction,
        p0,
        k,
    })
}

fn default_truncation(r: &RationalPolytope, opts: &CheckOptions) -> Result<usize> {
    if let Some(n) = opts.truncation {
        return Ok(n);
    }
    let q = polytope_denominator(r)
        .to_usize()
        .ok_or_else(|| Error::Resource("denominator too large".into()))?;
    Ok(12.max(q * (r.dim() + 2)))
}

fn union_polytope(p: &RationalPolytope, q: &RationalPolytope) -> Result<RationalPolytope> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: q.ambient_dim(),
        });
    }
    let mut vs = p.vertices().to_vec();
    vs.extend(q.vertices().iter().cloned());
    RationalPolytope::new(vs)
}

/// Lattice `Z^m ∩ (linear span of the vertices)`.
fn saturated_span(p: &RationalPolytope) -> Result<Lattice> {
    let vs: Vec<IntVector> = p
        .vertices()
        .iter()
        .map(|v| {
            let h = homogenize(v);
            IntVector(h.0[..h.len() - 1].to_vec())
        })
        .collect();
    Ok(SaturatedFrame::of(&Lattice::from_vectors(&vs, p.ambient_dim())?).lattice())
}

fn heights_over(p: &RationalPolytope, point: &IntVector) -> Result<Vec<BigInt>> {
    p.cone().facets().iter().map(|f| height(point, f)).collect()
}

fn height_criterion(v: &mut Verdict, hp: &[BigInt], hq: &[BigInt]) -> bool {
    let le1 = |h: &[BigInt]| h.iter().all(|t| t <= &BigInt::one());
    let max = |h: &[BigInt]| h.iter().max().cloned().unwrap_or_default();
    let ok = le1(hp) || le1(hq);
    v.push("info:heights_p", le1(hp), ints_json(hp));
    v.push("info:heights_q", le1(hq), ints_json(hq));
    v.push(
        "height_le_1",
        ok,
        json!({"max_height_p": int_json(&max(hp)), "max_height_q": int_json(&max(hq))}),
    );
    ok
}

fn fine_identity(
    p: &RationalPolytope,
    q: &RationalPolytope,
    r: &RationalPolytope,
    junction: &IntVector,
    n: usize,
) -> Result<SeriesIdentity> {
    let lhs = fine_ehrhart_truncated(r, n);
    let rhs = fine_ehrhart_truncated(p, n)
        .mul(&fine_ehrhart_truncated(q, n))?
        .apply_one_minus_tg(junction)?;
    Ok(SeriesIdentity::compare(lhs, rhs))
}

fn record_identity(v: &mut Verdict, criterion: bool, id: &SeriesIdentity, n: usize) -> Result<()> {
    let mut w = id.witness();
    w["truncation"] = json!(n);
    v.push("info:series_identity", id.holds, w);
    if criterion != id.holds {
        return Err(Error::Internal(format!(
            "height criterion ({criterion}) disagrees with the series identity ({})",
            id.holds
        )));
    }
    Ok(())
}

/// Normality of the free sum of two rational polytopes containing 0.
pub fn check_polytope_free_sum(p: &RationalPolytope, q: &RationalPolytope) -> Result<Verdict> {
    check_polytope_free_sum_with(p, q, &CheckOptions::default())
}

pub fn check_polytope_free_sum_with(p: &RationalPolytope, q: &RationalPolytope, opts: &CheckOptions) -> Result<Verdict> {
    let r = union_polytope(p, q)?;
    let m = p.ambient_dim();
    let zero = vec![BigRational::zero(); m];
    if !p.contains(&zero) || !q.contains(&zero) {
        return Err(Error::precondition("0 in P and Q", "the origin must lie in both polytopes"));
    }
    let (lp, lq, lr) = (saturated_span(p)?, saturated_span(q)?, saturated_span(&r)?);
    if lp.rank() + lq.rank() != lr.rank() {
        return Err(Error::precondition(
            "spans meet only in 0",
            format!("ranks {} + {} != {}", lp.rank(), lq.rank(), lr.rank()),
        ));
    }
    if lp.sum(&lq)? != lr {
        return Err(Error::precondition(
            "lattice decomposition",
            "the lattice points of the span of R are not the sum of those of P and Q",
        ));
    }
    let mut v = Verdict::new();
    let origin = IntVector::unit(m + 1, m);
    let ok = height_criterion(&mut v, &heights_over(p, &origin)?, &heights_over(q, &origin)?);
    let n = default_truncation(&r, opts)?;
    let id = fine_identity(p, q, &r, &origin, n)?;
    record_identity(&mut v, ok, &id, n)?;
    Ok(v)
}

/// Level-one slice of the homogenized span lattice: the integer points of
/// the affine hull, as base point and direction lattice.
fn affine_integer_points(p: &RationalPolytope) -> Result<Option<(IntVector, Lattice)>> {
    let m = p.ambient_dim();
    let l = p.cone().lattice();
    let basis = l.basis_vectors();
    let levels = IntMatrix::from_rows(
        &basis.iter().map(|b| IntVector(vec![b[m].clone()])).collect::<Vec<_>>(),
        1,
    )?;
    let Some(c) = solve_integral(&levels, &IntVector::from_i64s(&[1])) else {
        return Ok(None);
    };
    let base = l.point(c.entries());
    let (h, u) = crate::exactlat::hnf(&levels);
    let dirs: Vec<IntVector> = (0..h.rows())
        .filter(|&i| h.row(i).is_zero())
        .map(|i| {
            let d = l.point(u.row(i).entries());
            IntVector(d.0[..m].to_vec())
        })
        .collect();
    Ok(Some((IntVector(base.0[..m].to_vec()), Lattice::from_vectors(&dirs, m)?)))
}

fn affine_generators(base: &IntVector, dirs: &Lattice) -> Vec<IntVector> {
    let mut out = vec![base.clone()];
    out.extend(dirs.basis_vectors().iter().map(|d| base + d));
    out
}

/// Normality criterion for polytopes whose affine hulls meet in one point.
#[allow(non_snake_case)]
pub fn check_rational_EE(p: &RationalPolytope, q: &RationalPolytope) -> Result<Verdict> {
    check_rational_ee_with(p, q, &CheckOptions::default())
}

pub fn check_rational_ee_with(p: &RationalPolytope, q: &RationalPolytope, opts: &CheckOptions) -> Result<Verdict> {
    let r = union_polytope(p, q)?;
    let p0 = affine_hull_intersection(p.vertices(), q.vertices()).map_err(|e| match e {
        Error::Structural(s) => Error::precondition("affine hulls meet in one point", s),
        other => other,
    })?;
    if !p.contains(&p0) || !q.contains(&p0) {
        return Err(Error::precondition("p0 in P and Q", "the common point of the affine hulls lies outside P or Q"));
    }
    let k = denominator_lcm(&p0);
    let junction = homogenize(&p0);
    let hull_r = affine_integer_points(&r)?;
    let parts: Vec<IntVector> = [affine_integer_points(p)?, affine_integer_points(q)?]
        .into_iter()
        .flatten()
        .flat_map(|(b, d)| affine_generators(&b, &d))
        .collect();
    let same = match (&hull_r, parts.is_empty()) {
        (None, true) => true,
        (None, false) | (Some(_), true) => false,
        (Some((br, dr)), false) => {
            let (bh, dh) = z_affine_hull(&parts)?;
            &dh == dr && dr.contains(&(br - &bh))
        }
    };
    if !same {
        return Err(Error::precondition(
            "Z-affine hull",
            "the integer points of aff(R) are not the Z-affine hull of those of aff(P) and aff(Q)",
        ));
    }
    let mut v = Verdict::new();
    v.push(
        "info:junction",
        true,
        json!({"p0": p0.iter().map(rational_json).collect::<Vec<_>>(), "k": int_json(&k), "point": vec_json(&junction)}),
    );
    let ok = height_criterion(&mut v, &heights_over(p, &junction)?, &heights_over(q, &junction)?);
    let n = default_truncation(&r, opts)?;
    let id = fine_identity(p, q, &r, &junction, n)?;
    record_identity(&mut v, ok, &id, n)?;
    Ok(v)
}

/// The element of height one over every facet, if it exists.
pub fn gorenstein_witness(m: &AffineMonoid) -> Result<Option<IntVector>> {
    let facets = m.cone().facets();
    if facets.is_empty() {
        return Ok(None);
    }
    let basis = m.group().basis_vectors();
    let mut values = IntMatrix::zeros(basis.len(), facets.len());
    for (i, b) in basis.iter().enumerate() {
        for (j, f) in facets.iter().enumerate() {
            values[(i, j)] = f.value(b)?;
        }
    }
    let ones = IntVector(vec![BigInt::one(); facets.len()]);
    Ok(solve_integral(&values, &ones).map(|c| m.group().point(c.entries())))
}

/// Splitting of the Gorenstein witness `w = x_1 + ... + x_n` into elements
/// with disjoint 0-1 height vectors.
pub fn gorenstein_split_check(m: &AffineMonoid, xs: &[IntVector]) -> Result<Verdict> {
    gorenstein_split_check_with(m, xs, &CheckOptions::default())
}

pub fn gorenstein_split_check_with(m: &AffineMonoid, xs: &[IntVector], opts: &CheckOptions) -> Result<Verdict> {
    let mut v = Verdict::new();
    ensure_normal(m, opts, &mut v, "")?;
    ensure_members(m, &xs.iter().collect::<Vec<_>>())?;
    let Some(w) = gorenstein_witness(m)? else {
        v.push("gorenstein_witness", false, json!("no element has height 1 over every facet"));
        return Ok(v);
    };
    if !m.contains(&w)? {
        return Err(Error::Internal("Gorenstein witness outside a normal monoid".into()));
    }
    v.push("gorenstein_witness", true, vec_json(&w));
    let sum = xs.iter().fold(IntVector::zeros(m.ambient_dim()), |acc, x| &acc + x);
    v.push("sum_is_witness", sum == w, json!({"sum": vec_json(&sum), "witness": vec_json(&w)}));
    let heights: Vec<Vec<BigInt>> = xs.iter().map(|x| m.heights(x)).collect::<Result<_>>()?;
    let mut bad: Option<Value> = None;
    for i in 0..m.cone().facets().len() {
        let col: Vec<BigInt> = heights.iter().map(|h| h[i].clone()).collect();
        let zero_one = col.iter().all(|h| h.is_zero() || h.is_one());
        let ones = col.iter().filter(|h| h.is_one()).count();
        if !(zero_one && ones <= 1) {
            bad = Some(json!({"facet": form_json(i, &m.cone().facets()[i]), "heights": ints_json(&col)}));
            break;
        }
    }
    v.push(
        "disjoint_01_heights",
        bad.is_none(),
        bad.unwrap_or_else(|| Value::Array(heights.iter().map(|h| ints_json(h)).collect())),
    );
    let n = xs.len();
    v.push(
        "info:quotient_rank",
        true,
        json!(m.rank() as i64 - (n as i64 - 1)),
    );
    Ok(v)
}
