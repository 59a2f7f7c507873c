//! Brute-force reference computations.
//!
//! Nothing here calls the lattice, cone, monoid or Ehrhart engines. Vectors
//! are converted to `i128`, lattices are handled by a private echelon
//! routine, facets are found by trying every hyperplane spanned by
//! generators, and counts come from box enumeration. Inputs beyond the
//! enumeration budget are refused with [`Error::Resource`].

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlat::IntVector;

/// Largest number of box points or monoid elements visited.
pub const BUDGET: u64 = 6_000_000;

type V = Vec<i128>;

fn small(v: &IntVector) -> Result<V> {
    v.iter()
        .map(|x| {
            x.to_i128()
                .filter(|t| t.abs() < 1 << 40)
                .ok_or_else(|| Error::Resource("oracle: entry too large".into()))
        })
        .collect()
}

fn big(v: &[i128]) -> IntVector {
    IntVector(v.iter().map(|&x| BigInt::from(x)).collect())
}

fn gcd_all(v: &[i128]) -> i128 {
    v.iter().fold(0i128, |g, &x| g.gcd(&x))
}

/// Integer row echelon form with positive pivots; zero rows dropped.
fn echelon(mut rows: Vec<V>, cols: usize) -> Vec<V> {
    let mut out: Vec<V> = Vec::new();
    for c in 0..cols {
        loop {
            let best = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[c] != 0)
                .min_by_key(|(_, r)| r[c].abs())
                .map(|(i, _)| i);
            let Some(b) = best else { break };
            let piv = rows.swap_remove(b);
            let mut done = true;
            for r in rows.iter_mut() {
                if r[c] != 0 {
                    let q = Integer::div_floor(&r[c], &piv[c]);
                    for j in 0..cols {
                        r[j] -= q * piv[j];
                    }
                    if r[c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let s = piv[c].signum();
                out.push(piv.iter().map(|x| x * s).collect());
                break;
            }
            rows.push(piv);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    out
}

fn pivot(row: &V) -> usize {
    row.iter().position(|&x| x != 0).expect("echelon rows are nonzero")
}

/// Integer coordinates of `v` in an echelon basis.
fn int_coords(basis: &[V], v: &V) -> Option<V> {
    let mut r = v.clone();
    let mut c = Vec::with_capacity(basis.len());
    for b in basis {
        let p = pivot(b);
        if r[p] % b[p] != 0 {
            return None;
        }
        let t = r[p] / b[p];
        for j in 0..r.len() {
            r[j] -= t * b[j];
        }
        c.push(t);
    }
    r.iter().all(|&x| x == 0).then_some(c)
}

/// Rational coordinates of `v` in an echelon basis and the residual, which
/// vanishes exactly on the span. Both are linear in `v`.
fn rat_solve(basis: &[V], v: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = v.to_vec();
    let mut c = Vec::with_capacity(basis.len());
    for b in basis {
        let p = pivot(b);
        let t = &r[p] / BigRational::from_integer(BigInt::from(b[p]));
        for j in 0..r.len() {
            r[j] -= &t * BigRational::from_integer(BigInt::from(b[j]));
        }
        c.push(t);
    }
    (c, r)
}

/// Clears denominators of a rational functional.
fn integral(f: &[BigRational]) -> Result<V> {
    let l = f.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    f.iter()
        .map(|x| {
            (x * BigRational::from_integer(l.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::Resource("oracle: functional too large".into()))
        })
        .collect()
}

fn det(mut a: Vec<V>) -> i128 {
    // Bareiss elimination
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A cone over integer generators, described in coordinates of a basis of
/// the group they generate.
#[derive(Clone, Debug)]
pub struct BruteCone {
    ambient: usize,
    basis: Vec<V>,
    gens: Vec<V>,
    facets: Vec<V>,
}

impl BruteCone {
    pub fn new(generators: &[IntVector]) -> Result<BruteCone> {
        let ambient = generators
            .first()
            .map(IntVector::len)
            .ok_or_else(|| Error::Degenerate("oracle: no generators".into()))?;
        let raw: Vec<V> = generators.iter().map(small).collect::<Result<_>>()?;
        let basis = echelon(raw.clone(), ambient);
        let gens: Vec<V> = raw
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .map(|g| int_coords(&basis, g).expect("generator in its own group"))
            .collect();
        let r = basis.len();
        let mut facets: Vec<V> = Vec::new();
        if r == 1 {
            let pos = gens.iter().any(|g| g[0] > 0);
            let neg = gens.iter().any(|g| g[0] < 0);
            if pos && !neg {
                facets.push(vec![1]);
            } else if neg && !pos {
                facets.push(vec![-1]);
            }
        }
        if r >= 2 {
            let mut seen = HashSet::new();
            combinations(gens.len(), r - 1, &mut |idx| {
                let normal: V = (0..r)
                    .map(|j| {
                        let minor: Vec<V> = idx
                            .iter()
                            .map(|&i| (0..r).filter(|&c| c != j).map(|c| gens[i][c]).collect())
                            .collect();
                        let d = det(minor);
                        if j % 2 == 0 { d } else { -d }
                    })
                    .collect();
                let g = gcd_all(&normal);
                if g == 0 {
                    return;
                }
                let mut n: V = normal.iter().map(|x| x / g).collect();
                let vals: Vec<i128> = gens.iter().map(|x| dot(&n, x)).collect();
                if vals.iter().all(|&v| v <= 0) {
                    n.iter_mut().for_each(|x| *x = -*x);
                } else if !vals.iter().all(|&v| v >= 0) {
                    return;
                }
                if seen.insert(n.clone()) {
                    facets.push(n);
                }
            });
        }
        facets.sort();
        Ok(BruteCone {
            ambient,
            basis,
            gens,
            facets,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// Pointed and full-dimensional in its group: the facet normals span.
    pub fn is_pointed(&self) -> bool {
        self.rank() == 0 || echelon(self.facets.clone(), self.rank()).len() == self.rank()
    }

    /// Membership in the group generated by the generators.
    pub fn in_group(&self, v: &IntVector) -> Result<bool> {
        Ok(int_coords(&self.basis, &small(v)?).is_some())
    }

    /// Membership in the real cone.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        match rat_solve(&self.basis, v) {
            (_, r) if !r.iter().all(Zero::is_zero) => false,
            (c, _) => self.facets.iter().all(|f| {
                let s: BigRational = f
                    .iter()
                    .zip(&c)
                    .map(|(a, x)| BigRational::from_integer(BigInt::from(*a)) * x)
                    .sum();
                !s.is_negative()
            }),
        }
    }

    /// Inequalities and equations on the ambient space cutting out the cone,
    /// scaled to integers.
    pub fn ambient_constraints(&self) -> Result<(Vec<V>, Vec<V>)> {
        let n = self.ambient;
        let cols: Vec<(Vec<BigRational>, Vec<BigRational>)> = (0..n)
            .map(|j| {
                let e: Vec<BigRational> = (0..n)
                    .map(|i| BigRational::from_integer(BigInt::from(i128::from(i == j))))
                    .collect();
                rat_solve(&self.basis, &e)
            })
            .collect();
        let ineqs = self
            .facets
            .iter()
            .map(|f| {
                let g: Vec<BigRational> = cols
                    .iter()
                    .map(|(c, _)| f.iter().zip(c).map(|(a, x)| BigRational::from_integer(BigInt::from(*a)) * x).sum())
                    .collect();
                integral(&g)
            })
            .collect::<Result<_>>()?;
        let eqs = (0..n)
            .map(|i| integral(&cols.iter().map(|(_, r)| r[i].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<V>>>()?
            .into_iter()
            .filter(|e| e.iter().any(|&x| x != 0))
            .collect();
        Ok((ineqs, eqs))
    }

    /// Facet values of `v` in group coordinates, sorted.
    pub fn heights(&self, v: &IntVector) -> Result<Vec<BigInt>> {
        let c = int_coords(&self.basis, &small(v)?)
            .ok_or_else(|| Error::Membership("oracle: point outside the group".into()))?;
        let mut h: Vec<i128> = self.facets.iter().map(|f| dot(f, &c)).collect();
        h.sort();
        Ok(h.into_iter().map(BigInt::from).collect())
    }

    fn grading(&self) -> Result<V> {
        if !self.is_pointed() {
            return Err(Error::Unsupported("oracle: cone is not pointed".into()));
        }
        let mut w = vec![0i128; self.rank()];
        for f in &self.facets {
            for (a, b) in w.iter_mut().zip(f) {
                *a += b;
            }
        }
        Ok(w)
    }

    /// Monoid elements by degree `0..=n` under the sum of facet forms.
    fn closure(&self, w: &V, n: i128) -> Result<HashSet<V>> {
        let r = self.rank();
        let mut seen: HashSet<V> = HashSet::new();
        let mut frontier = vec![vec![0i128; r]];
        seen.insert(vec![0i128; r]);
        while let Some(p) = frontier.pop() {
            for g in &self.gens {
                let q: V = p.iter().zip(g).map(|(a, b)| a + b).collect();
                if dot(w, &q) <= n && seen.insert(q.clone()) {
                    if seen.len() as u64 > BUDGET {
                        return Err(Error::Resource("oracle: monoid enumeration budget exceeded".into()));
                    }
                    frontier.push(q);
                }
            }
        }
        Ok(seen)
    }

    /// Lattice points of the cone up to degree `n`, in group coordinates.
    fn cone_points(&self, w: &V, n: i128, mut visit: impl FnMut(&V) -> bool) -> Result<()> {
        let r = self.rank();
        let mut lo = vec![0i128; r];
        let mut hi = vec![0i128; r];
        for g in &self.gens {
            let d = dot(w, g);
            for j in 0..r {
                lo[j] = lo[j].min(Integer::div_floor(&(n * g[j]), &d));
                hi[j] = hi[j].max(Integer::div_ceil(&(n * g[j]), &d));
            }
        }
        lo.iter()
            .zip(&hi)
            .try_fold(1u64, |acc, (a, b)| acc.checked_mul((b - a + 1) as u64))
            .filter(|&v| v <= BUDGET)
            .ok_or_else(|| Error::Resource("oracle: box enumeration budget exceeded".into()))?;
        let mut x = lo.clone();
        loop {
            if dot(w, &x) <= n && self.facets.iter().all(|f| dot(f, &x) >= 0) && !visit(&x) {
                return Ok(());
            }
            let mut j = 0;
            loop {
                if j == r {
                    return Ok(());
                }
                if x[j] < hi[j] {
                    x[j] += 1;
                    break;
                }
                x[j] = lo[j];
                j += 1;
            }
        }
    }
}

/// Whether the monoid generated by `generators` equals the lattice points
/// of its cone in its group. Every hole reduces to one in the half-open
/// parallelepiped of a simplicial subcone, so checking degrees below
/// `rank * max generator degree` decides the question.
pub fn is_normal(generators: &[IntVector]) -> Result<bool> {
    let c = BruteCone::new(generators)?;
    if c.rank() == 0 {
        return Ok(true);
    }
    let w = c.grading()?;
    let maxdeg = c.gens.iter().map(|g| dot(&w, g)).max().unwrap_or(0);
    let n = c.rank() as i128 * maxdeg;
    let m = c.closure(&w, n)?;
    let mut normal = true;
    c.cone_points(&w, n, |x| {
        normal = m.contains(x);
        normal
    })?;
    Ok(normal)
}

/// Number of monoid elements of each degree `0..=n` for a grading `w` on the
/// ambient space, positive on the generators.
pub fn hilbert_function(generators: &[IntVector], w: &IntVector, n: usize) -> Result<Vec<u64>> {
    let ws = small(w)?;
    let gens: Vec<V> = generators.iter().map(small).collect::<Result<_>>()?;
    let degs: Vec<i128> = gens.iter().map(|g| dot(&ws, g)).collect();
    if degs.iter().zip(&gens).any(|(&d, g)| d <= 0 && g.iter().any(|&x| x != 0)) {
        return Err(Error::precondition("positive grading", "a generator has degree <= 0"));
    }
    let mut seen: HashSet<V> = HashSet::new();
    let mut counts = vec![0u64; n + 1];
    let mut frontier = vec![vec![0i128; ws.len()]];
    seen.insert(frontier[0].clone());
    counts[0] = 1;
    while let Some(p) = frontier.pop() {
        for (g, &d) in gens.iter().zip(&degs) {
            if d <= 0 {
                continue;
            }
            let q: V = p.iter().zip(g).map(|(a, b)| a + b).collect();
            let e = dot(&ws, &q);
            if e <= n as i128 && seen.insert(q.clone()) {
                if seen.len() as u64 > BUDGET {
                    return Err(Error::Resource("oracle: monoid enumeration budget exceeded".into()));
                }
                counts[e as usize] += 1;
                frontier.push(q);
            }
        }
    }
    Ok(counts)
}

/// Lattice points of `k P` counted over the bounding box of the dilate.
pub fn count_points(vertices: &[Vec<BigRational>], k: u64) -> Result<u64> {
    let m = vertices
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Degenerate("oracle: empty polytope".into()))?;
    let homog: Vec<IntVector> = vertices
        .iter()
        .map(|v| {
            let q = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let mut e: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(q.clone())).to_integer()).collect();
            e.push(q);
            IntVector(e)
        })
        .collect();
    let (ineqs, eqs) = BruteCone::new(&homog)?.ambient_constraints()?;
    let kq = BigRational::from_integer(BigInt::from(k));
    let mut lo = Vec::with_capacity(m);
    let mut hi = Vec::with_capacity(m);
    for j in 0..m {
        let vals = vertices.iter().map(|v| &v[j] * &kq);
        let mn = vals.clone().min().expect("nonempty");
        let mx = vals.max().expect("nonempty");
        lo.push(mn.floor().to_integer().to_i64().ok_or_else(|| Error::Resource("oracle: box".into()))?);
        hi.push(mx.ceil().to_integer().to_i64().ok_or_else(|| Error::Resource("oracle: box".into()))?);
    }
    lo.iter()
        .zip(&hi)
        .try_fold(1u64, |acc, (a, b)| acc.checked_mul((b - a + 1) as u64))
        .filter(|&v| v <= BUDGET)
        .ok_or_else(|| Error::Resource("oracle: box enumeration budget exceeded".into()))?;
    let mut x = lo.clone();
    let mut count = 0u64;
    loop {
        let mut p: V = x.iter().map(|&t| t as i128).collect();
        p.push(k as i128);
        if ineqs.iter().all(|f| dot(f, &p) >= 0) && eqs.iter().all(|f| dot(f, &p) == 0) {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == m {
                return Ok(count);
            }
            if x[j] < hi[j] {
                x[j] += 1;
                break;
            }
            x[j] = lo[j];
            j += 1;
        }
    }
}

/// `count_points` for `k = 0..=n`.
pub fn ehrhart_counts(vertices: &[Vec<BigRational>], n: usize) -> Result<Vec<u64>> {
    (0..=n as u64).map(|k| count_points(vertices, k)).collect()
}

/// Membership of `v` in the subgroup of `Z^m` generated by `gens`.
pub fn in_lattice(gens: &[IntVector], v: &IntVector) -> Result<bool> {
    let rows: Vec<V> = gens.iter().map(small).collect::<Result<_>>()?;
    let basis = echelon(rows, v.len());
    Ok(int_coords(&basis, &small(v)?).is_some())
}

/// Searches the box `[-bound, bound]^m` for `v` outside the subgroup
/// generated by `gens` with `p v` inside it for some `2 <= p <= max_order`.
pub fn torsion_witness(
    gens: &[IntVector],
    m: usize,
    bound: i64,
    max_order: i64,
) -> Result<Option<(IntVector, i64)>> {
    let rows: Vec<V> = gens.iter().map(small).collect::<Result<_>>()?;
    let basis = echelon(rows, m);
    let side = (2 * bound + 1) as u64;
    if side.checked_pow(m as u32).filter(|&v| v <= BUDGET).is_none() {
        return Err(Error::Resource("oracle: torsion search box too large".into()));
    }
    let b = bound as i128;
    let mut x = vec![-b; m];
    loop {
        if int_coords(&basis, &x).is_none() {
            for p in 2..=max_order as i128 {
                let px: V = x.iter().map(|t| t * p).collect();
                if int_coords(&basis, &px).is_some() {
                    return Ok(Some((big(&x), p as i64)));
                }
            }
        }
        let mut j = 0;
        loop {
            if j == m {
                return Ok(None);
            }
            if x[j] < b {
                x[j] += 1;
                break;
            }
            x[j] = -b;
            j += 1;
        }
    }
}
