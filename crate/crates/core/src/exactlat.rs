//! Exact integer linear algebra: Hermite and Smith normal forms, lattices
//! inside `Z^m`, saturation, unimodularity and torsion tests, and a
//! branch-and-bound solver for nonnegative integral combinations.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A vector of arbitrary-precision integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// Unit vector `e_i` of the given length.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigInt> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|e| e * k).collect())
    }

    /// gcd of all entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, e| g.gcd(e))
    }

    /// Divides by the content. The zero vector is returned unchanged.
    pub fn primitive(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|e| e / &g).collect())
    }

    pub fn concat(&self, other: &IntVector) -> IntVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        IntVector(v)
    }

    pub fn last(&self) -> Option<&BigInt> {
        self.0.last()
    }

    /// Fits every entry into `i64`, if possible.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

impl From<&[i64]> for IntVector {
    fn from(v: &[i64]) -> Self {
        IntVector::from_i64s(v)
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVector {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a IntVector> for &'a IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), rhs.len());
        IntVector(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a IntVector> for &'a IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), rhs.len());
        IntVector(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Shorthand for building an [`IntVector`] from integer literals.
#[macro_export]
macro_rules! iv {
    ($($x:expr),* $(,)?) => {
        $crate::exactlat::IntVector::from_i64s(&[$($x as i64),*])
    };
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Stacks vectors as rows. All vectors must have length `cols`.
    pub fn from_rows(rows: &[IntVector], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.0.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<IntVector> = rows.iter().map(|r| IntVector::from_i64s(r)).collect();
        Self::from_rows(&vs, cols).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self[(i, j)];
            }
        }
        IntVector(out)
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn rank(&self) -> usize {
        let (h, _) = hnf(self);
        (0..h.rows).filter(|&i| !h.row(i).is_zero()).count()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Row Hermite normal form: returns `(h, u)` with `u` unimodular and `u * m = h`.
///
/// `h` is in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let pivot = (r..m.rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Smith normal form `u * m * v = s` together with the inverses of `u` and `v`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn compute(m: &IntMatrix) -> SmithForm {
        let (rows, cols) = (m.rows, m.cols);
        let mut s = m.clone();
        let mut u = IntMatrix::identity(rows);
        let mut u_inv = IntMatrix::identity(rows);
        let mut v = IntMatrix::identity(cols);
        let mut v_inv = IntMatrix::identity(cols);

        // Elementary operations, each applied to s and mirrored on the
        // transforms and their inverses.
        let row_add = |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst, src, k: &BigInt| {
            s.add_row_multiple(dst, src, k);
            u.add_row_multiple(dst, src, k);
            ui.add_col_multiple(src, dst, &-k);
        };
        let col_add = |s: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst, src, k: &BigInt| {
            s.add_col_multiple(dst, src, k);
            v.add_col_multiple(dst, src, k);
            vi.add_row_multiple(src, dst, &-k);
        };

        'diag: for t in 0..rows.min(cols) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..rows {
                    for j in t..cols {
                        if s[(i, j)].is_zero() {
                            continue;
                        }
                        if best.map_or(true, |(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break 'diag };
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                u_inv.swap_cols(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);

                let mut clean = true;
                for i in t + 1..rows {
                    if s[(i, t)].is_zero() {
                        continue;
                    }
                    let q = -(&s[(i, t)] / &s[(t, t)]);
                    row_add(&mut s, &mut u, &mut u_inv, i, t, &q);
                    if !s[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    if s[(t, j)].is_zero() {
                        continue;
                    }
                    let q = -(&s[(t, j)] / &s[(t, t)]);
                    col_add(&mut s, &mut v, &mut v_inv, j, t, &q);
                    if !s[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold a row with an offending entry into row t.
                let offending = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(&s[(i, j)] % &s[(t, t)]).is_zero())
                });
                match offending {
                    Some(i) => row_add(&mut s, &mut u, &mut u_inv, t, i, &BigInt::one()),
                    None => break,
                }
            }
            if s[(t, t)].is_negative() {
                s.negate_row(t);
                u.negate_row(t);
                u_inv.negate_col(t);
            }
        }
        SmithForm { s, u, v, u_inv, v_inv }
    }

    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form: `(s, u, v)` with `u * m * v = s`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let f = SmithForm::compute(m);
    (f.s, f.u, f.v)
}

/// A subgroup of `Z^ambient_dim`, stored by its HNF basis.
///
/// Two lattices are equal exactly when their HNF bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// The subgroup generated by `vs`. Empty input gives the zero lattice.
    pub fn from_vectors(vs: &[IntVector], ambient_dim: usize) -> Result<Lattice> {
        let m = IntMatrix::from_rows(vs, ambient_dim)?;
        let (h, _) = hnf(&m);
        let rows: Vec<IntVector> = h.row_vectors().into_iter().filter(|r| !r.is_zero()).collect();
        Ok(Lattice {
            ambient_dim,
            basis: IntMatrix::from_rows(&rows, ambient_dim)?,
        })
    }

    pub fn zero(ambient_dim: usize) -> Lattice {
        Lattice {
            ambient_dim,
            basis: IntMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Lattice {
        Lattice {
            ambient_dim,
            basis: IntMatrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<IntVector> {
        self.basis.row_vectors()
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &IntVector) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let mut rem = v.clone();
        let mut coords = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let p = (0..self.ambient_dim)
                .find(|&j| !self.basis[(i, j)].is_zero())
                .expect("HNF basis rows are nonzero");
            let (q, r) = rem[p].div_rem(&self.basis[(i, p)]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in p..self.ambient_dim {
                    let d = &q * &self.basis[(i, j)];
                    rem[j] -= d;
                }
            }
            coords.push(q);
        }
        rem.is_zero().then_some(coords)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        self.coordinates(v).is_some()
    }

    fn coordinates_or_err(&self, v: &IntVector) -> Result<Vec<BigInt>> {
        self.coordinates(v)
            .ok_or_else(|| Error::Membership(format!("{v} is not in the lattice")))
    }

    /// Point with the given coordinates in the HNF basis.
    pub fn point(&self, coords: &[BigInt]) -> IntVector {
        self.basis.left_mul_vec(&IntVector(coords.to_vec()))
    }

    /// Subgroup generated by both lattices.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Lattice::from_vectors(&vs, self.ambient_dim)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn is_saturated(&self) -> bool {
        saturate(self) == *self
    }

    /// Matrix whose rows are the coordinates of `vs` in this lattice.
    pub fn coordinate_matrix(&self, vs: &[IntVector]) -> Result<IntMatrix> {
        let rows = vs
            .iter()
            .map(|v| self.coordinates_or_err(v).map(IntVector))
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::from_rows(&rows, self.rank())
    }
}

/// The saturation `{v : k v in l for some k > 0}` of `l`.
pub fn saturate(l: &Lattice) -> Lattice {
    SaturatedFrame::of(l).lattice()
}

/// A basis of the saturation of a lattice, completed to a unimodular basis of
/// the ambient space.
///
/// For `v` in the rational span, `v = (v * coords) * basis`; the columns of
/// `equations` cut out the span.
#[derive(Clone, Debug)]
pub struct SaturatedFrame {
    pub basis: IntMatrix,
    pub coords: IntMatrix,
    pub equations: IntMatrix,
}

impl SaturatedFrame {
    pub fn of(l: &Lattice) -> SaturatedFrame {
        let m = l.ambient_dim;
        let r = l.rank();
        let f = SmithForm::compute(l.basis());
        let basis_rows: Vec<IntVector> = (0..r).map(|i| f.v_inv.row(i)).collect();
        SaturatedFrame {
            basis: IntMatrix::from_rows(&basis_rows, m).expect("consistent shape"),
            coords: f.v.select_cols(&(0..r).collect::<Vec<_>>()),
            equations: f.v.select_cols(&(r..m).collect::<Vec<_>>()),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::from_vectors(&self.basis.row_vectors(), self.basis.cols)
            .expect("consistent shape")
    }

    /// Coordinates of `v` in `basis`; meaningful only for `v` in the span.
    pub fn coordinates(&self, v: &IntVector) -> IntVector {
        self.coords.left_mul_vec(v)
    }

    pub fn in_span(&self, v: &IntVector) -> bool {
        self.equations.left_mul_vec(v).is_zero()
    }
}

/// True iff `v` generates a direct summand of `l`.
pub fn is_unimodular_element(v: &IntVector, l: &Lattice) -> Result<bool> {
    let c = l.coordinates_or_err(v)?;
    Ok(IntVector(c).content().is_one())
}

/// True iff `l / <vs>` is torsionfree.
pub fn quotient_is_torsionfree(l: &Lattice, vs: &[IntVector]) -> Result<bool> {
    Ok(torsion_invariants(l, vs)?.is_empty())
}

/// Invariant factors larger than one of the coordinate matrix of `vs` in `l`:
/// the torsion of `l / <vs>`.
pub fn torsion_invariants(l: &Lattice, vs: &[IntVector]) -> Result<Vec<BigInt>> {
    let c = l.coordinate_matrix(vs)?;
    Ok(SmithForm::compute(&c)
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect())
}

/// True iff `v -> (form_i . v)_i` maps `l` onto `Z^n`.
pub fn forms_surject(forms: &[IntVector], l: &Lattice) -> bool {
    let n = forms.len();
    let mut values = IntMatrix::zeros(l.rank(), n);
    for (i, b) in l.basis_vectors().iter().enumerate() {
        for (j, f) in forms.iter().enumerate() {
            values[(i, j)] = b.dot(f);
        }
    }
    value_matrix_surjects(&values)
}

/// `values[i][j]` is the value of form `j` on basis vector `i`.
pub(crate) fn value_matrix_surjects(values: &IntMatrix) -> bool {
    let f = SmithForm::compute(values);
    let inv = f.invariant_factors();
    inv.len() == values.cols() && inv.iter().all(One::is_one)
}

/// Solves the integral row system `c * a = b`, if solvable.
pub fn solve_integral(a: &IntMatrix, b: &IntVector) -> Option<IntVector> {
    assert_eq!(a.cols(), b.len());
    let f = SmithForm::compute(a);
    // c a = b  <=>  (c u^-1) s = b v
    let bv = f.v.left_mul_vec(b);
    let mut d = vec![BigInt::zero(); a.rows()];
    for j in 0..a.cols() {
        let sjj = if j < a.rows() { f.s[(j, j)].clone() } else { BigInt::zero() };
        if sjj.is_zero() {
            if !bv[j].is_zero() {
                return None;
            }
        } else {
            let (q, r) = bv[j].div_rem(&sjj);
            if !r.is_zero() {
                return None;
            }
            d[j] = q;
        }
    }
    Some(f.u.left_mul_vec(&IntVector(d)))
}

/// Nonnegative integers `c` with `sum c_i gens_i = target`, or `None`.
///
/// A positive grading is derived from the cone of `gens`; a non-pointed cone
/// is rejected.
pub fn solve_nonneg_integral(gens: &[IntVector], target: &IntVector) -> Result<Option<Vec<BigInt>>> {
    for g in gens {
        if g.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: g.len(),
            });
        }
    }
    if target.is_zero() {
        return Ok(Some(vec![BigInt::zero(); gens.len()]));
    }
    let nonzero: Vec<IntVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() || !Lattice::from_vectors(&nonzero, target.len())?.contains(target) {
        return Ok(None);
    }
    let grading = crate::polycone::positive_grading(&nonzero, target.len())?.ok_or_else(|| {
        Error::Unsupported("cone of the generators is not pointed; no positive grading".into())
    })?;
    solve_nonneg_integral_graded(gens, target, &grading)
}

/// Branch and bound over generator multiplicities, bounded by the degree of
/// `target` under `grading`. Every nonzero generator must have positive degree.
pub fn solve_nonneg_integral_graded(
    gens: &[IntVector],
    target: &IntVector,
    grading: &IntVector,
) -> Result<Option<Vec<BigInt>>> {
    let mut order: Vec<(usize, BigInt)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let d = g.dot(grading);
        if !d.is_positive() {
            return Err(Error::Unsupported(format!(
                "generator {g} has nonpositive degree {d} under the grading"
            )));
        }
        order.push((i, d));
    }
    // Largest degree first keeps the branching factor small.
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let target_deg = target.dot(grading);
    if target_deg.is_negative() {
        return Ok(None);
    }
    let mut search = NonnegSearch {
        gens,
        order: &order,
        grading,
        failed: HashSet::new(),
        coeffs: vec![BigInt::zero(); gens.len()],
    };
    if search.dfs(0, target.clone(), target_deg) {
        Ok(Some(search.coeffs))
    } else {
        Ok(None)
    }
}

struct NonnegSearch<'a> {
    gens: &'a [IntVector],
    order: &'a [(usize, BigInt)],
    grading: &'a IntVector,
    failed: HashSet<(usize, IntVector)>,
    coeffs: Vec<BigInt>,
}

impl NonnegSearch<'_> {
    fn dfs(&mut self, pos: usize, rem: IntVector, deg: BigInt) -> bool {
        if deg.is_zero() {
            return rem.is_zero();
        }
        if pos == self.order.len() {
            return false;
        }
        let key = (pos, rem.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let (order, gens, grading) = (self.order, self.gens, self.grading);
        let (gi, gdeg) = &order[pos];
        let gi = *gi;
        let g = &gens[gi];
        let max_mult = &deg / gdeg;
        let mut k = max_mult.clone();
        let mut cur = &rem - &g.scale(&max_mult);
        loop {
            let cur_deg = cur.dot(grading);
            if self.dfs(pos + 1, cur.clone(), cur_deg) {
                self.coeffs[gi] = k;
                return true;
            }
            if k.is_zero() {
                break;
            }
            k -= 1;
            cur = &cur + g;
        }
        self.failed.insert(key);
        false
    }
}

/// Gaussian elimination over the rationals: one solution `x` of `a x = b`.
pub fn rational_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b.iter())
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !m[i][cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

pub fn to_rational_vec(v: &IntVector) -> Vec<BigRational> {
    v.iter().map(|e| BigRational::from_integer(e.clone())).collect()
}

/// Least common multiple of the denominators.
pub fn denominator_lcm(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match p {
                None => seen_zero = true,
                Some(p) => {
                    if seen_zero || last_pivot.is_some_and(|lp| p <= lp) || !h[(i, p)].is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        if h[(k, p)].is_negative() || h[(k, p)] >= h[(i, p)] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity_and_diagonal() {
        let id = IntMatrix::identity(2);
        assert_eq!(hnf(&id), (id.clone(), id.clone()));
        let d = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(hnf(&d), (d.clone(), id));
    }

    #[test]
    fn hnf_of_4_6_2_4() {
        // Row space of [[4,6],[2,4]]: determinant 4, so h = [[a,b],[0,c]] with a*c = 4;
        // (2,4) and (4,6) - 2*(2,4) = (0,-2) give [[2,0],[0,2]] after reducing.
        let a = m(&[&[4, 6], &[2, 4]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(&[&[2, 0], &[0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert!(u.determinant().abs().is_one());
    }

    #[test]
    fn hnf_rank_deficient_has_zero_rows_last() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (h, u) = hnf(&a);
        assert!(is_hnf(&h));
        assert!(h.row(2).is_zero());
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn snf_examples() {
        let (s, _, _) = snf(&IntMatrix::zeros(2, 3));
        assert!(s.is_zero());
        let (s, u, v) = snf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m(&[&[2, 4], &[6, 8]])).mul(&v), s);
        let (s, _, _) = snf(&IntMatrix::identity(2));
        assert_eq!(s, IntMatrix::identity(2));
    }

    #[test]
    fn snf_inverses_are_inverses() {
        let a = m(&[&[3, 5, 7], &[2, 8, -4], &[0, 6, 9]]);
        let f = SmithForm::compute(&a);
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(3));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(3));
        assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
    }

    #[test]
    fn lattice_from_vectors_examples() {
        let l = Lattice::from_vectors(&[iv![1, 0], iv![0, 1]], 2).unwrap();
        assert_eq!(l, Lattice::full(2));
        let even = Lattice::from_vectors(&[iv![2, 0], iv![0, 2], iv![1, 1]], 2).unwrap();
        assert_eq!(even.rank(), 2);
        assert!(even.contains(&iv![1, 1]));
        assert!(even.contains(&iv![3, -1]));
        assert!(!even.contains(&iv![1, 0]));
        assert!(!even.contains(&iv![0, 1]));
        let l3 = Lattice::from_vectors(&[iv![1, 0, 1], iv![0, 1, 1]], 3).unwrap();
        assert_eq!(l3.rank(), 2);
        let empty = Lattice::from_vectors(&[], 3).unwrap();
        assert_eq!(empty.rank(), 0);
    }

    #[test]
    fn saturate_examples() {
        let l = Lattice::from_vectors(&[iv![2, 0]], 2).unwrap();
        assert_eq!(saturate(&l), Lattice::from_vectors(&[iv![1, 0]], 2).unwrap());
        let even = Lattice::from_vectors(&[iv![2, 0], iv![1, 1]], 2).unwrap();
        assert_eq!(saturate(&even), Lattice::full(2));
        let l = Lattice::from_vectors(&[iv![2, 4, 6]], 3).unwrap();
        assert_eq!(saturate(&l), Lattice::from_vectors(&[iv![1, 2, 3]], 3).unwrap());
    }

    #[test]
    fn saturated_frame_coordinates() {
        let l = Lattice::from_vectors(&[iv![2, 4, 6], iv![0, 3, 3]], 3).unwrap();
        let fr = SaturatedFrame::of(&l);
        for v in l.basis_vectors() {
            assert!(fr.in_span(&v));
            let c = fr.coordinates(&v);
            assert_eq!(fr.basis.left_mul_vec(&c), v);
        }
        assert!(!fr.in_span(&iv![1, 0, 0]));
    }

    #[test]
    fn unimodular_elements() {
        assert!(is_unimodular_element(&iv![-1, 1, 1, 0], &Lattice::full(4)).unwrap());
        assert!(!is_unimodular_element(&iv![2, 0], &Lattice::full(2)).unwrap());
        let even = Lattice::from_vectors(&[iv![1, 1], iv![1, -1]], 2).unwrap();
        assert!(!is_unimodular_element(&iv![2, 2], &even).unwrap());
        assert!(is_unimodular_element(&iv![1, 1], &even).unwrap());
        assert!(matches!(
            is_unimodular_element(&iv![1, 0], &even),
            Err(Error::Membership(_))
        ));
    }

    #[test]
    fn torsionfree_quotients() {
        let z2 = Lattice::full(2);
        assert!(quotient_is_torsionfree(&z2, &[iv![1, 0]]).unwrap());
        assert!(!quotient_is_torsionfree(&z2, &[iv![2, 0]]).unwrap());
        let z3 = Lattice::full(3);
        assert!(!quotient_is_torsionfree(&z3, &[iv![1, 1, 0], iv![1, -1, 0]]).unwrap());
        assert_eq!(
            torsion_invariants(&z3, &[iv![1, 1, 0], iv![1, -1, 0]]).unwrap(),
            vec![BigInt::from(2)]
        );
    }

    #[test]
    fn surjectivity_of_forms() {
        assert!(forms_surject(&[iv![1, 0, 0], iv![0, 1, 0]], &Lattice::full(3)));
        assert!(!forms_surject(&[iv![2, 0]], &Lattice::full(2)));
        assert!(!forms_surject(&[iv![1, 1], iv![1, -1]], &Lattice::full(2)));
        // more forms than the rank can never surject
        assert!(!forms_surject(&[iv![1], iv![1]], &Lattice::full(1)));
    }

    #[test]
    fn nonneg_solutions() {
        let c = solve_nonneg_integral(&[iv![1, 0], iv![0, 1]], &iv![2, 3]).unwrap();
        assert_eq!(c, Some(vec![BigInt::from(2), BigInt::from(3)]));
        assert_eq!(solve_nonneg_integral(&[iv![2]], &iv![3]).unwrap(), None);
        let gens = [iv![1, 0, 1], iv![0, 1, 1], iv![1, 1, 1]];
        let c = solve_nonneg_integral(&gens, &iv![1, 1, 2]).unwrap();
        assert_eq!(c, Some(vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]));
        assert!(matches!(
            solve_nonneg_integral(&[iv![1], iv![-1]], &iv![3]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn integral_systems() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integral(&a, &iv![4, 9]), Some(iv![2, 3]));
        assert_eq!(solve_integral(&a, &iv![1, 0]), None);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[2, 2, 1], &[2, 1, 2], &[1, 2, 2]]).determinant(), BigInt::from(-5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert!(m(&[&[1, 2], &[2, 4]]).determinant().is_zero());
    }
}
