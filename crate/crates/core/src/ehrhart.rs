//! Lattice-point counting in dilates of rational polytopes, Ehrhart series
//! in the standard and fine gradings, and the Ehrhart monoid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlat::{IntVector, Lattice};
use crate::monoid::{hilbert_basis, AffineMonoid};
use crate::polycone::{polytope_denominator, RationalPolytope};
use crate::series::{to_rational, RationalSeries, TruncatedSeries};

/// The monoid of lattice points `(x, k)` with `x` in `kP`.
#[derive(Clone, Debug)]
pub struct EhrhartMonoid {
    pub polytope: RationalPolytope,
    pub monoid: AffineMonoid,
}

/// Integer arithmetic used by the enumerator: `i128` when the data are
/// small, `BigInt` otherwise.
trait Num: Integer + Signed + Clone + From<i64> {}
impl<T: Integer + Signed + Clone + From<i64>> Num for T {}

/// Constraints `a . (x, k) >= 0` and `e . (x, k) = 0` specialized to `k`,
/// as pairs (coefficients on x, constant term).
struct Slice<T> {
    ineqs: Vec<(Vec<T>, T)>,
    eqs: Vec<(Vec<T>, T)>,
    bounds: Vec<(T, T)>,
}

fn slice_of<T: Num>(p: &RationalPolytope, k: &BigInt, conv: impl Fn(&BigInt) -> T) -> Slice<T> {
    let m = p.ambient_dim();
    let split = |v: &IntVector| -> (Vec<T>, T) {
        let a: Vec<T> = v.iter().take(m).map(&conv).collect();
        (a, conv(&(&v[m] * k)))
    };
    let cone = p.cone();
    Slice {
        ineqs: cone.facets().iter().map(|f| split(&f.coeffs)).collect(),
        eqs: cone.equations().iter().map(split).collect(),
        bounds: p.integer_box(k).iter().map(|(lo, hi)| (conv(lo), conv(hi))).collect(),
    }
}

fn fits_i128(p: &RationalPolytope, k: &BigInt) -> bool {
    let limit = BigInt::one() << 40;
    let small = |v: &IntVector| v.iter().all(|e| e.abs() < limit);
    let cone = p.cone();
    k.abs() < limit
        && cone.facets().iter().all(|f| small(&f.coeffs))
        && cone.equations().iter().all(|e| small(e))
        && p.integer_box(k).iter().all(|(lo, hi)| lo.abs() < limit && hi.abs() < limit)
        && p.ambient_dim() <= 16
}

/// Calls `visit(prefix, lo, hi)` for each run of points `(prefix, t)` of `kP`
/// with `lo <= t <= hi` in the last coordinate.
fn scan<T: Num>(s: &Slice<T>, visit: &mut dyn FnMut(&[T], &T, &T)) {
    let m = s.bounds.len();
    if m == 0 {
        if s.ineqs.iter().all(|(_, c)| !c.is_negative()) && s.eqs.iter().all(|(_, c)| c.is_zero()) {
            visit(&[], &T::zero(), &T::from(-1));
        }
        return;
    }
    let mut prefix: Vec<T> = Vec::with_capacity(m);
    scan_rec(s, &mut prefix, visit);
}

fn partial<T: Num>(a: &[T], c: &T, prefix: &[T]) -> T {
    let mut acc = c.clone();
    for (ai, xi) in a.iter().zip(prefix) {
        if !ai.is_zero() {
            acc = acc + ai.clone() * xi.clone();
        }
    }
    acc
}

fn scan_rec<T: Num>(s: &Slice<T>, prefix: &mut Vec<T>, visit: &mut dyn FnMut(&[T], &T, &T)) {
    let m = s.bounds.len();
    let j = prefix.len();
    if j + 1 == m {
        // innermost coordinate: intersect the half-lines a_j t >= -rest
        let (mut lo, mut hi) = s.bounds[j].clone();
        for (a, c) in &s.ineqs {
            let rest = partial(a, c, prefix);
            let aj = &a[j];
            if aj.is_zero() {
                if rest.is_negative() {
                    return;
                }
            } else if aj.is_positive() {
                let b = (T::zero() - rest).div_ceil(aj);
                if b > lo {
                    lo = b;
                }
            } else {
                let b = rest.div_floor(&(T::zero() - aj.clone()));
                if b < hi {
                    hi = b;
                }
            }
            if lo > hi {
                return;
            }
        }
        for (a, c) in &s.eqs {
            let rest = partial(a, c, prefix);
            let aj = &a[j];
            if aj.is_zero() {
                if !rest.is_zero() {
                    return;
                }
            } else {
                let (t, r) = (T::zero() - rest).div_rem(aj);
                if !r.is_zero() || t < lo || t > hi {
                    return;
                }
                lo = t.clone();
                hi = t;
            }
        }
        visit(prefix, &lo, &hi);
        return;
    }
    let (lo, hi) = s.bounds[j].clone();
    let mut t = lo;
    while t <= hi {
        prefix.push(t.clone());
        scan_rec(s, prefix, visit);
        prefix.pop();
        t = t + T::one();
    }
}

/// Number of lattice points in `kP`.
pub fn count_points(p: &RationalPolytope, k: u64) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    let kb = BigInt::from(k);
    if fits_i128(p, &kb) {
        let s = slice_of::<i128>(p, &kb, |b| b.to_i128().expect("checked bound"));
        let mut total: i128 = 0;
        scan(&s, &mut |_, lo, hi| total += hi - lo + 1);
        BigInt::from(total)
    } else {
        let s = slice_of::<BigInt>(p, &kb, Clone::clone);
        let mut total = BigInt::zero();
        scan(&s, &mut |_, lo, hi| total += hi - lo + BigInt::one());
        total
    }
}

/// All lattice points of `kP`, in lexicographic order.
pub fn lattice_points(p: &RationalPolytope, k: u64) -> Vec<IntVector> {
    let m = p.ambient_dim();
    if k == 0 {
        return vec![IntVector::zeros(m)];
    }
    let kb = BigInt::from(k);
    let s = slice_of::<BigInt>(p, &kb, Clone::clone);
    let mut out = Vec::new();
    scan(&s, &mut |prefix, lo, hi| {
        if m == 0 {
            out.push(IntVector::zeros(0));
            return;
        }
        let mut t = lo.clone();
        while &t <= hi {
            let mut v = prefix.to_vec();
            v.push(t.clone());
            out.push(IntVector(v));
            t += 1;
        }
    });
    out
}

/// `E(P, 0..=n)` as a univariate series.
pub fn ehrhart_series_truncated(p: &RationalPolytope, n: usize) -> TruncatedSeries {
    let coeffs: Vec<BigInt> = (0..=n as u64).map(|k| count_points(p, k)).collect();
    TruncatedSeries::univariate(&coeffs)
}

/// The Ehrhart series as `h*(T) / (1 - T^q)^(dim+1)`.
pub fn ehrhart_rational(p: &RationalPolytope) -> Result<RationalSeries> {
    let q = polytope_denominator(p)
        .to_usize()
        .ok_or_else(|| Error::Resource("polytope denominator too large".into()))?;
    let d = p.dim();
    let series = ehrhart_series_truncated(p, q * (d + 2));
    to_rational(&series, q, d).map_err(|e| match e {
        Error::NotRational(s) => Error::Internal(format!("Ehrhart series failed to close: {s}")),
        other => other,
    })
}

/// Sum of `T^(x, k)` over the Ehrhart monoid, for `k <= n`.
pub fn fine_ehrhart_truncated(p: &RationalPolytope, n: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(p.ambient_dim() + 1, n);
    for k in 0..=n as u64 {
        let kk = IntVector::from_i64s(&[k as i64]);
        for x in lattice_points(p, k) {
            s.add_term(x.concat(&kk), BigInt::one());
        }
    }
    s
}

/// The Ehrhart monoid, generated by the Hilbert basis of `cone(P x {1})`.
pub fn ehrhart_monoid(p: &RationalPolytope) -> Result<EhrhartMonoid> {
    let amb = p.ambient_dim() + 1;
    let hb = hilbert_basis(p.cone(), &Lattice::full(amb))?;
    Ok(EhrhartMonoid {
        polytope: p.clone(),
        monoid: AffineMonoid::new(hb, amb)?,
    })
}
