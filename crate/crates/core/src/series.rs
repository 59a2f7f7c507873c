//! Truncated multivariate power series in the fine grading and univariate
//! rational functions with denominators `(1-T^q)^p`.
//!
//! Multivariate exponents are integer vectors whose last coordinate is the
//! standard degree; truncation bounds that coordinate only.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlat::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    num_vars: usize,
    truncation_degree: usize,
    terms: BTreeMap<IntVector, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(num_vars: usize, truncation_degree: usize) -> Self {
        assert!(num_vars >= 1, "a series needs at least one variable");
        TruncatedSeries {
            num_vars,
            truncation_degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize, truncation_degree: usize) -> Self {
        let mut s = Self::zero(num_vars, truncation_degree);
        s.add_term(IntVector::zeros(num_vars), BigInt::one());
        s
    }

    /// Univariate series with coefficients `coeffs[0..=n]`, truncated at `n`.
    pub fn univariate(coeffs: &[BigInt]) -> Self {
        assert!(!coeffs.is_empty());
        let mut s = Self::zero(1, coeffs.len() - 1);
        for (i, c) in coeffs.iter().enumerate() {
            s.add_term(IntVector::from_i64s(&[i as i64]), c.clone());
        }
        s
    }

    pub fn univariate_i64(coeffs: &[i64]) -> Self {
        Self::univariate(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    /// Geometric series `1/(1 - T^g)` truncated at `n`.
    pub fn geometric(g: &IntVector, n: usize) -> Result<Self> {
        let step = degree_of(g)?;
        if step <= 0 {
            return Err(Error::precondition("positive degree", format!("exponent {g} has nonpositive degree")));
        }
        let mut s = Self::zero(g.len(), n);
        let mut e = IntVector::zeros(g.len());
        while degree_of(&e)? <= n as i64 {
            s.add_term(e.clone(), BigInt::one());
            e = &e + g;
        }
        Ok(s)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn truncation_degree(&self) -> usize {
        self.truncation_degree
    }

    pub fn terms(&self) -> &BTreeMap<IntVector, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &IntVector) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Adds `c T^exp`; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, exp: IntVector, c: BigInt) {
        assert_eq!(exp.len(), self.num_vars, "exponent length");
        if c.is_zero() {
            return;
        }
        match exp.last().and_then(num_traits::ToPrimitive::to_i64) {
            Some(d) if d >= 0 && d as usize <= self.truncation_degree => {}
            _ => return,
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut s = Self::zero(self.num_vars, n.min(self.truncation_degree));
        for (e, c) in &self.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let n = self.truncation_degree.min(other.truncation_degree);
        let mut by_degree: Vec<Vec<(&IntVector, &BigInt)>> = vec![Vec::new(); n + 1];
        for (e, c) in &other.terms {
            let d = degree_of(e)? as usize;
            if d <= n {
                by_degree[d].push((e, c));
            }
        }
        let mut s = Self::zero(self.num_vars, n);
        for (ea, ca) in &self.terms {
            let da = degree_of(ea)? as usize;
            if da > n {
                continue;
            }
            for bucket in &by_degree[..=n - da] {
                for (eb, cb) in bucket {
                    s.add_term(ea + *eb, ca * *cb);
                }
            }
        }
        Ok(s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut s = self.truncate(other.truncation_degree);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    /// `(1 - T^g) * self`.
    pub fn apply_one_minus_tg(&self, g: &IntVector) -> Result<Self> {
        if g.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: g.len(),
            });
        }
        if degree_of(g)? <= 0 {
            return Err(Error::precondition("positive degree", format!("exponent {g} has nonpositive degree")));
        }
        let mut s = self.clone();
        for (e, c) in &self.terms {
            s.add_term(e + g, -c);
        }
        Ok(s)
    }

    /// Sums coefficients by standard degree, giving a univariate series.
    pub fn specialize(&self) -> Self {
        let mut s = Self::zero(1, self.truncation_degree);
        for (e, c) in &self.terms {
            let d = e.last().expect("nonempty").clone();
            s.add_term(IntVector(vec![d]), c.clone());
        }
        s
    }

    /// Coefficients `0..=truncation` of a univariate series.
    pub fn coeffs(&self) -> Vec<BigInt> {
        assert_eq!(self.num_vars, 1, "coeffs() needs a univariate series");
        (0..=self.truncation_degree)
            .map(|i| self.coefficient(&IntVector::from_i64s(&[i as i64])))
            .collect()
    }

    /// True iff every coefficient is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.terms.values().all(|c| c.is_one())
    }

    /// Standard degrees where two series differ, up to the common truncation.
    pub fn mismatched_degrees(&self, other: &Self) -> Vec<usize> {
        let n = self.truncation_degree.min(other.truncation_degree);
        let a = self.truncate(n);
        let b = other.truncate(n);
        let mut out: Vec<usize> = Vec::new();
        for e in a.terms.keys().chain(b.terms.keys()) {
            if a.coefficient(e) != b.coefficient(e) {
                let d = degree_of(e).expect("small degree") as usize;
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Equality up to the smaller of the two truncations.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.mismatched_degrees(other).is_empty()
    }
}

fn degree_of(e: &IntVector) -> Result<i64> {
    e.last()
        .and_then(num_traits::ToPrimitive::to_i64)
        .ok_or_else(|| Error::Unsupported(format!("degree of {e} out of range")))
}

/// `numerator / (1 - T^q)^pole_order` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSeries {
    numerator: Vec<BigInt>,
    q: usize,
    pole_order: usize,
}

impl RationalSeries {
    pub fn new(numerator: Vec<BigInt>, q: usize, pole_order: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::precondition("q > 0", "denominator period must be positive"));
        }
        let mut numerator = numerator;
        while numerator.last().is_some_and(Zero::is_zero) {
            numerator.pop();
        }
        let mut pole_order = pole_order;
        if numerator.is_empty() {
            pole_order = 0;
        }
        while pole_order > 0 {
            match divide_one_minus_tq(&numerator, q) {
                Some(quot) => {
                    numerator = quot;
                    pole_order -= 1;
                }
                None => break,
            }
        }
        Ok(RationalSeries {
            numerator,
            q,
            pole_order,
        })
    }

    pub fn from_i64(numerator: &[i64], q: usize, pole_order: usize) -> Result<Self> {
        Self::new(numerator.iter().map(|&c| BigInt::from(c)).collect(), q, pole_order)
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    /// Numerator rewritten over `(1 - T^q)^p` for `p >= pole_order`.
    pub fn numerator_over(&self, p: usize) -> Vec<BigInt> {
        let mut num = self.numerator.clone();
        for _ in self.pole_order..p {
            num = mul_one_minus_tq(&num, self.q);
        }
        num
    }

    pub fn expand(&self, n: usize) -> TruncatedSeries {
        expand_rational(self, n)
    }
}

fn mul_one_minus_tq(num: &[BigInt], q: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); num.len() + q];
    for (i, c) in num.iter().enumerate() {
        out[i] += c;
        out[i + q] -= c;
    }
    out
}

/// Exact quotient of `num` by `1 - T^q`, if it divides.
fn divide_one_minus_tq(num: &[BigInt], q: usize) -> Option<Vec<BigInt>> {
    if num.len() <= q {
        return None;
    }
    let n = num.len() - q;
    let mut quot: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i >= q { quot[i - q].clone() } else { BigInt::zero() };
        quot.push(&num[i] + prev);
    }
    // remainder check on the top q coefficients
    for i in n..num.len() {
        let below = if i >= q { quot.get(i - q).cloned().unwrap_or_default() } else { BigInt::zero() };
        let here = quot.get(i).cloned().unwrap_or_default();
        if num[i] != &here - &below {
            return None;
        }
    }
    Some(quot)
}

/// First `n + 1` coefficients of `r`.
pub fn expand_rational(r: &RationalSeries, n: usize) -> TruncatedSeries {
    // 1/(1-T^q)^p = sum_j C(j+p-1, p-1) T^(jq)
    let p = r.pole_order;
    let mut denom_inv = vec![BigInt::zero(); n + 1];
    if p == 0 {
        denom_inv[0] = BigInt::one();
    } else {
        let mut binom = BigInt::one();
        let mut j = 0usize;
        while j * r.q <= n {
            denom_inv[j * r.q] = binom.clone();
            // C(j+p, p-1) = C(j+p-1, p-1) * (j+p) / (j+1)
            binom = binom * BigInt::from(j + p) / BigInt::from(j + 1);
            j += 1;
        }
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (i, a) in r.numerator.iter().enumerate() {
        if i > n {
            break;
        }
        for k in 0..=n - i {
            if !denom_inv[k].is_zero() {
                coeffs[i + k] += a * &denom_inv[k];
            }
        }
    }
    TruncatedSeries::univariate(&coeffs)
}

/// Recovers `numerator / (1-T^q)^(dim+1)` from a univariate truncated series,
/// verifying that the coefficients beyond the numerator vanish.
pub fn to_rational(a: &TruncatedSeries, q: usize, dim: usize) -> Result<RationalSeries> {
    if a.num_vars() != 1 {
        return Err(Error::precondition("univariate", "to_rational needs a standard-graded series"));
    }
    if q == 0 {
        return Err(Error::precondition("q > 0", "denominator period must be positive"));
    }
    let p = dim + 1;
    let need = q * p + q;
    if a.truncation_degree() < need {
        return Err(Error::precondition(
            "truncation",
            format!("need truncation at least {need}, have {}", a.truncation_degree()),
        ));
    }
    let mut prod = a.coeffs();
    for _ in 0..p {
        let mut next = prod.clone();
        for i in q..prod.len() {
            next[i] -= &prod[i - q];
        }
        prod = next;
    }
    let cut = q * p;
    if let Some(i) = (cut..prod.len()).find(|&i| !prod[i].is_zero()) {
        return Err(Error::NotRational(format!(
            "coefficient {} of the product with (1-T^{q})^{p} is {}",
            i, prod[i]
        )));
    }
    prod.truncate(cut);
    RationalSeries::new(prod, q, p)
}

fn fmt_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
        let abs = c.abs();
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        let body = if i == 0 {
            abs.to_string()
        } else if abs.is_one() {
            mono
        } else {
            format!("{abs}{mono}")
        };
        write!(f, "{sign}{body}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.numerator.iter().filter(|c| !c.is_zero()).count();
        let wrap = terms > 1 && self.pole_order > 0;
        if wrap {
            write!(f, "(")?;
        }
        fmt_poly(f, &self.numerator)?;
        if wrap {
            write!(f, ")")?;
        }
        if self.pole_order > 0 {
            let base = if self.q == 1 { "1-T".to_string() } else { format!("1-T^{}", self.q) };
            if self.pole_order == 1 {
                write!(f, "/({base})")?;
            } else {
                write!(f, "/({base})^{}", self.pole_order)?;
            }
        }
        Ok(())
    }
}

/// Formats a polynomial given by its coefficient list, e.g. `1+3T+5T^2`.
pub fn format_polynomial(coeffs: &[BigInt]) -> String {
    struct P<'a>(&'a [BigInt]);
    impl fmt::Display for P<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_poly(f, self.0)
        }
    }
    P(coeffs).to_string()
}
