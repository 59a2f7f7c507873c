//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use freesum_core::criteria::{check_normal_quotient, check_polytope_free_sum, check_prime, gorenstein_split_check, gorenstein_witness, rational_point_sum_config};
use freesum_core::ehrhart::{ehrhart_monoid, ehrhart_rational, lattice_points};
use freesum_core::exactlat::{quotient_is_torsionfree, IntMatrix, IntVector, Lattice, SmithForm};
use freesum_core::fixtures::{self, PstarReading};
use freesum_core::monoid::{direct_sum, monoid_over, quotient_by_identification, successive_identifications, AffineMonoid};
use freesum_core::oracle;
use freesum_core::polycone::RationalPolytope;
use freesum_core::series::{format_polynomial, RationalSeries, TruncatedSeries};
use freesum_core::{iv, Error};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T>(r: freesum_core::Result<T>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Coefficients of the product of polynomials.
fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn counts_series(c: &[u64]) -> TruncatedSeries {
    TruncatedSeries::univariate(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
}

fn criterion_1() -> Outcome {
    let square = e(fixtures::unit_square())?;
    let r = e(ehrhart_rational(&square))?;
    let expected = e(RationalSeries::from_i64(&[1, 1], 1, 3))?;
    ensure(r == expected, format!("h*-extraction gave {r}"))?;
    let (a, b) = fixtures::diag();
    let n = 20;
    let ha = e(e(monoid_over(&a))?.fine_hilbert_series(n))?;
    let hb = e(e(monoid_over(&b))?.fine_hilbert_series(n))?;
    let prod = e(e(ha.mul(&hb))?.apply_one_minus_tg(&iv![1, 1, 2]))?.specialize();
    let series = r.expand(n);
    ensure(prod.coeffs() == series.coeffs(), "standard specialization differs from (1+T)/(1-T)^3")?;
    let counts = e(oracle::ehrhart_counts(square.vertices(), n))?;
    ensure(series.coeffs() == counts_series(&counts).coeffs(), "oracle counts differ")?;
    Ok(format!("{r} = (1-T^2) H_A H_B to degree {n}"))
}

fn criterion_2() -> Outcome {
    let n = 10;
    let expected_r = "1+3T+5T^2+4T^3+2T^4";
    let expected_prod = "1+3T+4T^2+5T^3+2T^4";
    let mut notes = Vec::new();
    for reading in [PstarReading::Simplex, PstarReading::SevenPoints] {
        let (p, q) = e(fixtures::pstar_qseg(reading))?;
        let mut verts = p.vertices().to_vec();
        verts.extend(q.vertices().iter().cloned());
        let r = e(RationalPolytope::new(verts))?;
        let ep = e(oracle::ehrhart_counts(p.vertices(), n))?;
        let eq = e(oracle::ehrhart_counts(q.vertices(), n))?;
        let er = e(oracle::ehrhart_counts(r.vertices(), n))?;
        let rhs = e(e(counts_series(&ep).mul(&counts_series(&eq)))?.apply_one_minus_tg(&iv![1]))?;
        let mism = counts_series(&er).mismatched_degrees(&rhs);
        ensure(mism.first().is_some_and(|&k| k <= 4), format!("{reading:?}: first mismatch {mism:?}"))?;

        let (a, b) = fixtures::pstar_qseg_points(reading);
        let mut ab = a.clone();
        ab.extend(b.iter().cloned());
        let union = e(monoid_over(&ab))?;
        ensure(!e(union.is_normal())?, format!("{reading:?}: M(A u B) reported normal"))?;
        ensure(!e(oracle::is_normal(union.generators()))?, format!("{reading:?}: oracle finds M(A u B) normal"))?;

        let v = e(check_polytope_free_sum(&p, &q))?;
        let w = &v.check("height_le_1").ok_or("missing height check")?.witness;
        let two = |key: &str| w[key].as_i64().is_some_and(|h| h >= 2);
        ensure(!v.holds && two("max_height_p") && two("max_height_q"), format!("{reading:?}: verdict {w}"))?;

        let np = e(ehrhart_rational(&p))?;
        let nq = e(ehrhart_rational(&q))?;
        let nr = e(ehrhart_rational(&r))?;
        let prod = poly_mul(np.numerator(), nq.numerator());
        let (sr, sp) = (format_polynomial(nr.numerator()), format_polynomial(&prod));
        let flag = if sr == expected_r && sp == expected_prod { "matches" } else { "DIFFERS from" };
        println!("    {reading:?}: E_P = {np}, E_R numerator {sr} vs (1-T)E_P E_Q numerator {sp}; {flag} expected {expected_r} / {expected_prod}");
        notes.push(format!("{reading:?} first mismatch at k={}", mism[0]));
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let n = 15;
    let m = e(fixtures::prism_monoid())?;
    let w0 = m.standard_grading();
    let h0 = e(m.hilbert_series(&w0, n))?;
    ensure(h0.coeffs()[1] == BigInt::from(6), "prism degree-1 coefficient")?;
    let (x, y) = fixtures::prism_first_pair();
    let (u, v) = fixtures::prism_second_pair();
    let chain = e(successive_identifications(&m, &[(x.clone(), y.clone()), (u, v)]))?;
    let mut w = w0;
    let mut prev = h0;
    let mut degree_one = Vec::new();
    for (step, q) in chain.iter().enumerate() {
        let pv = e(check_prime(&q.source, &q.x, &q.y))?;
        let nv = e(check_normal_quotient(&q.source, &q.x, &q.y))?;
        ensure(pv.holds && nv.holds, format!("step {step}: prime {} normal {}", pv.holds, nv.holds))?;
        w = q.descend_functional(&w).ok_or("grading does not descend")?;
        let h = e(q.image.hilbert_series(&w, n))?;
        let expected = e(prev.apply_one_minus_tg(&iv![1]))?;
        ensure(h == expected, format!("step {step}: series is not (1-T) H"))?;
        ensure(e(oracle::is_normal(q.image.generators()))?, format!("step {step}: oracle finds image not normal"))?;
        degree_one.push(h.coeffs()[1].clone());
        prev = h;
    }
    ensure(degree_one == ints(&[5, 4]), format!("degree-1 coefficients {degree_one:?}"))?;
    Ok("degree-1 coefficients 6 -> 5 -> 4, each step (1-T) H".into())
}

/// Random lattice polytope of dimension 2 or 3 with few points.
fn random_polytope(rng: &mut ChaCha8Rng) -> RationalPolytope {
    loop {
        let d = rng.gen_range(2..=3);
        let k = rng.gen_range(d + 1..=d + 3);
        let pts: Vec<IntVector> = (0..k)
            .map(|_| IntVector::from_i64s(&(0..d).map(|_| rng.gen_range(0..=2)).collect::<Vec<_>>()))
            .collect();
        if let Ok(p) = RationalPolytope::from_integer_points(&pts) {
            if p.dim() == d && lattice_points(&p, 1).len() <= 12 {
                return p;
            }
        }
    }
}

/// A normal monoid: `M(P ∩ Z^d)` when normal, otherwise the Ehrhart monoid.
fn random_normal_monoid(rng: &mut ChaCha8Rng) -> freesum_core::Result<AffineMonoid> {
    let p = random_polytope(rng);
    let m = monoid_over(&lattice_points(&p, 1))?;
    if m.is_normal()? {
        Ok(m)
    } else {
        Ok(ehrhart_monoid(&p)?.monoid)
    }
}

/// Elements of degree `deg` in the standard grading.
fn elements_of_degree(m: &AffineMonoid, deg: usize) -> freesum_core::Result<Vec<IntVector>> {
    let by = m.elements_by_degree(&m.standard_grading(), deg)?;
    Ok(by[deg].iter().cloned().collect())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 10;
    let (mut passed, mut torsion) = (0, 0);
    let mut tries = 0;
    while passed < 30 || torsion < 10 {
        tries += 1;
        ensure(tries < 2000, format!("only {passed} prime pairs and {torsion} torsion pairs found"))?;
        let m = e(random_normal_monoid(&mut rng))?;
        let deg = rng.gen_range(1..=2);
        let elems = e(elements_of_degree(&m, deg))?;
        if elems.len() < 2 {
            continue;
        }
        let i = rng.gen_range(0..elems.len());
        let j = rng.gen_range(0..elems.len());
        if i == j {
            continue;
        }
        let (x, y) = (&elems[i], &elems[j]);
        let v = e(check_prime(&m, x, y))?;
        let tf = v.check("torsionfree").map(|c| c.ok).unwrap_or(false);
        if !tf {
            match quotient_by_identification(&m, x, y) {
                Err(Error::Torsion(_)) => torsion += 1,
                other => return Err(format!("expected torsion error for {x} ~ {y}, got {:?}", other.map(|_| ()))),
            }
            continue;
        }
        if !v.holds || passed >= 30 {
            continue;
        }
        let q = e(quotient_by_identification(&m, x, y))?;
        let w = q.descend_functional(&m.standard_grading()).ok_or("grading does not descend")?;
        let lhs = e(q.image.hilbert_series(&w, n))?;
        let g = IntVector::from_i64s(&[deg as i64]);
        let rhs = e(e(m.hilbert_series(&m.standard_grading(), n))?.apply_one_minus_tg(&g))?;
        ensure(lhs == rhs, format!("series mismatch for {x} ~ {y} in {:?}", m.generators()))?;
        let oracle_h = e(oracle::hilbert_function(q.image.generators(), &w, n))?;
        ensure(
            lhs.coeffs() == oracle_h.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(),
            "oracle Hilbert function differs",
        )?;
        passed += 1;
    }
    Ok(format!("{passed} quotients with H = (1-T^g) H_M, {torsion} torsion pairs rejected"))
}

/// `E([-a, b]) ⊕ E([-c, d])` with the two origins identified.
fn segment_sum(a: i64, b: i64, c: i64, d: i64) -> freesum_core::Result<(AffineMonoid, IntVector, IntVector)> {
    let s1 = ehrhart_monoid(&RationalPolytope::from_integer_points(&[iv![-a], iv![b]])?)?.monoid;
    let s2 = ehrhart_monoid(&RationalPolytope::from_integer_points(&[iv![-c], iv![d]])?)?.monoid;
    Ok((direct_sum(&s1, &s2)?, iv![0, 1, 0, 0], iv![0, 0, 0, 1]))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut agree, mut normal, mut tries) = (0, 0, 0);
    while agree < 30 {
        tries += 1;
        ensure(tries < 3000, format!("only {agree} instances after {tries} tries"))?;
        let (m, x, y) = if agree % 3 == 2 {
            let mut r = || rng.gen_range(1..=3);
            let (a, b, c, d) = (r(), r(), r(), r());
            e(segment_sum(a, b, c, d))?
        } else {
            let m = e(random_normal_monoid(&mut rng))?;
            let elems = e(elements_of_degree(&m, 1))?;
            if elems.len() < 2 {
                continue;
            }
            let i = rng.gen_range(0..elems.len());
            let j = rng.gen_range(0..elems.len());
            if i == j {
                continue;
            }
            let (x, y) = (elems[i].clone(), elems[j].clone());
            (m, x, y)
        };
        if !e(check_prime(&m, &x, &y))?.holds {
            continue;
        }
        let v = e(check_normal_quotient(&m, &x, &y))?;
        let q = e(quotient_by_identification(&m, &x, &y))?;
        let engine = e(q.image.is_normal())?;
        let brute = e(oracle::is_normal(q.image.generators()))?;
        ensure(
            v.holds == engine && engine == brute,
            format!("{x} ~ {y} in {:?}: verdict {} engine {engine} oracle {brute}", m.generators(), v.holds),
        )?;
        agree += 1;
        normal += usize::from(brute);
    }
    ensure(normal > 0 && normal < agree, format!("degenerate sample: {normal} of {agree} normal"))?;
    Ok(format!("{agree} agreements ({normal} normal, {} not), zero disagreements", agree - normal))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let r = rng.gen_range(1..=6);
    let c = rng.gen_range(1..=6);
    let mut m = IntMatrix::zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            m[(i, j)] = BigInt::from(rng.gen_range(-20..=20));
        }
    }
    m
}

/// Unimodular matrix as a product of elementary row operations.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    loop {
        let mut w = IntMatrix::identity(n);
        for _ in 0..n * 2 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let t = BigInt::from(rng.gen_range(-1..=1));
            for k in 0..n {
                let add = &w[(j, k)] * &t;
                w[(i, k)] += add;
            }
        }
        let small = (0..n).all(|i| (0..n).all(|k| w[(i, k)].magnitude() <= &3u32.into()));
        if small {
            return w;
        }
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..100 {
        let m = random_matrix(&mut rng);
        let f = SmithForm::compute(&m);
        ensure(f.u.mul(&m).mul(&f.v) == f.s, format!("matrix {t}: u m v != s"))?;
        ensure(f.u.mul(&f.u_inv) == IntMatrix::identity(m.rows()), format!("matrix {t}: u not unimodular"))?;
        ensure(f.v.mul(&f.v_inv) == IntMatrix::identity(m.cols()), format!("matrix {t}: v not unimodular"))?;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                ensure(i == j || f.s[(i, j)].is_zero(), format!("matrix {t}: s not diagonal"))?;
            }
        }
        let d: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| f.s[(i, i)].clone()).collect();
        for k in 1..d.len() {
            let chain = if d[k - 1].is_zero() { d[k].is_zero() } else { d[k].is_multiple_of(&d[k - 1]) };
            ensure(chain && d[k] >= BigInt::zero(), format!("matrix {t}: divisibility chain {d:?}"))?;
        }
        ensure(BigInt::from(m.rank()) == BigInt::from(d.iter().filter(|x| !x.is_zero()).count()), "rank")?;
    }
    let (mut free, mut torsion) = (0, 0);
    for t in 0..100 {
        let r = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=r);
        let w = random_unimodular(&mut rng, r);
        let vs: Vec<IntVector> = (0..k)
            .map(|i| {
                let d = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
                w.row(i).scale(&BigInt::from(d))
            })
            .collect();
        let engine = e(quotient_is_torsionfree(&Lattice::full(r), &vs))?;
        let brute = e(oracle::torsion_witness(&vs, r, 3, 3))?;
        ensure(engine == brute.is_none(), format!("instance {t}: engine {engine}, brute {brute:?}"))?;
        if engine {
            free += 1;
        } else {
            torsion += 1;
        }
    }
    Ok(format!("100 Smith forms exact; torsion search agrees on 100 ({free} free, {torsion} torsion)"))
}

fn criterion_7() -> Outcome {
    let cube = e(fixtures::cube_monoid())?;
    let w = e(gorenstein_witness(&cube))?.ok_or("no witness")?;
    ensure(w == iv![1, 1, 1, 2], format!("witness {w}"))?;
    let hs = e(cube.heights(&w))?;
    ensure(hs.len() == 6 && hs.iter().all(One::is_one), format!("heights {hs:?}"))?;
    let bh = e(oracle::BruteCone::new(cube.generators()).and_then(|c| c.heights(&w)))?;
    ensure(bh == vec![BigInt::one(); 6], "oracle heights")?;
    let xs = fixtures::cube_split();
    let v = e(gorenstein_split_check(&cube, &xs))?;
    ensure(v.holds, format!("split verdict {:?}", v.checks))?;
    let q = e(quotient_by_identification(&cube, &xs[0], &xs[1]))?;
    ensure(e(oracle::is_normal(q.image.generators()))?, "oracle finds quotient not normal")?;
    ensure(q.image.rank() == 3, format!("quotient rank {}", q.image.rank()))?;
    Ok("w = (1,1,1,2), split passes, quotient normal of rank 3".into())
}

fn criterion_8() -> Outcome {
    let (a, b) = fixtures::diag();
    let c = e(rational_point_sum_config(&a, &b))?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    ensure(c.p0 == vec![half.clone(), half], "p0")?;
    ensure(c.k == BigInt::from(2) && c.junction == iv![1, 1, 2], format!("k {} junction {}", c.k, c.junction))?;
    let id = e(c.verify_identity(10))?;
    ensure(id.holds, format!("mismatched degrees {:?}", id.mismatched_degrees))?;
    Ok(format!("p0 = (1/2,1/2), k = 2, fine identity exact to degree 10 ({} terms)", id.lhs.terms().len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("unit square Ehrhart series and DIAG factorization", criterion_1, 1),
        ("free sum counterexample PSTAR/QSEG", criterion_2, 10),
        ("prism identification chain", criterion_3, 2),
        ("quotient Hilbert series on random normal monoids", criterion_4, 60),
        ("normality verdict vs oracle", criterion_5, 120),
        ("exact Smith forms and torsion search", criterion_6, 10),
        ("Gorenstein split of the cube", criterion_7, 2),
        ("rational point sum DIAG", criterion_8, 1),
    ];
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*budget);
        let (status, detail) = match &result {
            Ok(d) if elapsed <= limit => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget}s")),
            Err(d) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {}: {status} [{:.2}s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures > 0 {
        eprintln!("{failures} criteria failed");
        std::process::exit(1);
    }
}
