use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use freesum_core::criteria::{
    check_normal_mult_with, check_normal_quotient_with, check_polytope_free_sum_with, check_prime_mult_with,
    check_prime_with, check_rational_ee_with, gorenstein_split_check_with, CheckOptions, NormalityMode,
    PairingMode, Verdict,
};
use freesum_core::ehrhart::{count_points, ehrhart_rational, ehrhart_series_truncated};
use freesum_core::exactlat::IntVector;
use freesum_core::io::{self, ints_to_json};
use freesum_core::monoid::{monoid_over, AffineMonoid};
use freesum_core::polycone::RationalPolytope;
use freesum_core::{oracle, Error, Result};

#[derive(Parser)]
#[command(name = "freesum", version, about = "Exact checks for binomial quotients of affine monoids and free sums of polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct CriteriaFlags {
    /// Trust that the monoid is normal instead of verifying it
    #[arg(long)]
    assert_normal: bool,
    /// Pair each height with the facet not containing the point (false: any height 1 suffices)
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict_normal_pairing: bool,
}

impl CriteriaFlags {
    fn options(&self, truncation: Option<usize>) -> CheckOptions {
        CheckOptions {
            normality: if self.assert_normal { NormalityMode::Asserted } else { NormalityMode::Verify },
            pairing: if self.strict_normal_pairing { PairingMode::Proof } else { PairingMode::Literal },
            truncation,
        }
    }
}

#[derive(Args)]
struct PairArgs {
    /// Monoid JSON file
    #[arg(long)]
    monoid: PathBuf,
    /// First element, e.g. "0 1 1 1"
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Second element
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[command(flatten)]
    flags: CriteriaFlags,
}

#[derive(Args)]
struct MultArgs {
    /// Monoid JSON file
    #[arg(long)]
    monoid: PathBuf,
    /// Elements, repeated once per element
    #[arg(long = "x", required = true, allow_hyphen_values = true)]
    xs: Vec<String>,
    #[command(flatten)]
    flags: CriteriaFlags,
}

#[derive(Args)]
struct SumArgs {
    /// Polytope JSON file for P
    #[arg(long)]
    p: PathBuf,
    /// Polytope JSON file for Q
    #[arg(long)]
    q: PathBuf,
    /// Truncation degree of the series comparison
    #[arg(long)]
    trunc: Option<usize>,
    /// Place P and Q in complementary coordinates (free-sum; implied when
    /// their dimensions differ)
    #[arg(long)]
    embed: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ehrhart series of a rational polytope
    Ehrhart {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, default_value_t = 10)]
        trunc: usize,
        /// Also extract the rational form
        #[arg(long)]
        rational: bool,
    },
    /// Primeness of the binomial X^x - X^y
    CheckPrime(PairArgs),
    /// Primeness of the ideal of X^x1 = ... = X^xn
    CheckPrimeMult(MultArgs),
    /// Normality of the quotient identifying x and y
    CheckNormal(PairArgs),
    /// Normality of the quotient identifying x1, ..., xn
    CheckNormalMult(MultArgs),
    /// Normality of the free sum of P and Q; polytopes of different
    /// dimensions are placed in complementary coordinates first
    FreeSum(SumArgs),
    /// Normality when the affine hulls of P and Q meet in one rational point
    RationalSum(SumArgs),
    /// Splitting of the canonical generator into x1 + ... + xn
    Gorenstein(MultArgs),
    /// Brute-force recomputation compared against the engines
    Oracle {
        #[command(subcommand)]
        task: OracleTask,
    },
}

#[derive(Subcommand)]
enum OracleTask {
    /// Lattice point counts of the dilates by box enumeration
    Ehrhart {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, default_value_t = 5)]
        trunc: usize,
    },
    /// Normality by comparing the monoid with the lattice points of its cone
    Normality {
        /// Monoid JSON file
        #[arg(long, conflicts_with = "points")]
        monoid: Option<PathBuf>,
        /// Points JSON file; the monoid is generated by the points at height 1
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Ehrhart counts of random lattice polygons against the engine
    Random {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn vectors(xs: &[String]) -> Result<Vec<IntVector>> {
    xs.iter().map(|s| io::parse_int_vector(s)).collect()
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn run(cli: &Cli) -> Result<Value> {
    Ok(match &cli.command {
        Command::Ehrhart { polytope, trunc, rational } => {
            let p = io::parse_polytope(&read(polytope)?)?;
            let s = ehrhart_series_truncated(&p, *trunc);
            let mut out = json!({"command": "ehrhart", "series": io::truncated_to_json(&s)});
            if *rational {
                let r = ehrhart_rational(&p)?;
                out["rational"] = io::rational_to_json(&r);
                out["rational_text"] = json!(r.to_string());
            }
            out
        }
        Command::CheckPrime(a) | Command::CheckNormal(a) => {
            let m = io::parse_monoid(&read(&a.monoid)?)?;
            let (x, y) = (io::parse_int_vector(&a.x)?, io::parse_int_vector(&a.y)?);
            let opts = a.flags.options(None);
            let (name, v) = match &cli.command {
                Command::CheckPrime(_) => ("check-prime", check_prime_with(&m, &x, &y, &opts)?),
                _ => ("check-normal", check_normal_quotient_with(&m, &x, &y, &opts)?),
            };
            json!({"command": name, "verdict": verdict_json(&v)})
        }
        Command::CheckPrimeMult(a) | Command::CheckNormalMult(a) | Command::Gorenstein(a) => {
            let m = io::parse_monoid(&read(&a.monoid)?)?;
            let xs = vectors(&a.xs)?;
            let opts = a.flags.options(None);
            let (name, v) = match &cli.command {
                Command::CheckPrimeMult(_) => ("check-prime-mult", check_prime_mult_with(&m, &xs, &opts)?),
                Command::CheckNormalMult(_) => ("check-normal-mult", check_normal_mult_with(&m, &xs, &opts)?),
                _ => ("gorenstein", gorenstein_split_check_with(&m, &xs, &opts)?),
            };
            json!({"command": name, "verdict": verdict_json(&v)})
        }
        Command::FreeSum(a) | Command::RationalSum(a) => {
            let mut p = io::parse_polytope(&read(&a.p)?)?;
            let mut q = io::parse_polytope(&read(&a.q)?)?;
            let (m, n) = (p.ambient_dim(), q.ambient_dim());
            if matches!(cli.command, Command::FreeSum(_)) && (m != n || a.embed) {
                // place P and Q in complementary coordinates of R^(m+n)
                p = p.embed(m + n, 0)?;
                q = q.embed(m + n, m)?;
            }
            let opts = CheckOptions {
                truncation: a.trunc,
                ..CheckOptions::default()
            };
            let (name, v) = match &cli.command {
                Command::FreeSum(_) => ("free-sum", check_polytope_free_sum_with(&p, &q, &opts)?),
                _ => ("rational-sum", check_rational_ee_with(&p, &q, &opts)?),
            };
            let id = &v.check("info:series_identity").expect("identity recorded").witness;
            json!({
                "command": name,
                "verdict": verdict_json(&v),
                "series": {"lhs": id["lhs_standard"], "rhs": id["rhs_standard"]},
            })
        }
        Command::Oracle { task } => run_oracle(task)?,
    })
}

fn run_oracle(task: &OracleTask) -> Result<Value> {
    Ok(match task {
        OracleTask::Ehrhart { polytope, trunc } => {
            let p = io::parse_polytope(&read(polytope)?)?;
            let brute = oracle::ehrhart_counts(p.vertices(), *trunc)?;
            let engine = ehrhart_series_truncated(&p, *trunc).coeffs();
            let brute_big: Vec<BigInt> = brute.iter().map(|&c| BigInt::from(c)).collect();
            json!({
                "command": "oracle-ehrhart",
                "oracle": ints_to_json(&brute_big),
                "engine": ints_to_json(&engine),
                "agree": brute_big == engine,
            })
        }
        OracleTask::Normality { monoid, points } => {
            let m: AffineMonoid = match (monoid, points) {
                (Some(f), _) => io::parse_monoid(&read(f)?)?,
                (None, Some(f)) => monoid_over(&io::parse_points(&read(f)?)?)?,
                (None, None) => return Err(Error::Parse("oracle normality needs --monoid or --points".into())),
            };
            let brute = oracle::is_normal(m.generators())?;
            let engine = m.is_normal()?;
            json!({"command": "oracle-normality", "oracle": brute, "engine": engine, "agree": brute == engine})
        }
        OracleTask::Random { count, seed, trunc } => {
            let mut disagreements = Vec::new();
            let mut state = *seed;
            for i in 0..*count {
                let p = random_polygon(&mut state)?;
                let brute: Vec<BigInt> = oracle::ehrhart_counts(p.vertices(), *trunc)?
                    .into_iter()
                    .map(BigInt::from)
                    .collect();
                let engine: Vec<BigInt> = (0..=*trunc as u64).map(|k| count_points(&p, k)).collect();
                if brute != engine {
                    disagreements.push(json!({"instance": i, "polytope": io::polytope_to_json(&p)}));
                }
            }
            json!({
                "command": "oracle-random",
                "instances": count,
                "agree": disagreements.is_empty(),
                "disagreements": disagreements,
            })
        }
    })
}

/// Splitmix step; keeps the CLI free of an RNG dependency.
fn next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn random_polygon(state: &mut u64) -> Result<RationalPolytope> {
    loop {
        let k = 3 + (next(state) % 3) as usize;
        let pts: Vec<IntVector> = (0..k)
            .map(|_| IntVector::from_i64s(&[(next(state) % 5) as i64 - 2, (next(state) % 5) as i64 - 2]))
            .collect();
        if let Ok(p) = RationalPolytope::from_integer_points(&pts) {
            if p.dim() == 2 {
                return Ok(p);
            }
        }
    }
}

fn text(out: &Value) -> String {
    let mut s = String::new();
    let coeffs = |v: &Value| {
        v.as_array()
            .map(|a| a.iter().map(|c| c.to_string().trim_matches('"').to_string()).collect::<Vec<_>>().join(","))
            .unwrap_or_default()
    };
    if let Some(r) = out.get("rational_text") {
        s.push_str(&format!("{}\n", r.as_str().unwrap_or_default()));
    }
    if let Some(series) = out.get("series") {
        if let Some(c) = series.get("coeffs") {
            s.push_str(&format!("coefficients: {}\n", coeffs(c)));
        } else {
            s.push_str(&format!("lhs series: {}\n", coeffs(&series["lhs"])));
            s.push_str(&format!("rhs series: {}\n", coeffs(&series["rhs"])));
        }
    }
    if let Some(v) = out.get("verdict") {
        s.push_str(&format!("holds: {}\n", v["holds"]));
        for c in v["checks"].as_array().into_iter().flatten() {
            let info = c["name"].as_str().is_some_and(|n| n.starts_with("info:"));
            let mark = match (c["ok"].as_bool() == Some(true), info) {
                (true, _) => "ok  ",
                (false, true) => "no  ",
                (false, false) => "FAIL",
            };
            s.push_str(&format!("  [{mark}] {}: {}\n", c["name"].as_str().unwrap_or_default(), c["witness"]));
        }
    }
    for key in ["oracle", "engine", "agree", "instances"] {
        if let Some(v) = out.get(key) {
            let shown = if v.is_array() { coeffs(v) } else { v.to_string() };
            s.push_str(&format!("{key}: {shown}\n"));
        }
    }
    if let Some(d) = out.get("disagreements").and_then(Value::as_array) {
        for x in d {
            s.push_str(&format!("  disagreement: {x}\n"));
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("json") + "\n",
                Format::Text => text(&out),
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
