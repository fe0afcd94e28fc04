//! `hermpf`: exact Pfaffian class invariants from the command line.
//!
//! Exit status: 0 all asserted identities hold, 1 an identity failed,
//! 2 unreadable or malformed input, 3 a precondition failed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hermpf::class_group::{chi_arakelov, chi_hermitian, signature_sign_check, two_route_check, ClassRepresentative};
use hermpf::complex::{random_complex, CohomologyPairing, PerfectGComplex, RandomComplexSpec};
use hermpf::cyclo::set_conductor_ceiling;
use hermpf::demos::{hyperbolic_plane_demo, quadratic_trace_demo, render_hp};
use hermpf::forms::{pfaffian, pfaffian_matching};
use hermpf::group::FiniteGroup;
use hermpf::io::{instance_to_string, load_instance};
use hermpf::matrix::Matrix;
use hermpf::sweeps::{self, Tally, CATALOG};
use hermpf::{Error, Rational};

#[derive(Parser)]
#[command(name = "hermpf", version, about = "Exact hermitian Pfaffian invariants of perfect G-complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RandomArgs {
    /// Catalog group (C<n>, D<n>, Q8, S3, trivial).
    #[arg(long, default_value = "C2")]
    group: String,
    /// Seed for the ChaCha8 generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximal free rank of random complexes.
    #[arg(long, default_value_t = 2)]
    rank_max: usize,
    /// Number of random complexes.
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print a random instance file.
    Generate {
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Pfaffian of an alternating matrix (JSON rows of "p/q" strings).
    Pf { file: PathBuf },
    /// Hermitian class representative of an instance file.
    ChiHermitian {
        file: PathBuf,
        #[arg(long)]
        character: Option<String>,
    },
    /// Metric (Arakelov) class representative of an instance file.
    ChiArakelov {
        file: PathBuf,
        #[arg(long)]
        character: Option<String>,
    },
    /// Sign class of hermitian/metric representatives against isotypic signatures.
    #[command(name = "sign-check", visible_alias = "theorem30")]
    SignCheck {
        /// Instance file; random complexes are used when absent.
        file: Option<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Hermitian class against the class from lifted pairings.
    #[command(name = "two-routes", visible_alias = "theorem44")]
    TwoRoutes {
        file: Option<PathBuf>,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Seeded identity sweeps over the catalog groups.
    Sweep {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per group (forms per rank for the form sweeps).
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Restrict to some groups (comma separated).
        #[arg(long, value_delimiter = ',')]
        groups: Option<Vec<String>>,
    },
    /// Trace form of Q(√d) as a Q[C2]-module.
    DemoQuadratic {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Free hyperbolic plane over Q[G].
    DemoHp {
        #[arg(long, default_value = "Q8")]
        group: String,
    },
}

static OUT: std::sync::Mutex<String> = std::sync::Mutex::new(String::new());

// Output is collected and written once so a closed pipe is not a panic.
macro_rules! out {
    ($($t:tt)*) => {{
        let mut o = OUT.lock().unwrap();
        o.push_str(&format!($($t)*));
        o.push('\n');
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {
        OUT.lock().unwrap().push_str(&format!($($t)*))
    };
}

fn flush() {
    use std::io::Write;
    let o = std::mem::take(&mut *OUT.lock().unwrap());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(o.as_bytes());
    let _ = stdout.flush();
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Identity(String),
    Parse(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::NotAComplex(_) => Failure::Parse(e.to_string()),
            Error::Invariant(_) => Failure::Identity(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Parse(format!("{e:#}"))
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    use anyhow::Context;
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn group(name: &str) -> Result<FiniteGroup, Failure> {
    Ok(FiniteGroup::catalog(name)?)
}

fn filtered(mut c: ClassRepresentative, character: &Option<String>) -> Result<ClassRepresentative, Failure> {
    if let Some(name) = character {
        c.entries.retain(|e| &e.character == name);
        if c.entries.is_empty() {
            return Err(Failure::Precondition(format!("no basis character named {name}")));
        }
    }
    Ok(c)
}

fn print_json<T: serde::Serialize>(v: &T) {
    out!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_pf(file: &Path) -> Outcome {
    let rows: Vec<Vec<Rational>> = serde_json::from_str(&read(file)?).map_err(|e| Failure::Parse(e.to_string()))?;
    let a = if rows.is_empty() { Matrix::zeros(0, 0) } else { Matrix::from_rows(rows).map_err(|e| Failure::Parse(e.to_string()))? };
    if !a.is_square() || !a.is_alternating() {
        return Err(Failure::Parse("matrix is not alternating".into()));
    }
    let pf = pfaffian(&a)?;
    let det = a.det();
    out!("pf = {pf}");
    out!("det = {det}");
    let mut ok = pf.clone() * &pf == det;
    out!("{} pf^2 = det", pass_fail(ok));
    if a.rows() <= 8 {
        let m = pfaffian_matching(&a)?;
        out!("{} matching expansion = elimination", pass_fail(m == pf));
        ok &= m == pf;
    }
    Ok(ok)
}

fn instances(file: &Option<PathBuf>, r: &RandomArgs) -> Result<Vec<(String, PerfectGComplex, CohomologyPairing)>, Failure> {
    if let Some(f) = file {
        let (p, s) = load_instance(&read(f)?)?;
        return Ok(vec![(f.display().to_string(), p, s)]);
    }
    let g = group(&r.group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    let spec = RandomComplexSpec { rank_max: r.rank_max, ..RandomComplexSpec::default() };
    (0..r.count)
        .map(|k| {
            let (p, s) = random_complex(&g, &mut rng, spec)?;
            Ok((format!("{} seed {} #{k}", g.name(), r.seed), p, s))
        })
        .collect()
}

fn run_sign_check(file: &Option<PathBuf>, r: &RandomArgs) -> Outcome {
    let inst = instances(file, r)?;
    let results: Vec<_> = inst.par_iter().map(|(label, p, s)| (label, signature_sign_check(p, s))).collect();
    let mut ok = true;
    for (label, res) in results {
        for v in res? {
            ok &= v.holds();
            out!(
                "{} {label} {}: pf sign {} vs i^({} - {}) = {}, magnitudes {}",
                pass_fail(v.holds()),
                v.character,
                v.pf_sign,
                v.n_minus_ev,
                v.n_minus_odd,
                v.predicted,
                if v.magnitude_matches { "agree" } else { "differ" }
            );
        }
    }
    Ok(ok)
}

fn run_two_routes(file: &Option<PathBuf>, r: &RandomArgs) -> Outcome {
    let inst = instances(file, r)?;
    let seed = r.seed;
    let results: Vec<_> = inst.par_iter().map(|(label, p, s)| (label, p.euler_characteristic(), two_route_check(p, s, seed))).collect();
    let mut ok = true;
    for (label, chi, res) in results {
        let (v, m) = res?;
        for x in v {
            ok &= x.holds();
            out!(
                "{} {label} {}: hermitian {} lifted(|G| sigma) {} lifted(sigma) {} scale |G|^{} signatures {}",
                pass_fail(x.holds()),
                x.character,
                x.hermitian,
                x.lifted_scaled,
                x.lifted_unscaled,
                x.scale_power,
                if x.signatures_agree { "agree" } else { "differ" }
            );
        }
        let mt = m.iter().all(|&b| b);
        ok &= mt;
        out!("{} {label} metric telescope over {} irreducibles (euler characteristic {chi})", pass_fail(mt), m.len());
    }
    Ok(ok)
}

fn run_sweep(seed: u64, count: usize, groups: &Option<Vec<String>>) -> Outcome {
    let names: Vec<String> = groups.clone().unwrap_or_else(|| CATALOG.iter().map(|s| s.to_string()).collect());
    for n in &names {
        group(n)?;
    }
    let gs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut ok = true;
    let mut report = |label: &str, t: &Tally| {
        ok &= t.pass();
        out!("{} {label}: {}", pass_fail(t.pass()), t.summary());
    };
    report("pfaffian core", &sweeps::pfaffian_core(seed, 50 * count, 10));
    report("fixed-space pfaffian identity", &sweeps::pfaffian_identity_sweep(&gs, &[1, 2, 3], count, seed));
    report("metric identity", &sweeps::metric_identity_sweep(&gs, &[1, 2, 3], count, seed));
    report("sign formula", &sweeps::sign_formula_sweep(&gs, &[1, 2, 3], count, seed));
    report("sign class", &sweeps::sign_class_sweep(&gs, count, seed));
    report("two routes", &sweeps::two_route_sweep(&gs, count, seed).0);
    report("structural properties", &sweeps::structural_sweep(&gs, count, seed));
    let hp = sweeps::hyperbolic_plane_sweep(&gs);
    report("hyperbolic plane, scaled form", &hp.scaled);
    report("hyperbolic plane, unscaled form = |G|^theta(1) (-1)^(theta(1)/2)", &hp.homogeneous);
    out!("INFO hyperbolic plane, unscaled form against (-|G|)^(theta(1)/2): {}", hp.printed.summary());
    report("quadratic fields |d| <= 200", &sweeps::quadratic_sweep(200));
    report("duality symmetrisation", &sweeps::duality_sweep(&gs, 10 * count, seed));
    Ok(ok)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Pf { file } => run_pf(&file),
        Command::Generate { random } => {
            let (_, p, s) = instances(&None, &random)?.pop().ok_or_else(|| Failure::Precondition("--count must be positive".into()))?;
            out!("{}", instance_to_string(&p, &s));
            Ok(true)
        }
        Command::ChiHermitian { file, character } => {
            let (p, s) = load_instance(&read(&file)?)?;
            print_json(&filtered(chi_hermitian(&p, &s)?, &character)?);
            Ok(true)
        }
        Command::ChiArakelov { file, character } => {
            let (p, s) = load_instance(&read(&file)?)?;
            print_json(&filtered(chi_arakelov(&p, &s)?, &character)?);
            Ok(true)
        }
        Command::SignCheck { file, random } => run_sign_check(&file, &random),
        Command::TwoRoutes { file, random } => run_two_routes(&file, &random),
        Command::Sweep { seed, count, groups } => run_sweep(seed, count, &groups),
        Command::DemoQuadratic { d } => {
            let r = quadratic_trace_demo(d)?;
            out_raw!("{}", r.render());
            print_json(&r.class);
            Ok(r.holds())
        }
        Command::DemoHp { group: name } => {
            let g = group(&name)?;
            let rows = hyperbolic_plane_demo(&g)?;
            out_raw!("{}", render_hp(&g, &rows));
            print_json(&rows);
            Ok(rows.iter().all(|r| r.scaled_matches() && r.involution_reading_agrees()))
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("HERMPF_MAX_CONDUCTOR") {
        match v.parse::<u32>() {
            Ok(n) if n > 0 => set_conductor_ceiling(n),
            _ => {
                eprintln!("error: HERMPF_MAX_CONDUCTOR must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli);
    flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Identity(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
