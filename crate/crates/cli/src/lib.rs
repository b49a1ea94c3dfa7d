//! Command implementations behind the `certroot` binary. Every command runs
//! in-process and returns its exit code together with the text it would
//! print, so that the binary is a thin wrapper.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use certroot::{
    bp, bp_solve, certify_root, dbp, hc, mu_exact, path_oracle, sample_system, sample_unit, seeded_rng, split_seed,
    DegreeProfile, EntropyFallback, Error, GeodesicMode, HcOptions, MuMode, PolySystem, ProjectivePoint, SolverConfig,
    SpherePoint, TrigMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NO_ROUND: i32 = 2;
pub const EXIT_NOT_CERTIFIED: i32 = 3;

pub const BENCH_HEADER: &str = "trial,n,D,N,K,rounds,mu_start_sq,seconds,certified";
/// Extra columns appended by `bench paths`.
pub const PATHS_EXTRA_HEADER: &str = "d_s,i2_hat,i3_hat,m_hat,m_tilde";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(code: i32, msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "certroot", version, about = "Certified roots of homogeneous polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a system file and print the report as JSON.
    Solve(SolveArgs),
    /// Check a candidate root of a system file.
    Certify(CertifyArgs),
    /// Print a random unit system.
    Gen(GenArgs),
    /// Monte Carlo experiments, one CSV row per trial.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TrigArg {
    Hw,
    Bss,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeodesicArg {
    Exact,
    Chord,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MuArg {
    Exact,
    Bound,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FallbackArg {
    Fail,
    Hash,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Deterministic: starting pair from the input's own digits.
    Dbp,
    /// Randomized: starting pair from `--seed`.
    Bp,
}

#[derive(Args, Debug, Clone)]
pub struct SolverFlags {
    #[arg(long, default_value_t = 8)]
    pub max_rounds: usize,
    #[arg(long, value_enum, default_value = "hw")]
    pub trig: TrigArg,
    #[arg(long, value_enum, default_value = "exact")]
    pub geodesic: GeodesicArg,
    #[arg(long, value_enum, default_value = "exact")]
    pub mu: MuArg,
    #[arg(long, value_enum, default_value = "hash")]
    pub entropy_fallback: FallbackArg,
}

impl SolverFlags {
    pub fn config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            max_rounds: self.max_rounds.max(1),
            trig_mode: match self.trig {
                TrigArg::Hw => TrigMode::Hardware,
                TrigArg::Bss => TrigMode::Bss,
            },
            geodesic_mode: match self.geodesic {
                GeodesicArg::Exact => GeodesicMode::Exact,
                GeodesicArg::Chord => GeodesicMode::Chord,
            },
            mu_mode: match self.mu {
                MuArg::Exact => MuMode::Exact,
                MuArg::Bound => MuMode::Bound,
            },
            entropy_fallback: match self.entropy_fallback {
                FallbackArg::Fail => EntropyFallback::Fail,
                FallbackArg::Hash => EntropyFallback::Hash,
            },
            rng_seed: seed,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "dbp")]
    pub solver: SolverArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub flags: SolverFlags,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    pub path: PathBuf,
    /// Real parts of the candidate point, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub re: Vec<f64>,
    /// Imaginary parts; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub im: Vec<f64>,
    /// Take the point from the `root` of a solve report instead.
    #[arg(long, conflicts_with_all = ["re", "im"])]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = certroot::conditioning::DEFAULT_CERT_ITERS)]
    pub iters: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeFlags {
    /// Number of equations; defaults to the length of `--degrees`, or 2.
    #[arg(long)]
    pub n: Option<usize>,
    /// Degrees, comma separated; defaults to all 2.
    #[arg(long, value_delimiter = ',')]
    pub degrees: Vec<u32>,
}

impl ShapeFlags {
    pub fn profile(&self) -> Result<DegreeProfile, String> {
        let degrees = match (self.n, self.degrees.is_empty()) {
            (Some(n), true) => vec![2; n],
            (None, true) => vec![2, 2],
            (Some(n), false) if n != self.degrees.len() => {
                return Err(format!("--n {} does not match {} degrees", n, self.degrees.len()))
            }
            _ => self.degrees.clone(),
        };
        DegreeProfile::new(&degrees).map_err(|e| e.to_string())
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[command(flatten)]
    pub shape: ShapeFlags,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    /// Total continuation steps of the deterministic solver.
    Steps,
    /// `mu(g, eta)^2` of random starting pairs.
    Mu,
    /// Number of precision rounds of the deterministic solver.
    Omega,
    /// Randomized continuation plus a fine path track.
    Paths,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub kind: BenchKind,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub shape: ShapeFlags,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, default_value_t = certroot::homotopy::DEFAULT_ORACLE_RESOLUTION)]
    pub oracle_resolution: usize,
    #[command(flatten)]
    pub flags: SolverFlags,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli.command),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Output::ok(text)
            } else {
                Output::err(code, text)
            }
        }
    }
}

pub fn dispatch(cmd: Command) -> Output {
    match cmd {
        Command::Solve(a) => cmd_solve(&a),
        Command::Certify(a) => cmd_certify(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn read_system(path: &Path) -> Result<PolySystem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    PolySystem::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_solve(args: &SolveArgs) -> Output {
    let f = match read_system(&args.path) {
        Ok(f) => f,
        Err(e) => return Output::err(EXIT_PARSE, e),
    };
    let cfg = args.flags.config(args.seed);
    let result = match args.solver {
        SolverArg::Dbp => dbp(&f, &cfg),
        SolverArg::Bp => bp_solve(&f, &cfg),
    };
    match result {
        Ok(report) => {
            let mut out = Output::ok(report.to_json() + "\n");
            if !report.certified {
                out.code = EXIT_NOT_CERTIFIED;
                out.stderr = "certificate check failed\n".into();
            }
            out
        }
        Err(e @ (Error::RoundsExceeded { .. } | Error::EntropyExhausted { .. } | Error::PathFailed(_))) => {
            Output::err(EXIT_NO_ROUND, e.to_string())
        }
        Err(e) => Output::err(EXIT_PARSE, e.to_string()),
    }
}

fn point_from_report(path: &Path) -> Result<Vec<Complex64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let rep = value
        .pointer("/root/rep")
        .and_then(|v| v.as_array())
        .ok_or_else(|| format!("{}: no root in report", path.display()))?;
    rep.iter()
        .map(|c| match c.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err("root coordinates must be numbers".to_string()),
            },
            _ => Err("root coordinates must be [re, im] pairs".to_string()),
        })
        .collect()
}

pub fn cmd_certify(args: &CertifyArgs) -> Output {
    let f = match read_system(&args.path) {
        Ok(f) => f,
        Err(e) => return Output::err(EXIT_PARSE, e),
    };
    let coords = match &args.report {
        Some(p) => match point_from_report(p) {
            Ok(v) => v,
            Err(e) => return Output::err(EXIT_PARSE, e),
        },
        None => {
            if !args.im.is_empty() && args.im.len() != args.re.len() {
                return Output::err(EXIT_PARSE, "--re and --im have different lengths");
            }
            args.re
                .iter()
                .enumerate()
                .map(|(j, &re)| Complex64::new(re, args.im.get(j).copied().unwrap_or(0.0)))
                .collect()
        }
    };
    if coords.len() != f.profile().nvars() {
        return Output::err(
            EXIT_PARSE,
            format!("point has {} coordinates, expected {}", coords.len(), f.profile().nvars()),
        );
    }
    let z = match ProjectivePoint::new(coords) {
        Ok(z) => z,
        Err(e) => return Output::err(EXIT_PARSE, e.to_string()),
    };
    let cert = certify_root(&f, &z, args.iters);
    let mut out = Output::ok(serde_json::to_string_pretty(&cert).expect("certificate serializes") + "\n");
    if !cert.passed {
        out.code = EXIT_NOT_CERTIFIED;
    }
    out
}

pub fn cmd_gen(args: &GenArgs) -> Output {
    let profile = match args.shape.profile() {
        Ok(p) => p,
        Err(e) => return Output::err(EXIT_PARSE, e),
    };
    let f = sample_system(&profile, &mut seeded_rng(args.seed));
    Output::ok(f.system().to_json() + "\n")
}

struct Row {
    k: usize,
    rounds: usize,
    mu_start_sq: f64,
    seconds: f64,
    certified: bool,
    extra: Option<[f64; 5]>,
}

fn bench_trial(kind: BenchKind, profile: &DegreeProfile, cfg: &SolverConfig, resolution: usize, seed: u64) -> Row {
    let mut rng = seeded_rng(seed);
    let start = Instant::now();
    let f = sample_system(profile, &mut rng);
    let mut row = Row {
        k: 0,
        rounds: 0,
        mu_start_sq: f64::NAN,
        seconds: 0.0,
        certified: false,
        extra: None,
    };
    match kind {
        BenchKind::Steps | BenchKind::Omega => match dbp(f.system(), cfg) {
            Ok(r) => {
                row.k = r.k_total;
                row.rounds = r.rounds;
                row.mu_start_sq = r.mu_start_sq();
                row.certified = r.certified;
            }
            Err(Error::RoundsExceeded { rounds }) => row.rounds = rounds,
            Err(_) => row.rounds = cfg.max_rounds,
        },
        BenchKind::Mu => {
            if let Ok(pair) = bp(&f) {
                let mu = mu_exact(pair.g.system(), &pair.zeta);
                row.mu_start_sq = mu * mu;
            }
        }
        BenchKind::Paths => {
            let u = sample_unit(2 * profile.dim(), &mut rng);
            let start_sys = PolySystem::from_real_coords(&u, profile).and_then(|s| SpherePoint::normalize(&s));
            if let Ok(pair) = start_sys.and_then(|s| bp(&s)) {
                let g = if f.system().weyl_inner(pair.g.system()).map(|c| c.re < 0.0).unwrap_or(false) {
                    pair.g.neg()
                } else {
                    pair.g
                };
                let opts = HcOptions {
                    max_steps: cfg.max_steps,
                    geodesic_mode: cfg.geodesic_mode,
                    mu_mode: cfg.mu_mode,
                };
                if let Ok(out) = hc(&f, &g, &pair.zeta, &opts) {
                    row.k = out.trace.k();
                    row.rounds = 1;
                    row.mu_start_sq = out.trace.initial_mu * out.trace.initial_mu;
                    if let Some(z) = &out.point {
                        row.certified = certify_root(f.system(), z, cfg.cert_iters).passed;
                    }
                    let est = path_oracle(&f, &g, &pair.zeta, &[2.0, 3.0], resolution, cfg.geodesic_mode);
                    let (i2, i3, m) = match est {
                        Ok(e) if !e.lost => (e.integrals[0].1, e.integrals[1].1, e.m_hat),
                        _ => (f64::NAN, f64::NAN, f64::INFINITY),
                    };
                    row.extra = Some([out.trace.d_s, i2, i3, m, out.trace.max_mu()]);
                }
            }
        }
    }
    row.seconds = start.elapsed().as_secs_f64();
    row
}

pub fn cmd_bench(args: &BenchArgs) -> Output {
    if args.trials == 0 {
        return Output::err(EXIT_PARSE, "--trials must be at least 1");
    }
    let profile = match args.shape.profile() {
        Ok(p) => p,
        Err(e) => return Output::err(EXIT_PARSE, e),
    };
    let cfg = args.flags.config(args.seed);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => return Output::err(EXIT_PARSE, e.to_string()),
    };
    let rows: Vec<Row> = pool.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|t| bench_trial(args.kind, &profile, &cfg, args.oracle_resolution, split_seed(args.seed, t as u64)))
            .collect()
    });

    let mut stdout = String::from(BENCH_HEADER);
    if args.kind == BenchKind::Paths {
        stdout.push(',');
        stdout.push_str(PATHS_EXTRA_HEADER);
    }
    stdout.push('\n');
    for (t, r) in rows.iter().enumerate() {
        write!(
            stdout,
            "{t},{},{},{},{},{},{},{:.6},{}",
            profile.n(),
            profile.max_degree(),
            profile.dim(),
            r.k,
            r.rounds,
            r.mu_start_sq,
            r.seconds,
            r.certified
        )
        .unwrap();
        if let Some(extra) = r.extra {
            for x in extra {
                write!(stdout, ",{x}").unwrap();
            }
        } else if args.kind == BenchKind::Paths {
            stdout.push_str(",NaN,NaN,NaN,inf,NaN");
        }
        stdout.push('\n');
    }

    let mut stderr = String::new();
    if args.kind == BenchKind::Omega {
        let max = rows.iter().map(|r| r.rounds).max().unwrap_or(0);
        let mut hist = vec![0usize; max + 1];
        rows.iter().for_each(|r| hist[r.rounds] += 1);
        let mean = rows.iter().map(|r| r.rounds as f64).sum::<f64>() / rows.len() as f64;
        writeln!(stderr, "rounds,count").unwrap();
        for (k, c) in hist.iter().enumerate().filter(|(_, &c)| c > 0) {
            writeln!(stderr, "{k},{c}").unwrap();
        }
        writeln!(stderr, "mean,{mean}").unwrap();
    }
    Output {
        code: EXIT_OK,
        stdout,
        stderr,
    }
}

/// Drops the `seconds` column of a bench CSV.
pub fn strip_seconds(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            line.split(',')
                .enumerate()
                .filter(|(i, _)| *i != 7)
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
