//! Argument definitions and command dispatch.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stackdist::asymptotics::{clt_params_with, table1, SolverOptions};
use stackdist::series::bivariate_t_with;
use stackdist::{cache, Error};

use crate::ranges::ValueList;
use crate::verify::{self, NormalThresholds, OracleOptions, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Exact and asymptotic stack-number statistics of k-noncrossing,
/// tau-canonical RNA structures.
#[derive(Debug, Parser)]
#[command(name = "stackdist", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format [default: csv, json for `clt`].
    #[arg(long, env = "STACKDIST_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Write data here instead of stdout; run metadata goes to `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for cached matching tables.
    #[arg(long, env = "STACKDIST_CACHE")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Single {
    /// Crossing bound: fewer than k mutually crossing arcs.
    #[arg(long, env = "STACKDIST_K")]
    pub k: u32,
    /// Minimum stack size.
    #[arg(long, env = "STACKDIST_TAU")]
    pub tau: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of structures on n vertices by stack number.
    Count {
        #[command(flatten)]
        p: Single,
        /// Sequence lengths, e.g. `9` or `5..12`.
        #[arg(long)]
        n: ValueList<u32>,
        /// Only this stack number (zero counts are printed too).
        #[arg(long)]
        t: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact probability law of the stack number at one n.
    Dist {
        #[command(flatten)]
        p: Single,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dominant singularity and limiting mean and variance per vertex.
    Clt {
        #[command(flatten)]
        p: Single,
        /// Required residual of the singularity equation.
        #[arg(long, env = "STACKDIST_TOL", default_value_t = 1e-13)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Grid of limiting means and variances next to the published table.
    Table1 {
        #[arg(long, default_value = "2..7")]
        k: ValueList<u32>,
        #[arg(long, default_value = "3..7")]
        tau: ValueList<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coefficients of the bivariate generating function up to x^n-max.
    SeriesDump {
        #[command(flatten)]
        p: Single,
        #[arg(long)]
        n_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-checks between independent computations.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Inspect or empty the matching-table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Args)]
pub struct Grid {
    #[arg(long, env = "STACKDIST_K", default_value = "2,3")]
    pub k: ValueList<u32>,
    #[arg(long, env = "STACKDIST_TAU", default_value = "3,4")]
    pub tau: ValueList<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Formula counts against brute-force enumeration.
    Oracle {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Minimum arc length `j - i` used by the enumerator.
        #[arg(long, env = "STACKDIST_LAMBDA_MIN", default_value_t = stackdist::oracle::DEFAULT_LAMBDA_MIN)]
        lambda_min: u32,
        /// Largest n the enumerator accepts.
        #[arg(long, env = "STACKDIST_BF_CAP", default_value_t = stackdist::oracle::DEFAULT_BRUTE_FORCE_CAP)]
        bf_cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generating-function coefficients against exact counts.
    Series {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 40)]
        n_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Functional equations between the count tables, coefficientwise.
    Identities {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 40)]
        n_max: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact laws against the normal limit; `--out` receives `n,t,exact_pmf,normal_pmf`.
    Normal {
        #[command(flatten)]
        p: Single,
        #[arg(long, default_value = "50,100,150")]
        n: ValueList<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    Info {
        #[arg(long, env = "STACKDIST_CACHE")]
        cache_dir: PathBuf,
    },
    Clear {
        #[arg(long, env = "STACKDIST_CACHE")]
        cache_dir: PathBuf,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::InvalidOperand(_) | Error::CapExceeded { .. } | Error::Domain(_) => {
                EXIT_USAGE
            }
            _ => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_INTERNAL, message: format!("{}: {e}", path.display()) }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    args: Vec<String>,
    version: &'static str,
    unix_time: u64,
    elapsed_seconds: f64,
}

struct Emitter<'a> {
    out: &'a OutputArgs,
    start: Instant,
}

impl Emitter<'_> {
    fn format(&self, default: Format) -> Format {
        self.out.format.unwrap_or(default)
    }

    fn cache(&self) -> Option<&Path> {
        self.out.cache_dir.as_deref()
    }

    /// Data to `--out` (plus sidecar) or stdout.
    fn emit(&self, command: &str, data: &str) -> Result<(), Failure> {
        let Some(path) = &self.out.out else {
            print!("{data}");
            return Ok(());
        };
        fs::write(path, data).map_err(|e| io_failure(path, e))?;
        let meta = Meta {
            command,
            args: std::env::args().skip(1).collect(),
            version: env!("CARGO_PKG_VERSION"),
            unix_time: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
        };
        let mut sidecar = path.clone().into_os_string();
        sidecar.push(".meta.json");
        let sidecar = PathBuf::from(sidecar);
        fs::write(&sidecar, json(&meta)).map_err(|e| io_failure(&sidecar, e))
    }
}

#[derive(Serialize)]
struct CountRow {
    n: u32,
    t: u32,
    count: String,
}

fn count_rows(p: &Single, ns: &[u32], t: Option<u32>, cache: Option<&Path>) -> Result<Vec<CountRow>, Failure> {
    let Some(&n_max) = ns.last() else { return Ok(Vec::new()) };
    let table = verify::count_table(p.k, n_max as usize, cache)?;
    let mut rows = Vec::new();
    for &n in ns {
        match t {
            Some(t) => {
                let count = table.count_structures(p.tau, n as usize, t as usize)?;
                rows.push(CountRow { n, t, count: count.to_string() });
            }
            None => {
                for (t, c) in table.row(p.tau, n as usize)?.iter().enumerate() {
                    if *c != Default::default() {
                        rows.push(CountRow { n, t: t as u32, count: c.to_string() });
                    }
                }
            }
        }
    }
    Ok(rows)
}

fn render_counts(rows: &[CountRow], format: Format) -> String {
    match format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("n,t,count\n");
            for r in rows {
                let _ = writeln!(s, "{},{},{}", r.n, r.t, r.count);
            }
            s
        }
    }
}

#[derive(Serialize)]
struct DistRow {
    t: usize,
    probability_num: String,
    probability_den: String,
    float: f64,
}

fn report_output(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Csv => report.render(),
        Format::Json => json(report),
    }
}

fn finish(report: &VerifyReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn to_usize(values: &[u32]) -> Vec<usize> {
    values.iter().map(|&v| v as usize).collect()
}

/// Runs a parsed command, returning the exit code.
pub fn run(cli: Cli) -> Result<i32, Failure> {
    let start = Instant::now();
    match cli.command {
        Command::Count { p, n, t, out } => {
            let em = Emitter { out: &out, start };
            let rows = count_rows(&p, n.values(), t, em.cache())?;
            em.emit("count", &render_counts(&rows, em.format(Format::Csv)))?;
        }
        Command::Dist { p, n, out } => {
            let em = Emitter { out: &out, start };
            let table = verify::count_table(p.k, n as usize, em.cache())?;
            let dist = table.distribution(p.tau, n as usize)?;
            let rows: Vec<DistRow> = dist
                .probabilities
                .iter()
                .enumerate()
                .filter(|(_, q)| **q != Default::default())
                .map(|(t, q)| DistRow {
                    t,
                    probability_num: q.numer().to_string(),
                    probability_den: q.denom().to_string(),
                    float: stackdist::bigcombinat::ratio_to_f64(q),
                })
                .collect();
            let data = match em.format(Format::Csv) {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut s = String::from("t,probability_num,probability_den,float\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{},{:?}", r.t, r.probability_num, r.probability_den, r.float);
                    }
                    s
                }
            };
            em.emit("dist", &data)?;
        }
        Command::Clt { p, tol, out } => {
            let em = Emitter { out: &out, start };
            let opts = SolverOptions { tolerance: tol, ..SolverOptions::default() };
            let r = clt_params_with(p.k, p.tau, &opts)?;
            let data = match em.format(Format::Json) {
                Format::Json => json(&r),
                Format::Csv => format!(
                    "k,tau,rho_k,gamma0,gamma1,gamma2,mu,sigma2,residual,unverified_regime\n{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{}\n",
                    r.k, r.tau, r.rho_k, r.gamma0, r.gamma1, r.gamma2, r.mu, r.sigma2, r.residual, r.unverified_regime
                ),
            };
            if r.unverified_regime {
                eprintln!("warning: k={} tau={} is outside the verified regime k in 2..=9, tau in 3..=7", p.k, p.tau);
            }
            em.emit("clt", &data)?;
        }
        Command::Table1 { k, tau, out } => {
            let em = Emitter { out: &out, start };
            let rows = table1(k.values(), tau.values())?;
            let data = match em.format(Format::Csv) {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut s = String::from("k,tau,mu,sigma2,ref_mu,ref_sigma2,dev_mu,dev_sigma2,suspected_typo\n");
                    let opt = |v: Option<f64>| v.map(|x| format!("{x:.7}")).unwrap_or_default();
                    for r in &rows {
                        let (mu, s2) = match &r.computed {
                            Ok(c) => (format!("{:.7}", c.mu), format!("{:.8}", c.sigma2)),
                            Err(e) => (format!("error: {e}"), String::new()),
                        };
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{},{},{}",
                            r.k,
                            r.tau,
                            mu,
                            s2,
                            opt(r.reference.map(|c| c.mu)),
                            opt(r.reference.map(|c| c.sigma2)),
                            r.dev_mu.map(|x| format!("{x:.2e}")).unwrap_or_default(),
                            r.dev_sigma2.map(|x| format!("{x:.2e}")).unwrap_or_default(),
                            r.suspected_typo()
                        );
                    }
                    s
                }
            };
            em.emit("table1", &data)?;
        }
        Command::SeriesDump { p, n_max, out } => {
            let em = Emitter { out: &out, start };
            let order = n_max as usize;
            let matchings = match em.cache() {
                Some(dir) => cache::load_or_compute(dir, p.k, order / 2)?,
                None => stackdist::PerfectMatchings::compute(p.k, order / 2)?,
            };
            let series = bivariate_t_with(&matchings, p.tau, order)?;
            let mut rows = Vec::new();
            for n in 0..=order {
                let poly = series.coeff(n);
                for (t, c) in poly.coeffs().iter().enumerate() {
                    if *c != Default::default() {
                        if !c.is_integer() {
                            return Err(Error::InternalConsistency(format!("non-integral coefficient {c} at n={n} t={t}")).into());
                        }
                        rows.push(CountRow { n: n as u32, t: t as u32, count: c.to_integer().to_string() });
                    }
                }
            }
            em.emit("series-dump", &render_counts(&rows, em.format(Format::Csv)))?;
        }
        Command::Verify { suite } => return run_verify(suite, start),
        Command::Cache { action } => match action {
            CacheAction::Info { cache_dir } => {
                let entries = cache::info(&cache_dir)?;
                println!("cache directory: {}", cache_dir.display());
                if entries.is_empty() {
                    println!("no cache files");
                }
                for e in entries {
                    match (e.k, e.max_pairs) {
                        (Some(k), Some(m)) => println!("{}: k={k}, f_k(2n) for n <= {m}, {} bytes", e.path.display(), e.bytes),
                        _ => println!("{}: unreadable, will be rebuilt, {} bytes", e.path.display(), e.bytes),
                    }
                }
            }
            CacheAction::Clear { cache_dir } => {
                let removed = cache::clear(&cache_dir)?;
                println!("removed {removed} cache file(s) from {}", cache_dir.display());
            }
        },
    }
    Ok(EXIT_OK)
}

fn run_verify(suite: Suite, start: Instant) -> Result<i32, Failure> {
    match suite {
        Suite::Oracle { grid, n_max, lambda_min, bf_cap, out } => {
            let em = Emitter { out: &out, start };
            let opts = OracleOptions { lambda_min, cap: bf_cap };
            let report = verify::verify_oracle(grid.k.values(), grid.tau.values(), n_max as usize, opts, em.cache())?;
            em.emit("verify oracle", &report_output(&report, em.format(Format::Csv)))?;
            Ok(finish(&report))
        }
        Suite::Series { grid, n_max, out } => {
            let em = Emitter { out: &out, start };
            let n = n_max as usize;
            let report = verify::verify_series(grid.k.values(), grid.tau.values(), n, n, em.cache())?;
            em.emit("verify series", &report_output(&report, em.format(Format::Csv)))?;
            Ok(finish(&report))
        }
        Suite::Identities { grid, n_max, out } => {
            let em = Emitter { out: &out, start };
            let report = verify::verify_identities(grid.k.values(), grid.tau.values(), n_max as usize, em.cache())?;
            em.emit("verify identities", &report_output(&report, em.format(Format::Csv)))?;
            Ok(finish(&report))
        }
        Suite::Normal { p, n, out } => {
            let em = Emitter { out: &out, start };
            let ns = to_usize(n.values());
            let (report, points) = verify::verify_normal(p.k, p.tau, &ns, NormalThresholds::default(), em.cache())?;
            if out.out.is_some() {
                let mut s = String::from("n,t,exact_pmf,normal_pmf\n");
                for pt in &points {
                    for (t, a, b) in &pt.pmf {
                        let _ = writeln!(s, "{},{t},{a:?},{b:?}", pt.n);
                    }
                }
                em.emit("verify normal", &s)?;
                print!("{}", report.render());
            } else {
                print!("{}", report_output(&report, em.format(Format::Csv)));
            }
            Ok(finish(&report))
        }
    }
}
