//! The `dgspec` command line: argument grammar, run configuration and the
//! command implementations behind it.
//!
//! Exit codes: 0 success, 1 mixing-bound violation, 2 parse error (input
//! file or command line), 3 failed precondition, 4 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, ErrorClass, Result};
use crate::graph::{generate, parse_edge_list, write_edge_list, DirectedGraph, Family};
use crate::linalg::EigenConfig;
use crate::markov::{build_transition_matrix, spectral_profile, SpectralConfig, SpectralProfile};
use crate::mixing::{
    eml_bound, eml_bound_simple, eml_lhs, eml_lhs_u_centered, verify_eml, EmlReport,
    SamplingPolicy, SubsetPair, VerifyOptions, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_SLACK_TOL,
};
use crate::report::{
    AnalysisReport, Format, GraphSummary, PairReport, Report, SpectralSection, ToughnessBoundReport,
};
use crate::toughness::{
    alon_toughness_bound, compare, exact_toughness, toughness_spectral_bound, BoundComparison,
    ToughnessOptions, ToughnessResult, DEFAULT_TOUGHNESS_CAP, INFINITE_BOUND_NOTE,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Parse => EXIT_PARSE,
        ErrorClass::Precondition => EXIT_PRECONDITION,
        ErrorClass::Numerical => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dgspec",
    version,
    about = "Spectral analysis of directed graphs"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    #[arg(
        long,
        global = true,
        value_enum,
        env = "DGSPEC_FORMAT",
        default_value = "text"
    )]
    format: Format,
    /// Allowed excess of a mixing lhs over its bound.
    #[arg(long, global = true, env = "DGSPEC_SLACK_TOL", default_value_t = DEFAULT_SLACK_TOL)]
    slack_tol: f64,
    /// Eigendecomposition residual tolerance, relative to ||P||_F.
    #[arg(long, global = true, env = "DGSPEC_EIG_TOL", default_value_t = EigenConfig::default().residual_tol)]
    eig_tol: f64,
    /// Eigenvalue clustering distance, relative to ||P||_F.
    #[arg(long, global = true, env = "DGSPEC_CLUSTER_TOL", default_value_t = EigenConfig::default().cluster_tol)]
    cluster_tol: f64,
    #[arg(long, global = true, env = "DGSPEC_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "DGSPEC_THREADS")]
    threads: Option<usize>,
    /// Largest n for exhaustive mixing-bound sweeps.
    #[arg(long, global = true, env = "DGSPEC_EML_CAP", default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    eml_cap: usize,
    /// Largest n for exact toughness without --force.
    #[arg(long, global = true, env = "DGSPEC_TOUGHNESS_CAP", default_value_t = DEFAULT_TOUGHNESS_CAP)]
    toughness_cap: usize,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Graph summary and spectral profile.
    Analyze {
        file: PathBuf,
        /// Include an exhaustive mixing-bound sweep.
        #[arg(long)]
        with_eml: bool,
        /// Include the toughness comparison.
        #[arg(long)]
        with_toughness: bool,
    },
    /// Expander mixing bounds.
    Eml {
        #[command(subcommand)]
        command: EmlCommand,
    },
    /// Exact toughness, its spectral lower bound, or both.
    Toughness {
        mode: ToughnessMode,
        file: PathBuf,
        /// Allow exact enumeration above --toughness-cap.
        #[arg(long)]
        force: bool,
    },
    /// Writes a graph from a built-in family as an edge list.
    Generate {
        /// complete-bidirected N | undirected-cycle N | petersen | de-bruijn K M |
        /// chord-cycle N [T:H ...] | random-strongly-connected N P
        family: String,
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum EmlCommand {
    /// Checks both bound forms over all (or sampled) subset pairs.
    Verify {
        file: PathBuf,
        /// Sample this many pairs (seeded by --seed) instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        /// Skip pairs with an empty side.
        #[arg(long)]
        nonempty_only: bool,
        /// Report every evaluated pair.
        #[arg(long)]
        rows: bool,
    },
    /// Evaluates both bound forms on one pair.
    Bound {
        file: PathBuf,
        /// Comma separated labels or 0-based indices.
        #[arg(long)]
        u: String,
        #[arg(long)]
        w: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ToughnessMode {
    Exact,
    Bound,
    Compare,
}

/// Tolerances, caps and output settings shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub slack_tol: f64,
    pub eig_tol: f64,
    pub cluster_tol: f64,
    pub eml_cap: usize,
    pub toughness_cap: usize,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
    pub verbosity: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        let eigen = EigenConfig::default();
        RunConfig {
            slack_tol: DEFAULT_SLACK_TOL,
            eig_tol: eigen.residual_tol,
            cluster_tol: eigen.cluster_tol,
            eml_cap: DEFAULT_EXHAUSTIVE_CAP,
            toughness_cap: DEFAULT_TOUGHNESS_CAP,
            format: Format::Text,
            seed: 0,
            threads: None,
            verbosity: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("slack-tol", self.slack_tol),
            ("eig-tol", self.eig_tol),
            ("cluster-tol", self.cluster_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "--{name} must be positive, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("eml-cap", self.eml_cap),
            ("toughness-cap", self.toughness_cap),
        ] {
            if v < 2 {
                return Err(Error::InvalidParameter(format!(
                    "--{name} must be at least 2, got {v}"
                )));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("--threads must be positive".into()));
        }
        Ok(())
    }

    pub fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            eigen: EigenConfig {
                residual_tol: self.eig_tol,
                cluster_tol: self.cluster_tol,
                ..EigenConfig::default()
            },
            ..SpectralConfig::default()
        }
    }

    fn log(&self, message: impl FnOnce() -> String) {
        if self.verbosity > 0 {
            eprintln!("{}", message());
        }
    }
}

impl From<&GlobalArgs> for RunConfig {
    fn from(a: &GlobalArgs) -> Self {
        RunConfig {
            slack_tol: a.slack_tol,
            eig_tol: a.eig_tol,
            cluster_tol: a.cluster_tol,
            eml_cap: a.eml_cap,
            toughness_cap: a.toughness_cap,
            format: a.format,
            seed: a.seed,
            threads: a.threads,
            verbosity: a.verbose,
        }
    }
}

pub fn load_graph(path: &Path) -> Result<DirectedGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}

fn profile_of(g: &DirectedGraph, config: &RunConfig) -> Result<SpectralProfile> {
    spectral_profile(&build_transition_matrix(g)?, &config.spectral())
}

fn toughness_options(config: &RunConfig, force: bool) -> ToughnessOptions {
    ToughnessOptions {
        cap: config.toughness_cap,
        allow_over_cap: force,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub with_eml: bool,
    pub with_toughness: bool,
}

pub fn cmd_analyze(
    path: &Path,
    config: &RunConfig,
    options: AnalyzeOptions,
) -> Result<AnalysisReport> {
    let g = load_graph(path)?;
    let graph = GraphSummary::new(&g)?;
    config.log(|| format!("n = {}, {} edges", graph.n, graph.edge_count));
    let profile = profile_of(&g, config)?;
    let eml = if options.with_eml {
        Some(verify_eml(
            &profile,
            &verify_options(config, None, false, false),
        )?)
    } else {
        None
    };
    let toughness = if options.with_toughness {
        let exact = exact_toughness(&g, &toughness_options(config, false))?;
        Some(compare(exact, toughness_spectral_bound(&profile)))
    } else {
        None
    };
    Ok(AnalysisReport {
        graph,
        spectral: SpectralSection::new(&profile),
        eml,
        toughness,
    })
}

fn verify_options(
    config: &RunConfig,
    sample: Option<usize>,
    nonempty_only: bool,
    rows: bool,
) -> VerifyOptions {
    VerifyOptions {
        policy: match sample {
            Some(count) => SamplingPolicy::Sample {
                count,
                seed: config.seed,
            },
            None => SamplingPolicy::Exhaustive,
        },
        nonempty_only,
        slack_tol: config.slack_tol,
        exhaustive_cap: config.eml_cap,
        keep_rows: rows,
    }
}

pub fn cmd_eml_verify(
    path: &Path,
    sample: Option<usize>,
    nonempty_only: bool,
    rows: bool,
    config: &RunConfig,
) -> Result<EmlReport> {
    let g = load_graph(path)?;
    let profile = profile_of(&g, config)?;
    config.log(|| format!("rho = {}, kappa = {}", profile.rho, profile.kappa));
    verify_eml(
        &profile,
        &verify_options(config, sample, nonempty_only, rows),
    )
}

/// Resolves a comma separated list of labels or indices. An empty string is
/// the empty set.
pub fn parse_subset(g: &DirectedGraph, spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| g.resolve_vertex(t))
        .collect()
}

pub fn cmd_eml_bound(path: &Path, u: &str, w: &str, config: &RunConfig) -> Result<PairReport> {
    let g = load_graph(path)?;
    let n = g.vertex_count();
    let pair = SubsetPair::new(parse_subset(&g, u)?, parse_subset(&g, w)?, n)?;
    let profile = profile_of(&g, config)?;
    Ok(PairReport::new(
        &g,
        &pair,
        (
            eml_lhs(&profile, &pair),
            eml_lhs_u_centered(&profile, &pair),
        ),
        (
            eml_bound(&profile, &pair)?,
            eml_bound_simple(&profile, &pair),
        ),
        config.slack_tol,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ToughnessOutput {
    Exact(ToughnessResult),
    Bound(ToughnessBoundReport),
    Compare(BoundComparison),
}

impl ToughnessOutput {
    fn render(&self, format: Format) -> String {
        match self {
            ToughnessOutput::Exact(r) => r.render(format),
            ToughnessOutput::Bound(r) => r.render(format),
            ToughnessOutput::Compare(r) => r.render(format),
        }
    }
}

pub fn cmd_toughness(
    path: &Path,
    mode: ToughnessMode,
    force: bool,
    config: &RunConfig,
) -> Result<ToughnessOutput> {
    let g = load_graph(path)?;
    let options = toughness_options(config, force);
    Ok(match mode {
        ToughnessMode::Exact => ToughnessOutput::Exact(exact_toughness(&g, &options)?),
        ToughnessMode::Bound => {
            let profile = profile_of(&g, config)?;
            let spectral_bound = toughness_spectral_bound(&profile);
            let alon_bound = match g.symmetric_regular_degree() {
                Some(_) => Some(alon_toughness_bound(&g)?),
                None => None,
            };
            ToughnessOutput::Bound(ToughnessBoundReport {
                spectral_bound,
                alon_bound,
                note: spectral_bound
                    .is_infinite()
                    .then(|| INFINITE_BOUND_NOTE.to_string()),
            })
        }
        ToughnessMode::Compare => {
            let profile = profile_of(&g, config)?;
            let exact = exact_toughness(&g, &options)?;
            ToughnessOutput::Compare(compare(exact, toughness_spectral_bound(&profile)))
        }
    })
}

fn count(params: &[String], i: usize, what: &str) -> Result<usize> {
    let raw = params
        .get(i)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {what}")))?;
    raw.parse().map_err(|_| {
        Error::InvalidParameter(format!("{what} must be a nonnegative integer, got {raw:?}"))
    })
}

fn expect_len(params: &[String], len: usize, family: &str) -> Result<()> {
    if params.len() != len {
        return Err(Error::InvalidParameter(format!(
            "{family} takes {len} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Maps a family name and its positional parameters to a [`Family`].
/// Underscores and hyphens are interchangeable in the name.
pub fn parse_family(name: &str, params: &[String], seed: u64) -> Result<Family> {
    let name = name.replace('_', "-");
    match name.as_str() {
        "complete-bidirected" => {
            expect_len(params, 1, &name)?;
            Ok(Family::CompleteBidirected {
                n: count(params, 0, "N")?,
            })
        }
        "undirected-cycle" => {
            expect_len(params, 1, &name)?;
            Ok(Family::UndirectedCycle {
                n: count(params, 0, "N")?,
            })
        }
        "petersen" => {
            expect_len(params, 0, &name)?;
            Ok(Family::Petersen)
        }
        "de-bruijn" => {
            expect_len(params, 2, &name)?;
            Ok(Family::DeBruijn {
                symbols: count(params, 0, "K")?,
                word_len: count(params, 1, "M")?,
            })
        }
        "chord-cycle" => {
            let n = count(params, 0, "N")?;
            let chords = params[1..]
                .iter()
                .map(|c| {
                    let bad =
                        || Error::InvalidParameter(format!("chord must look like T:H, got {c:?}"));
                    let (t, h) = c.split_once(':').ok_or_else(bad)?;
                    Ok((t.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?))
                })
                .collect::<Result<_>>()?;
            Ok(Family::ChordCycle { n, chords })
        }
        "random-strongly-connected" => {
            expect_len(params, 2, &name)?;
            let p: f64 = params[1].parse().map_err(|_| {
                Error::InvalidParameter(format!("P must be a number, got {:?}", params[1]))
            })?;
            Ok(Family::RandomStronglyConnected {
                n: count(params, 0, "N")?,
                p,
                seed,
            })
        }
        _ => Err(Error::InvalidParameter(format!("unknown family {name:?}"))),
    }
}

/// Edge-list text of the generated graph.
pub fn cmd_generate(family: &str, params: &[String], seed: u64) -> Result<String> {
    Ok(write_edge_list(&generate(&parse_family(
        family, params, seed,
    )?)?))
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let config = RunConfig::from(&cli.global);
    let result = config.validate().and_then(|()| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = config.threads {
            builder = builder.num_threads(t);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| execute(&cli.command, &config))
    });
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(e.class()),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<(i32, String)> {
    let format = config.format;
    match command {
        Command::Analyze {
            file,
            with_eml,
            with_toughness,
        } => {
            let options = AnalyzeOptions {
                with_eml: *with_eml,
                with_toughness: *with_toughness,
            };
            let report = cmd_analyze(file, config, options)?;
            let code = match &report.eml {
                Some(eml) if !eml.passed() => EXIT_VIOLATION,
                _ => EXIT_SUCCESS,
            };
            Ok((code, report.render(format)))
        }
        Command::Eml {
            command:
                EmlCommand::Verify {
                    file,
                    sample,
                    nonempty_only,
                    rows,
                },
        } => {
            let report = cmd_eml_verify(file, *sample, *nonempty_only, *rows, config)?;
            let code = if report.passed() {
                EXIT_SUCCESS
            } else {
                EXIT_VIOLATION
            };
            Ok((code, report.render(format)))
        }
        Command::Eml {
            command: EmlCommand::Bound { file, u, w },
        } => {
            let report = cmd_eml_bound(file, u, w, config)?;
            let code = if report.holds {
                EXIT_SUCCESS
            } else {
                EXIT_VIOLATION
            };
            Ok((code, report.render(format)))
        }
        Command::Toughness { mode, file, force } => {
            let out = cmd_toughness(file, *mode, *force, config)?;
            Ok((EXIT_SUCCESS, out.render(format)))
        }
        Command::Generate {
            family,
            params,
            output,
        } => {
            let text = cmd_generate(family, params, config.seed)?;
            match output {
                Some(path) => {
                    std::fs::write(path, &text)?;
                    config.log(|| format!("wrote {}", path.display()));
                    Ok((EXIT_SUCCESS, String::new()))
                }
                None => Ok((EXIT_SUCCESS, text)),
            }
        }
    }
}
