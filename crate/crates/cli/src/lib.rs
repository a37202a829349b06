//! Command-line front end: parse a problem, run the localization engine or an
//! oracle, and print the result as text or JSON.
//!
//! Exit codes: `0` success, `2` invalid input, `3` internal consistency
//! failure (samples disagree, non-integral total, no admissible sample).

pub mod record;

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use fquot_core::fixed_points::{chain_count, count_fixed_points, enumerate_fixed_points};
use fquot_core::localization::{invariant_with, EngineConfig};
use fquot_core::oracles::{classical_flag_invariant, grassmannian_quantum_integral, pn_invariant};
use fquot_core::problem::{DegreeVector, FlagShape, ProblemSpec};
use fquot_core::Insertion;

use record::{BatchProblem, ErrorRecord, FixedPointJson, FlagJson, InsertionJson, ResultRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Invariant,
    ListFixedPoints,
    OraclePn,
    OracleGrassmannian,
    OracleClassical,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Invariant => "invariant",
            Mode::ListFixedPoints => "list-fixed-points",
            Mode::OraclePn => "oracle-pn",
            Mode::OracleGrassmannian => "oracle-grassmannian",
            Mode::OracleClassical => "oracle-classical",
        }
    }

    fn parse(name: &str) -> Option<Mode> {
        Mode::from_str(name, false).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Pn,
    Grassmannian,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Gromov invariants of partial flag varieties by torus localization on flag
/// Quot schemes.
#[derive(Debug, Parser)]
#[command(name = "fquot", version)]
pub struct Cli {
    /// Ambient dimension n of the flag variety F(s_1,...,s_l; n).
    #[arg(long)]
    pub n: Option<usize>,

    /// Flag steps, comma separated (e.g. 1,2).
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<usize>,

    /// Multidegree, one entry per flag step (default: all zero).
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u32>,

    /// Insertions `alpha:beta`, with optional repetition `alpha:betaxN`;
    /// comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub insertions: Vec<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of independent weight samples that must agree (at least 2).
    #[arg(long, default_value_t = 2)]
    pub samples: usize,

    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Accept insertions with beta >= s_{alpha+1} - s_{alpha-1}.
    #[arg(long)]
    pub allow_beta_overflow: bool,

    #[arg(long, value_enum, default_value_t = Mode::Invariant)]
    pub mode: Mode,

    /// Shorthand for --mode oracle-<kind>.
    #[arg(long, value_enum, conflicts_with = "mode")]
    pub oracle: Option<OracleKind>,

    /// JSON-lines file of problems; prints one JSON record per line.
    #[arg(long, conflicts_with_all = ["n", "s", "d", "insertions"])]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {}", .0.kind(), .0)]
    Core(#[from] fquot_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "Io",
        }
    }
}

/// Parses `1:2`, `1:1x8` into a list of insertions.
pub fn parse_insertions(items: &[String]) -> Result<Vec<Insertion>, CliError> {
    let mut out = Vec::new();
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let bad = || {
            CliError::Usage(format!(
                "malformed insertion `{item}` (expected alpha:beta or alpha:betaxN)"
            ))
        };
        let (alpha, rest) = item.split_once(':').ok_or_else(bad)?;
        let (beta, times) = match rest.split_once('x') {
            Some((b, t)) => (b, t.parse::<usize>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let alpha = alpha.parse().map_err(|_| bad())?;
        let beta = beta.parse().map_err(|_| bad())?;
        out.extend(std::iter::repeat_n(Insertion::new(alpha, beta), times));
    }
    Ok(out)
}

/// Everything needed to run one problem.
#[derive(Clone, Debug)]
pub struct Job {
    pub n: usize,
    pub s: Vec<usize>,
    pub d: Option<Vec<u32>>,
    pub insertions: Vec<Insertion>,
    pub allow_beta_overflow: bool,
    pub mode: Mode,
    pub config: EngineConfig,
}

impl Job {
    fn shape_and_degrees(&self) -> Result<(FlagShape, DegreeVector), CliError> {
        let shape = FlagShape::new(self.n, self.s.clone())?;
        let degrees = match &self.d {
            Some(d) => DegreeVector::new(&shape, d.clone())?,
            None => DegreeVector::zero(&shape),
        };
        Ok((shape, degrees))
    }

    fn problem(&self) -> Result<ProblemSpec, CliError> {
        let (shape, degrees) = self.shape_and_degrees()?;
        Ok(ProblemSpec::new(
            shape,
            degrees,
            self.insertions.clone(),
            self.allow_beta_overflow,
        )?)
    }

    fn record(
        &self,
        problem: &ProblemSpec,
        fixed_points: u64,
        value: String,
        samples: usize,
    ) -> ResultRecord {
        ResultRecord {
            flag: FlagJson {
                n: problem.shape().n(),
                s: problem.shape().steps().to_vec(),
            },
            degree: problem.degrees().as_slice().to_vec(),
            insertions: problem
                .insertions()
                .iter()
                .copied()
                .map(InsertionJson::from)
                .collect(),
            dimension: problem.dimension(),
            fixed_points,
            invariant: value,
            samples,
            seed: self.config.seed,
            mode: self.mode.name().to_string(),
            beta_overflow: problem.exceeds_beta_bound(),
        }
    }

    /// Runs an invariant or oracle mode.
    pub fn evaluate(&self) -> Result<ResultRecord, CliError> {
        let problem = self.problem()?;
        let shape = problem.shape();
        match self.mode {
            Mode::Invariant => {
                let result = invariant_with(&problem, &self.config)?;
                let value = result.value.to_integer().to_string();
                Ok(self.record(
                    &problem,
                    result.fixed_point_count,
                    value,
                    result.samples_used,
                ))
            }
            Mode::OraclePn => {
                if shape.steps() != [1]
                    || problem
                        .insertions()
                        .iter()
                        .any(|i| *i != Insertion::new(1, 1))
                {
                    return Err(CliError::Usage(
                        "oracle-pn needs s = 1 (projective space) and only 1:1 insertions".into(),
                    ));
                }
                let d = problem.degrees().get(1);
                let value = pn_invariant(shape.n() - 1, d as usize, &self.config)?;
                let count = count_fixed_points(shape, problem.degrees());
                Ok(self.record(&problem, count, value.to_string(), self.config.samples))
            }
            Mode::OracleGrassmannian => {
                if shape.len() != 1 {
                    return Err(CliError::Usage(
                        "oracle-grassmannian needs a single flag step".into(),
                    ));
                }
                let betas: Vec<usize> = problem.insertions().iter().map(|i| i.beta).collect();
                let value = grassmannian_quantum_integral(
                    shape.n(),
                    shape.step(1),
                    problem.degrees().get(1),
                    &betas,
                )?;
                let count = count_fixed_points(shape, problem.degrees());
                Ok(self.record(&problem, count, value.to_string(), 0))
            }
            Mode::OracleClassical => {
                if !problem.degrees().is_zero() {
                    return Err(CliError::Usage(
                        "oracle-classical needs all degrees zero".into(),
                    ));
                }
                let value = classical_flag_invariant(shape, problem.insertions(), &self.config)?;
                Ok(self.record(
                    &problem,
                    chain_count(shape),
                    value.to_string(),
                    self.config.samples,
                ))
            }
            Mode::ListFixedPoints => Err(CliError::Usage(
                "list-fixed-points does not produce an invariant".into(),
            )),
        }
    }

    fn list_fixed_points(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        let (shape, degrees) = self.shape_and_degrees()?;
        if format == Format::Text {
            writeln!(
                out,
                "{shape} degree {:?}: {} fixed points",
                degrees.as_slice(),
                count_fixed_points(&shape, &degrees)
            )?;
        }
        for fp in enumerate_fixed_points(&shape, &degrees) {
            match format {
                Format::Text => writeln!(out, "{fp}")?,
                Format::Json => {
                    let item = FixedPointJson {
                        chain: fp
                            .chain()
                            .levels()
                            .iter()
                            .map(|l| l.iter().map(|j| j + 1).collect())
                            .collect(),
                        a: fp.a().to_vec(),
                        b: fp.b().to_vec(),
                    };
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string(&item).expect("serializable")
                    )?;
                }
            }
        }
        Ok(())
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn base_config(cli: &Cli) -> Result<EngineConfig, CliError> {
    if cli.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let workers = cli.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    Ok(EngineConfig {
        seed: cli.seed,
        samples: cli.samples,
        workers,
        ..EngineConfig::default()
    })
}

fn effective_mode(cli: &Cli) -> Mode {
    match cli.oracle {
        Some(OracleKind::Pn) => Mode::OraclePn,
        Some(OracleKind::Grassmannian) => Mode::OracleGrassmannian,
        Some(OracleKind::Classical) => Mode::OracleClassical,
        None => cli.mode,
    }
}

fn job_from_cli(cli: &Cli) -> Result<Job, CliError> {
    let n = cli
        .n
        .ok_or_else(|| CliError::Usage("--n is required".into()))?;
    Ok(Job {
        n,
        s: cli.s.clone(),
        d: (!cli.d.is_empty()).then(|| cli.d.clone()),
        insertions: parse_insertions(&cli.insertions)?,
        allow_beta_overflow: cli.allow_beta_overflow,
        mode: effective_mode(cli),
        config: base_config(cli)?,
    })
}

fn job_from_batch(line: &str, cli: &Cli) -> Result<Job, CliError> {
    let problem: BatchProblem = serde_json::from_str(line)
        .map_err(|e| CliError::Usage(format!("malformed problem: {e}")))?;
    let mode = match &problem.mode {
        None => effective_mode(cli),
        Some(name) => match Mode::parse(name) {
            Some(Mode::ListFixedPoints) | None => {
                return Err(CliError::Usage(format!("unsupported batch mode `{name}`")))
            }
            Some(m) => m,
        },
    };
    let mut config = base_config(cli)?;
    if let Some(seed) = problem.seed {
        config.seed = seed;
    }
    if let Some(samples) = problem.samples {
        if samples < 2 {
            return Err(CliError::Usage("samples must be at least 2".into()));
        }
        config.samples = samples;
    }
    Ok(Job {
        n: problem.flag.n,
        s: problem.flag.s,
        d: problem.degree,
        insertions: problem
            .insertions
            .into_iter()
            .map(Insertion::from)
            .collect(),
        allow_beta_overflow: problem
            .allow_beta_overflow
            .unwrap_or(cli.allow_beta_overflow),
        mode,
        config,
    })
}

/// Processes a JSON-lines batch: one output record per non-blank input line,
/// in order. Failing lines produce an [`ErrorRecord`] and processing goes on.
pub fn run_batch(input: impl BufRead, cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rendered = match job_from_batch(&line, cli).and_then(|job| job.evaluate()) {
            Ok(rec) => serde_json::to_string(&rec),
            Err(e) => serde_json::to_string(&ErrorRecord {
                line: idx + 1,
                kind: e.kind().to_string(),
                error: e.to_string(),
            }),
        }
        .expect("records serialize");
        writeln!(out, "{rendered}")?;
    }
    Ok(())
}

fn render_text(rec: &ResultRecord, out: &mut dyn Write) -> std::io::Result<()> {
    let steps: Vec<String> = rec.flag.s.iter().map(|s| s.to_string()).collect();
    let mut groups: Vec<(InsertionJson, usize)> = Vec::new();
    for ins in &rec.insertions {
        match groups.last_mut() {
            Some((last, k)) if last == ins => *k += 1,
            _ => groups.push((*ins, 1)),
        }
    }
    let insertions: Vec<String> = groups
        .iter()
        .map(|(i, k)| match k {
            1 => format!("{}:{}", i.alpha, i.beta),
            k => format!("{}:{}x{k}", i.alpha, i.beta),
        })
        .collect();
    writeln!(out, "flag:          F({}; {})", steps.join(","), rec.flag.n)?;
    writeln!(out, "degree:        {:?}", rec.degree)?;
    writeln!(out, "insertions:    {}", insertions.join(","))?;
    writeln!(out, "dimension:     {}", rec.dimension)?;
    writeln!(out, "fixed points:  {}", rec.fixed_points)?;
    writeln!(out, "mode:          {}", rec.mode)?;
    writeln!(out, "samples:       {} (seed {})", rec.samples, rec.seed)?;
    if rec.beta_overflow {
        writeln!(
            out,
            "note:          beta exceeds s_(alpha+1) - s_(alpha-1); outside the proven range"
        )?;
    }
    writeln!(out, "invariant:     {}", rec.invariant)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(path) = &cli.batch {
        let file = File::open(path)
            .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
        return run_batch(BufReader::new(file), cli, out);
    }
    let job = job_from_cli(cli)?;
    if job.mode == Mode::ListFixedPoints {
        return job.list_fixed_points(cli.format, out);
    }
    let rec = job.evaluate()?;
    match cli.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&rec).expect("records serialize")
        )?,
        Format::Text => render_text(&rec, out)?,
    }
    Ok(())
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
