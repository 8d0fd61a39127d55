//! Command-line front end for `bezroots`.
//!
//! `solve` runs the whole pipeline and writes `roots.json` and
//! `histogram.csv`; `dump` stops at `--stage` and writes that stage's
//! artifact. With `--stage all` every artifact is written.
//!
//! | stage        | file                                  |
//! |--------------|---------------------------------------|
//! | `bezout`     | `family.json`                         |
//! | `rank`       | `rank.csv`, `rank.json`               |
//! | `reduce`     | `reduced.json`                        |
//! | `companions` | `companions.json`                     |
//! | `roots`      | `roots.json`, `histogram.csv`         |
//!
//! A univariate system file with a `g` entry also gets `barnett.json`.

pub mod output;
pub mod system;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use bezroots::bezmat::{bezout_family_full, build_family, symbolic_family, BezoutFamily};
use bezroots::bezout1d::{generalized_barnett, UniPoly};
use bezroots::reduce::{numerical_rank, reduce_family, RankTol, ReduceOptions, ReducedFamily};
use bezroots::solve::{
    companions, joint_eigen, log_error_histogram, verify, CompanionSet, RootSet,
};
use bezroots::C64;
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{
    histogram_csv, matrix_json, rank_csv, roots_json, CompanionDump, FamilyDump, RankSummary,
};
use system::{load_system, InputError, LoadedSystem};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_ZERO_DIM: i32 = 3;
pub const EXIT_CONDITIONING: i32 = 4;

/// Bins and range of `log10(residual)` in `histogram.csv`.
pub const HISTOGRAM_BINS: usize = 20;
pub const HISTOGRAM_RANGE: (f64, f64) = (-18.0, 2.0);

#[derive(Parser, Debug)]
#[command(
    name = "bezroots",
    version,
    about = "Roots of polynomial systems via Bezout matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full pipeline and write the roots.
    Solve(RunArgs),
    /// Write the intermediate result of one stage.
    Dump(RunArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Stage {
    Bezout,
    Rank,
    Reduce,
    Companions,
    Roots,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl From<Switch> for bool {
    fn from(s: Switch) -> bool {
        s == Switch::On
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// System file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Stage to stop at (`dump`) or to dump in addition to the roots (`solve`).
    #[arg(long, value_enum)]
    pub stage: Option<Stage>,
    /// Relative rank tolerance in (0, 1); the default scales machine epsilon
    /// by the size and largest entry of B(1).
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict QR pivoting to the blocks of the block triangular form.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    pub blocks: Switch,
    /// Build the Bezout family by symbolic expansion instead of interpolation.
    #[arg(long, value_enum, default_value_t = Switch::Off)]
    pub oracle: Switch,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Validated settings of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub stage: Stage,
    pub tolerance: RankTol,
    pub seed: u64,
    pub use_blocks: bool,
    pub oracle: bool,
    pub out: PathBuf,
    /// Stop after `stage` instead of running to the roots.
    pub dump_only: bool,
}

impl RunConfig {
    pub fn from_command(cmd: &Command) -> anyhow::Result<Self> {
        let (a, dump_only) = match cmd {
            Command::Solve(a) => (a, false),
            Command::Dump(a) => (a, true),
        };
        let tolerance = match a.tau {
            None => RankTol::Auto,
            Some(t) if t > 0.0 && t < 1.0 => RankTol::Relative(t),
            Some(t) => return Err(InputError(format!("--tau must lie in (0, 1), got {t}")).into()),
        };
        Ok(RunConfig {
            input: a.input.clone(),
            stage: a
                .stage
                .unwrap_or(if dump_only { Stage::All } else { Stage::Roots }),
            tolerance,
            seed: a.seed,
            use_blocks: a.blocks.into(),
            oracle: a.oracle.into(),
            out: a.out.clone(),
            dump_only,
        })
    }

    fn reduce_options(&self) -> ReduceOptions {
        ReduceOptions {
            tolerance: self.tolerance,
            use_blocks: self.use_blocks,
            ..Default::default()
        }
    }

    fn writes(&self, s: Stage) -> bool {
        self.stage == s || self.stage == Stage::All
    }
}

/// What a run computed, for callers that want more than the files.
#[derive(Debug, Default)]
pub struct Summary {
    pub family_size: Option<(usize, usize)>,
    pub rank: Option<usize>,
    pub dim: Option<usize>,
    pub roots: Option<usize>,
    pub max_residual: Option<f64>,
    pub files: Vec<PathBuf>,
}

fn write_file(out: &Path, name: &str, body: &str, summary: &mut Summary) -> anyhow::Result<()> {
    let p = out.join(name);
    fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
    summary.files.push(p);
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn univariate(sys: &LoadedSystem) -> UniPoly {
    let p = &sys.system.polys()[0];
    let mut c = vec![C64::new(0.0, 0.0); p.degree_in(0) as usize + 1];
    for (m, v) in p.terms() {
        c[m.exps()[0] as usize] = *v;
    }
    UniPoly::from_ascending(c)
}

/// Runs one command, writing files under `cfg.out`, results to `stdout` and
/// diagnostics to `stderr`.
pub fn run(
    cfg: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> anyhow::Result<Summary> {
    let loaded = load_system(&cfg.input)?;
    let sys = &loaded.system;
    let names = sys.names().to_vec();
    let mut sum = Summary::default();
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;

    if let Some(g) = &loaded.g {
        let f = univariate(&loaded);
        let m = generalized_barnett(&f, g)?;
        write_file(
            &cfg.out,
            "barnett.json",
            &to_json(&matrix_json(&m))?,
            &mut sum,
        )?;
    }

    let fam: BezoutFamily = if cfg.oracle {
        symbolic_family(sys)?
    } else {
        build_family(sys)?
    };
    sum.family_size = Some((fam.rows(), fam.cols()));
    writeln!(stdout, "family = {} x {}", fam.rows(), fam.cols())?;
    if cfg.writes(Stage::Bezout) {
        write_file(
            &cfg.out,
            "family.json",
            &to_json(&FamilyDump::new(&fam, &names))?,
            &mut sum,
        )?;
    }
    if cfg.dump_only && cfg.stage == Stage::Bezout {
        return Ok(sum);
    }

    if cfg.writes(Stage::Rank) {
        // Rank of the full, unpruned B(1).
        let full = bezout_family_full(sys)?;
        let b1 = full.b1();
        let rep = numerical_rank(b1, cfg.tolerance, cfg.use_blocks);
        writeln!(stdout, "rank B(1) = {} of {}", rep.rank, b1.rows())?;
        writeln!(stdout, "span = {:.2} decades", rep.span_decades())?;
        sum.rank = Some(rep.rank);
        write_file(&cfg.out, "rank.csv", &rank_csv(&rep), &mut sum)?;
        write_file(
            &cfg.out,
            "rank.json",
            &to_json(&RankSummary::new(b1, &rep))?,
            &mut sum,
        )?;
    }
    if cfg.dump_only && cfg.stage == Stage::Rank {
        return Ok(sum);
    }

    let red: ReducedFamily = reduce_family(&fam, &cfg.reduce_options())?;
    sum.dim = Some(red.dim());
    writeln!(stdout, "dim A = {}", red.dim())?;
    writeln!(
        stderr,
        "level=info stage=reduce initial_rank={} threshold={:e}",
        red.initial_rank, red.threshold
    )?;
    if cfg.writes(Stage::Reduce) {
        write_file(
            &cfg.out,
            "reduced.json",
            &to_json(&FamilyDump::reduced(&red, &names))?,
            &mut sum,
        )?;
    }
    if cfg.dump_only && cfg.stage == Stage::Reduce {
        return Ok(sum);
    }

    let cs: CompanionSet = companions(&red)?;
    if let Some(w) = cs.warning {
        writeln!(
            stderr,
            "level=warning stage=companions kind=conditioning rcond={:e} tolerance={:e}",
            w.rcond, w.tolerance
        )?;
    }
    writeln!(
        stderr,
        "level=info stage=companions commutation_error={:e}",
        cs.commutation_error()
    )?;
    if cfg.writes(Stage::Companions) {
        write_file(
            &cfg.out,
            "companions.json",
            &to_json(&CompanionDump::new(&cs))?,
            &mut sum,
        )?;
    }
    if cfg.dump_only && cfg.stage == Stage::Companions {
        return Ok(sum);
    }

    let mut rs: RootSet = joint_eigen(&cs, cfg.seed)?;
    verify(&mut rs, sys);
    let worst = rs
        .roots
        .iter()
        .map(|r| r.max_residual())
        .fold(0.0, f64::max);
    sum.roots = Some(rs.roots.len());
    sum.max_residual = Some(worst);
    writeln!(stdout, "roots = {}", rs.roots.len())?;
    writeln!(stdout, "max residual = {worst:e}")?;
    if rs.roots.iter().any(|r| r.multiplicity > 1) {
        writeln!(
            stderr,
            "level=warning stage=roots kind=cluster attempts={}",
            rs.attempts
        )?;
    }
    write_file(
        &cfg.out,
        "roots.json",
        &to_json(&roots_json(&rs))?,
        &mut sum,
    )?;
    let h = log_error_histogram(&rs, HISTOGRAM_BINS, HISTOGRAM_RANGE);
    write_file(&cfg.out, "histogram.csv", &histogram_csv(&h), &mut sum)?;
    Ok(sum)
}

/// Exit status for a failed run.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    use bezroots::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Parse { .. }
                | E::UnknownVariable(_)
                | E::VariableOutOfRange { .. }
                | E::MultidegreeTooSmall { .. }
                | E::DimensionMismatch { .. } => EXIT_INPUT,
                E::NonZeroDimensional(_) => EXIT_NOT_ZERO_DIM,
                E::Singular | E::NoConvergence => EXIT_CONDITIONING,
                _ => EXIT_FAILURE,
            };
        }
    }
    EXIT_FAILURE
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let result = RunConfig::from_command(&cli.command).and_then(|cfg| run(&cfg, stdout, stderr));
    match result {
        Ok(_) => 0,
        Err(e) => {
            let code = exit_code(&e);
            let msg = format!("{e:#}").replace('\n', " ");
            let _ = writeln!(
                stderr,
                "level=error exit={code} message=\"{}\"",
                msg.replace('"', "'")
            );
            code
        }
    }
}
