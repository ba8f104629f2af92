mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use nashset::equilibrium::{epsilon_ne_oracle, solve_with, Mode, RunReport, SolveOptions};
use nashset::game::{builtin, builtin_names};
use nashset::io::{read_game, read_region, write_text, GameFile, RegionFile};
use nashset::tolerance::REPORT;
use nashset::{GameError, IoError, PipelineError, RegionUnion};

#[derive(Parser)]
#[command(name = "nashset", version, about = "Polyhedral approximation of Nash equilibrium sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Shared,
    Independent,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Benson tolerance; defaults to the value in the game file.
    #[arg(long)]
    eps1: Option<f64>,
    /// Projection tolerance; defaults to the value in the game file.
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "NASHSET_THREADS")]
    threads: Option<usize>,
    #[arg(long, default_value_t = 5000)]
    benson_max_iterations: usize,
    #[arg(long, default_value_t = 500)]
    projection_max_iterations: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the equilibrium region of a game file.
    Solve {
        game: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Region file to write (default: next to the game file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay the ε-NE oracle on samples of a stored region.
    Check {
        game: PathBuf,
        region: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Epsilon to check (default: the region's ε₁ + 2Lε₂).
        #[arg(long)]
        eps: Option<f64>,
        /// Points that must lie in the region, as `x1,x2;y1,y2;…`
        /// (default: the game file's known equilibria).
        #[arg(long)]
        known_ne: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit plot-ready vertex cycles for a region of dimension at most 3.
    Plotdata {
        region: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run or export a built-in example game.
    Fixture {
        /// Fixture name; omit with --list.
        name: Option<String>,
        #[arg(long)]
        list: bool,
        /// Write the fixture as a game file instead of solving it.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Region file to write after solving.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "NASHSET_THREADS")]
        threads: Option<usize>,
    },
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn assumption(e: &GameError) -> bool {
    matches!(
        e,
        GameError::TooFewPlayers(_)
            | GameError::Unbounded
            | GameError::EmptyFeasibleSet
            | GameError::EmptyInterior { .. }
            | GameError::Geometry(nashset::GeometryError::Unbounded)
    )
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = match &e {
            IoError::Game(g) if assumption(g) => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::InvalidInput(_) => 2,
            PipelineError::Assumption(_) => 3,
            PipelineError::Stage { budget_exhausted: true, .. } => 4,
            PipelineError::Stage { .. } => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn parse_points(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    s.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Failure::new(2, format!("invalid coordinate {v:?}"))))
                .collect()
        })
        .collect()
}

fn options(file: &GameFile, run: &RunArgs) -> Result<SolveOptions, Failure> {
    let eps1 = run.eps1.or(file.eps1).ok_or_else(|| Failure::new(2, "--eps1 is required"))?;
    let eps2 = run.eps2.or(file.eps2).ok_or_else(|| Failure::new(2, "--eps2 is required"))?;
    let mut o = SolveOptions::new(eps1, eps2);
    o.mode = run.mode.map(|m| match m {
        ModeArg::Shared => Mode::Shared,
        ModeArg::Independent => Mode::Independent,
    });
    o.threads = run.threads;
    o.benson_max_iterations = run.benson_max_iterations;
    o.projection_max_iterations = run.projection_max_iterations;
    Ok(o)
}

fn summary(x: &RegionUnion, r: &RunReport) {
    println!("pieces        {}", x.pieces.len());
    println!("groups        {}", x.connected_groups().len());
    println!("faces         {:?}", r.face_counts());
    println!("eps           {:.6} (eps1 {} + 2*{}*eps2 {})", r.eps, r.eps1, r.lipschitz, r.eps2);
    println!("eps certified {:.6}", x.eps_certified);
    println!("time          {:.2}s", r.total_seconds);
}

fn default_region_path(game: &Path) -> PathBuf {
    game.with_extension("region.json")
}

fn cmd_solve(game: &Path, run: &RunArgs, out: Option<&Path>) -> Result<(), Failure> {
    let file = read_game(game)?;
    let g = file.to_game()?;
    let opts = options(&file, run)?;
    let (x, report) = solve_with(&g, &opts)?;
    let region = RegionFile::new(&x, &file.hash(), &report);
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| default_region_path(game));
    write_text(&out, &region.to_json())?;
    summary(&x, &report);
    println!("wrote         {}", out.display());
    Ok(())
}

fn cmd_check(
    game: &Path,
    region: &Path,
    samples: usize,
    eps: Option<f64>,
    known: Option<&str>,
    seed: u64,
) -> Result<(), Failure> {
    let file = read_game(game)?;
    let g = file.to_game()?;
    let rf = read_region(region)?;
    if rf.metadata.game_hash != file.hash() {
        eprintln!("warning: region was computed for a different game file");
    }
    let x = rf.to_region()?;
    let eps = match eps {
        Some(e) => e,
        None => rf.metadata.eps.parse().map_err(|_| Failure::new(2, "invalid eps in region file"))?,
    };
    let known = match known {
        Some(s) => parse_points(s)?,
        None => file.known_ne.clone(),
    };
    let mut ok = true;
    if !known.is_empty() {
        let missing: Vec<&Vec<f64>> = known.iter().filter(|p| !x.contains(p, 1e-9)).collect();
        println!("known NE contained: {}/{}", known.len() - missing.len(), known.len());
        for p in &missing {
            println!("  missing {p:?}");
        }
        ok &= missing.is_empty();
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // pieces are cut by the polyhedral hull only; samples outside nonlinear
    // strategy constraints are not part of the certified set
    let (pts, outside): (Vec<_>, Vec<_>) = x
        .sample(&mut rng, samples)
        .into_iter()
        .partition(|p| g.violation(p) <= 1e-9 * (1.0 + p.iter().fold(0.0f64, |a, v| a.max(v.abs()))));
    if !outside.is_empty() {
        println!("samples outside the nonlinear constraints (skipped): {}", outside.len());
    }
    let mut failed = 0;
    for p in &pts {
        match epsilon_ne_oracle(&g, p, eps + REPORT) {
            Ok(true) => {}
            Ok(false) => failed += 1,
            Err(e) => return Err(Failure::new(1, format!("oracle failed at {p:?}: {e}"))),
        }
    }
    println!("eps-NE samples passed: {}/{} at eps {eps} (+{REPORT:e} slack)", pts.len() - failed, pts.len());
    ok &= failed == 0;
    if ok {
        Ok(())
    } else {
        Err(Failure::new(1, "check failed"))
    }
}

fn cmd_plotdata(region: &Path, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let x = read_region(region)?.to_region()?;
    let data = plot::plot_data(&x).ok_or_else(|| Failure::new(5, format!("cannot plot a {}-dimensional region", x.dim)))?;
    let text = match format {
        Format::Csv => plot::to_csv(&data).map_err(|e| Failure::new(1, e.to_string()))?,
        Format::Json => serde_json::to_string_pretty(&data).map_err(|e| Failure::new(1, e.to_string()))?,
    };
    match out {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_fixture(
    name: Option<&str>,
    list: bool,
    emit: Option<&Path>,
    out: Option<&Path>,
    threads: Option<usize>,
) -> Result<(), Failure> {
    if list {
        for n in builtin_names() {
            println!("{n}");
        }
        return Ok(());
    }
    let name = name.ok_or_else(|| Failure::new(2, "fixture name required (see --list)"))?;
    let fx = builtin(name).ok_or_else(|| Failure::new(2, format!("unknown fixture {name:?}")))?;
    let file = GameFile::from_fixture(&fx);
    if let Some(p) = emit {
        write_text(p, &file.to_toml())?;
        println!("wrote {}", p.display());
        return Ok(());
    }
    let mut opts = SolveOptions::new(fx.eps1, fx.eps2);
    opts.threads = threads;
    let (x, report) = solve_with(&fx.game, &opts)?;
    summary(&x, &report);
    let missing = fx.known_ne.iter().filter(|p| !x.contains(p, 1e-9)).count();
    println!("known NE      {}/{} contained", fx.known_ne.len() - missing, fx.known_ne.len());
    if let Some(p) = out {
        write_text(p, &RegionFile::new(&x, &file.hash(), &report).to_json())?;
        println!("wrote         {}", p.display());
    }
    if missing > 0 {
        return Err(Failure::new(1, "known equilibria missing from the region"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Solve { game, run, out } => cmd_solve(game, run, out.as_deref()),
        Command::Check { game, region, samples, eps, known_ne, seed } => {
            cmd_check(game, region, *samples, *eps, known_ne.as_deref(), *seed)
        }
        Command::Plotdata { region, format, out } => cmd_plotdata(region, *format, out.as_deref()),
        Command::Fixture { name, list, emit, out, threads } => {
            cmd_fixture(name.as_deref(), *list, emit.as_deref(), out.as_deref(), *threads)
        }
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
