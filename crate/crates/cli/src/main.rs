//! Command-line front end.
//!
//! Exit status: 0 when the job ran (verdicts live in the JSON), 1 on an
//! internal failure, 2 on an invalid configuration.

mod run;
mod svg;

use clap::{Parser, Subcommand, ValueEnum};
use hminimal::Tolerances;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "hminimal", version, about = "H-minimal graphs and ruled spanning surfaces in the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Job JSON (or, for `render`, an artifact written by another command).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    tol_char: Option<f64>,
    #[arg(long, global = true)]
    tol_glue: Option<f64>,
    /// Sampling resolution; each command has its own default.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    seed_offset: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Horizontal Gauss map on a grid, with refined characteristic points.
    GaussScan,
    /// Strong and weak minimality residuals of a graph patch.
    Minimality,
    /// Characteristic roots along each rule and projected rule crossings.
    CharLocus,
    /// Seed validation, lifted graph residuals and mesh of a ruled surface.
    BuildRuled,
    /// Interface and weak defects of two glued patches.
    GlueCheck,
    /// Harmonicity and minimality of a persistent family member.
    Persistent,
    /// Access field, Legendrian points and isolated points of a closed curve.
    PlateauScan,
    /// Continue the nontrivial root branch.
    PhiContinue {
        /// Start parameter; defaults to the first isolated point.
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi0: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        direction: f64,
    },
    /// Continue, assemble and fold-check a spanning surface; write the verdict.
    Assemble {
        /// Continue past obstructions and assemble anyway.
        #[arg(long)]
        force: bool,
    },
    /// Picard integral curves, with mollified comparisons.
    FlowTrace,
    /// SVG from an artifact.
    Render {
        #[arg(long, value_enum)]
        kind: RenderKind,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RenderKind {
    AccessHeatmap,
    PhiPlot,
    #[value(name = "RULES_3D_PROJECTION")]
    Rules3dProjection,
    RulesXy,
    Mesh,
}

/// Failure split by exit status.
#[derive(Debug)]
pub enum Failure {
    Config(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

pub trait Classify<T> {
    fn config(self) -> Result<T, Failure>;
    fn internal(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn config(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Config(e.into()))
    }

    fn internal(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Internal(e.into()))
    }
}

/// Options shared by every command.
pub struct Ctx {
    pub tol: Tolerances,
    pub grid: Option<usize>,
}

fn execute(cli: Cli) -> Result<Vec<PathBuf>, Failure> {
    let input = cli.input.ok_or_else(|| Failure::Config(anyhow::anyhow!("--input is required")))?;
    let text = std::fs::read_to_string(&input)
        .map_err(|e| Failure::Config(anyhow::anyhow!("cannot read {}: {e}", input.display())))?;
    let mut tol = Tolerances::default();
    if let Some(v) = cli.tol_char {
        tol.char_tol = v;
    }
    if let Some(v) = cli.tol_glue {
        tol.glue_tol = v;
    }
    if let Some(v) = cli.seed_offset {
        tol.seed_offset = v;
    }
    let positive = [tol.char_tol, tol.glue_tol, tol.seed_offset];
    if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Failure::Config(anyhow::anyhow!("tolerances must be positive and finite")));
    }
    if cli.grid.is_some_and(|g| g < 2) {
        return Err(Failure::Config(anyhow::anyhow!("--grid must be at least 2")));
    }
    let ctx = Ctx { tol, grid: cli.grid };
    let files = match cli.cmd {
        Cmd::GaussScan => run::gauss_scan(&ctx, &text)?,
        Cmd::Minimality => run::minimality(&ctx, &text)?,
        Cmd::CharLocus => run::char_locus(&ctx, &text)?,
        Cmd::BuildRuled => run::build_ruled(&ctx, &text)?,
        Cmd::GlueCheck => run::glue_check(&ctx, &text)?,
        Cmd::Persistent => run::persistent(&ctx, &text)?,
        Cmd::PlateauScan => run::plateau_scan(&ctx, &text)?,
        Cmd::PhiContinue { t0, phi0, direction } => run::phi_continue(&ctx, &text, t0, phi0, direction)?,
        Cmd::Assemble { force } => run::assemble(&ctx, &text, force)?,
        Cmd::FlowTrace => run::flow_trace(&ctx, &text)?,
        Cmd::Render { kind } => svg::render(kind, &text)?,
    };
    std::fs::create_dir_all(&cli.out).internal()?;
    let mut written = Vec::new();
    for (name, body) in files {
        let path = cli.out.join(name);
        std::fs::write(&path, body).internal()?;
        written.push(path);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (Failure::Config(e) | Failure::Internal(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}
