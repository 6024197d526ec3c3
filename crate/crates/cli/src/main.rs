use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sparseres::interp::SampleSource;
use sparseres::respoly::ResultantPolytope;
use sparseres::system::{parse_system, System};
use sparseres_cli::commands::{self, to_json, Emit, Options, Projection};

/// Sparse resultants, their matrix formulas and Newton polytopes.
///
/// Exit status is 0 on success, 1 for invalid input and 2 when the input is
/// valid but a hypothesis of the method fails.
#[derive(Parser)]
#[command(name = "sparseres", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed; overrides the seed in the input.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Evaluate modulo this prime instead of over the rationals.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Shrink the matrix by greedily dropping rows and columns.
    #[arg(long, global = true)]
    greedy: bool,
    /// Resultant mode: a polynomial in the symbolic coefficients, or a
    /// value at the given coefficients.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Symbolic)]
    mode: Mode,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Input JSON file; stdin when absent or `-`.
    path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice ranks of all subfamilies and the essential subfamilies.
    Analyze(Input),
    /// Mixed volume of n supports, or of each n-subfamily of n + 1 supports.
    Mixedvol(Input),
    /// Mixed subdivision from a random lifting.
    Subdivision(Input),
    /// Certified matrix pair for the resultant.
    CeMatrix(Input),
    /// The resultant as a polynomial or a value.
    Resultant {
        #[command(flatten)]
        input: Input,
        /// Resolve a proper essential subfamily by restricting to it.
        #[arg(long)]
        restrict: bool,
    },
    /// Koszul complex in the matrix degree and its determinant.
    Koszul(Input),
    /// Resultant polytope or a projection of it.
    Respoly {
        #[command(flatten)]
        input: Input,
        /// `specialized`, or comma separated coefficient indices or names.
        #[arg(long)]
        project: Option<String>,
        #[arg(long, value_enum, default_value_t = EmitArg::All)]
        emit: EmitArg,
    },
    /// Implicit polynomial in the symbolic coefficients.
    Interp {
        #[command(flatten)]
        input: Input,
        /// Projected resultant polytope from `respoly`; computed when absent.
        #[arg(long)]
        polytope: Option<PathBuf>,
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
    },
    /// SVG (plane) or OBJ (space) scene of a polytope document.
    Plot(Input),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Specialized,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Vrep,
    Hrep,
    Triangulation,
    Stats,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    PlantedRoot,
    Evaluation,
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn read_system(input: &Input) -> Result<System> {
    let text = read_input(&input.path)?;
    Ok(parse_system(&text)?)
}

fn run(cli: &Cli) -> Result<String> {
    let opts = Options {
        seed: cli.seed,
        prime: cli.prime,
        greedy: cli.greedy,
    };
    Ok(match &cli.command {
        Command::Analyze(i) => to_json(&commands::analyze_cmd(&read_system(i)?)?),
        Command::Mixedvol(i) => to_json(&commands::mixedvol_cmd(&read_system(i)?)?),
        Command::Subdivision(i) => to_json(&commands::subdivision_cmd(&read_system(i)?, &opts)?),
        Command::CeMatrix(i) => to_json(&commands::ce_matrix_cmd(&read_system(i)?, &opts)?),
        Command::Resultant { input, restrict } => {
            let sys = read_system(input)?;
            match cli.mode {
                Mode::Symbolic => to_json(&commands::resultant_symbolic_cmd(&sys, *restrict, &opts)?),
                Mode::Specialized => to_json(&commands::resultant_value_cmd(&sys, *restrict, &opts)?),
            }
        }
        Command::Koszul(i) => to_json(&commands::koszul_cmd(&read_system(i)?, &opts)?),
        Command::Respoly { input, project, emit } => {
            let sys = read_system(input)?;
            let projection = match project {
                Some(p) => Projection::parse(p, &sys)?,
                None => Projection::All,
            };
            let emit = match emit {
                EmitArg::Vrep => Emit::VRep,
                EmitArg::Hrep => Emit::HRep,
                EmitArg::Triangulation => Emit::Triangulation,
                EmitArg::Stats => Emit::Stats,
                EmitArg::All => Emit::All,
            };
            commands::emit(&commands::respoly_cmd(&sys, &projection, &opts)?, emit)
        }
        Command::Interp { input, polytope, source } => {
            let sys = read_system(input)?;
            let polytope = match polytope {
                Some(p) => {
                    let text = std::fs::read(p).with_context(|| format!("reading {}", p.display()))?;
                    Some(ResultantPolytope::from_json_bytes(&text).with_context(|| format!("in {}", p.display()))?)
                }
                None => None,
            };
            let source = source.map(|s| match s {
                SourceArg::PlantedRoot => SampleSource::PlantedRoot,
                SourceArg::Evaluation => SampleSource::Evaluation,
            });
            to_json(&commands::interp_cmd(&sys, polytope, source, &opts)?)
        }
        Command::Plot(i) => commands::plot_cmd(&read_input(&i.path)?)?,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|out| match &cli.output {
        Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(out.as_bytes()).context("writing stdout"),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if commands::is_hypothesis_failure(&e) { 2 } else { 1 })
        }
    }
}
