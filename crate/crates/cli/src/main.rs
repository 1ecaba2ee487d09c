use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pdmwell::Space;
use pdmwell_cli::commands::{self, Method, Quantity};
use pdmwell_cli::config::{parse_range, DEFAULT_GRID, DEFAULT_TOL};
use pdmwell_cli::verify::{run_verify, LibraryForms};
use pdmwell_cli::{CliError, CliResult, Format, RunConfig, Table};

#[derive(Debug, Parser)]
#[command(
    name = "pdmwell",
    version,
    about = "Position-dependent-mass infinite well: states, information measures, complexities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Quantum numbers.
    #[arg(long = "n", value_delimiter = ',', default_value = "1")]
    n: Vec<u32>,

    /// Deformations γa, each in (-1, 1).
    #[arg(
        long = "gamma-a",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0"
    )]
    gamma_a: Vec<f64>,

    /// Spaces: x, k, eta.
    #[arg(long, value_delimiter = ',', default_value = "x")]
    space: Vec<String>,

    /// Points per sampled profile.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wavefunctions and densities on a grid.
    Eigenstate(Common),
    /// Entropy, Fisher information, disequilibrium and lengths.
    Measures {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Emit entropy-density profiles instead of integrated measures.
        #[arg(long)]
        entropy_density: bool,
    },
    /// Complexities over a range of deformations.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Inclusive range MIN:MAX:STEPS; overrides --gamma-a.
        #[arg(long, allow_hyphen_values = true)]
        gamma_a_range: Option<String>,
        /// Any of ccr, cfs, clmc.
        #[arg(long, value_delimiter = ',', default_value = "ccr,cfs,clmc")]
        quantity: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
    },
    /// Data behind figures 1 to 4.
    Figure {
        /// 1 eigenstates, 2 classical overlay, 3 entropy density, 4 complexity sweep.
        #[arg(long)]
        id: u8,
        /// Use --n and --gamma-a instead of the figure's own values.
        #[arg(long)]
        custom: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-verification suite.
    Verify {
        /// Tolerance for the quadrature comparisons.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also write the report as a table.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

fn config(common: Common) -> CliResult<RunConfig> {
    let spaces = common
        .space
        .iter()
        .map(|s| {
            s.parse::<Space>()
                .map_err(|e| CliError::InvalidConfig(e.to_string()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    RunConfig {
        n_list: common.n,
        gamma_a_list: common.gamma_a,
        grid_points: common.grid,
        spaces,
        tol: DEFAULT_TOL,
        format: common.format,
        output: common.out,
    }
    .validate()
}

fn emit(table: &Table, format: Format, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            table.write(format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Eigenstate(common) => {
            let cfg = config(common)?;
            emit(
                &commands::eigenstate_table(&cfg)?,
                cfg.format,
                cfg.output.as_ref(),
            )?;
        }
        Command::Measures {
            common,
            method,
            entropy_density,
        } => {
            let cfg = config(common)?;
            let table = if entropy_density {
                commands::entropy_density_table(&cfg)?
            } else {
                commands::measures_table(&cfg, method)?
            };
            emit(&table, cfg.format, cfg.output.as_ref())?;
        }
        Command::Sweep {
            mut common,
            gamma_a_range,
            quantity,
            method,
        } => {
            if let Some(range) = gamma_a_range {
                common.gamma_a = parse_range(&range)?;
            }
            let cfg = config(common)?;
            let quantities = quantity
                .iter()
                .map(|q| q.parse::<Quantity>())
                .collect::<CliResult<Vec<_>>>()?;
            emit(
                &commands::sweep_table(&cfg, &quantities, method)?,
                cfg.format,
                cfg.output.as_ref(),
            )?;
        }
        Command::Figure { id, custom, common } => {
            let cfg = config(common)?;
            emit(
                &commands::figure_table(id, &cfg, custom)?,
                cfg.format,
                cfg.output.as_ref(),
            )?;
        }
        Command::Verify { tol, out, format } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::InvalidConfig(format!(
                    "tolerance must be positive, got {tol}"
                )));
            }
            let report = run_verify(tol, &LibraryForms)?;
            print!("{}", report.render());
            if let Some(path) = out.as_ref() {
                emit(&report.to_table(), format, Some(path))?;
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
