use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use oklab::{commands, encode, Catalog, Format, Report, RunConfig, RunError, Runner, Suite};

#[derive(Parser, Debug)]
#[command(name = "oklab", version, about = "Exact Newton–Okounkov bodies and additivity checks on toric testbeds")]
struct Cli {
    /// Testbed name (built-in or from the catalog directory).
    #[arg(long, global = true)]
    testbed: Option<String>,
    /// Flag selector: `standard`, `cone:i,j,...` or a JSON `{"cone": [...]}`.
    #[arg(long, global = true)]
    flag: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    mmax: u32,
    /// Largest denominator on `t` grids.
    #[arg(long, global = true, default_value_t = 12)]
    grid_den: i128,
    /// Sweep coefficients, comma separated rationals.
    #[arg(long, global = true, default_value = "1/2,1,3/2,2,3")]
    coeffs: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per testbed or dimension.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory of extra testbed JSON files.
    #[arg(long, global = true, env = "OKLAB_CATALOG")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton–Okounkov body of a class.
    Body {
        #[arg(long)]
        class: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Look for a pair with strict inclusion of bodies.
    SearchStrict {
        #[arg(long, default_value_t = 3)]
        bound: i128,
    },
    /// `μ(M; E)` for the first flag divisor, with the body endpoint.
    Mu {
        #[arg(long)]
        class: String,
    },
    /// Top intersection number; classes separated by `;`.
    Intersect {
        #[arg(long)]
        classes: String,
    },
    /// Mixed volume of bodies of classes or of polytopes in a JSON file.
    Mixedvol {
        #[arg(long)]
        classes: Option<String>,
        #[arg(long)]
        polytopes: Option<PathBuf>,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, RunError> {
    let coeffs = encode::parse_list(&cli.coeffs).map_err(|e| RunError::Config(e.to_string()))?;
    let search_bound = match cli.command {
        Command::SearchStrict { bound } => bound,
        _ => 3,
    };
    Ok(RunConfig {
        testbed: cli.testbed.clone(),
        flag: cli.flag.clone(),
        m_max: cli.mmax,
        grid_den: cli.grid_den,
        coeffs,
        seed: cli.seed,
        samples: cli.samples,
        search_bound,
        format: match cli.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    })
}

fn run(cli: &Cli) -> Result<Report, RunError> {
    let cfg = config(cli)?;
    let catalog = match &cli.catalog {
        Some(dir) => Catalog::with_dir(dir).map_err(|e| RunError::Config(format!("{e:#}")))?,
        None => Catalog::builtin(),
    };
    let name = match &cli.command {
        Command::Body { .. } => "body",
        Command::Verify { .. } => "verify",
        Command::SearchStrict { .. } => "search-strict",
        Command::Mu { .. } => "mu",
        Command::Intersect { .. } => "intersect",
        Command::Mixedvol { .. } => "mixedvol",
    };
    let mut echo = cfg.echo();
    if let Command::Verify { suite } = &cli.command {
        echo["suite"] = suite.clone().into();
    }
    let mut report = Report::new(name, echo);
    let mut runner = Runner::new(cfg, catalog)?;
    match &cli.command {
        Command::Body { class } => commands::body(&mut runner, class, &mut report)?,
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(RunError::Config)?;
            runner.run(suite, &mut report)?;
        }
        Command::SearchStrict { .. } => runner.run(Suite::Strict, &mut report)?,
        Command::Mu { class } => commands::mu(&mut runner, class, &mut report)?,
        Command::Intersect { classes } => commands::intersect(&mut runner, classes, &mut report)?,
        Command::Mixedvol { classes, polytopes } => {
            let value = match polytopes {
                Some(p) => {
                    let text = std::fs::read_to_string(p).map_err(|e| RunError::Config(format!("reading {}: {e}", p.display())))?;
                    Some(serde_json::from_str(&text).map_err(|e| RunError::Config(format!("parsing {}: {e}", p.display())))?)
                }
                None => None,
            };
            commands::mixedvol(&mut runner, classes.as_deref(), value.as_ref(), &mut report)?
        }
    }
    Ok(report)
}

fn emit(cli: &Cli, report: &Report) -> anyhow::Result<()> {
    let text = match cli.format {
        FormatArg::Json => report.render_json(),
        FormatArg::Csv => report.render_csv()?,
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("oklab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("oklab: writing report: {e:#}");
        return ExitCode::from(2);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        for c in report.failures() {
            eprintln!("FAIL {} {}", c.suite, c.key);
        }
        ExitCode::from(1)
    }
}
