use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quatflag::flagcomb::EdgeConvention;
use quatflag::gkmring::DegreeScale;
use quatflag_cli::campaign::{
    cmd_geomlab, cmd_morse_report, cmd_verify_theorem, height_params_from_flags, CampaignConfig,
    CampaignError, ReportFormat, EXIT_MATH_FAILURE, EXIT_PASS,
};

#[derive(Parser)]
#[command(
    name = "quatflag",
    about = "Exact and numeric verification campaigns for the quaternionic flag manifold",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify degree by degree that the quotient ring maps isomorphically
    /// onto the vertex model.
    VerifyTheorem(CommonArgs),
    /// Tabulate critical points, indices, and negative Euler classes, and
    /// check the census against the q-factorial.
    MorseReport(CommonArgs),
    /// Run the seeded numeric geometry battery on the quaternion orbit.
    Geomlab(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Label the edge through w and its value-swap partner by that value pair.
    Left,
    /// Label the edge by the swapped positions instead (known to fail).
    Right,
}

impl From<ConventionArg> for EdgeConvention {
    fn from(arg: ConventionArg) -> EdgeConvention {
        match arg {
            ConventionArg::Left => EdgeConvention::Left,
            ConventionArg::Right => EdgeConvention::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

impl From<FormatArg> for ReportFormat {
    fn from(arg: FormatArg) -> ReportFormat {
        match arg {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Flag size: permutations of {1, ..., n}.
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Cohomological degree per polynomial degree (4 for the quaternionic
    /// grading, 2 for the halved one).
    #[arg(long, default_value_t = 4)]
    scale: u8,

    /// Highest polynomial degree to verify.
    #[arg(long, default_value_t = 2)]
    max_degree: u32,

    /// Comma-separated rational coefficients a_1,...,a_n (strictly
    /// increasing, zero sum). Defaults to the standard symmetric integers.
    #[arg(long)]
    a: Option<String>,

    /// Comma-separated rational spectrum r_1,...,r_n (strictly increasing,
    /// zero sum). Defaults to the standard symmetric integers.
    #[arg(long)]
    r: Option<String>,

    /// Seed for every randomized numeric check.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Edge-labeling convention for the divisibility constraints.
    #[arg(long, value_enum, default_value_t = ConventionArg::Left)]
    convention: ConventionArg,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Cap on constraint-matrix cells before a run is refused.
    #[arg(long)]
    budget_cells: Option<u64>,
}

impl CommonArgs {
    fn config(&self) -> Result<CampaignConfig, CampaignError> {
        let scale = DegreeScale::try_from(self.scale).map_err(CampaignError::Config)?;
        let hp = height_params_from_flags(self.n, self.a.as_deref(), self.r.as_deref())?;
        CampaignConfig::new(
            self.n,
            scale,
            self.max_degree,
            hp,
            self.seed,
            self.convention.into(),
            self.budget_cells,
        )
    }

    fn emit(&self, report: &str) -> std::io::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, report),
            None => {
                print!("{report}");
                Ok(())
            }
        }
    }
}

fn run(args: &CommonArgs, all_passed_report: Result<(String, bool), CampaignError>) -> ExitCode {
    let (report, all_passed) = match all_passed_report {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = args.emit(&report) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_MATH_FAILURE);
    }
    if all_passed {
        ExitCode::from(EXIT_PASS)
    } else {
        ExitCode::from(EXIT_MATH_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::VerifyTheorem(args) => run(
            args,
            args.config().and_then(|cfg| {
                cmd_verify_theorem(&cfg)
                    .map(|r| (r.render(args.format.into()), r.all_passed))
            }),
        ),
        Command::MorseReport(args) => run(
            args,
            args.config().and_then(|cfg| {
                cmd_morse_report(&cfg).map(|r| (r.render(args.format.into()), r.all_passed))
            }),
        ),
        Command::Geomlab(args) => run(
            args,
            args.config().and_then(|cfg| {
                cmd_geomlab(&cfg).map(|r| (r.render(args.format.into()), r.all_passed()))
            }),
        ),
    }
}
