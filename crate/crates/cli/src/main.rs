use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pdmqes::oracle::OracleConfig;
use pdmqes_cli::commands::{self, Quantity};
use pdmqes_cli::spec::InstanceFlags;
use pdmqes_cli::suite::SuiteOptions;
use pdmqes_cli::CliError;

#[derive(Parser)]
#[command(name = "pdmqes", version, about = "Quasi-exactly solvable position-dependent-mass potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an instance as JSON
    Build(InstanceArgs),
    /// Sample V, psi0, psi1 or W+ on a uniform grid as CSV
    Sample {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value = "potential")]
        what: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Run the verification suite
    Verify {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Verify the four figure instances
        #[arg(long)]
        all_figures: bool,
        /// Compare the oracle ground energy with every candidate value
        #[arg(long)]
        report_e0: bool,
        #[arg(long)]
        json: bool,
        /// Coarse oracle mesh (the fine mesh is twice this)
        #[arg(long, default_value_t = 4000)]
        n: usize,
    },
    /// The instances of Figs. 1-8
    Figures {
        #[command(subcommand)]
        command: FiguresCommand,
    },
}

#[derive(Subcommand)]
enum FiguresCommand {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance spec file (JSON)
    #[arg(long)]
    spec: Option<String>,
    /// ho, rho, kc or morse
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long = "Btop", allow_hyphen_values = true)]
    b_top: Option<String>,
    #[arg(long = "L", allow_hyphen_values = true)]
    l: Option<String>,
    #[arg(long = "B2minus", allow_hyphen_values = true)]
    b_minus2: Option<String>,
}

impl InstanceArgs {
    fn flags(&self) -> InstanceFlags {
        InstanceFlags {
            spec: self.spec.clone(),
            family: self.family.clone(),
            m: self.m,
            alpha: self.alpha.clone(),
            b_top: self.b_top.clone(),
            l: self.l.clone(),
            b_minus2: self.b_minus2.clone(),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Build(args) => {
            print!("{}", commands::build(&args.flags().resolve()?)?);
        }
        Command::Sample { instance, what, from, to, points } => {
            let spec = instance.flags().resolve()?;
            let range = match (from, to) {
                (None, None) => None,
                (Some(a), Some(b)) => Some((a, b)),
                _ => return Err(CliError::Usage("--from and --to go together".into())),
            };
            print!("{}", commands::sample(&spec, what.parse::<Quantity>()?, range, points)?);
        }
        Command::Verify { instance, all_figures, report_e0, json, n } => {
            let flags = instance.flags();
            let specs = match (all_figures, flags.is_empty()) {
                (true, true) => commands::figure_specs(),
                (false, false) => vec![flags.resolve()?],
                (true, false) => return Err(CliError::Usage("--all-figures takes no instance flags".into())),
                (false, true) => return Err(CliError::Usage("give an instance, --spec FILE or --all-figures".into())),
            };
            if n < 200 {
                return Err(CliError::Usage("--n must be at least 200".into()));
            }
            let opts = SuiteOptions { oracle: OracleConfig::with_n(n), report_e0 };
            let report = commands::verify(&specs, &opts)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            return Ok(if report.passed { 0 } else { 1 });
        }
        Command::Figures { command: FiguresCommand::List { json } } => {
            print!("{}", commands::figures_list(json)?);
        }
    }
    Ok(0)
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
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
