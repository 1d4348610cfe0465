use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use deftan::borne::DigitOrder;
use deftan_cli::document::{parse_document, CoverDocument};
use deftan_cli::report::{build_report, human_output, machine_output, Method};
use deftan_cli::{exit, fuzz, homology, work_limit};

#[derive(Parser)]
#[command(name = "deftan", version, about = "Tangent-space dimensions for curves with p-group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Paper,
    Reversed,
}

impl From<Order> for DigitOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Paper => DigitOrder::Paper,
            Order::Reversed => DigitOrder::Reversed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a cover document.
    Validate { file: PathBuf },
    /// Compute every applicable route and cross-check them.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        /// Also write the key=value report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// H_0 and H_1 of the local module over several random choices.
    Homology {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        rank: u32,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random covers through the mandatory identities.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value = "paper")]
        digit_order: Order,
    },
}

fn load(path: &PathBuf) -> Result<CoverDocument, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return Err(exit::INVALID_INPUT);
        }
    };
    parse_document(&text).map_err(|diags| {
        for d in diags {
            eprintln!("{}:{d}", path.display());
        }
        exit::INVALID_INPUT
    })
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { file } => match load(&file) {
            Ok(doc) => {
                for (label, issue) in &doc.schmid {
                    println!("warning: branch point {label}: {issue}");
                }
                println!("valid: g_X = {}", doc.spec.genus_top().unwrap_or_default());
                exit::OK
            }
            Err(code) => code,
        },
        Command::Report { file, method, out } => {
            let doc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let report = build_report(&doc, method, work_limit());
            print!("{}", human_output(&report));
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, machine_output(&report)) {
                    eprintln!("{}: {e}", path.display());
                    return exit::INVALID_INPUT;
                }
            }
            report.exit_code()
        }
        Command::Homology { p, rank, trials, seed } => match homology::run(p, rank, trials, seed, work_limit()) {
            Ok(r) => {
                print!("{}", homology::run_text(&r));
                exit::OK
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit::INVALID_INPUT
            }
        },
        Command::Fuzz { seed, count, digit_order } => {
            let summary = fuzz::run(seed, count, digit_order.into());
            print!("{}", fuzz::summary_text(&summary));
            summary.exit_code()
        }
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse());
    ExitCode::from(code as u8)
}
