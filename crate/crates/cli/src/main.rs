use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use symprod_cli::{
    csv_row, grid_documents, report_document, report_text, verify_document, verify_text, CliError, CSV_HEADER,
};
use symprod_core::RelationFamily;

#[derive(Parser)]
#[command(name = "symprod", version, about = "Cohomology and invariants of symmetric products of surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    OddWord,
    PairFactor,
    CPower,
}

impl From<Family> for RelationFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::OddWord => RelationFamily::OddWord,
            Family::PairFactor => RelationFamily::PairFactor,
            Family::CPower => RelationFamily::CPower,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Invariant report for one (n, g).
    Report {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also run the verification checks at this point.
        #[arg(long)]
        checks: bool,
        #[arg(long)]
        override_guard: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the verification suite on a grid.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, default_value_t = 6)]
        max_g: u32,
        #[arg(long, default_value_t = 0)]
        min_g: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Comma-separated check ids to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Debug: drop one relation family from the ideal generators.
        #[arg(long, value_enum)]
        mutate_ideal: Option<Family>,
        #[arg(long)]
        override_guard: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// One report row per (n, g) with 1 <= n <= max-n, min-g <= g <= max-g.
    Grid {
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, default_value_t = 6)]
        max_g: u32,
        #[arg(long, default_value_t = 1)]
        min_g: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        override_guard: bool,
        #[arg(long)]
        out: Option<String>,
    },
}

fn emit(out: &Option<String>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {path}")),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Some(k) = std::env::var("SYMPROD_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

fn failure(e: &CliError) -> ExitCode {
    eprintln!("symprod: {e}");
    ExitCode::from(2)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Report { n, g, format, checks, override_guard, out } => {
            let doc = match report_document(n, g, override_guard, checks) {
                Ok(d) => d,
                Err(e) => return Ok(failure(&e)),
            };
            let body = match format {
                Format::Text => report_text(&doc),
                Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
                Format::Csv => format!("{CSV_HEADER}\n{}\n", csv_row(&doc)),
            };
            emit(&out, &body)?;
            let failed = doc.checks.map(|c| !c.summary.all_passed()).unwrap_or(false);
            Ok(ExitCode::from(u8::from(failed)))
        }
        Command::Verify { max_n, max_g, min_g, format, only, mutate_ideal, override_guard, out } => {
            let doc = match verify_document(max_n, min_g, max_g, override_guard, mutate_ideal.map(Into::into), only) {
                Ok(d) => d,
                Err(e) => return Ok(failure(&e)),
            };
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
                Format::Text => verify_text(&doc),
                Format::Csv => {
                    let mut s = String::from("check_id,name,n,g,status\n");
                    for r in &doc.results {
                        let status = serde_json::to_value(r.status)?;
                        s += &format!("{},{},{},{},{}\n", r.check_id, r.name, r.n, r.g, status.as_str().unwrap_or(""));
                    }
                    s
                }
            };
            emit(&out, &body)?;
            Ok(ExitCode::from(u8::from(!doc.summary.all_passed())))
        }
        Command::Grid { max_n, max_g, min_g, format, override_guard, out } => {
            let docs = match grid_documents(max_n, min_g, max_g, override_guard) {
                Ok(d) => d,
                Err(e) => return Ok(failure(&e)),
            };
            let mut body = String::new();
            match format {
                Format::Csv => {
                    body += CSV_HEADER;
                    body.push('\n');
                    for d in &docs {
                        body += &csv_row(d);
                        body.push('\n');
                    }
                }
                Format::Json => {
                    for d in &docs {
                        body += &serde_json::to_string(d)?;
                        body.push('\n');
                    }
                }
                Format::Text => {
                    for d in &docs {
                        body += &report_text(d);
                        body.push('\n');
                    }
                }
            }
            emit(&out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("symprod: {e:#}");
            ExitCode::from(2)
        }
    }
}
