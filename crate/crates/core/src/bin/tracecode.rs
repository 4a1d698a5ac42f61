use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tracecode::report::{self, OutputFormat, Report, RunConfig};
use tracecode::Mode;

#[derive(Parser)]
#[command(
    name = "tracecode",
    version,
    about = "Trace codes over F_{p^m}[u,v]/(u^2,v^2) and their Gray images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lee weight distribution of C(m,p).
    Spectrum(Common),
    /// Check every applicable claim; exits nonzero if any fails.
    Verify(Common),
    /// Griesmer and sphere-packing checks.
    Bounds(Common),
    /// Dual distance of the Gray image and of the ring code.
    Dual(Common),
    /// Minimality of the Gray codewords.
    Minimal(Common),
    /// Secret-sharing access structure of the Gray image.
    Sss(Common),
    /// Quadratic Gauss sum and the Q/N sums, closed form against numeric.
    Gauss(Common),
    /// Generator matrix of the Gray image as digit rows.
    Genmatrix(Common),
}

#[derive(Args)]
struct Common {
    /// Odd prime.
    #[arg(short, long)]
    p: u32,
    /// Extension degree.
    #[arg(short, long)]
    m: usize,
    /// Defining polynomial as coefficients c0,c1,...,cm (monic, irreducible).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// exhaustive or by_class; chosen from the budget when omitted.
    #[arg(long)]
    mode: Option<Mode>,
    /// Generic codewords sampled per class in by_class mode.
    #[arg(long, default_value_t = tracecode::code::DEFAULT_SAMPLES)]
    samples: usize,
    /// Worker threads for enumeration.
    #[arg(long, env = "TRACECODE_WORKERS", default_value_t = default_workers())]
    workers: usize,
    /// Work budget in coordinate evaluations.
    #[arg(long, default_value_t = tracecode::code::DEFAULT_BUDGET)]
    budget: u128,
    /// json, csv or table.
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    no_timing: bool,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            mode: self.mode,
            samples: self.samples,
            workers: self.workers,
            budget: self.budget,
            seed: self.seed,
            timing: !self.no_timing,
        }
    }

    fn emit(&self, text: &str) -> std::io::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

fn run(cli: Cli) -> tracecode::Result<bool> {
    let (common, text, ok) = match &cli.command {
        Command::Spectrum(c) => (c, report::spectrum(&c.config())?.render(c.format), true),
        Command::Verify(c) => {
            let r = report::verify(&c.config())?;
            (c, r.render(c.format), r.all_passed())
        }
        Command::Bounds(c) => (c, report::bounds(&c.config())?.render(c.format), true),
        Command::Dual(c) => (c, report::dual(&c.config())?.render(c.format), true),
        Command::Minimal(c) => (c, report::minimal(&c.config())?.render(c.format), true),
        Command::Sss(c) => (c, report::sss(&c.config())?.render(c.format), true),
        Command::Gauss(c) => {
            let r = report::gauss(&c.config())?;
            let ok = r.matches();
            (c, r.render(c.format), ok)
        }
        Command::Genmatrix(c) => (c, report::genmatrix(&c.config())?, true),
    };
    common.emit(&text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
