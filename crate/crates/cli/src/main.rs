use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use convexity_core::verifier::properties::{
    verify_difference_identities, verify_jensen_power, verify_prop_4_3,
};
use convexity_core::verifier::scenarios::{
    probe_even, verify_lemma_4_4, verify_lemma_4_6, verify_section_3_1, verify_section_3_2,
    verify_theorem_2_3, BATCH_ORDERS, DEFAULT_MAX_ORDER, EVEN_CANDIDATES, MEASURE_BATCH_ORDERS,
};
use convexity_core::verifier::{run_definition_file, Report};
use convexity_core::{Error, Result};

mod render;

use render::{Format, Renderer};

/// Largest order the measure chain runs without --allow-large.
const MEASURE_MAX_ORDER: u32 = 7;
const DEFAULT_SEED: u64 = 42;

/// Exact verifier for odd-order convexity counterexamples.
#[derive(Parser, Debug)]
#[command(name = "convexity", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,

    /// Emit the full evaluation table for scenarios that have one.
    #[arg(long, global = true)]
    trace: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a canned scenario.
    #[command(subcommand)]
    Verify(Verify),
    /// Probe the even-order candidates.
    #[command(subcommand)]
    Probe(Probe),
    /// Run a scenario definition file.
    Run { file: PathBuf },
}

#[derive(Args, Debug, Clone, Copy)]
struct Order {
    /// Odd order; omit to run the default batch.
    #[arg(long)]
    n: Option<u32>,
    /// Permit orders above the default limit (cost grows like 2^(n+1)).
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct Randomized {
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Δ_{h1…h_{n+1}} f(0) = -1 for the odd-order counterexample.
    Theorem23(Order),
    /// The order-three value table.
    Section31,
    /// The order-two observations.
    Section32,
    /// Structure of the signed measures μ and μ_i.
    Lemma44(Order),
    /// The measure route to the same difference.
    Lemma46(Order),
    /// Round trips between the difference and closure operators.
    Prop43(Randomized),
    /// Recursive, closed and backward difference forms agree.
    DifferenceIdentities(Randomized),
    /// (a(x))₊ⁿ has nonnegative (n+1)-th differences on random lattice samples.
    JensenPower {
        /// Odd order; omit to run n = 1 and n = 3.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 200)]
        samples: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Every scenario with its default parameters.
    All,
}

#[derive(Subcommand, Debug)]
enum Probe {
    /// Candidate counterexamples of order two.
    Even {
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Candidate id; omit to run all of them.
        #[arg(long)]
        case: Option<String>,
    },
}

fn orders(order: Order, batch: &[u32], limit: u32) -> Result<Vec<u32>> {
    match order.n {
        None => Ok(batch.to_vec()),
        Some(n) if n > limit && !order.allow_large => Err(Error::UnsupportedOrder(
            n,
            format!("orders above {limit} need --allow-large"),
        )),
        Some(n) => {
            if n > limit {
                eprintln!("warning: order {n} evaluates 2^{} subset sums", n + 1);
            }
            Ok(vec![n])
        }
    }
}

fn each(ns: Vec<u32>, scenario: fn(u32) -> Result<Report>) -> Result<Vec<Report>> {
    ns.into_iter().map(scenario).collect()
}

fn verify(command: Verify) -> Result<Vec<Report>> {
    match command {
        Verify::Theorem23(o) => each(
            orders(o, &BATCH_ORDERS, DEFAULT_MAX_ORDER)?,
            verify_theorem_2_3,
        ),
        Verify::Section31 => Ok(vec![verify_section_3_1()?]),
        Verify::Section32 => Ok(vec![verify_section_3_2()?]),
        Verify::Lemma44(o) => each(
            orders(o, &MEASURE_BATCH_ORDERS, MEASURE_MAX_ORDER)?,
            verify_lemma_4_4,
        ),
        Verify::Lemma46(o) => each(
            orders(o, &MEASURE_BATCH_ORDERS, MEASURE_MAX_ORDER)?,
            verify_lemma_4_6,
        ),
        Verify::Prop43(r) => Ok(vec![verify_prop_4_3(r.trials, r.seed)?]),
        Verify::DifferenceIdentities(r) => {
            Ok(vec![verify_difference_identities(r.trials, r.seed)?])
        }
        Verify::JensenPower { n, samples, seed } => n
            .map_or_else(|| vec![1, 3], |n| vec![n])
            .into_iter()
            .map(|n| verify_jensen_power(n, samples, seed))
            .collect(),
        Verify::All => {
            let batch = Order {
                n: None,
                allow_large: false,
            };
            let randomized = Randomized {
                trials: 100,
                seed: DEFAULT_SEED,
            };
            let mut reports = Vec::new();
            for command in [
                Verify::Theorem23(batch),
                Verify::Section31,
                Verify::Section32,
                Verify::Lemma44(batch),
                Verify::Lemma46(batch),
                Verify::Prop43(randomized),
                Verify::DifferenceIdentities(randomized),
                Verify::JensenPower {
                    n: None,
                    samples: 200,
                    seed: DEFAULT_SEED,
                },
            ] {
                reports.extend(verify(command)?);
            }
            Ok(reports)
        }
    }
}

fn execute(command: Command) -> Result<Vec<Report>> {
    match command {
        Command::Verify(v) => verify(v),
        Command::Probe(Probe::Even { n, case }) => match case {
            Some(case) => Ok(vec![probe_even(n, &case)?]),
            None => EVEN_CANDIDATES
                .iter()
                .map(|case| probe_even(n, case))
                .collect(),
        },
        Command::Run { file } => Ok(vec![run_definition_file(&file)?]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports = match execute(cli.command) {
        Ok(reports) => reports,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let mut renderer = Renderer::new(io::stdout().lock(), cli.format, cli.trace);
    let written = reports
        .iter()
        .try_for_each(|r| renderer.report(r))
        .and_then(|()| renderer.finish(&reports));
    if let Err(err) = written {
        if err.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(Report::all_pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn order_limits() {
        let o = |n, allow_large| Order { n, allow_large };
        assert_eq!(
            orders(o(None, false), &BATCH_ORDERS, 11).unwrap(),
            BATCH_ORDERS
        );
        assert_eq!(orders(o(Some(5), false), &BATCH_ORDERS, 11).unwrap(), [5]);
        assert!(orders(o(Some(13), false), &BATCH_ORDERS, 11).is_err());
        assert_eq!(orders(o(Some(13), true), &BATCH_ORDERS, 11).unwrap(), [13]);
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "convexity",
            "verify",
            "section31",
            "--trace",
            "--format",
            "tsv",
        ])
        .unwrap();
        assert!(cli.trace);
        assert_eq!(cli.format, Format::Tsv);
    }
}
