use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use jordanc_core::error::Result;
use jordanc_core::report::Report;
use jordanc_core::suites;
use jordanc_core::Session;

/// Numerical verification harness for euclidean Jordan algebras embedded in
/// complex ⋆-algebras: builds canonical composites, classifies them, and
/// checks the compact/dagger structure of the resulting category.
#[derive(Parser)]
#[command(name = "jordanc", version, disable_help_subcommand = true)]
struct Cli {
    /// Seed for every randomized check (reports are deterministic given it).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Membership tolerance for span and closure residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Machine format: canonical JSON, a markdown table, or both.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Report file; with `--format both` a sibling file carries the other
    /// extension. Without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Build the canonical composite of two objects and report dimension,
    /// classification, and closure diagnostics.
    Product {
        /// Left factor, e.g. R3, C2@univ, Q2@std, V4.
        #[arg(long)]
        left: String,
        /// Right factor.
        #[arg(long)]
        right: String,
    },
    /// List the built-in objects with their structural invariants.
    Catalog,
    /// Run a named verification suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Composite classification table for degrees up to --max.
    Table {
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
    /// Cup/counit structure: invariance, positivity, snakes, membership.
    Compact,
    /// Dagger-compatibility across the standard and universal object sets.
    Dagger,
    /// Irreversible spin factor leak (with a reversible control factor).
    Nogo {
        /// Spin factor to test, default V4.
        #[arg(long)]
        factor: Option<String>,
    },
    /// Composite dimension versus tensor-product dimension.
    Tomography,
    /// Rank supermultiplicativity of composites.
    Distinguishability,
    /// Mixed composite states with pure recovered marginals.
    Marginals,
    /// Iterated products agree in both association orders.
    Associativity,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let start = Instant::now();
    let mut session = Session::new(cli.seed, cli.tol);
    let mut report = match &cli.command {
        Command::Product { left, right } => suites::run_product(&mut session, left, right)?,
        Command::Catalog => suites::run_catalog(&mut session)?,
        Command::Verify { suite } => match suite {
            Suite::Table { max } => suites::run_table(&mut session, *max)?,
            Suite::Compact => suites::run_compact(&mut session)?,
            Suite::Dagger => suites::run_dagger(&mut session)?,
            Suite::Nogo { factor } => suites::run_nogo(&mut session, factor.as_deref())?,
            Suite::Tomography => suites::run_tomography(&mut session)?,
            Suite::Distinguishability => suites::run_distinguishability(&mut session)?,
            Suite::Marginals => suites::run_marginals(&mut session)?,
            Suite::Associativity => suites::run_associativity(&mut session)?,
        },
    };
    report.wall_time = start.elapsed().as_secs_f64();
    emit(&cli, &report)?;

    let fails = report.fail_count();
    let infos = report.entries.iter().filter(|e| e.status == jordanc_core::Status::Info).count();
    eprintln!(
        "suite {}: {} entries, {} failed, {} informational ({:.1} s)",
        report.suite,
        report.entries.len(),
        fails,
        infos,
        report.wall_time
    );
    Ok(if fails == 0 { 0 } else { 1 })
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match (&cli.out, cli.format) {
        (None, Format::Json) => println!("{}", report.canonical_json()),
        (None, Format::Md) => println!("{}", report.to_markdown()),
        (None, Format::Both) => {
            println!("{}", report.canonical_json());
            println!("{}", report.to_markdown());
        }
        (Some(path), fmt) => {
            if fmt == Format::Json || fmt == Format::Both {
                std::fs::write(with_ext(path, "json", fmt), report.canonical_json())?;
            }
            if fmt == Format::Md || fmt == Format::Both {
                std::fs::write(with_ext(path, "md", fmt), report.to_markdown())?;
            }
        }
    }
    Ok(())
}

/// For single-format runs the path is taken as given; `--format both`
/// derives one file per format from the stem.
fn with_ext(path: &Path, ext: &str, fmt: Format) -> PathBuf {
    match fmt {
        Format::Both => path.with_extension(ext),
        _ => path.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn global_flags_reach_nested_subcommands() {
        let cli = Cli::parse_from(["jordanc", "verify", "table", "--max", "2", "--seed", "7"]);
        assert_eq!(cli.seed, 7);
        let Command::Verify { suite: Suite::Table { max } } = cli.command else {
            panic!("parsed into the wrong subcommand");
        };
        assert_eq!(max, 2);
    }
}
