use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use holcensus::counts::DegreeReportRow;
use holcensus::report::{
    class_listing, compute_or_load, diff, load_result, parse_degrees, to_csv, to_json, to_markdown, write_actions,
    DegreeResult, ExpectedTable, Format, RunConfig,
};
use holcensus::transitive::{SearchBudget, DEFAULT_HOL_BUDGET, DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET_SECS};
use holcensus::{degree2pq, groups_of_order, Error};

#[derive(Parser)]
#[command(name = "holcensus", version, about = "Hopf-Galois structures and skew bracoids of small degree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CacheArgs {
    /// Directory holding one JSON result per degree
    #[arg(long, env = "HOLCENSUS_CACHE", default_value = ".holcensus-cache")]
    cache_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Compute census rows and print them as a table
    Enumerate {
        /// Degrees, e.g. `2-12` or `4,6,8-10`
        #[arg(long)]
        degrees: String,
        #[arg(long, default_value = "md")]
        format: Format,
        #[command(flatten)]
        cache: CacheArgs,
        /// Search-node budget per type
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Wall-clock budget per type, in seconds
        #[arg(long, default_value_t = DEFAULT_TIME_BUDGET_SECS)]
        time_budget: u64,
        /// Largest holomorph order to attempt
        #[arg(long, default_value_t = DEFAULT_HOL_BUDGET)]
        hol_budget: usize,
        #[arg(long)]
        skip_bc: bool,
        #[arg(long)]
        skip_ac: bool,
        /// Also print every equivalence class with its members
        #[arg(long)]
        list_classes: bool,
        /// Write bracoid and brace JSON files for every class
        #[arg(long)]
        emit_actions: bool,
    },
    /// Compare cached rows with the published census
    Diff {
        #[arg(long)]
        degrees: String,
        #[command(flatten)]
        cache: CacheArgs,
        /// Print the cell-by-cell report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Export bracoid, brace and Yang-Baxter data for a cached class
    Actions {
        #[arg(long)]
        degree: usize,
        /// Class label as shown by `enumerate --list-classes`; all classes if omitted
        #[arg(long)]
        class: Option<String>,
        #[command(flatten)]
        cache: CacheArgs,
        /// Output directory (default: <cache-dir>/actions/degree-NNN)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the explicit subgroups for degree 2pq
    #[command(name = "verify-2pq")]
    Verify2pq {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Inspect the group catalog
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List the groups of one order
    List {
        #[arg(long)]
        order: usize,
    },
}

fn actions_dir(cache: &std::path::Path, degree: usize) -> PathBuf {
    cache.join("actions").join(format!("degree-{degree:03}"))
}

fn enumerate(cfg: &RunConfig) -> Result<(), Error> {
    cfg.validate()?;
    let opts = cfg.count_options();
    let mut results: Vec<DegreeResult> = Vec::new();
    for &d in &cfg.degrees {
        let (r, cached) = compute_or_load(&cfg.cache_dir, d, &opts)?;
        eprintln!("degree {d}: {}", if cached { "cached" } else { "computed" });
        for n in &r.notes {
            eprintln!("degree {d}: {n}");
        }
        results.push(r);
    }
    let rows: Vec<DegreeReportRow> = results.iter().map(|r| r.row.clone()).collect();
    let table = match cfg.format {
        Format::Json => to_json(&results)?,
        Format::Csv => to_csv(&rows),
        Format::Md => to_markdown(&rows),
    };
    print!("{table}");
    if cfg.list_classes {
        for r in &results {
            print!("\n{}", class_listing(r));
        }
    }
    if cfg.emit_actions {
        for r in &results {
            let written = write_actions(r, None, &actions_dir(&cfg.cache_dir, r.degree))?;
            eprintln!("degree {}: wrote {} action files", r.degree, written.len());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Enumerate {
            degrees,
            format,
            cache,
            node_budget,
            time_budget,
            hol_budget,
            skip_bc,
            skip_ac,
            list_classes,
            emit_actions,
        } => {
            let cfg = RunConfig {
                degrees: parse_degrees(&degrees)?,
                budget: SearchBudget {
                    hol_order: hol_budget,
                    nodes: node_budget,
                    seconds: time_budget,
                },
                format,
                cache_dir: cache.cache_dir,
                skip_bc,
                skip_ac,
                list_classes,
                emit_actions,
            };
            enumerate(&cfg)?;
            Ok(true)
        }
        Command::Diff { degrees, cache, json } => {
            let report = diff(&cache.cache_dir, &parse_degrees(&degrees)?, ExpectedTable::builtin())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.render());
            }
            Ok(report.is_clean())
        }
        Command::Actions {
            degree,
            class,
            cache,
            out,
        } => {
            let result = load_result(&cache.cache_dir, degree)?.ok_or_else(|| {
                Error::Lookup(format!(
                    "no cached result for degree {degree}; run `holcensus enumerate --degrees {degree}` first"
                ))
            })?;
            let out = out.unwrap_or_else(|| actions_dir(&cache.cache_dir, degree));
            for path in write_actions(&result, class.as_deref(), &out)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Verify2pq { p, q } => {
            let report = degree2pq::verify(p, q)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Catalog {
            command: CatalogCommand::List { order },
        } => {
            for g in groups_of_order(order)? {
                let inv = g.invariants();
                println!(
                    "{}\t{}\t|Aut| = {}\tcenter {}\tderived {}",
                    g.name(),
                    g.structure(),
                    g.automorphism_group().order(),
                    inv.center_order,
                    inv.derived_order
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
