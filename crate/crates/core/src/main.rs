use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use posdom::config::ProblemConfig;
use posdom::domain::{ApproxPositiveDomain, OutputModel};
use posdom::experiments::{self, ExperimentConfig, ExperimentKind, ExperimentResult};
use posdom::model::benchmark_functions;
use posdom::{carve, eval, pipeline, tree, Error};

/// Carve, evaluate, and refine approximate positive domains.
#[derive(Parser)]
#[command(name = "posdom", version, about)]
struct Cli {
    /// Worker pool size; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Problem config (JSON).
    #[arg(long)]
    config: PathBuf,

    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's target margin.
    #[arg(long)]
    margin: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the labeled grid, train the tree, and write the approximate
    /// positive domain.
    Carve {
        #[command(flatten)]
        common: ConfigArgs,
        /// Output path for the domain JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a carved domain on a seeded uniform test set.
    Eval {
        #[command(flatten)]
        common: ConfigArgs,
        /// Domain JSON produced by `carve` or `refine`.
        apd: PathBuf,
        /// Emit the report as JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Drop boxes that fail the inner-grid containment test.
    Refine {
        #[command(flatten)]
        common: ConfigArgs,
        /// Domain JSON produced by `carve`.
        apd: PathBuf,
        /// Output path for the refined domain JSON.
        #[arg(long)]
        out: PathBuf,
        /// Inner grid granularity; defaults to a quarter of the domain's.
        #[arg(long)]
        inner_delta: Option<f64>,
    },
    /// Run a sensitivity experiment over the benchmark functions and write
    /// per-cell and aggregate CSVs.
    Sweep {
        #[command(flatten)]
        common: ConfigArgs,
        /// Which experiment to run.
        #[arg(long)]
        experiment: String,
        /// Output directory for the CSVs.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("posdom: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("posdom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(args: &ConfigArgs) -> Result<ProblemConfig, Error> {
    let mut config = ProblemConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(margin) = args.margin {
        config.margin = Some(margin);
        config.validate()?;
    }
    Ok(config)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Carve { common, out } => cmd_carve(&common, &out),
        Command::Eval { common, apd, json } => cmd_eval(&common, &apd, json),
        Command::Refine {
            common,
            apd,
            out,
            inner_delta,
        } => cmd_refine(&common, &apd, &out, inner_delta),
        Command::Sweep {
            common,
            experiment,
            out,
        } => cmd_sweep(&common, experiment.parse()?, &out),
    }
}

fn cmd_carve(args: &ConfigArgs, out: &Path) -> Result<(), Error> {
    let config = load_config(args)?;
    let target = config.effective_target()?;
    let model = config.build_model()?;
    let outcome = pipeline::carve_problem(
        &config.variables,
        &target,
        model.as_ref(),
        config.granularity,
        config.grid_cap(),
    )?;
    debug_assert_eq!(
        tree::training_accuracy(&outcome.tree, &outcome.dataset),
        1.0
    );
    write_json(out, &outcome.apd)?;
    println!(
        "carved {} boxes from {} grid points ({} inside) at δ = {}",
        outcome.apd.num_boxes(),
        outcome.dataset.len(),
        outcome.dataset.inside_count(),
        config.granularity,
    );
    print!("{}", carve::box_report(&outcome.apd));
    Ok(())
}

fn cmd_eval(args: &ConfigArgs, apd_path: &Path, json: bool) -> Result<(), Error> {
    let config = load_config(args)?;
    let apd = read_apd(apd_path)?;
    let target = config.effective_target()?;
    let model = config.build_model()?;
    let test = eval::generate_test_set(
        &config.variables,
        config.test_size,
        model.as_ref(),
        config.seed,
    )?;
    let report = eval::evaluate(&apd, &test, &target);
    if json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        println!("{report}");
    }
    Ok(())
}

fn cmd_refine(
    args: &ConfigArgs,
    apd_path: &Path,
    out: &Path,
    inner_delta: Option<f64>,
) -> Result<(), Error> {
    let config = load_config(args)?;
    let apd = read_apd(apd_path)?;
    let inner_delta = inner_delta.unwrap_or(apd.granularity / 4.0);
    if inner_delta.is_nan() || inner_delta <= 0.0 {
        return Err(Error::Validation(format!(
            "inner granularity must be positive, got {inner_delta}"
        )));
    }
    let target = config.effective_target()?;
    let model = config.build_model()?;
    let refined = carve::refine(&apd, model.as_ref(), &target, inner_delta)?;
    write_json(out, &refined)?;
    println!(
        "kept {} of {} boxes at inner δ = {inner_delta}",
        refined.num_boxes(),
        apd.num_boxes(),
    );
    Ok(())
}

fn cmd_sweep(args: &ConfigArgs, kind: ExperimentKind, out_dir: &Path) -> Result<(), Error> {
    let config = load_config(args)?;
    if config.variables.len() != 2 {
        return Err(Error::Validation(
            "sweeps run the two-variable benchmark functions; the config must declare exactly \
             two variables"
                .into(),
        ));
    }
    let exp_config = ExperimentConfig {
        variables: config.variables.clone(),
        target: config.effective_target()?,
        deltas: config.deltas(),
        sigmas: config.sigmas(),
        folds: config.folds(),
        test_size: config.test_size,
        master_seed: config.seed,
        grid_cap: config.grid_cap(),
    };
    let owned = benchmark_functions();
    let functions: Vec<(String, &dyn OutputModel)> = owned
        .iter()
        .map(|(id, expr)| (id.clone(), expr as &dyn OutputModel))
        .collect();
    let results = match kind {
        ExperimentKind::Granularity => experiments::run_granularity_sweep(&functions, &exp_config)?,
        ExperimentKind::NoisyOutput => experiments::run_noisy_output(&functions, &exp_config)?,
        ExperimentKind::NoisyInput => experiments::run_noisy_inputs(&functions, &exp_config)?,
    };

    fs::create_dir_all(out_dir)?;
    let stem = kind.id().replace('-', "_");
    let cells_path = out_dir.join(format!("{stem}_cells.csv"));
    let mut cells = fs::File::create(&cells_path)?;
    experiments::write_cells_csv(&results, &mut cells)?;
    let aggregate_path = out_dir.join(format!("{stem}_aggregate.csv"));
    let mut aggregate = fs::File::create(&aggregate_path)?;
    experiments::write_aggregate_csv(&results, &mut aggregate)?;
    println!(
        "wrote {} and {}",
        cells_path.display(),
        aggregate_path.display()
    );

    if kind == ExperimentKind::Granularity {
        if let Some(threshold) = config.tpr_threshold {
            let delta = select_from_results(&results, &exp_config, threshold)?;
            println!("selected granularity: {delta}");
        }
    }
    Ok(())
}

/// Granularity selection over already-computed sweep results: the largest δ
/// whose mean TPR over every benchmark function reaches the threshold.
fn select_from_results(
    results: &[ExperimentResult],
    config: &ExperimentConfig,
    threshold: f64,
) -> Result<f64, Error> {
    let mut deltas = config.deltas.clone();
    deltas.sort_by(|a, b| b.partial_cmp(a).expect("validated finite"));
    let mut details = String::new();
    for &delta in &deltas {
        let cells: Vec<&ExperimentResult> = results.iter().filter(|c| c.delta == delta).collect();
        let means: Vec<Option<f64>> = cells.iter().map(|c| c.mean_tpr).collect();
        let qualified =
            !means.is_empty() && means.iter().all(|m| m.is_some_and(|v| v >= threshold));
        if qualified {
            return Ok(delta);
        }
        if !details.is_empty() {
            details.push_str("; ");
        }
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| match c.mean_tpr {
                Some(v) => format!("{}={v}", c.function),
                None => format!("{}=undefined", c.function),
            })
            .collect();
        details.push_str(&format!("δ={delta}: {}", rendered.join(", ")));
    }
    Err(Error::NoQualifyingGranularity { threshold, details })
}

fn read_apd(path: &Path) -> Result<ApproxPositiveDomain, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read domain {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}
