use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polycycle::experiment::{aggregate_views, format_views, run_experiment, write_csv, ExperimentSpec};
use polycycle::ga::{run_ga, GaConfig, Rates, Version};
use polycycle::instance::{format_instance, generate_instance, parse_instance, GenSpec, PolygonStyle, DEFAULT_BOX};
use polycycle::oracle::{solve_exhaustive, OracleError, DEFAULT_MAX_N};
use polycycle::render::render_svg;
use polycycle::solution::{format_solution, parse_solution, Solution};

#[derive(Parser)]
#[command(name = "polycycle", version, about = "Embed a crossing-free cycle on points inside a simple polygon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Generate(GenerateArgs),
    /// Run the genetic algorithm on an instance.
    Solve(SolveArgs),
    /// Solve a small instance exactly by enumeration.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run the evaluation grid and print aggregate tables.
    Experiment(ExperimentArgs),
    /// Draw an instance and a solution as SVG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    sides: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    points: u64,
    #[arg(long)]
    seed: u64,
    /// Half-width of the coordinate box.
    #[arg(long = "box", default_value_t = DEFAULT_BOX, value_parser = clap::value_parser!(i64).range(10..=1_000_000))]
    half_width: i64,
    #[arg(long, default_value = "untangled")]
    style: PolygonStyle,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_version)]
    version: Version,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    generations: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long = "pop-mult", default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pop_mult: u64,
    /// Operator probabilities CX,SWAP,UNCROSS; defaults depend on the version.
    #[arg(long, value_parser = parse_rates)]
    rates: Option<Rates>,
    /// Score children on all cores.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Per-generation trace as CSV.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,15,20,25")]
    sides: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30")]
    points: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    polygons: usize,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2", value_parser = parse_version)]
    versions: Vec<Version>,
    #[arg(long, default_value_t = 1000)]
    generations: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    csv: PathBuf,
    /// Write 0 for wall_ms so identical seeds give identical files.
    #[arg(long)]
    no_timing: bool,
}

fn parse_version(s: &str) -> Result<Version, String> {
    s.parse()
}

fn parse_rates(s: &str) -> Result<Rates, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("'{p}' is not a number")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [cx, swap, uncross] => Ok(Rates::new(cx, swap, uncross)),
        _ => Err("expected three comma-separated rates CX,SWAP,UNCROSS".into()),
    }
}

/// Failure classes mapped onto the process exit code.
enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<polycycle::Instance, Failure> {
    let text = read_text(path)?;
    parse_instance(&text)
        .map(|i| i.with_name(path.display().to_string()))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let mut spec = GenSpec::new(args.sides as usize, args.points as usize, args.seed).with_box(args.half_width);
    spec.style = args.style;
    let inst = generate_instance(&spec).map_err(|e| Failure::Internal(e.to_string()))?;
    write_text(&args.out, &format_instance(&inst))?;
    println!("{}", args.out.display());
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let mut config = GaConfig::for_version(args.version, args.seed)
        .with_generations(args.generations)
        .with_restarts(args.restarts as usize);
    config.population_multiplier = args.pop_mult as usize;
    if let Some(rates) = args.rates {
        config.rates = rates;
    }
    config.parallel_fitness = args.parallel;
    config.record_log = args.log.is_some();
    config.check().map_err(|e| Failure::Usage(e.to_string()))?;

    let result = run_ga(&inst, &config).map_err(|e| Failure::Internal(e.to_string()))?;
    write_text(&args.out, &format_solution(&Solution::from(&result)))?;
    if let Some(svg) = &args.svg {
        write_text(svg, &render_svg(&inst, &result.best))?;
    }
    if let (Some(path), Some(log)) = (&args.log, &result.generation_log) {
        let mut text = String::from("restart,generation,best_f,mean_f\n");
        for g in log {
            text.push_str(&format!("{},{},{},{:.4}\n", g.restart, g.generation, g.best_f, g.mean_f));
        }
        write_text(path, &text)?;
    }
    println!(
        "best_f={} c1={} c2={} generations={} restarts={} wall_ms={}",
        result.best_fitness.f(),
        result.best_fitness.c1,
        result.best_fitness.c2,
        result.generations_used,
        result.restarts_used,
        result.wall_time.as_millis()
    );
    Ok(())
}

fn cmd_oracle(path: &Path) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let r = solve_exhaustive(&inst, DEFAULT_MAX_N).map_err(|e| match e {
        OracleError::TooLarge { .. } | OracleError::TooSmall(_) => Failure::Input(e.to_string()),
        OracleError::Ga(e) => Failure::Internal(e.to_string()),
    })?;
    println!("min_f={}, examined={}", r.min_f, r.orders_examined);
    println!("c1={} c2={}", r.breakdown.c1, r.breakdown.c2);
    println!("witness: {}", r.witness);
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), Failure> {
    let spec = ExperimentSpec {
        sides_list: args.sides,
        points_list: args.points,
        polygons_per_config: args.polygons,
        runs_per_instance: args.runs,
        versions: args.versions,
        generation_cap: args.generations,
        record_timing: !args.no_timing,
        ..ExperimentSpec::new(args.seed)
    };
    spec.check().map_err(|e| Failure::Usage(e.to_string()))?;
    let rows = run_experiment(&spec).map_err(|e| Failure::Internal(e.to_string()))?;
    let file = fs::File::create(&args.csv).map_err(|e| Failure::Internal(format!("{}: {e}", args.csv.display())))?;
    write_csv(&rows, io::BufWriter::new(file)).map_err(|e| Failure::Internal(e.to_string()))?;
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    let mut out = io::stdout().lock();
    let _ = write!(out, "{}", format_views(&aggregate_views(&spec, &rows), &spec.versions));
    let _ = writeln!(out, "rows={} failed={} csv={}", rows.len(), failed, args.csv.display());
    Ok(())
}

fn cmd_render(instance: &Path, solution: &Path, svg: &Path) -> Result<(), Failure> {
    let inst = load_instance(instance)?;
    let sol = parse_solution(&read_text(solution)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", solution.display())))?;
    sol.check_against(&inst).map_err(|e| Failure::Input(e.to_string()))?;
    write_text(svg, &render_svg(&inst, &sol.order))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle { instance } => cmd_oracle(&instance),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Render { instance, solution, svg } => cmd_render(&instance, &solution, &svg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
