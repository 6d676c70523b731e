use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use flatstrata_core::acceptance::{self, CRITERIA};
use flatstrata_core::config::BUDGET_ENV;
use flatstrata_core::functionals::{evaluate, Analysis};
use flatstrata_core::hessian::complex_hessian_fd;
use flatstrata_core::report::{self, emit, Report};
use flatstrata_core::saddle::enumerate_saddles;
use flatstrata_core::strata::{cohdim_bounds, stratification_table};
use flatstrata_core::sweep::{family_sweep, Family};
use flatstrata_core::{
    Builtin, Error, FunctionalKind, OutputFormat, PeriodChart, RunConfig, Surface, SurfaceDescription,
};

#[derive(Parser)]
#[command(name = "flatstrata", version, about = "Translation surfaces, period charts and exhaustion functionals")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (json or csv); each command has its own default.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Saddle connection search node budget.
    #[arg(long, global = true, env = BUDGET_ENV)]
    budget: Option<usize>,
    #[arg(long, global = true)]
    eps_geom: Option<f64>,
    #[arg(long, global = true)]
    eps_angle: Option<f64>,
    #[arg(long, global = true)]
    eps_rank: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a surface description and report its stratum.
    Validate { surface: String },
    /// Genus, stratum, area and systole.
    Info { surface: String },
    /// Relative homology basis and period vector.
    Periods {
        surface: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Saddle connections up to a length.
    Saddles {
        surface: String,
        #[arg(long)]
        max_length: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate one functional.
    Functional {
        surface: String,
        #[arg(long)]
        name: String,
        /// Surjection as one-based images, e.g. `1,1,2`; `;` separates chain steps.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Finite-difference complex Hessian and its signature.
    Hessian {
        surface: String,
        #[arg(long)]
        functional: String,
        #[arg(long)]
        sigma: Option<String>,
        /// Absolute step in period coordinates.
        #[arg(long)]
        step: Option<f64>,
        /// Relative eigenvalue tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate a functional along a builtin family.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        functional: String,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cohomological dimension bounds.
    Bounds {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        marked: u32,
    },
    /// Strata of the stratification with their depths.
    Strata {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        marked: usize,
    },
    /// Write a builtin surface as a description file.
    Gen {
        /// Builtin name with parameters, e.g. `slit_tori(0.3)`.
        #[arg(long)]
        family: String,
    },
    /// Run the built-in acceptance checks.
    Verify {
        #[arg(long)]
        criterion: Option<u32>,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::parse(s).map_err(|e| e.to_string())
}

enum Failure {
    Core(Error),
    Io(String),
    Verify(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "Io: {m}"),
            Failure::Verify(n) => write!(f, "VerifyFailed: {n} criteria failed"),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_validation() => 2,
            Failure::Core(e) if e.is_budget() => 3,
            _ => 1,
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn run_config(g: &Global) -> Outcome<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(b) = g.budget {
        cfg.budget = b;
    }
    if let Some(x) = g.eps_geom {
        cfg.eps_geom = x;
    }
    if let Some(x) = g.eps_angle {
        cfg.eps_angle = x;
    }
    if let Some(x) = g.eps_rank {
        cfg.eps_rank = x;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if g.format.is_some() {
        cfg.format = g.format;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// A path to a description file, or a builtin such as `regular_octagon`.
fn load_surface(arg: &str, cfg: &RunConfig) -> Outcome<Surface> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))?;
        let desc = SurfaceDescription::from_json(&text)?;
        return Ok(Surface::validate_with(&desc, cfg.tolerances())?);
    }
    match Builtin::parse(arg) {
        Ok(b) => Ok(b.build_with(cfg.tolerances())?),
        Err(Error::UnknownFamily(_)) => Err(Failure::Io(format!("{arg}: no such file or builtin surface"))),
        Err(e) => Err(e.into()),
    }
}

fn write_to(text: &str, path: Option<&Path>) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn stratum_label(s: &Surface) -> String {
    let t = s.topology();
    format!("H_{}{}", t.n, report::format_signature(&t.m))
}

fn parse_kind(s: &Surface, name: &str, sigma: Option<&str>) -> Outcome<FunctionalKind> {
    Ok(FunctionalKind::parse(name, sigma, s.n_free(), s.n_marked())?)
}

fn run(cli: Cli) -> Outcome<()> {
    let cfg = run_config(&cli.global)?;
    let out = cli.global.out.as_deref();
    let format_or = |default: OutputFormat| cfg.format.unwrap_or(default);
    // `--csv <path>` selects CSV and a destination in one flag.
    let csv_dest = |csv: &Option<PathBuf>| -> (OutputFormat, Option<PathBuf>) {
        match csv {
            Some(p) => (OutputFormat::Csv, Some(p.clone())),
            None => (format_or(OutputFormat::Csv), out.map(Path::to_path_buf)),
        }
    };

    match cli.command {
        Command::Validate { surface } => {
            let s = load_surface(&surface, &cfg)?;
            let v = json!({
                "valid": true,
                "genus": s.genus(),
                "stratum": stratum_label(&s),
                "dimension": s.topology().period_dimension(),
            });
            write_to(&emit(&Report::Json(v), format_or(OutputFormat::Json))?, out)
        }
        Command::Info { surface } => {
            let s = load_surface(&surface, &cfg)?;
            let a = Analysis::with_budget(&s, cfg.budget, cfg.eps_rank)?;
            let (systole, _) = a.systole()?;
            let t = s.topology();
            let classes: Vec<Value> = s
                .vertex_classes()
                .iter()
                .map(|c| json!({"cone_multiple": c.cone_multiple, "mark": c.mark}))
                .collect();
            let v = json!({
                "genus": t.g,
                "stratum": stratum_label(&s),
                "orders": t.m,
                "n_free": t.n,
                "area": s.area(),
                "systole": systole,
                "dimension": a.dimension(),
                "euler_characteristic": s.euler_characteristic(),
                "polygons": s.polygons().len(),
                "edge_classes": s.n_edge_classes(),
                "vertex_classes": classes,
            });
            write_to(&emit(&Report::Json(v), format_or(OutputFormat::Json))?, out)
        }
        Command::Periods { surface, csv } => {
            let s = load_surface(&surface, &cfg)?;
            let chart = PeriodChart::compute(&s)?;
            let (fmt, dest) = csv_dest(&csv);
            write_to(&emit(&Report::Periods(&chart), fmt)?, dest.as_deref())
        }
        Command::Saddles { surface, max_length, csv } => {
            let s = load_surface(&surface, &cfg)?;
            let list = enumerate_saddles(&s, max_length, cfg.budget)?;
            let (fmt, dest) = csv_dest(&csv);
            write_to(&emit(&Report::Saddles(&list), fmt)?, dest.as_deref())
        }
        Command::Functional { surface, name, sigma } => {
            let s = load_surface(&surface, &cfg)?;
            let kind = parse_kind(&s, &name, sigma.as_deref())?;
            let v = evaluate(&s, &kind, cfg.budget, cfg.eps_rank)?;
            write_to(&emit(&Report::Json(report::to_value(&v)), format_or(OutputFormat::Json))?, out)
        }
        Command::Hessian { surface, functional, sigma, step, tol } => {
            let s = load_surface(&surface, &cfg)?;
            let kind = parse_kind(&s, &functional, sigma.as_deref())?;
            let mut opts = cfg.hessian_options();
            if step.is_some() {
                opts.step = step;
            }
            if let Some(t) = tol {
                opts.tol_rel = t;
            }
            let rep = complex_hessian_fd(&s, &kind, &opts)?;
            write_to(&emit(&Report::Json(report::to_value(&rep)), format_or(OutputFormat::Json))?, out)
        }
        Command::Sweep { family, from, to, steps, functional, sigma, csv } => {
            let fam = Family::parse(&family)?;
            let probe = fam.member(from).build_with(cfg.tolerances())?;
            let kind = parse_kind(&probe, &functional, sigma.as_deref())?;
            let table = family_sweep(fam, from, to, steps, &kind, cfg.budget, cfg.eps_rank)?;
            let (fmt, dest) = csv_dest(&csv);
            write_to(&emit(&Report::Sweep(&table), fmt)?, dest.as_deref())
        }
        Command::Bounds { genus, marked } => {
            let b = cohdim_bounds(genus, marked)?;
            let mut v = report::to_value(&b);
            if let Value::Object(m) = &mut v {
                m.insert("genus".into(), json!(genus));
                m.insert("marked".into(), json!(marked));
            }
            write_to(&emit(&Report::Json(v), format_or(OutputFormat::Json))?, out)
        }
        Command::Strata { genus, marked } => {
            let rows = stratification_table(genus, marked)?;
            write_to(&emit(&Report::Strata(&rows), format_or(OutputFormat::Csv))?, out)
        }
        Command::Gen { family } => {
            let s = Builtin::parse(&family)?.build_with(cfg.tolerances())?;
            let mut text = s.to_description().to_json();
            text.push('\n');
            write_to(&text, out)
        }
        Command::Verify { criterion } => {
            let selected: Vec<_> = match criterion {
                Some(id) if (1..=CRITERIA.len() as u32).contains(&id) => vec![CRITERIA[id as usize - 1]],
                Some(id) => {
                    return Err(Error::ParamOutOfRange(format!(
                        "criterion {id} (expected 1..={})",
                        CRITERIA.len()
                    ))
                    .into())
                }
                None => CRITERIA.to_vec(),
            };
            let mut text = String::new();
            let mut failed = 0;
            for c in selected {
                let o: acceptance::CriterionOutcome = c();
                failed += usize::from(!o.passed);
                text.push_str(&format!("{o}\n"));
            }
            write_to(&text, out)?;
            if failed > 0 {
                Err(Failure::Verify(failed))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
