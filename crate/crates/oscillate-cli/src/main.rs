//! `oscillate`: compute oscillation norms, run atomic decompositions and
//! pairings, execute verification suites, and emit machine-readable reports.
//!
//! Exit codes: 0 on success, 1 when a verify suite fails an asserted
//! property, 2 on input errors.

mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use oscillate::atoms::{b1_norm_exact, greedy_decompose, AtomDictionary, DictionaryFamily, LpCaps};
use oscillate::grid::{CubeFamily, GridFunction};
use oscillate::maximal::{bmo_norm, weak_bmo_norm, weak_bmo_star_norm, Centering};
use oscillate::poisson::{
    b1a_norm, bmoa_norm, bmoa_weak_norm, extend, extend_analytic, fprime_bound_ratio, hardy_norm,
    radial_grid, B1aConfig,
};
use oscillate::zygmund::{lambda_prime_norm, zygmund_seminorm};
use oscillate::Result;

#[derive(Parser)]
#[command(
    name = "oscillate",
    about = "Oscillation norms, special-atom decompositions, and verification sweeps on sampled functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// CSV (one value per line; `rows,cols` header for 2D) or JSON input.
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Generator spec `kind:key=val,...` (see README for kinds).
    #[arg(long)]
    gen: Option<String>,
    /// Cells per axis for generated input.
    #[arg(long = "N", default_value_t = 32)]
    n: usize,
    /// Seed for `random` generators and verification sweeps.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

impl InputArgs {
    fn load(&self) -> Result<GridFunction> {
        match (&self.input, &self.gen) {
            (Some(path), _) => input::load_file(path),
            (None, Some(spec)) => input::realize(&input::parse_gen_spec(spec)?, self.n, self.seed),
            (None, None) => Err(oscillate::Error::InvalidParam(
                "provide --input PATH or --gen SPEC".into(),
            )),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `json` (default) or `csv` (flattened key,value lines).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Oscillation norms with witnesses: BMO, weak BMO (parts), the starred
    /// norm, the Zygmund seminorm, and the derivative norm.
    Norms {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long, default_value = "literal-abs")]
        centering: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Atomic decompositions and their l1 costs.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        /// `greedy`, `lp`, or `both` (prints the cost comparison).
        #[arg(long, default_value = "greedy")]
        method: String,
        #[arg(long, default_value = "dyadic")]
        dict: String,
        /// LP cell cap (raise for N > 64).
        #[arg(long, default_value_t = 64)]
        lp_max_cells: usize,
        /// LP dictionary-size cap.
        #[arg(long, default_value_t = 4096)]
        lp_max_atoms: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded verification sweeps; exits 1 if an asserted property fails.
    Verify {
        /// factor2|sandwich|norm-axioms|holder|bridge|dualnorm|rotation|poisson
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long = "N", default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Harmonic extension: disk-side norms plus an optional field CSV.
    Poisson {
        #[command(flatten)]
        input: InputArgs,
        /// Radial truncation for the analytic norms.
        #[arg(long, default_value_t = 0.95)]
        rmax: f64,
        /// Radial node count for the extension grid.
        #[arg(long, default_value_t = 16)]
        radial: usize,
        /// Write the sampled field as CSV (r, theta, value) here.
        #[arg(long)]
        field_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn flatten_csv(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_csv(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_csv(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => {
            out.push_str(prefix);
            out.push(',');
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
}

fn emit(report: &Value, output: &OutputArgs) -> Result<()> {
    let text = match output.format.as_str() {
        "json" => format!(
            "{}\n",
            serde_json::to_string_pretty(report).expect("serializable")
        ),
        "csv" => {
            let mut s = String::from("key,value\n");
            flatten_csv("", report, &mut s);
            s
        }
        other => {
            return Err(oscillate::Error::InvalidParam(format!(
                "unknown format `{other}` (expected json or csv)"
            )))
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_norms(
    input: &InputArgs,
    family: &str,
    centering: &str,
    output: &OutputArgs,
) -> Result<bool> {
    let family: CubeFamily = family.parse()?;
    let centering: Centering = centering.parse()?;
    let f = input.load()?;

    let bmo = bmo_norm(&f, family);
    let weak = weak_bmo_norm(&f, family, centering);
    let star = weak_bmo_star_norm(&f, family, centering);
    let (zygmund, lambda_prime, lambda_ratio) = if f.dim() == 1 && f.n(0) >= 3 {
        let z = zygmund_seminorm(&f, 1)?;
        let lp = lambda_prime_norm(&f)?;
        let ratio = lp.ratio;
        (z.to_json(), lp.report.to_json(), Some(ratio))
    } else {
        (Value::Null, Value::Null, None)
    };
    let report = json!({
        "config": {
            "N": f.total_cells(),
            "torus": f.is_torus(),
            "family": family.as_str(),
            "centering": centering.as_str(),
            "seed": input.seed,
        },
        "bmo": bmo.to_json(),
        "weak_bmo": weak.to_json(),
        "weak_bmo_star": star.to_json(),
        "zygmund": zygmund,
        "lambda_prime": lambda_prime,
        "informational": {
            "star_equals_weak": (star.value - weak.value).abs() <= 1e-12,
            "lambda_prime_over_weak_bmo": lambda_ratio,
        },
    });
    emit(&report, output)?;
    Ok(true)
}

fn run_decompose(
    input: &InputArgs,
    method: &str,
    dict_family: &str,
    caps: LpCaps,
    output: &OutputArgs,
) -> Result<bool> {
    let f = input.load()?;
    let dict_family: DictionaryFamily = dict_family.parse()?;
    let dict = AtomDictionary::build(&f, dict_family)?;
    let report = match method {
        "greedy" => {
            let d = greedy_decompose(&f, &dict)?;
            json!({"method": "greedy", "decomposition": d.to_json(&dict)?})
        }
        "lp" => {
            let d = b1_norm_exact(&f, &dict, caps)?;
            json!({"method": "lp", "decomposition": d.to_json(&dict)?})
        }
        "both" => {
            let greedy = greedy_decompose(&f, &dict)?;
            let lp = b1_norm_exact(&f, &dict, caps)?;
            json!({
                "method": "both",
                "greedy": greedy.to_json(&dict)?,
                "lp": lp.to_json(&dict)?,
                "cost_comparison": {
                    "greedy": greedy.l1_cost,
                    "lp": lp.l1_cost,
                    "lp_minus_greedy": lp.l1_cost - greedy.l1_cost,
                },
            })
        }
        other => {
            return Err(oscillate::Error::InvalidParam(format!(
                "unknown method `{other}` (expected greedy, lp, or both)"
            )))
        }
    };
    emit(&report, output)?;
    Ok(true)
}

fn run_poisson(
    input: &InputArgs,
    rmax: f64,
    radial: usize,
    field_out: Option<&PathBuf>,
    output: &OutputArgs,
) -> Result<bool> {
    let f = input.load()?;
    let radii = radial_grid(radial, rmax)?;
    let field = extend(&f, &radii)?;
    if let Some(path) = field_out {
        std::fs::write(path, field.to_csv())?;
    }
    let strong = bmoa_norm(&f, &radii)?;
    let weak = bmoa_weak_norm(&f, &radii)?;
    let b1a = b1a_norm(
        &f,
        B1aConfig {
            r_max: rmax,
            ..Default::default()
        },
    )?;
    let analytic = extend_analytic(&f, &radii)?;
    let hardy_1 = hardy_norm(&analytic, 1.0)?;
    let hardy_2 = hardy_norm(&analytic, 2.0)?;
    // The derivative-bound constant is radius-dependent; report it at a few
    // radii below the truncation.
    let mut fprime_ratios = serde_json::Map::new();
    for r in [0.5, 0.9] {
        if r < rmax {
            fprime_ratios.insert(format!("r={r}"), json!(fprime_bound_ratio(&f, r)?));
        }
    }
    let report = json!({
        "config": {
            "N": f.total_cells(),
            "rmax": rmax,
            "radial_nodes": radial,
            "seed": input.seed,
        },
        "bmoa": strong.to_json(),
        "bmoa_weak": weak.to_json(),
        "b1a": b1a,
        "hardy": {"p1": hardy_1, "p2": hardy_2},
        "informational": {
            "bmoa_weak_collapses_to_center": true,
            "field_max_abs": field.max_abs(),
            "boundary_max_abs": f.max_abs(),
            "fprime_bound_ratio": Value::Object(fprime_ratios),
        },
    });
    emit(&report, output)?;
    Ok(true)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Ok(threads) = std::env::var("OSCILLATE_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            if k >= 1 {
                oscillate::configure_threads(k);
            }
        }
    }
    match &cli.command {
        Command::Norms {
            input,
            family,
            centering,
            output,
        } => run_norms(input, family, centering, output),
        Command::Decompose {
            input,
            method,
            dict,
            lp_max_cells,
            lp_max_atoms,
            output,
        } => run_decompose(
            input,
            method,
            dict,
            LpCaps {
                max_cells: *lp_max_cells,
                max_atoms: *lp_max_atoms,
                max_pivots: oscillate::optimize::DEFAULT_MAX_PIVOTS,
            },
            output,
        ),
        Command::Verify {
            suite,
            trials,
            n,
            seed,
            output,
        } => {
            if *trials < 1 {
                return Err(oscillate::Error::InvalidParam("trials must be >= 1".into()));
            }
            let outcome = verify::run_suite(suite, *seed, *trials, *n)?;
            emit(&outcome.report, output)?;
            Ok(outcome.pass)
        }
        Command::Poisson {
            input,
            rmax,
            radial,
            field_out,
            output,
        } => run_poisson(input, *rmax, *radial, field_out.as_ref(), output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
