use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ngtlab::manifolds::{self, Manifold};
use ngtlab::report::{run_checks, Suite};
use ngtlab::tensor::T3;
use ngtlab::{geometry, ngt, specfile};

#[derive(Parser)]
#[command(
    name = "ngtlab",
    about = "Pointwise checks for connections with torsion on generalized Riemannian manifolds G = g + F"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Builtin manifold name (see `list`).
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// Path to a manifold definition file.
    #[arg(long)]
    spec: Option<String>,
}

impl Source {
    fn load(&self) -> ngtlab::Result<Manifold> {
        match (&self.builtin, &self.spec) {
            (Some(name), None) => manifolds::builtin(name),
            (None, Some(path)) => specfile::load_spec(path),
            _ => Err(ngtlab::Error::Precondition(
                "give exactly one of --builtin and --spec".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite over sampled points and report residuals.
    Check {
        #[command(flatten)]
        source: Source,
        /// Number of sample points.
        #[arg(long, default_value_t = 32)]
        points: usize,
        /// PRNG seed for the sample points.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Override the derived-identity pass tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<String>,
        /// Check suite; `auto` picks by structure classification.
        #[arg(long, default_value = "auto")]
        suite: String,
    },
    /// List builtin manifolds.
    List,
    /// Print component arrays of a derived quantity at a point.
    Eval {
        #[command(flatten)]
        source: Source,
        /// Comma-separated chart coordinates of the point.
        #[arg(long)]
        point: String,
        /// christoffels | torsion | nijenhuis | dF | ngt-connection
        #[arg(long)]
        quantity: String,
    },
}

fn t3_rows(n: usize, t: &T3) -> Vec<Vec<Vec<f64>>> {
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| t.get(i, j, k)).collect()).collect())
        .collect()
}

fn run(cli: Cli) -> ngtlab::Result<bool> {
    match cli.command {
        Command::List => {
            for name in manifolds::BUILTIN_NAMES {
                let m = manifolds::builtin(name)?;
                println!("{name:24} dim {}  {}", m.chart().dim(), m.description);
            }
            Ok(true)
        }
        Command::Check { source, points, seed, tol, json, suite } => {
            let m = source.load()?;
            let suite = Suite::parse(&suite)?;
            let start = Instant::now();
            let report = run_checks(&m, suite, points, seed, tol)?;
            let wall = start.elapsed();
            print!("{}", report.render_table());
            println!("wall time: {:.1} ms", wall.as_secs_f64() * 1e3);
            if let Some(path) = json {
                std::fs::write(path, report.to_json())?;
            }
            Ok(report.all_pass())
        }
        Command::Eval { source, point, quantity } => {
            let m = source.load()?;
            let p: Vec<f64> = point
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        ngtlab::Error::Precondition(format!("bad coordinate `{s}` in --point"))
                    })
                })
                .collect::<ngtlab::Result<_>>()?;
            if p.len() != m.chart().dim() {
                return Err(ngtlab::Error::Precondition(format!(
                    "--point has {} coordinates, chart dimension is {}",
                    p.len(),
                    m.chart().dim()
                )));
            }
            let fr = m.frame(&p)?;
            let n = fr.n;
            let comps = match quantity.as_str() {
                "christoffels" => t3_rows(n, &geometry::levi_civita(&fr)),
                "torsion" => t3_rows(n, &ngt::ngt_skew_pipeline(&fr).torsion),
                "nijenhuis" => t3_rows(n, &geometry::nijenhuis_low(&fr)),
                "dF" => t3_rows(n, &fr.df()),
                "ngt-connection" => t3_rows(n, &ngt::ngt_skew_pipeline(&fr).gamma),
                other => {
                    return Err(ngtlab::Error::Precondition(format!(
                        "unknown quantity `{other}` (christoffels|torsion|nijenhuis|dF|ngt-connection)"
                    )))
                }
            };
            let out = serde_json::json!({
                "manifold": m.name,
                "point": p,
                "quantity": quantity,
                "components": comps,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("eval output"));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
