use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use euler_bench::cases::{case, CaseId};
use euler_bench::io::parse_key_values;
use euler_bench::run::{self, MeshSpec, RunConfig};
use euler_bench::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_TOLERANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "euler-bench", version, about = "Gas-kinetic Euler solver benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark case.
    Run(RunArgs),
    /// Write the exact reference field of an oracle-backed case.
    Reference {
        #[arg(long)]
        case: String,
        #[arg(long)]
        mesh: Option<String>,
        /// Sample time (default: the case end time).
        #[arg(long)]
        t: Option<f64>,
        /// Output file; `.bin` selects the binary format.
        #[arg(long)]
        out: PathBuf,
    },
    /// Difference norms between two snapshot files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Fail with exit status 3 if the L1 norm of `component` exceeds this.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value = "rho")]
        component: String,
    },
    /// List registered cases.
    ListCases {
        /// Print full case specifications as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a mesh sequence and print observed orders.
    Convergence {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated meshes.
        #[arg(long, default_value = "32x32,64x64,128x128")]
        meshes: String,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// Key-value file with settings named like the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    /// `1/400`, `0.0025`, `200x200` or a cell count.
    #[arg(long)]
    mesh: Option<String>,
    /// Cells along x.
    #[arg(long)]
    cells: Option<usize>,
    /// js, z or z+.
    #[arg(long)]
    weno: Option<String>,
    /// Z+ parameter: a number or `dx^<power>`.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    weno_epsilon: Option<f64>,
    /// componentwise or characteristic.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Comma-separated output times.
    #[arg(long)]
    output_times: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Base collision-time coefficient.
    #[arg(long)]
    eps_base: Option<f64>,
    /// Pressure-jump collision-time coefficient.
    #[arg(long)]
    c_jump: Option<f64>,
    /// csv, binary or both.
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn build(&self, base: RunConfig) -> Result<RunConfig, Error> {
        let mut c = base;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            for (k, v) in parse_key_values(&text)? {
                c.set(&k, &v)?;
            }
        }
        let mut set = |k: &str, v: Option<String>| -> Result<(), Error> {
            match v {
                Some(v) => c.set(k, &v),
                None => Ok(()),
            }
        };
        set("case", self.case.clone())?;
        set("mesh", self.mesh.clone())?;
        set("cells", self.cells.map(|n| n.to_string()))?;
        set("weno", self.weno.clone())?;
        set("lambda", self.lambda.clone())?;
        set("weno-epsilon", self.weno_epsilon.map(|v| v.to_string()))?;
        set("mode", self.mode.clone())?;
        set("cfl", self.cfl.map(|v| v.to_string()))?;
        set("t-end", self.t_end.map(|v| v.to_string()))?;
        set("output-times", self.output_times.clone())?;
        set("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        set("threads", self.threads.map(|v| v.to_string()))?;
        set("eps-base", self.eps_base.map(|v| v.to_string()))?;
        set("c-jump", self.c_jump.map(|v| v.to_string()))?;
        set("format", self.format.clone())?;
        c.validate()?;
        Ok(c)
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Inadmissible { .. } | Error::StepFailure { .. } | Error::NoConvergence { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn parse_mesh(s: Option<&str>) -> Result<Option<MeshSpec>, Error> {
    s.map(str::parse).transpose()
}

fn execute(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run(args) => {
            let config = args.build(RunConfig::default())?;
            if args.case.is_none() && args.config.is_none() {
                return Err(Error::Config("`run` needs --case or --config".into()));
            }
            let m = run::run(&config)?;
            for o in &m.outputs {
                println!("wrote {} (t = {}, sha256 {})", o.path, o.t, o.sha256);
            }
            for d in &m.diagnostics {
                println!("wrote {d}");
            }
            println!(
                "steps {}  t {}  fallbacks {}  drift(mass, energy) = ({:.3e}, {:.3e})  wall {:.2}s",
                m.steps,
                m.final_time,
                m.fallback_count,
                m.conservation_drift[0],
                m.conservation_drift[3],
                m.wall_time.setup_s + m.wall_time.stepping_s + m.wall_time.output_s
            );
            if let Some(f) = &m.failure {
                eprintln!("run failed at t = {}: {}", f.time, f.message);
                return Ok(EXIT_NUMERICAL);
            }
            Ok(0)
        }
        Command::Reference { case, mesh, t, out } => {
            let s = run::emit_reference(&case, parse_mesh(mesh.as_deref())?, t, &out)?;
            println!("wrote {} ({}x{}, t = {})", out.display(), s.grid.nx, s.grid.ny, s.t);
            Ok(0)
        }
        Command::Compare {
            a,
            b,
            tol,
            component,
        } => {
            let k = ["rho", "u", "v", "p"]
                .iter()
                .position(|c| *c == component)
                .ok_or_else(|| Error::Config(format!("unknown component `{component}` (rho, u, v, p)")))?;
            let n = run::compare_files(&a, &b)?;
            println!("component,l1,linf");
            for (i, c) in ["rho", "u", "v", "p"].iter().enumerate() {
                println!("{c},{:e},{:e}", n.l1[i], n.linf[i]);
            }
            if let Some(tol) = tol {
                if !(n.l1[k] <= tol) {
                    eprintln!("L1({component}) = {:e} exceeds tolerance {tol:e}", n.l1[k]);
                    return Ok(EXIT_TOLERANCE);
                }
            }
            Ok(0)
        }
        Command::ListCases { json } => {
            for id in CaseId::all() {
                let spec = case(id)?;
                if json {
                    println!("{}", spec.to_json());
                } else {
                    println!(
                        "{:<32} mesh {:>5}x{:<5} t_end {:<6} oracle {}",
                        id.to_string(),
                        spec.mesh.0,
                        spec.mesh.1,
                        spec.t_end,
                        if id.has_oracle() { "yes" } else { "no" }
                    );
                }
            }
            Ok(0)
        }
        Command::Convergence { run: args, meshes } => {
            // Order studies default to the smooth vortex with the base
            // collision time switched off.
            let base = RunConfig {
                eps_base: 0.0,
                weno: euler_bench::reconstruction::WenoVariant::Z,
                ..RunConfig::default()
            };
            let config = args.build(base)?;
            let meshes: Vec<MeshSpec> = meshes.split(',').map(str::parse).collect::<Result<_, _>>()?;
            let rows = run::convergence(&config, &meshes)?;
            println!("nx,ny,dx,l1,order");
            for r in rows {
                let order = r.order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "-".into());
                println!("{},{},{},{:e},{}", r.nx, r.ny, r.dx, r.l1, order);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
