//! Command-line driver: solves, sweeps, expansion dumps, operator
//! comparisons, and resonance scans, all driven by one JSON config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use elastoshell::elastic::manufactured_forcing;
use elastoshell::norms::{solid_error_norm, NormRule};
use elastoshell::operators::{compare_operators, SignFlag};
use elastoshell::rates::{fit_rate, RateOutcome};
use elastoshell::solver::{multiscale_terms, resonance_margin, solve_ec, solve_transmission};
use elastoshell::sweep::run_sweep;
use elastoshell::{Error, SphereGeometry, SweepConfig, RESONANCE_MARGIN_TOL};

#[derive(Parser)]
#[command(
    name = "elastoshell",
    version,
    about = "Modal solver and impedance-condition study for an elastic sphere \
             coated by a thin fluid shell"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (eps, l) transmission problem and its impedance reductions.
    Solve {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
        /// Layer thickness; defaults to eps_start.
        #[arg(long)]
        eps: Option<f64>,
        /// Spherical-harmonic degree; defaults to the first l_list entry.
        #[arg(long)]
        l: Option<u32>,
    },
    /// Run the full thickness sweep and write its CSV.
    Sweep {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Print expansion terms and layer profiles.
    Expand {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
        /// Expansion order (0..=3).
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Compare impedance and acoustic operator symbols under both
    /// curvature-sign conventions.
    CompareOps {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Scan resonance margins over a frequency grid.
    CheckResonance {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
        /// First frequency; defaults to 0.5 * omega.
        #[arg(long)]
        omega_start: Option<f64>,
        /// Last frequency; defaults to 1.5 * omega.
        #[arg(long)]
        omega_end: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 101)]
        count: usize,
    },
}

fn main() -> ExitCode {
    // die quietly on a closed pipe, as expected of a tool whose output
    // gets piped into head or grep
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Solve { config, eps, l } => cmd_solve(&config, eps, l),
        Command::Sweep { config } => cmd_sweep(&config),
        Command::Expand { config, order } => cmd_expand(&config, order),
        Command::CompareOps { config } => cmd_compare_ops(&config),
        Command::CheckResonance {
            config,
            omega_start,
            omega_end,
            count,
        } => cmd_check_resonance(&config, omega_start, omega_end, count),
    }
}

fn cmd_solve(path: &PathBuf, eps: Option<f64>, l: Option<u32>) -> Result<(), Error> {
    let config = SweepConfig::from_path(path)?;
    let mat = config.material()?;
    let radius = config.radius;
    let eps = eps.unwrap_or(config.eps_start);
    let l = l.unwrap_or_else(|| config.modes()[0]);
    let forcing = manufactured_forcing(&mat, radius, l, config.amplitude)?;
    let geom = SphereGeometry::new(radius, eps)?;
    let margin = resonance_margin(&mat, radius, l)?;
    println!("l = {l}, eps = {eps}, resonance margin = {margin:.6e}");

    let exact = solve_transmission(&mat, &geom, l, &forcing)?;
    println!("transmission (condition {:.3e}):", exact.conditioning());
    println!(
        "  solid: A = {}, B = {}",
        exact.solid().coeff_p(),
        exact.solid().coeff_sv()
    );
    println!(
        "  fluid: a = {}, b = {}",
        exact.fluid().coeff_j(),
        exact.fluid().coeff_y()
    );
    let res = exact.boundary_residuals();
    println!(
        "  residuals: traction {:.3e}, shear {:.3e}, kinematic {:.3e}, outer {:.3e}",
        res.traction_normal, res.traction_shear, res.normal_velocity, res.outer_pressure
    );

    let rule = NormRule::default();
    for k in config.order_list() {
        let ec = solve_ec(k, &mat, radius, eps, l, &forcing)?;
        let err = solid_error_norm(exact.solid(), ec.field(), radius, &rule)?.value();
        println!(
            "ec k = {k} (beta = {}, condition {:.3e}):",
            ec.symbol(),
            ec.conditioning()
        );
        println!(
            "  solid: A = {}, B = {}",
            ec.field().coeff_p(),
            ec.field().coeff_sv()
        );
        println!("  err_solid = {err:e}");
    }
    Ok(())
}

fn cmd_sweep(path: &PathBuf) -> Result<(), Error> {
    let config = SweepConfig::from_path(path)?;
    let outcome = run_sweep(&config)?;
    println!(
        "wrote {} rows to {}",
        outcome.records.len(),
        config.output
    );
    let eps_grid = config.eps_grid();
    for l in config.modes() {
        for k in config.order_list() {
            let errors: Vec<f64> = outcome
                .records
                .iter()
                .filter(|r| r.l == l && r.k == k)
                .map(|r| r.err_solid)
                .collect();
            match fit_rate(&eps_grid, &errors)? {
                RateOutcome::Exact => println!("l = {l}, k = {k}: exact agreement"),
                RateOutcome::Fitted(fit) => println!(
                    "l = {l}, k = {k}: slope {:.3} (r^2 {:.5})",
                    fit.slope, fit.r_squared
                ),
            }
        }
    }
    Ok(())
}

fn cmd_expand(path: &PathBuf, order: u32) -> Result<(), Error> {
    let config = SweepConfig::from_path(path)?;
    let mat = config.material()?;
    let geom = SphereGeometry::new(config.radius, 0.0)?;
    for l in config.modes() {
        let forcing = manufactured_forcing(&mat, config.radius, l, config.amplitude)?;
        let set = multiscale_terms(&mat, &geom, l, &forcing, order)?;
        println!("l = {l}:");
        for j in 0..=set.order() {
            println!(
                "  u_{j}: A = {}, B = {} (gamma_{j} = {})",
                set.term(j).coeff_p(),
                set.term(j).coeff_sv(),
                set.gamma(j)
            );
            println!("  p_{j}(Y) = {}", set.profile(j));
        }
    }
    Ok(())
}

fn cmd_compare_ops(path: &PathBuf) -> Result<(), Error> {
    let config = SweepConfig::from_path(path)?;
    let mat = config.material()?;
    let geom = SphereGeometry::new(config.radius, 0.0)?;
    let grid = config.eps_grid();
    for l in config.modes() {
        for k in 1..=3 {
            let describe = |flag: SignFlag| -> Result<String, Error> {
                Ok(match compare_operators(k, &geom, &mat, l, &grid, flag)? {
                    RateOutcome::Exact => "exact".to_string(),
                    RateOutcome::Fitted(fit) => format!("slope {:.3}", fit.slope),
                })
            };
            println!(
                "l = {l}, k = {k}: {} with H, {} with -H",
                describe(SignFlag::Plus)?,
                describe(SignFlag::Minus)?
            );
        }
    }
    Ok(())
}

fn cmd_check_resonance(
    path: &PathBuf,
    omega_start: Option<f64>,
    omega_end: Option<f64>,
    count: usize,
) -> Result<(), Error> {
    let config = SweepConfig::from_path(path)?;
    let base = config.material()?;
    let start = omega_start.unwrap_or(0.5 * base.omega);
    let end = omega_end.unwrap_or(1.5 * base.omega);
    if count < 2 || !(start > 0.0) || !(end > start) {
        return Err(Error::Config(format!(
            "frequency grid needs 0 < start < end and at least 2 points, \
             got [{start}, {end}] with {count}"
        )));
    }
    let modes = config.modes();
    for i in 0..count {
        let omega = start + (end - start) * i as f64 / (count - 1) as f64;
        let mut mat = base;
        mat.omega = omega;
        print!("omega = {omega:.6}:");
        for &l in &modes {
            let margin = resonance_margin(&mat, config.radius, l)?;
            print!(" l{l} {margin:.3e}");
            if margin < RESONANCE_MARGIN_TOL {
                print!("(RESONANT)");
            }
        }
        println!();
    }
    Ok(())
}
