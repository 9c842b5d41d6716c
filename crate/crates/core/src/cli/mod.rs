//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 user or config error,
//! 3 numerical failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::bath::{markov_rate, tabulate, Spectrum};
use crate::dynamics::{analytic_purity, exact_propagate, integrate_master_equation, Trajectory};
use crate::twoqubit::{
    build_model, classify, fit_rates, fragile_concurrence_analytic, pure_concurrence, time_scales,
    DecayRates, EntanglementClass, CLASSIFY_TOL,
};
use config::{ConfigFile, Scenario, NORM_SLACK};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dephasing",
    version,
    about = "Two-qubit pure-dephasing simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured state and write the trajectory as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Integrate the master equation with RK4 instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Classify a pure state given as re,im pairs of a1..a4.
    Classify {
        #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
        state: Vec<f64>,
        /// Config whose [bath] section supplies time scales (Ohmic only).
        #[arg(long)]
        bath: Option<PathBuf>,
    },
    /// Run the [sweep] section and write one summary row per point.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check closed form, integrator and analytic laws on a config.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn numerical(err: crate::Error) -> Self {
        Failure {
            code: EXIT_NUMERICAL,
            message: err.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            oracle,
        } => simulate(&config, &out, oracle),
        Command::Classify { state, bath } => classify_cmd(&state, bath.as_deref()),
        Command::Scan { config, out } => scan(&config, &out),
        Command::Verify { config } => verify(&config),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &Path) -> Result<ConfigFile, Failure> {
    let text = config::read(path).map_err(Failure::usage)?;
    ConfigFile::parse(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

fn scenario(path: &Path, cfg: &ConfigFile) -> Result<Scenario, Failure> {
    cfg.scenario()
        .map_err(|e| Failure::usage(format!("{}:{e}", path.display())))
}

/// Closed-form or RK4 trajectory of a scenario.
pub fn evolve(sc: &Scenario, oracle: bool) -> crate::Result<Trajectory> {
    let table = tabulate(&sc.bath, 0.0, sc.t_max, sc.steps)?;
    let model = build_model(&sc.params);
    let rho0 = sc.state.density_matrix();
    if oracle {
        integrate_master_equation(
            model.hamiltonian(),
            model.coupling_operator(),
            &table,
            &rho0,
            sc.substeps,
        )
    } else {
        exact_propagate(&model, &rho0, &table)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn final_values(traj: &Trajectory) -> (f64, f64, f64) {
    let last = traj.len() - 1;
    let c = traj.concurrence.as_ref().map_or(f64::NAN, |c| c[last]);
    let coh = traj.coherence_a.as_ref().map_or(f64::NAN, |c| c[last]);
    (c, traj.purity[last], coh)
}

fn simulate(config: &Path, out: &Path, oracle: bool) -> Result<i32, Failure> {
    let cfg = load(config)?;
    let sc = scenario(config, &cfg)?;
    let traj = evolve(&sc, oracle).map_err(Failure::numerical)?;
    write_file(out, &output::trajectory_csv(&traj))?;
    let (c, p, coh) = final_values(&traj);
    println!(
        "t={} concurrence={} purity={} coh_a={}",
        traj.times[traj.len() - 1],
        c,
        p,
        coh
    );
    Ok(EXIT_OK)
}

/// Rounds to 12 decimals so exact values print without float noise.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn classify_cmd(state: &[f64], bath: Option<&Path>) -> Result<i32, Failure> {
    if state.len() != 8 {
        return Err(Failure::usage(format!(
            "--state needs 8 numbers (re,im of a1..a4), got {}",
            state.len()
        )));
    }
    let pairs = [0, 1, 2, 3].map(|k| [state[2 * k], state[2 * k + 1]]);
    let norm_sq: f64 = state.iter().map(|x| x * x).sum();
    if !norm_sq.is_finite() || norm_sq == 0.0 {
        return Err(Failure::usage("state must be finite and nonzero"));
    }
    if (norm_sq - 1.0).abs() > NORM_SLACK {
        eprintln!("warning: state has norm^2 = {norm_sq}; renormalizing");
    }
    let scale = norm_sq.sqrt();
    let pairs = pairs.map(|[re, im]| [re / scale, im / scale]);
    let (amps, _) = config::amplitudes_from_pairs(pairs).map_err(Failure::usage)?;

    let bath = match bath {
        Some(path) => {
            let text = config::read(path).map_err(Failure::usage)?;
            Some(
                config::load_bath(&text)
                    .map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?,
            )
        }
        None => None,
    };

    let class = classify(&amps, CLASSIFY_TOL);
    let c0 = tidy(pure_concurrence(&amps));
    match class.class {
        EntanglementClass::Separable => println!("Separable  C0={c0}"),
        other => println!(
            "{other}  C0={c0}  Cinf={}",
            tidy(class.asymptotic_concurrence)
        ),
    }
    if let Some(bath) = bath {
        if let Spectrum::Ohmic(_) = bath.spectrum() {
            match markov_rate(&bath).and_then(time_scales) {
                Ok(ts) => println!(
                    "tau_e={}  tau_phi={}  Gamma={}",
                    ts.entanglement, ts.dephasing, ts.markov_rate
                ),
                Err(e) => eprintln!("note: no time scales for this bath ({e})"),
            }
        }
    }
    Ok(EXIT_OK)
}

/// Fit window for rate extraction: the one given, else `[5τ_φ, 10τ_φ]` for a
/// thermal Ohmic bath, else the second half of the run.
fn fit_window(sc: &Scenario, given: Option<(f64, f64)>) -> Result<(f64, f64), String> {
    let window = match given {
        Some(w) => w,
        None => match markov_rate(&sc.bath).and_then(time_scales) {
            Ok(ts) => (5.0 * ts.dephasing, 10.0 * ts.dephasing),
            Err(_) => (0.5 * sc.t_max, sc.t_max),
        },
    };
    if window.1 > sc.t_max {
        return Err(format!(
            "fit window ends at t = {} but t_max = {}",
            window.1, sc.t_max
        ));
    }
    Ok(window)
}

struct ScanRow {
    value: f64,
    concurrence: f64,
    purity: f64,
    coherence: f64,
    rates: Option<DecayRates>,
}

fn scan(config: &Path, out: &Path) -> Result<i32, Failure> {
    let cfg = load(config)?;
    let anchored = |e: config::ConfigError| Failure::usage(format!("{}:{e}", config.display()));
    let sweep = cfg
        .sweep()
        .map_err(anchored)?
        .ok_or_else(|| Failure::usage(format!("{}: no [sweep] section", config.display())))?;

    let mut points = Vec::with_capacity(sweep.values.len());
    for &v in &sweep.values {
        let sc = cfg.scenario_at(&sweep.key, v).map_err(anchored)?;
        let window = if sweep.rates {
            let w = fit_window(&sc, sweep.window).map_err(|m| {
                anchored(cfg.error("sweep", "window", format!("at {} = {v}: {m}", sweep.key)))
            })?;
            Some(w)
        } else {
            None
        };
        points.push((v, sc, window));
    }

    let rows: Vec<crate::Result<ScanRow>> = points
        .par_iter()
        .map(|(v, sc, window)| {
            let traj = evolve(sc, false)?;
            let (concurrence, purity, coherence) = final_values(&traj);
            let rates = window.map(|w| fit_rates(&traj, w)).transpose()?;
            Ok(ScanRow {
                value: *v,
                concurrence,
                purity,
                coherence,
                rates,
            })
        })
        .collect();

    let mut csv = format!("{},concurrence,purity,coh_a", sweep.key);
    if sweep.rates {
        csv.push_str(",rate_concurrence,rate_coherence");
    }
    csv.push('\n');
    for row in rows {
        let row = row.map_err(Failure::numerical)?;
        csv.push_str(&format!(
            "{:?},{:?},{:?},{:?}",
            row.value, row.concurrence, row.purity, row.coherence
        ));
        if let Some(r) = &row.rates {
            csv.push_str(&format!(
                ",{},{}",
                output::cell(&r.concurrence),
                output::cell(&r.coherence)
            ));
            for (name, rate) in [("concurrence", &r.concurrence), ("coherence", &r.coherence)] {
                if let Err(why) = rate {
                    eprintln!("{} = {}: {name} rate excluded: {why}", sweep.key, row.value);
                }
            }
        }
        csv.push('\n');
    }
    write_file(out, &csv)?;
    println!("{} points written to {}", sweep.values.len(), out.display());
    Ok(EXIT_OK)
}

/// One line of `verify` output.
struct Check {
    name: &'static str,
    value: f64,
    tol: f64,
    /// Passing needs `value <= tol` when true, `value >= tol` otherwise.
    upper: bool,
}

impl Check {
    fn max(name: &'static str, value: f64, tol: f64) -> Self {
        Check {
            name,
            value,
            tol,
            upper: true,
        }
    }

    fn passed(&self) -> bool {
        if self.upper {
            self.value <= self.tol
        } else {
            self.value >= self.tol
        }
    }
}

fn max_abs_diff(a: &[f64], b: impl Iterator<Item = f64>) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn verify(config: &Path) -> Result<i32, Failure> {
    let cfg = load(config)?;
    let sc = scenario(config, &cfg)?;
    let exact = evolve(&sc, false).map_err(Failure::numerical)?;
    // A breakdown of the integrator is a verification outcome, not a crash.
    let rk4 = match evolve(&sc, true) {
        Ok(t) => Some(t),
        Err(e) => {
            println!("integrator: {e} FAIL");
            None
        }
    };

    let mut checks = Vec::new();
    if let Some(rk4) = &rk4 {
        let oracle = exact
            .states
            .iter()
            .zip(&rk4.states)
            .map(|(a, b)| a.matrix().sub(b.matrix()).map(|d| d.max_abs()))
            .collect::<crate::Result<Vec<_>>>()
            .map_err(Failure::numerical)?
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(Check::max("oracle deviation", oracle, 1e-6));
    }

    let amps = sc.state.amplitudes();
    let conc = exact.concurrence.as_deref().unwrap_or(&[]);
    let class = classify(&sc.state, CLASSIFY_TOL).class;
    match class {
        EntanglementClass::Robust => {
            let drift = max_abs_diff(conc, std::iter::repeat(conc[0]));
            checks.push(Check::max("concurrence drift", drift, 1e-9));
        }
        EntanglementClass::Fragile => {
            let law = exact
                .d
                .iter()
                .map(|&d| fragile_concurrence_analytic(amps[0], amps[3], d));
            checks.push(Check::max(
                "fragile decay law",
                max_abs_diff(conc, law),
                1e-9,
            ));
        }
        other => println!("concurrence law: not applicable ({other} state)"),
    }

    let model = build_model(&sc.params);
    let analytic = exact
        .d
        .iter()
        .map(|&d| analytic_purity(amps, model.couplings(), d))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(Failure::numerical)?;
    checks.push(Check::max(
        "purity identity",
        max_abs_diff(&exact.purity, analytic.into_iter()),
        1e-9,
    ));

    let ex = exact.invariant_report().map_err(Failure::numerical)?;
    checks.push(Check::max(
        "trace error (closed form)",
        ex.max_trace_error,
        1e-10,
    ));
    checks.push(Check::max(
        "hermiticity error (closed form)",
        ex.max_hermiticity_error,
        1e-10,
    ));
    checks.push(Check {
        name: "min eigenvalue (closed form)",
        value: ex.min_eigenvalue,
        tol: -1e-8,
        upper: false,
    });
    checks.push(Check::max(
        "population drift (closed form)",
        ex.max_population_drift,
        0.0,
    ));
    if let Some(rk4) = &rk4 {
        let rk = rk4.invariant_report().map_err(Failure::numerical)?;
        checks.push(Check::max(
            "trace error (integrator)",
            rk.max_trace_error,
            1e-7,
        ));
        checks.push(Check::max(
            "hermiticity error (integrator)",
            rk.max_hermiticity_error,
            1e-10,
        ));
        checks.push(Check {
            name: "min eigenvalue (integrator)",
            value: rk.min_eigenvalue,
            tol: -1e-8,
            upper: false,
        });
        checks.push(Check::max(
            "population drift (integrator)",
            rk.max_population_drift,
            1e-8,
        ));
    }

    let mut ok = true;
    for c in &checks {
        let pass = c.passed();
        ok &= pass;
        let rel = if c.upper { "<=" } else { ">=" };
        println!(
            "{}: {:e} (need {rel} {:e}) {}",
            c.name,
            c.value,
            c.tol,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if ok && rk4.is_some() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}
