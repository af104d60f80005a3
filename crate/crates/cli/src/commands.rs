use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use splitkdv_core::convergence::{
    default_kdv_ladder, fine_reference_oracle, kdv_problem, run_refinement_study_norms,
    ConvergenceReport, Oracle,
};
use splitkdv_core::kdv::{conserved_quantities, soliton, AiryFlow, BurgersFlow, SolitonParams};
use splitkdv_core::logistic::{exact_solution, LogisticConfig, LogisticFlowA, LogisticFlowB};
use splitkdv_core::selftest::{run_selftest, SelftestOptions};
use splitkdv_core::spectral::{sobolev_norm, PeriodicGrid, RealField};
use splitkdv_core::splitting::{run_splitting, SplitScheme, TimeGrid};
use splitkdv_core::Error;

use crate::config::{OracleKind, Problem, RunConfig};

pub const EXIT_NUMERICAL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_)
            | Error::Inadmissible { .. }
            | Error::Parse(_)
            | Error::Unsupported(_)
            | Error::GridMismatch => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn write_failed(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::numerical(format!("cannot write {}: {e}", path.display()))
}

type Outcome = Result<ExitCode, Failure>;

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| Failure::config(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

/// Worker count: `--jobs` (default: all cores), capped by `SPLITKDV_THREADS`.
pub fn resolve_jobs(requested: Option<usize>) -> Result<usize, Failure> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut jobs = requested.unwrap_or(available);
    if let Ok(raw) = std::env::var("SPLITKDV_THREADS") {
        let cap: usize = raw.trim().parse().map_err(|_| {
            Failure::config(format!(
                "SPLITKDV_THREADS must be a positive integer, got '{raw}'"
            ))
        })?;
        if cap == 0 {
            return Err(Failure::config(
                "SPLITKDV_THREADS must be a positive integer, got '0'",
            ));
        }
        jobs = jobs.min(cap);
    }
    Ok(jobs.max(1))
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::config(format!("{name} must be positive, got {v}")))
    }
}

pub fn cmd_logistic(cfg: &RunConfig) -> Outcome {
    if let Some(p) = cfg.problem.filter(|p| *p != Problem::Logistic) {
        return Err(Failure::config(format!(
            "the logistic command does not run problem '{p}'"
        )));
    }
    let lc = LogisticConfig {
        u0: cfg.u0.unwrap_or(0.5),
        final_time: cfg.final_time.unwrap_or(1.0),
        dt: cfg.dt.unwrap_or(0.05),
    };
    lc.validate()?;
    let schemes = match cfg.scheme {
        Some(s) => vec![s],
        None => vec![SplitScheme::Godunov, SplitScheme::Strang],
    };
    let grid = TimeGrid::new(lc.final_time, lc.dt)?;
    let runs = schemes
        .iter()
        .map(|&s| run_splitting(&LogisticFlowA, &LogisticFlowB, lc.u0, &grid, s))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = open_output(cfg.out.as_deref())?;
    let target = cfg.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>"));
    let mut header = vec!["n".to_string(), "t_n".to_string()];
    header.extend(schemes.iter().map(|s| s.as_str().to_string()));
    header.push("exact".into());
    header.extend(schemes.iter().map(|s| format!("err_{}", s.as_str())));
    let mut text = header.join(",");
    text.push('\n');
    for n in 0..=grid.n_steps() {
        let t = grid.t(n);
        let exact = exact_solution(lc.u0, t);
        let mut row = vec![n.to_string(), format!("{t:.16e}")];
        row.extend(runs.iter().map(|r| format!("{:.16e}", r.state(n))));
        row.push(format!("{exact:.16e}"));
        row.extend(runs.iter().map(|r| format!("{:.16e}", r.state(n) - exact)));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    out.write_all(text.as_bytes())
        .map_err(write_failed(&target))?;
    out.flush().map_err(write_failed(&target))?;
    Ok(ExitCode::SUCCESS)
}

struct KdvSetup {
    grid: Arc<PeriodicGrid>,
    u0: RealField,
    soliton: Option<SolitonParams>,
    final_time: f64,
    id: String,
}

fn kdv_setup(cfg: &RunConfig) -> Result<KdvSetup, Failure> {
    let problem = cfg.problem.unwrap_or(Problem::KdvSoliton);
    let length = positive("L", cfg.length.unwrap_or(100.0))?;
    let n = cfg.n.unwrap_or(512);
    let final_time = positive("T", cfg.final_time.unwrap_or(1.0))?;
    match problem {
        Problem::Logistic => Err(Failure::config(
            "use the logistic command for the logistic problem",
        )),
        Problem::KdvSoliton => {
            let kappa = positive("kappa", cfg.kappa.unwrap_or(0.4))?;
            let params = SolitonParams::new(kappa, 0.5 * length, length)?;
            let grid = PeriodicGrid::new(length, n)?;
            let u0 = soliton(&grid, &params, 0.0)?;
            Ok(KdvSetup {
                grid,
                u0,
                soliton: Some(params),
                final_time,
                id: format!("kdv-soliton(kappa={kappa}, L={length}, N={n})"),
            })
        }
        Problem::KdvCustom => {
            let path = cfg
                .init
                .as_ref()
                .ok_or_else(|| Failure::config("kdv-custom needs --init <csv> with columns x,u"))?;
            let file = File::open(path)
                .map_err(|e| Failure::config(format!("cannot open {}: {e}", path.display())))?;
            let grid = PeriodicGrid::new(length, n)?;
            let u0 = RealField::read_csv(grid.clone(), BufReader::new(file))
                .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            Ok(KdvSetup {
                grid,
                u0,
                soliton: None,
                final_time,
                id: format!("kdv-custom({}, L={length}, N={n})", path.display()),
            })
        }
    }
}

fn acceptance_band(scheme: SplitScheme) -> (f64, f64) {
    match scheme.order() {
        1 => (0.8, 1.2),
        _ => (1.8, 2.2),
    }
}

/// `study.csv` with norm 1 becomes `study_H1.csv`.
fn per_norm_path(path: &Path, norm: u32) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_H{norm}.{}", ext.to_string_lossy()),
        None => format!("{stem}_H{norm}"),
    };
    path.with_file_name(name)
}

fn write_report(report: &ConvergenceReport, path: Option<&Path>) -> Result<(), Failure> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    let target = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let mut out = open_output(path)?;
    out.write_all(&buf).map_err(write_failed(&target))?;
    out.flush().map_err(write_failed(&target))
}

pub fn cmd_kdv_converge(cfg: &RunConfig) -> Outcome {
    let final_time = positive("T", cfg.final_time.unwrap_or(1.0))?;
    let ladder = cfg
        .ladder
        .clone()
        .unwrap_or_else(|| default_kdv_ladder(final_time));
    let norms = cfg.norms.clone().unwrap_or_else(|| vec![0]);
    if norms.is_empty() {
        return Err(Failure::config("at least one norm index is required"));
    }
    let scheme = cfg.scheme.unwrap_or(SplitScheme::Godunov);
    let jobs = resolve_jobs(cfg.jobs)?;
    let setup = kdv_setup(cfg)?;
    let oracle = match (cfg.oracle.unwrap_or(OracleKind::Reference), setup.soliton) {
        (OracleKind::Reference, _) => fine_reference_oracle(&setup.grid, &ladder, 1.0),
        (OracleKind::Soliton, Some(params)) => Oracle::ExactSoliton(params),
        (OracleKind::Soliton, None) => {
            return Err(Failure::config(
                "the soliton oracle needs --problem kdv-soliton",
            ));
        }
    };
    let problem = kdv_problem(&setup.id, setup.u0, setup.final_time);
    let reports = run_refinement_study_norms(&problem, scheme, &ladder, &norms, &oracle, jobs)?;

    let strict = cfg.strict.unwrap_or(false);
    let band = acceptance_band(scheme);
    let mut outside = Vec::new();
    for (report, &s) in reports.iter().zip(&norms) {
        let path = match (&cfg.out, norms.len()) {
            (Some(p), 1) => Some(p.clone()),
            (Some(p), _) => Some(per_norm_path(p, s)),
            (None, _) => None,
        };
        write_report(report, path.as_deref())?;
        for f in &report.failures {
            eprintln!("dt = {}: {}", f.dt, f.message);
        }
        match report.fit {
            Some(fit) => {
                eprintln!(
                    "{scheme} H{s}: slope {:.4} (band [{:.1}, {:.1}]), fit residual {:.2e}",
                    fit.slope, band.0, band.1, fit.residual
                );
                if !(band.0..=band.1).contains(&fit.slope) {
                    outside.push(format!("H{s} slope {:.4}", fit.slope));
                }
            }
            None => {
                return Err(Failure::numerical(format!(
                    "slope unavailable in H{s}: {} of {} rungs succeeded",
                    report.samples.len(),
                    ladder.len()
                )));
            }
        }
    }
    if strict && !outside.is_empty() {
        return Err(Failure::numerical(format!(
            "outside the acceptance band [{}, {}]: {}",
            band.0,
            band.1,
            outside.join(", ")
        )));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_kdv_solve(cfg: &RunConfig) -> Outcome {
    let final_time = positive("T", cfg.final_time.unwrap_or(1.0))?;
    let dt = positive("dt", cfg.dt.unwrap_or(final_time / 256.0))?;
    let every = cfg.snapshot_every.unwrap_or(32);
    if every == 0 {
        return Err(Failure::config("snapshot-every must be at least 1"));
    }
    let scheme = cfg.scheme.unwrap_or(SplitScheme::Strang);
    let time_grid = TimeGrid::new(final_time, dt)?;
    let setup = kdv_setup(cfg)?;
    let dir = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("splitkdv-out"));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))?;

    let flow_a = AiryFlow::new(setup.grid.clone());
    let flow_b = BurgersFlow::new(setup.grid.clone());
    let traj = run_splitting(&flow_a, &flow_b, setup.u0, &time_grid, scheme)?;

    let conserved_path = dir.join("conserved.csv");
    let mut text = String::from("t,mass,momentum,hamiltonian\n");
    for (t, u) in traj.states() {
        let q = conserved_quantities(u);
        text.push_str(&format!(
            "{t:.16e},{:.16e},{:.16e},{:.16e}\n",
            q.mass, q.momentum, q.hamiltonian
        ));
    }
    std::fs::write(&conserved_path, text).map_err(write_failed(&conserved_path))?;

    let last = time_grid.n_steps();
    for (n, (_, u)) in traj.states().iter().enumerate() {
        if n % every == 0 || n == last {
            let path = dir.join(format!("snapshot_{n:06}.csv"));
            let mut buf = Vec::new();
            u.write_csv(&mut buf)?;
            std::fs::write(&path, buf).map_err(write_failed(&path))?;
        }
    }
    if let Some(params) = setup.soliton {
        let exact = soliton(&setup.grid, &params, traj.final_time())?;
        let err = sobolev_norm(&traj.final_state().checked_sub(&exact)?, 0);
        eprintln!(
            "{scheme}, dt = {dt}: H0 distance to the exact soliton at t = {}: {err:.3e}",
            traj.final_time()
        );
    }
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_selftest(options: SelftestOptions) -> Outcome {
    let report = run_selftest(options);
    print!("{report}");
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_NUMERICAL))
    }
}
