use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twolayer::bounds::{bounds_report, check_sandwich, SCALAR_SLACK};
use twolayer::exact::{build_generator, solve, write_distribution_csv, write_metrics_csv, Projection};
use twolayer::model::{Policy, Preorder};
use twolayer::order::{check_massey, check_theorem1, dominates_integer, dominates_preorder};
use twolayer::reproduce::{figure, table1, table2, SweepSpec, Target};
use twolayer::sim::{
    replay, replicate_mean_total, run_named, simulate, simulate_perclass_coupling,
    simulate_training_coupling, CouplingOptions, NamedSchedule, ReplayRule, ReplaySchedule,
};
use twolayer::{Config, Error, SystemParams};

#[derive(Parser)]
#[command(name = "twolayer", version, about = "Two-layer loss systems with overflow routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact stationary analysis of one system.
    Solve(SolveArgs),
    /// Per-class and overall bounds, optionally checked against the exact solution.
    Bounds(BoundsArgs),
    /// Stochastic-ordering checks.
    Verify(VerifyArgs),
    /// Simulate one system from the empty state.
    Simulate(SimulateArgs),
    /// Run one of the two couplings.
    Couple(CoupleArgs),
    /// Replay a deterministic arrival schedule.
    Replay(ReplayArgs),
    /// Regenerate a published table or figure data set.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// System JSON: a file path, `-` for standard input, or inline JSON.
    #[arg(long)]
    system: String,
    /// Largest state space to enumerate.
    #[arg(long)]
    cap_states: Option<usize>,
    /// Residual tolerance of the stationary solve.
    #[arg(long)]
    tol: Option<f64>,
    /// Progress logs on standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "overflow")]
    policy: Policy,
    /// Directory receiving `distribution.csv` and `metrics.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    common: Common,
    /// Also solve exactly and fail if any bound is violated.
    #[arg(long)]
    check_exact: bool,
    /// Mean-number sweep, e.g. `mu2=0.25:4:16log` or `lambda_net=0.5:12:24steps`.
    #[arg(long)]
    sweep: Option<SweepSpec>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    check: VerifyCheck,
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Exhaustive scan of the layer-1 and total rate conditions.
    Theorem1(Comparison),
    /// Upper-set criterion on the two generators.
    Massey(MasseyArgs),
    /// Stochastic dominance of the two stationary laws.
    Dominates(DominatesArgs),
}

#[derive(Args)]
struct Comparison {
    #[command(flatten)]
    common: Common,
    /// Policy of the lower system.
    #[arg(long, default_value = "overflow")]
    policy: Policy,
    /// System expected to dominate; defaults to `--system`.
    #[arg(long)]
    against: Option<String>,
    /// Policy of the dominating system; defaults to `--policy`.
    #[arg(long)]
    against_policy: Option<Policy>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MasseyArgs {
    #[command(flatten)]
    comparison: Comparison,
    #[arg(long, value_enum, default_value = "layered")]
    preorder: PreorderArg,
}

#[derive(Args)]
struct DominatesArgs {
    #[command(flatten)]
    comparison: Comparison,
    /// `total`, `classK` (one-based) or `state` for the preorder on full states.
    #[arg(long, default_value = "total")]
    projection: String,
    #[arg(long, value_enum, default_value = "layered")]
    preorder: PreorderArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PreorderArg {
    Layered,
    Total,
}

impl From<PreorderArg> for Preorder {
    fn from(p: PreorderArg) -> Self {
        match p {
            PreorderArg::Layered => Preorder::Layered,
            PreorderArg::Total => Preorder::Total,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "overflow")]
    policy: Policy,
    #[arg(long, default_value_t = 1e4)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// With more than one replication, report time-average totals instead of a path.
    #[arg(long, default_value_t = 1)]
    reps: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CouplingArg {
    Training,
    PerClass,
}

#[derive(Args)]
struct CoupleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    kind: CouplingArg,
    /// Class of the coupling, one-based.
    #[arg(long, default_value_t = 1)]
    class: usize,
    #[arg(long, default_value_t = 1e4)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Built-in schedule: `example1` or `example2`.
    #[arg(long, conflicts_with_all = ["system", "schedule"])]
    named: Option<NamedSchedule>,
    #[arg(long, requires = "schedule")]
    system: Option<String>,
    /// CSV with header `time,class,duration`, classes one-based.
    #[arg(long, requires = "system")]
    schedule: Option<PathBuf>,
    #[arg(long, default_value = "overflow", conflicts_with = "single_class")]
    policy: Policy,
    /// Replay class K alone on `m_K + n` servers.
    #[arg(long)]
    single_class: Option<usize>,
    /// Path CSV, or a directory of path CSVs for a named schedule.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    target: Target,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a gnuplot script plotting the figure data.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    /// Allowed deviation from the published table values.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    verbose: bool,
}

/// A command's verdict once it ran without error.
enum Status {
    Ok,
    Failed,
}

type Outcome = twolayer::Result<Status>;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CouplingViolation { .. } | Error::Consistency(_) => 1,
        Error::Capacity { .. } | Error::Convergence { .. } | Error::Reducible(_) => 3,
        _ => 2,
    }
}

fn read_system(source: &str) -> twolayer::Result<SystemParams> {
    let text = if source == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        fs::read_to_string(source)
            .map_err(|e| Error::Validation(format!("cannot read system file {source}: {e}")))?
    };
    SystemParams::from_json(&text)
}

impl Common {
    fn config(&self) -> Config {
        let mut cfg = Config::default();
        if let Some(cap) = self.cap_states {
            cfg.state_cap = cap;
        }
        if let Some(tol) = self.tol {
            cfg.residual_tol = tol;
        }
        cfg
    }

    fn log(&self, msg: impl FnOnce() -> String) {
        if self.verbose {
            eprintln!("{}", msg());
        }
    }
}

/// Writes `bytes` to `out`, or to standard output without a path.
fn emit(out: Option<&Path>, bytes: &[u8]) -> twolayer::Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn one_based(class: usize, params: &SystemParams) -> twolayer::Result<usize> {
    if class == 0 || class > params.classes() {
        return Err(Error::Validation(format!(
            "class {class} outside 1..={}",
            params.classes()
        )));
    }
    Ok(class - 1)
}

fn cmd_solve(args: SolveArgs) -> Outcome {
    let cfg = args.common.config();
    let params = read_system(&args.common.system)?;
    let sol = solve(&params, args.policy, &cfg)?;
    args.common.log(|| {
        format!(
            "{} states, {:?}, residual {:e}",
            sol.distribution().len(),
            sol.stationary.method,
            sol.stationary.residual
        )
    });
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let mut dist = Vec::new();
        write_distribution_csv(&mut dist, sol.distribution())?;
        let mut met = Vec::new();
        write_metrics_csv(&mut met, &sol.metrics)?;
        fs::write(dir.join("distribution.csv"), dist)?;
        fs::write(dir.join("metrics.csv"), met)?;
    }
    let m = &sol.metrics;
    let mut text = format!(
        "a = {:.9}\ntheta = {:.9}\nb = {:.9}\n",
        m.mean, m.throughput, m.blocking
    );
    for (k, c) in m.per_class.iter().enumerate() {
        text += &format!(
            "class {}: a = {:.9}, theta = {:.9}, b = {:.9}\n",
            k + 1,
            c.mean,
            c.throughput,
            c.blocking
        );
    }
    emit(None, text.as_bytes())?;
    Ok(Status::Ok)
}

fn cmd_bounds(args: BoundsArgs) -> Outcome {
    let cfg = args.common.config();
    let params = read_system(&args.common.system)?;
    if let Some(sweep) = &args.sweep {
        let data = sweep.run(&params, &cfg)?;
        let mut buf = Vec::new();
        data.write_csv(&mut buf)?;
        let bad = data.unbracketed(SCALAR_SLACK);
        for p in &bad {
            eprintln!("{} = {}: exact {} outside [{}, {}]", data.x_label, p.x, p.exact, p.lower, p.upper);
        }
        emit(args.out.as_deref(), &buf)?;
        return Ok(if args.check_exact && !bad.is_empty() { Status::Failed } else { Status::Ok });
    }
    let report = bounds_report(&params, &cfg)?;
    let mut status = Status::Ok;
    if args.check_exact {
        let exact = solve(&params, Policy::Overflow, &cfg)?;
        let violations = check_sandwich(&report, &exact, &cfg);
        for v in &violations {
            eprintln!("{} = {} outside [{}, {}]", v.quantity, v.value, v.lower, v.upper);
        }
        if !violations.is_empty() {
            status = Status::Failed;
        }
        args.common.log(|| format!("exact mean number {:.6}", exact.metrics.mean));
    }
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    emit(args.out.as_deref(), json.as_bytes())?;
    Ok(status)
}

struct Pair {
    cfg: Config,
    x: SystemParams,
    x_policy: Policy,
    y: SystemParams,
    y_policy: Policy,
}

impl Comparison {
    fn resolve(&self) -> twolayer::Result<Pair> {
        let x = read_system(&self.common.system)?;
        let y = match &self.against {
            Some(source) => read_system(source)?,
            None => x.clone(),
        };
        Ok(Pair {
            cfg: self.common.config(),
            x,
            x_policy: self.policy,
            y,
            y_policy: self.against_policy.unwrap_or(self.policy),
        })
    }
}

fn verdict_status(verdict: &twolayer::order::ComparisonVerdict, out: Option<&Path>) -> Outcome {
    let mut json = verdict.to_json();
    json.push('\n');
    emit(out, json.as_bytes())?;
    Ok(if verdict.holds { Status::Ok } else { Status::Failed })
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    match args.check {
        VerifyCheck::Theorem1(c) => {
            let p = c.resolve()?;
            let v = check_theorem1(&p.x, p.x_policy, &p.y, p.y_policy, &p.cfg)?;
            verdict_status(&v, c.out.as_deref())
        }
        VerifyCheck::Massey(a) => {
            let c = &a.comparison;
            let p = c.resolve()?;
            let gx = build_generator(&p.x, p.x_policy, &p.cfg)?;
            let gy = build_generator(&p.y, p.y_policy, &p.cfg)?;
            let v = check_massey(&gx, &gy, a.preorder.into(), &p.cfg)?;
            verdict_status(&v, c.out.as_deref())
        }
        VerifyCheck::Dominates(a) => {
            let c = &a.comparison;
            let p = c.resolve()?;
            let sx = solve(&p.x, p.x_policy, &p.cfg)?;
            let sy = solve(&p.y, p.y_policy, &p.cfg)?;
            let (dx, dy) = (sx.distribution(), sy.distribution());
            let v = match a.projection.as_str() {
                "state" => dominates_preorder(dx, dy, a.preorder.into(), &p.cfg)?,
                "total" => dominates_integer(
                    &dx.marginal(Projection::Overall),
                    &dy.marginal(Projection::Overall),
                    p.cfg.dominance_slack,
                ),
                other => {
                    let k = other
                        .strip_prefix("class")
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| Error::Validation(format!("unknown projection {other:?}")))?;
                    let k = one_based(k, &p.x)?;
                    one_based(k + 1, &p.y)?;
                    dominates_integer(
                        &dx.marginal(Projection::Class(k)),
                        &dy.marginal(Projection::Class(k)),
                        p.cfg.dominance_slack,
                    )
                }
            };
            verdict_status(&v, c.out.as_deref())
        }
    }
}

fn cmd_simulate(args: SimulateArgs) -> Outcome {
    let params = read_system(&args.common.system)?;
    let mut buf = Vec::new();
    if args.reps > 1 {
        let r = replicate_mean_total(&params, args.policy, args.horizon, args.seed, args.reps)?;
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["rep", "mean_total"])?;
        for (i, v) in r.values.iter().enumerate() {
            w.write_record([i.to_string(), v.to_string()])?;
        }
        w.flush()?;
        drop(w);
        eprintln!("mean = {:.6}, standard error = {:.6}", r.mean, r.std_error);
    } else {
        let path = simulate(&params, args.policy, args.horizon, args.seed)?;
        args.common.log(|| format!("{} events", path.len()));
        path.write_csv(&mut buf)?;
    }
    emit(args.out.as_deref(), &buf)?;
    Ok(Status::Ok)
}

fn cmd_couple(args: CoupleArgs) -> Outcome {
    let params = read_system(&args.common.system)?;
    let class = one_based(args.class, &params)?;
    let mut opts = CouplingOptions::new(args.horizon, args.seed);
    opts.record_path = true;
    let run = match args.kind {
        CouplingArg::Training => simulate_training_coupling(&params, class, None, &opts)?,
        CouplingArg::PerClass => simulate_perclass_coupling(&params, class, None, &opts)?,
    };
    let mut buf = Vec::new();
    if let Some(path) = &run.path {
        path.write_csv(&mut buf)?;
    }
    emit(args.out.as_deref(), &buf)?;
    args.common.log(|| {
        format!(
            "{} events, mean x {:.6}, mean y {:.6}, min gap {}, 0 violations",
            run.events, run.mean_x, run.mean_y, run.min_gap
        )
    });
    Ok(Status::Ok)
}

fn cmd_replay(args: ReplayArgs) -> Outcome {
    if let Some(name) = args.named {
        let named = run_named(name)?;
        if let Some(dir) = &args.out {
            fs::create_dir_all(dir)?;
            for (label, path) in &named.paths {
                let mut buf = Vec::new();
                path.write_csv(&mut buf)?;
                fs::write(dir.join(format!("{label}.csv")), buf)?;
            }
        }
        let mut text = String::new();
        for (label, path) in &named.paths {
            text += &format!(
                "{label}({}) = {}\n",
                named.observe_at,
                path.state_at(named.observe_at)
            );
        }
        text += &named.summary();
        text.push('\n');
        emit(None, text.as_bytes())?;
        return Ok(Status::Ok);
    }
    let (Some(system), Some(schedule)) = (&args.system, &args.schedule) else {
        return Err(Error::Validation(
            "replay needs --named, or --system with --schedule".into(),
        ));
    };
    let params = read_system(system)?;
    let file = fs::File::open(schedule)
        .map_err(|e| Error::Validation(format!("cannot read schedule {}: {e}", schedule.display())))?;
    let schedule = ReplaySchedule::from_csv(file)?;
    let rule = match args.single_class {
        Some(k) => ReplayRule::SingleClass(one_based(k, &params)?),
        None => ReplayRule::Routing(args.policy),
    };
    let path = replay(&params, rule, &schedule)?;
    let mut buf = Vec::new();
    path.write_csv(&mut buf)?;
    emit(args.out.as_deref(), &buf)?;
    Ok(Status::Ok)
}

fn cmd_reproduce(args: ReproduceArgs) -> Outcome {
    let mut cfg = Config::default();
    if let Some(tol) = args.tol {
        cfg.golden_tol = tol;
    }
    let mut buf = Vec::new();
    let status = match args.target {
        Target::Table1 | Target::Table2 => {
            let report = match args.target {
                Target::Table1 => table1(&cfg)?,
                _ => table2(&cfg)?,
            };
            report.write_csv(&mut buf)?;
            if args.verbose {
                eprintln!("max residual {:e}", report.max_residual);
            }
            if report.passes() {
                Status::Ok
            } else {
                let mut diff = Vec::new();
                report.write_diff_csv(&mut diff)?;
                io::stderr().write_all(&diff)?;
                Status::Failed
            }
        }
        target => {
            let data = figure(target, &cfg)?;
            data.write_csv(&mut buf)?;
            if let Some(script) = &args.gnuplot {
                let data_path = args
                    .out
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| format!("{target}.csv"));
                fs::write(script, data.gnuplot_script(&data_path))?;
            }
            let bad = data.unbracketed(SCALAR_SLACK);
            for p in &bad {
                eprintln!(
                    "{} at {} = {}: exact {} outside [{}, {}]",
                    p.panel, data.x_label, p.x, p.exact, p.lower, p.upper
                );
            }
            if bad.is_empty() {
                Status::Ok
            } else {
                Status::Failed
            }
        }
    };
    emit(args.out.as_deref(), &buf)?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Couple(a) => cmd_couple(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
