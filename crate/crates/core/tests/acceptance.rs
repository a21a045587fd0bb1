//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use twolayer::bounds::{bounds_report, check_sandwich, erlang_distribution, mp_stationary, ErlangSpec};
use twolayer::exact::{build_generator, solve};
use twolayer::model::{Policy, Preorder, State};
use twolayer::order::{check_massey, check_theorem1, Witness};
use twolayer::reproduce::{figure, table1, table2, Target, TableReport};
use twolayer::sim::{
    chi_square_fit, law_of, run_named, simulate_perclass_coupling, simulate_training_coupling,
    CouplingOptions, CouplingRun, NamedSchedule,
};
use twolayer::{Config, SystemParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Config) -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn sys(m: &[u32], n: u32, lambda: &[f64], mu: &[f64]) -> SystemParams {
    SystemParams::new(m.to_vec(), n, lambda.to_vec(), mu.to_vec()).unwrap()
}

fn golden(report: &TableReport, elapsed: Duration) -> Outcome {
    let worst = report.cells.iter().map(|c| c.diff()).fold(0.0, f64::max);
    if let Some(c) = report.mismatches().first() {
        return Err(format!(
            "{} {}: expected {}, computed {:.9}",
            c.row, c.column, c.expected, c.computed
        ));
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("12 cells, max diff {worst:.2e}, {elapsed:?}"))
}

fn cell(report: &TableReport, row: &str) -> f64 {
    report
        .cells
        .iter()
        .find(|c| c.row == row && c.column == "total")
        .map(|c| c.computed)
        .expect("row present")
}

fn criterion_1(cfg: &Config) -> Outcome {
    let (report, elapsed) = timed(|| table1(cfg));
    golden(&report.map_err(|e| e.to_string())?, elapsed)
}

fn criterion_2(cfg: &Config) -> Outcome {
    let (report, elapsed) = timed(|| table2(cfg));
    golden(&report.map_err(|e| e.to_string())?, elapsed)
}

fn criterion_3(cfg: &Config) -> Outcome {
    let t1 = table1(cfg).map_err(|e| e.to_string())?;
    let t2 = table2(cfg).map_err(|e| e.to_string())?;
    let (a, a_mp) = (cell(&t1, "a(m,n,lambda,mu)"), cell(&t1, "a_mp(m,n,lambda,mu)"));
    let (b, b_moved) = (cell(&t2, "a(m,n,lambda,mu)"), cell(&t2, "a(m',n',lambda,mu)"));
    ensure(a > a_mp, || format!("a = {a} not above a_mp = {a_mp}"))?;
    ensure(b < b_moved, || format!("a(m,n) = {b} not below a(m',n') = {b_moved}"))?;
    Ok(format!("{a:.9} > {a_mp:.9}; {b:.9} < {b_moved:.9}"))
}

/// Sandwich violations on the matrix, split into per-class and overall ones.
fn sandwich(cfg: &Config, per_class: bool) -> Outcome {
    let cases = common::matrix();
    let mut checked = 0;
    for case in &cases {
        let report = bounds_report(&case.params, cfg).map_err(|e| e.to_string())?;
        let exact = solve(&case.params, Policy::Overflow, cfg).map_err(|e| e.to_string())?;
        let bad: Vec<_> = check_sandwich(&report, &exact, cfg)
            .into_iter()
            .filter(|v| v.quantity.starts_with("class ") == per_class)
            .collect();
        if let Some(v) = bad.first() {
            return Err(format!(
                "{}: {} = {} outside [{}, {}]",
                case.name, v.quantity, v.value, v.lower, v.upper
            ));
        }
        checked += 1;
    }
    Ok(format!("{checked} systems"))
}

fn criterion_4(cfg: &Config) -> Outcome {
    sandwich(cfg, true)
}

fn criterion_5(cfg: &Config) -> Outcome {
    sandwich(cfg, false)
}

fn criterion_6(cfg: &Config) -> Outcome {
    let mut worst: f64 = 0.0;
    for case in common::matrix() {
        let product = mp_stationary(&case.params, cfg.config_cap).map_err(|e| e.to_string())?;
        let generic = solve(&case.params, Policy::MaximumPacking, cfg).map_err(|e| e.to_string())?;
        let tv = product.tv_distance(generic.distribution());
        ensure(tv <= 1e-9, || format!("{}: TV {tv:.3e}", case.name))?;
        worst = worst.max(tv);
    }
    Ok(format!("max TV {worst:.2e}"))
}

fn criterion_7(cfg: &Config) -> Outcome {
    let run = |e: twolayer::Error| e.to_string();
    let mut massey_systems = 0;
    for case in common::matrix() {
        let p = &case.params;
        let equal = p.with_uniform_service(p.mu_min()).map_err(run)?;
        let slow = p.with_uniform_service(p.mu_min()).map_err(run)?;
        let fast = p.with_uniform_service(p.mu_max()).map_err(run)?;
        let comparisons = [
            ("overflow vs packing", &equal, Policy::Overflow, &equal, Policy::MaximumPacking),
            ("mu vs mu_min", p, Policy::Overflow, &slow, Policy::Overflow),
            ("mu_max vs mu", &fast, Policy::Overflow, p, Policy::Overflow),
        ];
        for (label, xp, xpol, yp, ypol) in comparisons {
            let v = check_theorem1(xp, xpol, yp, ypol, cfg).map_err(run)?;
            ensure(v.holds, || {
                format!("{} {label}: {} rate violations", case.name, v.violations.len())
            })?;
            let gx = build_generator(xp, xpol, cfg).map_err(run)?;
            if gx.len() > cfg.upper_set_cap {
                continue;
            }
            let gy = build_generator(yp, ypol, cfg).map_err(run)?;
            let v = check_massey(&gx, &gy, Preorder::Layered, cfg).map_err(run)?;
            ensure(v.holds, || format!("{} {label}: Massey fails", case.name))?;
            massey_systems += 1;
        }
    }
    // Same total, different layer-1 content: total-only ordering is not
    // preserved by the overflow generator.
    let p = sys(&[1, 0], 2, &[1.0, 1.0], &[1.0, 1.0]);
    let g = build_generator(&p, Policy::Overflow, cfg).map_err(run)?;
    let v = check_massey(&g, &g, Preorder::Total, cfg).map_err(run)?;
    let x = Witness::State(State::new(vec![1, 0], vec![1, 0]));
    let y = Witness::State(State::new(vec![0, 0], vec![2, 0]));
    ensure(!v.holds, || "total preorder unexpectedly holds".into())?;
    ensure(v.violations.iter().any(|w| w.x == x && w.y == y), || {
        "expected witness pair not reported".into()
    })?;
    Ok(format!(
        "rate conditions on 15 systems, Massey on {} systems, total preorder rejected",
        massey_systems / 3
    ))
}

fn aggregated_key(x: &State) -> Vec<u32> {
    let mut v = x.x1.clone();
    v.push(x.shared_total());
    v
}

fn full_key(x: &State) -> Vec<u32> {
    x.x1.iter().chain(&x.x2).copied().collect()
}

fn fit(
    label: &str,
    run: &CouplingRun,
    law_x: &BTreeMap<Vec<u32>, f64>,
    law_y: &BTreeMap<Vec<u32>, f64>,
) -> Result<(), String> {
    ensure(run.events >= 100_000, || format!("{label}: only {} events", run.events))?;
    ensure(run.min_gap >= 0, || format!("{label}: dominance broken"))?;
    for (side, samples, law) in [("x", &run.x_snapshots, law_x), ("y", &run.y_snapshots, law_y)] {
        let g = chi_square_fit(samples, law).map_err(|e| e.to_string())?;
        ensure(g.passes(0.001), || {
            format!("{label} {side}: chi-square p = {:.2e} ({} bins)", g.p_value, g.bins)
        })?;
    }
    Ok(())
}

fn criterion_8(cfg: &Config) -> Outcome {
    let run = |e: twolayer::Error| e.to_string();
    let training = [
        ("training [2,1],1", sys(&[2, 1], 1, &[1.5, 1.0], &[1.0, 1.0]), 0),
        ("training [1,0],2", sys(&[1, 0], 2, &[1.0, 1.0], &[1.0, 1.0]), 0),
        ("training [1,1,2],2", sys(&[1, 1, 2], 2, &[1.0, 0.5, 2.0], &[0.8, 0.8, 0.8]), 2),
    ];
    let mut events = 0;
    for (i, (label, p, class)) in training.iter().enumerate() {
        let mut opts = CouplingOptions::new(60_000.0, 100 + i as u64);
        opts.snapshot_spacing = Some(10.0 / p.mu_min());
        let r = simulate_training_coupling(p, *class, None, &opts).map_err(run)?;
        let mut m = p.dedicated().to_vec();
        m[*class] -= 1;
        let moved = p.with_servers(m, p.shared() + 1).map_err(run)?;
        let law_x = law_of(solve(p, Policy::Overflow, cfg).map_err(run)?.distribution(), aggregated_key);
        let law_y = law_of(solve(&moved, Policy::Overflow, cfg).map_err(run)?.distribution(), aggregated_key);
        fit(label, &r, &law_x, &law_y)?;
        events += r.events;
    }
    let per_class = [
        ("per-class table1", sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]), 0),
        ("per-class fig2", sys(&[5, 5], 5, &[7.5, 7.5], &[1.0, 1.3]), 1),
        ("per-class k3-mixed", sys(&[2, 0, 1], 3, &[1.5, 1.0, 2.0], &[0.5, 2.0, 1.0]), 2),
    ];
    for (i, (label, p, class)) in per_class.iter().enumerate() {
        let mut opts = CouplingOptions::new(60_000.0, 200 + i as u64);
        opts.snapshot_spacing = Some(10.0 / p.mu_min());
        let r = simulate_perclass_coupling(p, *class, None, &opts).map_err(run)?;
        let spec = ErlangSpec::new(
            p.dedicated()[*class] + p.shared(),
            p.arrival_rates()[*class] / p.service_rates()[*class],
        )
        .map_err(run)?;
        let law_y = erlang_distribution(spec)
            .probs()
            .iter()
            .enumerate()
            .map(|(j, &q)| (vec![j as u32], q))
            .collect();
        let law_x = law_of(solve(p, Policy::Overflow, cfg).map_err(run)?.distribution(), full_key);
        fit(label, &r, &law_x, &law_y)?;
        events += r.events;
    }
    Ok(format!("6 coupled runs, {events} events, no violations"))
}

fn criterion_9(_: &Config) -> Outcome {
    let one = run_named(NamedSchedule::Example1).map_err(|e| e.to_string())?;
    let at6: Vec<&State> = one.paths.iter().map(|(_, p)| p.state_at(6.0)).collect();
    ensure(*at6[0] == State::new(vec![1, 0], vec![0, 0]), || format!("X(6) = {}", at6[0]))?;
    ensure(*at6[1] == State::empty(2), || format!("Xmp(6) = {}", at6[1]))?;
    let two = run_named(NamedSchedule::Example2).map_err(|e| e.to_string())?;
    let x = two.paths[0].1.state_at(3.0);
    let z = two.paths[1].1.state_at(3.0);
    ensure(x.x2[0] == 1, || format!("X(3) = {x}"))?;
    ensure(z.total() == 0, || format!("Z(3) = {z}"))?;
    Ok(format!("{}; {}", one.summary(), two.summary()))
}

fn criterion_10(cfg: &Config) -> Outcome {
    let mut parts = Vec::new();
    for target in [Target::Fig2, Target::Fig3, Target::Fig4] {
        let (data, elapsed) = timed(|| figure(target, cfg));
        let data = data.map_err(|e| e.to_string())?;
        let bad = data.unbracketed(twolayer::bounds::SCALAR_SLACK);
        if let Some(p) = bad.first() {
            return Err(format!(
                "{target} {} at {}: {} outside [{}, {}]",
                p.panel, p.x, p.exact, p.lower, p.upper
            ));
        }
        ensure(elapsed < Duration::from_secs(30), || format!("{target} took {elapsed:?}"))?;
        parts.push(format!("{target} {} points {elapsed:.1?}", data.points.len()));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let cfg = Config::default();
    let criteria: [Criterion; 10] = [
        ("table 1 golden values", criterion_1),
        ("table 2 golden values", criterion_2),
        ("counterexample inequalities", criterion_3),
        ("per-class sandwich", criterion_4),
        ("overall sandwich", criterion_5),
        ("product form", criterion_6),
        ("ordering mechanization", criterion_7),
        ("coupling soundness", criterion_8),
        ("example replays", criterion_9),
        ("figure sweeps", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| check(&cfg)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
