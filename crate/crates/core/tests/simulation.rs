//! Simulated runs and couplings checked against exact laws.

use std::collections::BTreeMap;

use twolayer::bounds::{erlang_distribution, erlang_mean, ErlangSpec};
use twolayer::exact::solve;
use twolayer::model::{Policy, State};
use twolayer::sim::{
    chi_square_fit, law_of, replay, replicate_mean_total, run_named, simulate,
    simulate_perclass_coupling, simulate_training_coupling, summarize_run, stream, Aggregated,
    CouplingOptions, NamedSchedule, ReplayRule, ReplaySchedule, ReplicationSummary, ScheduledArrival,
};
use twolayer::{Config, Error, SystemParams};

fn sys(m: &[u32], n: u32, lambda: &[f64], mu: &[f64]) -> SystemParams {
    SystemParams::new(m.to_vec(), n, lambda.to_vec(), mu.to_vec()).unwrap()
}

fn aggregated_key(x: &State) -> Vec<u32> {
    let mut v = x.x1.clone();
    v.push(x.shared_total());
    v
}

fn full_key(x: &State) -> Vec<u32> {
    x.x1.iter().chain(&x.x2).copied().collect()
}

#[test]
fn table1_replicated_mean_within_three_standard_errors() {
    let p = sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]);
    let r = replicate_mean_total(&p, Policy::Overflow, 1e5, 2024, 20).unwrap();
    assert_eq!(r.values.len(), 20);
    assert!(r.covers(2.364269, 3.0), "mean {} se {}", r.mean, r.std_error);
}

#[test]
fn simulated_states_fit_the_exact_law() {
    let p = sys(&[2, 1], 2, &[1.5, 2.0], &[1.0, 0.5]);
    let exact = solve(&p, Policy::Overflow, &Config::default()).unwrap();
    let law = law_of(exact.distribution(), full_key);
    let run = summarize_run(&p, Policy::Overflow, 40_000.0, Some(20.0), &mut stream(9, 0)).unwrap();
    let samples: Vec<Vec<u32>> = run.snapshots.iter().map(full_key).collect();
    let fit = chi_square_fit(&samples, &law).unwrap();
    assert!(fit.passes(0.001), "{fit:?}");
    assert!((run.mean_total - exact.metrics.mean).abs() < 0.05);
}

#[test]
fn training_coupling_keeps_totals_ordered() {
    let cases = [
        (sys(&[2, 1], 1, &[1.5, 1.0], &[1.0, 1.0]), 0),
        (sys(&[1, 0], 2, &[1.0, 1.0], &[1.0, 1.0]), 0),
        (sys(&[1, 1, 2], 2, &[1.0, 0.5, 2.0], &[0.8, 0.8, 0.8]), 2),
    ];
    for (p, class) in cases {
        let mut opts = CouplingOptions::new(1e4, 7);
        opts.record_path = true;
        let run = simulate_training_coupling(&p, class, None, &opts).unwrap();
        assert!(run.events > 1000);
        assert!(run.min_gap >= 0);
        let path = run.path.unwrap();
        let k = p.classes();
        for e in &path.events {
            let (x1c, x2) = (e.x[class], e.x[k]);
            let (y1c, y2) = (e.y[class], e.y[k]);
            assert!(y1c <= x1c && y1c + y2 >= x1c + x2);
            assert!(e.y.iter().sum::<u32>() >= e.x.iter().sum::<u32>());
            assert!(!e.violation);
        }
    }
}

#[test]
fn training_coupling_of_relabeled_single_server() {
    let p = sys(&[1], 0, &[1.0], &[1.0]);
    let run = simulate_training_coupling(&p, 0, None, &CouplingOptions::new(1e4, 3)).unwrap();
    assert_eq!(run.mean_x, run.mean_y);
    assert_eq!(run.min_gap, 0);
}

#[test]
fn training_coupling_preconditions() {
    let opts = CouplingOptions::new(10.0, 1);
    let unequal = sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]);
    assert!(matches!(
        simulate_training_coupling(&unequal, 0, None, &opts),
        Err(Error::Validation(_))
    ));
    let equal = sys(&[1, 0], 2, &[1.0, 1.0], &[1.0, 1.0]);
    assert!(simulate_training_coupling(&equal, 1, None, &opts).is_err());
    let bad_start = (
        Aggregated { x1: vec![0, 0], x2: 0 },
        Aggregated { x1: vec![0, 0], x2: 2 },
    );
    assert!(simulate_training_coupling(&equal, 0, Some(bad_start), &opts).is_err());
    let good_start = (
        Aggregated { x1: vec![1, 0], x2: 1 },
        Aggregated { x1: vec![0, 0], x2: 3 },
    );
    assert!(simulate_training_coupling(&equal, 0, Some(good_start), &opts).is_ok());
}

#[test]
fn training_marginals_fit_their_systems() {
    let p = sys(&[2, 1], 1, &[1.5, 1.0], &[1.0, 1.0]);
    let cfg = Config::default();
    let mut opts = CouplingOptions::new(60_000.0, 11);
    opts.snapshot_spacing = Some(10.0);
    let run = simulate_training_coupling(&p, 0, None, &opts).unwrap();
    assert!(run.events >= 100_000);
    let law_x = law_of(solve(&p, Policy::Overflow, &cfg).unwrap().distribution(), aggregated_key);
    let moved = p.with_servers(vec![1, 1], 2).unwrap();
    let law_y = law_of(solve(&moved, Policy::Overflow, &cfg).unwrap().distribution(), aggregated_key);
    let fx = chi_square_fit(&run.x_snapshots, &law_x).unwrap();
    let fy = chi_square_fit(&run.y_snapshots, &law_y).unwrap();
    assert!(fx.passes(0.001), "{fx:?}");
    assert!(fy.passes(0.001), "{fy:?}");
}

#[test]
fn per_class_coupling_stays_below_the_erlang_system() {
    let cases = [
        (sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]), 0),
        (sys(&[5, 5], 5, &[7.5, 7.5], &[1.0, 1.3]), 1),
        (sys(&[2, 0, 1], 3, &[1.5, 1.0, 2.0], &[0.5, 2.0, 1.0]), 2),
    ];
    for (p, class) in cases {
        let mut opts = CouplingOptions::new(1e4, 5);
        opts.record_path = true;
        let run = simulate_perclass_coupling(&p, class, None, &opts).unwrap();
        assert!(run.min_gap >= 0);
        let cap = p.dedicated()[class] + p.shared();
        for e in &run.path.unwrap().events {
            let k = p.classes();
            assert!(e.x[class] + e.x[k + class] <= e.y[0] && e.y[0] <= cap);
        }
    }
}

#[test]
fn per_class_coupling_without_shared_servers_is_the_identity() {
    let p = sys(&[3], 0, &[2.0], &[1.0]);
    let mut opts = CouplingOptions::new(1e3, 8);
    opts.record_path = true;
    let run = simulate_perclass_coupling(&p, 0, None, &opts).unwrap();
    for e in &run.path.unwrap().events {
        assert_eq!(e.x[0], e.y[0]);
    }
}

#[test]
fn per_class_erlang_side_has_the_erlang_mean() {
    let p = sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]);
    let target = erlang_mean(ErlangSpec::new(3, 5.0).unwrap());
    let values = (0..20)
        .map(|rep| {
            let mut opts = CouplingOptions::new(2e4, 17);
            opts.stream = rep;
            simulate_perclass_coupling(&p, 0, None, &opts).unwrap().mean_y
        })
        .collect();
    let r = ReplicationSummary::from_values(values);
    assert!(r.covers(target, 3.0), "mean {} se {} target {target}", r.mean, r.std_error);
}

#[test]
fn per_class_marginals_fit_their_systems() {
    let p = sys(&[2, 0, 1], 3, &[1.5, 1.0, 2.0], &[0.5, 2.0, 1.0]);
    let cfg = Config::default();
    let class = 2;
    let mut opts = CouplingOptions::new(60_000.0, 21);
    opts.snapshot_spacing = Some(20.0);
    let run = simulate_perclass_coupling(&p, class, None, &opts).unwrap();
    assert!(run.events >= 100_000);
    let law_x = law_of(solve(&p, Policy::Overflow, &cfg).unwrap().distribution(), full_key);
    let erl = erlang_distribution(ErlangSpec::new(4, 2.0).unwrap());
    let law_y: BTreeMap<Vec<u32>, f64> =
        erl.probs().iter().enumerate().map(|(j, &q)| (vec![j as u32], q)).collect();
    let fx = chi_square_fit(&run.x_snapshots, &law_x).unwrap();
    let fy = chi_square_fit(&run.y_snapshots, &law_y).unwrap();
    assert!(fx.passes(0.001), "{fx:?}");
    assert!(fy.passes(0.001), "{fy:?}");
}

#[test]
fn replay_is_byte_identical() {
    let p = sys(&[1, 1], 2, &[1.0, 1.0], &[1.0, 1.0]);
    let schedule = ReplaySchedule::new(
        (0..50)
            .map(|i| ScheduledArrival {
                time: i as f64 * 0.7,
                class: i % 2,
                duration: 1.0 + (i % 5) as f64,
            })
            .collect(),
    )
    .unwrap();
    for policy in [Policy::Overflow, Policy::MaximumPacking] {
        let mut a = Vec::new();
        let mut b = Vec::new();
        replay(&p, ReplayRule::Routing(policy), &schedule).unwrap().write_csv(&mut a).unwrap();
        replay(&p, ReplayRule::Routing(policy), &schedule).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn named_replays() {
    let one = run_named(NamedSchedule::Example1).unwrap();
    assert_eq!(one.paths[0].1.state_at(6.0), &State::new(vec![1, 0], vec![0, 0]));
    assert_eq!(one.paths[1].1.state_at(6.0), &State::empty(2));
    let two = run_named(NamedSchedule::Example2).unwrap();
    assert_eq!(two.paths[0].1.state_at(3.0).x2[0], 1);
    assert_eq!(two.paths[1].1.state_at(3.0).total(), 0);
}

#[test]
fn simulated_paths_repeat_per_seed() {
    let p = sys(&[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]);
    let mut a = Vec::new();
    let mut b = Vec::new();
    simulate(&p, Policy::MaximumPacking, 500.0, 4).unwrap().write_csv(&mut a).unwrap();
    simulate(&p, Policy::MaximumPacking, 500.0, 4).unwrap().write_csv(&mut b).unwrap();
    assert_eq!(a, b);
}
