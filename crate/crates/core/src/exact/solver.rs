use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::config::Config;
use crate::error::{Error, Result};

use super::{GeneratorMatrix, StateDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    SparseLu,
    PowerIteration { iterations: usize },
}

/// Stationary law of a generator together with how it was obtained.
#[derive(Debug, Clone)]
pub struct Stationary {
    pub distribution: StateDistribution,
    /// `max_j |(pi Q)_j|` of the returned vector.
    pub residual: f64,
    pub method: SolveMethod,
    /// Size of the recurrent class the solve was restricted to.
    pub recurrent_states: usize,
}

/// Ids of the unique closed communicating class, ascending.
fn recurrent_class(gen: &GeneratorMatrix) -> Result<Vec<usize>> {
    let mut graph = DiGraph::<(), ()>::with_capacity(gen.len(), 0);
    for _ in 0..gen.len() {
        graph.add_node(());
    }
    for i in 0..gen.len() {
        for &(j, _) in gen.row(i) {
            graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        }
    }
    let components = tarjan_scc(&graph);
    let mut component_of = vec![0usize; gen.len()];
    for (c, members) in components.iter().enumerate() {
        for node in members {
            component_of[node.index()] = c;
        }
    }
    let closed: Vec<usize> = (0..components.len())
        .filter(|&c| {
            components[c].iter().all(|node| {
                gen.row(node.index())
                    .iter()
                    .all(|&(j, _)| component_of[j] == c)
            })
        })
        .collect();
    if closed.len() != 1 {
        return Err(Error::Reducible(closed.len()));
    }
    let mut ids: Vec<usize> = components[closed[0]].iter().map(|n| n.index()).collect();
    ids.sort_unstable();
    Ok(ids)
}

/// Solves `pi Q = 0, sum pi = 1` on the class by sparse LU, with the last
/// balance equation replaced by the normalization.
fn solve_direct(gen: &GeneratorMatrix, class: &[usize], local: &[usize]) -> Result<Vec<f64>> {
    let size = class.len();
    let last = size - 1;
    let mut triplets = Vec::new();
    for (i_local, &i) in class.iter().enumerate() {
        for &(j, rate) in gen.row(i) {
            let j_local = local[j];
            if j_local != last {
                triplets.push(Triplet::new(j_local, i_local, rate));
            }
        }
        if i_local != last {
            triplets.push(Triplet::new(i_local, i_local, -gen.exit_rate(i)));
        }
        triplets.push(Triplet::new(last, i_local, 1.0));
    }
    let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(size, size, &triplets)
        .map_err(|e| Error::Consistency(format!("sparse assembly failed: {e:?}")))?;
    let lu = matrix
        .sp_lu()
        .map_err(|e| Error::Consistency(format!("sparse LU failed: {e:?}")))?;
    let mut rhs = Mat::<f64>::zeros(size, 1);
    rhs[(last, 0)] = 1.0;
    lu.solve_in_place(rhs.as_mut());
    Ok((0..size).map(|i| rhs[(i, 0)]).collect())
}

fn clean(pi: &mut [f64]) {
    for p in pi.iter_mut() {
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    for p in pi.iter_mut() {
        *p /= total;
    }
}

/// Uniformized power iteration `pi <- pi (I + Q / L)` with `L` slightly above
/// the largest exit rate, stopping once the residual is below tolerance.
fn power_iterate(
    gen: &GeneratorMatrix,
    start: Vec<f64>,
    config: &Config,
) -> Result<(Vec<f64>, usize)> {
    const CHECK_EVERY: usize = 50;
    let uniform = 1.05
        * (0..gen.len())
            .map(|i| gen.exit_rate(i))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
    let mut pi = start;
    let mut next = vec![0.0; gen.len()];
    let mut residual = gen.residual(&pi);
    let mut iterations = 0;
    while residual > config.residual_tol {
        if iterations >= config.max_iterations {
            return Err(Error::Convergence {
                residual,
                iterations,
            });
        }
        for _ in 0..CHECK_EVERY {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (i, &p) in pi.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let mut out = 0.0;
                for &(j, r) in gen.row(i) {
                    next[j] += p * r / uniform;
                    out += r;
                }
                next[i] += p * (1.0 - out / uniform);
            }
            std::mem::swap(&mut pi, &mut next);
        }
        iterations += CHECK_EVERY;
        clean(&mut pi);
        residual = gen.residual(&pi);
    }
    Ok((pi, iterations))
}

/// Stationary distribution of `gen`, supported on its recurrent class.
///
/// Transient states get probability exactly zero. Spaces up to
/// `config.direct_solve_limit` states use sparse LU, larger ones the
/// uniformized power iteration; an LU answer that misses the residual
/// tolerance is polished by the iteration.
pub fn stationary(gen: &GeneratorMatrix, config: &Config) -> Result<Stationary> {
    let class = recurrent_class(gen)?;
    let mut local = vec![usize::MAX; gen.len()];
    for (i_local, &i) in class.iter().enumerate() {
        local[i] = i_local;
    }
    let spread = |values: &[f64]| {
        let mut full = vec![0.0; gen.len()];
        for (&i, &v) in class.iter().zip(values) {
            full[i] = v;
        }
        full
    };

    let (pi, method) = if class.len() <= config.direct_solve_limit {
        let mut pi = spread(&solve_direct(gen, &class, &local)?);
        clean(&mut pi);
        if gen.residual(&pi) <= config.residual_tol {
            (pi, SolveMethod::SparseLu)
        } else {
            let (pi, iterations) = power_iterate(gen, pi, config)?;
            (pi, SolveMethod::PowerIteration { iterations })
        }
    } else {
        let start = spread(&vec![1.0 / class.len() as f64; class.len()]);
        let (pi, iterations) = power_iterate(gen, start, config)?;
        (pi, SolveMethod::PowerIteration { iterations })
    };

    let residual = gen.residual(&pi);
    Ok(Stationary {
        distribution: StateDistribution::new(gen.space().states().to_vec(), pi),
        residual,
        method,
        recurrent_states: class.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::build_generator;
    use crate::model::{in_smp, Policy};
    use crate::params::SystemParams;

    #[test]
    fn symmetric_two_state_chain() {
        let p = SystemParams::new(vec![1], 0, vec![1.0], vec![1.0]).unwrap();
        let g = build_generator(&p, Policy::Overflow, &Config::default()).unwrap();
        let s = stationary(&g, &Config::default()).unwrap();
        assert_eq!(s.method, SolveMethod::SparseLu);
        for &p in s.distribution.probs() {
            assert!((p - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn packing_puts_no_mass_on_transient_states() {
        let p = SystemParams::new(vec![2, 1], 2, vec![1.0, 2.0], vec![1.0, 0.5]).unwrap();
        let g = build_generator(&p, Policy::MaximumPacking, &Config::default()).unwrap();
        let s = stationary(&g, &Config::default()).unwrap();
        for (x, prob) in s.distribution.iter() {
            if !in_smp(&p, x) {
                assert_eq!(prob, 0.0, "{x}");
            }
        }
        assert!(s.recurrent_states < g.len());
        assert!(s.residual <= 1e-10);
    }

    #[test]
    fn power_iteration_agrees_with_lu() {
        let p = SystemParams::new(vec![1, 0], 2, vec![1.0, 1.0], vec![0.2, 10.0]).unwrap();
        let g = build_generator(&p, Policy::Overflow, &Config::default()).unwrap();
        let direct = stationary(&g, &Config::default()).unwrap();
        let forced = Config {
            direct_solve_limit: 0,
            ..Config::default()
        };
        let iterative = stationary(&g, &forced).unwrap();
        assert!(matches!(iterative.method, SolveMethod::PowerIteration { .. }));
        assert!(iterative.residual <= 1e-10);
        assert!(direct.distribution.tv_distance(&iterative.distribution) < 1e-8);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let p = SystemParams::new(vec![3, 3], 3, vec![2.0, 2.0], vec![0.01, 9.0]).unwrap();
        let g = build_generator(&p, Policy::Overflow, &Config::default()).unwrap();
        let starved = Config {
            direct_solve_limit: 0,
            max_iterations: 50,
            ..Config::default()
        };
        assert!(matches!(
            stationary(&g, &starved),
            Err(Error::Convergence { .. })
        ));
    }
}
