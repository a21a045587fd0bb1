#![allow(dead_code)]

use twolayer::SystemParams;

pub struct Case {
    pub name: &'static str,
    pub params: SystemParams,
}

fn case(name: &'static str, m: &[u32], n: u32, lambda: &[f64], mu: &[f64]) -> Case {
    Case {
        name,
        params: SystemParams::new(m.to_vec(), n, lambda.to_vec(), mu.to_vec()).unwrap(),
    }
}

/// Fifteen systems with one to three classes, `m_k <= 5`, `n <= 5`, equal
/// and spread service rates, all with at most 10^4 states.
pub fn matrix() -> Vec<Case> {
    vec![
        case("mm11", &[1], 0, &[1.0], &[1.0]),
        case("k1-small", &[2], 1, &[1.5], &[1.0]),
        case("k1-shared-only", &[0], 3, &[2.0], &[0.5]),
        case("k1-large", &[5], 5, &[7.0], &[1.3]),
        case("table1", &[1, 0], 2, &[1.0, 1.0], &[0.2, 10.0]),
        case("table2", &[0, 0], 3, &[1.0, 1.0], &[0.2, 10.0]),
        case("tiny-equal", &[0, 1], 1, &[1.0, 1.0], &[1.0, 1.0]),
        case("fig2", &[5, 5], 5, &[7.5, 7.5], &[1.0, 1.3]),
        case("k2-equal", &[2, 2], 2, &[3.0, 3.0], &[1.0, 1.0]),
        case("k2-skewed-equal", &[3, 1], 4, &[2.0, 0.5], &[1.0, 1.0]),
        case("k2-slow-class", &[2, 2], 2, &[1.0, 5.0], &[1.0, 0.25]),
        case("k3-equal", &[1, 1, 1], 2, &[1.0, 2.0, 0.5], &[1.0, 1.0, 1.0]),
        case("k3-mixed", &[2, 0, 1], 3, &[1.5, 1.0, 2.0], &[0.5, 2.0, 1.0]),
        case("k3-medium", &[3, 3, 3], 4, &[2.0, 3.0, 4.0], &[1.0, 1.5, 2.0]),
        case("k3-large-equal", &[5, 4, 3], 5, &[4.0, 3.0, 2.0], &[1.0, 1.0, 1.0]),
    ]
}
