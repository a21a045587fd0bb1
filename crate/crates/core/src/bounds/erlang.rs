use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Pmf;

/// The Erlang loss law `Erl(s, rho)`: Poisson(`rho`) truncated to `{0..s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErlangSpec {
    pub servers: u32,
    pub load: f64,
}

impl ErlangSpec {
    pub fn new(servers: u32, load: f64) -> Result<Self> {
        if !(load.is_finite() && load > 0.0) {
            return Err(Error::Validation(format!(
                "offered load {load} must be finite and positive"
            )));
        }
        Ok(Self { servers, load })
    }
}

/// Truncated-Poisson probabilities by the ratio recursion
/// `w_i = w_{i-1} rho / i`, rescaling whenever the weights grow large.
pub fn erlang_distribution(spec: ErlangSpec) -> Pmf {
    const RESCALE_AT: f64 = 1e250;
    let mut weights = Vec::with_capacity(spec.servers as usize + 1);
    weights.push(1.0);
    let mut w = 1.0;
    for i in 1..=spec.servers {
        w *= spec.load / i as f64;
        if w > RESCALE_AT {
            weights.iter_mut().for_each(|v| *v /= w);
            w = 1.0;
        }
        weights.push(w);
    }
    Pmf::from_weights(weights)
}

/// Erlang B, `P(Erl(s, rho) = s)`, by `B(j) = rho B(j-1) / (j + rho B(j-1))`.
pub fn erlang_b(spec: ErlangSpec) -> f64 {
    (1..=spec.servers).fold(1.0, |b, j| {
        let rb = spec.load * b;
        rb / (j as f64 + rb)
    })
}

/// Mean of `Erl(s, rho)`, which equals the carried load `rho (1 - B)`.
pub fn erlang_mean(spec: ErlangSpec) -> f64 {
    spec.load * (1.0 - erlang_b(spec))
}
