//! System parameters: server configuration and per-class rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A two-layer loss system: `m[k]` dedicated servers per class at layer 1,
/// `n` shared servers at layer 2, Poisson arrivals at `lambda[k]` and
/// exponential services at `mu[k]` per customer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SystemParams {
    m: Vec<u32>,
    n: u32,
    lambda: Vec<f64>,
    mu: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    m: Vec<u32>,
    n: u32,
    lambda: Vec<Rate>,
    mu: Vec<Rate>,
}

/// A rate in a JSON document: a number, or a string holding a decimal or `p/q`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Rate {
    Number(f64),
    Text(String),
}

impl Rate {
    fn value(&self) -> Result<f64> {
        match self {
            Rate::Number(v) => Ok(*v),
            Rate::Text(s) => parse_rate(s),
        }
    }
}

/// Parses `"0.2"`, `"1e-3"` or `"1/5"`. Fractions are divided once, so the
/// result is the correctly rounded double of the rational.
pub fn parse_rate(text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || Error::Validation(format!("cannot parse rate {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            Ok(num / den)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

impl TryFrom<RawParams> for SystemParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        let lambda = raw.lambda.iter().map(Rate::value).collect::<Result<_>>()?;
        let mu = raw.mu.iter().map(Rate::value).collect::<Result<_>>()?;
        SystemParams::new(raw.m, raw.n, lambda, mu)
    }
}

impl SystemParams {
    pub fn new(m: Vec<u32>, n: u32, lambda: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let classes = m.len();
        if classes == 0 {
            return Err(Error::Validation("at least one class is required".into()));
        }
        if lambda.len() != classes || mu.len() != classes {
            return Err(Error::Validation(format!(
                "vector lengths disagree: m has {}, lambda {}, mu {}",
                classes,
                lambda.len(),
                mu.len()
            )));
        }
        for (name, rates) in [("lambda", &lambda), ("mu", &mu)] {
            if let Some((k, v)) = rates
                .iter()
                .enumerate()
                .find(|(_, v)| !(v.is_finite() && **v > 0.0))
            {
                return Err(Error::Validation(format!(
                    "{name}[{}] = {v} must be finite and strictly positive",
                    k + 1
                )));
            }
        }
        Ok(Self { m, n, lambda, mu })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawParams =
            serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        raw.try_into()
    }

    pub fn classes(&self) -> usize {
        self.m.len()
    }

    pub fn dedicated(&self) -> &[u32] {
        &self.m
    }

    pub fn shared(&self) -> u32 {
        self.n
    }

    pub fn arrival_rates(&self) -> &[f64] {
        &self.lambda
    }

    pub fn service_rates(&self) -> &[f64] {
        &self.mu
    }

    pub fn total_arrival_rate(&self) -> f64 {
        self.lambda.iter().sum()
    }

    /// Offered load `lambda[k] / mu[k]` of class `k`.
    pub fn load(&self, k: usize) -> f64 {
        self.lambda[k] / self.mu[k]
    }

    pub fn mu_min(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mu_max(&self) -> f64 {
        self.mu.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `mu_max / mu_min`, at least one.
    pub fn rate_ratio(&self) -> f64 {
        self.mu_max() / self.mu_min()
    }

    pub fn has_equal_service_rates(&self) -> bool {
        self.mu.iter().all(|&v| v == self.mu[0])
    }

    /// Same system with every service rate replaced by `rate`.
    pub fn with_uniform_service(&self, rate: f64) -> Result<Self> {
        Self::new(
            self.m.clone(),
            self.n,
            self.lambda.clone(),
            vec![rate; self.classes()],
        )
    }

    pub fn with_service_rates(&self, mu: Vec<f64>) -> Result<Self> {
        Self::new(self.m.clone(), self.n, self.lambda.clone(), mu)
    }

    pub fn with_arrival_rates(&self, lambda: Vec<f64>) -> Result<Self> {
        Self::new(self.m.clone(), self.n, lambda, self.mu.clone())
    }

    /// Same rates, server configuration `(m, n)`.
    pub fn with_servers(&self, m: Vec<u32>, n: u32) -> Result<Self> {
        Self::new(m, n, self.lambda.clone(), self.mu.clone())
    }

    /// Class `k` and class 0 exchanged.
    pub fn swap_classes(&self, k: usize) -> Self {
        let mut p = self.clone();
        p.m.swap(0, k);
        p.lambda.swap(0, k);
        p.mu.swap(0, k);
        p
    }
}
