//! The published tables and figure data: two tables of mean occupancies
//! diffed against their printed values, and three figure sweeps checked by
//! the requirement that every exact curve lies between its bounds.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{erlang_distribution, overall_bounds, ErlangSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::{solve, Pmf, Projection};
use crate::model::Policy;
use crate::params::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Table1,
    Table2,
    Fig2,
    Fig3,
    Fig4,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Table1,
        Target::Table2,
        Target::Fig2,
        Target::Fig3,
        Target::Fig4,
    ];
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Fig2 => "fig2",
            Target::Fig3 => "fig3",
            Target::Fig4 => "fig4",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| Error::Validation(format!("unknown target {s:?}")))
    }
}

/// The two-class system both tables are built on: `lambda = (1, 1)`,
/// `mu = (1/5, 10)`.
pub fn example_rates(m: Vec<u32>, n: u32) -> SystemParams {
    SystemParams::new(m, n, vec![1.0, 1.0], vec![0.2, 10.0]).expect("valid example system")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenCell {
    pub row: &'static str,
    pub column: &'static str,
    pub expected: f64,
    pub computed: f64,
}

impl GoldenCell {
    pub fn diff(&self) -> f64 {
        (self.computed - self.expected).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub target: String,
    pub tolerance: f64,
    pub cells: Vec<GoldenCell>,
    /// Largest generator residual among the solves behind the table.
    pub max_residual: f64,
}

impl TableReport {
    pub fn mismatches(&self) -> Vec<&GoldenCell> {
        self.cells
            .iter()
            .filter(|c| c.diff() > self.tolerance)
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.mismatches().is_empty()
    }

    /// Computed grid with one row per table row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "class1", "class2", "total"])?;
        for row in self.cells.chunks(3) {
            let mut rec = vec![row[0].row.to_string()];
            rec.extend(row.iter().map(|c| format!("{:.9}", c.computed)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// `row,column,expected,computed,abs_diff,ok` for every cell.
    pub fn write_diff_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "column", "expected", "computed", "abs_diff", "ok"])?;
        for c in &self.cells {
            w.write_record([
                c.row.to_string(),
                c.column.to_string(),
                format!("{:.6}", c.expected),
                format!("{:.9}", c.computed),
                format!("{:.3e}", c.diff()),
                (c.diff() <= self.tolerance).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

type GoldenRow = (&'static str, SystemParams, Policy, [f64; 3]);

fn table(target: Target, rows: Vec<GoldenRow>, config: &Config) -> Result<TableReport> {
    let solved = rows
        .par_iter()
        .map(|(_, p, policy, _)| solve(p, *policy, config))
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    let mut max_residual: f64 = 0.0;
    for ((row, _, _, golden), s) in rows.iter().zip(&solved) {
        max_residual = max_residual.max(s.stationary.residual);
        let m = &s.metrics;
        let computed = [m.per_class[0].mean, m.per_class[1].mean, m.mean];
        for (i, column) in ["class1", "class2", "total"].into_iter().enumerate() {
            cells.push(GoldenCell {
                row,
                column,
                expected: golden[i],
                computed: computed[i],
            });
        }
    }
    Ok(TableReport {
        target: target.to_string(),
        tolerance: config.golden_tol,
        cells,
        max_residual,
    })
}

/// With and without maximum packing, at `mu` and at `mu_min`, for
/// `m = (1, 0)`, `n = 2`.
pub fn table1(config: &Config) -> Result<TableReport> {
    let p = example_rates(vec![1, 0], 2);
    let slow = p.with_uniform_service(p.mu_min())?;
    table(
        Target::Table1,
        vec![
            ("a(m,n,lambda,mu)", p.clone(), Policy::Overflow, [2.325657, 0.038612, 2.364269]),
            ("a_mp(m,n,lambda,mu)", p, Policy::MaximumPacking, [2.317818, 0.046344, 2.364162]),
            ("a(m,n,lambda,mu_min)", slow.clone(), Policy::Overflow, [1.615744, 0.997537, 2.613281]),
            ("a_mp(m,n,lambda,mu_min)", slow, Policy::MaximumPacking, [1.474617, 1.172442, 2.647059]),
        ],
        config,
    )
}

/// `m = (0, 0), n = 3` against `m' = (1, 0), n' = 2`, at `mu` and at `mu_max`.
pub fn table2(config: &Config) -> Result<TableReport> {
    let p = example_rates(vec![0, 0], 3);
    let q = example_rates(vec![1, 0], 2);
    let pf = p.with_uniform_service(p.mu_max())?;
    let qf = q.with_uniform_service(q.mu_max())?;
    table(
        Target::Table2,
        vec![
            ("a(m,n,lambda,mu)", p, Policy::Overflow, [2.317808, 0.046356, 2.364164]),
            ("a(m',n',lambda,mu)", q, Policy::Overflow, [2.325657, 0.038612, 2.364269]),
            ("a(m,n,lambda,mu_max)", pf, Policy::Overflow, [0.099891, 0.099891, 0.199782]),
            ("a(m',n',lambda,mu_max)", qf, Policy::Overflow, [0.099906, 0.099453, 0.199359]),
        ],
        config,
    )
}

/// One point of a sweep: a bounded quantity and its exact value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub panel: String,
    pub x: f64,
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

impl SweepPoint {
    pub fn bracketed(&self, slack: f64) -> bool {
        self.lower <= self.exact + slack && self.exact <= self.upper + slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub target: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<SweepPoint>,
}

impl FigureData {
    pub fn unbracketed(&self, slack: f64) -> Vec<&SweepPoint> {
        self.points.iter().filter(|p| !p.bracketed(slack)).collect()
    }

    pub fn panels(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for p in &self.points {
            if !out.contains(&p.panel.as_str()) {
                out.push(&p.panel);
            }
        }
        out
    }

    /// `panel,<x_label>,lower,exact,upper`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["panel", &self.x_label, "lower", "exact", "upper"])?;
        for p in &self.points {
            w.write_record([
                p.panel.clone(),
                p.x.to_string(),
                format!("{:.12e}", p.lower),
                format!("{:.12e}", p.exact),
                format!("{:.12e}", p.upper),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// A gnuplot script plotting each panel from the CSV at `data_path`.
    pub fn gnuplot_script(&self, data_path: &str) -> String {
        let mut s = String::new();
        s.push_str("set datafile separator ','\n");
        s.push_str(&format!("set xlabel '{}'\nset ylabel '{}'\n", self.x_label, self.y_label));
        let panels = self.panels();
        s.push_str(&format!("set multiplot layout 1,{}\n", panels.len()));
        for panel in panels {
            s.push_str(&format!("set title '{panel}'\n"));
            let sel = format!("(strcol(1) eq '{panel}' ? $2 : 1/0)");
            s.push_str(&format!(
                "plot '{data_path}' using {sel}:4 with lines title 'exact', \\\n     '' using {sel}:3 with lines dt 3 title 'lower', \\\n     '' using {sel}:5 with lines dt 3 title 'upper'\n"
            ));
        }
        s.push_str("unset multiplot\n");
        s
    }
}

/// Exact mean number in system against the overall bounds for each system.
pub fn mean_number_sweep(
    systems: &[(String, f64, SystemParams)],
    config: &Config,
) -> Result<Vec<SweepPoint>> {
    systems
        .par_iter()
        .map(|(panel, x, p)| {
            let bounds = overall_bounds(p, config)?;
            let exact = solve(p, Policy::Overflow, config)?;
            Ok(SweepPoint {
                panel: panel.clone(),
                x: *x,
                lower: bounds.mean_number.lower,
                exact: exact.metrics.mean,
                upper: bounds.mean_number.upper,
            })
        })
        .collect()
}

/// Per-class occupancy CCDFs for `m = (5, 5)`, `n = 5`, `lambda = (7.5, 7.5)`,
/// `mu = (1, 1.3)`, against the two Erlang envelopes. Panels are `class1`
/// and `class2`; `x` is `j` in `P(X > j)`.
pub fn fig2(config: &Config) -> Result<FigureData> {
    let p = SystemParams::new(vec![5, 5], 5, vec![7.5, 7.5], vec![1.0, 1.3])?;
    let exact = solve(&p, Policy::Overflow, config)?;
    let mut points = Vec::new();
    for k in 0..p.classes() {
        let marginal: Pmf = exact.distribution().marginal(Projection::Class(k));
        let m = p.dedicated()[k];
        let lower = erlang_distribution(ErlangSpec::new(m, p.load(k))?);
        let upper = erlang_distribution(ErlangSpec::new(m + p.shared(), p.load(k))?);
        let len = (m + p.shared()) as usize + 1;
        let (e, l, u) = (marginal.ccdf_curve(len), lower.ccdf_curve(len), upper.ccdf_curve(len));
        for j in 0..len {
            points.push(SweepPoint {
                panel: format!("class{}", k + 1),
                x: j as f64,
                lower: l[j],
                exact: e[j],
                upper: u[j],
            });
        }
    }
    Ok(FigureData {
        target: Target::Fig2.to_string(),
        x_label: "j".into(),
        y_label: "P(X > j)".into(),
        points,
    })
}

/// Net arrival rates `0.5, 1, ..., 12`.
pub fn fig3_grid() -> Vec<f64> {
    (1..=24).map(|i| 0.5 * i as f64).collect()
}

/// Mean number against `lambda_net` for `m = (2, 2)`, `n = 2`, equal class
/// loads, with `mu = (1, 1)` and `mu = (1, 1.3)`.
pub fn fig3(config: &Config) -> Result<FigureData> {
    let mut systems = Vec::new();
    for mu2 in [1.0, 1.3] {
        for net in fig3_grid() {
            let p = SystemParams::new(vec![2, 2], 2, vec![net / 2.0; 2], vec![1.0, mu2])?;
            systems.push((format!("mu=(1,{mu2})"), net, p));
        }
    }
    Ok(FigureData {
        target: Target::Fig3.to_string(),
        x_label: "lambda_net".into(),
        y_label: "a".into(),
        points: mean_number_sweep(&systems, config)?,
    })
}

/// 16 geometrically spaced values from 0.25 to 4.
pub fn fig4_grid() -> Vec<f64> {
    geometric_grid(0.25, 4.0, 16)
}

pub fn geometric_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    let ratio = (end / start).ln() / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                end
            } else {
                start * (ratio * i as f64).exp()
            }
        })
        .collect()
}

pub fn linear_grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![start];
    }
    let h = (end - start) / (steps - 1) as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { end } else { start + h * i as f64 })
        .collect()
}

/// Mean number against `mu_2` for `m = (2, 2)`, `n = 2`, `mu_1 = 1`, with
/// `lambda = (1, 1)` and `lambda = (1, 5)`.
pub fn fig4(config: &Config) -> Result<FigureData> {
    let mut systems = Vec::new();
    for lambda2 in [1.0, 5.0] {
        for mu2 in fig4_grid() {
            let p = SystemParams::new(vec![2, 2], 2, vec![1.0, lambda2], vec![1.0, mu2])?;
            systems.push((format!("lambda=(1,{lambda2})"), mu2, p));
        }
    }
    Ok(FigureData {
        target: Target::Fig4.to_string(),
        x_label: "mu2".into(),
        y_label: "a".into(),
        points: mean_number_sweep(&systems, config)?,
    })
}

pub fn figure(target: Target, config: &Config) -> Result<FigureData> {
    match target {
        Target::Fig2 => fig2(config),
        Target::Fig3 => fig3(config),
        Target::Fig4 => fig4(config),
        Target::Table1 | Target::Table2 => Err(Error::Validation(format!("{target} is a table"))),
    }
}

/// The quantity a CLI sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// `lambda_k`, zero-based class.
    Lambda(usize),
    /// `mu_k`, zero-based class.
    Mu(usize),
    /// Total arrival rate, split in the system's current proportions.
    LambdaNet,
}

/// A parsed sweep: `name=start:end:<N>steps` (linear) or `<N>log`
/// (geometric), where `name` is `lambda<k>`, `mu<k>` (one-based) or
/// `lambda_net`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn label(&self) -> String {
        match self.parameter {
            SweepParameter::Lambda(k) => format!("lambda{}", k + 1),
            SweepParameter::Mu(k) => format!("mu{}", k + 1),
            SweepParameter::LambdaNet => "lambda_net".into(),
        }
    }

    pub fn apply(&self, params: &SystemParams, value: f64) -> Result<SystemParams> {
        let check = |k: usize| {
            if k < params.classes() {
                Ok(())
            } else {
                Err(Error::Validation(format!("class {} out of range", k + 1)))
            }
        };
        match self.parameter {
            SweepParameter::Lambda(k) => {
                check(k)?;
                let mut l = params.arrival_rates().to_vec();
                l[k] = value;
                params.with_arrival_rates(l)
            }
            SweepParameter::Mu(k) => {
                check(k)?;
                let mut m = params.service_rates().to_vec();
                m[k] = value;
                params.with_service_rates(m)
            }
            SweepParameter::LambdaNet => {
                let total = params.total_arrival_rate();
                params.with_arrival_rates(
                    params.arrival_rates().iter().map(|l| l / total * value).collect(),
                )
            }
        }
    }

    /// The sweep of the overall mean-number bounds over the values.
    pub fn run(&self, params: &SystemParams, config: &Config) -> Result<FigureData> {
        let label = self.label();
        let systems = self
            .values
            .iter()
            .map(|&v| Ok((label.clone(), v, self.apply(params, v)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FigureData {
            target: "sweep".into(),
            x_label: label,
            y_label: "a".into(),
            points: mean_number_sweep(&systems, config)?,
        })
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Validation(format!(
                "sweep {s:?} must look like mu2=0.25:4:16steps or mu2=0.25:4:16log"
            ))
        };
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parameter = if name == "lambda_net" {
            SweepParameter::LambdaNet
        } else if let Some(k) = name.strip_prefix("lambda") {
            SweepParameter::Lambda(k.parse::<usize>().map_err(|_| bad())?.checked_sub(1).ok_or_else(bad)?)
        } else if let Some(k) = name.strip_prefix("mu") {
            SweepParameter::Mu(k.parse::<usize>().map_err(|_| bad())?.checked_sub(1).ok_or_else(bad)?)
        } else {
            return Err(bad());
        };
        let parts: Vec<&str> = range.split(':').collect();
        let [start, end, count] = parts[..] else {
            return Err(bad());
        };
        let start: f64 = start.parse().map_err(|_| bad())?;
        let end: f64 = end.parse().map_err(|_| bad())?;
        let (steps, geometric) = if let Some(c) = count.strip_suffix("steps") {
            (c, false)
        } else if let Some(c) = count.strip_suffix("log") {
            (c, true)
        } else {
            return Err(bad());
        };
        let steps: usize = steps.parse().map_err(|_| bad())?;
        if steps == 0 || !(start > 0.0 && end > 0.0 && start.is_finite() && end.is_finite()) {
            return Err(bad());
        }
        let values = if geometric {
            geometric_grid(start, end, steps)
        } else {
            linear_grid(start, end, steps)
        };
        Ok(SweepSpec { parameter, values })
    }
}
