//! Seeded random benchmark: per `(n, p)` cell success, oracle agreement and
//! eigenvector-column statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{solve, verify_eigenvector, SolveConfig, Status};
use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::omega::Threshold;
use crate::oracle::{cross_check, power_lambda, PowerLambda, DEFAULT_POWER_STEPS};
use crate::scalar::ExtScalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// Thresholds per size; sizes without an entry use `2..=n-1`.
    #[serde(default)]
    pub p_values: BTreeMap<usize, Vec<usize>>,
    /// Matrices per size, shared by all of its thresholds.
    pub count: usize,
    pub low: i64,
    pub high: i64,
    pub seed: u64,
    pub solve: SolveConfig,
    pub oracle_steps: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![5, 6, 7],
            p_values: BTreeMap::new(),
            count: 20,
            low: 0,
            high: 100,
            seed: 0,
            solve: SolveConfig::default(),
            oracle_steps: DEFAULT_POWER_STEPS,
        }
    }
}

impl BenchConfig {
    pub fn thresholds(&self, n: usize) -> Vec<usize> {
        match self.p_values.get(&n) {
            Some(ps) => ps.clone(),
            None => (2..n).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be at least 1".into()));
        }
        if self.low > self.high {
            return Err(Error::InvalidConfig(format!(
                "empty entry range [{}, {}]",
                self.low, self.high
            )));
        }
        for &n in &self.sizes {
            for p in self.thresholds(n) {
                Threshold::new(p, n)?;
            }
        }
        Ok(())
    }
}

/// The `index`-th benchmark matrix of size `n`: uniform integers in
/// `[low, high]`, on a ChaCha8 stream determined by `(seed, n, index)`.
pub fn random_matrix(seed: u64, n: usize, index: usize, low: i64, high: i64) -> TropicalMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | index as u64);
    TropicalMatrix::from_fn(n, |_, _| ExtScalar::int(rng.gen_range(low..=high)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub n: usize,
    pub p: usize,
    pub index: usize,
    pub status: Status,
    pub lambda: Option<ExtScalar>,
    /// Power-iteration value; `None` on timeout.
    pub oracle: Option<ExtScalar>,
    /// Some column of the refined DBM is an eigenvector for the oracle value.
    pub column_hit: bool,
    /// Number of oracle cross-check discrepancies.
    pub discrepancies: usize,
    pub millis: f64,
}

impl InstanceResult {
    fn agrees(&self) -> bool {
        self.lambda.is_some() && self.lambda == self.oracle
    }
}

/// An instance whose candidate eigenvalue matched the oracle but for which
/// no refined column is an eigenvector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub p: usize,
    pub index: usize,
    pub matrix: TropicalMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub p: usize,
    pub count: usize,
    pub solved: usize,
    pub conjectured: usize,
    pub unresolved: usize,
    pub failed: usize,
    pub oracle_timeouts: usize,
    /// Solved / count.
    pub success_rate: f64,
    /// Among Solved, fraction whose eigenvalue equals the oracle value.
    pub oracle_agreement: f64,
    /// Among Solved, fraction with a refined column that is an eigenvector
    /// for the oracle value.
    pub column_hit_rate: f64,
    /// Among Solved or Conjectured, fraction with such a column.
    pub column_hit_rate_found: f64,
    pub counterexamples: usize,
    pub discrepancies: usize,
    pub median_millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub cells: Vec<CellSummary>,
    pub instances: Vec<InstanceResult>,
    pub counterexamples: Vec<Counterexample>,
}

impl BenchReport {
    /// Copy with every timing field zeroed; equal configurations produce
    /// byte-identical JSON for this copy.
    pub fn without_timing(&self) -> BenchReport {
        let mut r = self.clone();
        r.cells.iter_mut().for_each(|c| c.median_millis = 0.0);
        r.instances.iter_mut().for_each(|i| i.millis = 0.0);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "{:>3} {:>3} {:>5} {:>8} {:>8} {:>8} {:>8} {:>4} {:>10}",
            "n", "p", "count", "success", "oracle", "col_hit", "col_any", "cex", "median_ms"
        )
        .unwrap();
        for c in &self.cells {
            writeln!(
                s,
                "{:>3} {:>3} {:>5} {:>8.3} {:>8.3} {:>8.3} {:>8.3} {:>4} {:>10.2}",
                c.n,
                c.p,
                c.count,
                c.success_rate,
                c.oracle_agreement,
                c.column_hit_rate,
                c.column_hit_rate_found,
                c.counterexamples,
                c.median_millis
            )
            .unwrap();
        }
        s
    }
}

fn run_instance(config: &BenchConfig, a: &TropicalMatrix, p: usize, index: usize) -> Result<InstanceResult> {
    let n = a.n();
    let t = Threshold::new(p, n)?;
    let start = Instant::now();
    let report = solve(a, p, &config.solve)?;
    let millis = start.elapsed().as_secs_f64() * 1e3;

    let oracle = match power_lambda(a, t, config.oracle_steps)? {
        PowerLambda::Lambda(v) => Some(v),
        PowerLambda::Timeout => None,
    };
    let column_hit = match &oracle {
        Some(lambda) => (0..n)
            .map(|k| verify_eigenvector(a, t, lambda, &report.refined_dbm.column(k)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .any(|ok| ok),
        None => false,
    };
    let discrepancies = cross_check(&report, a, t, config.oracle_steps)?.len();
    Ok(InstanceResult {
        n,
        p,
        index,
        status: report.status,
        lambda: report.lambda,
        oracle,
        column_hit,
        discrepancies,
        millis,
    })
}

fn rate(num: usize, den: usize) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn summarize(n: usize, p: usize, rows: &[&InstanceResult]) -> CellSummary {
    let count_status = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let solved: Vec<_> = rows.iter().filter(|r| r.status == Status::Solved).collect();
    let found: Vec<_> = rows.iter().filter(|r| r.lambda.is_some()).collect();
    let counterexamples = rows
        .iter()
        .filter(|r| r.agrees() && !r.column_hit)
        .count();
    CellSummary {
        n,
        p,
        count: rows.len(),
        solved: solved.len(),
        conjectured: count_status(Status::Conjectured),
        unresolved: count_status(Status::Unresolved),
        failed: count_status(Status::Failed),
        oracle_timeouts: rows.iter().filter(|r| r.oracle.is_none()).count(),
        success_rate: rate(solved.len(), rows.len()),
        oracle_agreement: rate(solved.iter().filter(|r| r.agrees()).count(), solved.len()),
        column_hit_rate: rate(solved.iter().filter(|r| r.column_hit).count(), solved.len()),
        column_hit_rate_found: rate(found.iter().filter(|r| r.column_hit).count(), found.len()),
        counterexamples,
        discrepancies: rows.iter().map(|r| r.discrepancies).sum(),
        median_millis: median(rows.iter().map(|r| r.millis).collect()),
    }
}

/// Runs every cell of the configuration in parallel.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.sizes {
        for index in 0..config.count {
            let a = random_matrix(config.seed, n, index, config.low, config.high);
            for p in config.thresholds(n) {
                jobs.push((a.clone(), p, index));
            }
        }
    }
    let mut instances = jobs
        .par_iter()
        .map(|(a, p, index)| run_instance(config, a, *p, *index))
        .collect::<Result<Vec<_>>>()?;
    instances.sort_by_key(|r| (r.n, r.p, r.index));

    let mut by_cell: BTreeMap<(usize, usize), Vec<&InstanceResult>> = BTreeMap::new();
    for r in &instances {
        by_cell.entry((r.n, r.p)).or_default().push(r);
    }
    let cells = by_cell
        .iter()
        .map(|(&(n, p), rows)| summarize(n, p, rows))
        .collect();
    let counterexamples = instances
        .iter()
        .filter(|r| r.agrees() && !r.column_hit)
        .map(|r| Counterexample {
            n: r.n,
            p: r.p,
            index: r.index,
            matrix: random_matrix(config.seed, r.n, r.index, config.low, config.high),
        })
        .collect();
    Ok(BenchReport {
        config: config.clone(),
        cells,
        instances,
        counterexamples,
    })
}
