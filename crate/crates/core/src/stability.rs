// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Replicate generation from fitted models and per-metric summaries.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{FitReport, ModelKind};
use crate::generators::generate;
use crate::metrics::{feature_vector, FeatureVector, TOPOLOGY_METRICS};
use crate::scalar::Scalar;
use crate::seed::{derive, derive_named};

pub const DEFAULT_REPLICATES: usize = 30;

/// Type-7 quantile (linear interpolation between order statistics) of sorted data.
pub fn quantile<F: Scalar>(sorted: &[F], q: f64) -> F {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = F::from_f64_lossy(h - lo as f64);
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary<F> {
    pub mean: F,
    /// Sample standard deviation (n - 1 denominator).
    pub std: F,
    pub min: F,
    pub q1: F,
    pub median: F,
    pub q3: F,
    pub max: F,
}

/// Five-number summary plus mean and sample standard deviation.
pub fn summarize<F: Scalar>(values: &[F]) -> Result<Summary<F>> {
    if values.is_empty() {
        return Err(Error::InsufficientData(
            "cannot summarize zero values".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("metric values are finite"));
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    let n = F::from_usize_lossy(sorted.len());
    let (mean, std) = if min == max {
        (min, F::zero())
    } else {
        let mean = (sorted.iter().copied().sum::<F>() / n).max(min).min(max);
        let ss: F = sorted.iter().map(|&x| (x - mean) * (x - mean)).sum();
        (mean, (ss / (n - F::one())).sqrt())
    };
    Ok(Summary {
        mean,
        std,
        min,
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow<F> {
    pub model: ModelKind,
    pub metric: String,
    #[serde(flatten)]
    pub summary: Summary<F>,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityMetadata {
    pub replicates: usize,
    pub seed: u64,
    pub models: Vec<ModelKind>,
    /// Failure messages per model, in replicate order.
    pub failures: Vec<(ModelKind, Vec<String>)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilitySummary<F> {
    pub rows: Vec<StabilityRow<F>>,
    pub metadata: StabilityMetadata,
}

impl<F: Scalar> StabilitySummary<F> {
    pub fn get(&self, model: ModelKind, metric: &str) -> Option<&StabilityRow<F>> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.metric == metric)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "model", "metric", "mean", "std", "min", "q1", "median", "q3", "max", "failures",
        ])?;
        for r in &self.rows {
            let s = &r.summary;
            w.write_record([
                r.model.to_string(),
                r.metric.clone(),
                s.mean.to_string(),
                s.std.to_string(),
                s.min.to_string(),
                s.q1.to_string(),
                s.median.to_string(),
                s.q3.to_string(),
                s.max.to_string(),
                r.failures.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Seed of replicate `r` of `model` under `master`.
pub fn replicate_seed(master: u64, model: ModelKind, r: usize) -> u64 {
    derive(derive_named(master, model.as_str()), r as u64)
}

/// Generates `replicates` graphs from every fit and summarizes the seven
/// topological metrics per model. Failed replicates are excluded and counted;
/// a model with more than half its replicates failing is an error.
pub fn stability_run<F: Scalar>(
    fits: &[FitReport],
    replicates: usize,
    seed: u64,
) -> Result<StabilitySummary<F>> {
    if replicates < 2 {
        return Err(Error::Param(format!(
            "stability needs at least 2 replicates, got {replicates}"
        )));
    }
    let jobs: Vec<(usize, usize)> = (0..fits.len())
        .flat_map(|f| (0..replicates).map(move |r| (f, r)))
        .collect();
    let outcomes: Vec<Result<FeatureVector<F>>> = jobs
        .par_iter()
        .map(|&(f, r)| {
            let fit = &fits[f];
            let g = generate(&fit.params, replicate_seed(seed, fit.model, r))?;
            feature_vector::<F>(&g)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures_meta = Vec::new();
    for (f, fit) in fits.iter().enumerate() {
        let chunk = &outcomes[f * replicates..(f + 1) * replicates];
        let ok: Vec<&FeatureVector<F>> = chunk.iter().filter_map(|o| o.as_ref().ok()).collect();
        let errors: Vec<String> = chunk
            .iter()
            .filter_map(|o| o.as_ref().err().map(|e| e.to_string()))
            .collect();
        let failures = errors.len();
        if 2 * failures > replicates {
            return Err(Error::Construction(format!(
                "{}: {failures} of {replicates} replicates failed (first: {})",
                fit.model, errors[0]
            )));
        }
        for (i, metric) in TOPOLOGY_METRICS.iter().enumerate() {
            let values: Vec<F> = ok.iter().map(|fv| fv.topology()[i]).collect();
            rows.push(StabilityRow {
                model: fit.model,
                metric: metric.to_string(),
                summary: summarize(&values)?,
                failures,
            });
        }
        if failures > 0 {
            failures_meta.push((fit.model, errors));
        }
    }
    Ok(StabilitySummary {
        rows,
        metadata: StabilityMetadata {
            replicates,
            seed,
            models: fits.iter().map(|f| f.model).collect(),
            failures: failures_meta,
        },
    })
}
