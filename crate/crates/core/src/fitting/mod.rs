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

//! Parameter fitting of the five models to a target graph.

mod louvain;
pub mod search;

pub use louvain::{louvain, modularity, Partition};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate, ModelParams};
use crate::graph::Graph;
use crate::metrics::{average_clustering, degree_std, density, joint_degree_matrix};
use crate::seed::derive;

use search::{grid_then_golden, linear_grid, log_grid, SearchResult};

/// The six fitted variants; WS appears twice, once per fitting target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "2K")]
    TwoK,
    #[serde(rename = "CBA")]
    Cba,
    #[serde(rename = "WS")]
    Ws,
    #[serde(rename = "WS_STD")]
    WsStd,
    #[serde(rename = "DD")]
    Dd,
    #[serde(rename = "Com")]
    Com,
}

impl ModelKind {
    pub const ALL: [ModelKind; 6] = [
        ModelKind::TwoK,
        ModelKind::Cba,
        ModelKind::Ws,
        ModelKind::WsStd,
        ModelKind::Dd,
        ModelKind::Com,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::TwoK => "2K",
            ModelKind::Cba => "CBA",
            ModelKind::Ws => "WS",
            ModelKind::WsStd => "WS_STD",
            ModelKind::Dd => "DD",
            ModelKind::Com => "Com",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown model {s:?}")))
    }
}

/// Which degree statistic the WS rewiring probability is fitted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WsTarget {
    Clustering,
    DegreeStd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Graphs generated per candidate parameter; the objective uses their mean.
    pub replicates: usize,
    /// Candidate evaluations per fit (grid points included).
    pub budget: usize,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            replicates: 5,
            budget: 60,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: ModelKind,
    pub params: ModelParams,
    /// Achieved `|target - mean replicate metric|`; zero for exact fits.
    pub objective_value: f64,
    pub evaluations: usize,
    pub replicates_per_eval: usize,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Mean of `metric` over `replicates` graphs drawn with seeds shared across
/// candidates, so nearby parameters see the same random streams.
fn replicate_mean(
    params: &ModelParams,
    config: &FitConfig,
    metric: fn(&Graph) -> Result<f64>,
) -> Result<f64> {
    let values: Vec<f64> = (0..config.replicates)
        .into_par_iter()
        .map(|r| metric(&generate(params, derive(config.seed, r as u64))?))
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

fn search(
    grid: &[f64],
    config: &FitConfig,
    target: f64,
    metric: fn(&Graph) -> Result<f64>,
    make: impl Fn(f64) -> ModelParams,
) -> Result<SearchResult> {
    if config.replicates == 0 {
        return Err(Error::Param(
            "replicates per evaluation must be positive".into(),
        ));
    }
    grid_then_golden(grid, config.budget, |q| {
        // A failed generation scores as the worst possible candidate.
        Ok(match replicate_mean(&make(q), config, metric) {
            Ok(mean) => (target - mean).abs(),
            Err(_) => f64::INFINITY,
        })
    })
}

fn clustering_metric(g: &Graph) -> Result<f64> {
    Ok(average_clustering(g))
}

fn degree_std_metric(g: &Graph) -> Result<f64> {
    Ok(degree_std(g))
}

fn density_metric(g: &Graph) -> Result<f64> {
    density(g)
}

/// Lower end of the WS rewiring search, keeping away from the unrewired lattice.
pub const WS_MIN_P: f64 = 0.001;

/// Nearest even integer to the average degree (at least 2), capped below `n`.
pub fn ws_neighbourhood(g: &Graph) -> Result<usize> {
    let n = g.node_count();
    let avg = crate::metrics::average_degree::<f64>(g);
    if avg < 1.0 {
        return Err(Error::Unfittable(format!(
            "average degree {avg:.3} is below 1"
        )));
    }
    let mut k = 2 * ((avg / 2.0).round() as usize).max(1);
    if k >= n {
        k = if n.is_multiple_of(2) { n - 2 } else { n - 1 };
    }
    if k < 2 {
        return Err(Error::Unfittable(format!(
            "{n} nodes leave no room for a ring lattice"
        )));
    }
    Ok(k)
}

/// Watts-Strogatz: `n = |V|`, `K` the even-rounded average degree, and `p`
/// searched over `[0.001, 1]` (17-point log grid, then golden section) to match
/// either the average clustering or the degree standard deviation.
pub fn fit_ws(g: &Graph, target: WsTarget, config: &FitConfig) -> Result<FitReport> {
    let n = g.node_count();
    let k = ws_neighbourhood(g)?;
    let (model, metric, goal): (_, fn(&Graph) -> Result<f64>, f64) = match target {
        WsTarget::Clustering => (ModelKind::Ws, clustering_metric, average_clustering(g)),
        WsTarget::DegreeStd => (ModelKind::WsStd, degree_std_metric, degree_std(g)),
    };
    let grid = log_grid(WS_MIN_P, 1.0, 17);
    let result = search(&grid, config, goal, metric, |p| ModelParams::Ws { n, k, p })?;
    let mut notes = Vec::new();
    let avg = crate::metrics::average_degree::<f64>(g);
    if (avg - k as f64).abs() > 1.0 {
        notes.push(format!("K = {k} differs from average degree {avg:.3}"));
    }
    Ok(report(
        model,
        ModelParams::Ws { n, k, p: result.x },
        result,
        config,
        notes,
    ))
}

/// Clustered BA: `n = |V|`, `m = round(|E| / |V|)` (at least 1), and `p`
/// searched over `[0, 1]` (11-point grid, then golden section) to match the
/// average clustering.
pub fn fit_cba(g: &Graph, config: &FitConfig) -> Result<FitReport> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Unfittable("CBA needs at least 2 nodes".into()));
    }
    let ratio = g.edge_count() as f64 / n as f64;
    let m = (ratio.round() as usize).max(1).min(n - 1);
    let goal = average_clustering(g);
    let grid = linear_grid(0.0, 1.0, 11);
    let result = search(&grid, config, goal, clustering_metric, |p| {
        ModelParams::Cba { n, m, p }
    })?;
    let mut notes = Vec::new();
    if (ratio - m as f64).abs() > 1e-12 {
        notes.push(format!("m rounded from {ratio:.3} to {m}"));
    }
    Ok(report(
        ModelKind::Cba,
        ModelParams::Cba { n, m, p: result.x },
        result,
        config,
        notes,
    ))
}

/// Duplication-divergence: `n = |V|` and `p` searched over `(0, 1]` (grid of
/// step 0.02, then golden section around the best point) to match the density.
pub fn fit_dd(g: &Graph, config: &FitConfig) -> Result<FitReport> {
    let n = g.node_count();
    let goal = density::<f64>(g)?;
    let grid = linear_grid(0.02, 1.0, 50);
    let result = search(&grid, config, goal, density_metric, |p| ModelParams::Dd {
        n,
        p,
    })?;
    Ok(report(
        ModelKind::Dd,
        ModelParams::Dd { n, p: result.x },
        result,
        config,
        Vec::new(),
    ))
}

/// Planted-partition parameters read off a partition of `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityEstimate {
    pub sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub notes: Vec<String>,
}

/// `p_in`: edges inside groups over possible inside pairs; `p_out`: edges
/// between groups over possible cross pairs. A zero denominator gives 0 and a note.
pub fn community_estimate(g: &Graph, partition: &Partition) -> CommunityEstimate {
    let sizes = partition.sizes();
    let mut inner_edges = 0usize;
    for (u, v) in g.edges() {
        if partition.community[u] == partition.community[v] {
            inner_edges += 1;
        }
    }
    let choose2 = |x: usize| x * x.saturating_sub(1) / 2;
    let inner_pairs: usize = sizes.iter().map(|&s| choose2(s)).sum();
    let cross_pairs = choose2(g.node_count()) - inner_pairs;
    let mut notes = Vec::new();
    let p_in = if inner_pairs == 0 {
        notes.push("no within-community pairs; p_in set to 0".to_string());
        0.0
    } else {
        inner_edges as f64 / inner_pairs as f64
    };
    let p_out = if cross_pairs == 0 {
        notes.push("no between-community pairs; p_out set to 0".to_string());
        0.0
    } else {
        (g.edge_count() - inner_edges) as f64 / cross_pairs as f64
    };
    CommunityEstimate {
        sizes,
        p_in,
        p_out,
        notes,
    }
}

/// Community model from a Louvain partition of `g`.
pub fn fit_community(g: &Graph, seed: u64) -> Result<FitReport> {
    if g.edge_count() == 0 {
        return Err(Error::Unfittable(
            "community fit needs at least one edge".into(),
        ));
    }
    let partition = louvain(g, seed);
    let est = community_estimate(g, &partition);
    let mut notes = est.notes;
    notes.push(format!(
        "{} communities, modularity {:.6}",
        est.sizes.len(),
        partition.modularity
    ));
    Ok(FitReport {
        model: ModelKind::Com,
        params: ModelParams::Community {
            sizes: est.sizes,
            p_in: est.p_in,
            p_out: est.p_out,
        },
        objective_value: 0.0,
        evaluations: 1,
        replicates_per_eval: 0,
        master_seed: seed,
        notes,
    })
}

/// 2K model: the joint degree matrix of `g`, reproduced exactly by construction.
pub fn fit_2k(g: &Graph) -> Result<FitReport> {
    if g.edge_count() == 0 {
        return Err(Error::Unfittable("2K fit needs at least one edge".into()));
    }
    Ok(FitReport {
        model: ModelKind::TwoK,
        params: ModelParams::TwoK {
            jdm: joint_degree_matrix(g),
        },
        objective_value: 0.0,
        evaluations: 0,
        replicates_per_eval: 0,
        master_seed: 0,
        notes: Vec::new(),
    })
}

fn report(
    model: ModelKind,
    params: ModelParams,
    result: SearchResult,
    config: &FitConfig,
    notes: Vec<String>,
) -> FitReport {
    FitReport {
        model,
        params,
        objective_value: result.value,
        evaluations: result.evaluations,
        replicates_per_eval: config.replicates,
        master_seed: config.seed,
        notes,
    }
}

/// Fits one model variant; each variant draws its own seed from `config.seed`.
pub fn fit_model(g: &Graph, model: ModelKind, config: &FitConfig) -> Result<FitReport> {
    let config = FitConfig {
        seed: derive(config.seed, model as u64 + 1),
        ..*config
    };
    match model {
        ModelKind::TwoK => fit_2k(g),
        ModelKind::Cba => fit_cba(g, &config),
        ModelKind::Ws => fit_ws(g, WsTarget::Clustering, &config),
        ModelKind::WsStd => fit_ws(g, WsTarget::DegreeStd, &config),
        ModelKind::Dd => fit_dd(g, &config),
        ModelKind::Com => fit_community(g, config.seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate_dd, generate_ws};

    fn quick() -> FitConfig {
        FitConfig {
            replicates: 3,
            budget: 25,
            seed: 5,
        }
    }

    #[test]
    fn model_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.as_str().parse::<ModelKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{k}\""));
        }
    }

    #[test]
    fn ws_on_unrewired_lattice_hits_lower_bound() {
        let g = generate_ws(10, 4, 0.0, 0).unwrap();
        let r = fit_ws(&g, WsTarget::Clustering, &quick()).unwrap();
        match r.params {
            ModelParams::Ws { n, k, p } => {
                assert_eq!((n, k), (10, 4));
                assert_eq!(p, WS_MIN_P);
            }
            _ => unreachable!(),
        }
        assert_eq!(r.objective_value, 0.0);
    }

    #[test]
    fn ws_rejects_sparse_graphs() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3)]);
        assert!(matches!(
            fit_ws(&g, WsTarget::Clustering, &quick()),
            Err(Error::Unfittable(_))
        ));
    }

    #[test]
    fn cba_on_tree_prefers_zero() {
        let g = crate::generators::generate_cba(200, 1, 0.0, 3).unwrap();
        let r = fit_cba(&g, &quick()).unwrap();
        assert_eq!(
            r.params,
            ModelParams::Cba {
                n: 200,
                m: 1,
                p: 0.0
            }
        );
        assert_eq!(r.objective_value, 0.0);
    }

    #[test]
    fn cba_rounds_m() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let r = fit_cba(&k4, &quick()).unwrap();
        assert!(matches!(r.params, ModelParams::Cba { n: 4, m: 2, .. }));
        r.params.validate().unwrap();
    }

    #[test]
    fn dd_single_edge_is_exact() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let r = fit_dd(&g, &quick()).unwrap();
        assert!(matches!(r.params, ModelParams::Dd { n: 2, .. }));
        assert_eq!(r.objective_value, 0.0);
    }

    #[test]
    fn dd_on_complete_graph_goes_to_upper_end() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        // Expected density on 4 nodes rises with p: 5/9 at p = 1 (star or 4-cycle).
        let cfg = FitConfig {
            replicates: 400,
            budget: 60,
            seed: 2,
        };
        let mean_at =
            |p| replicate_mean(&ModelParams::Dd { n: 4, p }, &cfg, density_metric).unwrap();
        assert!(mean_at(1.0) > mean_at(0.5));
        assert!(mean_at(0.5) > mean_at(0.1));
        assert!((mean_at(1.0) - 5.0 / 9.0).abs() < 0.03);

        let r = fit_dd(
            &k4,
            &FitConfig {
                replicates: 100,
                budget: 60,
                seed: 2,
            },
        )
        .unwrap();
        let ModelParams::Dd { p, .. } = r.params else {
            unreachable!()
        };
        assert!(p >= 0.8, "{p}");
    }

    #[test]
    fn dd_density_gap_is_moderate() {
        let g = generate_dd(300, 0.4, 9).unwrap();
        let r = fit_dd(
            &g,
            &FitConfig {
                replicates: 5,
                budget: 60,
                seed: 1,
            },
        )
        .unwrap();
        assert!(r.objective_value < 0.25 * density::<f64>(&g).unwrap());
    }

    #[test]
    fn community_estimates() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let part = Partition::from_labels(&two, &[0, 0, 0, 1, 1, 1]);
        let est = community_estimate(&two, &part);
        assert_eq!((est.p_in, est.p_out), (1.0, 0.0));

        let bridged =
            Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
        let r = fit_community(&bridged, 0).unwrap();
        let ModelParams::Community { sizes, p_in, p_out } = r.params else {
            unreachable!()
        };
        assert_eq!(sizes, vec![3, 3]);
        assert_eq!(p_in, 1.0);
        assert!((p_out - 1.0 / 9.0).abs() < 1e-15);

        let k44 = Graph::from_edges(8, (0..4).flat_map(|u| (4..8).map(move |v| (u, v))));
        let singles = Partition::from_labels(&k44, &(0..8).collect::<Vec<_>>());
        let est = community_estimate(&k44, &singles);
        assert_eq!(est.p_in, 0.0);
        assert_eq!(est.notes.len(), 1);
        assert!((est.p_out - 16.0 / 28.0).abs() < 1e-15);
    }

    #[test]
    fn two_k_fit_is_the_matrix() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let r = fit_2k(&tri).unwrap();
        assert_eq!(
            r.params,
            ModelParams::TwoK {
                jdm: crate::JointDegreeMatrix::from_entries([((2, 2), 3)])
            }
        );
        assert_eq!(r.objective_value, 0.0);
    }
}
