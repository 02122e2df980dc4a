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

//! Topological metrics and the feature vector assembled from them.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::jdm::JointDegreeMatrix;
use crate::linalg::symmetric_eigen;
use crate::scalar::Scalar;

/// Power iteration stops once the L2 change between iterates drops below this.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Names of the seven size-free metrics, in feature-vector order.
pub const TOPOLOGY_METRICS: [&str; 7] = [
    "density",
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
];

/// Metrics used as classifier inputs (density and size are left out).
pub const CLASSIFIER_FEATURES: [&str; 6] = [
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
];

/// One graph's metric values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector<F> {
    pub size: usize,
    pub density: F,
    pub assort: F,
    pub avg_clust: F,
    pub avg_deg: F,
    pub max_eigenv_c: F,
    pub avg_path_length: F,
    pub skew_deg_dist: F,
}

impl<F: Scalar> FeatureVector<F> {
    pub fn topology(&self) -> [F; 7] {
        [
            self.density,
            self.assort,
            self.avg_clust,
            self.avg_deg,
            self.max_eigenv_c,
            self.avg_path_length,
            self.skew_deg_dist,
        ]
    }

    pub fn classifier_features(&self) -> [F; 6] {
        [
            self.assort,
            self.avg_clust,
            self.avg_deg,
            self.max_eigenv_c,
            self.avg_path_length,
            self.skew_deg_dist,
        ]
    }

    /// Value of a metric by its column name (including `size`).
    pub fn get(&self, metric: &str) -> Option<F> {
        Some(match metric {
            "size" => F::from_usize_lossy(self.size),
            "density" => self.density,
            "assort" => self.assort,
            "avg_clust" => self.avg_clust,
            "avg_deg" => self.avg_deg,
            "max_eigenv_c" => self.max_eigenv_c,
            "avg_path_length" => self.avg_path_length,
            "skew_deg_dist" => self.skew_deg_dist,
            _ => return None,
        })
    }
}

pub fn density<F: Scalar>(g: &Graph) -> Result<F> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Domain(format!(
            "density needs at least 2 nodes, got {n}"
        )));
    }
    let pairs = F::from_usize_lossy(n) * F::from_usize_lossy(n - 1) / F::from_usize_lossy(2);
    Ok(F::from_usize_lossy(g.edge_count()) / pairs)
}

/// `2m / n`; zero for the empty graph.
pub fn average_degree<F: Scalar>(g: &Graph) -> F {
    if g.node_count() == 0 {
        return F::zero();
    }
    F::from_usize_lossy(2 * g.edge_count()) / F::from_usize_lossy(g.node_count())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Assortativity<F> {
    pub value: F,
    /// Every edge joins nodes of one common degree, so the correlation is 0/0.
    pub degenerate: bool,
}

/// Degree assortativity: Pearson correlation of the remaining degrees at the two
/// ends of each edge, with every edge counted in both orientations.
pub fn assortativity<F: Scalar>(g: &Graph) -> Result<Assortativity<F>> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::Domain(
            "assortativity needs at least one edge".into(),
        ));
    }
    // Summing per degree class in a fixed order makes the result depend only
    // on the joint degree matrix, not on edge enumeration order.
    let mut classes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (g.degree(u), g.degree(v));
        *classes.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    let lo = classes.keys().map(|&(a, _)| a).min().unwrap_or(0);
    let hi = classes.keys().map(|&(_, b)| b).max().unwrap_or(0);
    if lo == hi {
        return Ok(Assortativity {
            value: F::zero(),
            degenerate: true,
        });
    }
    let total: usize = classes.iter().map(|(&(a, b), &c)| (a + b) * c).sum();
    // The remaining-degree shift cancels in the correlation.
    let mu = F::from_usize_lossy(total) / F::from_usize_lossy(2 * m);
    let mut cov = F::zero();
    let mut var = F::zero();
    for (&(k, l), &c) in &classes {
        let a = F::from_usize_lossy(k) - mu;
        let b = F::from_usize_lossy(l) - mu;
        let c = F::from_usize_lossy(c);
        cov = cov + c * (a * b + a * b);
        var = var + c * (a * a + b * b);
    }
    let r = (cov / var).max(-F::one()).min(F::one());
    Ok(Assortativity {
        value: r,
        degenerate: false,
    })
}

/// Number of edges among the neighbours of `v`.
fn neighbour_links(g: &Graph, v: usize) -> usize {
    let nbrs = g.neighbors(v);
    let mut links = 0;
    for &u in nbrs {
        // Count each pair once, from its smaller endpoint.
        let other = g.neighbors(u);
        let (mut i, mut j) = (0, 0);
        while i < nbrs.len() && j < other.len() {
            match nbrs[i].cmp(&other[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if nbrs[i] > u {
                        links += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    links
}

/// Local clustering coefficient; zero for nodes of degree below two.
pub fn local_clustering<F: Scalar>(g: &Graph, v: usize) -> F {
    let d = g.degree(v);
    if d < 2 {
        return F::zero();
    }
    let links = neighbour_links(g, v);
    F::from_usize_lossy(2 * links) / F::from_usize_lossy(d * (d - 1))
}

/// Mean local clustering coefficient over all nodes.
pub fn average_clustering<F: Scalar>(g: &Graph) -> F {
    let n = g.node_count();
    if n == 0 {
        return F::zero();
    }
    let total: F = (0..n).map(|v| local_clustering::<F>(g, v)).sum();
    total / F::from_usize_lossy(n)
}

/// Principal eigenvector of the adjacency matrix, unit L2 norm, nonnegative.
///
/// Iterates on `A + I`, which has the same eigenvectors but no `-lambda`
/// partner on bipartite graphs, starting from the uniform vector. Graphs of
/// up to [`DENSE_EIGEN_MAX_NODES`] nodes that exhaust the iteration cap are
/// solved densely; larger ones report the last residual.
pub fn eigenvector_centrality<F: Scalar>(g: &Graph) -> Result<Vec<F>> {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Err(Error::Domain(
            "eigenvector centrality needs at least one edge".into(),
        ));
    }
    let floor = F::epsilon() * F::from_f64_lossy(8.0) * F::from_usize_lossy(n).sqrt();
    let tol = F::from_f64_lossy(EIGEN_TOLERANCE).max(floor);
    let mut x = vec![F::one() / F::from_usize_lossy(n).sqrt(); n];
    let mut next = vec![F::zero(); n];
    let mut residual = F::infinity();
    for _ in 0..EIGEN_MAX_ITERATIONS {
        for (v, slot) in next.iter_mut().enumerate() {
            let mut acc = x[v];
            for &w in g.neighbors(v) {
                acc = acc + x[w];
            }
            *slot = acc;
        }
        let norm = next.iter().map(|&a| a * a).sum::<F>().sqrt();
        residual = F::zero();
        for (a, b) in next.iter_mut().zip(&x) {
            *a = *a / norm;
            let d = *a - *b;
            residual = residual + d * d;
        }
        residual = residual.sqrt();
        std::mem::swap(&mut x, &mut next);
        if residual < tol {
            return Ok(x);
        }
    }
    if n <= DENSE_EIGEN_MAX_NODES {
        return Ok(dense_principal_vector(g));
    }
    Err(Error::NonConvergence {
        residual: residual.to_f64_lossy(),
    })
}

/// Largest graph for which a power iteration that hits the cap is finished
/// with a dense solver instead of failing.
pub const DENSE_EIGEN_MAX_NODES: usize = 400;

/// The limit the power iteration is heading for: the uniform start vector
/// projected onto the leading eigenspace of `A`, at unit norm. Used when a
/// small spectral gap (long rings, near-degenerate components) stalls it.
fn dense_principal_vector<F: Scalar>(g: &Graph) -> Vec<F> {
    let n = g.node_count();
    let mut a = vec![vec![F::zero(); n]; n];
    for (u, v) in g.edges() {
        a[u][v] = F::one();
        a[v][u] = F::one();
    }
    let (values, vectors) = symmetric_eigen(&a);
    let top = values[0];
    let cut = top - F::from_f64_lossy(1e-9) * top.abs().max(F::one());
    let mut x = vec![F::zero(); n];
    for (k, &lambda) in values.iter().enumerate() {
        if lambda < cut {
            break;
        }
        let dot: F = (0..n).map(|i| vectors[i][k]).sum();
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = *xi + dot * vectors[i][k];
        }
    }
    let norm = x.iter().map(|&a| a * a).sum::<F>().sqrt();
    x.into_iter().map(|a| (a / norm).max(F::zero())).collect()
}

pub fn max_eigenvector_centrality<F: Scalar>(g: &Graph) -> Result<F> {
    let c = eigenvector_centrality::<F>(g)?;
    Ok(c.into_iter().fold(F::zero(), F::max))
}

/// Sum of BFS distances from `source` and the number of nodes reached (excluding itself).
fn bfs_distance_sum(
    g: &Graph,
    source: usize,
    dist: &mut [usize],
    queue: &mut VecDeque<usize>,
) -> (u64, u64) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let (mut sum, mut reached) = (0u64, 0u64);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v];
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dv + 1;
                sum += (dv + 1) as u64;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (sum, reached)
}

/// Mean shortest-path distance over ordered pairs that share a component,
/// divided by `n - 1`.
pub fn average_path_length_normalized<F: Scalar>(g: &Graph) -> Result<F> {
    let n = g.node_count();
    let (sum, pairs) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![usize::MAX; n], VecDeque::new()),
            |(dist, queue), s| bfs_distance_sum(g, s, dist, queue),
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if pairs == 0 {
        return Err(Error::Domain(
            "average path length needs at least one connected pair".into(),
        ));
    }
    let mean = F::from_f64_lossy(sum as f64) / F::from_f64_lossy(pairs as f64);
    Ok(mean / F::from_usize_lossy(n - 1))
}

/// Central moments `(mean, m2, m3)` of the degree sequence.
fn degree_moments<F: Scalar>(g: &Graph) -> (F, F, F) {
    let n = g.node_count();
    if n == 0 {
        return (F::zero(), F::zero(), F::zero());
    }
    let nf = F::from_usize_lossy(n);
    let mean = F::from_usize_lossy(2 * g.edge_count()) / nf;
    // Histogram order keeps the moments invariant under node relabelling.
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..n {
        *histogram.entry(g.degree(v)).or_insert(0) += 1;
    }
    let (mut m2, mut m3) = (F::zero(), F::zero());
    for (&k, &c) in &histogram {
        let d = F::from_usize_lossy(k) - mean;
        let c = F::from_usize_lossy(c);
        m2 = m2 + c * d * d;
        m3 = m3 + c * d * d * d;
    }
    (mean, m2 / nf, m3 / nf)
}

/// Population skewness `m3 / m2^(3/2)` of the degree sequence; zero for regular graphs.
pub fn degree_skewness<F: Scalar>(g: &Graph) -> F {
    let (_, m2, m3) = degree_moments::<F>(g);
    if m2 <= F::zero() {
        return F::zero();
    }
    m3 / m2.powf(F::from_f64_lossy(1.5))
}

/// Population standard deviation of the degree sequence.
pub fn degree_std<F: Scalar>(g: &Graph) -> F {
    degree_moments::<F>(g).1.sqrt()
}

pub fn feature_vector<F: Scalar>(g: &Graph) -> Result<FeatureVector<F>> {
    if g.node_count() < 2 || g.edge_count() == 0 {
        return Err(Error::Domain(format!(
            "feature vector needs n >= 2 and m >= 1 (n = {}, m = {})",
            g.node_count(),
            g.edge_count()
        )));
    }
    Ok(FeatureVector {
        size: g.node_count(),
        density: density(g)?,
        assort: assortativity(g)?.value,
        avg_clust: average_clustering(g),
        avg_deg: average_degree(g),
        max_eigenv_c: max_eigenvector_centrality(g)?,
        avg_path_length: average_path_length_normalized(g)?,
        skew_deg_dist: degree_skewness(g),
    })
}

/// Joint degree matrix of `g`, including its count of isolated nodes.
pub fn joint_degree_matrix(g: &Graph) -> JointDegreeMatrix {
    let isolated = (0..g.node_count()).filter(|&v| g.degree(v) == 0).count();
    JointDegreeMatrix::from_entries(g.edges().map(|(u, v)| ((g.degree(u), g.degree(v)), 1)))
        .with_isolated(isolated)
}
