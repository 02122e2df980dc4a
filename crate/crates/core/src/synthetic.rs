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

//! Stand-in "real" networks, one generator per domain, for building test
//! corpora without downloading anything. None of them is one of the fitted
//! models, so every model has something to miss.
//!
//! - social: points on a torus linked within a radius, plus a few long-range
//!   links between high-fitness nodes (clustered, heavy-tailed).
//! - food: the niche model of food webs (dense, low clustering).
//! - brain: spatial modules with distance-decaying link probability.
//! - chems: molecule-like trees with degree at most 4 and ring closures.

use std::collections::VecDeque;

use rand::Rng as _;

use crate::dataset::Domain;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::seed::{rng_from_seed, Rng};

/// Default node-count range for each domain.
pub fn size_range(domain: Domain) -> (usize, usize) {
    match domain {
        Domain::Social => (80, 200),
        Domain::Food => (30, 90),
        Domain::Brain => (60, 150),
        Domain::Chems => (15, 60),
    }
}

/// A stand-in network for `domain` with about `n` nodes. Isolated nodes are
/// removed, as they would be by edge-list ingestion.
pub fn proxy_graph(domain: Domain, n: usize, seed: u64) -> Result<Graph> {
    if n < 4 {
        return Err(Error::Param(format!("proxy graphs need n >= 4, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let b = match domain {
        Domain::Social => social(n, &mut rng),
        Domain::Food => niche(n, &mut rng),
        Domain::Brain => brain(n, &mut rng),
        Domain::Chems => molecule(n, &mut rng),
    };
    let g = drop_isolated(&b.build());
    if g.edge_count() == 0 {
        return Err(Error::Construction(format!(
            "{domain} proxy produced no edges"
        )));
    }
    Ok(g)
}

/// A proxy graph whose size is drawn from [`size_range`].
pub fn random_proxy_graph(domain: Domain, seed: u64) -> Result<Graph> {
    let (lo, hi) = size_range(domain);
    let n = rng_from_seed(seed ^ 0x5eed).random_range(lo..=hi);
    proxy_graph(domain, n, seed)
}

/// Removes degree-zero nodes, keeping the remaining ids in order.
pub fn drop_isolated(g: &Graph) -> Graph {
    let mut id = vec![usize::MAX; g.node_count()];
    let mut next = 0;
    for v in 0..g.node_count() {
        if g.degree(v) > 0 {
            id[v] = next;
            next += 1;
        }
    }
    Graph::from_edges(next, g.edges().map(|(u, v)| (id[u], id[v])))
}

fn torus_dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut s = 0.0;
    for i in 0..2 {
        let d = (a[i] - b[i]).abs();
        let d = d.min(1.0 - d);
        s += d * d;
    }
    s
}

fn social(n: usize, rng: &mut Rng) -> GraphBuilder {
    let mean_degree = rng.random_range(5.0..10.0);
    let radius2 = mean_degree / (std::f64::consts::PI * n as f64);
    let pos: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if torus_dist2(pos[u], pos[v]) < radius2 {
                b.add_edge_unchecked(u, v);
            }
        }
    }
    // Pareto fitness; long-range links pick both ends by fitness.
    let fitness: Vec<f64> = (0..n)
        .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / 1.5))
        .collect();
    let total: f64 = fitness.iter().sum();
    let pick = |rng: &mut Rng| {
        let mut x = rng.random::<f64>() * total;
        for (i, &f) in fitness.iter().enumerate() {
            x -= f;
            if x <= 0.0 {
                return i;
            }
        }
        n - 1
    };
    let extra = n * rng.random_range(3..8) / 10;
    for _ in 0..extra {
        let (u, v) = (pick(rng), pick(rng));
        if u != v {
            b.add_edge(u, v);
        }
    }
    b
}

/// Niche model with connectance drawn from [0.08, 0.2]; predator-prey
/// links are kept undirected.
fn niche(n: usize, rng: &mut Rng) -> GraphBuilder {
    let connectance = rng.random_range(0.08..0.2);
    let beta = 1.0 / (2.0 * connectance) - 1.0;
    let niche: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        let x = 1.0 - (1.0 - rng.random::<f64>()).powf(1.0 / beta);
        let range = x * niche[i];
        let centre = rng.random_range(range / 2.0..=niche[i].max(range / 2.0));
        let (lo, hi) = (centre - range / 2.0, centre + range / 2.0);
        for j in 0..n {
            if j != i && niche[j] >= lo && niche[j] <= hi {
                b.add_edge(i, j);
            }
        }
    }
    b
}

/// Nodes scattered around a few centres in the unit cube, linked with
/// probability `beta * exp(-d / (alpha * sqrt(3)))`.
fn brain(n: usize, rng: &mut Rng) -> GraphBuilder {
    let modules = rng.random_range(3..7);
    let centres: Vec<[f64; 3]> = (0..modules)
        .map(|_| [rng.random(), rng.random(), rng.random()])
        .collect();
    let pos: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            let c = centres[rng.random_range(0..modules)];
            let mut p = [0.0; 3];
            for i in 0..3 {
                // Sum of uniforms: a cheap bell-shaped spread.
                let spread: f64 = (0..3).map(|_| rng.random::<f64>() - 0.5).sum();
                p[i] = c[i] + 0.12 * spread;
            }
            p
        })
        .collect();
    let alpha = rng.random_range(0.06..0.1);
    let beta = rng.random_range(0.6..0.9);
    let scale = alpha * 3f64.sqrt();
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let d: f64 = (0..3)
                .map(|i| (pos[u][i] - pos[v][i]).powi(2))
                .sum::<f64>()
                .sqrt();
            if rng.random::<f64>() < beta * (-d / scale).exp() {
                b.add_edge_unchecked(u, v);
            }
        }
    }
    b
}

fn distances_from(b: &GraphBuilder, s: usize, limit: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; b.node_count()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == limit {
            continue;
        }
        for &v in b.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Random tree with valence at most 4 (mostly 3), then ring closures between
/// atoms four or five bonds apart, giving five- and six-membered rings.
fn molecule(n: usize, rng: &mut Rng) -> GraphBuilder {
    let mut b = GraphBuilder::new(n);
    for v in 1..n {
        loop {
            let u = rng.random_range(0..v);
            let cap = if rng.random::<f64>() < 0.1 { 4 } else { 3 };
            if b.degree(u) < cap {
                b.add_edge_unchecked(u, v);
                break;
            }
        }
    }
    let rings = 1 + n / rng.random_range(6..12);
    for _ in 0..rings {
        for _attempt in 0..50 {
            let u = rng.random_range(0..n);
            if b.degree(u) >= 3 {
                continue;
            }
            let dist = distances_from(&b, u, 5);
            let candidates: Vec<usize> = (0..n)
                .filter(|&v| (dist[v] == 4 || dist[v] == 5) && b.degree(v) < 3)
                .collect();
            if !candidates.is_empty() {
                let v = candidates[rng.random_range(0..candidates.len())];
                b.add_edge_unchecked(u, v);
                break;
            }
        }
    }
    b
}
