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

//! Brute-force reference implementations used to check the library.

#![allow(dead_code)]

use std::collections::HashSet;

use nalgebra::DMatrix;
use netfit::Graph;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

fn degrees(a: &[Vec<bool>]) -> Vec<f64> {
    a.iter()
        .map(|r| r.iter().filter(|&&x| x).count() as f64)
        .collect()
}

pub fn density(a: &[Vec<bool>]) -> f64 {
    let n = a.len() as f64;
    degrees(a).iter().sum::<f64>() / (n * (n - 1.0))
}

pub fn average_degree(a: &[Vec<bool>]) -> f64 {
    degrees(a).iter().sum::<f64>() / a.len() as f64
}

/// Textbook Pearson over every ordered edge `(u, v)` of `(deg u - 1, deg v - 1)`.
pub fn assortativity(a: &[Vec<bool>]) -> f64 {
    let d = degrees(a);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for u in 0..a.len() {
        for v in 0..a.len() {
            if a[u][v] {
                xs.push(d[u] - 1.0);
                ys.push(d[v] - 1.0);
            }
        }
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let den = ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt();
    if den == 0.0 {
        0.0
    } else {
        (n * sxy - sx * sy) / den
    }
}

/// Mean local clustering from explicit triangle enumeration.
pub fn average_clustering(a: &[Vec<bool>]) -> f64 {
    let n = a.len();
    let mut triangles = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if a[i][j] && a[j][k] && a[i][k] {
                    triangles[i] += 1;
                    triangles[j] += 1;
                    triangles[k] += 1;
                }
            }
        }
    }
    let d = degrees(a);
    (0..n)
        .map(|v| {
            if d[v] < 2.0 {
                0.0
            } else {
                2.0 * triangles[v] as f64 / (d[v] * (d[v] - 1.0))
            }
        })
        .sum::<f64>()
        / n as f64
}

/// Largest entry of the unit-norm projection of the all-ones vector onto the
/// leading eigenspace of the adjacency matrix (dense symmetric solver).
pub fn max_eigenvector_centrality(a: &[Vec<bool>]) -> f64 {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| if a[i][j] { 1.0 } else { 0.0 });
    let eig = m.symmetric_eigen();
    let top = eig.eigenvalues.max();
    let mut proj = vec![0.0; n];
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > top - 1e-9 {
            let col = eig.eigenvectors.column(k);
            let dot: f64 = col.iter().sum();
            for i in 0..n {
                proj[i] += dot * col[i];
            }
        }
    }
    let norm = proj.iter().map(|x| x * x).sum::<f64>().sqrt();
    proj.iter().map(|x| x / norm).fold(f64::MIN, f64::max)
}

/// Floyd-Warshall mean distance over reachable ordered pairs, over `n - 1`.
pub fn average_path_length(a: &[Vec<bool>]) -> f64 {
    let n = a.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let (mut sum, mut pairs) = (0usize, 0usize);
    for i in 0..n {
        for j in 0..n {
            if i != j && d[i][j] < inf {
                sum += d[i][j];
                pairs += 1;
            }
        }
    }
    sum as f64 / pairs as f64 / (n - 1) as f64
}

pub fn skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

/// The seven topological metrics in library order, computed by the oracles.
pub fn oracle_topology(g: &Graph) -> [f64; 7] {
    let a = adjacency(g);
    [
        density(&a),
        assortativity(&a),
        average_clustering(&a),
        average_degree(&a),
        max_eigenvector_centrality(&a),
        average_path_length(&a),
        skewness(&degrees(&a)),
    ]
}

fn pair_bit(n: usize, i: usize, j: usize) -> u32 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    // Row-major index of (i, j) in the strict upper triangle.
    let idx = i * (2 * n - i - 1) / 2 + (j - i - 1);
    1 << idx
}

fn has(code: u32, n: usize, i: usize, j: usize) -> bool {
    code & pair_bit(n, i, j) != 0
}

/// Canonical code: the largest edge bitmask over relabellings that list the
/// vertices by a refinement-invariant key.
fn canonical(code: u32, n: usize) -> u32 {
    let deg: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && has(code, n, i, j)).count())
        .collect();
    let key: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|i| {
            let mut nd: Vec<usize> = (0..n)
                .filter(|&j| j != i && has(code, n, i, j))
                .map(|j| deg[j])
                .collect();
            nd.sort_unstable();
            (deg[i], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| key[a].cmp(&key[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match groups.last_mut() {
            Some(g) if key[g[0]] == key[v] => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let mut best = 0;
    let mut perm = Vec::with_capacity(n);
    fn rec(
        groups: &mut [Vec<usize>],
        gi: usize,
        perm: &mut Vec<usize>,
        code: u32,
        n: usize,
        best: &mut u32,
    ) {
        if gi == groups.len() {
            // perm[new] = old
            let mut c = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if has(code, n, perm[i], perm[j]) {
                        c |= pair_bit(n, i, j);
                    }
                }
            }
            *best = (*best).max(c);
            return;
        }
        let mut group = groups[gi].clone();
        permute(&mut group, 0, &mut |p| {
            perm.extend_from_slice(p);
            rec(groups, gi + 1, perm, code, n, best);
            perm.truncate(perm.len() - p.len());
        });
    }
    fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }
    rec(&mut groups, 0, &mut perm, code, n, &mut best);
    best
}

fn code_connected(code: u32, n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if v != u && !seen[v] && has(code, n, u, v) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// One representative of every isomorphism class of simple graphs on `n`
/// nodes, built by adding a vertex to each class on `n - 1` nodes.
pub fn all_graph_classes(n: usize) -> Vec<u32> {
    if n <= 1 {
        return vec![0];
    }
    let mut out = HashSet::new();
    for prev in all_graph_classes(n - 1) {
        // Re-index the old edges for the larger vertex set.
        let mut base = 0;
        for i in 0..n - 1 {
            for j in i + 1..n - 1 {
                if has(prev, n - 1, i, j) {
                    base |= pair_bit(n, i, j);
                }
            }
        }
        for subset in 0u32..(1 << (n - 1)) {
            let mut code = base;
            for i in 0..n - 1 {
                if subset & (1 << i) != 0 {
                    code |= pair_bit(n, i, n - 1);
                }
            }
            out.insert(canonical(code, n));
        }
    }
    let mut v: Vec<u32> = out.into_iter().collect();
    v.sort_unstable();
    v
}

pub fn connected_graph_classes(n: usize) -> Vec<Graph> {
    all_graph_classes(n)
        .into_iter()
        .filter(|&c| code_connected(c, n))
        .map(|c| {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if has(c, n, i, j) {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges)
        })
        .collect()
}

/// G(n, p) with `n` in `2..=max_n`; when `connect` is set a random spanning
/// tree is added first. Always has at least one edge.
pub fn random_graph(seed: u64, max_n: usize, connect: bool) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(0.05..0.5);
    let mut edges = Vec::new();
    if connect {
        for v in 1..n {
            edges.push((rng.random_range(0..v), v));
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1));
    }
    Graph::from_edges(n, edges)
}
