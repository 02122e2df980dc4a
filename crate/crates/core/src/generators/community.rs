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

use rand::Rng as _;

use crate::error::Result;
use crate::generators::ModelParams;
use crate::graph::{Graph, GraphBuilder};
use crate::seed::{rng_from_seed, Rng};

/// Planted partition: consecutive blocks of the given sizes, each pair inside a
/// block linked with probability `p_in`, each pair across blocks with `p_out`.
pub fn generate_community(sizes: &[usize], p_in: f64, p_out: f64, seed: u64) -> Result<Graph> {
    ModelParams::Community {
        sizes: sizes.to_vec(),
        p_in,
        p_out,
    }
    .validate()?;
    let n: usize = sizes.iter().sum();
    let mut rng = rng_from_seed(seed);
    let mut b = GraphBuilder::new(n);
    let mut block_start = 0;
    for &size in sizes {
        let block_end = block_start + size;
        for u in block_start..block_end {
            bernoulli_run(u + 1, block_end - u - 1, p_in, &mut rng, |v| {
                b.add_edge_unchecked(u, v)
            });
            bernoulli_run(block_end, n - block_end, p_out, &mut rng, |v| {
                b.add_edge_unchecked(u, v)
            });
        }
        block_start = block_end;
    }
    Ok(b.build())
}

/// Calls `hit` for each index in `start..start + len` that succeeds an
/// independent Bernoulli(`p`) trial, jumping between successes with geometric gaps.
fn bernoulli_run(start: usize, len: usize, p: f64, rng: &mut Rng, mut hit: impl FnMut(usize)) {
    if len == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (start..start + len).for_each(hit);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut next = 0.0f64;
    loop {
        let r: f64 = rng.random();
        next += ((1.0 - r).ln() / log_q).floor();
        if next >= len as f64 {
            return;
        }
        hit(start + next as usize);
        next += 1.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_extremes() {
        let g = generate_community(&[3, 3], 1.0, 0.0, 5).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.connected_components().component_sizes, vec![3, 3]);

        let g = generate_community(&[4, 4], 0.0, 1.0, 5).unwrap();
        assert_eq!(g.edge_count(), 16);
        assert!(g.edges().all(|(u, v)| u < 4 && v >= 4));
    }

    #[test]
    fn per_pair_rate_matches_p() {
        // 200 runs over 45 pairs at p = 0.3: the pooled rate has std ~0.01.
        let mut hits = 0;
        for seed in 0..200 {
            hits += generate_community(&[10], 0.3, 0.0, seed)
                .unwrap()
                .edge_count();
        }
        let rate = hits as f64 / (200.0 * 45.0);
        assert!((rate - 0.3).abs() < 0.03, "{rate}");
    }
}
