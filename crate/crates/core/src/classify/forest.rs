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

//! Random forests: bagged CART trees with per-split feature subsampling.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::seed::{derive, rng_from_seed};

use super::tree::{argmax, train_tree_on, TreeConfig, TreeModel};
use super::LabeledDataset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestConfig {
    pub trees: usize,
    /// `None` uses `floor(sqrt(d))`.
    pub features_per_split: Option<usize>,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            trees: 100,
            features_per_split: None,
            max_depth: None,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn features_for(&self, d: usize) -> usize {
        self.features_per_split
            .unwrap_or_else(|| (d as f64).sqrt().floor() as usize)
            .clamp(1, d.max(1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForestModel<F> {
    pub trees: Vec<TreeModel<F>>,
    pub tree_seeds: Vec<u64>,
    pub features_per_split: usize,
    pub class_count: usize,
}

impl<F: Scalar> ForestModel<F> {
    /// Tree votes per class; sums to the number of trees.
    pub fn votes(&self, x: &[F]) -> Vec<usize> {
        let mut votes = vec![0; self.class_count];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        votes
    }

    /// Majority vote, the lowest class index among ties.
    pub fn predict(&self, x: &[F]) -> usize {
        argmax(&self.votes(x))
    }

    /// Fraction of trees voting for `class`.
    pub fn score(&self, x: &[F], class: usize) -> f64 {
        self.votes(x)[class] as f64 / self.trees.len() as f64
    }

    pub fn split_counts(&self) -> Vec<usize> {
        let d = self.trees.first().map_or(0, |t| t.feature_count);
        let mut total = vec![0; d];
        for t in &self.trees {
            for (acc, c) in total.iter_mut().zip(t.split_counts()) {
                *acc += c;
            }
        }
        total
    }
}

/// Trains `config.trees` trees in parallel. Tree `t` draws its bootstrap
/// sample and feature subsets from `derive(config.seed, t)`, so the forest
/// does not depend on the thread count.
pub fn train_forest<F: Scalar>(data: &LabeledDataset<F>, config: &ForestConfig) -> ForestModel<F> {
    let d = data.feature_count();
    let m = config.features_for(d);
    let tree_config = TreeConfig {
        max_depth: config.max_depth,
        min_samples_split: 2,
        features_per_split: Some(m),
    };
    let n = data.len();
    let tree_seeds: Vec<u64> = (0..config.trees as u64)
        .map(|t| derive(config.seed, t))
        .collect();
    let trees = tree_seeds
        .par_iter()
        .map(|&seed| {
            let mut idx: Vec<usize> = if config.bootstrap && n > 0 {
                let mut rng = rng_from_seed(derive(seed, u64::MAX));
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            train_tree_on(data, &mut idx, tree_config, seed)
        })
        .collect();
    ForestModel {
        trees,
        tree_seeds,
        features_per_split: m,
        class_count: data.class_count(),
    }
}
