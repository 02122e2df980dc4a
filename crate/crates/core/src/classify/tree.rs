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

//! CART decision trees with Gini impurity.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::seed::{rng_from_seed, Rng};

use super::LabeledDataset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// `None` grows until leaves are pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Features examined per split; `None` examines all of them.
    pub features_per_split: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: None,
            min_samples_split: 2,
            features_per_split: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Node<F> {
    Leaf {
        counts: Vec<usize>,
    },
    Split {
        feature: usize,
        threshold: F,
        left: usize,
        right: usize,
        counts: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeModel<F> {
    /// Node 0 is the root; children always follow their parent.
    pub nodes: Vec<Node<F>>,
    pub class_count: usize,
    pub feature_count: usize,
}

/// Index of the largest count, the lowest index among ties.
pub(crate) fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

impl<F: Scalar> TreeModel<F> {
    /// Class counts of the training samples that reached the leaf for `x`.
    pub fn leaf_counts(&self, x: &[F]) -> &[usize] {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { counts } => return counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    pub fn predict(&self, x: &[F]) -> usize {
        argmax(self.leaf_counts(x))
    }

    pub fn depth(&self) -> usize {
        fn walk<F>(nodes: &[Node<F>], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Number of splits made on each feature.
    pub fn split_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.feature_count];
        for node in &self.nodes {
            if let Node::Split { feature, .. } = node {
                counts[*feature] += 1;
            }
        }
        counts
    }
}

/// `n * gini` for a class-count vector holding `n` samples.
fn weighted_gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let sq: f64 = counts.iter().map(|&c| (c * c) as f64).sum();
    n as f64 - sq / n as f64
}

#[derive(Clone, Copy)]
struct Candidate<F> {
    impurity: f64,
    feature: usize,
    threshold: F,
}

impl<F: Scalar> Candidate<F> {
    fn beats(&self, other: &Candidate<F>) -> bool {
        (self.impurity, self.feature)
            .partial_cmp(&(other.impurity, other.feature))
            .map(|o| o.then(self.threshold.partial_cmp(&other.threshold).unwrap()))
            == Some(std::cmp::Ordering::Less)
    }
}

fn midpoint<F: Scalar>(a: F, b: F) -> F {
    let mid = a + (b - a) / F::from_f64_lossy(2.0);
    // Keep `a <= t < b` even when the two values are adjacent floats.
    if mid < b {
        mid
    } else {
        a
    }
}

struct Builder<'a, F> {
    data: &'a LabeledDataset<F>,
    config: TreeConfig,
    rng: Option<Rng>,
    nodes: Vec<Node<F>>,
}

impl<F: Scalar> Builder<'_, F> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.data.class_count()];
        for &i in idx {
            counts[self.data.labels[i]] += 1;
        }
        counts
    }

    fn best_for_feature(&self, idx: &mut [usize], feature: usize) -> Option<Candidate<F>> {
        let x = &self.data.features;
        idx.sort_by(|&a, &b| {
            x[a][feature]
                .partial_cmp(&x[b][feature])
                .unwrap()
                .then(a.cmp(&b))
        });
        if x[idx[0]][feature] == x[idx[idx.len() - 1]][feature] {
            return None;
        }
        let n = idx.len();
        let mut right = self.counts(idx);
        let mut left = vec![0; right.len()];
        let mut best: Option<Candidate<F>> = None;
        for s in 1..n {
            let label = self.data.labels[idx[s - 1]];
            left[label] += 1;
            right[label] -= 1;
            let (a, b) = (x[idx[s - 1]][feature], x[idx[s]][feature]);
            if a == b {
                continue;
            }
            let cand = Candidate {
                impurity: weighted_gini(&left, s) + weighted_gini(&right, n - s),
                feature,
                threshold: midpoint(a, b),
            };
            if best.as_ref().is_none_or(|b| cand.beats(b)) {
                best = Some(cand);
            }
        }
        best
    }

    fn grow(&mut self, idx: &mut [usize], depth: usize) -> usize {
        let counts = self.counts(idx);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            counts: counts.clone(),
        });
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        let capped = self.config.max_depth.is_some_and(|d| depth >= d);
        if pure || capped || idx.len() < self.config.min_samples_split {
            return id;
        }
        let d = self.data.feature_count();
        let mut order: Vec<usize> = (0..d).collect();
        let wanted = match self.config.features_per_split {
            Some(m) if m < d => {
                if let Some(rng) = self.rng.as_mut() {
                    order.shuffle(rng);
                }
                m.max(1)
            }
            _ => d,
        };
        // Like common CART implementations, keep looking past `wanted` features
        // while none of the examined ones could split this node.
        let mut best: Option<Candidate<F>> = None;
        let mut examined = 0;
        for &feature in &order {
            if examined >= wanted && best.is_some() {
                break;
            }
            if let Some(cand) = self.best_for_feature(idx, feature) {
                examined += 1;
                if best.as_ref().is_none_or(|b| cand.beats(b)) {
                    best = Some(cand);
                }
            }
        }
        let Some(best) = best else { return id };
        let x = &self.data.features;
        idx.sort_by(|&a, &b| {
            x[a][best.feature]
                .partial_cmp(&x[b][best.feature])
                .unwrap()
                .then(a.cmp(&b))
        });
        let cut = idx.partition_point(|&i| x[i][best.feature] <= best.threshold);
        let (l, r) = idx.split_at_mut(cut);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
            counts,
        };
        id
    }
}

/// Trains on the samples listed in `idx` (repeats allowed, as in a bootstrap).
pub(crate) fn train_tree_on<F: Scalar>(
    data: &LabeledDataset<F>,
    idx: &mut [usize],
    config: TreeConfig,
    seed: u64,
) -> TreeModel<F> {
    let mut builder = Builder {
        data,
        config,
        rng: Some(rng_from_seed(seed)),
        nodes: Vec::new(),
    };
    if idx.is_empty() {
        builder.nodes.push(Node::Leaf {
            counts: vec![0; data.class_count()],
        });
    } else {
        builder.grow(idx, 0);
    }
    TreeModel {
        nodes: builder.nodes,
        class_count: data.class_count(),
        feature_count: data.feature_count(),
    }
}

/// Greedy CART on all samples. Ties between splits of equal impurity go to
/// the lowest feature index, then the smallest threshold.
pub fn train_tree<F: Scalar>(data: &LabeledDataset<F>, config: TreeConfig) -> TreeModel<F> {
    let mut idx: Vec<usize> = (0..data.len()).collect();
    train_tree_on(data, &mut idx, config, 0)
}
