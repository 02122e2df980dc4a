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

//! Decision-tree and random-forest classification of networks by domain,
//! category (real or model) and subcategory (which model).

mod eval;
mod forest;
mod tree;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Category, DatasetTable, Domain, Subcategory};
use crate::error::{Error, Result};
use crate::fitting::ModelKind;
use crate::metrics::CLASSIFIER_FEATURES;
use crate::scalar::Scalar;
use crate::seed::derive;

pub use eval::{accuracy, roc_auc, stratified_kfold, ConfusionMatrix};
pub use forest::{train_forest, ForestConfig, ForestModel};
pub use tree::{train_tree, Node, TreeConfig, TreeModel};

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset<F> {
    pub features: Vec<Vec<F>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub feature_names: Vec<String>,
}

impl<F: Scalar> LabeledDataset<F> {
    pub fn new(
        features: Vec<Vec<F>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                left: features.len(),
                right: labels.len(),
            });
        }
        if let Some(row) = features.iter().find(|r| r.len() != feature_names.len()) {
            return Err(Error::DimensionMismatch {
                left: row.len(),
                right: feature_names.len(),
            });
        }
        if features.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("features must be finite".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Invalid(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(LabeledDataset {
            features,
            labels,
            class_names,
            feature_names,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn class_support(&self) -> Vec<usize> {
        let mut support = vec![0; self.class_count()];
        for &l in &self.labels {
            support[l] += 1;
        }
        support
    }

    /// Rows `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> LabeledDataset<F> {
        LabeledDataset {
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            feature_names: self.feature_names.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Domain,
    Category,
    Subcategory,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Domain => "domain",
            Task::Category => "category",
            Task::Subcategory => "subcategory",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "domain" => Ok(Task::Domain),
            "category" => Ok(Task::Category),
            "subcategory" => Ok(Task::Subcategory),
            _ => Err(Error::Param(format!("unknown task {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classifier {
    Tree,
    Forest,
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classifier::Tree => "tree",
            Classifier::Forest => "forest",
        })
    }
}

impl FromStr for Classifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tree" | "decision_tree" | "dt" => Ok(Classifier::Tree),
            "forest" | "random_forest" | "rf" => Ok(Classifier::Forest),
            _ => Err(Error::Param(format!("unknown classifier {s:?}"))),
        }
    }
}

/// Builds the labelled rows for `task`. The domain task uses real networks
/// only; the other two use one domain (or all when `domain` is `None`) and
/// leave out the degree-std Watts-Strogatz fits. Returns the dataset and the
/// row names.
pub fn task_dataset<F: Scalar>(
    table: &DatasetTable<F>,
    task: Task,
    domain: Option<Domain>,
) -> Result<(LabeledDataset<F>, Vec<String>)> {
    let mut keyed: Vec<(usize, String, Vec<F>)> = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for row in table.rows() {
        if domain.is_some() && row.domain != domain {
            continue;
        }
        let key = match task {
            Task::Domain => {
                if row.category == Some(Category::Model) {
                    continue;
                }
                let d = row
                    .domain
                    .ok_or_else(|| Error::Invalid(format!("row {:?} has no domain", row.name)))?;
                Domain::ALL.iter().position(|&x| x == d).unwrap()
            }
            Task::Category => {
                if row.subcategory == Some(Subcategory::Model(ModelKind::WsStd)) {
                    continue;
                }
                match row.category {
                    Some(Category::Real) => 0,
                    Some(Category::Model) => 1,
                    None => {
                        return Err(Error::Invalid(format!(
                            "row {:?} has no category",
                            row.name
                        )))
                    }
                }
            }
            Task::Subcategory => {
                let s = row.subcategory.ok_or_else(|| {
                    Error::Invalid(format!("row {:?} has no subcategory", row.name))
                })?;
                if s == Subcategory::Model(ModelKind::WsStd) {
                    continue;
                }
                Subcategory::ALL.iter().position(|&x| x == s).unwrap()
            }
        };
        keyed.push((
            key,
            row.name.clone(),
            row.features.classifier_features().to_vec(),
        ));
    }
    let all_names: Vec<String> = match task {
        Task::Domain => Domain::ALL.iter().map(|d| d.to_string()).collect(),
        Task::Category => vec!["real".into(), "model".into()],
        Task::Subcategory => Subcategory::ALL.iter().map(|s| s.to_string()).collect(),
    };
    // Keep only classes that occur, in canonical order. The category task
    // always keeps both classes so that "model" stays the positive class.
    let mut present = vec![task == Task::Category; all_names.len()];
    for (k, _, _) in &keyed {
        present[*k] = true;
    }
    let mut remap = vec![usize::MAX; all_names.len()];
    for (k, name) in all_names.into_iter().enumerate() {
        if present[k] {
            remap[k] = class_names.len();
            class_names.push(name);
        }
    }
    let names = keyed.iter().map(|(_, n, _)| n.clone()).collect();
    let labels = keyed.iter().map(|(k, _, _)| remap[*k]).collect();
    let features = keyed.into_iter().map(|(_, _, x)| x).collect();
    let feature_names = CLASSIFIER_FEATURES.iter().map(|s| s.to_string()).collect();
    Ok((
        LabeledDataset::new(features, labels, class_names, feature_names)?,
        names,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub task: Task,
    pub classifier: Classifier,
    pub folds: usize,
    pub seed: u64,
    pub domain: Option<Domain>,
    pub trees: usize,
    /// `None`: all features for a tree, `floor(sqrt(d))` for a forest.
    pub features_per_split: Option<usize>,
    pub max_depth: Option<usize>,
}

impl EvalConfig {
    pub fn new(task: Task, classifier: Classifier, seed: u64) -> Self {
        EvalConfig {
            task,
            classifier,
            folds: 5,
            seed,
            domain: None,
            trees: 100,
            features_per_split: None,
            max_depth: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub classifier: Classifier,
    pub trees: usize,
    pub features_per_split: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
    pub min_samples_split: usize,
    pub criterion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub class_counts: Vec<usize>,
    pub accuracy: f64,
    /// Present for two-class tasks when the test fold holds both classes.
    pub auc: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub name: String,
    pub fold: usize,
    pub actual: String,
    pub predicted: String,
    /// Score of the positive class for two-class tasks.
    pub score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub domain: Option<Domain>,
    pub seed: u64,
    pub folds: usize,
    pub hyperparameters: Hyperparameters,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub class_support: Vec<usize>,
    pub positive_class: Option<String>,
    pub per_fold: Vec<FoldReport>,
    /// Accuracy of the predictions pooled over all folds.
    pub pooled_accuracy: f64,
    pub mean_accuracy: f64,
    pub pooled_auc: Option<f64>,
    pub mean_auc: Option<f64>,
    pub confusion: ConfusionMatrix,
    /// Splits per feature summed over the fold models.
    pub split_counts: Vec<usize>,
    pub predictions: Vec<Prediction>,
}

enum Fitted<F> {
    Tree(TreeModel<F>),
    Forest(ForestModel<F>),
}

impl<F: Scalar> Fitted<F> {
    fn predict(&self, x: &[F]) -> usize {
        match self {
            Fitted::Tree(t) => t.predict(x),
            Fitted::Forest(f) => f.predict(x),
        }
    }

    fn score(&self, x: &[F], class: usize) -> f64 {
        match self {
            Fitted::Tree(t) => {
                let counts = t.leaf_counts(x);
                let total: usize = counts.iter().sum();
                counts[class] as f64 / total.max(1) as f64
            }
            Fitted::Forest(f) => f.score(x, class),
        }
    }

    fn split_counts(&self) -> Vec<usize> {
        match self {
            Fitted::Tree(t) => t.split_counts(),
            Fitted::Forest(f) => f.split_counts(),
        }
    }
}

/// Stratified k-fold evaluation of one classifier on one task. Folds run in
/// parallel; fold `f` trains with seed `derive(seed, f + 1)`.
pub fn evaluate<F: Scalar>(
    data: &LabeledDataset<F>,
    names: &[String],
    config: &EvalConfig,
) -> Result<EvalReport> {
    let support = data.class_support();
    let observed = support.iter().filter(|&&s| s > 0).count();
    if observed < 2 {
        return Err(Error::InsufficientData(format!(
            "{} task needs at least two classes, found {observed}",
            config.task
        )));
    }
    if let Some((c, &s)) = support.iter().enumerate().find(|(_, &s)| s == 1) {
        return Err(Error::InsufficientData(format!(
            "class {} has {s} sample; at least 2 are needed",
            data.class_names[c]
        )));
    }
    let folds = stratified_kfold(&data.labels, config.folds, derive(config.seed, 0))?;
    let d = data.feature_count();
    let tree_features = config.features_per_split.unwrap_or(d).clamp(1, d);
    let forest_config = ForestConfig {
        trees: config.trees,
        features_per_split: config.features_per_split,
        max_depth: config.max_depth,
        bootstrap: true,
        seed: 0,
    };
    let hyperparameters = match config.classifier {
        Classifier::Tree => Hyperparameters {
            classifier: Classifier::Tree,
            trees: 1,
            features_per_split: tree_features,
            max_depth: config.max_depth,
            bootstrap: false,
            min_samples_split: 2,
            criterion: "gini".into(),
        },
        Classifier::Forest => Hyperparameters {
            classifier: Classifier::Forest,
            trees: config.trees,
            features_per_split: forest_config.features_for(d),
            max_depth: config.max_depth,
            bootstrap: true,
            min_samples_split: 2,
            criterion: "gini".into(),
        },
    };
    let binary = data.class_count() == 2;
    let fold_results: Vec<(Fitted<F>, Vec<usize>)> = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| {
            let train: Vec<usize> = (0..data.len())
                .filter(|i| test.binary_search(i).is_err())
                .collect();
            let train_data = data.subset(&train);
            let seed = derive(config.seed, f as u64 + 1);
            let model = match config.classifier {
                Classifier::Tree => Fitted::Tree(train_tree(
                    &train_data,
                    TreeConfig {
                        max_depth: config.max_depth,
                        min_samples_split: 2,
                        features_per_split: Some(tree_features),
                    },
                )),
                Classifier::Forest => Fitted::Forest(train_forest(
                    &train_data,
                    &ForestConfig {
                        seed,
                        ..forest_config
                    },
                )),
            };
            (model, train)
        })
        .collect();

    let mut confusion = ConfusionMatrix::new(data.class_names.clone());
    let mut per_fold = Vec::new();
    let mut predictions = Vec::new();
    let mut split_counts = vec![0; d];
    let (mut pooled_scores, mut pooled_pos) = (Vec::new(), Vec::new());
    for (f, ((model, train), test)) in fold_results.iter().zip(&folds).enumerate() {
        let mut fold_confusion = ConfusionMatrix::new(data.class_names.clone());
        let (mut scores, mut pos) = (Vec::new(), Vec::new());
        for &i in test {
            let x = &data.features[i];
            let predicted = model.predict(x);
            fold_confusion.record(predicted, data.labels[i]);
            let score = binary.then(|| model.score(x, 1));
            if let Some(s) = score {
                scores.push(s);
                pos.push(data.labels[i] == 1);
            }
            predictions.push(Prediction {
                name: names.get(i).cloned().unwrap_or_default(),
                fold: f,
                actual: data.class_names[data.labels[i]].clone(),
                predicted: data.class_names[predicted].clone(),
                score,
            });
        }
        let auc = if binary {
            roc_auc(&scores, &pos).ok()
        } else {
            None
        };
        pooled_scores.extend(scores);
        pooled_pos.extend(pos);
        for (acc, c) in split_counts.iter_mut().zip(model.split_counts()) {
            *acc += c;
        }
        let mut class_counts = vec![0; data.class_count()];
        for &i in test {
            class_counts[data.labels[i]] += 1;
        }
        per_fold.push(FoldReport {
            fold: f,
            train_size: train.len(),
            test_size: test.len(),
            class_counts,
            accuracy: fold_confusion.accuracy()?,
            auc,
        });
        confusion.merge(&fold_confusion);
    }
    let mean_accuracy = per_fold.iter().map(|r| r.accuracy).sum::<f64>() / per_fold.len() as f64;
    let fold_aucs: Vec<f64> = per_fold.iter().filter_map(|r| r.auc).collect();
    Ok(EvalReport {
        task: config.task,
        domain: config.domain,
        seed: config.seed,
        folds: config.folds,
        hyperparameters,
        feature_names: data.feature_names.clone(),
        class_names: data.class_names.clone(),
        class_support: support,
        positive_class: binary.then(|| data.class_names[1].clone()),
        per_fold,
        pooled_accuracy: confusion.accuracy()?,
        mean_accuracy,
        pooled_auc: if binary {
            roc_auc(&pooled_scores, &pooled_pos).ok()
        } else {
            None
        },
        mean_auc: (!fold_aucs.is_empty())
            .then(|| fold_aucs.iter().sum::<f64>() / fold_aucs.len() as f64),
        confusion,
        split_counts,
        predictions,
    })
}

/// Selects the rows for `config.task` from `table` and evaluates.
pub fn run_task<F: Scalar>(table: &DatasetTable<F>, config: &EvalConfig) -> Result<EvalReport> {
    let (data, names) = task_dataset(table, config.task, config.domain)?;
    evaluate(&data, &names, config)
}
