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

//! Cross-validation folds and evaluation measures.

use std::io::Write;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::rng_from_seed;

/// Splits sample indices into `k` folds. Each class is shuffled and dealt
/// round-robin, continuing where the previous class stopped, so every class
/// and every fold size is balanced to within one.
pub fn stratified_kfold(labels: &[usize], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::Param(format!("k-fold needs k >= 2, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::InsufficientData(format!(
            "{k} folds requested for {} samples",
            labels.len()
        )));
    }
    let classes = labels.iter().max().map_or(0, |&c| c + 1);
    let mut by_class = vec![Vec::new(); classes];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c].push(i);
    }
    let mut rng = rng_from_seed(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// `counts[i][j]`: samples of actual class `j` predicted as class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>) -> Self {
        let k = classes.len();
        ConfusionMatrix {
            classes,
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn record(&mut self, predicted: usize, actual: usize) {
        self.counts[predicted][actual] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> Result<f64> {
        accuracy(&self.counts)
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["predicted\\actual".to_string()];
        header.extend(self.classes.iter().cloned());
        w.write_record(&header)?;
        for (name, row) in self.classes.iter().zip(&self.counts) {
            let mut record = vec![name.clone()];
            record.extend(row.iter().map(|c| c.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Trace over total of a square confusion matrix.
pub fn accuracy(m: &[Vec<usize>]) -> Result<f64> {
    if m.iter().any(|row| row.len() != m.len()) {
        return Err(Error::DimensionMismatch {
            left: m.len(),
            right: m.iter().map(Vec::len).find(|&l| l != m.len()).unwrap_or(0),
        });
    }
    let total: usize = m.iter().flatten().sum();
    if total == 0 {
        return Err(Error::InsufficientData("empty confusion matrix".into()));
    }
    let hits: usize = (0..m.len()).map(|i| m[i][i]).sum();
    Ok(hits as f64 / total as f64)
}

/// Area under the ROC curve as the Mann-Whitney statistic: the probability
/// that a random positive outscores a random negative, ties counting half.
pub fn roc_auc<F: Scalar>(scores: &[F], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::DimensionMismatch {
            left: scores.len(),
            right: positive.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Invalid("AUC scores must be finite".into()));
    }
    let p = positive.iter().filter(|&&b| b).count() as u128;
    let n = positive.len() as u128 - p;
    if p == 0 || n == 0 {
        return Err(Error::InsufficientData(
            "AUC needs both positive and negative samples".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
    // Twice the midrank sum of the positives, kept in integers.
    let mut rank_sum2: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && scores[order[end + 1]] == scores[order[start]] {
            end += 1;
        }
        let doubled_rank = (start + 1 + end + 1) as u128;
        let pos_in_group = order[start..=end].iter().filter(|&&i| positive[i]).count() as u128;
        rank_sum2 += doubled_rank * pos_in_group;
        start = end + 1;
    }
    let u2 = rank_sum2 - p * (p + 1);
    Ok(u2 as f64 / (2 * p * n) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class_counts(fold: &[usize], labels: &[usize], c: usize) -> usize {
        fold.iter().filter(|&&i| labels[i] == c).count()
    }

    #[test]
    fn balanced_two_class_folds() {
        let labels = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let folds = stratified_kfold(&labels, 5, 3).unwrap();
        for f in &folds {
            assert_eq!(f.len(), 2);
            assert_eq!(class_counts(f, &labels, 0), 1);
        }
    }

    #[test]
    fn single_class_and_uneven_classes() {
        let folds = stratified_kfold(&[0; 9], 3, 1).unwrap();
        assert!(folds.iter().all(|f| f.len() == 3));

        let labels = [0, 0, 0, 0, 1, 1, 1];
        let folds = stratified_kfold(&labels, 3, 7).unwrap();
        let mut a: Vec<usize> = folds.iter().map(|f| class_counts(f, &labels, 0)).collect();
        a.sort_unstable();
        assert_eq!(a, vec![1, 1, 2]);
        assert!(folds.iter().all(|f| class_counts(f, &labels, 1) == 1));
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn fold_errors() {
        assert!(stratified_kfold(&[0, 1], 3, 0).is_err());
        assert!(stratified_kfold(&[0, 1, 0], 1, 0).is_err());
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[vec![3, 1], vec![0, 6]]).unwrap(), 0.9);
        assert_eq!(accuracy(&[vec![5, 0], vec![0, 5]]).unwrap(), 1.0);
        assert_eq!(accuracy(&[vec![0, 4], vec![4, 0]]).unwrap(), 0.0);
        assert!(accuracy(&[]).is_err());
        assert!(accuracy(&[vec![0, 0], vec![0, 0]]).is_err());
        assert!(accuracy(&[vec![1, 0], vec![0]]).is_err());
    }

    #[test]
    fn auc_examples() {
        let labels = [true, true, false, false];
        assert_eq!(roc_auc(&[0.9, 0.8, 0.1, 0.2], &labels).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.4; 4], &labels).unwrap(), 0.5);
        assert_eq!(roc_auc(&[0.8, 0.3, 0.5, 0.1], &labels).unwrap(), 0.75);
        assert!(roc_auc(&[0.1, 0.2], &[true, true]).is_err());
        assert_eq!(
            roc_auc(&[0.5f32, 0.5, 0.2], &[true, false, false]).unwrap(),
            0.75
        );
    }

    #[test]
    fn confusion_layout() {
        let mut m = ConfusionMatrix::new(vec!["a".into(), "b".into()]);
        m.record(1, 0);
        m.record(0, 0);
        assert_eq!(m.counts, vec![vec![1, 0], vec![1, 0]]);
        assert_eq!(m.total(), 2);
        let mut out = Vec::new();
        m.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "predicted\\actual,a,b\na,1,0\nb,1,0\n"
        );
    }
}
