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

//! Goodness of fit (Canberra distances), metric correlations, and PCA.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::dataset::{DatasetRow, DatasetTable, Domain, Subcategory};
use crate::error::{Error, Result};
use crate::metrics::TOPOLOGY_METRICS;
use crate::scalar::{pearson, Scalar};

pub use crate::linalg::symmetric_eigen;

/// `sum_i |p_i - q_i| / (|p_i| + |q_i|)`, with `0/0` terms counted as zero.
pub fn canberra_distance<F: Scalar>(p: &[F], q: &[F]) -> Result<F> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::InsufficientData(
            "Canberra distance of empty vectors".into(),
        ));
    }
    Ok(p.iter()
        .zip(q)
        .map(|(&a, &b)| {
            let den = a.abs() + b.abs();
            if den == F::zero() {
                F::zero()
            } else {
                (a - b).abs() / den
            }
        })
        .sum())
}

/// Mean distances between subcategories within one domain.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<F> {
    pub domain: Option<Domain>,
    pub subcategories: Vec<Subcategory>,
    /// `None` where no name has rows for both subcategories.
    pub mean: Vec<Vec<Option<F>>>,
    pub pairs: Vec<Vec<usize>>,
}

impl<F: Scalar> DistanceMatrix<F> {
    pub fn get(&self, a: Subcategory, b: Subcategory) -> Option<F> {
        let i = self.subcategories.iter().position(|&s| s == a)?;
        let j = self.subcategories.iter().position(|&s| s == b)?;
        self.mean[i][j]
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["subcategory".to_string()];
        header.extend(self.subcategories.iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for (i, s) in self.subcategories.iter().enumerate() {
            let mut record = vec![s.to_string()];
            record.extend(
                self.mean[i]
                    .iter()
                    .map(|v| v.map_or(String::new(), |x| x.to_string())),
            );
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GofReport<F> {
    pub matrices: Vec<DistanceMatrix<F>>,
    /// `(domain, name, subcategories missing for that name)`.
    pub unmatched: Vec<(Option<Domain>, String, Vec<Subcategory>)>,
}

impl<F: Scalar> GofReport<F> {
    pub fn for_domain(&self, domain: Option<Domain>) -> Option<&DistanceMatrix<F>> {
        self.matrices.iter().find(|m| m.domain == domain)
    }
}

/// For each domain, the mean Canberra distance between the seven size-free
/// metrics of same-name graphs, for every pair of subcategories present.
pub fn mean_distance_matrix<F: Scalar>(table: &DatasetTable<F>) -> Result<GofReport<F>> {
    type Group<'a, F> = BTreeMap<&'a str, BTreeMap<Subcategory, &'a DatasetRow<F>>>;
    let mut groups: BTreeMap<Option<Domain>, Group<'_, F>> = BTreeMap::new();
    for row in table.rows() {
        let sub = row
            .subcategory
            .ok_or_else(|| Error::Schema(vec!["subcategory".into()]))?;
        groups
            .entry(row.domain)
            .or_default()
            .entry(row.name.as_str())
            .or_default()
            .insert(sub, row);
    }
    let mut matrices = Vec::new();
    let mut unmatched = Vec::new();
    for (domain, names) in groups {
        let present: BTreeSet<Subcategory> =
            names.values().flat_map(|m| m.keys().copied()).collect();
        let subcategories: Vec<Subcategory> = Subcategory::ALL
            .into_iter()
            .filter(|s| present.contains(s))
            .collect();
        for (name, rows) in &names {
            let missing: Vec<Subcategory> = subcategories
                .iter()
                .copied()
                .filter(|s| !rows.contains_key(s))
                .collect();
            if !missing.is_empty() {
                unmatched.push((domain, name.to_string(), missing));
            }
        }
        let s = subcategories.len();
        let mut sums = vec![vec![F::zero(); s]; s];
        let mut pairs = vec![vec![0usize; s]; s];
        for rows in names.values() {
            for i in 0..s {
                let Some(a) = rows.get(&subcategories[i]) else {
                    continue;
                };
                for j in 0..s {
                    let Some(b) = rows.get(&subcategories[j]) else {
                        continue;
                    };
                    let d = canberra_distance(&a.features.topology(), &b.features.topology())?;
                    sums[i][j] = sums[i][j] + d;
                    pairs[i][j] += 1;
                }
            }
        }
        let mean = sums
            .iter()
            .zip(&pairs)
            .map(|(row, counts)| {
                row.iter()
                    .zip(counts)
                    .map(|(&sum, &c)| (c > 0).then(|| sum / F::from_usize_lossy(c)))
                    .collect()
            })
            .collect();
        matrices.push(DistanceMatrix {
            domain,
            subcategories,
            mean,
            pairs,
        });
    }
    Ok(GofReport {
        matrices,
        unmatched,
    })
}

/// Pearson correlations between the seven metric columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix<F> {
    pub metrics: Vec<&'static str>,
    pub values: Vec<Vec<F>>,
    /// Columns with zero variance; their off-diagonal entries are reported as 0.
    pub zero_variance: Vec<bool>,
    pub rows: usize,
}

impl<F: Scalar> CorrelationMatrix<F> {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["metric"];
        header.extend(self.metrics.iter().copied());
        w.write_record(&header)?;
        for (name, row) in self.metrics.iter().zip(&self.values) {
            let mut record = vec![name.to_string()];
            record.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn metric_columns<F: Scalar>(rows: &[&DatasetRow<F>]) -> Vec<Vec<F>> {
    (0..TOPOLOGY_METRICS.len())
        .map(|c| rows.iter().map(|r| r.features.topology()[c]).collect())
        .collect()
}

/// Correlation matrix over the rows of `domain` (all rows when `None`).
pub fn correlation_matrix<F: Scalar>(
    table: &DatasetTable<F>,
    domain: Option<Domain>,
) -> Result<CorrelationMatrix<F>> {
    let rows: Vec<&DatasetRow<F>> = table
        .rows()
        .iter()
        .filter(|r| domain.is_none() || r.domain == domain)
        .collect();
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 3 rows, got {}",
            rows.len()
        )));
    }
    let cols = metric_columns(&rows);
    let d = cols.len();
    let zero_variance: Vec<bool> = cols.iter().map(|c| c.iter().all(|&v| v == c[0])).collect();
    let mut values = vec![vec![F::zero(); d]; d];
    for i in 0..d {
        values[i][i] = F::one();
        for j in i + 1..d {
            let r = pearson(&cols[i], &cols[j]).unwrap_or(F::zero());
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        metrics: TOPOLOGY_METRICS.to_vec(),
        values,
        zero_variance,
        rows: rows.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcaRow<F> {
    pub name: String,
    pub domain: Option<Domain>,
    pub subcategory: Option<Subcategory>,
    pub pc1: F,
    pub pc2: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcaResult<F> {
    pub rows: Vec<PcaRow<F>>,
    /// Loadings of the two components over the seven metrics.
    pub components: [Vec<F>; 2],
    /// Variances along the two components (standardized units).
    pub variances: [F; 2],
}

impl<F: Scalar> PcaResult<F> {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["name", "domain", "pc1", "pc2"])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                r.domain.map_or(String::new(), |d| d.to_string()),
                r.pc1.to_string(),
                r.pc2.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Standardizes the seven metric columns and projects each row onto the two
/// leading principal axes. Each axis is oriented so its largest-magnitude
/// loading is positive.
pub fn pca_project<F: Scalar>(table: &DatasetTable<F>) -> Result<PcaResult<F>> {
    let rows: Vec<&DatasetRow<F>> = table.rows().iter().collect();
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "PCA needs at least 3 rows, got {}",
            rows.len()
        )));
    }
    let n = F::from_usize_lossy(rows.len());
    let mut cols = metric_columns(&rows);
    let mut informative = 0;
    for col in cols.iter_mut() {
        let mean = col.iter().copied().sum::<F>() / n;
        let var = col.iter().map(|&x| (x - mean) * (x - mean)).sum::<F>() / n;
        let sd = var.sqrt();
        let constant = col.iter().all(|&x| x == col[0]);
        for x in col.iter_mut() {
            *x = if constant {
                F::zero()
            } else {
                (*x - mean) / sd
            };
        }
        if !constant {
            informative += 1;
        }
    }
    if informative == 0 {
        return Err(Error::InsufficientData(
            "every metric column is constant".into(),
        ));
    }
    let d = cols.len();
    let mut cov = vec![vec![F::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let c = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(&a, &b)| a * b)
                .sum::<F>()
                / n;
            cov[i][j] = c;
            cov[j][i] = c;
        }
    }
    let (values, vectors) = symmetric_eigen(&cov);
    let component = |k: usize| -> Vec<F> {
        let mut v: Vec<F> = (0..d).map(|i| vectors[i][k]).collect();
        let mut lead = 0;
        for i in 1..d {
            if v[i].abs() > v[lead].abs() {
                lead = i;
            }
        }
        if v[lead] < F::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    };
    let components = [component(0), component(1)];
    let project = |r: usize, comp: &[F]| (0..d).map(|i| cols[i][r] * comp[i]).sum::<F>();
    let out = rows
        .iter()
        .enumerate()
        .map(|(r, row)| PcaRow {
            name: row.name.clone(),
            domain: row.domain,
            subcategory: row.subcategory,
            pc1: project(r, &components[0]),
            pc2: project(r, &components[1]),
        })
        .collect();
    Ok(PcaResult {
        rows: out,
        components,
        variances: [values[0].max(F::zero()), values[1].max(F::zero())],
    })
}
