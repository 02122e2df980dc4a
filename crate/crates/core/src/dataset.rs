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

//! Feature tables: one row per measured graph, with its domain and origin labels.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::ModelKind;
use crate::metrics::FeatureVector;
use crate::scalar::Scalar;

/// Exact header of feature CSV files.
pub const CSV_HEADER: [&str; 12] = [
    "name",
    "size",
    "density",
    "assort",
    "avg_clust",
    "avg_deg",
    "max_eigenv_c",
    "avg_path_length",
    "skew_deg_dist",
    "domain",
    "category",
    "subcategory",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Social,
    Food,
    Brain,
    Chems,
}

impl Domain {
    pub const ALL: [Domain; 4] = [Domain::Social, Domain::Food, Domain::Brain, Domain::Chems];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Social => "social",
            Domain::Food => "food",
            Domain::Brain => "brain",
            Domain::Chems => "chems",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "social" => Ok(Domain::Social),
            "food" => Ok(Domain::Food),
            "brain" => Ok(Domain::Brain),
            "chems" | "cheminformatics" => Ok(Domain::Chems),
            _ => Err(Error::Invalid(format!("unknown domain {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Real,
    Model,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Real => "real",
            Category::Model => "model",
        }
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" => Ok(Category::Real),
            "model" => Ok(Category::Model),
            _ => Err(Error::Invalid(format!("unknown category {s:?}"))),
        }
    }
}

/// `Real` for observed networks, otherwise the model that generated the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subcategory {
    Real,
    Model(ModelKind),
}

impl Subcategory {
    /// Canonical column order of distance matrices.
    pub const ALL: [Subcategory; 7] = [
        Subcategory::Real,
        Subcategory::Model(ModelKind::TwoK),
        Subcategory::Model(ModelKind::Cba),
        Subcategory::Model(ModelKind::Ws),
        Subcategory::Model(ModelKind::WsStd),
        Subcategory::Model(ModelKind::Dd),
        Subcategory::Model(ModelKind::Com),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subcategory::Real => "Real",
            Subcategory::Model(k) => k.as_str(),
        }
    }

    pub fn category(self) -> Category {
        match self {
            Subcategory::Real => Category::Real,
            Subcategory::Model(_) => Category::Model,
        }
    }
}

impl fmt::Display for Subcategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("real") {
            Ok(Subcategory::Real)
        } else {
            s.parse().map(Subcategory::Model)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRow<F> {
    /// Name of the real network; model counterparts share it.
    pub name: String,
    pub features: FeatureVector<F>,
    pub domain: Option<Domain>,
    pub category: Option<Category>,
    pub subcategory: Option<Subcategory>,
}

impl<F: Scalar> DatasetRow<F> {
    pub fn new(name: impl Into<String>, features: FeatureVector<F>) -> Self {
        DatasetRow {
            name: name.into(),
            features,
            domain: None,
            category: None,
            subcategory: None,
        }
    }

    pub fn labeled(mut self, domain: Domain, subcategory: Subcategory) -> Self {
        self.domain = Some(domain);
        self.category = Some(subcategory.category());
        self.subcategory = Some(subcategory);
        self
    }
}

/// Rows keyed by `(name, subcategory)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DatasetTable<F> {
    rows: Vec<DatasetRow<F>>,
}

impl<F: Scalar> DatasetTable<F> {
    pub fn new() -> Self {
        DatasetTable { rows: Vec::new() }
    }

    pub fn from_rows(rows: Vec<DatasetRow<F>>) -> Result<Self> {
        let mut table = DatasetTable::new();
        for row in rows {
            table.push(row)?;
        }
        Ok(table)
    }

    pub fn push(&mut self, row: DatasetRow<F>) -> Result<()> {
        if let (Some(c), Some(s)) = (row.category, row.subcategory) {
            if s.category() != c {
                return Err(Error::Invalid(format!(
                    "row {}: category {} contradicts subcategory {}",
                    row.name,
                    c.as_str(),
                    s
                )));
            }
        }
        if row.features.topology().iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!(
                "row {}: non-finite metric",
                row.name
            )));
        }
        if self
            .rows
            .iter()
            .any(|r| r.name == row.name && r.subcategory == row.subcategory)
        {
            return Err(Error::Invalid(format!(
                "duplicate row {} / {}",
                row.name,
                row.subcategory.map_or("-", Subcategory::as_str)
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[DatasetRow<F>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn filter(&self, keep: impl Fn(&DatasetRow<F>) -> bool) -> DatasetTable<F> {
        DatasetTable {
            rows: self.rows.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }

    pub fn domains(&self) -> Vec<Domain> {
        let mut d: Vec<Domain> = self.rows.iter().filter_map(|r| r.domain).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let f = &row.features;
            let mut record = vec![row.name.clone(), f.size.to_string()];
            record.extend(f.topology().iter().map(|v| v.to_string()));
            record.push(row.domain.map_or(String::new(), |d| d.to_string()));
            record.push(
                row.category
                    .map_or(String::new(), |c| c.as_str().to_string()),
            );
            record.push(row.subcategory.map_or(String::new(), |s| s.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a feature CSV. `name`, `size` and the seven metric columns are
    /// required; the label columns are optional and may be empty.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = r.headers()?.clone();
        let index = |name: &str| headers.iter().position(|h| h == name);
        let missing: Vec<String> = CSV_HEADER[..9]
            .iter()
            .filter(|c| index(c).is_none())
            .map(|c| c.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::Schema(missing));
        }
        let cols: Vec<usize> = CSV_HEADER[..9].iter().map(|c| index(c).unwrap()).collect();
        let (dom, cat, sub) = (index("domain"), index("category"), index("subcategory"));
        let mut table = DatasetTable::new();
        for (i, record) in r.records().enumerate() {
            let record = record?;
            let line = i + 2;
            let field = |c: usize| record.get(c).unwrap_or("");
            let number = |c: usize| -> Result<F> {
                field(c)
                    .parse::<f64>()
                    .map(F::from_f64_lossy)
                    .map_err(|_| Error::Parse {
                        line,
                        message: format!("column {:?}: not a number: {:?}", &headers[c], field(c)),
                    })
            };
            let size = field(cols[1]).parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("size is not an integer: {:?}", field(cols[1])),
            })?;
            let features = FeatureVector {
                size,
                density: number(cols[2])?,
                assort: number(cols[3])?,
                avg_clust: number(cols[4])?,
                avg_deg: number(cols[5])?,
                max_eigenv_c: number(cols[6])?,
                avg_path_length: number(cols[7])?,
                skew_deg_dist: number(cols[8])?,
            };
            fn optional<T: FromStr<Err = Error>>(
                v: Option<&str>,
                line: usize,
            ) -> Result<Option<T>> {
                match v {
                    None | Some("") => Ok(None),
                    Some(s) => s.parse().map(Some).map_err(|e: Error| Error::Parse {
                        line,
                        message: e.to_string(),
                    }),
                }
            }
            let row = DatasetRow {
                name: field(cols[0]).to_string(),
                features,
                domain: optional(dom.map(field), line)?,
                category: optional(cat.map(field), line)?,
                subcategory: optional(sub.map(field), line)?,
            };
            table.push(row)?;
        }
        Ok(table)
    }

    /// Names that occur with more than one domain label.
    pub fn conflicting_domains(&self) -> Vec<String> {
        let mut seen: std::collections::HashMap<&str, Option<Domain>> = Default::default();
        let mut bad = HashSet::new();
        for r in &self.rows {
            if let Some(prev) = seen.insert(&r.name, r.domain) {
                if prev != r.domain {
                    bad.insert(r.name.clone());
                }
            }
        }
        let mut out: Vec<String> = bad.into_iter().collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(x: f64) -> FeatureVector<f64> {
        FeatureVector {
            size: 10,
            density: x,
            assort: -x,
            avg_clust: x / 2.0,
            avg_deg: 3.0,
            max_eigenv_c: 0.4,
            avg_path_length: 0.25,
            skew_deg_dist: 1.5,
        }
    }

    #[test]
    fn csv_round_trip() {
        let table = DatasetTable::from_rows(vec![
            DatasetRow::new("a", fv(0.1)).labeled(Domain::Food, Subcategory::Real),
            DatasetRow::new("a", fv(0.2))
                .labeled(Domain::Food, Subcategory::Model(ModelKind::TwoK)),
            DatasetRow::new("b", fv(1.0 / 3.0)),
        ])
        .unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        assert!(text.contains("a,10,0.2,-0.2,0.1,3,0.4,0.25,1.5,food,model,2K"));
        let back = DatasetTable::<f64>::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn missing_columns_are_listed() {
        let text = "name,size,density,assort\nx,3,1,0\n";
        match DatasetTable::<f64>::read_csv(text.as_bytes()) {
            Err(Error::Schema(cols)) => {
                assert_eq!(
                    cols,
                    [
                        "avg_clust",
                        "avg_deg",
                        "max_eigenv_c",
                        "avg_path_length",
                        "skew_deg_dist"
                    ]
                )
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_duplicates_and_contradictions() {
        let mut t = DatasetTable::new();
        t.push(DatasetRow::new("a", fv(0.1)).labeled(Domain::Food, Subcategory::Real))
            .unwrap();
        assert!(t
            .push(DatasetRow::new("a", fv(0.1)).labeled(Domain::Food, Subcategory::Real))
            .is_err());
        let mut bad = DatasetRow::new("b", fv(0.1)).labeled(Domain::Food, Subcategory::Real);
        bad.category = Some(Category::Model);
        assert!(t.push(bad).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("Cheminformatics".parse::<Domain>().unwrap(), Domain::Chems);
        assert_eq!(
            "ws_std".parse::<Subcategory>().unwrap(),
            Subcategory::Model(ModelKind::WsStd)
        );
        assert_eq!("Real".parse::<Subcategory>().unwrap(), Subcategory::Real);
        assert!("kronecker".parse::<Subcategory>().is_err());
    }
}
