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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use netfit::dataset::DatasetTable;

fn netfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netfit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/sample")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_triangle_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.txt");
    let path = dir.path().join("path.txt");
    fs::write(&tri, "a b\nb c\nc a\n").unwrap();
    fs::write(&path, "x y\n\n# comment\ny z\n").unwrap();
    let out = netfit(&["measure", s(&tri), s(&path), "--seed", "1"]);
    assert!(out.status.success());
    let table = DatasetTable::<f64>::read_csv(&out.stdout[..]).unwrap();
    let rows = table.rows();
    assert_eq!(rows.len(), 2);
    assert_eq!(
        (rows[0].name.as_str(), rows[1].name.as_str()),
        ("tri", "path")
    );
    assert_eq!(rows[0].features.density, 1.0);
    assert_eq!(rows[0].features.avg_clust, 1.0);
    let header = String::from_utf8(out.stdout).unwrap();
    assert!(header.starts_with(
        "name,size,density,assort,avg_clust,avg_deg,max_eigenv_c,avg_path_length,skew_deg_dist,domain,category,subcategory\n"
    ));
}

#[test]
fn measure_reports_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let out = netfit(&["measure", s(&empty), "--seed", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty.txt"));
}

#[test]
fn missing_seed_is_drawn_and_printed() {
    let out = netfit(&["measure", s(&sample("chems_01.edges"))]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    let seed = err
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .expect("seed printed");
    seed.parse::<u64>().unwrap();
}

#[test]
fn pipeline_gof_stability_classify() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let manifest = root.join("manifest.csv");
    fs::write(
        &manifest,
        format!(
            "name,path,domain\nmol,{},chems\nmol2,{},chems\nweb,{},food\nweb2,{},food\n",
            s(&sample("chems_01.edges")),
            s(&sample("chems_02.edges")),
            s(&sample("food_01.edges")),
            s(&sample("food_02.edges"))
        ),
    )
    .unwrap();
    let config = root.join("quick.conf");
    fs::write(
        &config,
        "# quick settings\nfit_replicates = 2\nbudget = 15\nseed = 5\n",
    )
    .unwrap();
    let p = root.join("p");
    let out = netfit(&[
        "pipeline",
        s(&manifest),
        "--out",
        s(&p),
        "--config",
        s(&config),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table =
        DatasetTable::<f64>::read_csv(fs::File::open(p.join("dataset.csv")).unwrap()).unwrap();
    assert_eq!(table.len(), 28);
    for name in ["mol", "web"] {
        let sizes: Vec<usize> = table
            .rows()
            .iter()
            .filter(|r| r.name == name)
            .map(|r| r.features.size)
            .collect();
        assert_eq!(sizes.len(), 7);
        assert!(sizes.iter().all(|&n| n == sizes[0]), "{name}: {sizes:?}");
    }
    assert!(p.join("fits/mol.json").exists());
    assert!(p.join("graphs/web__2K.edges").exists());

    let again = root.join("again");
    netfit(&[
        "pipeline",
        s(&manifest),
        "--out",
        s(&again),
        "--config",
        s(&config),
    ]);
    assert_eq!(
        fs::read(p.join("dataset.csv")).unwrap(),
        fs::read(again.join("dataset.csv")).unwrap()
    );

    let g = root.join("g");
    let out = netfit(&[
        "gof",
        s(&p.join("dataset.csv")),
        "--out",
        s(&g),
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    let gof = fs::read_to_string(g.join("gof_chems.csv")).unwrap();
    let mut lines = gof.lines();
    assert_eq!(
        lines.next().unwrap(),
        "subcategory,Real,2K,CBA,WS,WS_STD,DD,Com"
    );
    assert!(lines.next().unwrap().starts_with("Real,0,"));
    assert!(g.join("pca.csv").exists());

    let st = root.join("st");
    let out = netfit(&[
        "stability",
        s(&sample("chems_01.edges")),
        "--replicates",
        "30",
        "--model",
        "2K,DD",
        "--out",
        s(&st),
        "--config",
        s(&config),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta: serde_json::Value =
        serde_json::from_slice(&fs::read(st.join("stability_meta.json")).unwrap()).unwrap();
    assert_eq!(meta["replicates"], 30);
    let csv = fs::read_to_string(st.join("stability.csv")).unwrap();
    assert!(csv.starts_with("model,metric,mean,std,min,q1,median,q3,max,failures\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 7);

    let c = root.join("c");
    let out = netfit(&[
        "classify",
        s(&p.join("dataset.csv")),
        "--task",
        "category",
        "--model",
        "forest",
        "--folds",
        "2",
        "--domain",
        "chems",
        "--out",
        s(&c),
        "--seed",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(c.join("classify_category_chems_forest.json")).unwrap())
            .unwrap();
    assert_eq!(report["hyperparameters"]["trees"], 100);
    assert_eq!(report["positive_class"], "model");
    assert!(report["pooled_auc"].is_number());
    assert!(c
        .join("classify_category_chems_forest_confusion.csv")
        .exists());

    let out = netfit(&[
        "classify",
        s(&p.join("dataset.csv")),
        "--task",
        "domain",
        "--folds",
        "2",
        "--out",
        s(&c),
        "--seed",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(c.join("classify_domain_tree.json").exists());
    assert!(c.join("classify_domain_forest.json").exists());

    // Four real networks cannot fill five folds.
    let out = netfit(&[
        "classify",
        s(&p.join("dataset.csv")),
        "--task",
        "domain",
        "--folds",
        "5",
        "--out",
        s(&c),
        "--seed",
        "3",
    ]);
    assert!(!out.status.success());
}

#[test]
fn schema_errors_list_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "name,size,density,assort\ng,3,1,0\n").unwrap();
    let out = netfit(&[
        "gof",
        s(&bad),
        "--out",
        s(&dir.path().join("o")),
        "--seed",
        "1",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("avg_clust") && err.contains("skew_deg_dist"),
        "{err}"
    );
}

#[test]
fn generate_from_request() {
    let dir = tempfile::tempdir().unwrap();
    let req = dir.path().join("req.json");
    fs::write(
        &req,
        r#"{"model":"WS","params":{"n":20,"k":4,"p":0.0},"seed":3}"#,
    )
    .unwrap();
    let out = netfit(&["generate", s(&req)]);
    assert!(out.status.success());
    let g = netfit::parse_edge_list(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (20, 40));
}
