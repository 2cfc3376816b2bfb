//! Generators and independent oracles shared by the integration suites. The
//! oracles recompute everything from the raw definitions and never call the
//! library routine they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use valuesift::corpus::{Argument, L1Value, L2Category, LabelMatrix, Level, ValueTaxonomy};
use valuesift::ensemble::{DescriptorPrediction, LabelSets};
use valuesift::pairgen::{EntailmentPair, PairKind};

/// Toy taxonomy with at most `max_c` categories × `max_v` values ×
/// `max_d` descriptors. Some categories share a `Prefix:` so the reduced
/// space merges them.
pub fn random_taxonomy<R: Rng>(rng: &mut R, max_c: usize, max_v: usize, max_d: usize) -> ValueTaxonomy {
    let n_cat = rng.gen_range(1..=max_c);
    let prefixes = ["Alpha", "Beta", "Gamma"];
    let mut value_no = 0;
    let categories = (0..n_cat)
        .map(|ci| {
            let name = if rng.gen_bool(0.6) {
                format!("{}: sub{ci}", prefixes[rng.gen_range(0..prefixes.len())])
            } else {
                format!("Solo{ci}")
            };
            let values = (0..rng.gen_range(1..=max_v))
                .map(|_| {
                    value_no += 1;
                    L1Value {
                        name: format!("Value {value_no}"),
                        descriptors: (0..rng.gen_range(1..=max_d))
                            .map(|d| format!("descriptor {d} of value {value_no}"))
                            .collect(),
                    }
                })
                .collect();
            L2Category { name, values }
        })
        .collect();
    ValueTaxonomy::new(categories).expect("generated taxonomy is valid")
}

pub fn arguments(n: usize) -> Vec<Argument> {
    (0..n)
        .map(|i| Argument {
            id: format!("arg{i:03}"),
            conclusion: format!("conclusion {i}"),
            stance: if i % 2 == 0 { "in favor of" } else { "against" }.into(),
            premise: format!("premise {i}"),
        })
        .collect()
}

/// Random L1 labels; each value is positive with probability `p`.
pub fn random_l1<R: Rng>(rng: &mut R, taxonomy: &ValueTaxonomy, args: &[Argument], p: f64) -> LabelMatrix {
    let columns = Level::L1.expected_columns(taxonomy);
    let rows: IndexMap<String, Vec<bool>> = args
        .iter()
        .map(|a| (a.id.clone(), columns.iter().map(|_| rng.gen_bool(p)).collect()))
        .collect();
    LabelMatrix::new(Level::L1, columns, rows).unwrap()
}

/// Checks every pair-generation invariant for one dataset from first
/// principles. Returns a description of the first violation.
pub fn check_pair_invariants(
    taxonomy: &ValueTaxonomy,
    args: &[Argument],
    l1: &LabelMatrix,
    pairs: &[EntailmentPair],
) -> Result<(), String> {
    // value -> (category, descriptor count)
    let mut owner: HashMap<&str, (&str, usize)> = HashMap::new();
    for c in taxonomy.categories() {
        for v in &c.values {
            owner.insert(&v.name, (&c.name, v.descriptors.len()));
        }
    }
    let mut by_arg: BTreeMap<&str, Vec<&EntailmentPair>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for p in pairs {
        if !seen.insert((&p.argument_id, &p.value_name, p.description.descriptor_index)) {
            return Err(format!("duplicate pair {:?}", (&p.argument_id, &p.value_name)));
        }
        if p.label != (p.kind == PairKind::Positive) {
            return Err(format!("label/kind disagree on {p:?}"));
        }
        by_arg.entry(&p.argument_id).or_default().push(p);
    }
    for a in args {
        let row = l1.row(&a.id).ok_or("missing label row")?;
        let positive: BTreeSet<&str> = l1
            .columns()
            .iter()
            .zip(row)
            .filter(|(_, &b)| b)
            .map(|(c, _)| c.as_str())
            .collect();
        let positive_cats: BTreeSet<&str> = positive.iter().map(|v| owner[v].0).collect();
        let n: usize = positive.iter().map(|v| owner[v].1).sum();
        let mut difficult_pool = 0;
        let mut easy_pool = 0;
        for (v, (c, d)) in &owner {
            if positive.contains(v) {
                continue;
            }
            if positive_cats.contains(c) {
                difficult_pool += d;
            } else {
                easy_pool += d;
            }
        }
        let mine = by_arg.remove(a.id.as_str()).unwrap_or_default();
        let (mut pos, mut diff, mut easy) = (0, 0, 0);
        for p in &mine {
            let (cat, count) = *owner.get(p.value_name.as_str()).ok_or("unknown value")?;
            if p.category_name != cat {
                return Err(format!("wrong category on {p:?}"));
            }
            if p.description.descriptor_index >= count {
                return Err(format!("descriptor out of range on {p:?}"));
            }
            let is_pos = positive.contains(p.value_name.as_str());
            match p.kind {
                PairKind::Positive => {
                    if !is_pos {
                        return Err(format!("positive pair on a negative value: {p:?}"));
                    }
                    pos += 1;
                }
                PairKind::NegativeDifficult => {
                    if is_pos || !positive_cats.contains(cat) {
                        return Err(format!("bad difficult negative {p:?}"));
                    }
                    diff += 1;
                }
                PairKind::NegativeEasy => {
                    if is_pos || positive_cats.contains(cat) {
                        return Err(format!("bad easy negative {p:?}"));
                    }
                    easy += 1;
                }
            }
        }
        if pos != n {
            return Err(format!("{}: {pos} positives, expected {n}", a.id));
        }
        let pools_suffice = difficult_pool >= n.div_ceil(2) && easy_pool >= n / 2;
        if pools_suffice {
            if diff + easy != n {
                return Err(format!("{}: {} negatives for {n} positives", a.id, diff + easy));
            }
            if !(diff == easy || diff == easy + 1) {
                return Err(format!("{}: difficult {diff} vs easy {easy}", a.id));
            }
        } else if diff + easy != n.min(difficult_pool + easy_pool) {
            return Err(format!("{}: shortfall not filled from the other pool", a.id));
        }
    }
    if let Some((id, _)) = by_arg.into_iter().next() {
        return Err(format!("pairs for unknown argument {id}"));
    }
    Ok(())
}

/// Whether both negative pools cover their quotas for this argument.
pub fn pools_suffice(taxonomy: &ValueTaxonomy, l1: &LabelMatrix, id: &str) -> bool {
    let positive: BTreeSet<&str> = l1.positives(id).collect();
    let mut n = 0;
    let (mut d, mut e) = (0, 0);
    for c in taxonomy.categories() {
        let touched = c.values.iter().any(|v| positive.contains(v.name.as_str()));
        for v in &c.values {
            let k = v.descriptors.len();
            if positive.contains(v.name.as_str()) {
                n += k;
            } else if touched {
                d += k;
            } else {
                e += k;
            }
        }
    }
    d >= n.div_ceil(2) && e >= n / 2
}

/// Brute-force scorer: per category (P, R, F1), then macro P, macro R and
/// their harmonic mean. Empty denominators give 0.
pub struct BruteScore {
    pub per_category: Vec<(String, f64, f64, f64)>,
    /// (tp, fp, fn) per category, in the same order.
    pub counts: Vec<(usize, usize, usize)>,
    pub macro_p: f64,
    pub macro_r: f64,
    pub overall: f64,
}

pub fn brute_force_score(
    categories: &[String],
    gold: &BTreeMap<String, BTreeSet<String>>,
    run: &BTreeMap<String, BTreeSet<String>>,
) -> BruteScore {
    let empty = BTreeSet::new();
    let mut per_category = Vec::new();
    let mut counts = Vec::new();
    for c in categories {
        let mut confusion = [[0u32; 2]; 2]; // [gold][pred]
        for (id, g) in gold {
            let p = run.get(id).unwrap_or(&empty);
            confusion[g.contains(c) as usize][p.contains(c) as usize] += 1;
        }
        let tp = confusion[1][1] as f64;
        let fp = confusion[0][1] as f64;
        let fn_ = confusion[1][0] as f64;
        let p = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let r = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
        let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        per_category.push((c.clone(), p, r, f));
        counts.push((confusion[1][1] as usize, confusion[0][1] as usize, confusion[1][0] as usize));
    }
    let k = categories.len() as f64;
    let macro_p = per_category.iter().map(|x| x.1).sum::<f64>() / k;
    let macro_r = per_category.iter().map(|x| x.2).sum::<f64>() / k;
    let overall = if macro_p + macro_r > 0.0 {
        2.0 * macro_p * macro_r / (macro_p + macro_r)
    } else {
        0.0
    };
    BruteScore {
        per_category,
        counts,
        macro_p,
        macro_r,
        overall,
    }
}

/// Profile of predicting every category for every argument, derived from gold
/// counts alone: precision = prevalence, recall = 1 for populated categories.
pub fn prevalence_profile(gold: &LabelMatrix) -> (Vec<(f64, f64)>, f64, f64, f64) {
    let n = gold.len() as f64;
    let per: Vec<(f64, f64)> = (0..gold.columns().len())
        .map(|i| {
            let count = gold.rows().values().filter(|r| r[i]).count() as f64;
            (count / n, if count > 0.0 { 1.0 } else { 0.0 })
        })
        .collect();
    let k = per.len() as f64;
    let mp = per.iter().map(|x| x.0).sum::<f64>() / k;
    let mr = per.iter().map(|x| x.1).sum::<f64>() / k;
    let f = if mp + mr > 0.0 { 2.0 * mp * mr / (mp + mr) } else { 0.0 };
    (per, mp, mr, f)
}

/// Random descriptor predictions over the whole taxonomy; some arguments may be
/// left without any prediction.
pub fn random_descriptor_predictions<R: Rng>(
    rng: &mut R,
    taxonomy: &ValueTaxonomy,
    roster: &[String],
) -> Vec<DescriptorPrediction> {
    let mut out = Vec::new();
    for id in roster {
        if rng.gen_bool(0.1) {
            continue;
        }
        for (_, v) in taxonomy.values() {
            for i in 0..v.descriptors.len() {
                if rng.gen_bool(0.8) {
                    out.push(DescriptorPrediction {
                        argument_id: id.clone(),
                        value_name: v.name.clone(),
                        descriptor_index: i,
                        probability: rng.gen_range(0.0..=1.0),
                    });
                }
            }
        }
    }
    out.shuffle(rng);
    out
}

pub fn random_sets<R: Rng>(rng: &mut R, labels: &[String], roster: &[String]) -> LabelSets {
    roster
        .iter()
        .map(|id| {
            let set = labels
                .iter()
                .filter(|_| rng.gen_bool(0.35))
                .cloned()
                .collect();
            (id.clone(), set)
        })
        .collect()
}

/// The four schemes recomputed straight from their definitions.
pub fn brute_force_schemes(
    taxonomy: &ValueTaxonomy,
    predictions: &[DescriptorPrediction],
    roster: &[String],
    threshold: f64,
    baseline: &LabelSets,
    reduced: &LabelSets,
) -> [BTreeMap<String, BTreeSet<String>>; 4] {
    let reduce = |c: &str| -> String {
        match c.find(':') {
            Some(i) => c[..i].trim_end().to_string(),
            None => c.to_string(),
        }
    };
    let mut rs1: BTreeMap<String, BTreeSet<String>> =
        roster.iter().map(|id| (id.clone(), BTreeSet::new())).collect();
    for p in predictions {
        if p.probability >= threshold {
            let cat = taxonomy
                .categories()
                .iter()
                .find(|c| c.values.iter().any(|v| v.name == p.value_name))
                .unwrap();
            rs1.get_mut(&p.argument_id).unwrap().insert(cat.name.clone());
        }
    }
    let mut rs2 = BTreeMap::new();
    let mut rs3 = BTreeMap::new();
    let mut rs4 = BTreeMap::new();
    for id in roster {
        let r1 = &rs1[id];
        let b = &baseline[id];
        let r = &reduced[id];
        rs2.insert(id.clone(), r1.iter().chain(b).cloned().collect());
        rs3.insert(
            id.clone(),
            r1.iter().filter(|c| r.contains(&reduce(c))).cloned().collect(),
        );
        let mut four = r1.clone();
        for c in b {
            if r.contains(&reduce(c)) {
                four.insert(c.clone());
            }
        }
        rs4.insert(id.clone(), four);
    }
    [rs1, rs2, rs3, rs4]
}

pub fn to_btree(sets: &LabelSets) -> BTreeMap<String, BTreeSet<String>> {
    sets.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

/// A labeled toy split written to disk with a config file pointing at it.
pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub taxonomy: ValueTaxonomy,
    pub split: valuesift::sample::SampleSplit,
}

impl Fixture {
    pub fn new(size: usize, seed: u64) -> Self {
        let taxonomy = valuesift::sample::taxonomy();
        let split = valuesift::sample::corpus(&taxonomy, size, seed);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        std::fs::write(p.join("values.json"), taxonomy.to_json()).unwrap();
        std::fs::write(
            p.join("arguments-dev.tsv"),
            valuesift::sample::arguments_tsv(&split.arguments),
        )
        .unwrap();
        std::fs::write(p.join("level1-labels-dev.tsv"), valuesift::sample::labels_tsv(&split.l1)).unwrap();
        std::fs::write(p.join("labels-dev.tsv"), valuesift::sample::labels_tsv(&split.l2)).unwrap();
        let config = serde_json::json!({
            "taxonomy": "values.json",
            "splits": {
                "dev": {
                    "arguments": "arguments-dev.tsv",
                    "labels_l1": "level1-labels-dev.tsv",
                    "labels_l2": "labels-dev.tsv"
                }
            },
            "seed": 42,
            "out": "out"
        });
        std::fs::write(p.join("config.json"), serde_json::to_string_pretty(&config).unwrap()).unwrap();
        Fixture { dir, taxonomy, split }
    }

    pub fn path(&self, name: &str) -> std::path::PathBuf {
        self.dir.path().join(name)
    }

    pub fn config(&self) -> std::path::PathBuf {
        self.path("config.json")
    }

    pub fn out(&self, name: &str) -> std::path::PathBuf {
        self.path("out").join(name)
    }

    /// Every category has at least one gold positive.
    pub fn all_categories_populated(&self) -> bool {
        (0..self.split.l2.columns().len()).all(|i| self.split.l2.rows().values().any(|r| r[i]))
    }

    /// Runs the binary with `--config` and the given arguments.
    pub fn run(&self, args: &[&str]) -> std::process::Output {
        std::process::Command::new(env!("CARGO_BIN_EXE_valuesift"))
            .arg("--config")
            .arg(self.config())
            .args(args)
            .output()
            .expect("binary runs")
    }
}

pub fn sha256_file(path: &std::path::Path) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(std::fs::read(path).unwrap()))
}
