//! Combining model outputs into the four result sets.
//!
//! | scheme | per argument |
//! |--------|--------------|
//! | RS1 | categories of values with some descriptor probability ≥ threshold (0.8) |
//! | RS2 | RS1 ∪ baseline |
//! | RS3 | { c ∈ RS1 : reduce(c) ∈ reduced } |
//! | RS4 | RS1 ∪ { c ∈ baseline : reduce(c) ∈ reduced } |
//!
//! On any inputs, `RS3 ⊆ RS1 ⊆ RS4 ⊆ RS2`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{LabelMatrix, Level, ValueTaxonomy};
use crate::error::{Error, Result};
use crate::labelalg::{reduce_category, ReducedSpace};
use crate::tsv;

pub const DEFAULT_ENTAIL_THRESHOLD: f64 = 0.8;
pub const DEFAULT_CLASS_THRESHOLD: f64 = 0.5;

/// Argument id → predicted label names, in roster order.
pub type LabelSets = IndexMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorPrediction {
    pub argument_id: String,
    pub value_name: String,
    pub descriptor_index: usize,
    pub probability: f64,
}

fn check_probability(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

/// Reads a headerless descriptor-prediction file
/// `(argument_id, value_name, descriptor_index, probability)`.
pub fn parse_descriptor_predictions<R: Read>(
    input: R,
    taxonomy: &ValueTaxonomy,
) -> Result<Vec<DescriptorPrediction>> {
    const CTX: &str = "descriptor predictions";
    let malformed = |line, message: String| Error::Malformed {
        context: CTX.into(),
        line,
        message,
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for record in tsv::reader(input, false).records() {
        let record = record?;
        let line = tsv::line_of(&record);
        tsv::check_width(&record, 4, CTX)?;
        let argument_id = record[0].trim().to_string();
        let value_name = record[1].to_string();
        let descriptors = taxonomy
            .value(&value_name)
            .ok_or_else(|| malformed(line, format!("unknown value {value_name:?}")))?
            .descriptors
            .len();
        let descriptor_index: usize = record[2]
            .parse()
            .map_err(|_| malformed(line, format!("bad descriptor index {:?}", &record[2])))?;
        if descriptor_index >= descriptors {
            return Err(malformed(
                line,
                format!("{value_name:?} has no descriptor {descriptor_index}"),
            ));
        }
        let probability: f64 = record[3]
            .trim()
            .parse()
            .map_err(|_| malformed(line, format!("bad probability {:?}", &record[3])))?;
        if !check_probability(probability) {
            return Err(malformed(line, format!("probability {probability} outside [0, 1]")));
        }
        if !seen.insert((argument_id.clone(), value_name.clone(), descriptor_index)) {
            return Err(malformed(
                line,
                format!("duplicate prediction for ({argument_id}, {value_name}, {descriptor_index})"),
            ));
        }
        out.push(DescriptorPrediction {
            argument_id,
            value_name,
            descriptor_index,
            probability,
        });
    }
    Ok(out)
}

pub fn write_descriptor_predictions<W: Write>(
    output: W,
    predictions: &[DescriptorPrediction],
) -> Result<()> {
    let mut w = tsv::writer(output);
    for p in predictions {
        w.write_record([
            p.argument_id.clone(),
            p.value_name.clone(),
            p.descriptor_index.to_string(),
            p.probability.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<prediction output>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSpace {
    /// The 20 value categories.
    L2,
    /// The 12 prefix-merged classes.
    Reduced,
}

impl LabelSpace {
    pub fn labels(self, taxonomy: &ValueTaxonomy) -> Vec<String> {
        match self {
            LabelSpace::L2 => Level::L2.expected_columns(taxonomy),
            LabelSpace::Reduced => ReducedSpace::new(taxonomy)
                .names()
                .map(str::to_string)
                .collect(),
        }
    }
}

/// Classifier scores for one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPrediction {
    pub argument_id: String,
    pub label_space: LabelSpace,
    pub scores: IndexMap<String, f64>,
}

/// A whole class-prediction file. Score columns follow the label space's
/// canonical order whatever the file's column order was.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPredictions {
    pub label_space: LabelSpace,
    pub labels: Vec<String>,
    pub rows: IndexMap<String, Vec<f64>>,
}

impl ClassPredictions {
    pub fn get(&self, argument_id: &str) -> Option<ClassPrediction> {
        self.rows.get(argument_id).map(|scores| ClassPrediction {
            argument_id: argument_id.to_string(),
            label_space: self.label_space,
            scores: self.labels.iter().cloned().zip(scores.iter().copied()).collect(),
        })
    }

    pub fn from_rows(
        label_space: LabelSpace,
        taxonomy: &ValueTaxonomy,
        rows: impl IntoIterator<Item = ClassPrediction>,
    ) -> Result<Self> {
        let labels = label_space.labels(taxonomy);
        let mut out = IndexMap::new();
        for row in rows {
            let keys: BTreeSet<&str> = row.scores.keys().map(String::as_str).collect();
            let expected: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
            if row.label_space != label_space || keys != expected {
                return Err(Error::Malformed {
                    context: "class predictions".into(),
                    line: 0,
                    message: format!("row {:?} does not match the {label_space:?} label space", row.argument_id),
                });
            }
            let scores = labels.iter().map(|l| row.scores[l]).collect();
            out.insert(row.argument_id, scores);
        }
        Ok(ClassPredictions {
            label_space,
            labels,
            rows: out,
        })
    }

    pub fn write_tsv<W: Write>(&self, output: W, id_column: &str) -> Result<()> {
        let mut w = tsv::writer(output);
        w.write_record(std::iter::once(id_column).chain(self.labels.iter().map(String::as_str)))?;
        for (id, scores) in &self.rows {
            w.write_record(
                std::iter::once(id.clone()).chain(scores.iter().map(|s| s.to_string())),
            )?;
        }
        w.flush().map_err(|e| Error::io("<class output>", e))?;
        Ok(())
    }
}

/// Reads a class-prediction file whose header is the id column followed by
/// exactly the label space's names (any order). Cells are probabilities or 0/1.
pub fn parse_class_predictions<R: Read>(
    input: R,
    label_space: LabelSpace,
    taxonomy: &ValueTaxonomy,
    id_column: &str,
) -> Result<ClassPredictions> {
    let context = format!("{label_space:?} class predictions");
    let mut rdr = tsv::reader(input, true);
    let headers = rdr.headers()?.clone();
    let id_idx = headers
        .iter()
        .position(|h| h.trim() == id_column)
        .ok_or_else(|| Error::MissingColumn {
            context: context.clone(),
            column: id_column.to_string(),
        })?;
    let labels = label_space.labels(taxonomy);
    let position: HashMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut mapping = Vec::new();
    let mut unknown = Vec::new();
    let mut seen = HashSet::new();
    for (fi, h) in headers.iter().enumerate() {
        if fi == id_idx {
            continue;
        }
        match position.get(h.trim()) {
            Some(&li) if seen.insert(li) => mapping.push((fi, li)),
            _ => unknown.push(h.trim().to_string()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownColumns {
            context,
            names: unknown,
        });
    }
    if seen.len() != labels.len() {
        let names = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !seen.contains(i))
            .map(|(_, l)| l.clone())
            .collect();
        return Err(Error::MissingLabelColumns { context, names });
    }

    let mut rows = IndexMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = tsv::line_of(&record);
        tsv::check_width(&record, headers.len(), &context)?;
        let id = record[id_idx].trim().to_string();
        let mut scores = vec![0.0; labels.len()];
        for &(fi, li) in &mapping {
            let cell = record[fi].trim();
            let score: f64 = cell.parse().ok().filter(|p| check_probability(*p)).ok_or_else(|| {
                Error::Malformed {
                    context: context.clone(),
                    line,
                    message: format!("column {:?}: expected a probability, found {cell:?}", labels[li]),
                }
            })?;
            scores[li] = score;
        }
        if rows.insert(id.clone(), scores).is_some() {
            return Err(Error::Malformed {
                context,
                line,
                message: format!("duplicate argument id {id:?}"),
            });
        }
    }
    Ok(ClassPredictions {
        label_space,
        labels,
        rows,
    })
}

/// Labels whose score is at least `threshold`, per argument.
pub fn binarize_class_predictions(predictions: &ClassPredictions, threshold: f64) -> LabelSets {
    predictions
        .rows
        .iter()
        .map(|(id, scores)| {
            let on = predictions
                .labels
                .iter()
                .zip(scores)
                .filter(|(_, &s)| s >= threshold)
                .map(|(l, _)| l.clone())
                .collect();
            (id.clone(), on)
        })
        .collect()
}

/// Reorders `sets` to follow `roster`. Arguments absent from `sets` get an
/// empty set and are returned as the second element; ids outside the roster
/// are an error.
pub fn align_to_roster(sets: &LabelSets, roster: &[String]) -> Result<(LabelSets, Vec<String>)> {
    let known: HashSet<&str> = roster.iter().map(String::as_str).collect();
    let extra: Vec<String> = sets
        .keys()
        .filter(|id| !known.contains(id.as_str()))
        .cloned()
        .collect();
    if !extra.is_empty() {
        return Err(Error::NotInRoster(extra));
    }
    let mut missing = Vec::new();
    let aligned = roster
        .iter()
        .map(|id| {
            let set = sets.get(id).cloned().unwrap_or_else(|| {
                missing.push(id.clone());
                BTreeSet::new()
            });
            (id.clone(), set)
        })
        .collect();
    for id in &missing {
        log::warn!("argument {id} has no classifier prediction; using the empty set");
    }
    Ok((aligned, missing))
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Rs1,
    Rs2,
    Rs3,
    Rs4,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Rs1, Scheme::Rs2, Scheme::Rs3, Scheme::Rs4];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Rs1 => "rs1",
            Scheme::Rs2 => "rs2",
            Scheme::Rs3 => "rs3",
            Scheme::Rs4 => "rs4",
        }
    }

    pub fn needs_baseline(self) -> bool {
        matches!(self, Scheme::Rs2 | Scheme::Rs4)
    }

    pub fn needs_reduced(self) -> bool {
        matches!(self, Scheme::Rs3 | Scheme::Rs4)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

/// Predicted categories per argument. Every roster argument has an entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultSet {
    /// `None` for sets read back from a run file.
    pub scheme: Option<Scheme>,
    pub predictions: LabelSets,
}

impl ResultSet {
    pub fn get(&self, argument_id: &str) -> Option<&BTreeSet<String>> {
        self.predictions.get(argument_id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.predictions.keys().map(String::as_str)
    }

    /// Converts an L2 matrix (a run file or gold labels) into a result set.
    pub fn from_matrix(matrix: &LabelMatrix) -> Result<Self> {
        if matrix.level() != Level::L2 {
            return Err(Error::Taxonomy("run files are L2 matrices".into()));
        }
        let predictions = matrix
            .ids()
            .map(|id| (id.to_string(), matrix.positives(id).map(str::to_string).collect()))
            .collect();
        Ok(ResultSet {
            scheme: None,
            predictions,
        })
    }

    pub fn to_matrix(&self, taxonomy: &ValueTaxonomy) -> Result<LabelMatrix> {
        let columns = Level::L2.expected_columns(taxonomy);
        let mut rows = IndexMap::new();
        for (id, set) in &self.predictions {
            if let Some(bad) = set.iter().find(|c| taxonomy.category(c).is_none()) {
                return Err(Error::UnknownCategory(bad.clone()));
            }
            rows.insert(id.clone(), columns.iter().map(|c| set.contains(c)).collect());
        }
        LabelMatrix::new(Level::L2, columns, rows)
    }

    /// Writes the run-file shape: id column plus the 20 categories as 0/1.
    pub fn write_tsv<W: Write>(
        &self,
        output: W,
        taxonomy: &ValueTaxonomy,
        id_column: &str,
    ) -> Result<()> {
        self.to_matrix(taxonomy)?.write_tsv(output, id_column)
    }
}

/// RS1: keep values with any descriptor probability ≥ `threshold` and report
/// their categories. Roster arguments without predictions get the empty set
/// and are returned in the second element.
pub fn result_set_1(
    predictions: &[DescriptorPrediction],
    roster: &[String],
    taxonomy: &ValueTaxonomy,
    threshold: f64,
) -> Result<(ResultSet, Vec<String>)> {
    let mut sets: LabelSets = roster.iter().map(|id| (id.clone(), BTreeSet::new())).collect();
    let mut seen = HashSet::new();
    let mut outside = BTreeSet::new();
    for p in predictions {
        let category = taxonomy
            .category_of(&p.value_name)
            .ok_or_else(|| Error::UnknownValue(p.value_name.clone()))?;
        let Some(set) = sets.get_mut(&p.argument_id) else {
            outside.insert(p.argument_id.clone());
            continue;
        };
        seen.insert(p.argument_id.as_str());
        if p.probability >= threshold {
            set.insert(category.name.clone());
        }
    }
    if !outside.is_empty() {
        return Err(Error::NotInRoster(outside.into_iter().collect()));
    }
    let missing: Vec<String> = roster
        .iter()
        .filter(|id| !seen.contains(id.as_str()))
        .cloned()
        .collect();
    for id in &missing {
        log::warn!("argument {id} has no descriptor predictions; using the empty set");
    }
    Ok((
        ResultSet {
            scheme: Some(Scheme::Rs1),
            predictions: sets,
        },
        missing,
    ))
}

fn check_roster(rs1: &ResultSet, other: &LabelSets) -> Result<()> {
    let mut missing: Vec<String> = rs1
        .ids()
        .filter(|id| !other.contains_key(*id))
        .map(str::to_string)
        .collect();
    missing.extend(
        other
            .keys()
            .filter(|id| rs1.get(id).is_none())
            .cloned(),
    );
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::RosterMismatch(missing))
    }
}

/// RS2: RS1 ∪ baseline.
pub fn result_set_2(rs1: &ResultSet, baseline: &LabelSets) -> Result<ResultSet> {
    check_roster(rs1, baseline)?;
    let predictions = rs1
        .predictions
        .iter()
        .map(|(id, set)| (id.clone(), set.union(&baseline[id]).cloned().collect()))
        .collect();
    Ok(ResultSet {
        scheme: Some(Scheme::Rs2),
        predictions,
    })
}

fn mediated(categories: &BTreeSet<String>, reduced: &BTreeSet<String>) -> BTreeSet<String> {
    categories
        .iter()
        .filter(|c| reduced.contains(reduce_category(c)))
        .cloned()
        .collect()
}

/// RS3: categories of RS1 whose reduced class the reduced classifier predicted.
pub fn result_set_3(rs1: &ResultSet, reduced: &LabelSets) -> Result<ResultSet> {
    check_roster(rs1, reduced)?;
    let predictions = rs1
        .predictions
        .iter()
        .map(|(id, set)| (id.clone(), mediated(set, &reduced[id])))
        .collect();
    Ok(ResultSet {
        scheme: Some(Scheme::Rs3),
        predictions,
    })
}

/// RS4: RS1 ∪ (baseline ∩ reduced), the intersection taken through the
/// reduction map.
pub fn result_set_4(rs1: &ResultSet, baseline: &LabelSets, reduced: &LabelSets) -> Result<ResultSet> {
    check_roster(rs1, baseline)?;
    check_roster(rs1, reduced)?;
    let predictions = rs1
        .predictions
        .iter()
        .map(|(id, set)| {
            let mut out = set.clone();
            out.extend(mediated(&baseline[id], &reduced[id]));
            (id.clone(), out)
        })
        .collect();
    Ok(ResultSet {
        scheme: Some(Scheme::Rs4),
        predictions,
    })
}
