//! Shared-task scoring.
//!
//! Per category, precision, recall and F1 come from TP/FP/FN counted over
//! arguments, with 0 for every empty denominator. The overall score ("All")
//! is the harmonic mean of macro-precision and macro-recall, which is not the
//! same number as the mean of the per-category F1 scores; both are reported.

use std::collections::HashSet;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{LabelMatrix, Level};
use crate::ensemble::ResultSet;
use crate::error::{Error, Result};

/// Harmonic mean with the zero convention.
pub fn harmonic(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CategoryScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl CategoryScore {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        CategoryScore {
            precision,
            recall,
            f1: harmonic(precision, recall),
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
        }
    }

    pub fn support(&self) -> usize {
        self.true_positives + self.false_negatives
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreOptions {
    /// Leave categories without gold positives out of the macro averages.
    pub exclude_empty_gold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMetadata {
    /// Value used for 0/0 in precision, recall and F1.
    pub zero_division: f64,
    pub exclude_empty_gold: bool,
    pub excluded_categories: Vec<String>,
    pub arguments: usize,
    /// Gold arguments the run did not mention; scored as predicting nothing.
    pub missing_from_run: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub per_category: IndexMap<String, CategoryScore>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub overall_f1: f64,
    /// Mean of per-category F1 over the same categories as the macros.
    pub mean_category_f1: f64,
    pub metadata: ScoreMetadata,
}

/// Scores a run against gold L2 labels.
pub fn score_run(gold: &LabelMatrix, run: &ResultSet, options: &ScoreOptions) -> Result<ScoreReport> {
    if gold.level() != Level::L2 {
        return Err(Error::Taxonomy("gold labels must be L2".into()));
    }
    let not_in_gold: Vec<String> = run
        .ids()
        .filter(|id| gold.row(id).is_none())
        .map(str::to_string)
        .collect();
    if !not_in_gold.is_empty() {
        return Err(Error::NotInGold(not_in_gold));
    }
    let columns: HashSet<&str> = gold.columns().iter().map(String::as_str).collect();
    for set in run.predictions.values() {
        if let Some(bad) = set.iter().find(|c| !columns.contains(c.as_str())) {
            return Err(Error::UnknownCategory(bad.clone()));
        }
    }

    let n = gold.columns().len();
    let (mut tp, mut fp, mut fn_) = (vec![0usize; n], vec![0usize; n], vec![0usize; n]);
    let mut missing = Vec::new();
    for (id, bits) in gold.rows() {
        let predicted = run.get(id);
        if predicted.is_none() {
            log::warn!("argument {id} missing from run; scoring as all-negative");
            missing.push(id.clone());
        }
        for (i, (category, &g)) in gold.columns().iter().zip(bits).enumerate() {
            let p = predicted.is_some_and(|s| s.contains(category));
            match (g, p) {
                (true, true) => tp[i] += 1,
                (false, true) => fp[i] += 1,
                (true, false) => fn_[i] += 1,
                (false, false) => {}
            }
        }
    }

    let per_category: IndexMap<String, CategoryScore> = gold
        .columns()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), CategoryScore::from_counts(tp[i], fp[i], fn_[i])))
        .collect();
    let excluded: Vec<String> = if options.exclude_empty_gold {
        per_category
            .iter()
            .filter(|(_, s)| s.support() == 0)
            .map(|(c, _)| c.clone())
            .collect()
    } else {
        Vec::new()
    };
    let included: Vec<&CategoryScore> = per_category
        .iter()
        .filter(|(c, _)| !excluded.contains(c))
        .map(|(_, s)| s)
        .collect();
    let mean = |f: fn(&CategoryScore) -> f64| {
        if included.is_empty() {
            0.0
        } else {
            included.iter().map(|s| f(s)).sum::<f64>() / included.len() as f64
        }
    };
    let macro_precision = mean(|s| s.precision);
    let macro_recall = mean(|s| s.recall);
    Ok(ScoreReport {
        macro_precision,
        macro_recall,
        overall_f1: harmonic(macro_precision, macro_recall),
        mean_category_f1: mean(|s| s.f1),
        metadata: ScoreMetadata {
            zero_division: 0.0,
            exclude_empty_gold: options.exclude_empty_gold,
            excluded_categories: excluded,
            arguments: gold.len(),
            missing_from_run: missing,
        },
        per_category,
    })
}

/// Mean of the F1 scores of the positive and the negative class.
pub fn binary_macro_f1(gold: &[bool], predicted: &[bool]) -> Result<f64> {
    if gold.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            gold: gold.len(),
            predicted: predicted.len(),
        });
    }
    let class_f1 = |class: bool| {
        let (mut tp, mut fp, mut fn_) = (0, 0, 0);
        for (&g, &p) in gold.iter().zip(predicted) {
            match (g == class, p == class) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (true, false) => fn_ += 1,
                (false, false) => {}
            }
        }
        CategoryScore::from_counts(tp, fp, fn_).f1
    };
    Ok((class_f1(true) + class_f1(false)) / 2.0)
}

fn fmt_num(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

fn render_rows(header: [&str; 4], rows: &[(String, [f64; 3])], decimals: usize) -> String {
    let name_width = rows
        .iter()
        .map(|(n, _)| n.chars().count())
        .chain(std::iter::once(header[0].len()))
        .max()
        .unwrap_or(0);
    let num_width = header[1..]
        .iter()
        .map(|h| h.len())
        .max()
        .unwrap_or(0)
        .max(decimals + 2);
    let mut out = String::new();
    let _ = write!(out, "{:<name_width$}", header[0]);
    for h in &header[1..] {
        let _ = write!(out, "  {h:>num_width$}");
    }
    out.push('\n');
    for (name, nums) in rows {
        let _ = write!(out, "{name:<name_width$}");
        for x in nums {
            let _ = write!(out, "  {:>num_width$}", fmt_num(*x, decimals));
        }
        out.push('\n');
    }
    out
}

/// Side-by-side overall scores, one row per report, best overall F1 first.
pub fn compare_reports(reports: &[(String, ScoreReport)], decimals: usize) -> String {
    let mut rows: Vec<(String, [f64; 3])> = reports
        .iter()
        .map(|(name, r)| (name.clone(), [r.overall_f1, r.macro_precision, r.macro_recall]))
        .collect();
    rows.sort_by(|a, b| b.1[0].total_cmp(&a.1[0]));
    render_rows(["Model", "F1", "Precision", "Recall"], &rows, decimals)
}

/// Per-category table followed by the overall ("All") row.
pub fn render_report(report: &ScoreReport, decimals: usize) -> String {
    let mut rows: Vec<(String, [f64; 3])> = report
        .per_category
        .iter()
        .map(|(c, s)| (c.clone(), [s.precision, s.recall, s.f1]))
        .collect();
    rows.push((
        "All".to_string(),
        [report.macro_precision, report.macro_recall, report.overall_f1],
    ));
    render_rows(["Category", "Precision", "Recall", "F1"], &rows, decimals)
}
