//! Model-free stand-ins for the entailment model and the two classifiers.
//! They write the same prediction files as real model runs, which makes the
//! whole pipeline runnable and testable without a GPU.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Argument, LabelMatrix, ValueTaxonomy};
use crate::ensemble::{ClassPrediction, ClassPredictions, DescriptorPrediction, LabelSpace};
use crate::error::{Error, Result};
use crate::labelalg::{l1_matrix_to_l2, reduce_category};
use crate::textgen::{build_argument_text, build_description_text, TextPolicy};

/// Half-width of the optional uniform noise added to every score.
pub const NOISE_AMPLITUDE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum StubMode {
    LexicalOverlap,
    Constant,
    OracleFromGold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StubConfig {
    pub mode: StubMode,
    #[serde(default)]
    pub constant_value: Option<f64>,
    #[serde(default)]
    pub noise_seed: Option<u64>,
}

impl StubConfig {
    pub fn lexical() -> Self {
        StubConfig {
            mode: StubMode::LexicalOverlap,
            constant_value: None,
            noise_seed: None,
        }
    }

    pub fn constant(value: f64) -> Self {
        StubConfig {
            mode: StubMode::Constant,
            constant_value: Some(value),
            noise_seed: None,
        }
    }

    pub fn oracle() -> Self {
        StubConfig {
            mode: StubMode::OracleFromGold,
            constant_value: None,
            noise_seed: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.mode, self.constant_value) {
            (StubMode::Constant, None) => Err(Error::StubConfig(
                "constant mode needs constant_value".into(),
            )),
            (StubMode::Constant, Some(v)) if !(0.0..=1.0).contains(&v) => Err(Error::StubConfig(
                format!("constant_value {v} outside [0, 1]"),
            )),
            (StubMode::LexicalOverlap | StubMode::OracleFromGold, Some(_)) => Err(
                Error::StubConfig("constant_value is only valid in constant mode".into()),
            ),
            _ => Ok(()),
        }
    }
}

/// Lowercased alphanumeric word types.
fn word_types(text: &str) -> HashSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Share of `probe`'s word types that also occur in `reference`.
pub fn lexical_overlap(reference: &str, probe: &str) -> f64 {
    let probe = word_types(probe);
    if probe.is_empty() {
        return 0.0;
    }
    let reference = word_types(reference);
    probe.iter().filter(|w| reference.contains(*w)).count() as f64 / probe.len() as f64
}

#[derive(Debug, Clone)]
pub struct StubScorer {
    config: StubConfig,
}

impl StubScorer {
    pub fn new(config: StubConfig) -> Result<Self> {
        config.validate()?;
        Ok(StubScorer { config })
    }

    pub fn config(&self) -> &StubConfig {
        &self.config
    }

    fn noisy(&self, score: f64, keys: &[&str]) -> f64 {
        let Some(seed) = self.config.noise_seed else {
            return score;
        };
        let mut h = Sha256::new();
        h.update(seed.to_le_bytes());
        for k in keys {
            h.update((k.len() as u64).to_le_bytes());
            h.update(k.as_bytes());
        }
        let digest = h.finalize();
        let mut raw = [0u8; 8];
        raw.copy_from_slice(&digest[..8]);
        let unit = (u64::from_le_bytes(raw) >> 11) as f64 / (1u64 << 53) as f64;
        (score + (2.0 * unit - 1.0) * NOISE_AMPLITUDE).clamp(0.0, 1.0)
    }

    /// Entailment probability for one pair. `gold` is the pair's L1 label and
    /// is required in oracle mode only.
    pub fn entailment_score(
        &self,
        argument_text: &str,
        description_text: &str,
        gold: Option<bool>,
    ) -> Result<f64> {
        let raw = match self.config.mode {
            StubMode::LexicalOverlap => lexical_overlap(argument_text, description_text),
            StubMode::Constant => self.config.constant_value.unwrap_or_default(),
            StubMode::OracleFromGold => match gold {
                Some(true) => 1.0,
                Some(false) => 0.0,
                None => return Err(Error::StubConfig("oracle mode needs gold labels".into())),
            },
        };
        Ok(self.noisy(raw, &[argument_text, description_text]))
    }

    /// Classifier scores for one argument. `gold_l2` is the argument's gold
    /// category set (oracle mode only); reduced-space gold is derived from it.
    pub fn class_scores(
        &self,
        argument_id: &str,
        argument_text: &str,
        label_space: LabelSpace,
        taxonomy: &ValueTaxonomy,
        gold_l2: Option<&BTreeSet<String>>,
    ) -> Result<ClassPrediction> {
        let labels = label_space.labels(taxonomy);
        let gold: Option<BTreeSet<&str>> = gold_l2.map(|g| match label_space {
            LabelSpace::L2 => g.iter().map(String::as_str).collect(),
            LabelSpace::Reduced => g.iter().map(|c| reduce_category(c)).collect(),
        });
        let mut scores = indexmap::IndexMap::new();
        for label in labels {
            let raw = match self.config.mode {
                StubMode::LexicalOverlap => lexical_overlap(argument_text, &label),
                StubMode::Constant => self.config.constant_value.unwrap_or_default(),
                StubMode::OracleFromGold => match &gold {
                    Some(g) => f64::from(u8::from(g.contains(label.as_str()))),
                    None => {
                        return Err(Error::StubConfig("oracle mode needs gold labels".into()))
                    }
                },
            };
            let score = self.noisy(raw, &[argument_text, &label]);
            scores.insert(label, score);
        }
        Ok(ClassPrediction {
            argument_id: argument_id.to_string(),
            label_space,
            scores,
        })
    }
}

/// Everything a stub run over one split produces.
#[derive(Debug, Clone)]
pub struct StubOutputs {
    /// One row per (argument, descriptor) over the whole taxonomy.
    pub descriptors: Vec<DescriptorPrediction>,
    pub baseline: ClassPredictions,
    pub reduced: ClassPredictions,
}

/// Scores every argument of a split against every descriptor and both label
/// spaces. `gold_l1` is required in oracle mode.
pub fn predict_split(
    scorer: &StubScorer,
    arguments: &[Argument],
    taxonomy: &ValueTaxonomy,
    gold_l1: Option<&LabelMatrix>,
    policy: &TextPolicy,
) -> Result<StubOutputs> {
    let gold_l2 = gold_l1.map(|m| l1_matrix_to_l2(m, taxonomy)).transpose()?;
    if scorer.config.mode == StubMode::OracleFromGold {
        let Some(l1) = gold_l1 else {
            return Err(Error::StubConfig("oracle mode needs gold labels".into()));
        };
        let missing: Vec<String> = arguments
            .iter()
            .filter(|a| l1.row(&a.id).is_none())
            .map(|a| a.id.clone())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingLabels(missing));
        }
    }

    type Row = (Vec<DescriptorPrediction>, ClassPrediction, ClassPrediction);
    let rows: Vec<Row> = arguments
        .par_iter()
        .map(|a| {
            let text = build_argument_text(a, policy).text;
            let positives: Option<HashSet<&str>> =
                gold_l1.map(|m| m.positives(&a.id).collect());
            let mut descriptors = Vec::with_capacity(taxonomy.descriptor_count());
            for (_, value) in taxonomy.values() {
                let gold = positives.as_ref().map(|p| p.contains(value.name.as_str()));
                for (i, d) in value.descriptors.iter().enumerate() {
                    let desc = build_description_text(&value.name, d, i, policy);
                    descriptors.push(DescriptorPrediction {
                        argument_id: a.id.clone(),
                        value_name: value.name.clone(),
                        descriptor_index: i,
                        probability: scorer.entailment_score(&text, &desc.text, gold)?,
                    });
                }
            }
            let gold_set: Option<BTreeSet<String>> = gold_l2
                .as_ref()
                .map(|m| m.positives(&a.id).map(str::to_string).collect());
            let baseline =
                scorer.class_scores(&a.id, &text, LabelSpace::L2, taxonomy, gold_set.as_ref())?;
            let reduced = scorer.class_scores(
                &a.id,
                &text,
                LabelSpace::Reduced,
                taxonomy,
                gold_set.as_ref(),
            )?;
            Ok((descriptors, baseline, reduced))
        })
        .collect::<Result<_>>()?;

    let mut descriptors = Vec::new();
    let mut baseline = Vec::new();
    let mut reduced = Vec::new();
    for (d, b, r) in rows {
        descriptors.extend(d);
        baseline.push(b);
        reduced.push(r);
    }
    Ok(StubOutputs {
        descriptors,
        baseline: ClassPredictions::from_rows(LabelSpace::L2, taxonomy, baseline)?,
        reduced: ClassPredictions::from_rows(LabelSpace::Reduced, taxonomy, reduced)?,
    })
}
