//! Entailment training-pair synthesis.
//!
//! For each argument, every descriptor of every positive L1 value yields a
//! positive pair, so `N` is the total descriptor count over the positive
//! values. The same number of negatives is drawn without replacement from two
//! pools of descriptors belonging to values the argument does *not* hold:
//!
//! * **difficult**: values inside a category that contains at least one of the
//!   argument's positive values;
//! * **easy**: values in categories that contain none of them.
//!
//! Difficult negatives get `⌈N/2⌉` slots and easy negatives `⌊N/2⌋`. A pool
//! that runs dry hands its remaining slots to the other pool. Each argument
//! draws from its own RNG stream keyed by `(seed, argument id)`, so output does
//! not depend on argument order or thread schedule.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Argument, LabelMatrix, ValueTaxonomy};
use crate::error::{Error, Result};
use crate::textgen::{build_argument_text, build_description_text, DescriptionText, TextPolicy};
use crate::tsv;

/// Declaration order matches the lexicographic order of the serialized names,
/// so sorting by kind and sorting by the file column agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    NegativeDifficult,
    NegativeEasy,
    Positive,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::NegativeDifficult => "negative_difficult",
            PairKind::NegativeEasy => "negative_easy",
            PairKind::Positive => "positive",
        }
    }

    pub fn label(self) -> bool {
        self == PairKind::Positive
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "negative_difficult" => Ok(PairKind::NegativeDifficult),
            "negative_easy" => Ok(PairKind::NegativeEasy),
            "positive" => Ok(PairKind::Positive),
            other => Err(format!("unknown pair kind {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntailmentPair {
    pub argument_id: String,
    pub argument_text: String,
    pub description: DescriptionText,
    pub label: bool,
    pub kind: PairKind,
    pub value_name: String,
    pub category_name: String,
}

impl EntailmentPair {
    fn sort_key(&self) -> (&str, PairKind, &str, usize) {
        (
            &self.argument_id,
            self.kind,
            &self.value_name,
            self.description.descriptor_index,
        )
    }
}

/// Puts pairs into the canonical file order
/// `(argument_id, kind, value_name, descriptor_index)`.
pub fn canonical_sort(pairs: &mut [EntailmentPair]) {
    pairs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

#[derive(Debug, Clone, Copy)]
struct Candidate<'t> {
    category: &'t str,
    value: &'t str,
    index: usize,
    descriptor: &'t str,
}

/// Descriptor candidates of one argument, split by role.
struct Pools<'t> {
    positive: Vec<Candidate<'t>>,
    difficult: Vec<Candidate<'t>>,
    easy: Vec<Candidate<'t>>,
}

fn pools<'t>(
    argument_id: &str,
    l1_labels: &LabelMatrix,
    taxonomy: &'t ValueTaxonomy,
) -> Result<Pools<'t>> {
    if l1_labels.row(argument_id).is_none() {
        return Err(Error::MissingLabels(vec![argument_id.to_string()]));
    }
    let positives: BTreeSet<&str> = l1_labels.positives(argument_id).collect();
    for v in &positives {
        if taxonomy.value(v).is_none() {
            return Err(Error::UnknownValue(v.to_string()));
        }
    }
    let mut out = Pools {
        positive: Vec::new(),
        difficult: Vec::new(),
        easy: Vec::new(),
    };
    for category in taxonomy.categories() {
        let touched = category
            .values
            .iter()
            .any(|v| positives.contains(v.name.as_str()));
        for value in &category.values {
            let target = if positives.contains(value.name.as_str()) {
                &mut out.positive
            } else if touched {
                &mut out.difficult
            } else {
                &mut out.easy
            };
            target.extend(value.descriptors.iter().enumerate().map(|(index, d)| Candidate {
                category: &category.name,
                value: &value.name,
                index,
                descriptor: d,
            }));
        }
    }
    Ok(out)
}

fn make_pair(
    argument_id: &str,
    argument_text: &str,
    c: &Candidate<'_>,
    kind: PairKind,
    policy: &TextPolicy,
) -> EntailmentPair {
    EntailmentPair {
        argument_id: argument_id.to_string(),
        argument_text: argument_text.to_string(),
        description: build_description_text(c.value, c.descriptor, c.index, policy),
        label: kind.label(),
        kind,
        value_name: c.value.to_string(),
        category_name: c.category.to_string(),
    }
}

/// One positive pair per descriptor of each positive L1 value, in taxonomy
/// order. Arguments without positive values yield nothing.
pub fn positive_pairs(
    argument: &Argument,
    l1_labels: &LabelMatrix,
    taxonomy: &ValueTaxonomy,
    policy: &TextPolicy,
) -> Result<Vec<EntailmentPair>> {
    let pools = pools(&argument.id, l1_labels, taxonomy)?;
    let text = build_argument_text(argument, policy).text;
    Ok(pools
        .positive
        .iter()
        .map(|c| make_pair(&argument.id, &text, c, PairKind::Positive, policy))
        .collect())
}

/// Bookkeeping from one negative draw.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NegativeStats {
    pub requested: usize,
    pub difficult: usize,
    pub easy: usize,
    /// One of the pools could not cover its own quota.
    pub shortfall: bool,
}

impl NegativeStats {
    pub fn underfilled(&self) -> bool {
        self.difficult + self.easy < self.requested
    }
}

/// Slot split between the two pools for `n` negatives.
pub fn negative_quotas(n: usize, difficult_pool: usize, easy_pool: usize) -> (usize, usize) {
    let difficult = n.div_ceil(2).min(difficult_pool);
    let easy = (n - difficult).min(easy_pool);
    let difficult = (n - easy).min(difficult_pool);
    (difficult, easy)
}

/// Draws `n` negatives (normally the argument's positive count) without
/// replacement.
pub fn negative_pairs<R: Rng + ?Sized>(
    argument: &Argument,
    l1_labels: &LabelMatrix,
    taxonomy: &ValueTaxonomy,
    n: usize,
    rng: &mut R,
    policy: &TextPolicy,
) -> Result<(Vec<EntailmentPair>, NegativeStats)> {
    let pools = pools(&argument.id, l1_labels, taxonomy)?;
    let text = build_argument_text(argument, policy).text;
    let (take_d, take_e) = negative_quotas(n, pools.difficult.len(), pools.easy.len());
    let stats = NegativeStats {
        requested: n,
        difficult: take_d,
        easy: take_e,
        shortfall: take_d < n.div_ceil(2) || take_e < n / 2,
    };
    if stats.shortfall {
        log::warn!(
            "argument {}: negative pools short (difficult {}/{}, easy {}/{})",
            argument.id,
            take_d,
            n.div_ceil(2),
            take_e,
            n / 2
        );
    }

    let mut out = Vec::with_capacity(take_d + take_e);
    for (pool, take, kind) in [
        (&pools.difficult, take_d, PairKind::NegativeDifficult),
        (&pools.easy, take_e, PairKind::NegativeEasy),
    ] {
        for i in rand::seq::index::sample(rng, pool.len(), take) {
            out.push(make_pair(&argument.id, &text, &pool[i], kind, policy));
        }
    }
    Ok((out, stats))
}

/// RNG stream for one argument.
pub fn argument_rng(seed: u64, argument_id: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(argument_id.as_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPolicy {
    pub odd_count: String,
    pub pool_shortfall: String,
    pub replacement: String,
    pub difficult_scope: String,
    pub zero_positive_arguments: String,
    pub rng: String,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy {
            odd_count: "difficult_gets_extra".into(),
            pool_shortfall: "fill_from_other_pool".into(),
            replacement: "without_replacement_per_value_descriptor".into(),
            difficult_scope: "any_positive_category".into(),
            zero_positive_arguments: "no_pairs".into(),
            rng: "chacha8_keyed_by_sha256(seed_le,argument_id)".into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub arguments: usize,
    pub arguments_without_positives: usize,
    pub positive: usize,
    pub negative_difficult: usize,
    pub negative_easy: usize,
    pub total: usize,
}

impl PairCounts {
    pub fn of(pairs: &[EntailmentPair]) -> Self {
        let mut c = PairCounts::default();
        let mut ids = BTreeSet::new();
        for p in pairs {
            ids.insert(p.argument_id.as_str());
            match p.kind {
                PairKind::Positive => c.positive += 1,
                PairKind::NegativeDifficult => c.negative_difficult += 1,
                PairKind::NegativeEasy => c.negative_easy += 1,
            }
        }
        c.arguments = ids.len();
        c.total = pairs.len();
        c
    }

    pub fn negatives(&self) -> usize {
        self.negative_difficult + self.negative_easy
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWarnings {
    /// Arguments where a pool could not cover its own quota.
    pub pool_shortfall: usize,
    /// Arguments that received fewer negatives than positives.
    pub underfilled: usize,
    /// Total negatives missing across underfilled arguments.
    pub missing_negatives: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDatasetManifest {
    pub generator: String,
    pub generator_version: String,
    pub split: String,
    pub seed: u64,
    pub text_policy: TextPolicy,
    pub sampling: SamplingPolicy,
    pub taxonomy_fingerprint: String,
    pub counts: PairCounts,
    pub warnings: PairWarnings,
    pub pair_file_sha256: String,
}

#[derive(Debug, Clone)]
pub struct PairDataset {
    pub pairs: Vec<EntailmentPair>,
    pub manifest: PairDatasetManifest,
}

impl PairDataset {
    pub fn to_tsv(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_pairs(&mut buf, &self.pairs).expect("writing to memory");
        buf
    }
}

/// Builds the pair dataset for one split. Runs on the current rayon pool.
pub fn generate_dataset(
    split: &str,
    arguments: &[Argument],
    l1_labels: &LabelMatrix,
    taxonomy: &ValueTaxonomy,
    seed: u64,
    policy: &TextPolicy,
) -> Result<PairDataset> {
    let missing: Vec<String> = arguments
        .iter()
        .filter(|a| l1_labels.row(&a.id).is_none())
        .map(|a| a.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingLabels(missing));
    }

    let per_argument: Vec<(Vec<EntailmentPair>, NegativeStats)> = arguments
        .par_iter()
        .map(|a| {
            let mut pairs = positive_pairs(a, l1_labels, taxonomy, policy)?;
            let mut rng = argument_rng(seed, &a.id);
            let (neg, stats) =
                negative_pairs(a, l1_labels, taxonomy, pairs.len(), &mut rng, policy)?;
            pairs.extend(neg);
            Ok((pairs, stats))
        })
        .collect::<Result<_>>()?;

    let mut warnings = PairWarnings::default();
    let mut without_positives = 0;
    let mut pairs = Vec::new();
    for (p, stats) in per_argument {
        if stats.requested == 0 {
            without_positives += 1;
        }
        if stats.shortfall {
            warnings.pool_shortfall += 1;
        }
        if stats.underfilled() {
            warnings.underfilled += 1;
            warnings.missing_negatives += stats.requested - stats.difficult - stats.easy;
        }
        pairs.extend(p);
    }
    canonical_sort(&mut pairs);

    let mut counts = PairCounts::of(&pairs);
    counts.arguments = arguments.len();
    counts.arguments_without_positives = without_positives;

    let mut buf = Vec::new();
    write_pairs(&mut buf, &pairs)?;
    let manifest = PairDatasetManifest {
        generator: env!("CARGO_PKG_NAME").into(),
        generator_version: env!("CARGO_PKG_VERSION").into(),
        split: split.to_string(),
        seed,
        text_policy: policy.clone(),
        sampling: SamplingPolicy::default(),
        taxonomy_fingerprint: taxonomy.fingerprint(),
        counts,
        warnings,
        pair_file_sha256: hex::encode(Sha256::digest(&buf)),
    };
    Ok(PairDataset { pairs, manifest })
}

/// Writes pairs as headerless TSV:
/// `argument_id, kind, value_name, descriptor_index, label, argument_text, description_text`.
pub fn write_pairs<W: Write>(output: W, pairs: &[EntailmentPair]) -> Result<()> {
    let mut w = tsv::writer(output);
    for p in pairs {
        let index = p.description.descriptor_index.to_string();
        w.write_record([
            p.argument_id.as_str(),
            p.kind.as_str(),
            p.value_name.as_str(),
            index.as_str(),
            tsv::bit(p.label),
            p.argument_text.as_str(),
            p.description.text.as_str(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<pair output>", e))?;
    Ok(())
}

/// Reads and validates a pair file against the taxonomy.
pub fn read_pairs<R: Read>(input: R, taxonomy: &ValueTaxonomy) -> Result<Vec<EntailmentPair>> {
    const CTX: &str = "pair file";
    let malformed = |line, message: String| Error::Malformed {
        context: CTX.into(),
        line,
        message,
    };
    let mut out = Vec::new();
    for record in tsv::reader(input, false).records() {
        let record = record?;
        let line = tsv::line_of(&record);
        tsv::check_width(&record, 7, CTX)?;
        let kind: PairKind = record[1].parse().map_err(|m| malformed(line, m))?;
        let value_name = record[2].to_string();
        let category = taxonomy
            .category_of(&value_name)
            .ok_or_else(|| malformed(line, format!("unknown value {value_name:?}")))?;
        let index: usize = record[3]
            .parse()
            .map_err(|_| malformed(line, format!("bad descriptor index {:?}", &record[3])))?;
        if index >= taxonomy.value(&value_name).map_or(0, |v| v.descriptors.len()) {
            return Err(malformed(line, format!("descriptor index {index} out of range")));
        }
        let label = tsv::parse_bit(&record[4])
            .ok_or_else(|| malformed(line, format!("bad label {:?}", &record[4])))?;
        if label != kind.label() {
            return Err(malformed(line, format!("label {} disagrees with kind {kind}", &record[4])));
        }
        out.push(EntailmentPair {
            argument_id: record[0].to_string(),
            argument_text: record[5].to_string(),
            description: DescriptionText {
                value_name: value_name.clone(),
                descriptor_index: index,
                text: record[6].to_string(),
            },
            label,
            kind,
            value_name,
            category_name: category.name.clone(),
        });
    }
    Ok(out)
}
