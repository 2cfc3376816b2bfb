//! Desk-scale data for demos, docs and tests.
//!
//! [`taxonomy`] has the official shape (the task's 20 categories holding 54
//! values) but its descriptors are short placeholders; real runs should load
//! the value file distributed with the dataset. [`corpus`] draws a labeled toy
//! split over any taxonomy.

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Argument, L1Value, L2Category, LabelMatrix, Level, ValueTaxonomy};
use crate::labelalg::l1_matrix_to_l2;

const VALUES: [(&str, &[&str]); 20] = [
    (
        "Self-direction: thought",
        &["Be creative", "Be curious", "Have freedom of thought"],
    ),
    (
        "Self-direction: action",
        &[
            "Be choosing own goals",
            "Be independent",
            "Have freedom of action",
            "Have privacy",
        ],
    ),
    (
        "Stimulation",
        &["Have an exciting life", "Have a varied life", "Be daring"],
    ),
    ("Hedonism", &["Have pleasure"]),
    (
        "Achievement",
        &[
            "Be ambitious",
            "Have success",
            "Be capable",
            "Be intellectual",
            "Be courageous",
        ],
    ),
    (
        "Power: dominance",
        &["Have influence", "Have the right to command"],
    ),
    ("Power: resources", &["Have wealth"]),
    (
        "Face",
        &["Have social recognition", "Have a good reputation"],
    ),
    (
        "Security: personal",
        &[
            "Have a sense of belonging",
            "Have good health",
            "Have no debts",
            "Be neat and tidy",
            "Have a comfortable life",
        ],
    ),
    (
        "Security: societal",
        &["Have a safe country", "Have a stable society"],
    ),
    (
        "Tradition",
        &["Be respecting traditions", "Be holding religious faith"],
    ),
    (
        "Conformity: rules",
        &["Be compliant", "Be self-disciplined", "Be behaving properly"],
    ),
    (
        "Conformity: interpersonal",
        &["Be polite", "Be honoring elders"],
    ),
    ("Humility", &["Be humble", "Have life accepted as is"]),
    (
        "Benevolence: caring",
        &[
            "Be helpful",
            "Be honest",
            "Be forgiving",
            "Have the own family secured",
            "Be loving",
        ],
    ),
    (
        "Benevolence: dependability",
        &["Be responsible", "Have loyalty towards friends"],
    ),
    (
        "Universalism: concern",
        &["Have equality", "Be just", "Have a world at peace"],
    ),
    (
        "Universalism: nature",
        &[
            "Be protecting the environment",
            "Have harmony with nature",
            "Have a world of beauty",
        ],
    ),
    (
        "Universalism: tolerance",
        &["Be broadminded", "Have the wisdom to accept others"],
    ),
    (
        "Universalism: objectivity",
        &["Be logical", "Have an objective view"],
    ),
];

const TEMPLATES: [&str; 4] = [
    "caring about what it means to {v}",
    "making room for people to {v}",
    "treating the wish to {v} as important",
    "arguing that everyone should {v}",
];

fn descriptors_for(name: &str, position: usize) -> Vec<String> {
    if name == "Be creative" {
        return vec![
            "promoting imagination".into(),
            "being more creative".into(),
            "allowing for new ideas".into(),
        ];
    }
    let phrase = name.to_lowercase();
    let count = 1 + position % TEMPLATES.len();
    TEMPLATES[..count]
        .iter()
        .map(|t| t.replace("{v}", &phrase))
        .collect()
}

/// Official-shaped taxonomy with placeholder descriptors (1 to 4 per value).
pub fn taxonomy() -> ValueTaxonomy {
    let mut position = 0;
    let categories = VALUES
        .iter()
        .map(|(category, values)| L2Category {
            name: category.to_string(),
            values: values
                .iter()
                .map(|v| {
                    position += 1;
                    L1Value {
                        name: v.to_string(),
                        descriptors: descriptors_for(v, position),
                    }
                })
                .collect(),
        })
        .collect();
    ValueTaxonomy::new(categories).expect("sample taxonomy is valid")
}

/// A labeled toy split.
#[derive(Debug, Clone)]
pub struct SampleSplit {
    pub arguments: Vec<Argument>,
    pub l1: LabelMatrix,
    pub l2: LabelMatrix,
}

/// Draws `size` arguments, each with 0 to 3 positive values. Premises quote
/// the descriptors of the argument's positive values so lexical scoring has
/// something to find.
pub fn corpus(taxonomy: &ValueTaxonomy, size: usize, seed: u64) -> SampleSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<&L1Value> = taxonomy.values().map(|(_, v)| v).collect();
    let columns: Vec<String> = values.iter().map(|v| v.name.clone()).collect();
    let mut arguments = Vec::with_capacity(size);
    let mut rows = IndexMap::new();
    for i in 0..size {
        let id = format!("A{:05}", 1000 + i);
        let k = rng.gen_range(0..=3.min(values.len()));
        let chosen: Vec<usize> = rand::seq::index::sample(&mut rng, values.len(), k).into_vec();
        let mut bits = vec![false; values.len()];
        let mut phrases = Vec::new();
        for &c in &chosen {
            bits[c] = true;
            let d = values[c].descriptors.choose(&mut rng).expect("non-empty");
            phrases.push(d.clone());
        }
        let premise = if phrases.is_empty() {
            "nothing in particular is at stake here".to_string()
        } else {
            format!("this is about {}", phrases.join(" and "))
        };
        let stance = if rng.gen_bool(0.5) { "in favor of" } else { "against" };
        arguments.push(Argument {
            id: id.clone(),
            conclusion: format!("we should adopt proposal {i}"),
            stance: stance.to_string(),
            premise,
        });
        rows.insert(id, bits);
    }
    let l1 = LabelMatrix::new(Level::L1, columns, rows).expect("consistent widths");
    let l2 = l1_matrix_to_l2(&l1, taxonomy).expect("sample labels are consistent");
    SampleSplit { arguments, l1, l2 }
}

/// Renders arguments in the shared-task arguments-file layout.
pub fn arguments_tsv(arguments: &[Argument]) -> String {
    let mut out = String::from("Argument ID\tConclusion\tStance\tPremise\n");
    for a in arguments {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            a.id, a.conclusion, a.stance, a.premise
        ));
    }
    out
}

/// Renders a label matrix with the shared-task id column.
pub fn labels_tsv(matrix: &LabelMatrix) -> String {
    let mut buf = Vec::new();
    matrix
        .write_tsv(&mut buf, "Argument ID")
        .expect("writing to memory");
    String::from_utf8(buf).expect("utf-8")
}
