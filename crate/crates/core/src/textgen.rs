//! The two text surfaces fed to the entailment model: the argument text
//! (premise, stance, conclusion) and the value-description text
//! ("<value> by <descriptor>").

use serde::{Deserialize, Serialize};

use crate::corpus::Argument;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueCasing {
    #[default]
    Verbatim,
    Lowercase,
}

/// How text surfaces are assembled. Recorded in every pair manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextPolicy {
    pub separator: String,
    pub value_casing: ValueCasing,
    /// Whether punctuation is inserted between argument fields. Always false
    /// for now; kept in the manifest so runs remain comparable.
    pub field_punctuation: bool,
}

impl Default for TextPolicy {
    fn default() -> Self {
        TextPolicy {
            separator: " ".into(),
            value_casing: ValueCasing::Verbatim,
            field_punctuation: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArgumentText {
    pub argument_id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescriptionText {
    pub value_name: String,
    pub descriptor_index: usize,
    pub text: String,
}

pub fn build_argument_text(argument: &Argument, policy: &TextPolicy) -> ArgumentText {
    let text = [&argument.premise, &argument.stance, &argument.conclusion]
        .iter()
        .map(|s| s.trim())
        .collect::<Vec<_>>()
        .join(&policy.separator);
    ArgumentText {
        argument_id: argument.id.clone(),
        text,
    }
}

pub fn build_description_text(
    value_name: &str,
    descriptor: &str,
    descriptor_index: usize,
    policy: &TextPolicy,
) -> DescriptionText {
    let label = match policy.value_casing {
        ValueCasing::Verbatim => value_name.to_string(),
        ValueCasing::Lowercase => value_name.to_lowercase(),
    };
    let sep = &policy.separator;
    DescriptionText {
        value_name: value_name.to_string(),
        descriptor_index,
        text: format!("{label}{sep}by{sep}{}", descriptor.trim()),
    }
}
