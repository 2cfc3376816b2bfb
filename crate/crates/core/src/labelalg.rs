//! Label-space mappings: value → category, and the lexical reduction that
//! merges categories sharing the prefix before `:` (20 categories → 12
//! classes on the official taxonomy).

use std::collections::BTreeSet;
use std::io::Write;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{LabelMatrix, Level, ValueTaxonomy};
use crate::error::{Error, Result};
use crate::tsv;

/// Category that owns `value_name`.
pub fn l1_to_l2<'a>(value_name: &str, taxonomy: &'a ValueTaxonomy) -> Result<&'a str> {
    taxonomy
        .category_of(value_name)
        .map(|c| c.name.as_str())
        .ok_or_else(|| Error::UnknownValue(value_name.to_string()))
}

/// Text before the first `:`, with trailing whitespace removed. Names without
/// a colon map to themselves.
pub fn reduce_category(l2_name: &str) -> &str {
    match l2_name.split_once(':') {
        Some((prefix, _)) => prefix.trim_end(),
        None => l2_name,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedClass {
    pub name: String,
    pub members: BTreeSet<String>,
}

/// The reduced label space of a taxonomy. Classes are ordered by the first
/// appearance of a member category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSpace {
    classes: IndexMap<String, BTreeSet<String>>,
}

impl ReducedSpace {
    pub fn new(taxonomy: &ValueTaxonomy) -> Self {
        let mut classes: IndexMap<String, BTreeSet<String>> = IndexMap::new();
        for name in taxonomy.category_names() {
            classes
                .entry(reduce_category(name).to_string())
                .or_default()
                .insert(name.to_string());
        }
        ReducedSpace { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.classes.keys().map(String::as_str)
    }

    pub fn contains(&self, reduced_name: &str) -> bool {
        self.classes.contains_key(reduced_name)
    }

    pub fn classes(&self) -> impl Iterator<Item = ReducedClass> + '_ {
        self.classes.iter().map(|(name, members)| ReducedClass {
            name: name.clone(),
            members: members.clone(),
        })
    }

    pub fn expand(&self, reduced_name: &str) -> Result<&BTreeSet<String>> {
        self.classes
            .get(reduced_name)
            .ok_or_else(|| Error::UnknownReducedClass(reduced_name.to_string()))
    }

    /// Reduced bit vector for an L2 bit vector in taxonomy order: a class is
    /// set iff any member category is set.
    pub fn reduce_bits(&self, taxonomy: &ValueTaxonomy, l2_bits: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.len()];
        for (name, &on) in taxonomy.category_names().zip(l2_bits) {
            if on {
                let idx = self
                    .classes
                    .get_index_of(reduce_category(name))
                    .expect("every category reduces into the space");
                out[idx] = true;
            }
        }
        out
    }

    /// Writes the two-column `category → reduced` table.
    pub fn write_mapping<W: Write>(&self, output: W) -> Result<()> {
        let mut w = tsv::writer(output);
        w.write_record(["category", "reduced"])?;
        for (reduced, members) in &self.classes {
            for m in members {
                w.write_record([m.as_str(), reduced.as_str()])?;
            }
        }
        w.flush().map_err(|e| Error::io("<mapping output>", e))?;
        Ok(())
    }
}

/// All categories of `taxonomy` whose reduction equals `reduced_name`.
pub fn expand_reduced(reduced_name: &str, taxonomy: &ValueTaxonomy) -> Result<BTreeSet<String>> {
    let members: BTreeSet<String> = taxonomy
        .category_names()
        .filter(|c| reduce_category(c) == reduced_name)
        .map(str::to_string)
        .collect();
    if members.is_empty() {
        return Err(Error::UnknownReducedClass(reduced_name.to_string()));
    }
    Ok(members)
}

/// Aggregates an L1 matrix to L2: a category is set iff any of its values is.
pub fn l1_matrix_to_l2(l1: &LabelMatrix, taxonomy: &ValueTaxonomy) -> Result<LabelMatrix> {
    if l1.level() != Level::L1 {
        return Err(Error::Taxonomy("expected an L1 label matrix".into()));
    }
    let columns = Level::L2.expected_columns(taxonomy);
    let owner: Vec<usize> = l1
        .columns()
        .iter()
        .map(|v| {
            let c = l1_to_l2(v, taxonomy)?;
            Ok(taxonomy.category_position(c).expect("category exists"))
        })
        .collect::<Result<_>>()?;
    let rows = l1
        .rows()
        .iter()
        .map(|(id, bits)| {
            let mut out = vec![false; columns.len()];
            for (&b, &c) in bits.iter().zip(&owner) {
                out[c] |= b;
            }
            (id.clone(), out)
        })
        .collect();
    LabelMatrix::new(Level::L2, columns, rows)
}
