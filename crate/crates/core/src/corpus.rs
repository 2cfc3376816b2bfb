//! Parsers and the in-memory data model for the shared-task files: arguments,
//! the value taxonomy and the L1/L2 label matrices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};

use indexmap::IndexMap;
use serde::de::{Deserializer, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tsv;

/// The 20 value categories of the shared task, in the task's canonical order.
pub const OFFICIAL_CATEGORIES: [&str; 20] = [
    "Self-direction: thought",
    "Self-direction: action",
    "Stimulation",
    "Hedonism",
    "Achievement",
    "Power: dominance",
    "Power: resources",
    "Face",
    "Security: personal",
    "Security: societal",
    "Tradition",
    "Conformity: rules",
    "Conformity: interpersonal",
    "Humility",
    "Benevolence: caring",
    "Benevolence: dependability",
    "Universalism: concern",
    "Universalism: nature",
    "Universalism: tolerance",
    "Universalism: objectivity",
];

/// Number of L1 values in the official taxonomy.
pub const OFFICIAL_VALUE_COUNT: usize = 54;

/// One corpus row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Argument {
    pub id: String,
    pub conclusion: String,
    pub stance: String,
    pub premise: String,
}

/// Header names of the arguments file. Defaults follow the shared-task files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnNames {
    pub id: String,
    pub conclusion: String,
    pub stance: String,
    pub premise: String,
}

impl Default for ColumnNames {
    fn default() -> Self {
        ColumnNames {
            id: "Argument ID".into(),
            conclusion: "Conclusion".into(),
            stance: "Stance".into(),
            premise: "Premise".into(),
        }
    }
}

fn find_column(headers: &csv::StringRecord, name: &str, context: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn {
            context: context.to_string(),
            column: name.to_string(),
        })
}

/// Parses a tab-separated arguments file. Rows come back in file order with
/// every field trimmed of surrounding whitespace.
pub fn parse_arguments<R: Read>(input: R, columns: &ColumnNames) -> Result<Vec<Argument>> {
    const CTX: &str = "arguments";
    let mut rdr = tsv::reader(input, true);
    let headers = rdr.headers()?.clone();
    let idx = [
        find_column(&headers, &columns.id, CTX)?,
        find_column(&headers, &columns.conclusion, CTX)?,
        find_column(&headers, &columns.stance, CTX)?,
        find_column(&headers, &columns.premise, CTX)?,
    ];
    let names = [
        &columns.id,
        &columns.conclusion,
        &columns.stance,
        &columns.premise,
    ];

    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = tsv::line_of(&record);
        tsv::check_width(&record, headers.len(), CTX)?;
        let mut fields = [String::new(), String::new(), String::new(), String::new()];
        for (slot, (&col, name)) in fields.iter_mut().zip(idx.iter().zip(names)) {
            let value = record.get(col).unwrap_or("").trim();
            if value.is_empty() {
                return Err(Error::EmptyField {
                    row: line,
                    field: name.to_string(),
                });
            }
            *slot = value.to_string();
        }
        let [id, conclusion, stance, premise] = fields;
        if let Some(&first) = seen.get(&id) {
            return Err(Error::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        seen.insert(id.clone(), line);
        out.push(Argument {
            id,
            conclusion,
            stance,
            premise,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1Value {
    pub name: String,
    pub descriptors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L2Category {
    pub name: String,
    pub values: Vec<L1Value>,
}

/// Category → value → descriptor hierarchy.
///
/// Construction validates that category names and value names are unique
/// (values across the whole taxonomy) and that every value carries at least
/// one descriptor. Order is preserved exactly as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTaxonomy {
    categories: Vec<L2Category>,
    value_index: HashMap<String, (usize, usize)>,
    category_index: HashMap<String, usize>,
}

impl ValueTaxonomy {
    pub fn new(categories: Vec<L2Category>) -> Result<Self> {
        let mut category_index = HashMap::new();
        let mut value_index = HashMap::new();
        for (ci, category) in categories.iter().enumerate() {
            if category.name.trim().is_empty() {
                return Err(Error::Taxonomy("empty category name".into()));
            }
            if category_index.insert(category.name.clone(), ci).is_some() {
                return Err(Error::Taxonomy(format!(
                    "duplicate category {:?}",
                    category.name
                )));
            }
            if category.values.is_empty() {
                return Err(Error::Taxonomy(format!(
                    "category {:?} has no values",
                    category.name
                )));
            }
            for (vi, value) in category.values.iter().enumerate() {
                if value.name.trim().is_empty() {
                    return Err(Error::Taxonomy(format!(
                        "empty value name in category {:?}",
                        category.name
                    )));
                }
                if let Some((other, _)) = value_index.insert(value.name.clone(), (ci, vi)) {
                    return Err(Error::Taxonomy(format!(
                        "duplicate value {:?} in categories {:?} and {:?}",
                        value.name, categories[other].name, category.name
                    )));
                }
                if value.descriptors.is_empty() {
                    return Err(Error::Taxonomy(format!(
                        "value {:?} has zero descriptors",
                        value.name
                    )));
                }
                for d in &value.descriptors {
                    if d.trim().is_empty() {
                        return Err(Error::Taxonomy(format!(
                            "value {:?} has an empty descriptor",
                            value.name
                        )));
                    }
                    if !tsv::is_field_safe(d) {
                        return Err(Error::Taxonomy(format!(
                            "descriptor {d:?} of {:?} contains a tab or line break",
                            value.name
                        )));
                    }
                }
            }
            if !tsv::is_field_safe(&category.name) {
                return Err(Error::Taxonomy(format!(
                    "category {:?} contains a tab or line break",
                    category.name
                )));
            }
        }
        for name in value_index.keys() {
            if !tsv::is_field_safe(name) {
                return Err(Error::Taxonomy(format!(
                    "value {name:?} contains a tab or line break"
                )));
            }
        }
        Ok(ValueTaxonomy {
            categories,
            value_index,
            category_index,
        })
    }

    pub fn categories(&self) -> &[L2Category] {
        &self.categories
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(|c| c.name.as_str())
    }

    /// All L1 values in taxonomy order, paired with their category.
    pub fn values(&self) -> impl Iterator<Item = (&L2Category, &L1Value)> {
        self.categories
            .iter()
            .flat_map(|c| c.values.iter().map(move |v| (c, v)))
    }

    pub fn value_names(&self) -> impl Iterator<Item = &str> {
        self.values().map(|(_, v)| v.name.as_str())
    }

    pub fn value_count(&self) -> usize {
        self.value_index.len()
    }

    pub fn descriptor_count(&self) -> usize {
        self.values().map(|(_, v)| v.descriptors.len()).sum()
    }

    pub fn value(&self, name: &str) -> Option<&L1Value> {
        self.value_index
            .get(name)
            .map(|&(c, v)| &self.categories[c].values[v])
    }

    /// Category that owns the named value.
    pub fn category_of(&self, value_name: &str) -> Option<&L2Category> {
        self.value_index
            .get(value_name)
            .map(|&(c, _)| &self.categories[c])
    }

    pub fn category(&self, name: &str) -> Option<&L2Category> {
        self.category_index.get(name).map(|&i| &self.categories[i])
    }

    pub fn category_position(&self, name: &str) -> Option<usize> {
        self.category_index.get(name).copied()
    }

    pub fn has_official_shape(&self) -> bool {
        self.categories.len() == OFFICIAL_CATEGORIES.len()
            && self.value_count() == OFFICIAL_VALUE_COUNT
            && self
                .categories
                .iter()
                .all(|c| OFFICIAL_CATEGORIES.contains(&c.name.as_str()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("taxonomy serializes")
    }

    /// SHA-256 over the compact JSON rendering, hex encoded.
    pub fn fingerprint(&self) -> String {
        let compact = serde_json::to_string(self).expect("taxonomy serializes");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }
}

impl Serialize for ValueTaxonomy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Values<'a>(&'a [L1Value]);
        impl Serialize for Values<'_> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for v in self.0 {
                    map.serialize_entry(&v.name, &v.descriptors)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(self.categories.len()))?;
        for c in &self.categories {
            map.serialize_entry(&c.name, &Values(&c.values))?;
        }
        map.end()
    }
}

/// A JSON object read as an ordered list of entries, keeping duplicate keys
/// so the validator can reject them.
struct Entries<T>(Vec<(String, T)>);

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Entries<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor<T>(std::marker::PhantomData<T>);
        impl<'de, T: Deserialize<'de>> Visitor<'de> for EntriesVisitor<T> {
            type Value = Entries<T>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, T>()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        deserializer.deserialize_map(EntriesVisitor(std::marker::PhantomData))
    }
}

struct Descriptors(Vec<String>);

impl<'de> Deserialize<'de> for Descriptors {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Descriptors;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of descriptor strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    out.push(s);
                }
                Ok(Descriptors(out))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// Parses a taxonomy document of the shape
/// `{ "<category>": { "<value>": ["<descriptor>", ...], ... }, ... }`.
pub fn parse_taxonomy<R: Read>(input: R) -> Result<ValueTaxonomy> {
    let doc: Entries<Entries<Descriptors>> = serde_json::from_reader(input)?;
    let categories = doc
        .0
        .into_iter()
        .map(|(name, values)| L2Category {
            name,
            values: values
                .0
                .into_iter()
                .map(|(name, d)| L1Value {
                    name,
                    descriptors: d.0,
                })
                .collect(),
        })
        .collect();
    ValueTaxonomy::new(categories)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    L1,
    L2,
}

impl Level {
    pub fn expected_columns(self, taxonomy: &ValueTaxonomy) -> Vec<String> {
        match self {
            Level::L1 => taxonomy.value_names().map(str::to_string).collect(),
            Level::L2 => taxonomy.category_names().map(str::to_string).collect(),
        }
    }
}

/// Binary annotations per argument. Columns always follow taxonomy order;
/// rows keep file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    level: Level,
    columns: Vec<String>,
    rows: IndexMap<String, Vec<bool>>,
}

impl LabelMatrix {
    pub fn new(level: Level, columns: Vec<String>, rows: IndexMap<String, Vec<bool>>) -> Result<Self> {
        if let Some((id, _)) = rows.iter().find(|(_, r)| r.len() != columns.len()) {
            return Err(Error::Malformed {
                context: "label matrix".into(),
                line: 0,
                message: format!("row {id:?} width differs from {} columns", columns.len()),
            });
        }
        Ok(LabelMatrix {
            level,
            columns,
            rows,
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &IndexMap<String, Vec<bool>> {
        &self.rows
    }

    pub fn row(&self, id: &str) -> Option<&[bool]> {
        self.rows.get(id).map(Vec::as_slice)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Names of the columns set to 1 for `id`.
    pub fn positives<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a str> + 'a {
        let row = self.rows.get(id);
        self.columns
            .iter()
            .enumerate()
            .filter(move |&(i, _)| row.is_some_and(|r| r[i]))
            .map(|(_, c)| c.as_str())
    }

    pub fn write_tsv<W: Write>(&self, output: W, id_column: &str) -> Result<()> {
        let mut w = tsv::writer(output);
        w.write_record(std::iter::once(id_column).chain(self.columns.iter().map(String::as_str)))?;
        for (id, bits) in &self.rows {
            w.write_record(std::iter::once(id.as_str()).chain(bits.iter().map(|&b| tsv::bit(b))))?;
        }
        w.flush().map_err(|e| Error::io("<label output>", e))?;
        Ok(())
    }
}

/// Parses a tab-separated label file at the given level. The header must hold
/// the id column plus exactly the level's label names, in any order.
pub fn parse_labels<R: Read>(
    input: R,
    level: Level,
    taxonomy: &ValueTaxonomy,
    id_column: &str,
) -> Result<LabelMatrix> {
    let context = format!("{level:?} labels");
    let mut rdr = tsv::reader(input, true);
    let headers = rdr.headers()?.clone();
    let id_idx = find_column(&headers, id_column, &context)?;

    let expected = level.expected_columns(taxonomy);
    let position: HashMap<&str, usize> = expected
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();

    // file column -> taxonomy column
    let mut mapping: Vec<(usize, usize)> = Vec::new();
    let mut unknown = Vec::new();
    let mut seen = HashSet::new();
    for (fi, h) in headers.iter().enumerate() {
        if fi == id_idx {
            continue;
        }
        let h = h.trim();
        match position.get(h) {
            Some(&ti) => {
                if !seen.insert(ti) {
                    return Err(Error::Malformed {
                        context,
                        line: 1,
                        message: format!("duplicate label column {h:?}"),
                    });
                }
                mapping.push((fi, ti));
            }
            None => unknown.push(h.to_string()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownColumns {
            context,
            names: unknown,
        });
    }
    let missing: Vec<String> = expected
        .iter()
        .enumerate()
        .filter(|(i, _)| !seen.contains(i))
        .map(|(_, c)| c.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingLabelColumns {
            context,
            names: missing,
        });
    }

    let mut rows = IndexMap::new();
    let mut first_line: HashMap<String, usize> = HashMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = tsv::line_of(&record);
        tsv::check_width(&record, headers.len(), &context)?;
        let id = record[id_idx].trim().to_string();
        if id.is_empty() {
            return Err(Error::EmptyField {
                row: line,
                field: id_column.to_string(),
            });
        }
        let mut bits = vec![false; expected.len()];
        for &(fi, ti) in &mapping {
            let cell = &record[fi];
            bits[ti] = tsv::parse_bit(cell).ok_or_else(|| Error::NonBinaryCell {
                context: context.clone(),
                row: line,
                column: expected[ti].clone(),
                value: cell.to_string(),
            })?;
        }
        if let Some(&first) = first_line.get(&id) {
            return Err(Error::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        first_line.insert(id.clone(), line);
        rows.insert(id, bits);
    }
    LabelMatrix::new(level, expected, rows)
}
