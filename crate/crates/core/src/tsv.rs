//! Tab-separated reading and writing shared by every file format in the
//! pipeline. Quoting is disabled: fields are taken verbatim between tabs.

use std::io::{Read, Write};

use crate::error::{Error, Result};

pub(crate) fn reader<R: Read>(input: R, has_headers: bool) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .has_headers(has_headers)
        .flexible(true)
        .from_reader(input)
}

pub(crate) fn writer<W: Write>(output: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(output)
}

/// 1-based line number of a record, falling back to 0 when unknown.
pub(crate) fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map(|p| p.line() as usize).unwrap_or(0)
}

pub(crate) fn check_width(
    record: &csv::StringRecord,
    expected: usize,
    context: &str,
) -> Result<()> {
    if record.len() != expected {
        return Err(Error::Malformed {
            context: context.to_string(),
            line: line_of(record),
            message: format!("expected {expected} fields, found {}", record.len()),
        });
    }
    Ok(())
}

/// Text written into a tab-separated field must not contain a tab or a line break.
pub(crate) fn is_field_safe(text: &str) -> bool {
    !text.contains(['\t', '\n', '\r'])
}

pub(crate) fn parse_bit(cell: &str) -> Option<bool> {
    match cell {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

pub(crate) fn bit(value: bool) -> &'static str {
    if value {
        "1"
    } else {
        "0"
    }
}
