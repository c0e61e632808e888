//! Group files: JSON objects `{"label", "degree", "generators"}` (a
//! permutation group) or `{"label", "table"}` (a multiplication table), one
//! per file or an array of them.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::group::{group_from_permutations, standard_group, Group, GroupSpec, PermutationGenSet, DEFAULT_ORDER_CAP};
use crate::schmidt::{construct_schmidt_minimal, SchmidtSpec};

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum Entry {
    Permutations { label: String, degree: usize, generators: Vec<Vec<usize>> },
    Table { label: String, table: Vec<Vec<usize>> },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Document {
    Many(Vec<Entry>),
    One(Entry),
}

/// 1-based line of the `k`-th top-level object (the `k`-th element of a
/// top-level array, or the document itself).
fn object_line(text: &str, k: usize) -> usize {
    let (mut depth, mut line, mut in_str, mut escaped, mut seen) = (0usize, 1, false, false, 0);
    let array = text.trim_start().starts_with('[');
    let target_depth = usize::from(array);
    for ch in text.chars() {
        if in_str {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_str = false,
                _ => {}
            }
        } else {
            match ch {
                '"' => in_str = true,
                '{' | '[' => {
                    if ch == '{' && depth == target_depth {
                        if seen == k {
                            return line;
                        }
                        seen += 1;
                    }
                    depth += 1;
                }
                '}' | ']' => depth = depth.saturating_sub(1),
                _ => {}
            }
        }
        if ch == '\n' {
            line += 1;
        }
    }
    1
}

pub fn ingest_str(text: &str, path: &Path) -> Result<Vec<Group>> {
    let err = |line: usize, message: String| Error::IngestParseError { path: path.to_path_buf(), line, message };
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        let message = if e.is_data() {
            "expected {label, degree, generators} or {label, table}".to_string()
        } else {
            e.to_string()
        };
        err(e.line().max(1), message)
    })?;
    let entries = match doc {
        Document::Many(v) => v,
        Document::One(e) => vec![e],
    };
    entries
        .into_iter()
        .enumerate()
        .map(|(k, entry)| {
            let built = match entry {
                Entry::Permutations { label, degree, generators } => PermutationGenSet::new(degree, generators)
                    .and_then(|gens| group_from_permutations(&gens, label, DEFAULT_ORDER_CAP)),
                Entry::Table { label, table } => Group::from_table(&table, label),
            };
            built.map_err(|e| err(object_line(text, k), e.to_string()))
        })
        .collect()
}

pub fn ingest_file(path: &Path) -> Result<Vec<Group>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::IngestParseError {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    ingest_str(&text, path)
}

/// `*.json` files of a directory in name order, or a single file.
pub fn ingest_path(path: &Path) -> Result<Vec<Group>> {
    if !path.is_dir() {
        return ingest_file(path);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(ingest_file(&f)?);
    }
    Ok(out)
}

/// A group named on the command line: a group file holding exactly one
/// group, `schmidt:<p>:<q>`, or a standard spec such as `dihedral:8`.
pub fn resolve_group(arg: &str) -> Result<Group> {
    let path = Path::new(arg);
    if path.is_file() {
        let mut gs = ingest_file(path)?;
        if gs.len() != 1 {
            return Err(Error::BadArgs(format!("{arg} holds {} groups, expected one", gs.len())));
        }
        return Ok(gs.remove(0));
    }
    if let Some(rest) = arg.strip_prefix("schmidt:") {
        let (p, q) = rest
            .split_once(':')
            .and_then(|(p, q)| Some((p.parse().ok()?, q.parse().ok()?)))
            .ok_or_else(|| Error::BadSpec(format!("expected schmidt:<p>:<q>, got '{arg}'")))?;
        return construct_schmidt_minimal(SchmidtSpec::new(p, q)?);
    }
    standard_group(arg.parse::<GroupSpec>()?)
}
