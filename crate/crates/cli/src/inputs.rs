//! Input files: datasets, gold labels and token sequences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use serde::Deserialize;

use distill::corpus::read_jsonl;
use distill::metrics::tokenize_words;
use distill::synth::GoldLabels;
use distill::{Dataset, NoiseCategory};

use crate::settings::Settings;
use crate::Failure;

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

pub fn read_dataset(path: &Path, settings: &Settings) -> Result<Dataset, Failure> {
    let dataset = read_jsonl(BufReader::new(open(path)?), settings.language, settings.partition)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    Ok(dataset.with_source_name(name))
}

#[derive(Deserialize)]
struct GoldRecord {
    id: String,
    #[serde(default)]
    categories: Vec<String>,
}

pub fn read_gold(path: &Path) -> Result<GoldLabels, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut gold = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = |e: String| format!("{}:{}: {e}", path.display(), i + 1);
        let record: GoldRecord = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        let categories = record
            .categories
            .iter()
            .map(|c| c.parse::<NoiseCategory>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| at(e.to_string()))?;
        if gold.insert(record.id.clone(), categories).is_some() {
            return Err(at(format!("duplicate id {}", record.id)).into());
        }
    }
    Ok(gold)
}

#[derive(Deserialize)]
struct TokenRecord {
    id: serde_json::Value,
    tokens: Vec<String>,
}

/// `(id, tokens)` in file order. JSONL when the first non-blank line is an
/// object, otherwise one whitespace-tokenized sentence per line with the
/// line index as id.
pub fn read_sentences(path: &Path) -> Result<Vec<(String, Vec<String>)>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let jsonl = text.lines().find(|l| !l.trim().is_empty()).is_some_and(|l| l.trim_start().starts_with('{'));
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if jsonl {
            if line.trim().is_empty() {
                continue;
            }
            let record: TokenRecord = serde_json::from_str(line)
                .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
            let id = match record.id {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            out.push((id, record.tokens));
        } else {
            out.push((i.to_string(), tokenize_words(line)));
        }
    }
    Ok(out)
}

/// Pairs hypotheses with references by id, in hypothesis order.
pub fn align_by_id(
    hyps: Vec<(String, Vec<String>)>,
    refs: Vec<(String, Vec<String>)>,
) -> Result<(Vec<Vec<String>>, Vec<Vec<String>>), Failure> {
    let mut by_id: HashMap<String, Vec<String>> = HashMap::new();
    for (id, tokens) in refs {
        if by_id.insert(id.clone(), tokens).is_some() {
            return Err(format!("duplicate reference id {id}").into());
        }
    }
    if by_id.len() != hyps.len() {
        return Err(format!("{} hypotheses but {} references", hyps.len(), by_id.len()).into());
    }
    let mut h = Vec::with_capacity(hyps.len());
    let mut r = Vec::with_capacity(hyps.len());
    for (id, tokens) in hyps {
        let reference = by_id.remove(&id).ok_or_else(|| format!("no reference for id {id}"))?;
        h.push(tokens);
        r.push(reference);
    }
    Ok((h, r))
}
