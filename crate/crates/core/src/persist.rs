//! Versioned JSON model files.
//!
//! A file holds everything needed to classify without the original seed:
//! `mu`, the full matrix `A` and every pattern table with its class counts and
//! membership indices.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{CenteringVector, MeasurementMatrix};
use crate::model::{
    membership_index, ClassCounts, IndexSet, PatternEntry, PatternTable, TrainedModel,
};

pub const FORMAT_TAG: &str = "onebit-model";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u64,
    m: usize,
    n: usize,
    classes: usize,
    layers: usize,
    master_seed: u64,
    matrix_seed: Option<u64>,
    mu: Vec<f64>,
    matrix: Vec<f64>,
    tables: Vec<TableFile>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    layer: usize,
    iteration: usize,
    members: Vec<usize>,
    patterns: Vec<PatternFile>,
}

#[derive(Serialize, Deserialize)]
struct PatternFile {
    code: u64,
    counts: Vec<u32>,
    membership: Vec<f64>,
}

/// Serializes a model to its JSON text (terminated by a newline).
pub fn model_to_string(model: &TrainedModel) -> Result<String> {
    let file = ModelFile {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        m: model.m(),
        n: model.n(),
        classes: model.classes(),
        layers: model.layers(),
        master_seed: model.master_seed(),
        matrix_seed: model.matrix().seed(),
        mu: model.centering().as_slice().to_vec(),
        matrix: model.matrix().entries().to_vec(),
        tables: model
            .tables()
            .iter()
            .map(|t| TableFile {
                layer: t.index_set().layer(),
                iteration: t.index_set().iteration(),
                members: t.index_set().members().to_vec(),
                patterns: t
                    .entries()
                    .map(|(key, e)| PatternFile {
                        code: key.code(),
                        counts: e.counts.as_slice().to_vec(),
                        membership: e.membership.clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Model(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Parses JSON text produced by [`model_to_string`].
pub fn model_from_str(text: &str) -> Result<TrainedModel> {
    let header: Header =
        serde_json::from_str(text).map_err(|e| Error::Model(format!("header: {e}")))?;
    if header.format != FORMAT_TAG {
        return Err(Error::Model(format!(
            "format: expected {FORMAT_TAG:?}, found {:?}",
            header.format
        )));
    }
    if header.version != FORMAT_VERSION {
        return Err(Error::ModelVersion {
            found: header.version,
            supported: FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
    let matrix = MeasurementMatrix::new(file.m, file.n, file.matrix)
        .map_err(|e| Error::Model(format!("matrix: {e}")))?
        .with_seed(file.matrix_seed);
    let mu = CenteringVector::new(file.mu).map_err(|e| Error::Model(format!("mu: {e}")))?;
    let mut tables = Vec::with_capacity(file.tables.len());
    for (k, t) in file.tables.into_iter().enumerate() {
        let set = IndexSet::new(t.layer, t.iteration, t.members, file.m)
            .map_err(|e| Error::Model(format!("tables[{k}].members: {e}")))?;
        let mut entries = BTreeMap::new();
        for p in t.patterns {
            if t.layer < 64 && p.code >> t.layer != 0 {
                return Err(Error::Model(format!(
                    "tables[{k}].patterns: code {} has more than {} bits",
                    p.code, t.layer
                )));
            }
            let expected = membership_index(&p.counts)
                .map_err(|e| Error::Model(format!("tables[{k}].patterns.counts: {e}")))?;
            if expected != p.membership {
                return Err(Error::Model(format!(
                    "tables[{k}].patterns.membership disagrees with counts for code {}",
                    p.code
                )));
            }
            let entry = PatternEntry {
                counts: ClassCounts::new(p.counts),
                membership: p.membership,
            };
            if entries.insert(p.code, entry).is_some() {
                return Err(Error::Model(format!(
                    "tables[{k}].patterns: code {} repeats",
                    p.code
                )));
            }
        }
        tables.push(PatternTable::from_parts(set, entries));
    }
    TrainedModel::from_parts(
        file.classes,
        file.layers,
        mu,
        matrix,
        tables,
        file.master_seed,
    )
    .map_err(|e| Error::Model(e.to_string()))
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, model_to_string(model)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    model_from_str(&text).map_err(|e| match e {
        Error::Model(msg) => Error::Model(format!("{}: {msg}", path.display())),
        other => other,
    })
}
