//! Dataset ingestion: IDX image/label files, labeled CSV matrices, and
//! per-class train/test splits.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::measure::DataMatrix;
use crate::model::validate_labels;
use crate::rng::StreamRng;

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Points (columns) with 1-based class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    pub data: DataMatrix,
    pub labels: Vec<usize>,
    pub classes: usize,
}

impl LabeledDataset {
    pub fn new(data: DataMatrix, labels: Vec<usize>, classes: usize) -> Result<Self> {
        if labels.len() != data.len() {
            return Err(Error::Dimension {
                what: "labels vs points",
                expected: data.len(),
                got: labels.len(),
            });
        }
        validate_labels(&labels, classes)?;
        Ok(LabeledDataset {
            data,
            labels,
            classes,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Column indices of each class, `result[g - 1]` for class `g`.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.classes];
        for (j, &l) in self.labels.iter().enumerate() {
            by_class[l - 1].push(j);
        }
        by_class
    }

    /// Keeps only the listed classes and renumbers them `1..=k` in the order
    /// given.
    pub fn restrict_classes(&self, keep: &[usize]) -> Result<LabeledDataset> {
        if keep.len() < 2 {
            return Err(Error::config("at least two classes must be kept"));
        }
        let mut indices = Vec::new();
        let mut labels = Vec::new();
        for (j, &l) in self.labels.iter().enumerate() {
            if let Some(pos) = keep.iter().position(|&k| k == l) {
                indices.push(j);
                labels.push(pos + 1);
            }
        }
        LabeledDataset::new(self.data.select(&indices), labels, keep.len())
    }
}

struct Cursor<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Idx {
            path: self.path.to_path_buf(),
            offset: self.pos as u64,
            msg: msg.into(),
        }
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let chunk = self
            .bytes
            .get(self.pos..self.pos + 4)
            .ok_or_else(|| self.err(format!("truncated while reading {what}")))?;
        self.pos += 4;
        Ok(u32::from_be_bytes(chunk.try_into().expect("4 bytes")))
    }

    fn magic(&mut self, expected: u32) -> Result<()> {
        let found = self.u32("magic number")?;
        if found != expected {
            self.pos -= 4;
            return Err(self.err(format!(
                "bad magic number {found:#010x}, expected {expected:#010x}"
            )));
        }
        Ok(())
    }

    fn payload(&mut self, len: usize) -> Result<&'a [u8]> {
        let available = self.bytes.len() - self.pos;
        if available < len {
            return Err(self.err(format!(
                "truncated payload: {len} bytes expected, {available} present"
            )));
        }
        let out = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }
}

/// Reads an IDX3 unsigned-byte image file. Each image is flattened row-major
/// into one column; pixels stay in `[0, 255]`.
pub fn load_idx_images(path: impl AsRef<Path>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let mut cur = Cursor {
        path,
        bytes: &bytes,
        pos: 0,
    };
    cur.magic(IDX_IMAGES_MAGIC)?;
    let count = cur.u32("image count")? as usize;
    let rows = cur.u32("row count")? as usize;
    let cols = cur.u32("column count")? as usize;
    let dim = rows * cols;
    if dim == 0 {
        return Err(cur.err("images have zero pixels"));
    }
    let pixels = cur.payload(count * dim)?;
    DataMatrix::new(dim, pixels.iter().map(|&b| b as f64).collect())
}

/// Reads an IDX1 unsigned-byte label file. Label byte `d` becomes class
/// `d + 1`.
pub fn load_idx_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let mut cur = Cursor {
        path,
        bytes: &bytes,
        pos: 0,
    };
    cur.magic(IDX_LABELS_MAGIC)?;
    let count = cur.u32("label count")? as usize;
    if count == 0 {
        return Err(cur.err("label file is empty"));
    }
    Ok(cur
        .payload(count)?
        .iter()
        .map(|&b| b as usize + 1)
        .collect())
}

/// Loads and zips an IDX image/label pair. `G` is the largest label seen.
pub fn load_idx_dataset(
    images: impl AsRef<Path>,
    labels: impl AsRef<Path>,
) -> Result<LabeledDataset> {
    let data = load_idx_images(images)?;
    let labels = load_idx_labels(labels)?;
    if labels.len() != data.len() {
        return Err(Error::Dimension {
            what: "IDX label count vs image count",
            expected: data.len(),
            got: labels.len(),
        });
    }
    let classes = labels.iter().copied().max().unwrap_or(0);
    LabeledDataset::new(data, labels, classes)
}

/// Writes `data` as an IDX3 image file with the given image shape. Values
/// must be integers in `[0, 255]`.
pub fn write_idx_images(
    path: impl AsRef<Path>,
    data: &DataMatrix,
    rows: usize,
    cols: usize,
) -> Result<()> {
    if rows * cols != data.dim() {
        return Err(Error::Dimension {
            what: "IDX image shape",
            expected: data.dim(),
            got: rows * cols,
        });
    }
    let mut out = Vec::with_capacity(16 + data.values().len());
    out.extend_from_slice(&IDX_IMAGES_MAGIC.to_be_bytes());
    for v in [data.len(), rows, cols] {
        out.extend_from_slice(&(v as u32).to_be_bytes());
    }
    for &v in data.values() {
        if !(0.0..=255.0).contains(&v) || v.fract() != 0.0 {
            return Err(Error::Range(format!("pixel value {v} is not a byte")));
        }
        out.push(v as u8);
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

/// Writes 1-based classes as an IDX1 label file (class `g` stored as `g - 1`).
pub fn write_idx_labels(path: impl AsRef<Path>, labels: &[usize]) -> Result<()> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&IDX_LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    for &l in labels {
        if l == 0 || l > 256 {
            return Err(Error::Range(format!("class {l} does not fit a label byte")));
        }
        out.push((l - 1) as u8);
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(())
}

/// Reads rows of the form `label,v1,...,vn`. No header; every row must have
/// the same `n`. `G` is the largest label, so classes may be empty here and
/// are rejected later by the split.
pub fn load_csv_matrix(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, 0, e.to_string()))?;
    let mut dim = None;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            csv_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() < 2 {
            return Err(csv_err(
                path,
                line,
                "expected a label and at least one value",
            ));
        }
        let n = record.len() - 1;
        match dim {
            None => dim = Some(n),
            Some(d) if d != n => {
                return Err(csv_err(
                    path,
                    line,
                    format!("row has {n} values, earlier rows have {d}"),
                ))
            }
            _ => {}
        }
        let label: usize = record[0]
            .parse()
            .map_err(|_| csv_err(path, line, format!("bad label {:?}", &record[0])))?;
        if label == 0 {
            return Err(csv_err(path, line, "labels are 1-based"));
        }
        labels.push(label);
        for field in record.iter().skip(1) {
            let v: f64 = field
                .parse()
                .map_err(|_| csv_err(path, line, format!("non-numeric field {field:?}")))?;
            if !v.is_finite() {
                return Err(csv_err(path, line, format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
    }
    let dim = dim.ok_or(Error::Empty("CSV matrix"))?;
    let classes = labels.iter().copied().max().unwrap_or(0);
    LabeledDataset::new(DataMatrix::new(dim, values)?, labels, classes)
}

fn csv_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Draws, for every class, `train_per_class + test_per_class` distinct points
/// uniformly without replacement; the first `train_per_class` go to training.
/// Both outputs are grouped by class in class order.
pub fn split_per_class(
    ds: &LabeledDataset,
    train_per_class: usize,
    test_per_class: usize,
    rng: &mut StreamRng,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if train_per_class == 0 || test_per_class == 0 {
        return Err(Error::config(
            "train and test sizes per class must be positive",
        ));
    }
    let needed = train_per_class + test_per_class;
    let mut train_idx = Vec::with_capacity(ds.classes * train_per_class);
    let mut test_idx = Vec::with_capacity(ds.classes * test_per_class);
    let mut train_labels = Vec::with_capacity(train_idx.capacity());
    let mut test_labels = Vec::with_capacity(test_idx.capacity());
    for (g, members) in ds.class_indices().into_iter().enumerate() {
        if members.len() < needed {
            return Err(Error::InsufficientClass {
                class: g + 1,
                needed,
                available: members.len(),
            });
        }
        let picks = sample(rng, members.len(), needed).into_vec();
        for (k, &pick) in picks.iter().enumerate() {
            if k < train_per_class {
                train_idx.push(members[pick]);
                train_labels.push(g + 1);
            } else {
                test_idx.push(members[pick]);
                test_labels.push(g + 1);
            }
        }
    }
    Ok((
        LabeledDataset::new(ds.data.select(&train_idx), train_labels, ds.classes)?,
        LabeledDataset::new(ds.data.select(&test_idx), test_labels, ds.classes)?,
    ))
}

/// `per_class` points drawn without replacement from every class.
pub fn subsample_per_class(
    ds: &LabeledDataset,
    per_class: usize,
    rng: &mut StreamRng,
) -> Result<LabeledDataset> {
    if per_class == 0 {
        return Err(Error::config("points per class must be positive"));
    }
    let mut idx = Vec::with_capacity(ds.classes * per_class);
    let mut labels = Vec::with_capacity(idx.capacity());
    for (g, members) in ds.class_indices().into_iter().enumerate() {
        if members.len() < per_class {
            return Err(Error::InsufficientClass {
                class: g + 1,
                needed: per_class,
                available: members.len(),
            });
        }
        for pick in sample(rng, members.len(), per_class) {
            idx.push(members[pick]);
            labels.push(g + 1);
        }
    }
    LabeledDataset::new(ds.data.select(&idx), labels, ds.classes)
}
