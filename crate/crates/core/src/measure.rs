//! Measurement matrices, centering and one-bit codes.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{substream, Domain};

/// Dense `m x n` Gaussian measurement matrix, stored row-major. Each row is
/// the normal vector of one hyperplane through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    seed: Option<u64>,
}

impl MeasurementMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::config(format!(
                "measurement matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                what: "measurement matrix entries",
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("measurement matrix has non-finite entries"));
        }
        Ok(MeasurementMatrix {
            rows,
            cols,
            entries,
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `<a_i, x>` for every row, accumulated left to right in f64.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                what: "projection input",
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// `n x p` data matrix whose columns are the points. Stored column-major so a
/// point is a contiguous slice.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("data dimension must be at least 1"));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::Dimension {
                what: "data matrix storage",
                expected: (values.len() / dim + 1) * dim,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("data matrix has non-finite entries"));
        }
        Ok(DataMatrix { dim, values })
    }

    pub fn from_columns<C: AsRef<[f64]>>(dim: usize, columns: &[C]) -> Result<Self> {
        let mut values = Vec::with_capacity(dim * columns.len());
        for c in columns {
            let c = c.as_ref();
            if c.len() != dim {
                return Err(Error::Dimension {
                    what: "data column",
                    expected: dim,
                    got: c.len(),
                });
            }
            values.extend_from_slice(c);
        }
        DataMatrix::new(dim, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points `p`.
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn columns(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// New matrix made of the listed columns, in the listed order.
    pub fn select(&self, indices: &[usize]) -> DataMatrix {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &j in indices {
            values.extend_from_slice(self.column(j));
        }
        DataMatrix {
            dim: self.dim,
            values,
        }
    }
}

/// Training mean `mu`, subtracted from every point before projection.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteringVector(Vec<f64>);

impl CenteringVector {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Empty("centering vector"));
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("centering vector has non-finite entries"));
        }
        Ok(CenteringVector(mu))
    }

    pub fn zeros(dim: usize) -> Self {
        CenteringVector(vec![0.0; dim])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Q = sign(AX)`, bit-packed per column: bit `i` of column `j` is set iff
/// `Q[i, j] = +1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BinaryCode {
    /// Builds a code from `+1/-1` entries given column by column.
    pub fn from_signs(rows: usize, cols: usize, signs: &[i8]) -> Result<Self> {
        if signs.len() != rows * cols {
            return Err(Error::Dimension {
                what: "binary code entries",
                expected: rows * cols,
                got: signs.len(),
            });
        }
        let words = rows.div_ceil(64);
        let mut bits = vec![0u64; words * cols];
        for j in 0..cols {
            pack_signs(
                &signs[j * rows..(j + 1) * rows],
                &mut bits[j * words..(j + 1) * words],
            )?;
        }
        Ok(BinaryCode {
            rows,
            cols,
            words,
            bits,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        if self.packed_column(j)[i >> 6] >> (i & 63) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub(crate) fn packed_column(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words..(j + 1) * self.words]
    }
}

fn pack_signs(signs: &[i8], out: &mut [u64]) -> Result<()> {
    for (i, &s) in signs.iter().enumerate() {
        match s {
            1 => out[i >> 6] |= 1 << (i & 63),
            -1 => {}
            other => {
                return Err(Error::config(format!(
                    "binary entries must be +1 or -1, found {other}"
                )))
            }
        }
    }
    Ok(())
}

/// Packs a single `+1/-1` vector the same way [`BinaryCode`] stores columns.
pub(crate) fn pack_sign_vector(signs: &[i8]) -> Result<Vec<u64>> {
    let mut out = vec![0u64; signs.len().div_ceil(64)];
    pack_signs(signs, &mut out)?;
    Ok(out)
}

/// `sign(a) = +1` for `a >= 0`, else `-1`.
pub fn sign(a: f64) -> i8 {
    if a >= 0.0 {
        1
    } else {
        -1
    }
}

/// Draws an `m x n` matrix of i.i.d. standard normals from the
/// [`Domain::Matrix`] substream of `seed`.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64) -> Result<MeasurementMatrix> {
    if m == 0 || n == 0 {
        return Err(Error::config(format!(
            "measurement matrix must be at least 1x1, got {m}x{n}"
        )));
    }
    let mut rng = substream(seed, Domain::Matrix, m as u64, n as u64);
    let entries: Vec<f64> = (0..m * n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    Ok(MeasurementMatrix::new(m, n, entries)?.with_seed(Some(seed)))
}

pub fn compute_centering(train: &DataMatrix) -> Result<CenteringVector> {
    if train.is_empty() {
        return Err(Error::Empty("training matrix"));
    }
    let p = train.len() as f64;
    let mut mu = vec![0.0; train.dim()];
    for col in train.columns() {
        for (acc, v) in mu.iter_mut().zip(col) {
            *acc += v;
        }
    }
    for v in &mut mu {
        *v /= p;
    }
    CenteringVector::new(mu)
}

pub fn apply_centering(data: &DataMatrix, mu: &CenteringVector) -> Result<DataMatrix> {
    if data.dim() != mu.len() {
        return Err(Error::Dimension {
            what: "centering vector",
            expected: data.dim(),
            got: mu.len(),
        });
    }
    let values = data
        .columns()
        .flat_map(|col| col.iter().zip(mu.as_slice()).map(|(x, m)| x - m))
        .collect();
    Ok(DataMatrix {
        dim: data.dim(),
        values,
    })
}

/// `sign(Ax)` for a single point.
pub fn sign_vector(a: &MeasurementMatrix, x: &[f64]) -> Result<Vec<i8>> {
    Ok(a.project(x)?.into_iter().map(sign).collect())
}

/// `Q = sign(AX)`. Columns are processed in parallel; each column's result is
/// independent of scheduling.
pub fn binarize(a: &MeasurementMatrix, x: &DataMatrix) -> Result<BinaryCode> {
    if a.cols() != x.dim() {
        return Err(Error::Dimension {
            what: "binarize (A.cols vs X.dim)",
            expected: a.cols(),
            got: x.dim(),
        });
    }
    let rows = a.rows();
    let words = rows.div_ceil(64);
    let mut bits = vec![0u64; words * x.len()];
    if words > 0 {
        bits.par_chunks_mut(words)
            .zip(x.values.par_chunks_exact(x.dim()))
            .for_each(|(out, col)| {
                for (i, row) in a.entries.chunks_exact(a.cols).enumerate() {
                    let dot: f64 = row.iter().zip(col).map(|(p, q)| p * q).sum();
                    if dot >= 0.0 {
                        out[i >> 6] |= 1 << (i & 63);
                    }
                }
            });
    }
    Ok(BinaryCode {
        rows,
        cols: x.len(),
        words,
        bits,
    })
}
