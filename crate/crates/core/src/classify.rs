//! Classification by accumulating membership indices over all pattern tables.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{apply_centering, binarize, pack_sign_vector, sign_vector, DataMatrix};
use crate::model::TrainedModel;

/// Outcome of classifying one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    /// Predicted class in `1..=G`.
    pub label: usize,
    /// Accumulated membership indices divided by `L * m`.
    pub scores: Vec<f64>,
    /// Accumulated membership indices before scaling.
    pub raw_scores: Vec<f64>,
    /// Every class attaining the maximum score; more than one means a tie that
    /// was broken toward the smallest class.
    pub tied: Vec<usize>,
    /// Tables in which the point's pattern was never seen during training.
    pub unseen: usize,
}

/// Argmax with ties broken toward the smallest class. Returns the 1-based
/// label and all maximizing classes.
pub fn decide(scores: &[f64]) -> (usize, Vec<usize>) {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == best)
        .map(|(g, _)| g + 1)
        .collect();
    (tied[0], tied)
}

fn classify_packed(model: &TrainedModel, packed: &[u64]) -> Classification {
    let mut raw = vec![0.0; model.classes()];
    let mut unseen = 0;
    for table in model.tables() {
        match table.get_code(table.index_set().key_of(packed)) {
            Some(entry) => {
                for (acc, r) in raw.iter_mut().zip(&entry.membership) {
                    *acc += r;
                }
            }
            None => unseen += 1,
        }
    }
    finish(raw, model.layers() * model.m(), unseen)
}

pub(crate) fn finish(raw: Vec<f64>, tables: usize, unseen: usize) -> Classification {
    let scale = tables as f64;
    let scores: Vec<f64> = raw.iter().map(|r| r / scale).collect();
    let (label, tied) = decide(&scores);
    Classification {
        label,
        scores,
        raw_scores: raw,
        tied,
        unseen,
    }
}

/// Classifies a point given only its one-bit measurements `q = sign(Ax)`.
pub fn classify_code(model: &TrainedModel, q: &[i8]) -> Result<Classification> {
    if q.len() != model.m() {
        return Err(Error::Dimension {
            what: "code length",
            expected: model.m(),
            got: q.len(),
        });
    }
    Ok(classify_packed(model, &pack_sign_vector(q)?))
}

/// Centers `x` with the model's training mean, measures it and classifies.
pub fn classify_point(model: &TrainedModel, x: &[f64]) -> Result<Classification> {
    if x.len() != model.n() {
        return Err(Error::Dimension {
            what: "point dimension",
            expected: model.n(),
            got: x.len(),
        });
    }
    let centered: Vec<f64> = x
        .iter()
        .zip(model.centering().as_slice())
        .map(|(v, m)| v - m)
        .collect();
    classify_code(model, &sign_vector(model.matrix(), &centered)?)
}

/// Classifies every column of `data`, in parallel.
pub fn classify_batch(model: &TrainedModel, data: &DataMatrix) -> Result<Vec<Classification>> {
    let centered = apply_centering(data, model.centering())?;
    let q = binarize(model.matrix(), &centered)?;
    Ok((0..q.cols())
        .into_par_iter()
        .map(|j| classify_packed(model, q.packed_column(j)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{BinaryCode, CenteringVector, MeasurementMatrix};
    use crate::model::train;

    /// Two hyperplanes (identity rows), one point per class:
    /// class 1 at code (+1, +1), class 2 at code (-1, +1).
    fn hand_model() -> TrainedModel {
        let q = BinaryCode::from_signs(2, 2, &[1, 1, -1, 1]).unwrap();
        let a = MeasurementMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        train(&q, &[1, 2], 2, 1, 3, CenteringVector::zeros(2), a).unwrap()
    }

    #[test]
    fn hand_execution() {
        let c = classify_code(&hand_model(), &[1, 1]).unwrap();
        assert_eq!(c.raw_scores, vec![1.0, 0.0]);
        assert_eq!(c.scores, vec![0.5, 0.0]);
        assert_eq!(c.label, 1);
        assert_eq!(c.unseen, 0);
    }

    #[test]
    fn unseen_everywhere_ties_to_class_one() {
        // row 1 only ever saw +1
        let c = classify_code(&hand_model(), &[1, -1]).unwrap();
        assert_eq!(c.unseen, 1);
        let c = classify_code(&hand_model(), &[-1, -1]).unwrap();
        assert_eq!(c.scores, vec![0.0, 1.0 / 2.0]);
        assert_eq!(c.label, 2);

        let q = BinaryCode::from_signs(2, 2, &[1, 1, 1, 1]).unwrap();
        let a = MeasurementMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let m = train(&q, &[1, 2], 2, 1, 3, CenteringVector::zeros(2), a).unwrap();
        let c = classify_code(&m, &[-1, -1]).unwrap();
        assert_eq!(c.scores, vec![0.0, 0.0]);
        assert_eq!(c.unseen, 2);
        assert_eq!((c.label, c.tied), (1, vec![1, 2]));
    }

    #[test]
    fn scaling_never_moves_the_argmax() {
        let model = hand_model();
        for q in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            let c = classify_code(&model, &q).unwrap();
            assert_eq!(decide(&c.raw_scores).0, c.label);
        }
    }

    #[test]
    fn point_classification_composes() {
        let model = hand_model();
        let c = classify_point(&model, &[3.0, 2.0]).unwrap();
        assert_eq!(c.label, 1);
        assert_eq!(c, classify_code(&model, &[1, 1]).unwrap());
        // x = mu gives the all +1 code
        let at_mu = classify_point(&model, &[0.0, 0.0]).unwrap();
        assert_eq!(at_mu, classify_code(&model, &[1, 1]).unwrap());
        assert!(matches!(
            classify_point(&model, &[1.0]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            classify_code(&model, &[1, 1, 1]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn batch_matches_single_points() {
        let model = hand_model();
        let data = DataMatrix::from_columns(2, &[[3.0, 2.0], [-1.0, 4.0], [-2.0, -2.0]]).unwrap();
        let batch = classify_batch(&model, &data).unwrap();
        for (j, c) in batch.iter().enumerate() {
            assert_eq!(c, &classify_point(&model, data.column(j)).unwrap());
        }
    }
}
