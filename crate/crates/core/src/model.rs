//! Layered training: random index sets, sign-pattern tables and membership
//! indices.
//!
//! Layer `l` draws `m` pairwise-distinct `l`-subsets of the hyperplanes. For
//! each subset the training columns are grouped by their sign pattern on those
//! rows, and every pattern gets a per-class membership index `r` in
//! `[0, G - 1]`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{
    apply_centering, binarize, compute_centering, gaussian_matrix, BinaryCode, CenteringVector,
    DataMatrix, MeasurementMatrix,
};
use crate::rng::{derive_seed, substream, Domain, StreamRng};

/// Longest pattern that fits a 64-bit key.
pub const MAX_LAYERS: usize = 64;

/// Rows `Lambda_{l,i}` examined by iteration `i` of layer `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    layer: usize,
    iteration: usize,
    members: Vec<usize>,
}

impl IndexSet {
    /// `members` must be strictly increasing and below `m`.
    pub fn new(layer: usize, iteration: usize, members: Vec<usize>, m: usize) -> Result<Self> {
        if members.len() != layer {
            return Err(Error::Dimension {
                what: "index set size",
                expected: layer,
                got: members.len(),
            });
        }
        if layer == 0 || layer > MAX_LAYERS {
            return Err(Error::config(format!(
                "index set size must be in 1..={MAX_LAYERS}, got {layer}"
            )));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "index set members must be strictly increasing",
            ));
        }
        if members.last().is_some_and(|&last| last >= m) {
            return Err(Error::config(format!(
                "index set member out of range 0..{m}"
            )));
        }
        Ok(IndexSet {
            layer,
            iteration,
            members,
        })
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Pattern of a packed column on this set's rows.
    #[inline]
    pub(crate) fn key_of(&self, packed: &[u64]) -> u64 {
        let mut code = 0u64;
        for (bit, &row) in self.members.iter().enumerate() {
            code |= (packed[row >> 6] >> (row & 63) & 1) << bit;
        }
        code
    }
}

/// An `l`-bit sign pattern. Bit `j` is set iff the entry on the `j`-th
/// smallest member row is `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternKey {
    code: u64,
    len: u8,
}

impl PatternKey {
    pub fn new(code: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LAYERS {
            return Err(Error::config(format!(
                "pattern length must be in 1..={MAX_LAYERS}, got {len}"
            )));
        }
        if len < 64 && code >> len != 0 {
            return Err(Error::config(format!(
                "pattern code {code:#x} has bits above position {}",
                len - 1
            )));
        }
        Ok(PatternKey {
            code,
            len: len as u8,
        })
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Encodes `+1/-1` entries listed in increasing member order.
pub fn encode_pattern(entries: &[i8], index_set: &IndexSet) -> Result<PatternKey> {
    if entries.len() != index_set.layer() {
        return Err(Error::Dimension {
            what: "pattern length",
            expected: index_set.layer(),
            got: entries.len(),
        });
    }
    let mut code = 0u64;
    for (bit, &e) in entries.iter().enumerate() {
        match e {
            1 => code |= 1 << bit,
            -1 => {}
            other => {
                return Err(Error::config(format!(
                    "pattern entries must be +1 or -1, found {other}"
                )))
            }
        }
    }
    PatternKey::new(code, entries.len())
}

/// Training points per class (`P_{g|t}`) observed with one pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCounts(Vec<u32>);

impl ClassCounts {
    pub fn new(counts: Vec<u32>) -> Self {
        ClassCounts(counts)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

/// Membership index of every class for one pattern:
///
/// `r(g) = (P_g / S) * (sum_j |P_g - P_j| / S)` with `S = sum_j P_j`.
///
/// Evaluated as the exact integer ratio `P_g * sum_j |P_g - P_j| / S^2`, so
/// scaling all counts by an integer or permuting classes reproduces the
/// result bit for bit.
pub fn membership_index(counts: &[u32]) -> Result<Vec<f64>> {
    let total: u128 = counts.iter().map(|&c| c as u128).sum();
    if total == 0 {
        return Err(Error::config(
            "membership index of a pattern with no training points",
        ));
    }
    let denom = (total * total) as f64;
    Ok(counts
        .iter()
        .map(|&pg| {
            let spread: u128 = counts.iter().map(|&pj| pg.abs_diff(pj) as u128).sum();
            (pg as u128 * spread) as f64 / denom
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternEntry {
    pub counts: ClassCounts,
    pub membership: Vec<f64>,
}

/// All patterns observed for one index set.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternTable {
    index_set: IndexSet,
    entries: BTreeMap<u64, PatternEntry>,
}

impl PatternTable {
    pub fn from_parts(index_set: IndexSet, entries: BTreeMap<u64, PatternEntry>) -> Self {
        PatternTable { index_set, entries }
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    /// `T_{l,i}`.
    pub fn pattern_count(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, key: PatternKey) -> Option<&PatternEntry> {
        self.entries.get(&key.code())
    }

    pub(crate) fn get_code(&self, code: u64) -> Option<&PatternEntry> {
        self.entries.get(&code)
    }

    pub fn entries(&self) -> impl Iterator<Item = (PatternKey, &PatternEntry)> {
        let len = self.index_set.layer();
        self.entries.iter().map(move |(&code, e)| {
            (
                PatternKey {
                    code,
                    len: len as u8,
                },
                e,
            )
        })
    }
}

/// Checks that labels are 1-based classes in `1..=classes`.
pub fn validate_labels(labels: &[usize], classes: usize) -> Result<()> {
    for (index, &label) in labels.iter().enumerate() {
        if label == 0 || label > classes {
            return Err(Error::Label {
                index,
                label,
                classes,
            });
        }
    }
    Ok(())
}

/// Tallies the distinct column patterns of `q` restricted to `index_set` and
/// computes each pattern's membership index.
pub fn extract_patterns(
    q: &BinaryCode,
    labels: &[usize],
    classes: usize,
    index_set: &IndexSet,
) -> Result<PatternTable> {
    if labels.len() != q.cols() {
        return Err(Error::Dimension {
            what: "labels",
            expected: q.cols(),
            got: labels.len(),
        });
    }
    if index_set.members().last().is_some_and(|&r| r >= q.rows()) {
        return Err(Error::config("index set refers to rows outside the code"));
    }
    validate_labels(labels, classes)?;
    Ok(extract_unchecked(q, labels, classes, index_set))
}

fn extract_unchecked(
    q: &BinaryCode,
    labels: &[usize],
    classes: usize,
    index_set: &IndexSet,
) -> PatternTable {
    let mut counts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (j, &label) in labels.iter().enumerate() {
        let code = index_set.key_of(q.packed_column(j));
        counts.entry(code).or_insert_with(|| vec![0; classes])[label - 1] += 1;
    }
    let entries = counts
        .into_iter()
        .map(|(code, c)| {
            // every stored pattern has at least one witness
            let membership = membership_index(&c).expect("non-empty pattern");
            (
                code,
                PatternEntry {
                    counts: ClassCounts(c),
                    membership,
                },
            )
        })
        .collect();
    PatternTable {
        index_set: index_set.clone(),
        entries,
    }
}

/// `binomial(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Draws `m` pairwise-distinct `layer`-subsets of `0..m` by rejection: each
/// candidate is a uniform `layer`-subset, and duplicates of an already drawn
/// subset are redrawn.
pub fn select_index_sets(m: usize, layer: usize, rng: &mut StreamRng) -> Result<Vec<IndexSet>> {
    if layer == 0 || layer > m {
        return Err(Error::config(format!(
            "layer size {layer} must be in 1..={m}"
        )));
    }
    if layer > MAX_LAYERS {
        return Err(Error::config(format!(
            "layer size {layer} exceeds the {MAX_LAYERS}-bit pattern limit"
        )));
    }
    let available = binomial(m, layer);
    if available < m as u128 {
        return Err(Error::config(format!(
            "only {available} distinct {layer}-subsets of {m} hyperplanes, {m} required"
        )));
    }
    let mut seen = HashSet::with_capacity(m);
    let mut sets = Vec::with_capacity(m);
    while sets.len() < m {
        let mut members = sample(rng, m, layer).into_vec();
        members.sort_unstable();
        if seen.insert(members.clone()) {
            sets.push(IndexSet {
                layer,
                iteration: sets.len(),
                members,
            });
        }
    }
    Ok(sets)
}

/// Every index set of an `layers`-layer model over `m` hyperplanes, ordered by
/// `(layer, iteration)`. Layer `l` uses substream `(IndexSets, l)` of
/// `master_seed`.
pub fn layered_index_sets(m: usize, layers: usize, master_seed: u64) -> Result<Vec<IndexSet>> {
    if layers == 0 {
        return Err(Error::config("at least one layer is required"));
    }
    if layers > m {
        return Err(Error::config(format!(
            "{layers} layers requested but only {m} hyperplanes"
        )));
    }
    let mut all = Vec::with_capacity(layers * m);
    for layer in 1..=layers {
        let mut rng = substream(master_seed, Domain::IndexSets, layer as u64, 0);
        all.extend(select_index_sets(m, layer, &mut rng)?);
    }
    Ok(all)
}

/// Everything needed to classify new points.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub(crate) classes: usize,
    pub(crate) layers: usize,
    pub(crate) mu: CenteringVector,
    pub(crate) matrix: MeasurementMatrix,
    pub(crate) tables: Vec<PatternTable>,
    pub(crate) master_seed: u64,
}

impl TrainedModel {
    /// Assembles a model from parts, checking the structural invariants.
    pub fn from_parts(
        classes: usize,
        layers: usize,
        mu: CenteringVector,
        matrix: MeasurementMatrix,
        tables: Vec<PatternTable>,
        master_seed: u64,
    ) -> Result<Self> {
        let m = matrix.rows();
        if classes < 2 {
            return Err(Error::config(format!(
                "need at least 2 classes, got {classes}"
            )));
        }
        if mu.len() != matrix.cols() {
            return Err(Error::Dimension {
                what: "centering vector",
                expected: matrix.cols(),
                got: mu.len(),
            });
        }
        if tables.len() != layers * m {
            return Err(Error::Dimension {
                what: "pattern table count",
                expected: layers * m,
                got: tables.len(),
            });
        }
        for (k, t) in tables.iter().enumerate() {
            let (layer, iteration) = (k / m + 1, k % m);
            let set = t.index_set();
            if set.layer() != layer || set.iteration() != iteration {
                return Err(Error::Model(format!(
                    "table {k} is ({}, {}), expected ({layer}, {iteration})",
                    set.layer(),
                    set.iteration()
                )));
            }
            IndexSet::new(layer, iteration, set.members().to_vec(), m)?;
            for (_, e) in t.entries() {
                if e.counts.as_slice().len() != classes || e.membership.len() != classes {
                    return Err(Error::Model(format!(
                        "table {k} has an entry with the wrong class count"
                    )));
                }
            }
        }
        for layer in tables.chunks(m) {
            let distinct: HashSet<&[usize]> =
                layer.iter().map(|t| t.index_set().members()).collect();
            if distinct.len() != layer.len() {
                return Err(Error::Model("index sets within a layer repeat".into()));
            }
        }
        Ok(TrainedModel {
            classes,
            layers,
            mu,
            matrix,
            tables,
            master_seed,
        })
    }

    pub fn m(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n(&self) -> usize {
        self.matrix.cols()
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn centering(&self) -> &CenteringVector {
        &self.mu
    }

    pub fn matrix(&self) -> &MeasurementMatrix {
        &self.matrix
    }

    pub fn tables(&self) -> &[PatternTable] {
        &self.tables
    }
}

/// Checks shared by [`train`] and the streaming evaluator.
pub(crate) fn check_training_inputs(
    q: &BinaryCode,
    labels: &[usize],
    classes: usize,
    layers: usize,
) -> Result<()> {
    if classes < 2 {
        return Err(Error::config(format!(
            "need at least 2 classes, got {classes}"
        )));
    }
    if layers > MAX_LAYERS {
        return Err(Error::config(format!(
            "{layers} layers exceed the {MAX_LAYERS}-bit pattern limit"
        )));
    }
    if labels.len() != q.cols() {
        return Err(Error::Dimension {
            what: "labels",
            expected: q.cols(),
            got: labels.len(),
        });
    }
    validate_labels(labels, classes)
}

/// Builds one pattern table per index set, in parallel.
pub(crate) fn build_tables(
    q: &BinaryCode,
    labels: &[usize],
    classes: usize,
    sets: &[IndexSet],
) -> Vec<PatternTable> {
    sets.par_iter()
        .map(|s| extract_unchecked(q, labels, classes, s))
        .collect()
}

/// Trains an `layers`-layer model on `q = sign(A (X - mu))`.
pub fn train(
    q: &BinaryCode,
    labels: &[usize],
    classes: usize,
    layers: usize,
    master_seed: u64,
    mu: CenteringVector,
    matrix: MeasurementMatrix,
) -> Result<TrainedModel> {
    check_training_inputs(q, labels, classes, layers)?;
    if q.rows() != matrix.rows() {
        return Err(Error::Dimension {
            what: "code rows vs matrix rows",
            expected: matrix.rows(),
            got: q.rows(),
        });
    }
    let sets = layered_index_sets(q.rows(), layers, master_seed)?;
    let tables = build_tables(q, labels, classes, &sets);
    TrainedModel::from_parts(classes, layers, mu, matrix, tables, master_seed)
}

/// Full pipeline from raw points: center with their mean, draw `A` (`m x n`)
/// from `seed`, binarize and train.
pub fn fit(
    data: &DataMatrix,
    labels: &[usize],
    classes: usize,
    m: usize,
    layers: usize,
    seed: u64,
) -> Result<TrainedModel> {
    let a = gaussian_matrix(m, data.dim(), seed)?;
    let mu = compute_centering(data)?;
    let q = binarize(&a, &apply_centering(data, &mu)?)?;
    let sets_seed = derive_seed(seed, Domain::IndexSets, m as u64, 0);
    train(&q, labels, classes, layers, sets_seed, mu, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(rows: usize, cols: &[&[i8]]) -> BinaryCode {
        let flat: Vec<i8> = cols.iter().flat_map(|c| c.iter().copied()).collect();
        BinaryCode::from_signs(rows, cols.len(), &flat).unwrap()
    }

    fn set(members: &[usize], m: usize) -> IndexSet {
        IndexSet::new(members.len(), 0, members.to_vec(), m).unwrap()
    }

    #[test]
    fn singletons_when_layer_one_equals_m() {
        let mut rng = substream(1, Domain::IndexSets, 1, 0);
        let sets = select_index_sets(3, 1, &mut rng).unwrap();
        let mut all: Vec<usize> = sets.iter().map(|s| s.members()[0]).collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn pairs_are_distinct() {
        let mut rng = substream(4, Domain::IndexSets, 2, 0);
        let sets = select_index_sets(5, 2, &mut rng).unwrap();
        assert_eq!(sets.len(), 5);
        let distinct: HashSet<_> = sets.iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(distinct.len(), 5);
        for s in &sets {
            assert_eq!(s.members().len(), 2);
            assert!(s.members()[0] < s.members()[1] && s.members()[1] < 5);
        }
    }

    #[test]
    fn too_few_subsets_is_an_error() {
        let mut rng = substream(1, Domain::IndexSets, 3, 0);
        assert!(matches!(
            select_index_sets(3, 3, &mut rng),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn encode_examples() {
        let s2 = set(&[1, 4], 5);
        assert_eq!(encode_pattern(&[1, 1], &s2).unwrap().code(), 3);
        assert_eq!(encode_pattern(&[1, -1], &s2).unwrap().code(), 1);
        let s3 = set(&[0, 1, 2], 3);
        assert_eq!(encode_pattern(&[-1, -1, -1], &s3).unwrap().code(), 0);
        assert!(matches!(
            encode_pattern(&[1], &s2),
            Err(Error::Dimension { .. })
        ));
        assert!(PatternKey::new(4, 2).is_err());
    }

    #[test]
    fn key_of_matches_encode() {
        let q = code(5, &[&[1, -1, -1, 1, 1]]);
        let s = set(&[0, 3, 4], 5);
        let packed = q.packed_column(0);
        let entries: Vec<i8> = s.members().iter().map(|&r| q.get(r, 0)).collect();
        assert_eq!(
            s.key_of(packed),
            encode_pattern(&entries, &s).unwrap().code()
        );
    }

    #[test]
    fn extract_identical_columns() {
        let q = code(2, &[&[1, -1], &[1, -1], &[1, -1]]);
        let t = extract_patterns(&q, &[1, 2, 2], 2, &set(&[0, 1], 2)).unwrap();
        assert_eq!(t.pattern_count(), 1);
        let (_, e) = t.entries().next().unwrap();
        assert_eq!(e.counts.total(), 3);
    }

    #[test]
    fn extract_four_patterns() {
        let q = code(2, &[&[1, 1], &[1, -1], &[-1, 1], &[-1, -1]]);
        let t = extract_patterns(&q, &[1, 1, 2, 2], 2, &set(&[0, 1], 2)).unwrap();
        assert_eq!(t.pattern_count(), 4);
        assert!(t.entries().all(|(_, e)| e.counts.total() == 1));
    }

    #[test]
    fn extract_tallies_per_class() {
        // patterns 3, 3, 1 on rows {0, 1}
        let q = code(2, &[&[1, 1], &[1, 1], &[1, -1]]);
        let s = set(&[0, 1], 2);
        let t = extract_patterns(&q, &[1, 2, 1], 2, &s).unwrap();
        let key = |c| PatternKey::new(c, 2).unwrap();
        assert_eq!(t.get(key(3)).unwrap().counts.as_slice(), &[1, 1]);
        assert_eq!(t.get(key(1)).unwrap().counts.as_slice(), &[1, 0]);
        assert!(matches!(
            extract_patterns(&q, &[1, 3, 1], 2, &s),
            Err(Error::Label { label: 3, .. })
        ));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership_index(&[4, 4, 4]).unwrap(), vec![0.0, 0.0, 0.0]);
        assert_eq!(
            membership_index(&[9, 0, 0, 0]).unwrap(),
            vec![3.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(membership_index(&[3, 1]).unwrap(), vec![0.375, 0.125]);
        assert!(membership_index(&[0, 0]).is_err());
    }

    fn hand_model() -> TrainedModel {
        let q = code(2, &[&[1, 1], &[-1, 1]]);
        let a = MeasurementMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        train(&q, &[1, 2], 2, 1, 5, CenteringVector::zeros(2), a).unwrap()
    }

    #[test]
    fn train_hand_example() {
        let model = hand_model();
        assert_eq!(model.tables().len(), 2);
        let row0 = model
            .tables()
            .iter()
            .find(|t| t.index_set().members() == [0])
            .unwrap();
        let plus = row0.get(PatternKey::new(1, 1).unwrap()).unwrap();
        let minus = row0.get(PatternKey::new(0, 1).unwrap()).unwrap();
        assert_eq!(plus.counts.as_slice(), &[1, 0]);
        assert_eq!(plus.membership, vec![1.0, 0.0]);
        assert_eq!(minus.counts.as_slice(), &[0, 1]);
        assert_eq!(minus.membership, vec![0.0, 1.0]);
        let row1 = model
            .tables()
            .iter()
            .find(|t| t.index_set().members() == [1])
            .unwrap();
        assert_eq!(row1.pattern_count(), 1);
    }

    #[test]
    fn train_is_deterministic() {
        assert_eq!(hand_model(), hand_model());
    }

    #[test]
    fn train_rejects_single_class() {
        let q = code(2, &[&[1, 1]]);
        let a = MeasurementMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            train(&q, &[1], 1, 1, 0, CenteringVector::zeros(2), a),
            Err(Error::Config(_))
        ));
    }

    proptest! {
        #[test]
        fn membership_bounds_and_purity(counts in prop::collection::vec(0u32..50, 2..6)) {
            prop_assume!(counts.iter().any(|&c| c > 0));
            let g = counts.len();
            let r = membership_index(&counts).unwrap();
            let positive: Vec<usize> = (0..g).filter(|&i| counts[i] > 0).collect();
            for (i, &ri) in r.iter().enumerate() {
                prop_assert!(ri >= 0.0 && ri <= (g - 1) as f64);
                let pure = positive.len() == 1 && positive[0] == i;
                prop_assert_eq!(ri == (g - 1) as f64, pure);
            }
        }

        #[test]
        fn membership_is_class_symmetric_and_ratio_based(
            counts in prop::collection::vec(0u32..50, 2..6),
            scale in 1u32..20,
            rot in 0usize..6,
        ) {
            prop_assume!(counts.iter().any(|&c| c > 0));
            let r = membership_index(&counts).unwrap();
            let scaled: Vec<u32> = counts.iter().map(|c| c * scale).collect();
            prop_assert_eq!(&membership_index(&scaled).unwrap(), &r);
            let k = rot % counts.len();
            let mut rotated = counts.clone();
            rotated.rotate_left(k);
            let mut expected = r.clone();
            expected.rotate_left(k);
            prop_assert_eq!(membership_index(&rotated).unwrap(), expected);
        }

        #[test]
        fn tables_account_for_every_column_and_ignore_order(
            cols in prop::collection::vec((prop::collection::vec(prop::bool::ANY, 6), 1usize..4), 1..40),
            seed in 0u64..1000,
        ) {
            let m = 6;
            let signs: Vec<i8> = cols.iter().flat_map(|(c, _)| c.iter().map(|&b| if b { 1 } else { -1 })).collect();
            let labels: Vec<usize> = cols.iter().map(|(_, l)| *l).collect();
            let q = BinaryCode::from_signs(m, cols.len(), &signs).unwrap();
            let a = MeasurementMatrix::new(m, 1, vec![1.0; m]).unwrap();
            let model = train(&q, &labels, 3, 3, seed, CenteringVector::zeros(1), a.clone()).unwrap();
            for t in model.tables() {
                let total: u64 = t.entries().map(|(_, e)| e.counts.total()).sum();
                prop_assert_eq!(total, cols.len() as u64);
            }
            let rev_signs: Vec<i8> = cols.iter().rev().flat_map(|(c, _)| c.iter().map(|&b| if b { 1 } else { -1 })).collect();
            let rev_labels: Vec<usize> = labels.iter().rev().copied().collect();
            let q_rev = BinaryCode::from_signs(m, cols.len(), &rev_signs).unwrap();
            let rev = train(&q_rev, &rev_labels, 3, 3, seed, CenteringVector::zeros(1), a).unwrap();
            prop_assert_eq!(model, rev);
        }
    }
}
