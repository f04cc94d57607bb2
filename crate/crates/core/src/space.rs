//! Finite ultrametric spaces, their validation and spectra.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

/// Reasons a labeled matrix fails to be a finite ultrametric space.
///
/// Axiom violations carry the labels of the witnessing points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("distance matrix has {rows} rows but there are {labels} labels")]
    RowCount { labels: usize, rows: usize },
    #[error("row {row} of the distance matrix has {len} entries, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("NegativeDistance({0}, {1})")]
    NegativeDistance(String, String),
    #[error("NonzeroDiagonal({0})")]
    NonzeroDiagonal(String),
    #[error("NonSymmetric({0}, {1})")]
    NonSymmetric(String, String),
    #[error("ZeroOffDiagonal({0}, {1})")]
    ZeroOffDiagonal(String, String),
    /// `d(i, j) > max(d(i, k), d(k, j))`.
    #[error("TriangleViolation({0}, {1}, {2})")]
    TriangleViolation(String, String, String),
}

/// A finite set of labeled points with an exact ultrametric.
///
/// Instances can only be built through validation, so every value of this
/// type satisfies the ultrametric axioms.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteUltrametricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
}

/// Checks every ultrametric axiom and returns the first violation found.
///
/// Checks run in the order: shape, labels, diagonal, sign, symmetry, zero
/// off-diagonal entries, strong triangle inequality.
pub fn validate_ultrametric(
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
) -> Result<FiniteUltrametricSpace, SpaceError> {
    let n = labels.len();
    check_shape(&labels, &matrix)?;
    for i in 0..n {
        if !matrix[i][i].is_zero() {
            return Err(SpaceError::NonzeroDiagonal(labels[i].clone()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if matrix[i][j].is_negative() {
                return Err(SpaceError::NegativeDistance(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(SpaceError::NonSymmetric(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j].is_zero() {
                return Err(SpaceError::ZeroOffDiagonal(labels[i].clone(), labels[j].clone()));
            }
        }
    }
    if let Some((i, j, k)) = triangle_violation(n, |a, b| matrix[a][b]) {
        return Err(SpaceError::TriangleViolation(
            labels[i].clone(),
            labels[j].clone(),
            labels[k].clone(),
        ));
    }
    Ok(FiniteUltrametricSpace { labels, dist: matrix.into_iter().flatten().collect() })
}

fn check_shape(labels: &[String], matrix: &[Vec<Rational>]) -> Result<(), SpaceError> {
    let n = labels.len();
    if n == 0 {
        return Err(SpaceError::Empty);
    }
    if matrix.len() != n {
        return Err(SpaceError::RowCount { labels: n, rows: matrix.len() });
    }
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(SpaceError::RowLength { row, len: r.len(), expected: n });
    }
    let mut seen = HashMap::with_capacity(n);
    for l in labels {
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(SpaceError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// First triple `(i, j, k)` of distinct indices, `i < j`, with
/// `d(i, j) > max(d(i, k), d(k, j))`.
pub(crate) fn triangle_violation(
    n: usize,
    d: impl Fn(usize, usize) -> Rational,
) -> Option<(usize, usize, usize)> {
    for i in 0..n {
        for j in i + 1..n {
            let dij = d(i, j);
            for k in 0..n {
                if k != i && k != j && dij > d(i, k).max(d(k, j)) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Collapses points at distance zero into their first occurrence.
///
/// Preprocessing for dirty input: the merged matrix still has to pass
/// [`validate_ultrametric`].
pub fn merge_duplicates(
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
) -> (Vec<String>, Vec<Vec<Rational>>) {
    let n = labels.len().min(matrix.len());
    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let dup = keep.iter().any(|&k| {
            matrix[i].get(k).is_some_and(|d| d.is_zero())
                && matrix[k].get(i).is_some_and(|d| d.is_zero())
        });
        if !dup {
            keep.push(i);
        }
    }
    let new_labels = keep.iter().map(|&i| labels[i].clone()).collect();
    let new_matrix = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| matrix[i].get(j).copied().unwrap_or_default()).collect())
        .collect();
    (new_labels, new_matrix)
}

impl FiniteUltrametricSpace {
    /// Builds a space without checking the axioms. The caller guarantees them.
    pub(crate) fn from_parts_unchecked(labels: Vec<String>, dist: Vec<Rational>) -> Self {
        debug_assert_eq!(dist.len(), labels.len() * labels.len());
        FiniteUltrametricSpace { labels, dist }
    }

    pub fn single_point(label: impl Into<String>) -> Self {
        FiniteUltrametricSpace { labels: vec![label.into()], dist: vec![Rational::ZERO] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false for a validated space; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> Rational {
        self.dist[i * self.labels.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.labels.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> Rational {
        self.dist.iter().copied().max().unwrap_or(Rational::ZERO)
    }

    /// Smallest nonzero distance, `None` for a one-point space.
    pub fn min_positive_distance(&self) -> Option<Rational> {
        self.dist.iter().copied().filter(|d| d.is_positive()).min()
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_values(self.dist.iter().copied())
    }

    /// Same points and distances with each label rewritten by `f`.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Self {
        FiniteUltrametricSpace {
            labels: self.labels.iter().map(|l| f(l)).collect(),
            dist: self.dist.clone(),
        }
    }

    /// Reorders points so that new position `p` holds old point `order[p]`.
    ///
    /// Panics unless `order` is a permutation of `0..len`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        let mut seen = vec![false; self.len()];
        for &i in order {
            assert!(!std::mem::replace(&mut seen[i], true), "not a permutation");
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = order.iter().flat_map(|&i| order.iter().map(move |&j| (i, j)));
        let dist = dist.map(|(i, j)| self.dist(i, j)).collect();
        FiniteUltrametricSpace { labels, dist }
    }
}

impl fmt::Debug for FiniteUltrametricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteUltrametricSpace")
            .field("labels", &self.labels)
            .field("dist", &self.matrix())
            .finish()
    }
}

/// The sorted set of distinct distance values of a space. Always starts with 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum(Vec<Rational>);

impl Spectrum {
    pub(crate) fn from_values(values: impl IntoIterator<Item = Rational>) -> Self {
        let mut v: Vec<Rational> = values.into_iter().chain([Rational::ZERO]).collect();
        v.sort();
        v.dedup();
        Spectrum(v)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.0.binary_search(value).is_ok()
    }

    /// Values strictly greater than `t`.
    pub fn above(&self, t: Rational) -> &[Rational] {
        let start = self.0.partition_point(|v| *v <= t);
        &self.0[start..]
    }

    /// Sorted union of both value sets.
    pub fn union(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_values(self.0.iter().chain(other.0.iter()).copied())
    }
}

/// Free-function form of [`FiniteUltrametricSpace::spectrum`].
pub fn spectrum(space: &FiniteUltrametricSpace) -> Spectrum {
    space.spectrum()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    pub(crate) fn space(labels: &[&str], rows: &[&[&str]]) -> FiniteUltrametricSpace {
        let labels = labels.iter().map(|s| s.to_string()).collect();
        let m = rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect();
        validate_ultrametric(labels, m).unwrap()
    }

    pub(crate) fn isosceles() -> FiniteUltrametricSpace {
        space(&["a", "b", "c"], &[&["0", "1", "2"], &["1", "0", "2"], &["2", "2", "0"]])
    }

    fn raw(labels: &[&str], rows: &[&[&str]]) -> Result<FiniteUltrametricSpace, SpaceError> {
        let labels = labels.iter().map(|s| s.to_string()).collect();
        let m = rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect();
        validate_ultrametric(labels, m)
    }

    #[test]
    fn accepts_isosceles_triple() {
        let x = isosceles();
        assert_eq!(x.len(), 3);
        assert_eq!(x.dist(0, 2), q("2"));
        assert_eq!(x.diameter(), q("2"));
    }

    #[test]
    fn reports_triangle_violation_with_witness() {
        let err = raw(&["a", "b", "c"], &[&["0", "1", "3"], &["1", "0", "2"], &["3", "2", "0"]])
            .unwrap_err();
        assert_eq!(err, SpaceError::TriangleViolation("a".into(), "c".into(), "b".into()));
    }

    #[test]
    fn single_point_is_valid() {
        let x = raw(&["a"], &[&["0"]]).unwrap();
        assert_eq!(x.spectrum().values(), &[Rational::ZERO]);
        assert_eq!(x.min_positive_distance(), None);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(raw(&[], &[]).unwrap_err(), SpaceError::Empty);
        assert_eq!(
            raw(&["a", "b"], &[&["0", "1"], &["2", "0"]]).unwrap_err(),
            SpaceError::NonSymmetric("a".into(), "b".into())
        );
        assert_eq!(
            raw(&["a", "b"], &[&["1", "1"], &["1", "0"]]).unwrap_err(),
            SpaceError::NonzeroDiagonal("a".into())
        );
        assert_eq!(
            raw(&["a", "b"], &[&["0", "0"], &["0", "0"]]).unwrap_err(),
            SpaceError::ZeroOffDiagonal("a".into(), "b".into())
        );
        assert_eq!(
            raw(&["a", "b"], &[&["0", "-1"], &["-1", "0"]]).unwrap_err(),
            SpaceError::NegativeDistance("a".into(), "b".into())
        );
        assert_eq!(
            raw(&["a", "a"], &[&["0", "1"], &["1", "0"]]).unwrap_err(),
            SpaceError::DuplicateLabel("a".into())
        );
        assert!(matches!(raw(&["a", "b"], &[&["0", "1"]]), Err(SpaceError::RowCount { .. })));
        assert!(matches!(
            raw(&["a", "b"], &[&["0", "1"], &["1"]]),
            Err(SpaceError::RowLength { row: 1, .. })
        ));
    }

    #[test]
    fn spectra() {
        assert_eq!(space(&["a", "b"], &[&["0", "3/4"], &["3/4", "0"]]).spectrum().values(), &[
            q("0"),
            q("3/4")
        ]);
        let s = isosceles().spectrum();
        assert_eq!(s.values(), &[q("0"), q("1"), q("2")]);
        assert_eq!(s.above(q("1")), &[q("2")]);
        assert_eq!(s.above(q("1/2")), &[q("1"), q("2")]);
        assert!(s.contains(&q("1")));
    }

    #[test]
    fn merge_duplicates_collapses_zero_rows() {
        let labels = vec!["a".to_string(), "a2".to_string(), "b".to_string()];
        let m = vec![
            vec![q("0"), q("0"), q("1")],
            vec![q("0"), q("0"), q("1")],
            vec![q("1"), q("1"), q("0")],
        ];
        let (l, m) = merge_duplicates(labels, m);
        let x = validate_ultrametric(l, m).unwrap();
        assert_eq!(x.labels(), &["a", "b"]);
    }

    #[test]
    fn permuted_preserves_distances() {
        let x = isosceles();
        let y = x.permuted(&[2, 0, 1]);
        assert_eq!(y.labels(), &["c", "a", "b"]);
        assert_eq!(y.dist(1, 2), q("1"));
        assert_eq!(y.dist(0, 1), q("2"));
    }
}
