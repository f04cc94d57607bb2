//! Dendrograms (merge trees), canonical forms, and isometry testing.
//!
//! A finite ultrametric space and a dendrogram are the same object: the
//! distance between two points is the height of their lowest common
//! ancestor. Canonical forms sort children by `(height, leaf count, shape
//! encoding)`, so two spaces are isometric exactly when their canonical
//! shape encodings are equal.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteUltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dendrogram {
    Leaf { leaf: String },
    Node { height: Rational, children: Vec<Dendrogram> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DendrogramError {
    #[error("malformed tree: internal node at height {0} has fewer than two children")]
    TooFewChildren(Rational),
    #[error("malformed tree: internal node height {0} is not positive")]
    NonpositiveHeight(Rational),
    #[error("malformed tree: edge from height {parent} to child height {child} does not decrease")]
    NonDecreasingEdge { parent: Rational, child: Rational },
    #[error("malformed tree: duplicate leaf `{0}`")]
    DuplicateLeaf(String),
}

impl Dendrogram {
    pub fn leaf(label: impl Into<String>) -> Self {
        Dendrogram::Leaf { leaf: label.into() }
    }

    pub fn node(height: Rational, children: Vec<Dendrogram>) -> Self {
        Dendrogram::Node { height, children }
    }

    /// Leaves have height 0.
    pub fn height(&self) -> Rational {
        match self {
            Dendrogram::Leaf { .. } => Rational::ZERO,
            Dendrogram::Node { height, .. } => *height,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Dendrogram::Leaf { .. } => 1,
            Dendrogram::Node { children, .. } => children.iter().map(Dendrogram::leaf_count).sum(),
        }
    }

    /// Leaf labels in depth-first order.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Dendrogram::Leaf { leaf } => out.push(leaf),
            Dendrogram::Node { children, .. } => {
                children.iter().for_each(|c| c.collect_leaves(out));
            }
        }
    }

    /// Label-free encoding of the tree shape: `*` for a leaf and
    /// `(h:c1,c2,...)` for a node, with children in their current order.
    ///
    /// On canonical trees this is an isometry invariant.
    pub fn shape_encoding(&self) -> String {
        let mut s = String::new();
        self.write_shape(&mut s);
        s
    }

    fn write_shape(&self, out: &mut String) {
        match self {
            Dendrogram::Leaf { .. } => out.push('*'),
            Dendrogram::Node { height, children } => {
                out.push('(');
                out.push_str(&height.to_string());
                out.push(':');
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write_shape(out);
                }
                out.push(')');
            }
        }
    }

    /// Recursively sorts children by `(height, leaf count, shape encoding)`.
    /// Identical subtrees are ordered by their smallest leaf label so the
    /// output is deterministic.
    pub fn canonicalize(self) -> Dendrogram {
        self.canonical_with_key().0
    }

    fn canonical_with_key(self) -> (Dendrogram, CanonKey) {
        match self {
            Dendrogram::Leaf { leaf } => {
                let key = CanonKey {
                    height: Rational::ZERO,
                    count: 1,
                    shape: "*".to_string(),
                    min_label: leaf.clone(),
                };
                (Dendrogram::Leaf { leaf }, key)
            }
            Dendrogram::Node { height, children } => {
                let mut keyed: Vec<_> =
                    children.into_iter().map(Dendrogram::canonical_with_key).collect();
                keyed.sort_by(|a, b| a.1.cmp(&b.1));
                let count = keyed.iter().map(|(_, k)| k.count).sum();
                let min_label = keyed.iter().map(|(_, k)| &k.min_label).min().cloned();
                let shape = format!(
                    "({height}:{})",
                    keyed.iter().map(|(_, k)| k.shape.as_str()).collect::<Vec<_>>().join(",")
                );
                let children = keyed.into_iter().map(|(c, _)| c).collect();
                let key = CanonKey { height, count, shape, min_label: min_label.unwrap_or_default() };
                (Dendrogram::Node { height, children }, key)
            }
        }
    }

    fn check(&self, seen: &mut HashSet<String>) -> Result<(), DendrogramError> {
        match self {
            Dendrogram::Leaf { leaf } => {
                if !seen.insert(leaf.clone()) {
                    return Err(DendrogramError::DuplicateLeaf(leaf.clone()));
                }
            }
            Dendrogram::Node { height, children } => {
                if !height.is_positive() {
                    return Err(DendrogramError::NonpositiveHeight(*height));
                }
                if children.len() < 2 {
                    return Err(DendrogramError::TooFewChildren(*height));
                }
                for c in children {
                    if c.height() >= *height {
                        return Err(DendrogramError::NonDecreasingEdge {
                            parent: *height,
                            child: c.height(),
                        });
                    }
                    c.check(seen)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
struct CanonKey {
    height: Rational,
    count: usize,
    shape: String,
    min_label: String,
}

impl Ord for CanonKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.height, self.count, &self.shape, &self.min_label).cmp(&(
            other.height,
            other.count,
            &other.shape,
            &other.min_label,
        ))
    }
}

impl PartialOrd for CanonKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The canonical dendrogram whose lowest-common-ancestor heights reproduce
/// the distances of `space`.
pub fn to_dendrogram(space: &FiniteUltrametricSpace) -> Dendrogram {
    let points: Vec<usize> = (0..space.len()).collect();
    build(space, &points).canonicalize()
}

fn build(space: &FiniteUltrametricSpace, points: &[usize]) -> Dendrogram {
    if let [p] = points {
        return Dendrogram::leaf(space.label(*p));
    }
    let height = points
        .iter()
        .flat_map(|&i| points.iter().map(move |&j| (i, j)))
        .map(|(i, j)| space.dist(i, j))
        .max()
        .unwrap_or(Rational::ZERO);
    // Open balls of radius `height` partition the points.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &p in points {
        match classes.iter_mut().find(|c| space.dist(c[0], p) < height) {
            Some(c) => c.push(p),
            None => classes.push(vec![p]),
        }
    }
    let children = classes.iter().map(|c| build(space, c)).collect();
    Dendrogram::node(height, children)
}

/// The space of lowest-common-ancestor heights, with points in depth-first
/// leaf order.
pub fn from_dendrogram(tree: &Dendrogram) -> Result<FiniteUltrametricSpace, DendrogramError> {
    tree.check(&mut HashSet::new())?;
    let labels: Vec<String> = tree.leaves().into_iter().map(String::from).collect();
    let n = labels.len();
    let mut dist = vec![Rational::ZERO; n * n];
    fill(tree, 0, &mut dist, n);
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

/// Writes LCA heights for the leaves of `tree`, which occupy positions
/// `offset..offset + leaf_count`. Returns the leaf count.
fn fill(tree: &Dendrogram, offset: usize, dist: &mut [Rational], n: usize) -> usize {
    match tree {
        Dendrogram::Leaf { .. } => 1,
        Dendrogram::Node { height, children } => {
            let mut spans = Vec::with_capacity(children.len());
            let mut at = offset;
            for c in children {
                let k = fill(c, at, dist, n);
                spans.push(at..at + k);
                at += k;
            }
            for (a, sa) in spans.iter().enumerate() {
                for sb in &spans[a + 1..] {
                    for i in sa.clone() {
                        for j in sb.clone() {
                            dist[i * n + j] = *height;
                            dist[j * n + i] = *height;
                        }
                    }
                }
            }
            at - offset
        }
    }
}

/// A distance-preserving bijection `X -> Y` when one exists: entry `i` is
/// the index in `Y` of the image of point `i` of `X`.
pub fn isometry(x: &FiniteUltrametricSpace, y: &FiniteUltrametricSpace) -> Option<Vec<usize>> {
    if x.len() != y.len() {
        return None;
    }
    let tx = to_dendrogram(x);
    let ty = to_dendrogram(y);
    if tx.shape_encoding() != ty.shape_encoding() {
        return None;
    }
    // Equal canonical shapes list matching subtrees in the same order, so
    // depth-first leaf positions correspond.
    let map = tx
        .leaves()
        .iter()
        .zip(ty.leaves())
        .map(|(lx, ly)| (x.index_of(lx), y.index_of(ly)))
        .collect::<Vec<_>>();
    let mut out = vec![0; x.len()];
    for (i, j) in map {
        out[i?] = j?;
    }
    Some(out)
}

pub fn isometric(x: &FiniteUltrametricSpace, y: &FiniteUltrametricSpace) -> bool {
    x.len() == y.len() && to_dendrogram(x).shape_encoding() == to_dendrogram(y).shape_encoding()
}
