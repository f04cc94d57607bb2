//! Gluing ultrametric spaces along a common subspace.
//!
//! For `x1` in `X1` and `x2` in `X2` the glued distance is
//! `min over a in A of max(d1(x1, a), d2(a, x2))`; distances inside each
//! part are kept. The result is again an ultrametric.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteUltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("EmptyCommonPart: the identification is empty")]
    EmptyCommonPart,
    #[error("MetricMismatchOnA: ({}, {}) and ({}, {}) have different distances", .0.0, .0.1, .1.0, .1.1)]
    MetricMismatchOnA((String, String), (String, String)),
    #[error("DuplicateIdentification: `{0}` is identified twice")]
    DuplicateIdentification(String),
    #[error("unknown point `{0}` in identification")]
    UnknownPoint(String),
    #[error("ScaleTooSmall: scale {scale} is below the required minimum {required}")]
    ScaleTooSmall { scale: Rational, required: Rational },
    #[error("scale must be positive, got {0}")]
    NonpositiveScale(Rational),
    #[error("EmptyChain: a chain needs at least one link")]
    EmptyChain,
    #[error("link {index}: {source}")]
    Link {
        index: usize,
        #[source]
        source: Box<GlueError>,
    },
}

/// Two spaces and the pairs of points to identify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueSpec {
    pub x1: FiniteUltrametricSpace,
    pub x2: FiniteUltrametricSpace,
    pub identify: Vec<(String, String)>,
}

impl GlueSpec {
    /// Identification as index pairs, after checking injectivity and that
    /// both metrics agree on the common part.
    pub fn resolve(&self) -> Result<Vec<(usize, usize)>, GlueError> {
        resolve_pairs(&self.x1, &self.x2, &self.identify, |i| i)
    }
}

fn resolve_pairs(
    left: &FiniteUltrametricSpace,
    right: &FiniteUltrametricSpace,
    identify: &[(String, String)],
    // maps left indices into the space whose distances must agree
    embed_left: impl Fn(usize) -> usize,
) -> Result<Vec<(usize, usize)>, GlueError> {
    if identify.is_empty() {
        return Err(GlueError::EmptyCommonPart);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(identify.len());
    for (a, b) in identify {
        let i = left.index_of(a).ok_or_else(|| GlueError::UnknownPoint(a.clone()))?;
        let j = right.index_of(b).ok_or_else(|| GlueError::UnknownPoint(b.clone()))?;
        if pairs.iter().any(|&(pi, _)| pi == i) {
            return Err(GlueError::DuplicateIdentification(a.clone()));
        }
        if pairs.iter().any(|&(_, pj)| pj == j) {
            return Err(GlueError::DuplicateIdentification(b.clone()));
        }
        pairs.push((i, j));
    }
    for (n, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[n + 1..] {
            if left.dist(i, k) != right.dist(j, l) {
                let name = |p: usize, q: usize| (left.label(p).to_string(), right.label(q).to_string());
                return Err(GlueError::MetricMismatchOnA(name(i, j), name(k, l)));
            }
        }
    }
    Ok(pairs.into_iter().map(|(i, j)| (embed_left(i), j)).collect())
}

/// Distances of the amalgam. Left points keep their indices; right point `j`
/// lands at `map[j]`.
struct Amalgam {
    map: Vec<usize>,
    dist: Vec<Rational>,
    size: usize,
}

fn amalgamate(
    left: &FiniteUltrametricSpace,
    right: &FiniteUltrametricSpace,
    pairs: &[(usize, usize)],
) -> Amalgam {
    let n1 = left.len();
    let mut map = vec![usize::MAX; right.len()];
    for &(i, j) in pairs {
        map[j] = i;
    }
    let mut next = n1;
    for m in map.iter_mut().filter(|m| **m == usize::MAX) {
        *m = next;
        next += 1;
    }
    let size = next;
    let mut dist = vec![Rational::ZERO; size * size];
    let mut set = |i: usize, j: usize, d: Rational| {
        dist[i * size + j] = d;
        dist[j * size + i] = d;
    };
    for i in 0..n1 {
        for k in i + 1..n1 {
            set(i, k, left.dist(i, k));
        }
    }
    for j in 0..right.len() {
        for l in j + 1..right.len() {
            set(map[j], map[l], right.dist(j, l));
        }
    }
    let fresh: Vec<usize> = (0..right.len()).filter(|&j| map[j] >= n1).collect();
    for x in 0..n1 {
        for &y in &fresh {
            let d = pairs
                .iter()
                .map(|&(a1, a2)| left.dist(x, a1).max(right.dist(a2, y)))
                .min()
                .expect("nonempty common part");
            set(x, map[y], d);
        }
    }
    Amalgam { map, dist, size }
}

/// Glues `x2` onto `x1` along the identification. Points of `x1` are
/// labeled `L:<label>`; the remaining points of `x2` follow as
/// `R:<label>`. Identified pairs keep the left label.
pub fn glue(spec: &GlueSpec) -> Result<FiniteUltrametricSpace, GlueError> {
    let pairs = spec.resolve()?;
    let am = amalgamate(&spec.x1, &spec.x2, &pairs);
    let mut labels: Vec<String> = spec.x1.labels().iter().map(|l| format!("L:{l}")).collect();
    labels.resize(am.size, String::new());
    for (j, &m) in am.map.iter().enumerate() {
        if m >= spec.x1.len() {
            labels[m] = format!("R:{}", spec.x2.label(j));
        }
    }
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, am.dist))
}

/// `X ⊔ Y` with every cross distance equal to `scale`, labeled `L:`/`R:`.
pub fn disjoint_amalgam(
    x: &FiniteUltrametricSpace,
    y: &FiniteUltrametricSpace,
    scale: Rational,
) -> Result<FiniteUltrametricSpace, GlueError> {
    if !scale.is_positive() {
        return Err(GlueError::NonpositiveScale(scale));
    }
    let required = x.diameter().max(y.diameter());
    if scale < required {
        return Err(GlueError::ScaleTooSmall { scale, required });
    }
    let (n1, n) = (x.len(), x.len() + y.len());
    let mut dist = vec![scale; n * n];
    for i in 0..n {
        for j in 0..n {
            match (i < n1, j < n1) {
                (true, true) => dist[i * n + j] = x.dist(i, j),
                (false, false) => dist[i * n + j] = y.dist(i - n1, j - n1),
                _ => {}
            }
        }
    }
    let labels = x
        .labels()
        .iter()
        .map(|l| format!("L:{l}"))
        .chain(y.labels().iter().map(|l| format!("R:{l}")))
        .collect();
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

/// One step of a chain: the next space, and pairs `(label in the previous
/// space of the chain, label in this space)` to identify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub space: FiniteUltrametricSpace,
    pub identify: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGlue {
    /// Points are labeled `<k>:<label>`, where `k` is the position in the
    /// chain of the space that introduced the point.
    pub space: FiniteUltrametricSpace,
    /// `embeddings[k][i]` is the index in `space` of point `i` of space `k`.
    pub embeddings: Vec<Vec<usize>>,
}

/// Left fold of [`glue`]: each link is glued onto everything accumulated so
/// far, along points it shares with the previous space.
pub fn chain_glue(
    first: &FiniteUltrametricSpace,
    links: &[ChainLink],
) -> Result<ChainGlue, GlueError> {
    if links.is_empty() {
        return Err(GlueError::EmptyChain);
    }
    let mut acc = first.relabeled(|l| format!("0:{l}"));
    let mut embeddings = vec![(0..first.len()).collect::<Vec<_>>()];
    let mut previous = first;
    for (index, link) in links.iter().enumerate() {
        let wrap = |source| GlueError::Link { index, source: Box::new(source) };
        let embed = embeddings.last().expect("nonempty").clone();
        let pairs = resolve_pairs(previous, &link.space, &link.identify, |i| embed[i]).map_err(wrap)?;
        let am = amalgamate(&acc, &link.space, &pairs);
        let mut labels = acc.labels().to_vec();
        labels.resize(am.size, String::new());
        for (j, &m) in am.map.iter().enumerate() {
            if m >= acc.len() {
                labels[m] = format!("{}:{}", index + 1, link.space.label(j));
            }
        }
        acc = FiniteUltrametricSpace::from_parts_unchecked(labels, am.dist);
        embeddings.push(am.map);
        previous = &link.space;
    }
    Ok(ChainGlue { space: acc, embeddings })
}
