//! Generators for the standard families of finite ultrametric spaces,
//! value-set membership, random spaces, and single-linkage ingestion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::amalgam::GlueSpec;
use crate::dendrogram::{from_dendrogram, Dendrogram};
use crate::hyperspace::restrict;
use crate::rational::Rational;
use crate::space::FiniteUltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("NonpositiveDistance: {0} is not positive")]
    NonpositiveDistance(Rational),
    #[error("ScaleNotBelowMinDistance: {scale} is not below the minimum distance {min}")]
    ScaleNotBelowMinDistance { scale: Rational, min: Rational },
    #[error("BasePointMissing: `{0}` is not a point of the space")]
    BasePointMissing(String),
    #[error("the crowd family starts at n = 1")]
    EmptyFamily,
    #[error("generated label `{0}` collides with an existing point")]
    LabelCollision(String),
    #[error("depth {0} is too large for exact powers of two")]
    DepthTooLarge(u32),
    #[error("a space needs at least one point")]
    EmptySpace,
    #[error("ConstraintTooSmall: the value set needs a positive value")]
    ConstraintTooSmall,
    #[error("invalid value set: {0}")]
    InvalidConstraint(String),
    #[error("NotAMetric: {0}")]
    NotAMetric(String),
}

/// A finite set `K` of allowed distance values. Contains 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumConstraint(Vec<Rational>);

impl SpectrumConstraint {
    /// Sorts and deduplicates. Fails on negative values or when 0 is missing.
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Result<Self, GalleryError> {
        let mut v: Vec<Rational> = values.into_iter().collect();
        v.sort();
        v.dedup();
        if let Some(neg) = v.iter().find(|x| x.is_negative()) {
            return Err(GalleryError::InvalidConstraint(format!("negative value {neg}")));
        }
        if v.first() != Some(&Rational::ZERO) {
            return Err(GalleryError::InvalidConstraint("0 must be allowed".into()));
        }
        Ok(SpectrumConstraint(v))
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn positive(&self) -> &[Rational] {
        &self.0[1..]
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.0.binary_search(v).is_ok()
    }
}

/// `X_c`: points `p`, `q` at distance `c`.
pub fn two_point_space(c: Rational) -> Result<FiniteUltrametricSpace, GalleryError> {
    if !c.is_positive() {
        return Err(GalleryError::NonpositiveDistance(c));
    }
    let labels = vec!["p".to_string(), "q".to_string()];
    let dist = vec![Rational::ZERO, c, c, Rational::ZERO];
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

/// `Y_n`: `Y` plus `n` fresh points `#1..#n` forming a cluster of
/// diameter `c` around `base`.
///
/// Fresh points are at distance `c` from each other and at
/// `max(d(y, base), c)` from each `y` in `Y`. Taking the maximum with `c`
/// keeps the base point at positive distance from the cluster.
pub fn crowd_family(
    y: &FiniteUltrametricSpace,
    base: &str,
    c: Rational,
    n: usize,
) -> Result<FiniteUltrametricSpace, GalleryError> {
    if n == 0 {
        return Err(GalleryError::EmptyFamily);
    }
    if !c.is_positive() {
        return Err(GalleryError::NonpositiveDistance(c));
    }
    let b = y.index_of(base).ok_or_else(|| GalleryError::BasePointMissing(base.into()))?;
    if let Some(min) = y.min_positive_distance().filter(|m| c >= *m) {
        return Err(GalleryError::ScaleNotBelowMinDistance { scale: c, min });
    }
    let fresh: Vec<String> = (1..=n).map(|i| format!("#{i}")).collect();
    if let Some(f) = fresh.iter().find(|f| y.index_of(f).is_some()) {
        return Err(GalleryError::LabelCollision(f.clone()));
    }
    let m = y.len();
    let total = m + n;
    let mut dist = vec![Rational::ZERO; total * total];
    for i in 0..total {
        for j in 0..total {
            dist[i * total + j] = match (i < m, j < m) {
                (true, true) => y.dist(i, j),
                (true, false) => y.dist(i, b).max(c),
                (false, true) => y.dist(j, b).max(c),
                (false, false) if i == j => Rational::ZERO,
                (false, false) => c,
            };
        }
    }
    let labels = y.labels().iter().cloned().chain(fresh).collect();
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

/// Points `1, 1/2, ..., 2^-depth` with `d(x, y) = max(x, y)`.
pub fn cauchy_sequence(depth: u32) -> Result<FiniteUltrametricSpace, GalleryError> {
    if depth > 120 {
        return Err(GalleryError::DepthTooLarge(depth));
    }
    let points: Vec<Rational> = (0..=depth).map(Rational::pow2_neg).collect();
    let n = points.len();
    let dist = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| if i == j { Rational::ZERO } else { points[i].max(points[j]) })
        .collect();
    let labels = points.iter().map(Rational::to_string).collect();
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

/// A pair of points whose distance is outside the allowed set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UkViolation {
    pub a: String,
    pub b: String,
    pub value: Rational,
}

/// First pair (in row-major order) whose distance is not in `k`.
pub fn uk_violation(space: &FiniteUltrametricSpace, k: &SpectrumConstraint) -> Option<UkViolation> {
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            let value = space.dist(i, j);
            if !k.contains(&value) {
                return Some(UkViolation {
                    a: space.label(i).to_string(),
                    b: space.label(j).to_string(),
                    value,
                });
            }
        }
    }
    None
}

/// Whether every distance value of `space` lies in `k`.
pub fn in_uk(space: &FiniteUltrametricSpace, k: &SpectrumConstraint) -> bool {
    uk_violation(space, k).is_none()
}

/// A seeded random space on points `x0..x{n-1}` with values in `k`.
///
/// Draws a random dendrogram whose heights come from the positive values of
/// `k` and strictly decrease along every edge, so every draw is valid.
pub fn random_space(
    n: usize,
    k: &SpectrumConstraint,
    seed: u64,
) -> Result<FiniteUltrametricSpace, GalleryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_space_with(n, k, &mut rng)
}

fn random_space_with(
    n: usize,
    k: &SpectrumConstraint,
    rng: &mut impl Rng,
) -> Result<FiniteUltrametricSpace, GalleryError> {
    if n == 0 {
        return Err(GalleryError::EmptySpace);
    }
    if k.positive().is_empty() {
        return Err(GalleryError::ConstraintTooSmall);
    }
    let mut labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    labels.shuffle(rng);
    let tree = random_tree(rng, &labels, k.positive());
    let space = from_dendrogram(&tree).expect("generated trees are well formed");
    let order: Vec<usize> =
        (0..n).map(|i| space.index_of(&format!("x{i}")).expect("all labels present")).collect();
    Ok(space.permuted(&order))
}

fn random_tree(rng: &mut impl Rng, leaves: &[String], heights: &[Rational]) -> Dendrogram {
    if let [leaf] = leaves {
        return Dendrogram::leaf(leaf.clone());
    }
    let h = rng.gen_range(0..heights.len());
    if h == 0 {
        let children = leaves.iter().map(|l| Dendrogram::leaf(l.clone())).collect();
        return Dendrogram::node(heights[0], children);
    }
    // split the (already shuffled) leaves into k contiguous nonempty groups
    let n = leaves.len();
    // binary splits most of the time, so shapes are not mostly flat
    let k = if rng.gen_bool(0.6) { 2 } else { rng.gen_range(2..=n) };
    let mut cuts: Vec<usize> = rand::seq::index::sample(rng, n - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    let mut children = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts.into_iter().chain([n]) {
        children.push(random_tree(rng, &leaves[start..end], &heights[..h]));
        start = end;
    }
    Dendrogram::node(heights[h], children)
}

/// A seeded random valid [`GlueSpec`]: both spaces have at most
/// `max_points` points and values in `k`, and share a nonempty common part.
///
/// `X1` is a random space; `X2` starts from a random subspace of `X1` and
/// grows by random one-point extensions, then its points are shuffled.
pub fn random_glue_spec(
    max_points: usize,
    k: &SpectrumConstraint,
    seed: u64,
) -> Result<GlueSpec, GalleryError> {
    if max_points == 0 {
        return Err(GalleryError::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = rng.gen_range(1..=max_points);
    let x1 = random_space_with(n1, k, &mut rng)?;
    let m = rng.gen_range(1..=n1);
    let common: Vec<usize> = rand::seq::index::sample(&mut rng, n1, m).into_vec();
    let n2 = rng.gen_range(m..=max_points);

    let base = restrict(&x1, &common).expect("nonempty subset");
    let mut labels: Vec<String> = (0..m).map(|i| format!("y{i}")).collect();
    let mut dist: Vec<Vec<Rational>> = base.matrix();
    for p in m..n2 {
        // every one-point extension of an ultrametric has this form, with q
        // a nearest point and h its distance
        let q = rng.gen_range(0..p);
        let h = *k.positive().choose(&mut rng).expect("positive values");
        let row: Vec<Rational> = (0..p).map(|s| if s == q { h } else { h.max(dist[q][s]) }).collect();
        for (s, d) in row.iter().enumerate() {
            dist[s].push(*d);
        }
        dist.push(row.into_iter().chain([Rational::ZERO]).collect());
        labels.push(format!("y{p}"));
    }
    let flat = dist.into_iter().flatten().collect();
    let x2 = FiniteUltrametricSpace::from_parts_unchecked(labels, flat);
    let mut order: Vec<usize> = (0..n2).collect();
    order.shuffle(&mut rng);
    let x2 = x2.permuted(&order);

    let identify = common
        .iter()
        .enumerate()
        .map(|(i, &a)| (x1.label(a).to_string(), format!("y{i}")))
        .collect();
    Ok(GlueSpec { x1, x2, identify })
}

/// The subdominant ultrametric of a metric: the largest ultrametric below
/// it, i.e. the minimum over paths of the largest step.
///
/// Computed with Kruskal's algorithm: when an edge of weight `w` first joins
/// two clusters, every pair across them gets distance `w`.
pub fn single_linkage(
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
) -> Result<FiniteUltrametricSpace, GalleryError> {
    check_metric(&labels, &matrix)?;
    let n = labels.len();
    let mut edges: Vec<(Rational, usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (matrix[i][j], i, j)).collect();
    edges.sort();

    let mut cluster: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut dist = vec![Rational::ZERO; n * n];
    for (w, i, j) in edges {
        let (a, b) = (cluster[i], cluster[j]);
        if a == b {
            continue;
        }
        let (keep, gone) = if members[a].len() >= members[b].len() { (a, b) } else { (b, a) };
        let moved = std::mem::take(&mut members[gone]);
        for &p in &members[keep] {
            for &q in &moved {
                dist[p * n + q] = w;
                dist[q * n + p] = w;
            }
        }
        for &q in &moved {
            cluster[q] = keep;
        }
        members[keep].extend(moved);
    }
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

fn check_metric(labels: &[String], m: &[Vec<Rational>]) -> Result<(), GalleryError> {
    let err = |s: String| Err(GalleryError::NotAMetric(s));
    let n = labels.len();
    if n == 0 {
        return err("no points".into());
    }
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return err(format!("matrix is not {n} x {n}"));
    }
    for i in 0..n {
        if labels[i + 1..].contains(&labels[i]) {
            return err(format!("duplicate label `{}`", labels[i]));
        }
        if !m[i][i].is_zero() {
            return err(format!("nonzero diagonal at `{}`", labels[i]));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if m[i][j] != m[j][i] {
                return err(format!("not symmetric at `{}`, `{}`", labels[i], labels[j]));
            }
            if !m[i][j].is_positive() {
                return err(format!("nonpositive distance between `{}` and `{}`", labels[i], labels[j]));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let Some(via) = m[i][k].checked_add(&m[k][j]) else {
                    return err("distance sum overflows".into());
                };
                if m[i][j] > via {
                    return err(format!(
                        "triangle inequality fails for `{}`, `{}` via `{}`",
                        labels[i], labels[j], labels[k]
                    ));
                }
            }
        }
    }
    Ok(())
}
