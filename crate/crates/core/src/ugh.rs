//! The Gromov-Hausdorff ultrametric between finite ultrametric spaces.
//!
//! The distance is the smallest `t` at which the closed-ball quotients of
//! both spaces at scale `t` are isometric. Only `0` and distance values of
//! either space can be that `t`, so a scan over the union of the spectra in
//! increasing order finds it. [`certificate`] builds a common ultrametric
//! space realizing the value, and [`ugh_oracle`] recomputes it by
//! exhaustive search over common embeddings for small inputs.

use serde::Serialize;
use thiserror::Error;

use crate::dendrogram::isometry;
use crate::hyperspace::hausdorff_distance;
use crate::quotient::{closed_quotient, QuotientSpace};
use crate::rational::Rational;
use crate::space::{validate_ultrametric, FiniteUltrametricSpace, Spectrum};

/// Largest number of points per side accepted by [`ugh_oracle`].
pub const ORACLE_MAX_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UghError {
    #[error("InstanceTooLarge: the oracle accepts at most {max} points per space, got {x} and {y}")]
    InstanceTooLarge { x: usize, y: usize, max: usize },
    #[error("candidate values must be nonnegative, got {0}")]
    NegativeCandidate(Rational),
    #[error("no common ultrametric embedding uses only the given candidate values")]
    NoEmbedding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UghResult {
    pub value: Rational,
    /// The scale at which the quotients first agree. Equal to `value`.
    pub scale_witness: Rational,
    pub x_quotient: QuotientSpace,
    pub y_quotient: QuotientSpace,
    /// Block `b` of the quotient of `X` maps to block `quotient_isometry[b]`
    /// of the quotient of `Y`.
    pub quotient_isometry: Vec<usize>,
}

/// Exact distance via the quotient scan.
pub fn ugh_distance(x: &FiniteUltrametricSpace, y: &FiniteUltrametricSpace) -> UghResult {
    let candidates = x.spectrum().union(&y.spectrum());
    // Isometric quotients at t force equal spectra above t.
    let floor = spectrum_agreement(x, y);
    for &t in candidates.values().iter().filter(|&&t| t >= floor) {
        let qx = closed_quotient(x, t);
        let qy = closed_quotient(y, t);
        if let Some(phi) = isometry(&qx.quotient, &qy.quotient) {
            return UghResult {
                value: t,
                scale_witness: t,
                x_quotient: qx,
                y_quotient: qy,
                quotient_isometry: phi,
            };
        }
    }
    unreachable!("quotients at the larger diameter are single points")
}

/// Smallest `t` such that both spectra agree strictly above `t`.
pub fn spectrum_agreement(x: &FiniteUltrametricSpace, y: &FiniteUltrametricSpace) -> Rational {
    spectra_agreement(&x.spectrum(), &y.spectrum())
}

pub(crate) fn spectra_agreement(sx: &Spectrum, sy: &Spectrum) -> Rational {
    sx.union(sy)
        .values()
        .iter()
        .copied()
        .filter(|v| sx.contains(v) != sy.contains(v))
        .max()
        .unwrap_or(Rational::ZERO)
}

/// Minimum Hausdorff distance between `X` and `Y` over every ultrametric on
/// `X ⊔ Y` extending both metrics whose cross distances lie in
/// `candidates` (defaults to the union of both spectra).
///
/// A cross distance of zero identifies two points, so the combined matrix is
/// checked as a pseudo-ultrametric. This covers embeddings where the images
/// overlap, and makes isometric inputs come out at zero.
pub fn ugh_oracle(
    x: &FiniteUltrametricSpace,
    y: &FiniteUltrametricSpace,
    candidates: Option<&[Rational]>,
) -> Result<Rational, UghError> {
    if x.len() > ORACLE_MAX_POINTS || y.len() > ORACLE_MAX_POINTS {
        return Err(UghError::InstanceTooLarge { x: x.len(), y: y.len(), max: ORACLE_MAX_POINTS });
    }
    let mut values: Vec<Rational> = match candidates {
        Some(c) => c.to_vec(),
        None => x.spectrum().union(&y.spectrum()).values().to_vec(),
    };
    if let Some(v) = values.iter().find(|v| v.is_negative()) {
        return Err(UghError::NegativeCandidate(*v));
    }
    values.sort();
    values.dedup();

    let mut search = OracleSearch {
        x,
        y,
        values: &values,
        cross: vec![Rational::ZERO; x.len() * y.len()],
        best: None,
    };
    search.assign(0);
    search.best.ok_or(UghError::NoEmbedding)
}

struct OracleSearch<'a> {
    x: &'a FiniteUltrametricSpace,
    y: &'a FiniteUltrametricSpace,
    values: &'a [Rational],
    /// Row-major `|X| x |Y|` cross distances; entries before the cursor are set.
    cross: Vec<Rational>,
    best: Option<Rational>,
}

fn isosceles(a: Rational, b: Rational, c: Rational) -> bool {
    // the two largest sides are equal
    let mut s = [a, b, c];
    s.sort();
    s[1] == s[2]
}

impl OracleSearch<'_> {
    fn c(&self, i: usize, j: usize) -> Rational {
        self.cross[i * self.y.len() + j]
    }

    /// Checks every triangle completed by setting cross entry `(i, j)`.
    fn consistent(&self, i: usize, j: usize) -> bool {
        let d = self.c(i, j);
        // third vertex in X: rows above are complete
        (0..i).all(|k| isosceles(d, self.x.dist(i, k), self.c(k, j)))
            // third vertex in Y: entries to the left in this row are set
            && (0..j).all(|l| isosceles(d, self.y.dist(j, l), self.c(i, l)))
    }

    fn assign(&mut self, cursor: usize) {
        let (nx, ny) = (self.x.len(), self.y.len());
        if cursor == nx * ny {
            let rows = (0..nx).map(|i| (0..ny).map(|j| self.c(i, j)).min().unwrap_or_default());
            let cols = (0..ny).map(|j| (0..nx).map(|i| self.c(i, j)).min().unwrap_or_default());
            let h = rows.chain(cols).max().unwrap_or_default();
            if self.best.is_none_or(|b| h < b) {
                self.best = Some(h);
            }
            return;
        }
        let (i, j) = (cursor / ny, cursor % ny);
        for &v in self.values {
            self.cross[cursor] = v;
            if !self.consistent(i, j) {
                continue;
            }
            // a finished row bounds the Hausdorff distance from below
            if j + 1 == ny {
                let row_min = (0..ny).map(|l| self.c(i, l)).min().unwrap_or_default();
                if self.best.is_some_and(|b| row_min >= b) {
                    continue;
                }
            }
            self.assign(cursor + 1);
        }
    }
}

/// A common ultrametric space with isometric embeddings of both inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub achieved: Rational,
    pub z: FiniteUltrametricSpace,
    /// Index in `z` of each point of `X`.
    pub embed_x: Vec<usize>,
    pub embed_y: Vec<usize>,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Certificate", 4)?;
        st.serialize_field("achieved", &self.achieved)?;
        st.serialize_field("z", &self.z)?;
        st.serialize_field("embed_x", &self.embedding_x_labels())?;
        st.serialize_field("embed_y", &self.embedding_y_labels())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("Z is not an ultrametric space: {0}")]
    NotUltrametric(#[from] crate::space::SpaceError),
    #[error("embedding of {side} has length {len}, expected {expected}")]
    EmbeddingLength { side: char, len: usize, expected: usize },
    #[error("embedding of {side} does not preserve the distance between points {i} and {j}")]
    NotIsometric { side: char, i: usize, j: usize },
    #[error("Hausdorff distance of the images is {actual}, certificate claims {claimed}")]
    WrongAchieved { claimed: Rational, actual: Rational },
}

/// Builds the common space from a scan result.
///
/// At scale zero `Z` is a copy of `X` and `Y` maps onto it through the
/// isometry. Otherwise `Z = X ⊔ Y` where `d(x, y)` is the scale if the
/// quotient isometry sends the block of `x` to the block of `y`, and the
/// quotient distance from the block of `x` to the preimage of the block of
/// `y` otherwise.
pub fn certificate(
    x: &FiniteUltrametricSpace,
    y: &FiniteUltrametricSpace,
    result: &UghResult,
) -> Certificate {
    let t = result.value;
    let phi = &result.quotient_isometry;
    let (nx, ny) = (x.len(), y.len());
    let x_labels = x.labels().to_vec();
    let y_labels = y.labels().to_vec();

    if t.is_zero() {
        // quotients at zero are the spaces themselves
        let mut embed_y = vec![0; ny];
        for (i, &j) in phi.iter().enumerate() {
            embed_y[j] = i;
        }
        return Certificate {
            achieved: t,
            z: x.relabeled(|l| format!("L:{l}")),
            embed_x: (0..nx).collect(),
            embed_y,
            x_labels,
            y_labels,
        };
    }

    let qx = &result.x_quotient;
    let qy = &result.y_quotient;
    let mut inverse = vec![0; phi.len()];
    for (b, &c) in phi.iter().enumerate() {
        inverse[c] = b;
    }
    let n = nx + ny;
    let mut dist = vec![Rational::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = match (i < nx, j < nx) {
                (true, true) => x.dist(i, j),
                (false, false) => y.dist(i - nx, j - nx),
                (true, false) => cross(qx, qy, &inverse, t, i, j - nx),
                (false, true) => cross(qx, qy, &inverse, t, j, i - nx),
            };
            dist[i * n + j] = d;
        }
    }
    let labels = x
        .labels()
        .iter()
        .map(|l| format!("L:{l}"))
        .chain(y.labels().iter().map(|l| format!("R:{l}")))
        .collect();
    Certificate {
        achieved: t,
        z: FiniteUltrametricSpace::from_parts_unchecked(labels, dist),
        embed_x: (0..nx).collect(),
        embed_y: (nx..n).collect(),
        x_labels,
        y_labels,
    }
}

fn cross(qx: &QuotientSpace, qy: &QuotientSpace, inverse: &[usize], t: Rational, i: usize, j: usize) -> Rational {
    let bx = qx.block_of(i);
    let pre = inverse[qy.block_of(j)];
    if bx == pre {
        t
    } else {
        qx.quotient.dist(bx, pre)
    }
}

impl Certificate {
    /// Re-checks the certificate from scratch: `Z` is ultrametric, both
    /// embeddings are distance-preserving, and the Hausdorff distance of the
    /// images equals `achieved`.
    pub fn verify(
        &self,
        x: &FiniteUltrametricSpace,
        y: &FiniteUltrametricSpace,
    ) -> Result<(), CertificateError> {
        let z = validate_ultrametric(self.z.labels().to_vec(), self.z.matrix())?;
        for (side, space, embed) in [('X', x, &self.embed_x), ('Y', y, &self.embed_y)] {
            if embed.len() != space.len() || embed.iter().any(|&e| e >= z.len()) {
                return Err(CertificateError::EmbeddingLength {
                    side,
                    len: embed.len(),
                    expected: space.len(),
                });
            }
            for i in 0..space.len() {
                for j in 0..space.len() {
                    if z.dist(embed[i], embed[j]) != space.dist(i, j) {
                        return Err(CertificateError::NotIsometric { side, i, j });
                    }
                }
            }
        }
        let actual = hausdorff_distance(&z, &self.embed_x, &self.embed_y)
            .expect("embeddings of nonempty spaces are nonempty");
        if actual != self.achieved {
            return Err(CertificateError::WrongAchieved { claimed: self.achieved, actual });
        }
        Ok(())
    }

    /// `(point of X, point of Z)` label pairs.
    pub fn embedding_x_labels(&self) -> Vec<(String, String)> {
        self.x_labels
            .iter()
            .zip(&self.embed_x)
            .map(|(l, &i)| (l.clone(), self.z.label(i).to_string()))
            .collect()
    }

    pub fn embedding_y_labels(&self) -> Vec<(String, String)> {
        self.y_labels
            .iter()
            .zip(&self.embed_y)
            .map(|(l, &i)| (l.clone(), self.z.label(i).to_string()))
            .collect()
    }
}
