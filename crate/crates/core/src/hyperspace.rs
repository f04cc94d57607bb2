//! Hausdorff distance between subsets, epsilon-nets, and subspaces.

use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteUltrametricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperspaceError {
    #[error("EmptySubset")]
    EmptySubset,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("net radius must be positive, got {0}")]
    NonpositiveRadius(Rational),
}

/// Resolves labels to point indices.
pub fn indices_of(
    space: &FiniteUltrametricSpace,
    labels: &[impl AsRef<str>],
) -> Result<Vec<usize>, HyperspaceError> {
    labels
        .iter()
        .map(|l| {
            space.index_of(l.as_ref()).ok_or_else(|| HyperspaceError::UnknownPoint(l.as_ref().into()))
        })
        .collect()
}

fn check_subset(space: &FiniteUltrametricSpace, s: &[usize]) -> Result<(), HyperspaceError> {
    if s.is_empty() {
        return Err(HyperspaceError::EmptySubset);
    }
    match s.iter().find(|&&i| i >= space.len()) {
        Some(&i) => Err(HyperspaceError::IndexOutOfRange(i)),
        None => Ok(()),
    }
}

/// `max(max_a min_b d(a,b), max_b min_a d(a,b))` over closed neighborhoods.
pub fn hausdorff_distance(
    ambient: &FiniteUltrametricSpace,
    a: &[usize],
    b: &[usize],
) -> Result<Rational, HyperspaceError> {
    check_subset(ambient, a)?;
    check_subset(ambient, b)?;
    Ok(directed(ambient, a, b).max(directed(ambient, b, a)))
}

fn directed(ambient: &FiniteUltrametricSpace, from: &[usize], to: &[usize]) -> Rational {
    from.iter()
        .map(|&p| to.iter().map(|&q| ambient.dist(p, q)).min().unwrap_or(Rational::ZERO))
        .max()
        .unwrap_or(Rational::ZERO)
}

/// Greedy net: scans points in order and keeps a point unless an already
/// kept point lies within `eps`. The result covers the space at radius
/// `eps` and is `eps`-separated.
pub fn epsilon_net(
    space: &FiniteUltrametricSpace,
    eps: Rational,
) -> Result<Vec<usize>, HyperspaceError> {
    if !eps.is_positive() {
        return Err(HyperspaceError::NonpositiveRadius(eps));
    }
    let mut net: Vec<usize> = Vec::new();
    for p in 0..space.len() {
        if net.iter().all(|&k| space.dist(k, p) > eps) {
            net.push(p);
        }
    }
    Ok(net)
}

/// The induced subspace on `subset`, in the given order.
pub fn restrict(
    space: &FiniteUltrametricSpace,
    subset: &[usize],
) -> Result<FiniteUltrametricSpace, HyperspaceError> {
    check_subset(space, subset)?;
    let mut seen = vec![false; space.len()];
    let subset: Vec<usize> = subset.iter().copied().filter(|&i| !std::mem::replace(&mut seen[i], true)).collect();
    let labels = subset.iter().map(|&i| space.label(i).to_string()).collect();
    let dist = subset.iter().flat_map(|&i| subset.iter().map(move |&j| space.dist(i, j))).collect();
    Ok(FiniteUltrametricSpace::from_parts_unchecked(labels, dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::isometric;
    use crate::gallery::{random_space, SpectrumConstraint};
    use crate::space::tests::{isosceles, q, space};
    use proptest::prelude::*;

    #[test]
    fn hausdorff_examples() {
        let x = isosceles();
        assert_eq!(hausdorff_distance(&x, &[0, 2], &[0, 2]).unwrap(), Rational::ZERO);
        let pair = space(&["a", "b"], &[&["0", "1"], &["1", "0"]]);
        assert_eq!(hausdorff_distance(&pair, &[0], &[1]).unwrap(), q("1"));
        assert_eq!(hausdorff_distance(&x, &[0, 2], &[1]).unwrap(), q("2"));
        assert_eq!(hausdorff_distance(&x, &[], &[1]), Err(HyperspaceError::EmptySubset));
        assert_eq!(hausdorff_distance(&x, &[0], &[7]), Err(HyperspaceError::IndexOutOfRange(7)));
    }

    /// The infimum form: smallest candidate radius at which each set lies in
    /// the closed neighborhood of the other.
    fn hausdorff_by_radius(x: &FiniteUltrametricSpace, a: &[usize], b: &[usize]) -> Rational {
        let within = |s: &[usize], t: &[usize], r: Rational| {
            s.iter().all(|&p| t.iter().any(|&q| x.dist(p, q) <= r))
        };
        *x.spectrum()
            .values()
            .iter()
            .find(|&&r| within(a, b, r) && within(b, a, r))
            .unwrap()
    }

    #[test]
    fn isosceles_by_radius_enumeration() {
        assert_eq!(hausdorff_by_radius(&isosceles(), &[0, 2], &[1]), q("2"));
    }

    #[test]
    fn nets() {
        let x = isosceles();
        assert_eq!(epsilon_net(&x, q("2")).unwrap(), vec![0]);
        assert_eq!(epsilon_net(&x, q("5")).unwrap(), vec![0]);
        assert_eq!(epsilon_net(&x, q("1/2")).unwrap(), vec![0, 1, 2]);
        assert_eq!(epsilon_net(&x, q("1")).unwrap(), vec![0, 2]);
        assert!(epsilon_net(&x, q("0")).is_err());
    }

    #[test]
    fn restrictions() {
        let x = isosceles();
        assert!(isometric(&restrict(&x, &[0, 1, 2]).unwrap(), &x));
        assert_eq!(restrict(&x, &[1]).unwrap().len(), 1);
        let ac = restrict(&x, &[0, 2]).unwrap();
        assert_eq!(ac.labels(), &["a", "c"]);
        assert_eq!(ac.dist(0, 1), q("2"));
        assert_eq!(restrict(&x, &[]), Err(HyperspaceError::EmptySubset));
        assert_eq!(indices_of(&x, &["c", "a"]).unwrap(), vec![2, 0]);
        assert_eq!(indices_of(&x, &["z"]), Err(HyperspaceError::UnknownPoint("z".into())));
    }

    fn k() -> SpectrumConstraint {
        SpectrumConstraint::new(["0", "1/8", "1/4", "1/2", "3/4", "1"].iter().map(|s| q(s)))
            .unwrap()
    }

    fn subset(n: usize, mask: u32) -> Vec<usize> {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if s.is_empty() { vec![(mask as usize) % n] } else { s }
    }

    proptest! {
        #[test]
        fn hausdorff_is_ultrametric(n in 1usize..9, seed in any::<u64>(), ma: u32, mb: u32, mc: u32) {
            let x = random_space(n, &k(), seed).unwrap();
            let (a, b, c) = (subset(n, ma), subset(n, mb), subset(n, mc));
            let ab = hausdorff_distance(&x, &a, &b).unwrap();
            let bc = hausdorff_distance(&x, &b, &c).unwrap();
            let ac = hausdorff_distance(&x, &a, &c).unwrap();
            prop_assert!(ac <= ab.max(bc));
            prop_assert_eq!(ab, hausdorff_by_radius(&x, &a, &b));
            prop_assert_eq!(ab.is_zero(), {
                let mut a = a.clone(); let mut b = b.clone();
                a.sort(); b.sort(); a == b
            });
        }

        #[test]
        fn nets_cover_and_separate(n in 1usize..9, seed in any::<u64>(), ei in 1usize..6) {
            let x = random_space(n, &k(), seed).unwrap();
            let eps = k().values()[ei];
            let net = epsilon_net(&x, eps).unwrap();
            for p in 0..n {
                prop_assert!(net.iter().any(|&m| x.dist(p, m) <= eps));
            }
            for (i, &a) in net.iter().enumerate() {
                for &b in &net[i + 1..] {
                    prop_assert!(x.dist(a, b) > eps);
                }
            }
            let all: Vec<usize> = (0..n).collect();
            prop_assert!(hausdorff_distance(&x, &all, &net).unwrap() <= eps);
        }
    }
}
