//! Closed-ball quotients.

use crate::rational::Rational;
use crate::space::FiniteUltrametricSpace;

/// The partition of a space into closed balls of radius `scale`, and the
/// induced space on those balls.
///
/// "Within distance `scale`" is an equivalence relation in an ultrametric
/// space, and the distance between two balls does not depend on the chosen
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpace {
    pub source: FiniteUltrametricSpace,
    pub scale: Rational,
    /// Blocks ordered by their smallest member; members in increasing order.
    pub blocks: Vec<Vec<usize>>,
    /// Points are the blocks, each labeled by its first member.
    pub quotient: FiniteUltrametricSpace,
    block_of: Vec<usize>,
}

impl QuotientSpace {
    /// Index of the block that contains `point`.
    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }
}

pub fn closed_quotient(space: &FiniteUltrametricSpace, scale: Rational) -> QuotientSpace {
    let n = space.len();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0; n];
    for p in 0..n {
        match blocks.iter().position(|b| space.dist(b[0], p) <= scale) {
            Some(b) => {
                blocks[b].push(p);
                block_of[p] = b;
            }
            None => {
                block_of[p] = blocks.len();
                blocks.push(vec![p]);
            }
        }
    }
    let labels = blocks.iter().map(|b| space.label(b[0]).to_string()).collect();
    let dist = blocks
        .iter()
        .flat_map(|a| blocks.iter().map(move |b| space.dist(a[0], b[0])))
        .collect();
    QuotientSpace {
        source: space.clone(),
        scale,
        blocks,
        quotient: FiniteUltrametricSpace::from_parts_unchecked(labels, dist),
        block_of,
    }
}
