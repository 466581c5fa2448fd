//! Random trees for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::RootedTree;
use crate::semigroup::NamedSemigroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeShape {
    Path,
    Star,
    CompleteBinary,
    /// Each vertex attaches to a uniformly random earlier vertex.
    RandomAttachment,
}

impl TreeShape {
    pub const ALL: [TreeShape; 4] = [Self::Path, Self::Star, Self::CompleteBinary, Self::RandomAttachment];

    pub fn name(self) -> &'static str {
        match self {
            Self::Path => "path",
            Self::Star => "star",
            Self::CompleteBinary => "binary",
            Self::RandomAttachment => "random",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Parent links of a tree of the given shape, vertex ids shuffled.
pub fn random_parents<R: Rng>(shape: TreeShape, n: usize, rng: &mut R) -> Vec<Option<usize>> {
    let canonical: Vec<Option<usize>> = (0..n)
        .map(|i| match (i, shape) {
            (0, _) => None,
            (_, TreeShape::Path) => Some(i - 1),
            (_, TreeShape::Star) => Some(0),
            (_, TreeShape::CompleteBinary) => Some((i - 1) / 2),
            (_, TreeShape::RandomAttachment) => Some(rng.gen_range(0..i)),
        })
        .collect();
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut parents = vec![None; n];
    for (i, p) in canonical.into_iter().enumerate() {
        parents[label[i]] = p.map(|p| label[p]);
    }
    parents
}

/// A shuffled tree of the given shape with random vertex values.
pub fn random_tree<S: NamedSemigroup, R: Rng>(shape: TreeShape, n: usize, rng: &mut R, sg: &S) -> RootedTree<S::Elem> {
    let parents = random_parents(shape, n, rng);
    let values = (0..n).map(|_| sg.sample(rng.gen())).collect();
    RootedTree::from_parents(&parents, values).expect("generated parents form a tree")
}
