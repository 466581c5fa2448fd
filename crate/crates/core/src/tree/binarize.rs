use super::RootedTree;
use crate::semigroup::Monoid;

/// A tree of outdegree at most 2 whose vertical paths multiply to the same products as
/// the original's.
///
/// A vertex `v` with children `w_1, ..., w_d` (`d > 2`) keeps its value and gets a single
/// child `v_1`, the head of a chain `v_1, ..., v_{d-1}`; `v_i` has children `w_i, v_{i+1}`
/// and `v_{d-1}` has `w_{d-1}, w_d`. Chain links carry the unit. Original vertices keep
/// their ids; the added ones are numbered from `n` on.
#[derive(Clone, Debug)]
pub struct BinarizedTree<E> {
    pub tree: RootedTree<E>,
    original: usize,
}

impl<E> BinarizedTree<E> {
    pub fn original_len(&self) -> usize {
        self.original
    }

    pub fn is_synthetic(&self, v: usize) -> bool {
        v >= self.original
    }
}

pub fn binarize<S: Monoid>(tree: &RootedTree<S::Elem>, sg: &S) -> BinarizedTree<S::Elem> {
    let n = tree.len();
    let extra: usize = (0..n).map(|v| tree.children(v).len()).filter(|&d| d > 2).map(|d| d - 1).sum();
    let mut parents = tree.parents();
    parents.reserve(extra);
    let mut values = tree.values().to_vec();
    values.reserve(extra);
    for v in 0..n {
        let kids = tree.children(v);
        let d = kids.len();
        if d <= 2 {
            continue;
        }
        let mut link = parents.len();
        parents.push(Some(v));
        values.push(sg.unit());
        for (i, &w) in kids.iter().enumerate() {
            parents[w] = Some(link);
            if i < d - 2 {
                let next = parents.len();
                parents.push(Some(link));
                values.push(sg.unit());
                link = next;
            }
        }
    }
    let tree = RootedTree::from_parents(&parents, values).expect("binarization preserves tree shape");
    BinarizedTree { tree, original: n }
}
