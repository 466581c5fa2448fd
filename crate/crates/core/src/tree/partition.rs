use super::{RootedTree, NONE};
use crate::Error;

/// Connected components left after removing a set of edges from a rooted tree.
///
/// Components are numbered in breadth-first order of their roots, so component 0 holds
/// the tree's root and a parent component always has a smaller id than its children.
#[derive(Clone, Debug)]
pub struct ComponentPartition {
    comp: Vec<usize>,
    roots: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl ComponentPartition {
    /// Components from a per-vertex flag marking the edge to the parent as removed.
    fn from_cuts<E>(tree: &RootedTree<E>, cut: &[bool]) -> Self {
        let mut comp = vec![NONE; tree.len()];
        let mut roots = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for &v in tree.bfs_order() {
            let c = match tree.parent(v) {
                Some(p) if !cut[v] => comp[p],
                _ => {
                    roots.push(v);
                    members.push(Vec::new());
                    roots.len() - 1
                }
            };
            comp[v] = c;
            members[c].push(v);
        }
        ComponentPartition { comp, roots, members }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.comp[v]
    }

    pub fn root(&self, c: usize) -> usize {
        self.roots[c]
    }

    /// Vertices of component `c` in breadth-first order, its root first.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// Child endpoints of the removed edges.
    pub fn removed_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.roots.iter().skip(1).copied()
    }
}

/// Greedy bottom-up clustering into components of at most `target` vertices.
///
/// Each vertex collects the still-attached parts of its children; while the total
/// exceeds `target` the largest attached child part is cut off. On trees of outdegree
/// at most 2 every cut-off part has at least `ceil(target / 2)` vertices, so there are
/// at most `n / ceil(target / 2) + 1` components.
pub fn partition_components<E>(tree: &RootedTree<E>, target: usize) -> Result<ComponentPartition, Error> {
    if target == 0 {
        return Err(Error::InvalidTargetSize);
    }
    let n = tree.len();
    let mut open = vec![0usize; n];
    let mut cut = vec![false; n];
    let mut kids: Vec<usize> = Vec::new();
    for &v in tree.bfs_order().iter().rev() {
        kids.clear();
        kids.extend_from_slice(tree.children(v));
        kids.sort_by_key(|&c| std::cmp::Reverse(open[c]));
        let mut total = 1 + kids.iter().map(|&c| open[c]).sum::<usize>();
        for &c in &kids {
            if total <= target {
                break;
            }
            cut[c] = true;
            total -= open[c];
        }
        open[v] = total;
    }
    Ok(ComponentPartition::from_cuts(tree, &cut))
}

/// Removes one edge so that both sides hold at most `ceil(2n/3)` vertices (for trees of
/// outdegree at most 2 and `n >= 2`).
pub fn split_in_two<E>(tree: &RootedTree<E>) -> ComponentPartition {
    let n = tree.len();
    let mut size = vec![1usize; n];
    for &v in tree.bfs_order().iter().rev() {
        if let Some(p) = tree.parent(v) {
            size[p] += size[v];
        }
    }
    let mut cut = vec![false; n];
    let mut v = tree.root();
    while let Some(&c) = tree.children(v).iter().max_by_key(|&&c| size[c]) {
        if 3 * size[c] > 2 * n {
            v = c;
        } else {
            cut[c] = true;
            break;
        }
    }
    ComponentPartition::from_cuts(tree, &cut)
}
