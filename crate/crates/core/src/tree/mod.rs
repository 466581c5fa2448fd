//! Path products on rooted trees.
//!
//! A general query `(u, v)` is split at `l = lca(u, v)` into an upward product
//! `u -> l` and a downward product `w -> v`, where `w` is the child of `l` on the way to
//! `v`. Each structure therefore keeps two direction-specific indexes answering
//! ancestor/descendant queries only: one producing products in root-to-leaf order, one
//! in leaf-to-root order. Non-commutative semigroups need both.
//!
//! Vertex ids are 0-based.

mod binarize;
mod decompose;
pub mod gen;
mod heavy_path;
mod lca;
mod level_ancestor;
mod partition;
mod structures;

use std::collections::VecDeque;

use smallvec::SmallVec;

pub use binarize::{binarize, BinarizedTree};
pub use heavy_path::{heavy_path_decompose, HeavyPathIndex};
pub use lca::LcaIndex;
pub use level_ancestor::LevelAncestorIndex;
pub use partition::{partition_components, split_in_two, ComponentPartition};
pub use structures::{PathStructure, TreeKStep, TreeLinearAlpha, TreePreliminary};

use crate::semigroup::Semigroup;
use crate::Error;

pub(crate) const NONE: usize = usize::MAX;

pub(crate) type TreePieces<'a, E> = SmallVec<[&'a E; 16]>;

/// Order in which a vertical path is multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Ancestor first.
    Down,
    /// Descendant first.
    Up,
}

/// A rooted tree with one element per vertex.
///
/// Children are kept in increasing id order.
#[derive(Clone, Debug)]
pub struct RootedTree<E> {
    root: usize,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    bfs: Vec<usize>,
    values: Vec<E>,
}

impl<E> RootedTree<E> {
    /// Builds a tree from one parent entry per vertex (`None` for the root).
    pub fn from_parents(parents: &[Option<usize>], values: Vec<E>) -> Result<Self, Error> {
        let n = parents.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        if values.len() != n {
            return Err(Error::InvalidTree(format!("{} parents but {} values", n, values.len())));
        }
        let mut root = NONE;
        let mut parent = vec![NONE; n];
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None if root == NONE => root = v,
                None => return Err(Error::InvalidTree(format!("two roots: {root} and {v}"))),
                Some(p) if p >= n => return Err(Error::InvalidTree(format!("parent {p} of vertex {v} out of range"))),
                Some(p) if p == v => return Err(Error::InvalidTree(format!("vertex {v} is its own parent"))),
                Some(p) => {
                    parent[v] = p;
                    children[p].push(v);
                }
            }
        }
        if root == NONE {
            return Err(Error::InvalidTree("no root".into()));
        }
        let mut depth = vec![0; n];
        let mut bfs = Vec::with_capacity(n);
        bfs.push(root);
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                bfs.push(c);
            }
        }
        if bfs.len() != n {
            return Err(Error::InvalidTree("parent links contain a cycle".into()));
        }
        Ok(RootedTree { root, parent, children, depth, bfs, values })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p)
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn value(&self, v: usize) -> &E {
        &self.values[v]
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        (0..self.len()).map(|v| self.parent(v)).collect()
    }

    pub fn max_outdegree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn parent_raw(&self) -> &[usize] {
        &self.parent
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), Error> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    /// Whether `a` is an ancestor of `b` (or equal), by walking up from `b`.
    pub fn is_ancestor_naive(&self, a: usize, b: usize) -> bool {
        let mut x = b;
        while self.depth[x] > self.depth[a] {
            x = self.parent[x];
        }
        x == a
    }

    /// Vertices on the path from `u` to `v`, both included, by walking parent links.
    pub fn path_vertices(&self, u: usize, v: usize) -> Result<Vec<usize>, Error> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let (mut a, mut b) = (u, v);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[a] > self.depth[b] {
            left.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            right.push(b);
            b = self.parent[b];
        }
        while a != b {
            left.push(a);
            right.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        Ok(left)
    }
}

/// Brute-force product of the values on the path from `u` to `v`, in that order.
pub fn brute_path_fold<S: Semigroup>(tree: &RootedTree<S::Elem>, sg: &S, u: usize, v: usize) -> Result<S::Elem, Error> {
    let path = tree.path_vertices(u, v)?;
    let mut acc = tree.value(path[0]).clone();
    for &x in &path[1..] {
        acc = sg.combine(&acc, tree.value(x));
    }
    Ok(acc)
}

/// Products of the paths from `u` to every vertex, by one traversal outward from `u`.
pub fn path_folds_from<S: Semigroup>(tree: &RootedTree<S::Elem>, sg: &S, u: usize) -> Result<Vec<S::Elem>, Error> {
    tree.check_vertex(u)?;
    let mut fold: Vec<Option<S::Elem>> = vec![None; tree.len()];
    fold[u] = Some(tree.value(u).clone());
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        let up = tree.parent(x).into_iter();
        for y in up.chain(tree.children(x).iter().copied()) {
            if fold[y].is_none() {
                let acc = fold[x].as_ref().expect("visited");
                fold[y] = Some(sg.combine(acc, tree.value(y)));
                stack.push(y);
            }
        }
    }
    Ok(fold.into_iter().map(|f| f.expect("trees are connected")).collect())
}

/// The `u`-to-`v` vertex sequence found by breadth-first search over the undirected tree.
pub fn bfs_path<E>(tree: &RootedTree<E>, u: usize, v: usize) -> Result<Vec<usize>, Error> {
    tree.check_vertex(u)?;
    tree.check_vertex(v)?;
    let n = tree.len();
    let mut prev = vec![NONE; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        let up = tree.parent(x).into_iter();
        for y in up.chain(tree.children(x).iter().copied()) {
            if !seen[y] {
                seen[y] = true;
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![v];
    let mut x = v;
    while x != u {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    Ok(path)
}

/// A direction-specific index answering `(ancestor, proper descendant)` queries.
pub(crate) trait AncestorPaths<E> {
    /// Pushes the pieces of the product between `anc` and `desc` in the index's
    /// direction. `anc` must be a proper ancestor of `desc`.
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>);

    fn stored(&self) -> usize;

    fn overhead_bytes(&self) -> usize;

    /// Largest number of pieces [`AncestorPaths::cover`] may push.
    fn budget(&self) -> usize;
}

pub(crate) fn vec_bytes<T>(v: &[T]) -> usize {
    std::mem::size_of_val(v)
}
