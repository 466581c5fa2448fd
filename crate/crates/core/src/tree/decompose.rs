use super::heavy_path::PrelimDir;
use super::{
    binarize, partition_components, split_in_two, vec_bytes, AncestorPaths, Direction, LevelAncestorIndex, RootedTree,
    TreePieces, NONE,
};
use crate::hierarchy::lambda;
use crate::semigroup::Monoid;

/// Trees at or below this size get complete ancestor-pair tables.
const BASE_LEN: usize = 4;

/// Product for every (proper ancestor, descendant) pair.
#[derive(Clone, Debug)]
pub(crate) struct PairTable<E> {
    depth: Vec<usize>,
    offsets: Vec<usize>,
    /// `entries[offsets[v] + d]` = product between `v`'s ancestor at depth `d` and `v`.
    entries: Vec<E>,
}

impl<E: Clone> PairTable<E> {
    pub fn build<S: Monoid<Elem = E>>(tree: &RootedTree<E>, sg: &S, dir: Direction) -> Self {
        let n = tree.len();
        let mut offsets = Vec::with_capacity(n);
        let mut entries = Vec::new();
        let mut column = Vec::new();
        for v in 0..n {
            offsets.push(entries.len());
            column.clear();
            let mut acc = tree.value(v).clone();
            let mut x = v;
            while let Some(p) = tree.parent(x) {
                acc = match dir {
                    Direction::Down => sg.combine(tree.value(p), &acc),
                    Direction::Up => sg.combine(&acc, tree.value(p)),
                };
                column.push(acc.clone());
                x = p;
            }
            entries.extend(column.drain(..).rev());
        }
        let depth = (0..n).map(|v| tree.depth(v)).collect();
        PairTable { depth, offsets, entries }
    }
}

impl<E: Clone> AncestorPaths<E> for PairTable<E> {
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>) {
        out.push(&self.entries[self.offsets[desc] + self.depth[anc]]);
    }

    fn stored(&self) -> usize {
        self.entries.len()
    }

    fn overhead_bytes(&self) -> usize {
        vec_bytes(&self.depth) + vec_bytes(&self.offsets)
    }

    fn budget(&self) -> usize {
        1
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum PartitionRule {
    /// Two components, neither above `ceil(2n/3)`.
    Halve,
    /// Components of at most `max(lambda(k, |B|), 2)` vertices.
    Lambda(u32),
    Target(usize),
}

/// One level of the separator decomposition.
///
/// The tree is binarized (original ids are kept) and cut into components. Each
/// component `C` stores the product from its root to every vertex, and every boundary
/// vertex `x` (one with a child outside `C`) stores the product from each of its
/// ancestors in `C`, itself included. Components form the tree `B̄`; component `C` with
/// parent `D` carries the product from the root of `D` down to the parent of `C`'s root.
/// Queries inside one component go to `inner`; queries across components take
///
/// * the boundary product from `u` to the exit vertex `x` of `u`'s component,
/// * the `B̄` product from the grandchild component to `v`'s component (skipped when
///   `v`'s component is the child),
/// * the root-to-`v` product of `v`'s component.
#[derive(Clone, Debug)]
pub(crate) struct SplitCore<E, I> {
    dir: Direction,
    comp: Vec<usize>,
    local: Vec<usize>,
    cdepth: Vec<usize>,
    parent: Vec<usize>,
    comp_root: Vec<usize>,
    /// Product between the root of `v`'s component and `v`.
    from_root: Vec<E>,
    slot: Vec<usize>,
    boundary: Vec<E>,
    bar_values: Vec<E>,
    bar_depth: Vec<usize>,
    bar_la: LevelAncestorIndex,
    stage4: Option<Box<PathNode<E>>>,
    inner: Vec<I>,
    binarized_len: usize,
}

impl<E: Clone, I: AncestorPaths<E>> SplitCore<E, I> {
    pub fn build<S: Monoid<Elem = E>>(
        tree: &RootedTree<E>,
        sg: &S,
        dir: Direction,
        rule: PartitionRule,
        stage4_k: Option<usize>,
        mut make_inner: impl FnMut(&RootedTree<E>) -> I,
    ) -> Self {
        let b = binarize(tree, sg).tree;
        let m = b.len();
        let part = match rule {
            PartitionRule::Halve => split_in_two(&b),
            PartitionRule::Lambda(k) => {
                let t = (lambda(k, m as u64).expect("m >= 1") as usize).max(2);
                partition_components(&b, t).expect("target >= 2")
            }
            PartitionRule::Target(t) => partition_components(&b, t).expect("target >= 1"),
        };
        let comps = part.len();
        let comp: Vec<usize> = (0..m).map(|v| part.component_of(v)).collect();
        let comp_root: Vec<usize> = (0..comps).map(|c| part.root(c)).collect();
        let parent = b.parent_raw().to_vec();

        let mut local = vec![0; m];
        for c in 0..comps {
            for (i, &v) in part.members(c).iter().enumerate() {
                local[v] = i;
            }
        }

        // Root-to-vertex products, in breadth-first order so parents come first.
        let mut cdepth = vec![0; m];
        let mut from_root_opt: Vec<Option<E>> = vec![None; m];
        for &v in b.bfs_order() {
            let p = parent[v];
            from_root_opt[v] = Some(if p == NONE || comp[p] != comp[v] {
                b.value(v).clone()
            } else {
                cdepth[v] = cdepth[p] + 1;
                let above = from_root_opt[p].as_ref().expect("parent visited first");
                match dir {
                    Direction::Down => sg.combine(above, b.value(v)),
                    Direction::Up => sg.combine(b.value(v), above),
                }
            });
        }
        let from_root: Vec<E> = from_root_opt.into_iter().map(|e| e.expect("all visited")).collect();

        // Ancestor-to-boundary products.
        let mut slot = vec![NONE; m];
        let mut boundary = Vec::new();
        let mut column = Vec::new();
        for v in 0..m {
            if !b.children(v).iter().any(|&c| comp[c] != comp[v]) {
                continue;
            }
            slot[v] = boundary.len();
            column.clear();
            let mut acc = b.value(v).clone();
            column.push(acc.clone());
            let mut y = v;
            while cdepth[y] > 0 {
                y = parent[y];
                acc = match dir {
                    Direction::Down => sg.combine(b.value(y), &acc),
                    Direction::Up => sg.combine(&acc, b.value(y)),
                };
                column.push(acc.clone());
            }
            boundary.extend(column.drain(..).rev());
        }
        assert!(boundary.len() <= 2 * m, "boundary products {} exceed 2|B| = {}", boundary.len(), 2 * m);

        // The component tree.
        let mut bar_parents = Vec::with_capacity(comps);
        let mut bar_values = Vec::with_capacity(comps);
        for (c, &r) in comp_root.iter().enumerate() {
            if c == 0 {
                bar_parents.push(None);
                bar_values.push(sg.unit());
            } else {
                let x = parent[r];
                bar_parents.push(Some(comp[x]));
                bar_values.push(boundary[slot[x]].clone());
            }
        }
        let bar = RootedTree::from_parents(&bar_parents, bar_values.clone()).expect("components form a tree");
        let bar_depth = (0..comps).map(|c| bar.depth(c)).collect();
        let bar_la = LevelAncestorIndex::build(&bar);
        let stage4 = stage4_k.filter(|_| comps > 2).map(|k| Box::new(PathNode::build(&bar, sg, k, dir)));

        let mut inner = Vec::with_capacity(comps);
        for c in 0..comps {
            let members = part.members(c);
            let parents: Vec<Option<usize>> =
                members.iter().enumerate().map(|(i, &v)| (i > 0).then(|| local[parent[v]])).collect();
            let values = members.iter().map(|&v| b.value(v).clone()).collect();
            let ctree = RootedTree::from_parents(&parents, values).expect("components are connected");
            inner.push(make_inner(&ctree));
        }

        SplitCore {
            dir,
            comp,
            local,
            cdepth,
            parent,
            comp_root,
            from_root,
            slot,
            boundary,
            bar_values,
            bar_depth,
            bar_la,
            stage4,
            inner,
            binarized_len: m,
        }
    }

    pub fn components(&self) -> usize {
        self.comp_root.len()
    }

    pub fn binarized_len(&self) -> usize {
        self.binarized_len
    }

    pub fn boundary_pairs(&self) -> usize {
        self.boundary.len()
    }

    pub fn stage4(&self) -> Option<&PathNode<E>> {
        self.stage4.as_deref()
    }
}

impl<E: Clone, I: AncestorPaths<E>> AncestorPaths<E> for SplitCore<E, I> {
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>) {
        let (cu, cv) = (self.comp[anc], self.comp[desc]);
        if cu == cv {
            self.inner[cu].cover(self.local[anc], self.local[desc], out);
            return;
        }
        let du = self.bar_depth[cu];
        let c1 = self.bar_la.ancestor(cv, du + 1);
        let x = self.parent[self.comp_root[c1]];
        let head = &self.boundary[self.slot[x] + self.cdepth[anc]];
        let tail = &self.from_root[desc];
        let (first, last) = match self.dir {
            Direction::Down => (head, tail),
            Direction::Up => (tail, head),
        };
        out.push(first);
        if c1 != cv {
            let c2 = self.bar_la.ancestor(cv, du + 2);
            if c2 == cv {
                out.push(&self.bar_values[cv]);
            } else {
                self.stage4.as_ref().expect("three or more components").cover(c2, cv, out);
            }
        }
        out.push(last);
    }

    fn stored(&self) -> usize {
        self.from_root.len()
            + self.boundary.len()
            + self.bar_values.len()
            + self.stage4.as_ref().map_or(0, |s| s.stored())
            + self.inner.iter().map(AncestorPaths::stored).sum::<usize>()
    }

    fn overhead_bytes(&self) -> usize {
        [&self.comp, &self.local, &self.cdepth, &self.parent, &self.comp_root, &self.slot, &self.bar_depth]
            .into_iter()
            .map(|v| vec_bytes(v))
            .sum::<usize>()
            + self.bar_la.overhead_bytes()
            + self.stage4.as_ref().map_or(0, |s| s.overhead_bytes())
            + self.inner.iter().map(AncestorPaths::overhead_bytes).sum::<usize>()
            + vec_bytes(&self.inner)
    }

    fn budget(&self) -> usize {
        let across = 2 + self.stage4.as_ref().map_or(0, |s| s.budget());
        let within = self.inner.iter().map(AncestorPaths::budget).max().unwrap_or(0);
        across.max(within)
    }
}

/// An ancestor-path index answering in at most `k` pieces.
#[derive(Clone, Debug)]
pub(crate) enum PathNode<E> {
    Table(PairTable<E>),
    Split(Box<SplitCore<E, PathNode<E>>>),
}

impl<E: Clone> PathNode<E> {
    pub fn build<S: Monoid<Elem = E>>(tree: &RootedTree<E>, sg: &S, k: usize, dir: Direction) -> Self {
        if k <= 1 || tree.len() <= BASE_LEN {
            return PathNode::Table(PairTable::build(tree, sg, dir));
        }
        let (rule, stage4) =
            if k == 2 { (PartitionRule::Halve, None) } else { (PartitionRule::Lambda((k - 2) as u32), Some(k - 2)) };
        let core = SplitCore::build(tree, sg, dir, rule, stage4, |c| PathNode::build(c, sg, k, dir));
        PathNode::Split(Box::new(core))
    }

    fn as_dyn(&self) -> &dyn AncestorPaths<E> {
        match self {
            PathNode::Table(t) => t,
            PathNode::Split(s) => s.as_ref(),
        }
    }

    pub fn split(&self) -> Option<&SplitCore<E, PathNode<E>>> {
        match self {
            PathNode::Table(_) => None,
            PathNode::Split(s) => Some(s),
        }
    }
}

impl<E: Clone> AncestorPaths<E> for PathNode<E> {
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>) {
        self.as_dyn().cover(anc, desc, out)
    }

    fn stored(&self) -> usize {
        self.as_dyn().stored()
    }

    fn overhead_bytes(&self) -> usize {
        self.as_dyn().overhead_bytes()
    }

    fn budget(&self) -> usize {
        self.as_dyn().budget()
    }
}

/// Ancestor-path index for the linear-space structure: heavy-path structures inside
/// components of `target` vertices, a `stage4_k`-step index over the component tree.
#[derive(Clone, Debug)]
pub(crate) enum AlphaDir<E> {
    Single(Box<PrelimDir<E>>),
    Split(Box<SplitCore<E, PrelimDir<E>>>),
}

impl<E: Clone> AlphaDir<E> {
    pub fn build<S: Monoid<Elem = E>>(
        tree: &RootedTree<E>,
        sg: &S,
        target: usize,
        stage4_k: usize,
        dir: Direction,
    ) -> Self {
        if tree.len() <= target {
            return AlphaDir::Single(Box::new(PrelimDir::build(tree, sg, dir)));
        }
        let core = SplitCore::build(tree, sg, dir, PartitionRule::Target(target), Some(stage4_k), |c| {
            PrelimDir::build(c, sg, dir)
        });
        AlphaDir::Split(Box::new(core))
    }

    pub fn split(&self) -> Option<&SplitCore<E, PrelimDir<E>>> {
        match self {
            AlphaDir::Single(_) => None,
            AlphaDir::Split(s) => Some(s),
        }
    }

    fn as_dyn(&self) -> &dyn AncestorPaths<E> {
        match self {
            AlphaDir::Single(t) => t.as_ref(),
            AlphaDir::Split(s) => s.as_ref(),
        }
    }
}

impl<E: Clone> AncestorPaths<E> for AlphaDir<E> {
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>) {
        self.as_dyn().cover(anc, desc, out)
    }

    fn stored(&self) -> usize {
        self.as_dyn().stored()
    }

    fn overhead_bytes(&self) -> usize {
        self.as_dyn().overhead_bytes()
    }

    fn budget(&self) -> usize {
        self.as_dyn().budget()
    }
}
