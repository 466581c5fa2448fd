use super::{vec_bytes, AncestorPaths, Direction, RootedTree, TreePieces, NONE};
use crate::hierarchy::ceil_log2;
use crate::linear::{Pieces, SimpleTreeCore, SubRange};
use crate::semigroup::Semigroup;

/// Heavy-path decomposition: the edge from `u` to its child `c` is heavy when
/// `2 size(c) >= size(u)`, the first such child winning ties.
#[derive(Clone, Debug)]
pub struct HeavyPathIndex {
    size: Vec<usize>,
    heavy: Vec<usize>,
    path: Vec<usize>,
    head: Vec<usize>,
    pos: Vec<usize>,
    /// Vertices path by path, each path from its head down.
    order: Vec<usize>,
    path_start: Vec<usize>,
}

pub fn heavy_path_decompose<E>(tree: &RootedTree<E>) -> HeavyPathIndex {
    let n = tree.len();
    let mut size = vec![1usize; n];
    for &v in tree.bfs_order().iter().rev() {
        if let Some(p) = tree.parent(v) {
            size[p] += size[v];
        }
    }
    let heavy: Vec<usize> =
        (0..n).map(|v| tree.children(v).iter().copied().find(|&c| 2 * size[c] >= size[v]).unwrap_or(NONE)).collect();
    let mut path = vec![NONE; n];
    let mut head = vec![NONE; n];
    let mut pos = vec![0; n];
    let mut order = Vec::with_capacity(n);
    let mut path_start = Vec::new();
    for &v in tree.bfs_order() {
        if tree.parent(v).is_some_and(|p| heavy[p] == v) {
            continue;
        }
        let id = path_start.len();
        path_start.push(order.len());
        let mut x = v;
        let mut i = 0;
        while x != NONE {
            path[x] = id;
            head[x] = v;
            pos[x] = i;
            order.push(x);
            i += 1;
            x = heavy[x];
        }
    }
    HeavyPathIndex { size, heavy, path, head, pos, order, path_start }
}

impl HeavyPathIndex {
    pub fn size(&self, v: usize) -> usize {
        self.size[v]
    }

    pub fn heavy_child(&self, v: usize) -> Option<usize> {
        (self.heavy[v] != NONE).then_some(self.heavy[v])
    }

    pub fn head(&self, v: usize) -> usize {
        self.head[v]
    }

    pub fn path_id(&self, v: usize) -> usize {
        self.path[v]
    }

    /// Distance from the head of `v`'s path.
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn path_count(&self) -> usize {
        self.path_start.len()
    }

    /// Vertices of path `p` from its head down.
    pub fn path_vertices(&self, p: usize) -> &[usize] {
        let end = self.path_start.get(p + 1).copied().unwrap_or(self.order.len());
        &self.order[self.path_start[p]..end]
    }

    fn overhead_bytes(&self) -> usize {
        [&self.size, &self.heavy, &self.path, &self.head, &self.pos, &self.order, &self.path_start]
            .into_iter()
            .map(|v| vec_bytes(v))
            .sum()
    }
}

/// The `O(log n)`-step directional structure: one balanced tree per heavy path plus the
/// product from every vertex to the head of its path.
#[derive(Clone, Debug)]
pub(crate) struct PrelimDir<E> {
    dir: Direction,
    n: usize,
    parent: Vec<usize>,
    hp: HeavyPathIndex,
    /// Values path by path, each in the direction's order.
    seq: Vec<E>,
    trees: Vec<SimpleTreeCore<E>>,
    /// Product between the head of `v`'s path and `v`.
    to_head: Vec<E>,
}

impl<E: Clone> PrelimDir<E> {
    pub fn build<S: Semigroup<Elem = E>>(tree: &RootedTree<E>, sg: &S, dir: Direction) -> Self {
        let n = tree.len();
        let hp = heavy_path_decompose(tree);
        let mut seq = Vec::with_capacity(n);
        let mut trees = Vec::with_capacity(hp.path_count());
        let mut to_head: Vec<Option<E>> = vec![None; n];
        for p in 0..hp.path_count() {
            let verts = hp.path_vertices(p);
            let mut acc = tree.value(verts[0]).clone();
            to_head[verts[0]] = Some(acc.clone());
            for &x in &verts[1..] {
                acc = match dir {
                    Direction::Down => sg.combine(&acc, tree.value(x)),
                    Direction::Up => sg.combine(tree.value(x), &acc),
                };
                to_head[x] = Some(acc.clone());
            }
            let start = seq.len();
            seq.extend(verts.iter().map(|&x| tree.value(x).clone()));
            if dir == Direction::Up {
                seq[start..].reverse();
            }
            trees.push(SimpleTreeCore::build(sg, &seq[start..]));
        }
        let to_head = to_head.into_iter().map(|e| e.expect("every vertex lies on a path")).collect();
        PrelimDir { dir, n, parent: tree.parent_raw().to_vec(), hp, seq, trees, to_head }
    }

    /// Pushes the piece(s) for the stretch of one heavy path between `top` and `bottom`.
    fn segment<'a>(&'a self, top: usize, bottom: usize, out: &mut TreePieces<'a, E>) {
        if top == self.hp.head[top] {
            out.push(&self.to_head[bottom]);
            return;
        }
        let p = self.hp.path[top];
        let start = self.hp.path_start[p];
        let len = self.hp.path_vertices(p).len();
        let base = &self.seq[start..start + len];
        let (lo, hi) = match self.dir {
            Direction::Down => (self.hp.pos[top], self.hp.pos[bottom]),
            Direction::Up => (len - 1 - self.hp.pos[bottom], len - 1 - self.hp.pos[top]),
        };
        let mut pieces = Pieces::new();
        self.trees[p].cover(base, 0, lo, hi, &mut pieces);
        out.extend(pieces.iter().map(|pc| pc.elem));
    }

    pub fn index(&self) -> &HeavyPathIndex {
        &self.hp
    }
}

impl<E: Clone> AncestorPaths<E> for PrelimDir<E> {
    fn cover<'a>(&'a self, anc: usize, desc: usize, out: &mut TreePieces<'a, E>) {
        let target = self.hp.path[anc];
        let mut x = desc;
        match self.dir {
            Direction::Down => {
                let mut heads: TreePieces<'a, E> = TreePieces::new();
                while self.hp.path[x] != target {
                    heads.push(&self.to_head[x]);
                    x = self.parent[self.hp.head[x]];
                }
                self.segment(anc, x, out);
                out.extend(heads.into_iter().rev());
            }
            Direction::Up => {
                while self.hp.path[x] != target {
                    out.push(&self.to_head[x]);
                    x = self.parent[self.hp.head[x]];
                }
                self.segment(anc, x, out);
            }
        }
    }

    fn stored(&self) -> usize {
        self.seq.len() + self.trees.iter().map(SubRange::stored).sum::<usize>() + self.to_head.len()
    }

    fn overhead_bytes(&self) -> usize {
        self.hp.overhead_bytes() + vec_bytes(&self.parent) + vec_bytes(&self.trees)
    }

    /// Light edges crossed plus one balanced-tree query.
    fn budget(&self) -> usize {
        (3 * ceil_log2(self.n)).max(1)
    }
}
