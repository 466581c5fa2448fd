use super::decompose::{AlphaDir, PathNode};
use super::heavy_path::PrelimDir;
use super::{AncestorPaths, Direction, LcaIndex, LevelAncestorIndex, RootedTree, TreePieces};
use crate::hierarchy::{alpha, ceil_log2};
use crate::semigroup::{assemble, Monoid, QueryAnswer, Semigroup};
use crate::Error;

/// Common interface of the tree structures.
pub trait PathStructure<S: Semigroup> {
    fn tree(&self) -> &RootedTree<S::Elem>;

    fn len(&self) -> usize {
        self.tree().len()
    }

    fn is_empty(&self) -> bool {
        self.tree().is_empty()
    }

    /// Upper bound on `elements_used` when one endpoint is an ancestor of the other.
    fn ancestor_budget(&self) -> usize;

    /// Upper bound on `elements_used` for any query.
    fn step_budget(&self) -> usize {
        2 * self.ancestor_budget()
    }

    /// Semigroup elements retained, including the vertex values.
    fn stored_elements(&self) -> usize;

    /// Bytes of integer routing tables (LCA, level ancestors, partitions).
    fn index_overhead_bytes(&self) -> usize;

    /// Product of the values on the path from `u` to `v`, in that order.
    fn query_path(&self, u: usize, v: usize) -> Result<QueryAnswer<S::Elem>, Error>;
}

/// A tree with both directional indexes and the routing needed to split general
/// queries at the lowest common ancestor.
#[derive(Clone, Debug)]
struct PathIndex<S: Semigroup, D> {
    sg: S,
    tree: RootedTree<S::Elem>,
    lca: LcaIndex,
    la: LevelAncestorIndex,
    down: D,
    up: D,
}

impl<S: Monoid, D: AncestorPaths<S::Elem>> PathIndex<S, D> {
    fn build(sg: S, tree: RootedTree<S::Elem>, make: impl Fn(&RootedTree<S::Elem>, &S, Direction) -> D) -> Self {
        let lca = LcaIndex::build(&tree);
        let la = LevelAncestorIndex::build(&tree);
        let down = make(&tree, &sg, Direction::Down);
        let up = make(&tree, &sg, Direction::Up);
        PathIndex { sg, tree, lca, la, down, up }
    }

    fn query(&self, u: usize, v: usize) -> Result<QueryAnswer<S::Elem>, Error> {
        self.tree.check_vertex(u)?;
        self.tree.check_vertex(v)?;
        if u == v {
            return Ok(QueryAnswer { value: self.tree.value(u).clone(), elements_used: 1 });
        }
        let l = self.lca.lca(u, v);
        let mut out = TreePieces::new();
        if l == u {
            self.down.cover(u, v, &mut out);
        } else if l == v {
            self.up.cover(v, u, &mut out);
        } else {
            self.up.cover(l, u, &mut out);
            let w = self.la.ancestor(v, self.tree.depth(l) + 1);
            if w == v {
                out.push(self.tree.value(v));
            } else {
                self.down.cover(w, v, &mut out);
            }
        }
        Ok(assemble(&self.sg, out.iter().copied()))
    }

    fn directional_budget(&self) -> usize {
        self.down.budget().max(self.up.budget())
    }

    fn stored(&self) -> usize {
        self.tree.len() + self.down.stored() + self.up.stored()
    }

    fn overhead_bytes(&self) -> usize {
        self.lca.overhead_bytes() + self.la.overhead_bytes() + self.down.overhead_bytes() + self.up.overhead_bytes()
    }
}

macro_rules! delegate_path_structure {
    ($ty:ident, $budget:expr) => {
        impl<S: Monoid> PathStructure<S> for $ty<S> {
            fn tree(&self) -> &RootedTree<S::Elem> {
                &self.index.tree
            }

            fn ancestor_budget(&self) -> usize {
                let f: fn(&Self) -> usize = $budget;
                f(self)
            }

            fn stored_elements(&self) -> usize {
                self.index.stored()
            }

            fn index_overhead_bytes(&self) -> usize {
                self.index.overhead_bytes()
            }

            fn query_path(&self, u: usize, v: usize) -> Result<QueryAnswer<S::Elem>, Error> {
                self.index.query(u, v)
            }
        }
    };
}

/// Heavy-path structure: `O(n)` elements, at most `3 ceil(log n)` per ancestor query.
#[derive(Clone, Debug)]
pub struct TreePreliminary<S: Monoid> {
    index: PathIndex<S, PrelimDir<S::Elem>>,
}

impl<S: Monoid> TreePreliminary<S> {
    pub fn build(sg: S, tree: RootedTree<S::Elem>) -> Self {
        TreePreliminary { index: PathIndex::build(sg, tree, |t, sg, dir| PrelimDir::build(t, sg, dir)) }
    }

    pub fn heavy_paths(&self) -> usize {
        self.index.down.index().path_count()
    }
}

delegate_path_structure!(TreePreliminary, |s| s.index.directional_budget());

/// At most `k` elements per ancestor query and `2k` per general query.
#[derive(Clone, Debug)]
pub struct TreeKStep<S: Monoid> {
    k: usize,
    index: PathIndex<S, PathNode<S::Elem>>,
}

impl<S: Monoid> TreeKStep<S> {
    pub fn build(sg: S, tree: RootedTree<S::Elem>, k: usize) -> Result<Self, Error> {
        if k < 2 {
            return Err(Error::UnsupportedStepBudget(k));
        }
        let index = PathIndex::build(sg, tree, |t, sg, dir| PathNode::build(t, sg, k, dir));
        debug_assert!(index.directional_budget() <= k);
        Ok(TreeKStep { k, index })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Components at the top level of the decomposition (1 for small trees).
    pub fn components(&self) -> usize {
        self.index.down.split().map_or(1, |s| s.components())
    }

    /// Vertices after binarization at the top level.
    pub fn binarized_len(&self) -> usize {
        self.index.down.split().map_or(self.len(), |s| s.binarized_len())
    }

    /// Ancestor-to-boundary products computed at the top level, one direction.
    pub fn boundary_pairs(&self) -> usize {
        self.index.down.split().map_or(0, |s| s.boundary_pairs())
    }

    /// Whether the top-level component tree is indexed by complete ancestor-pair tables.
    pub fn component_tree_is_table(&self) -> Option<bool> {
        let stage4 = self.index.down.split()?.stage4()?;
        Some(matches!(stage4, PathNode::Table(_)))
    }
}

delegate_path_structure!(TreeKStep, |s| s.k);

/// `O(n)` stored elements and `O(alpha(n))` elements per query.
///
/// Components of at most `2 alpha(n)^2` binarized vertices each get a heavy-path
/// structure; the component tree gets a `2 alpha(n)`-step structure. Ancestor queries
/// use at most `max(2 alpha + 2, 3 ceil(log(2 alpha^2)))` elements, general queries
/// twice that, which stays within `8 alpha(n)`.
#[derive(Clone, Debug)]
pub struct TreeLinearAlpha<S: Monoid> {
    alpha: usize,
    target: usize,
    index: PathIndex<S, AlphaDir<S::Elem>>,
}

impl<S: Monoid> TreeLinearAlpha<S> {
    pub fn build(sg: S, tree: RootedTree<S::Elem>) -> Self {
        let a = alpha(tree.len() as u64).expect("trees are nonempty") as usize;
        let target = (2 * a * a).max(2);
        let index = PathIndex::build(sg, tree, |t, sg, dir| AlphaDir::build(t, sg, target, 2 * a, dir));
        TreeLinearAlpha { alpha: a, target, index }
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn target_component_size(&self) -> usize {
        self.target
    }

    pub fn component_tree_k(&self) -> usize {
        2 * self.alpha
    }

    pub fn is_degenerate(&self) -> bool {
        self.index.down.split().is_none()
    }

    pub fn components(&self) -> usize {
        self.index.down.split().map_or(1, |s| s.components())
    }
}

delegate_path_structure!(TreeLinearAlpha, |s| {
    let a = s.alpha;
    let formula =
        if s.is_degenerate() { (3 * ceil_log2(s.len())).max(1) } else { (2 * a + 2).max(3 * ceil_log2(s.target)) };
    debug_assert!(s.index.directional_budget() <= formula);
    formula
});
