use super::one_step::Triangle;
use super::two_step::TwoStepCore;
use super::{answer, spans, vec_bytes, Piece, Pieces, RangeStructure, SubRange};
use crate::hierarchy::lambda;
use crate::semigroup::{QueryAnswer, Semigroup};
use crate::Error;

/// Subproblems at or below this length are stored as complete tables.
const BASE_LEN: usize = 4;

/// A range structure answering every query in at most `k` elements.
#[derive(Clone, Debug)]
pub(crate) enum RangeNode<E> {
    Table(Triangle<E>),
    Two(TwoStepCore<E>),
    Blocks(Box<BlockCore<E, RangeNode<E>>>),
}

impl<E: Clone> RangeNode<E> {
    pub fn build<S: Semigroup<Elem = E>>(sg: &S, base: &[E], k: usize) -> Self {
        let n = base.len();
        if k <= 1 || n <= BASE_LEN {
            RangeNode::Table(Triangle::build(sg, base))
        } else if k == 2 {
            RangeNode::Two(TwoStepCore::build(sg, base))
        } else {
            let block_len = (lambda((k - 2) as u32, n as u64).expect("n >= 1") as usize).max(2);
            let core = BlockCore::build(sg, base, block_len, k - 2, |block| RangeNode::build(sg, block, k));
            RangeNode::Blocks(Box::new(core))
        }
    }

    fn as_dyn(&self) -> &dyn SubRange<E> {
        match self {
            RangeNode::Table(t) => t,
            RangeNode::Two(t) => t,
            RangeNode::Blocks(b) => b.as_ref(),
        }
    }
}

impl<E: Clone> SubRange<E> for RangeNode<E> {
    fn cover_proper<'a>(&'a self, base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        self.as_dyn().cover_proper(base, offset, lo, hi, out)
    }

    fn stored(&self) -> usize {
        self.as_dyn().stored()
    }

    fn overhead_bytes(&self) -> usize {
        self.as_dyn().overhead_bytes()
    }
}

/// Blocks of `block_len` (the last one possibly shorter) with per-block prefix and
/// suffix products, a structure over the block totals, and one `I` per block for
/// queries inside a block.
///
/// A query spanning several blocks is `suffix * (block totals) * prefix`; a block
/// boundary on either end folds that block into the totals instead.
#[derive(Clone, Debug)]
pub(crate) struct BlockCore<E, I> {
    n: usize,
    block_len: usize,
    /// `prefix[p]` = product from the start of `p`'s block through `p`.
    prefix: Vec<E>,
    /// `suffix[p]` = product from `p` through the end of `p`'s block.
    suffix: Vec<E>,
    summaries: Vec<E>,
    summary: RangeNode<E>,
    inner: Vec<I>,
}

impl<E: Clone, I: SubRange<E>> BlockCore<E, I> {
    pub fn build<S: Semigroup<Elem = E>>(
        sg: &S,
        base: &[E],
        block_len: usize,
        summary_k: usize,
        mut make_inner: impl FnMut(&[E]) -> I,
    ) -> Self {
        let n = base.len();
        let mut prefix = Vec::with_capacity(n);
        let mut suffix = Vec::with_capacity(n);
        let mut summaries = Vec::with_capacity(n.div_ceil(block_len));
        let mut inner = Vec::with_capacity(n.div_ceil(block_len));
        for block in base.chunks(block_len) {
            let mut acc = block[0].clone();
            prefix.push(acc.clone());
            for v in &block[1..] {
                acc = sg.combine(&acc, v);
                prefix.push(acc.clone());
            }
            summaries.push(acc);

            let start = suffix.len();
            let mut acc = block[block.len() - 1].clone();
            suffix.push(acc.clone());
            for v in block[..block.len() - 1].iter().rev() {
                acc = sg.combine(v, &acc);
                suffix.push(acc.clone());
            }
            suffix[start..].reverse();

            inner.push(make_inner(block));
        }
        let summary = RangeNode::build(sg, &summaries, summary_k);
        BlockCore { n, block_len, prefix, suffix, summaries, summary, inner }
    }

    fn bounds(&self, x: usize) -> (usize, usize) {
        let start = x * self.block_len;
        (start, (start + self.block_len).min(self.n) - 1)
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn summaries(&self) -> &[E] {
        &self.summaries
    }

    pub fn summary(&self) -> &RangeNode<E> {
        &self.summary
    }
}

impl<E: Clone, I: SubRange<E>> SubRange<E> for BlockCore<E, I> {
    fn cover_proper<'a>(&'a self, base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        let bx = lo / self.block_len;
        let by = hi / self.block_len;
        let (xs, xe) = self.bounds(bx);
        if bx == by {
            if lo == xs {
                out.push(Piece { lo: offset + lo, hi: offset + hi, elem: &self.prefix[hi] });
            } else if hi == xe {
                out.push(Piece { lo: offset + lo, hi: offset + hi, elem: &self.suffix[lo] });
            } else {
                self.inner[bx].cover_proper(&base[xs..=xe], offset + xs, lo - xs, hi - xs, out);
            }
            return;
        }

        let first = if lo == xs {
            bx
        } else {
            out.push(Piece { lo: offset + lo, hi: offset + xe, elem: &self.suffix[lo] });
            bx + 1
        };
        let (ys, ye) = self.bounds(by);
        let last = if hi == ye { by } else { by - 1 };
        if first <= last {
            let start = out.len();
            self.summary.cover(&self.summaries, 0, first, last, out);
            for p in &mut out[start..] {
                p.lo = offset + self.bounds(p.lo).0;
                p.hi = offset + self.bounds(p.hi).1;
            }
        }
        if hi != ye {
            out.push(Piece { lo: offset + ys, hi: offset + hi, elem: &self.prefix[hi] });
        }
    }

    fn stored(&self) -> usize {
        self.prefix.len()
            + self.suffix.len()
            + self.summaries.len()
            + self.summary.stored()
            + self.inner.iter().map(SubRange::stored).sum::<usize>()
    }

    fn overhead_bytes(&self) -> usize {
        self.summary.overhead_bytes()
            + self.inner.iter().map(SubRange::overhead_bytes).sum::<usize>()
            + vec_bytes(&self.inner)
    }
}

#[derive(Clone, Debug)]
enum KCore<E> {
    Two(TwoStepCore<E>),
    Node(RangeNode<E>),
}

/// At most `k` elements per query (`k >= 2`), `O(k n lambda(k, n))` stored elements.
///
/// For `k = 2` this is the aligned two-step structure. For `k >= 3` the sequence is cut
/// into blocks of `lambda(k-2, n)`; the block totals get a `(k-2)`-step structure and each
/// block recursively gets a `k`-step structure of its own.
#[derive(Clone, Debug)]
pub struct KStepStructure<S: Semigroup> {
    sg: S,
    k: usize,
    values: Vec<S::Elem>,
    core: KCore<S::Elem>,
}

/// Top-level shape of a blocked structure, for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub block_len: usize,
    pub blocks: usize,
    /// Step budget of the structure over block totals.
    pub summary_k: usize,
    /// Elements held by the block-total structure, including the totals themselves.
    pub summary_stored_elements: usize,
    /// Whether the block-total structure is a complete table.
    pub summary_is_table: bool,
}

impl<S: Semigroup> KStepStructure<S> {
    pub fn build(sg: S, values: Vec<S::Elem>, k: usize) -> Result<Self, Error> {
        if k < 2 {
            return Err(Error::UnsupportedStepBudget(k));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let core = if k == 2 {
            KCore::Two(TwoStepCore::build(&sg, &values))
        } else {
            KCore::Node(RangeNode::build(&sg, &values, k))
        };
        Ok(KStepStructure { sg, k, values, core })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `None` unless the top level is blocked (`k >= 3` and `n > 4`).
    pub fn layout(&self) -> Option<BlockLayout> {
        match &self.core {
            KCore::Node(RangeNode::Blocks(b)) => Some(BlockLayout {
                block_len: b.block_len(),
                blocks: b.summaries().len(),
                summary_k: self.k - 2,
                summary_stored_elements: b.summaries().len() + b.summary().stored(),
                summary_is_table: matches!(b.summary(), RangeNode::Table(_)),
            }),
            _ => None,
        }
    }

    fn core(&self) -> &dyn SubRange<S::Elem> {
        match &self.core {
            KCore::Two(t) => t,
            KCore::Node(n) => n,
        }
    }
}

impl<S: Semigroup> RangeStructure<S> for KStepStructure<S> {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn step_budget(&self) -> usize {
        self.k
    }

    fn stored_elements(&self) -> usize {
        self.values.len() + self.core().stored()
    }

    fn index_overhead_bytes(&self) -> usize {
        self.core().overhead_bytes()
    }

    fn query(&self, i: usize, j: usize) -> Result<QueryAnswer<S::Elem>, Error> {
        answer(&self.sg, self.len(), i, j, |lo, hi, out| self.core().cover(&self.values, 0, lo, hi, out))
    }

    fn decompose(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>, Error> {
        spans(self.len(), i, j, |lo, hi, out| self.core().cover(&self.values, 0, lo, hi, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::testutil::*;
    use crate::linear::TwoStepStructure;
    use crate::semigroup::{Mat2Mod251, MinI64};

    #[test]
    fn rejects_small_budgets() {
        assert!(matches!(KStepStructure::build(MinI64, vec![1], 1), Err(Error::UnsupportedStepBudget(1))));
        assert!(matches!(KStepStructure::build(MinI64, vec![1], 0), Err(Error::UnsupportedStepBudget(0))));
        assert!(matches!(KStepStructure::build(MinI64, vec![], 3), Err(Error::EmptyInput)));
    }

    #[test]
    fn k3_summary_is_complete_table() {
        let s = KStepStructure::build(MinI64, random_i64(10_000, 5), 3).unwrap();
        let layout = s.layout().unwrap();
        assert_eq!(layout.block_len, 100);
        assert_eq!(layout.blocks, 100);
        assert!(layout.summary_is_table);
        assert_eq!(layout.summary_stored_elements, 5050);
    }

    #[test]
    fn k4_block_len() {
        let s = KStepStructure::build(MinI64, random_i64(1 << 16, 6), 4).unwrap();
        assert_eq!(s.layout().unwrap().block_len, 16);
    }

    #[test]
    fn k2_matches_two_step() {
        let v = random_i64(777, 7);
        let a = KStepStructure::build(MinI64, v.clone(), 2).unwrap();
        let b = TwoStepStructure::build(MinI64, v).unwrap();
        assert_eq!(a.stored_elements(), b.stored_elements());
        for (i, j) in [(1, 777), (5, 300), (100, 101), (400, 400)] {
            assert_eq!(a.query(i, j).unwrap(), b.query(i, j).unwrap());
            assert_eq!(a.decompose(i, j).unwrap(), b.decompose(i, j).unwrap());
        }
    }

    #[test]
    fn oracle_all_small() {
        for k in 2..=6 {
            for n in 1..=90 {
                let v = random_mat(n, (k * 1000 + n) as u64);
                let s = KStepStructure::build(Mat2Mod251, v.clone(), k).unwrap();
                check_all_pairs(&Mat2Mod251, &v, &s);
            }
        }
    }

    #[test]
    fn decomposition_tiles_the_interval() {
        let v = random_i64(500, 8);
        let s = KStepStructure::build(MinI64, v, 5).unwrap();
        for (i, j) in [(1, 500), (3, 499), (17, 18), (250, 260)] {
            let d = s.decompose(i, j).unwrap();
            assert_eq!(d.first().unwrap().0, i);
            assert_eq!(d.last().unwrap().1, j);
            assert!(d.windows(2).all(|w| w[0].1 + 1 == w[1].0));
        }
    }
}
