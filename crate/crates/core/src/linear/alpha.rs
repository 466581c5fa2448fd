use super::k_step::BlockCore;
use super::simple_tree::SimpleTreeCore;
use super::{answer, spans, Pieces, RangeStructure, SubRange};
use crate::hierarchy::{alpha, ceil_log2};
use crate::semigroup::{QueryAnswer, Semigroup};
use crate::Error;

#[derive(Clone, Debug)]
enum AlphaCore<E> {
    /// `n <= 2 alpha(n)^2`: a single balanced tree.
    Single(SimpleTreeCore<E>),
    Blocked(Box<BlockCore<E, SimpleTreeCore<E>>>),
}

/// Linear space, `O(alpha(n))` elements per query.
///
/// Blocks of `2 alpha(n)^2` each carry a balanced tree (intra-block queries in
/// `2 ceil(log(2 alpha^2))` elements) plus prefix/suffix products; the block totals get a
/// `2 alpha(n)`-step structure, so inter-block queries use at most `2 alpha(n) + 2`.
#[derive(Clone, Debug)]
pub struct LinearAlphaStructure<S: Semigroup> {
    sg: S,
    alpha: usize,
    block_len: usize,
    values: Vec<S::Elem>,
    core: AlphaCore<S::Elem>,
}

impl<S: Semigroup> LinearAlphaStructure<S> {
    pub fn build(sg: S, values: Vec<S::Elem>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = values.len();
        let a = alpha(n as u64)? as usize;
        let block_len = 2 * a * a;
        let core = if n <= block_len {
            AlphaCore::Single(SimpleTreeCore::build(&sg, &values))
        } else {
            let core = BlockCore::build(&sg, &values, block_len, 2 * a, |block| SimpleTreeCore::build(&sg, block));
            AlphaCore::Blocked(Box::new(core))
        };
        Ok(LinearAlphaStructure { sg, alpha: a, block_len, values, core })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Step budget of the block-total structure, `None` when degenerate.
    pub fn summary_k(&self) -> Option<usize> {
        match self.core {
            AlphaCore::Single(_) => None,
            AlphaCore::Blocked(_) => Some(2 * self.alpha),
        }
    }

    pub fn blocks(&self) -> usize {
        match &self.core {
            AlphaCore::Single(_) => 1,
            AlphaCore::Blocked(b) => b.summaries().len(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.core, AlphaCore::Single(_))
    }

    fn core(&self) -> &dyn SubRange<S::Elem> {
        match &self.core {
            AlphaCore::Single(t) => t,
            AlphaCore::Blocked(b) => b.as_ref(),
        }
    }

    fn cover<'a>(&'a self, lo: usize, hi: usize, out: &mut Pieces<'a, S::Elem>) {
        self.core().cover(&self.values, 0, lo, hi, out)
    }
}

impl<S: Semigroup> RangeStructure<S> for LinearAlphaStructure<S> {
    fn len(&self) -> usize {
        self.values.len()
    }

    /// `max(2 alpha + 2, 2 ceil(log(2 alpha^2)))`.
    fn step_budget(&self) -> usize {
        let a = self.alpha;
        (2 * a + 2).max(2 * ceil_log2(self.block_len))
    }

    fn stored_elements(&self) -> usize {
        self.values.len() + self.core().stored()
    }

    fn index_overhead_bytes(&self) -> usize {
        self.core().overhead_bytes()
    }

    fn query(&self, i: usize, j: usize) -> Result<QueryAnswer<S::Elem>, Error> {
        answer(&self.sg, self.len(), i, j, |lo, hi, out| self.cover(lo, hi, out))
    }

    fn decompose(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>, Error> {
        spans(self.len(), i, j, |lo, hi, out| self.cover(lo, hi, out))
    }
}
