use super::{answer, spans, Piece, Pieces, RangeStructure, SubRange};
use crate::semigroup::{QueryAnswer, Semigroup};
use crate::Error;

/// Every product `s_a * ... * s_b` with `a < b`, row by row. The diagonal is the base.
#[derive(Clone, Debug)]
pub(crate) struct Triangle<E> {
    n: usize,
    entries: Vec<E>,
}

impl<E: Clone> Triangle<E> {
    pub fn build<S: Semigroup<Elem = E>>(sg: &S, base: &[E]) -> Self {
        let n = base.len();
        let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            let mut acc = base[a].clone();
            for b in &base[a + 1..] {
                acc = sg.combine(&acc, b);
                entries.push(acc.clone());
            }
        }
        Triangle { n, entries }
    }

    fn index(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b && b < self.n);
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }
}

impl<E: Clone> SubRange<E> for Triangle<E> {
    fn cover_proper<'a>(&'a self, _base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        out.push(Piece { lo: offset + lo, hi: offset + hi, elem: &self.entries[self.index(lo, hi)] });
    }

    fn stored(&self) -> usize {
        self.entries.len()
    }

    fn overhead_bytes(&self) -> usize {
        0
    }
}

/// All `n(n+1)/2` interval products; each query retrieves exactly one element.
#[derive(Clone, Debug)]
pub struct OneStepTable<S: Semigroup> {
    sg: S,
    values: Vec<S::Elem>,
    table: Triangle<S::Elem>,
}

impl<S: Semigroup> OneStepTable<S> {
    pub fn build(sg: S, values: Vec<S::Elem>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let table = Triangle::build(&sg, &values);
        Ok(OneStepTable { sg, values, table })
    }

    /// The stored product for 1-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Result<&S::Elem, Error> {
        crate::semigroup::check_interval(self.values.len(), i, j)?;
        Ok(if i == j { &self.values[i - 1] } else { &self.table.entries[self.table.index(i - 1, j - 1)] })
    }
}

impl<S: Semigroup> RangeStructure<S> for OneStepTable<S> {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn step_budget(&self) -> usize {
        1
    }

    fn stored_elements(&self) -> usize {
        self.values.len() + self.table.stored()
    }

    fn index_overhead_bytes(&self) -> usize {
        0
    }

    fn query(&self, i: usize, j: usize) -> Result<QueryAnswer<S::Elem>, Error> {
        answer(&self.sg, self.len(), i, j, |lo, hi, out| self.table.cover(&self.values, 0, lo, hi, out))
    }

    fn decompose(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>, Error> {
        spans(self.len(), i, j, |lo, hi, out| self.table.cover(&self.values, 0, lo, hi, out))
    }
}
