use smallvec::SmallVec;

use super::{answer, spans, Piece, Pieces, RangeStructure, SubRange};
use crate::hierarchy::ceil_log2;
use crate::semigroup::{QueryAnswer, Semigroup};
use crate::Error;

/// Balanced binary tree over the base; each internal node holds the product of its
/// leaves. Internal nodes are laid out in preorder so child positions follow from the
/// node's range and no child pointers are stored. Leaves are the base itself.
#[derive(Clone, Debug)]
pub(crate) struct SimpleTreeCore<E> {
    n: usize,
    internal: Vec<E>,
}

impl<E: Clone> SimpleTreeCore<E> {
    pub fn build<S: Semigroup<Elem = E>>(sg: &S, base: &[E]) -> Self {
        let n = base.len();
        let mut slots: Vec<Option<E>> = vec![None; n.saturating_sub(1)];
        if n > 1 {
            fill(sg, base, &mut slots, 0, 0, n - 1);
        }
        let internal = slots.into_iter().map(|e| e.expect("every internal node is filled")).collect();
        SimpleTreeCore { n, internal }
    }

    pub fn height(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            ceil_log2(self.n)
        }
    }

    fn piece<'a>(&'a self, base: &'a [E], offset: usize, idx: usize, lo: usize, hi: usize) -> Piece<'a, E> {
        let elem = if lo == hi { &base[lo] } else { &self.internal[idx] };
        Piece { lo: offset + lo, hi: offset + hi, elem }
    }
}

fn fill<S: Semigroup>(
    sg: &S,
    base: &[S::Elem],
    slots: &mut [Option<S::Elem>],
    idx: usize,
    lo: usize,
    hi: usize,
) -> S::Elem {
    if lo == hi {
        return base[lo].clone();
    }
    let mid = (lo + hi) / 2;
    let left = fill(sg, base, slots, idx + 1, lo, mid);
    let right = fill(sg, base, slots, idx + 1 + (mid - lo), mid + 1, hi);
    let prod = sg.combine(&left, &right);
    slots[idx] = Some(prod.clone());
    prod
}

impl<E: Clone> SubRange<E> for SimpleTreeCore<E> {
    fn cover_proper<'a>(&'a self, base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        let (mut idx, mut nlo, mut nhi) = (0, 0, self.n - 1);
        // Descend to the node where the query splits.
        let mid = loop {
            if lo == nlo && hi == nhi {
                out.push(self.piece(base, offset, idx, nlo, nhi));
                return;
            }
            let mid = (nlo + nhi) / 2;
            if hi <= mid {
                idx += 1;
                nhi = mid;
            } else if lo > mid {
                idx += 1 + (mid - nlo);
                nlo = mid + 1;
            } else {
                break mid;
            }
        };
        let right_idx = idx + 1 + (mid - nlo);

        // Climb from the left leaf: right siblings hanging off the path, innermost last.
        let (mut i, mut a, mut b) = (idx + 1, nlo, mid);
        let mut pending: SmallVec<[Piece<'a, E>; 16]> = SmallVec::new();
        loop {
            if lo == a {
                out.push(self.piece(base, offset, i, a, b));
                break;
            }
            let m = (a + b) / 2;
            let r = i + 1 + (m - a);
            if lo > m {
                i = r;
                a = m + 1;
            } else {
                pending.push(self.piece(base, offset, r, m + 1, b));
                i += 1;
                b = m;
            }
        }
        out.extend(pending.into_iter().rev());

        // Climb to the right leaf: left siblings in order.
        let (mut i, mut a, mut b) = (right_idx, mid + 1, nhi);
        loop {
            if hi == b {
                out.push(self.piece(base, offset, i, a, b));
                break;
            }
            let m = (a + b) / 2;
            if hi <= m {
                i += 1;
                b = m;
            } else {
                out.push(self.piece(base, offset, i + 1, a, m));
                i += 1 + (m - a);
                a = m + 1;
            }
        }
    }

    fn stored(&self) -> usize {
        self.internal.len()
    }

    fn overhead_bytes(&self) -> usize {
        0
    }
}

/// Linear space, at most `2 ceil(log n)` elements per query.
#[derive(Clone, Debug)]
pub struct SimpleRangeTree<S: Semigroup> {
    sg: S,
    values: Vec<S::Elem>,
    core: SimpleTreeCore<S::Elem>,
}

impl<S: Semigroup> SimpleRangeTree<S> {
    pub fn build(sg: S, values: Vec<S::Elem>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let core = SimpleTreeCore::build(&sg, &values);
        Ok(SimpleRangeTree { sg, values, core })
    }

    /// Product of all leaves.
    pub fn root(&self) -> &S::Elem {
        self.core.internal.first().unwrap_or(&self.values[0])
    }
}

impl<S: Semigroup> RangeStructure<S> for SimpleRangeTree<S> {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn step_budget(&self) -> usize {
        (2 * self.core.height()).max(1)
    }

    fn stored_elements(&self) -> usize {
        self.values.len() + self.core.stored()
    }

    fn index_overhead_bytes(&self) -> usize {
        0
    }

    fn query(&self, i: usize, j: usize) -> Result<QueryAnswer<S::Elem>, Error> {
        answer(&self.sg, self.len(), i, j, |lo, hi, out| self.core.cover(&self.values, 0, lo, hi, out))
    }

    fn decompose(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>, Error> {
        spans(self.len(), i, j, |lo, hi, out| self.core.cover(&self.values, 0, lo, hi, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::testutil::*;
    use crate::semigroup::{Mat2Mod251, MinI64, SumU64};

    #[test]
    fn examples() {
        let t = SimpleRangeTree::build(SumU64, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(*t.root(), 10);
        let t = SimpleRangeTree::build(MinI64, vec![7, 3, 9, 2, 8]).unwrap();
        assert_eq!(t.stored_elements(), 9);
        let ans = t.query(2, 4).unwrap();
        assert_eq!(ans.value, 2);
        assert!(ans.elements_used <= 2 * 3);
    }

    #[test]
    fn oracle_all_small() {
        for n in 1..=70 {
            let v = random_mat(n, 200 + n as u64);
            let t = SimpleRangeTree::build(Mat2Mod251, v.clone()).unwrap();
            assert_eq!(t.stored_elements(), 2 * n - 1);
            check_all_pairs(&Mat2Mod251, &v, &t);
        }
    }
}
