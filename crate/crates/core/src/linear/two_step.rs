use super::{answer, spans, vec_bytes, Piece, Pieces, RangeStructure, SubRange};
use crate::hierarchy::ceil_log2;
use crate::semigroup::{QueryAnswer, Semigroup};
use crate::Error;

/// Power-of-two aligned split products.
///
/// Positions are padded to `2^ceil(log n)`. At level `h` the padded range is cut into
/// blocks of `2^(h+1)` with split point in the middle; each position in the left half
/// stores the product up to the split, each position in the right half the product
/// from the split. A query `(a, b)` with `a != b` is served by the level of the highest
/// bit of `a ^ b`, in two elements.
#[derive(Clone, Debug)]
pub(crate) struct TwoStepCore<E> {
    levels: Vec<Vec<E>>,
    /// `msb[x]` = index of the highest set bit of `x`, for `1 <= x < 2^ceil(log n)`.
    msb: Vec<u8>,
}

impl<E: Clone> TwoStepCore<E> {
    pub fn build<S: Semigroup<Elem = E>>(sg: &S, base: &[E]) -> Self {
        let n = base.len();
        let height = if n == 0 { 0 } else { ceil_log2(n) };
        let mut levels = Vec::with_capacity(height);
        for h in 0..height {
            let half = 1usize << h;
            let mut level = Vec::with_capacity(n);
            let mut start = 0;
            while start < n {
                let mid = start + half;
                if mid >= n {
                    // No query splits inside the final block; it is never addressed.
                    break;
                }
                let end = (start + 2 * half).min(n);
                let mut left: Vec<E> = Vec::with_capacity(mid - start);
                let mut acc = base[mid - 1].clone();
                left.push(acc.clone());
                for p in (start..mid - 1).rev() {
                    acc = sg.combine(&base[p], &acc);
                    left.push(acc.clone());
                }
                left.reverse();
                level.extend(left);
                let mut acc = base[mid].clone();
                level.push(acc.clone());
                for p in base.iter().take(end).skip(mid + 1) {
                    acc = sg.combine(&acc, p);
                    level.push(acc.clone());
                }
                start = end;
            }
            levels.push(level);
        }
        let width = 1usize << height;
        let mut msb = vec![0u8; width];
        for x in 2..width {
            msb[x] = msb[x / 2] + 1;
        }
        TwoStepCore { levels, msb }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }
}

impl<E: Clone> SubRange<E> for TwoStepCore<E> {
    fn cover_proper<'a>(&'a self, _base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        let h = self.msb[lo ^ hi] as usize;
        let level = &self.levels[h];
        let mid = (hi >> h) << h;
        out.push(Piece { lo: offset + lo, hi: offset + mid - 1, elem: &level[lo] });
        out.push(Piece { lo: offset + mid, hi: offset + hi, elem: &level[hi] });
    }

    fn stored(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    fn overhead_bytes(&self) -> usize {
        vec_bytes(&self.msb)
    }
}

/// Two elements per query, `n ceil(log n) + n` stored elements.
#[derive(Clone, Debug)]
pub struct TwoStepStructure<S: Semigroup> {
    sg: S,
    values: Vec<S::Elem>,
    core: TwoStepCore<S::Elem>,
}

impl<S: Semigroup> TwoStepStructure<S> {
    pub fn build(sg: S, values: Vec<S::Elem>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let core = TwoStepCore::build(&sg, &values);
        Ok(TwoStepStructure { sg, values, core })
    }

    pub fn levels(&self) -> usize {
        self.core.height()
    }
}

impl<S: Semigroup> RangeStructure<S> for TwoStepStructure<S> {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn step_budget(&self) -> usize {
        if self.len() == 1 {
            1
        } else {
            2
        }
    }

    fn stored_elements(&self) -> usize {
        self.values.len() + self.core.stored()
    }

    fn index_overhead_bytes(&self) -> usize {
        self.core.overhead_bytes()
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
    use crate::semigroup::{Mat2Mod251, MinI64};

    #[test]
    fn example_query() {
        let t = TwoStepStructure::build(MinI64, vec![3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let ans = t.query(2, 7).unwrap();
        assert_eq!(ans.value, 1);
        assert!(ans.elements_used <= 2);
        assert_eq!(t.query(6, 6).unwrap(), QueryAnswer { value: 9, elements_used: 1 });
    }

    #[test]
    fn space_bound() {
        for n in [1usize, 2, 3, 5, 8, 100, 1000, 1024, 1025] {
            let t = TwoStepStructure::build(MinI64, random_i64(n, 3)).unwrap();
            let bound = if n == 1 { 1 } else { n * ceil_log2(n) + n };
            assert!(t.stored_elements() <= bound, "n={n}: {} > {bound}", t.stored_elements());
        }
        let t = TwoStepStructure::build(MinI64, random_i64(1024, 3)).unwrap();
        assert!(t.stored_elements() <= 11 * 1024);
    }

    #[test]
    fn oracle_all_small() {
        for n in 1..=70 {
            let v = random_mat(n, 100 + n as u64);
            let t = TwoStepStructure::build(Mat2Mod251, v.clone()).unwrap();
            check_all_pairs(&Mat2Mod251, &v, &t);
        }
    }
}
