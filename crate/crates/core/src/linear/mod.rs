//! Range-product structures over a fixed sequence `s_1, ..., s_n`.
//!
//! Public queries are 1-based and inclusive, `query(i, j)` for `1 <= i <= j <= n`.
//! Internally every structure works on 0-based positions relative to a base slice; the
//! recursive pieces (`Triangle`, `TwoStepCore`, `BlockCore`, `SimpleTreeCore`) do not own
//! their base, so the raw values are stored once at the top.

mod alpha;
mod k_step;
mod one_step;
mod simple_tree;
mod two_step;

use smallvec::SmallVec;

pub use alpha::LinearAlphaStructure;
pub use k_step::KStepStructure;
pub use one_step::OneStepTable;
pub use simple_tree::SimpleRangeTree;
pub use two_step::TwoStepStructure;

pub(crate) use simple_tree::SimpleTreeCore;

use crate::semigroup::{assemble, check_interval, QueryAnswer, Semigroup};
use crate::Error;

/// One precomputed element and the absolute positions `lo..=hi` it covers.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Piece<'a, E> {
    pub lo: usize,
    pub hi: usize,
    pub elem: &'a E,
}

pub(crate) type Pieces<'a, E> = SmallVec<[Piece<'a, E>; 16]>;

/// A structure that decomposes ranges of a borrowed base slice into stored elements.
pub(crate) trait SubRange<E> {
    /// Pushes pieces covering `lo..=hi` (local, `lo < hi`) in left-to-right order.
    fn cover_proper<'a>(&'a self, base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>);

    fn stored(&self) -> usize;

    fn overhead_bytes(&self) -> usize;

    fn cover<'a>(&'a self, base: &'a [E], offset: usize, lo: usize, hi: usize, out: &mut Pieces<'a, E>) {
        if lo == hi {
            out.push(Piece { lo: offset + lo, hi: offset + hi, elem: &base[lo] });
        } else {
            self.cover_proper(base, offset, lo, hi, out);
        }
    }
}

/// Common interface of the array structures.
pub trait RangeStructure<S: Semigroup> {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Upper bound on `elements_used` for any query.
    fn step_budget(&self) -> usize;

    /// Semigroup elements retained, including the raw values.
    fn stored_elements(&self) -> usize;

    /// Bytes of integer routing tables, reported apart from stored elements.
    fn index_overhead_bytes(&self) -> usize;

    /// `s_i * ... * s_j`, 1-based inclusive.
    fn query(&self, i: usize, j: usize) -> Result<QueryAnswer<S::Elem>, Error>;

    /// The 1-based spans of the precomputed elements `query(i, j)` multiplies.
    fn decompose(&self, i: usize, j: usize) -> Result<Vec<(usize, usize)>, Error>;
}

/// Glue from a 0-based cover function to the public query API.
pub(crate) fn answer<'a, S: Semigroup>(
    sg: &S,
    n: usize,
    i: usize,
    j: usize,
    cover: impl FnOnce(usize, usize, &mut Pieces<'a, S::Elem>),
) -> Result<QueryAnswer<S::Elem>, Error>
where
    S::Elem: 'a,
{
    check_interval(n, i, j)?;
    let mut pieces = Pieces::new();
    cover(i - 1, j - 1, &mut pieces);
    debug_assert!(pieces.windows(2).all(|w| w[0].hi + 1 == w[1].lo));
    Ok(assemble(sg, pieces.iter().map(|p| p.elem)))
}

pub(crate) fn spans<'a, E: 'a>(
    n: usize,
    i: usize,
    j: usize,
    cover: impl FnOnce(usize, usize, &mut Pieces<'a, E>),
) -> Result<Vec<(usize, usize)>, Error> {
    check_interval(n, i, j)?;
    let mut pieces = Pieces::new();
    cover(i - 1, j - 1, &mut pieces);
    Ok(pieces.iter().map(|p| (p.lo + 1, p.hi + 1)).collect())
}

fn vec_bytes<T>(v: &[T]) -> usize {
    std::mem::size_of_val(v)
}

#[cfg(test)]
pub(crate) mod testutil {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::RangeStructure;
    use crate::semigroup::{fold_interval, Mat2, Semigroup};

    pub fn random_i64(n: usize, seed: u64) -> Vec<i64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1000..1000)).collect()
    }

    pub fn random_mat(n: usize, seed: u64) -> Vec<Mat2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                Mat2::new(rng.gen_range(0..251), rng.gen_range(0..251), rng.gen_range(0..251), rng.gen_range(0..251))
            })
            .collect()
    }

    /// Every pair agrees with the brute fold and respects the step budget.
    pub fn check_all_pairs<S: Semigroup, R: RangeStructure<S>>(sg: &S, values: &[S::Elem], r: &R) {
        let n = values.len();
        for i in 1..=n {
            for j in i..=n {
                let ans = r.query(i, j).unwrap();
                assert_eq!(ans.value, fold_interval(sg, values, i, j).unwrap(), "n={n} ({i},{j})");
                assert!(ans.elements_used <= r.step_budget(), "n={n} ({i},{j}) used {}", ans.elements_used);
                if i == j {
                    assert_eq!(ans.elements_used, 1);
                }
            }
        }
    }
}
