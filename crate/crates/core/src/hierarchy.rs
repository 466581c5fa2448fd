//! The rapidly growing functions `A`, `B` and their slowly growing inverses.
//!
//! `A` and `B` form two interleaved ladders of the primitive recursive hierarchy:
//!
//! ```text
//! A(0, j) = 2j        B(0, j) = j^2
//! A(i, 0) = 1         B(i, 0) = 2           (i >= 1)
//! A(i, j) = A(i-1, A(i, j-1))               (i, j >= 1, same for B)
//! ```
//!
//! `lambda(2i, x)` inverts row `i` of `A`, `lambda(2i+1, x)` inverts row `i` of `B`,
//! and `alpha(x)` inverts the diagonal of `A`. Block sizes of every structure in this
//! crate are derived from these inverses.
//!
//! All values are held as [`SaturatingNat`], clamped at [`SaturatingNat::CAP`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::Error;

/// A natural number clamped at `CAP = 2^62`.
///
/// A stored value of `CAP` means "at least `CAP`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SaturatingNat(u64);

impl SaturatingNat {
    pub const CAP: u64 = 1 << 62;
    pub const MAX: SaturatingNat = SaturatingNat(Self::CAP);

    pub fn new(value: u64) -> Self {
        SaturatingNat(value.min(Self::CAP))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_saturated(self) -> bool {
        self.0 == Self::CAP
    }

    fn mul(self, rhs: u64) -> Self {
        Self::new(self.0.saturating_mul(rhs))
    }

    fn square(self) -> Self {
        self.mul(self.0)
    }

    /// `2^e`, saturating.
    fn pow2(e: u64) -> Self {
        if e >= 62 {
            Self::MAX
        } else {
            SaturatingNat(1 << e)
        }
    }
}

impl fmt::Display for SaturatingNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_saturated() {
            write!(f, ">=2^62")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Ladder {
    A,
    B,
}

/// Memo tables for rows `i >= 2` of `A` and `B`.
///
/// Rows 0 and 1 have closed forms and are never stored.
#[derive(Debug, Default)]
pub struct HierarchyTable {
    memo: HashMap<(Ladder, u64, u64), SaturatingNat>,
}

impl HierarchyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ackermann_a(&mut self, i: u64, j: u64) -> SaturatingNat {
        self.eval(Ladder::A, i, j)
    }

    pub fn ackermann_b(&mut self, i: u64, j: u64) -> SaturatingNat {
        self.eval(Ladder::B, i, j)
    }

    /// Number of memoized `(i, j)` entries across both ladders.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn eval(&mut self, ladder: Ladder, i: u64, j: u64) -> SaturatingNat {
        match (ladder, i) {
            // A(0, 0) is not covered by either base rule; 2j extends it to 0.
            (Ladder::A, 0) => SaturatingNat::new(j).mul(2),
            (Ladder::B, 0) => SaturatingNat::new(j).square(),
            (Ladder::A, 1) => SaturatingNat::pow2(j),
            (Ladder::B, 1) => {
                if j >= 6 {
                    SaturatingNat::MAX
                } else {
                    SaturatingNat::pow2(1 << j)
                }
            }
            _ => {
                if let Some(&v) = self.memo.get(&(ladder, i, j)) {
                    return v;
                }
                let mut v = match ladder {
                    Ladder::A => SaturatingNat(1),
                    Ladder::B => SaturatingNat(2),
                };
                // Every row is nondecreasing and row i-1 maps CAP to CAP, so once the
                // inner value saturates all further iterations stay saturated.
                for _ in 0..j {
                    if v.is_saturated() {
                        break;
                    }
                    v = self.eval(ladder, i - 1, v.get());
                }
                self.memo.insert((ladder, i, j), v);
                v
            }
        }
    }
}

fn global_table() -> &'static Mutex<HierarchyTable> {
    static TABLE: OnceLock<Mutex<HierarchyTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HierarchyTable::new()))
}

/// `A(i, j)`, exact below `CAP`.
pub fn ackermann_a(i: u64, j: u64) -> SaturatingNat {
    global_table().lock().expect("hierarchy memo poisoned").ackermann_a(i, j)
}

/// `B(i, j)`, exact below `CAP`.
pub fn ackermann_b(i: u64, j: u64) -> SaturatingNat {
    global_table().lock().expect("hierarchy memo poisoned").ackermann_b(i, j)
}

/// `ceil(sqrt(x))` by integer Newton iteration.
pub fn ceil_sqrt(x: u64) -> u64 {
    if x <= 1 {
        return x;
    }
    let x = x as u128;
    // Newton from above converges to floor(sqrt(x)).
    let mut r = 1u128 << (128 - x.leading_zeros()).div_ceil(2);
    loop {
        let next = (r + x / r) / 2;
        if next >= r {
            break;
        }
        r = next;
    }
    while r * r > x {
        r -= 1;
    }
    if r * r < x {
        r += 1;
    }
    r as u64
}

/// `lambda(k, x)`: the smallest `j` with `A(k/2, j) >= x` (even `k`) or
/// `B((k-1)/2, j) >= x` (odd `k`).
///
/// Levels 0 and 1 use the closed forms `ceil(x/2)` and `ceil(sqrt(x))`. Higher levels
/// count how many applications of `lambda(k-2, .)` bring `x` down to the row's value at
/// `j = 0` (1 for the `A` rows, 2 for the `B` rows), so `A`/`B` are never evaluated.
pub fn lambda(k: u32, x: u64) -> Result<u64, Error> {
    if x == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(lambda_unchecked(k, x))
}

fn lambda_unchecked(k: u32, x: u64) -> u64 {
    match k {
        0 => x.div_ceil(2),
        1 => ceil_sqrt(x),
        _ => {
            let floor = if k.is_multiple_of(2) { 1 } else { 2 };
            let mut y = x;
            let mut count = 0;
            while y > floor {
                y = lambda_unchecked(k - 2, y);
                count += 1;
            }
            count
        }
    }
}

/// Inverse Ackermann function: the smallest `j` with `A(j, j) >= x`.
///
/// `A(4, 4)` exceeds every `u64`, so the result is at most 4.
pub fn alpha(x: u64) -> Result<u64, Error> {
    if x == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut j = 0;
    loop {
        let a = ackermann_a(j, j);
        if a.is_saturated() || a.get() >= x {
            return Ok(j);
        }
        j += 1;
    }
}

/// `ceil(log2(x))` for `x >= 1`.
pub(crate) fn ceil_log2(x: usize) -> usize {
    debug_assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ackermann_examples() {
        assert_eq!(ackermann_a(0, 7).get(), 14);
        assert_eq!(ackermann_a(3, 0).get(), 1);
        assert_eq!(ackermann_a(1, 5).get(), 32);
        assert_eq!(ackermann_a(2, 3).get(), 16);
        assert_eq!(ackermann_b(0, 5).get(), 25);
        assert_eq!(ackermann_b(4, 0).get(), 2);
        assert_eq!(ackermann_b(1, 2).get(), 16);
    }

    #[test]
    fn ackermann_matches_recurrence_directly() {
        // Direct unmemoized recurrence for small arguments.
        fn a(i: u64, j: u64) -> u64 {
            match (i, j) {
                (0, j) => 2 * j,
                (_, 0) => 1,
                _ => a(i - 1, a(i, j - 1)),
            }
        }
        fn b(i: u64, j: u64) -> u64 {
            match (i, j) {
                (0, j) => j * j,
                (_, 0) => 2,
                _ => b(i - 1, b(i, j - 1)),
            }
        }
        for (i, j) in [(1, 0), (1, 10), (2, 0), (2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)] {
            assert_eq!(ackermann_a(i, j).get(), a(i, j), "A({i},{j})");
        }
        for (i, j) in [(1, 0), (1, 1), (1, 3), (1, 4), (2, 0), (2, 1)] {
            assert_eq!(ackermann_b(i, j).get(), b(i, j), "B({i},{j})");
        }
    }

    #[test]
    fn saturation_terminates() {
        assert!(ackermann_a(2, 5).is_saturated());
        assert!(ackermann_a(3, 4).is_saturated());
        assert!(ackermann_a(4, 4).is_saturated());
        assert!(ackermann_a(9, 1_000_000).is_saturated());
        assert!(ackermann_b(1, 6).is_saturated());
        assert!(ackermann_b(5, u64::MAX).is_saturated());
        assert!(ackermann_a(1, u64::MAX).is_saturated());
        assert_eq!(ackermann_a(0, u64::MAX).get(), SaturatingNat::CAP);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda(0, 10).unwrap(), 5);
        assert_eq!(lambda(2, 8).unwrap(), 3);
        assert_eq!(lambda(4, 65536).unwrap(), 4);
        for k in 2..10 {
            assert_eq!(lambda(k, 1).unwrap(), 0);
        }
        // Closed forms at levels 0 and 1 give 1 at x = 1 (A(0,0) = B(0,0) = 0).
        assert_eq!(lambda(0, 1).unwrap(), 1);
        assert_eq!(lambda(1, 1).unwrap(), 1);
        assert!(matches!(lambda(3, 0), Err(Error::ZeroArgument)));
    }

    #[test]
    fn lambda_odd_levels_terminate() {
        assert_eq!(lambda(3, 16).unwrap(), 2);
        assert_eq!(lambda(3, 17).unwrap(), 3);
        assert_eq!(lambda(3, 2).unwrap(), 0);
        // B(2, 1) = 16 and B(2, 2) = 2^65536.
        assert_eq!(lambda(5, 16).unwrap(), 1);
        assert_eq!(lambda(5, 17).unwrap(), 2);
        assert_eq!(lambda(5, u64::MAX).unwrap(), 2);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(1).unwrap(), 1);
        assert_eq!(alpha(2).unwrap(), 1);
        assert_eq!(alpha(3).unwrap(), 2);
        assert_eq!(alpha(65536).unwrap(), 3);
        assert_eq!(alpha(65537).unwrap(), 4);
        assert_eq!(alpha(1_000_000_000).unwrap(), 4);
        assert_eq!(alpha(u64::MAX).unwrap(), 4);
        assert!(alpha(0).is_err());
    }

    #[test]
    fn ceil_sqrt_near_squares() {
        for r in 1u64..3000 {
            let sq = r * r;
            assert_eq!(ceil_sqrt(sq), r);
            assert_eq!(ceil_sqrt(sq + 1), r + 1);
            assert_eq!(ceil_sqrt(sq - 1), if r == 1 { 0 } else { r });
        }
        assert_eq!(ceil_sqrt(u64::MAX), 1 << 32);
        let big = (1u64 << 31) - 1;
        assert_eq!(ceil_sqrt(big * big), big);
        assert_eq!(ceil_sqrt(big * big + 1), big + 1);
    }

    #[test]
    fn ceil_log2_small() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }
}
