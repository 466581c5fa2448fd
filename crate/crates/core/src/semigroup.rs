//! Semigroups, step accounting, and the brute-force interval fold.

use std::cell::Cell;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::Error;

/// An associative binary operation over `Elem`.
pub trait Semigroup: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// A semigroup with a two-sided unit.
///
/// Tree structures pad binarized vertices with the unit. Semigroups without one can be
/// lifted through [`AdjoinUnit`].
pub trait Monoid: Semigroup {
    fn unit(&self) -> Self::Elem;
}

/// The metadata and token format of a registered semigroup.
pub trait NamedSemigroup: Monoid {
    fn name(&self) -> &'static str;
    fn commutative(&self) -> bool;
    fn parse(&self, token: &str) -> Result<Self::Elem, String>;
    fn format(&self, elem: &Self::Elem) -> String;
    /// An element derived from one random word, for generated inputs.
    fn sample(&self, word: u64) -> Self::Elem;
}

/// `min` over `i64`; `i64::MAX` plays the role of `+inf`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinI64;

/// `max` over `i64`; `i64::MIN` plays the role of `-inf`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxI64;

/// Wrapping addition over `u64`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SumU64;

/// 2x2 matrix product with entries reduced mod 251. Neither commutative nor idempotent.
#[derive(Clone, Copy, Debug, Default)]
pub struct Mat2Mod251;

/// Row-major 2x2 matrix over `Z/251`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [u8; 4]);

impl Mat2 {
    pub const MODULUS: u32 = 251;
    pub const IDENTITY: Mat2 = Mat2([1, 0, 0, 1]);

    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        let m = Self::MODULUS;
        Mat2([(a % m) as u8, (b % m) as u8, (c % m) as u8, (d % m) as u8])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, c, d] = self.0.map(u32::from);
        let [e, f, g, h] = rhs.0.map(u32::from);
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Semigroup for MinI64 {
    type Elem = i64;
    fn combine(&self, a: &i64, b: &i64) -> i64 {
        *a.min(b)
    }
}

impl Monoid for MinI64 {
    fn unit(&self) -> i64 {
        i64::MAX
    }
}

impl Semigroup for MaxI64 {
    type Elem = i64;
    fn combine(&self, a: &i64, b: &i64) -> i64 {
        *a.max(b)
    }
}

impl Monoid for MaxI64 {
    fn unit(&self) -> i64 {
        i64::MIN
    }
}

impl Semigroup for SumU64 {
    type Elem = u64;
    fn combine(&self, a: &u64, b: &u64) -> u64 {
        a.wrapping_add(*b)
    }
}

impl Monoid for SumU64 {
    fn unit(&self) -> u64 {
        0
    }
}

impl Semigroup for Mat2Mod251 {
    type Elem = Mat2;
    fn combine(&self, a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b)
    }
}

impl Monoid for Mat2Mod251 {
    fn unit(&self) -> Mat2 {
        Mat2::IDENTITY
    }
}

fn parse_int<T: std::str::FromStr>(token: &str) -> Result<T, String> {
    token.parse().map_err(|_| format!("expected an integer, found `{token}`"))
}

impl NamedSemigroup for MinI64 {
    fn name(&self) -> &'static str {
        "min-i64"
    }
    fn commutative(&self) -> bool {
        true
    }
    fn parse(&self, token: &str) -> Result<i64, String> {
        parse_int(token)
    }
    fn format(&self, elem: &i64) -> String {
        elem.to_string()
    }
    fn sample(&self, word: u64) -> i64 {
        (word % 2_000_001) as i64 - 1_000_000
    }
}

impl NamedSemigroup for MaxI64 {
    fn name(&self) -> &'static str {
        "max-i64"
    }
    fn commutative(&self) -> bool {
        true
    }
    fn parse(&self, token: &str) -> Result<i64, String> {
        parse_int(token)
    }
    fn format(&self, elem: &i64) -> String {
        elem.to_string()
    }
    fn sample(&self, word: u64) -> i64 {
        (word % 2_000_001) as i64 - 1_000_000
    }
}

impl NamedSemigroup for SumU64 {
    fn name(&self) -> &'static str {
        "sum-u64"
    }
    fn commutative(&self) -> bool {
        true
    }
    fn parse(&self, token: &str) -> Result<u64, String> {
        parse_int(token)
    }
    fn format(&self, elem: &u64) -> String {
        elem.to_string()
    }
    fn sample(&self, word: u64) -> u64 {
        word % 1_000_000
    }
}

impl NamedSemigroup for Mat2Mod251 {
    fn name(&self) -> &'static str {
        "mat2-mod251"
    }
    fn commutative(&self) -> bool {
        false
    }
    fn parse(&self, token: &str) -> Result<Mat2, String> {
        let parts: Vec<&str> = token.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("expected `a,b,c,d`, found `{token}`"));
        }
        let mut entries = [0u8; 4];
        for (slot, part) in entries.iter_mut().zip(parts) {
            let v: u32 = parse_int(part)?;
            if v >= Mat2::MODULUS {
                return Err(format!("matrix entry {v} outside [0,250]"));
            }
            *slot = v as u8;
        }
        Ok(Mat2(entries))
    }
    fn format(&self, elem: &Mat2) -> String {
        let [a, b, c, d] = elem.0;
        format!("{a},{b},{c},{d}")
    }
    fn sample(&self, word: u64) -> Mat2 {
        let e = |s: u32| ((word >> s) & 0xffff) as u32;
        Mat2::new(e(0), e(16), e(32), e(48))
    }
}

/// Lifts any semigroup to a monoid by adjoining a formal unit (`None`).
#[derive(Clone, Debug, Default)]
pub struct AdjoinUnit<S>(pub S);

impl<S: Semigroup> Semigroup for AdjoinUnit<S> {
    type Elem = Option<S::Elem>;

    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        match (a, b) {
            (Some(x), Some(y)) => Some(self.0.combine(x, y)),
            (Some(x), None) => Some(x.clone()),
            (None, other) => other.clone(),
        }
    }
}

impl<S: Semigroup> Monoid for AdjoinUnit<S> {
    fn unit(&self) -> Self::Elem {
        None
    }
}

/// Wraps a semigroup and counts every `combine` call, across clones.
#[derive(Clone, Debug, Default)]
pub struct Counting<S> {
    pub inner: S,
    calls: Arc<AtomicU64>,
}

impl<S> Counting<S> {
    pub fn new(inner: S) -> Self {
        Counting { inner, calls: Arc::new(AtomicU64::new(0)) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl<S: Semigroup> Semigroup for Counting<S> {
    type Elem = S::Elem;

    fn combine(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.combine(a, b)
    }
}

impl<S: Monoid> Monoid for Counting<S> {
    fn unit(&self) -> S::Elem {
        self.inner.unit()
    }
}

/// Combines in reverse operand order. Only useful to check that tests catch order bugs.
#[derive(Clone, Debug, Default)]
pub struct Swapped<S>(pub S);

impl<S: Semigroup> Semigroup for Swapped<S> {
    type Elem = S::Elem;

    fn combine(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        self.0.combine(b, a)
    }
}

impl<S: Monoid> Monoid for Swapped<S> {
    fn unit(&self) -> S::Elem {
        self.0.unit()
    }
}

/// Per-query count of semigroup operations.
#[derive(Debug, Default)]
pub struct StepCounter(Cell<u64>);

impl StepCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self) -> u64 {
        self.0.get()
    }
}

/// `combine(a, b)`, charging one operation to `counter`.
pub fn counting_combine<S: Semigroup>(counter: &StepCounter, sg: &S, a: &S::Elem, b: &S::Elem) -> S::Elem {
    counter.0.set(counter.0.get() + 1);
    sg.combine(a, b)
}

/// The product of a query together with the number of precomputed elements it used.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryAnswer<E> {
    pub value: E,
    pub elements_used: usize,
}

/// Folds precomputed pieces left to right.
pub(crate) fn assemble<'a, S, I>(sg: &S, pieces: I) -> QueryAnswer<S::Elem>
where
    S: Semigroup,
    S::Elem: 'a,
    I: IntoIterator<Item = &'a S::Elem>,
{
    let counter = StepCounter::new();
    let mut it = pieces.into_iter();
    let first = it.next().expect("a nonempty query retrieves at least one element");
    let mut value = first.clone();
    let mut used = 1;
    for piece in it {
        value = counting_combine(&counter, sg, &value, piece);
        used += 1;
    }
    debug_assert_eq!(counter.get() as usize, used - 1);
    QueryAnswer { value, elements_used: used }
}

/// Brute-force `s_i * ... * s_j` for 1-based inclusive `i..=j`.
pub fn fold_interval<S: Semigroup>(sg: &S, values: &[S::Elem], i: usize, j: usize) -> Result<S::Elem, Error> {
    check_interval(values.len(), i, j)?;
    let mut acc = values[i - 1].clone();
    for v in &values[i..j] {
        acc = sg.combine(&acc, v);
    }
    Ok(acc)
}

pub(crate) fn check_interval(n: usize, i: usize, j: usize) -> Result<(), Error> {
    if i > j {
        return Err(Error::InvertedInterval { i, j });
    }
    if i == 0 || j > n {
        return Err(Error::IndexOutOfRange { i, j, n });
    }
    Ok(())
}

/// The semigroups selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Registered {
    MinI64,
    MaxI64,
    SumU64,
    Mat2Mod251,
}

/// Name, identity and commutativity of a registered semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupInfo {
    pub name: &'static str,
    pub commutative: bool,
    /// The identity element rendered in the semigroup's token format, if one exists.
    pub identity: Option<String>,
}

/// Generic callback for code that must be monomorphized per semigroup.
pub trait SemigroupVisitor {
    type Output;
    fn visit<S>(self, sg: S) -> Self::Output
    where
        S: NamedSemigroup + Send + Sync + 'static,
        S::Elem: Send + Sync + 'static;
}

impl Registered {
    pub const ALL: [Registered; 4] = [Self::MinI64, Self::MaxI64, Self::SumU64, Self::Mat2Mod251];

    pub fn dispatch<V: SemigroupVisitor>(self, visitor: V) -> V::Output {
        match self {
            Self::MinI64 => visitor.visit(MinI64),
            Self::MaxI64 => visitor.visit(MaxI64),
            Self::SumU64 => visitor.visit(SumU64),
            Self::Mat2Mod251 => visitor.visit(Mat2Mod251),
        }
    }

    pub fn name(self) -> &'static str {
        self.info().name
    }

    pub fn info(self) -> SemigroupInfo {
        struct Info;
        impl SemigroupVisitor for Info {
            type Output = SemigroupInfo;
            fn visit<S>(self, sg: S) -> SemigroupInfo
            where
                S: NamedSemigroup + Send + Sync + 'static,
                S::Elem: Send + Sync + 'static,
            {
                SemigroupInfo { name: sg.name(), commutative: sg.commutative(), identity: Some(sg.format(&sg.unit())) }
            }
        }
        self.dispatch(Info)
    }
}

/// Looks up a registered semigroup by name.
pub fn registry_lookup(name: &str) -> Result<Registered, Error> {
    Registered::ALL.into_iter().find(|r| r.name() == name).ok_or_else(|| Error::UnknownSemigroup(name.to_string()))
}
