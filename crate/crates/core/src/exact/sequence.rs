use std::fmt;
use std::sync::Arc;

use parking_lot::Mutex;

use super::rational::Rational;

type IndexFn<T> = Box<dyn Fn(usize) -> T + Send + Sync>;
type ScanFn<T> = Box<dyn Fn(usize, &[T]) -> T + Send + Sync>;

enum Generator<T> {
    /// Each term is a pure function of its index.
    Indexed(IndexFn<T>),
    /// Each term may look at all earlier terms.
    Scan(ScanFn<T>),
}

struct Inner<T> {
    generator: Generator<T>,
    memo: Mutex<Vec<T>>,
}

/// A deterministic, total map from naturals to values with an internal
/// prefix cache.
///
/// Clones share the generator and the cache. The cache always holds a
/// contiguous prefix; asking for index `n` fills it up to `n`.
pub struct LazySequence<T> {
    inner: Arc<Inner<T>>,
}

impl<T> Clone for LazySequence<T> {
    fn clone(&self) -> Self {
        LazySequence { inner: Arc::clone(&self.inner) }
    }
}

impl<T: Clone + Send + 'static> LazySequence<T> {
    pub fn from_fn(f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Self::with_generator(Generator::Indexed(Box::new(f)))
    }

    /// Builds a sequence whose term `n` is computed from `n` and the
    /// already-computed prefix `[0, n)`.
    pub fn scan(f: impl Fn(usize, &[T]) -> T + Send + Sync + 'static) -> Self {
        Self::with_generator(Generator::Scan(Box::new(f)))
    }

    /// The given values, then the last one repeated forever.
    ///
    /// Panics when `values` is empty.
    pub fn eventually_constant(values: Vec<T>) -> Self
    where
        T: Sync,
    {
        assert!(!values.is_empty(), "eventually_constant needs at least one value");
        let values = Arc::new(values);
        Self::from_fn(move |n| values[n.min(values.len() - 1)].clone())
    }

    fn with_generator(generator: Generator<T>) -> Self {
        LazySequence { inner: Arc::new(Inner { generator, memo: Mutex::new(Vec::new()) }) }
    }

    fn fill(&self, memo: &mut Vec<T>, upto: usize) {
        while memo.len() < upto {
            let n = memo.len();
            let value = match &self.inner.generator {
                Generator::Indexed(f) => f(n),
                Generator::Scan(f) => f(n, memo),
            };
            memo.push(value);
        }
    }

    pub fn at(&self, n: usize) -> T {
        let mut memo = self.inner.memo.lock();
        self.fill(&mut memo, n + 1);
        memo[n].clone()
    }

    /// `[seq(0), ..., seq(n-1)]`.
    pub fn prefix(&self, n: usize) -> Vec<T> {
        let mut memo = self.inner.memo.lock();
        self.fill(&mut memo, n);
        memo[..n].to_vec()
    }

    /// Runs `f` on the cached prefix of length `n` without cloning it.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[T]) -> R) -> R {
        let mut memo = self.inner.memo.lock();
        self.fill(&mut memo, n);
        f(&memo[..n])
    }

    pub fn map<U: Clone + Send + 'static>(
        &self,
        f: impl Fn(&T) -> U + Send + Sync + 'static,
    ) -> LazySequence<U>
    where
        T: Sync,
    {
        let src = self.clone();
        LazySequence::from_fn(move |n| f(&src.at(n)))
    }

    /// The sequence `n -> self(n + k)`.
    pub fn shifted(&self, k: usize) -> Self
    where
        T: Sync,
    {
        let src = self.clone();
        LazySequence::from_fn(move |n| src.at(n + k))
    }

    /// Number of cached terms (for tests and diagnostics).
    pub fn cached_len(&self) -> usize {
        self.inner.memo.lock().len()
    }
}

impl<T: fmt::Debug> fmt::Debug for LazySequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memo = self.inner.memo.lock();
        f.debug_struct("LazySequence").field("cached", &memo.len()).finish()
    }
}

/// Rational-valued sequence: the carrier of names and approximation sequences.
pub type IndexedSequence = LazySequence<Rational>;

impl IndexedSequence {
    pub fn constant(value: Rational) -> Self {
        Self::from_fn(move |_| value.clone())
    }

    /// Literal prefix, extended by repeating its last element.
    pub fn literal(values: Vec<Rational>) -> Self {
        Self::eventually_constant(values)
    }

    /// `s -> 2^{-s}`.
    pub fn geometric() -> Self {
        Self::from_fn(|s| Rational::pow2(-(s as i64)))
    }

    pub fn pointwise(
        a: &IndexedSequence,
        b: &IndexedSequence,
        op: impl Fn(&Rational, &Rational) -> Rational + Send + Sync + 'static,
    ) -> IndexedSequence {
        let (a, b) = (a.clone(), b.clone());
        Self::from_fn(move |n| op(&a.at(n), &b.at(n)))
    }
}

/// A rho-name: a sequence that stays within `2^{-s}` of a real at index `s`.
///
/// `value` is the represented real when it is known exactly; for names
/// supplied from outside it is `None` and the contract is assumed.
#[derive(Clone, Debug)]
pub struct Name {
    pub seq: IndexedSequence,
    pub value: Option<Rational>,
}

impl Name {
    pub fn new(seq: IndexedSequence, value: Option<Rational>) -> Self {
        Name { seq, value }
    }

    /// A name that wobbles around `x` inside the allowed error: term `s` is
    /// `x + (-1)^s 2^{-(s+1)}`.
    pub fn alternating(x: Rational) -> Name {
        let center = x.clone();
        let seq = IndexedSequence::from_fn(move |s| {
            let off = Rational::pow2(-(s as i64) - 1);
            if s % 2 == 0 {
                &center + off
            } else {
                &center - off
            }
        });
        Name::new(seq, Some(x))
    }

    /// A name approaching `x` from below through dyadic truncations
    /// `floor(x 2^{s}) / 2^{s}`.
    pub fn dyadic_truncations(x: Rational) -> Name {
        let center = x.clone();
        let seq = IndexedSequence::from_fn(move |s| {
            let scale = Rational::pow2(s as i64);
            let scaled = &center * &scale;
            let floor = scaled.inner().floor();
            Rational::from(floor) / scale
        });
        Name::new(seq, Some(x))
    }

    /// Checks `|x - seq(s)| <= 2^{-s}` for `s < depth`; returns the first
    /// index breaking it. Names without a known value always pass.
    pub fn audit(&self, depth: usize) -> Option<usize> {
        let x = self.value.as_ref()?;
        self.seq.with_prefix(depth, |terms| {
            terms.iter().enumerate().position(|(s, t)| (x - t).abs() > Rational::pow2(-(s as i64)))
        })
    }
}

/// The name whose every term is `r`.
pub fn constant_name(r: Rational) -> Name {
    Name::new(IndexedSequence::constant(r.clone()), Some(r))
}
