use std::fmt;
use std::sync::Arc;

use crate::exact::{IndexedSequence, Rational};

/// A type-2 machine seen from outside: a prefix function plus the amount of
/// input it reads.
pub trait Machine: Send + Sync {
    /// Number of input terms read to produce `n` outputs. Non-decreasing.
    fn usage(&self, n: usize) -> usize;

    /// The first `n` outputs, given exactly `usage(n)` input terms.
    fn step(&self, input: &[Rational], n: usize) -> Vec<Rational>;
}

/// Shared handle to a [`Machine`].
///
/// [`StreamTransformer::step`] hands the machine only the first `usage(n)`
/// input terms, so a machine cannot depend on more than it declares.
#[derive(Clone)]
pub struct StreamTransformer {
    inner: Arc<dyn Machine>,
}

impl fmt::Debug for StreamTransformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StreamTransformer").finish_non_exhaustive()
    }
}

struct FnMachine<U, S> {
    usage: U,
    step: S,
}

impl<U, S> Machine for FnMachine<U, S>
where
    U: Fn(usize) -> usize + Send + Sync,
    S: Fn(&[Rational], usize) -> Vec<Rational> + Send + Sync,
{
    fn usage(&self, n: usize) -> usize {
        (self.usage)(n)
    }

    fn step(&self, input: &[Rational], n: usize) -> Vec<Rational> {
        (self.step)(input, n)
    }
}

impl StreamTransformer {
    pub fn new(machine: impl Machine + 'static) -> Self {
        StreamTransformer { inner: Arc::new(machine) }
    }

    pub fn from_fns(
        usage: impl Fn(usize) -> usize + Send + Sync + 'static,
        step: impl Fn(&[Rational], usize) -> Vec<Rational> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FnMachine { usage, step })
    }

    /// Ignores its input and emits `outputs(s)`.
    pub fn constant_stream(outputs: IndexedSequence) -> Self {
        Self::from_fns(|_| 0, move |_, n| outputs.prefix(n))
    }

    pub fn usage(&self, n: usize) -> usize {
        self.inner.usage(n)
    }

    /// Runs on a finite input prefix, which must be at least `usage(n)` long.
    pub fn step(&self, input: &[Rational], n: usize) -> Vec<Rational> {
        let k = self.inner.usage(n);
        assert!(input.len() >= k, "machine needs {k} input terms for {n} outputs, got {}", input.len());
        let out = self.inner.step(&input[..k], n);
        debug_assert_eq!(out.len(), n);
        out
    }

    /// The first `n` outputs on an input stream.
    pub fn run(&self, input: &IndexedSequence, n: usize) -> Vec<Rational> {
        let k = self.inner.usage(n);
        input.with_prefix(k, |p| self.inner.step(p, n))
    }

    /// The whole output stream, computed lazily.
    pub fn outputs(&self, input: &IndexedSequence) -> IndexedSequence {
        let (m, input) = (self.clone(), input.clone());
        IndexedSequence::from_fn(move |s| m.run(&input, s + 1).pop().expect("machine returned no output"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::constant_name;

    #[test]
    fn step_truncates_input() {
        // echoes its input, reading one term per output
        let echo = StreamTransformer::from_fns(|n| n, |p, n| p[..n].to_vec());
        let input: Vec<Rational> = (0..5).map(Rational::from).collect();
        assert_eq!(echo.step(&input, 3), input[..3].to_vec());
        let name = IndexedSequence::from_fn(|s| Rational::from(s as i64));
        assert_eq!(echo.outputs(&name).prefix(4), input[..4].to_vec());
    }

    #[test]
    #[should_panic(expected = "input terms")]
    fn short_input_rejected() {
        let echo = StreamTransformer::from_fns(|n| n, |p, n| p[..n].to_vec());
        echo.step(&[Rational::one()], 2);
    }

    #[test]
    fn constant_stream_reads_nothing() {
        let m = StreamTransformer::constant_stream(IndexedSequence::geometric());
        assert_eq!(m.usage(10), 0);
        let out = m.run(&constant_name(Rational::one()).seq, 3);
        assert_eq!(out, IndexedSequence::geometric().prefix(3));
    }
}
