//! Data-parallel helpers. With the `parallel` feature off every helper runs
//! sequentially; results are identical because all reductions are exact.

use crate::arith::Rational;
use num_traits::Zero;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn sum<T, F>(items: &[T], f: F) -> Rational
where
    T: Sync,
    F: Fn(&T) -> Rational + Sync + Send,
{
    items.par_iter().map(f).reduce(Rational::zero, |a, b| a + b)
}

#[cfg(not(feature = "parallel"))]
pub fn sum<T, F>(items: &[T], f: F) -> Rational
where
    F: Fn(&T) -> Rational,
{
    items.iter().map(f).fold(Rational::zero(), |a, b| a + b)
}

/// Number of worker threads the helpers will use.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Run `f` inside a pool of `n` threads (ignored without `parallel`).
pub fn with_threads<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        f()
    }
}
