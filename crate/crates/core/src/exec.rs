//! Data-parallel kernels: rayon when the `parallel` feature is on,
//! plain loops otherwise. Results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..len`, collecting results in index order.
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Maps `f` over the items of a slice, collecting results in order.
pub(crate) fn map_slice<'a, I, T, F>(items: &'a [I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&'a I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Like `map_range` but with per-worker scratch state.
pub(crate) fn map_range_init<T, S, FI, F>(len: usize, init: FI, f: F) -> Vec<T>
where
    T: Send,
    FI: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map_init(&init, |s, i| f(s, i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut s = init();
        (0..len).map(|i| f(&mut s, i)).collect()
    }
}

/// Applies `f` to every item of a mutable slice.
pub(crate) fn for_each_mut<I, F>(items: &mut [I], f: F)
where
    I: Send,
    F: Fn(&mut I) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter_mut().for_each(f);
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter_mut().for_each(f);
    }
}

/// Applies `f` pairwise to a mutable slice zipped with an input slice.
pub(crate) fn zip_for_each<S, I, F>(states: &mut [S], inputs: &[I], f: F)
where
    S: Send,
    I: Sync,
    F: Fn(&mut S, &I) + Sync + Send,
{
    assert_eq!(states.len(), inputs.len());
    #[cfg(feature = "parallel")]
    {
        states
            .par_iter_mut()
            .zip(inputs.par_iter())
            .for_each(|(s, i)| f(s, i));
    }
    #[cfg(not(feature = "parallel"))]
    {
        states.iter_mut().zip(inputs.iter()).for_each(|(s, i)| f(s, i));
    }
}

/// True iff `pred` holds for every index in `0..len`.
pub(crate) fn all_range<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).all(pred)
    }
}

/// True iff `pred` holds for some index in `0..len`.
pub(crate) fn any_range<F>(len: usize, pred: F) -> bool
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().any(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).any(pred)
    }
}
