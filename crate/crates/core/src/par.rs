//! Iterators that are parallel with the `parallel` feature and sequential without it.
//!
//! Call sites use one spelling (`maybe_par_iter`, `into_maybe_par_iter`) and get
//! rayon or `std` depending on the build. Results are always collected in input
//! order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::iter::{IntoParallelIterator, IntoParallelRefIterator, ParallelIterator};

pub trait IntoMaybeParallelIterator {
    #[cfg(feature = "parallel")]
    type Iter: ParallelIterator<Item = Self::Item>;
    #[cfg(not(feature = "parallel"))]
    type Iter: Iterator<Item = Self::Item>;

    #[cfg(feature = "parallel")]
    type Item: Send;
    #[cfg(not(feature = "parallel"))]
    type Item;

    fn into_maybe_par_iter(self) -> Self::Iter;
}

#[cfg(feature = "parallel")]
impl<I: IntoParallelIterator> IntoMaybeParallelIterator for I {
    type Iter = I::Iter;
    type Item = I::Item;

    fn into_maybe_par_iter(self) -> Self::Iter {
        self.into_par_iter()
    }
}

#[cfg(not(feature = "parallel"))]
impl<I: IntoIterator> IntoMaybeParallelIterator for I {
    type Iter = I::IntoIter;
    type Item = I::Item;

    fn into_maybe_par_iter(self) -> Self::Iter {
        self.into_iter()
    }
}

pub trait MaybeParallelRefIterator<'data> {
    #[cfg(feature = "parallel")]
    type Iter: ParallelIterator<Item = Self::Item>;
    #[cfg(not(feature = "parallel"))]
    type Iter: Iterator<Item = Self::Item>;

    #[cfg(feature = "parallel")]
    type Item: Send + 'data;
    #[cfg(not(feature = "parallel"))]
    type Item: 'data;

    fn maybe_par_iter(&'data self) -> Self::Iter;
}

#[cfg(feature = "parallel")]
impl<'data, I: 'data + ?Sized + IntoParallelRefIterator<'data>> MaybeParallelRefIterator<'data> for I {
    type Iter = I::Iter;
    type Item = I::Item;

    fn maybe_par_iter(&'data self) -> Self::Iter {
        self.par_iter()
    }
}

#[cfg(not(feature = "parallel"))]
impl<'data, I: 'data + ?Sized> MaybeParallelRefIterator<'data> for I
where
    &'data I: IntoIterator,
{
    type Iter = <&'data I as IntoIterator>::IntoIter;
    type Item = <&'data I as IntoIterator>::Item;

    fn maybe_par_iter(&'data self) -> Self::Iter {
        self.into_iter()
    }
}

/// Runs two closures, concurrently when the `parallel` feature is on.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    {
        rayon::join(a, b)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (a(), b())
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
