//! Lazy solution streams with depth-first, clause-order enumeration.
//!
//! A [`Stream`] is an iterator of answers. Alternatives are explored in order
//! and nothing is computed until the consumer asks for the next answer, so
//! streams over infinite search spaces are fine as long as only a finite
//! prefix is demanded.

use std::iter;

pub struct Stream<'a, T>(Box<dyn Iterator<Item = T> + 'a>);

impl<'a, T: 'a> Stream<'a, T> {
    pub fn new(it: impl Iterator<Item = T> + 'a) -> Self {
        Stream(Box::new(it))
    }

    pub fn empty() -> Self {
        Stream::new(iter::empty())
    }

    pub fn once(x: T) -> Self {
        Stream::new(iter::once(x))
    }

    /// Built on first demand.
    pub fn lazy(f: impl FnOnce() -> Stream<'a, T> + 'a) -> Self {
        Stream::new(Lazy::Pending(Some(Box::new(f))))
    }

    /// All answers of `self`, then all answers of `other`. `other` is not
    /// constructed until `self` is exhausted.
    pub fn disj(self, other: impl FnOnce() -> Stream<'a, T> + 'a) -> Self {
        Stream::new(self.0.chain(Stream::lazy(other)))
    }

    /// Depth-first conjunction: every answer of `f(x)` is produced before the
    /// next `x` is pulled from `self`.
    pub fn bind<U: 'a>(self, f: impl FnMut(T) -> Stream<'a, U> + 'a) -> Stream<'a, U> {
        Stream::new(self.0.flat_map(f))
    }

    /// Keeps the first answer and discards the remaining alternatives.
    pub fn commit(self) -> Self {
        Stream::new(self.0.take(1))
    }

    pub fn take_vec(self, n: usize) -> Vec<T> {
        self.0.take(n).collect()
    }
}

impl<'a, T> Iterator for Stream<'a, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        self.0.next()
    }
}

impl<'a, T: 'a> FromIterator<T> for Stream<'a, T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let items: Vec<T> = iter.into_iter().collect();
        Stream::new(items.into_iter())
    }
}

type Thunk<'a, T> = Box<dyn FnOnce() -> Stream<'a, T> + 'a>;

enum Lazy<'a, T> {
    Pending(Option<Thunk<'a, T>>),
    Forced(Stream<'a, T>),
}

impl<'a, T> Iterator for Lazy<'a, T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        if let Lazy::Pending(f) = self {
            let f = f.take().expect("thunk forced twice");
            *self = Lazy::Forced(f());
        }
        match self {
            Lazy::Forced(s) => s.next(),
            Lazy::Pending(_) => unreachable!(),
        }
    }
}
