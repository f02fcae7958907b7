//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for embeddings, features, distances and attributions.
///
/// Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` constant.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant representable in scalar type")
    }

    /// Conversion from a count.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("count representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Squared Euclidean distance.
pub fn squared_euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| {
            let d = x - y;
            acc + d * d
        })
}

pub fn euclidean<T: Scalar>(a: &[T], b: &[T]) -> T {
    squared_euclidean(a, b).sqrt()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Cosine similarity `x·y / sqrt(|x|²|y|²)`; `None` when either vector is zero.
///
/// Taking a single square root of the product makes `cosine_similarity(x, x)`
/// exactly one for any non-zero `x`.
pub fn cosine_similarity<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let na = dot(a, a);
    let nb = dot(b, b);
    if na == T::zero() || nb == T::zero() {
        return None;
    }
    Some(dot(a, b) / (na * nb).sqrt())
}

pub fn mean<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().copied().sum::<T>() / T::of_usize(values.len()))
    }
}

/// Population standard deviation.
pub fn std_dev<T: Scalar>(values: &[T]) -> Option<T> {
    let m = mean(values)?;
    let var = values
        .iter()
        .map(|&v| (v - m) * (v - m))
        .sum::<T>()
        / T::of_usize(values.len());
    Some(var.sqrt())
}
