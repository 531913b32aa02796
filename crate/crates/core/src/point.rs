//! Dense points in decision space and cost space.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// A dense vector of `f64` coordinates.
///
/// Used both for decision points `x` and cost vectors `c`; the two live in
/// the same dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.dot(self))
    }

    pub fn dist(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = 0.0;
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let d = a - b;
            acc += d * d;
        }
        math::sqrt(acc)
    }

    /// Returns `self + step * (other - self)`.
    pub fn lerp(&self, other: &Self, step: f64) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + step * (b - a))
            .collect();
        Self { coords }
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl core::ops::Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_norm_dist() {
        let a = Point::new(vec![3.0, 4.0]);
        let b = Point::new(vec![0.0, 0.0]);
        assert_eq!(a.dot(&a), 25.0);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.dist(&b), 5.0);
    }

    #[test]
    fn lerp_endpoints() {
        let a = Point::new(vec![1.0, 2.0]);
        let b = Point::new(vec![3.0, -2.0]);
        assert_eq!(a.lerp(&b, 0.0), a);
        assert_eq!(a.lerp(&b, 1.0), b);
        assert_eq!(a.lerp(&b, 0.5), Point::new(vec![2.0, 0.0]));
    }
}
