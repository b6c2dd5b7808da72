//! Points in `R^d`.

use serde::{Deserialize, Serialize};

/// A point in `R^d`. Coordinates are plain `f64`s; datasets reject
/// non-finite entries at ingestion so geometry can assume finiteness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Point {
        Point::new(self.coords.iter().map(|a| a * s).collect())
    }

    /// `self + s * dir`.
    pub fn add_scaled(&self, dir: &Point, s: f64) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&dir.coords)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl From<&[f64]> for Point {
    fn from(coords: &[f64]) -> Self {
        Point::new(coords.to_vec())
    }
}

/// Component-wise mean of a non-empty set of points.
pub fn centroid<'a, I: IntoIterator<Item = &'a Point>>(points: I) -> Point {
    let mut iter = points.into_iter();
    let first = iter.next().expect("centroid of empty point set");
    let mut acc = first.coords.clone();
    let mut n = 1usize;
    for p in iter {
        for (a, b) in acc.iter_mut().zip(&p.coords) {
            *a += b;
        }
        n += 1;
    }
    for a in acc.iter_mut() {
        *a /= n as f64;
    }
    Point::new(acc)
}

/// Index of the minimum value, lowest index on ties.
pub fn argmin_by_key<T, F: Fn(&T) -> f64>(items: &[T], key: F) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, item) in items.iter().enumerate() {
        let v = key(item);
        match best {
            Some((_, bv)) if v >= bv => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_of_triangle() {
        let pts = vec![
            Point::new(vec![0.0, 0.0]),
            Point::new(vec![1.0, 0.0]),
            Point::new(vec![0.0, 1.0]),
        ];
        let c = centroid(&pts);
        assert!((c.coords[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.coords[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn argmin_breaks_ties_low() {
        let v = [3.0, 1.0, 1.0, 2.0];
        assert_eq!(argmin_by_key(&v, |x| *x), Some(1));
    }
}
