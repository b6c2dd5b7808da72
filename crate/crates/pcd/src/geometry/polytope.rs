//! Bounded convex polytopes in half-space form and the generic convex
//! distance (ray clipping).

use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{Error, Result};

/// One half-space `a . x <= b`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfSpace {
    pub fn eval(&self, x: &Point) -> f64 {
        self.normal
            .iter()
            .zip(&x.coords)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            - self.offset
    }
}

/// A bounded convex polytope with a designated interior center.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polytope {
    pub halfspaces: Vec<HalfSpace>,
    pub center: Point,
}

impl Polytope {
    /// Validates that the center is strictly interior.
    pub fn new(halfspaces: Vec<HalfSpace>, center: Point, tol: f64) -> Result<Self> {
        let p = Polytope { halfspaces, center };
        for h in &p.halfspaces {
            if h.eval(&p.center) >= -tol {
                return Err(Error::DegeneratePolytope);
            }
        }
        Ok(p)
    }

    /// Convex distance from the designated center: `|z - center|` over
    /// the distance from the center to the boundary along the same ray.
    /// Computed by clipping the ray against every half-space. Zero at the
    /// center, below 1 strictly inside, 1 on the boundary.
    pub fn convex_distance(&self, z: &Point) -> f64 {
        let dir = z.sub(&self.center);
        // t_exit = largest t with center + t * dir inside the polytope.
        let mut t_exit = f64::INFINITY;
        for h in &self.halfspaces {
            let slope: f64 = h
                .normal
                .iter()
                .zip(&dir.coords)
                .map(|(a, b)| a * b)
                .sum();
            if slope > 0.0 {
                let room = -h.eval(&self.center); // > 0 by construction
                t_exit = t_exit.min(room / slope);
            }
        }
        if t_exit.is_infinite() {
            // Only possible for dir = 0 on a bounded polytope.
            return 0.0;
        }
        1.0 / t_exit
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.eval(x) <= tol)
    }
}
