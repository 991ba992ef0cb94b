//! Reference geometry of the pressureless limit of four interacting planar
//! contact discontinuities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VortexSign {
    /// All four vortex sheets of one sign; the limit contains a vacuum.
    Same,
    /// Sheets of both signs; the limit contains delta-shocks.
    Opposite,
}

/// Density and velocity of one quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    /// Constant state of quadrant `1..=4`.
    Corner(usize),
    Vacuum,
    /// Covered by two translated quadrants: the delta-shock neighbourhood.
    NearSupport,
    /// On a translated quadrant edge.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressurelessReference {
    pub sign: VortexSign,
    /// Quadrants 1 (x > x0, y > y0) to 4 (x > x0, y < y0), counterclockwise.
    pub corners: [CornerState; 4],
    pub x0: f64,
    pub y0: f64,
}

impl PressurelessReference {
    pub fn new(sign: VortexSign, corners: [CornerState; 4], x0: f64, y0: f64) -> Result<Self> {
        let [q1, q2, q3, q4] = corners;
        let shear = q1.u == q2.u && q3.u == q4.u && q2.v == q3.v && q1.v == q4.v;
        let ordered = match sign {
            VortexSign::Same => q1.u > q3.u && q2.v > q1.v,
            VortexSign::Opposite => q3.u > q1.u && q2.v > q1.v,
        };
        if !shear || !ordered || corners.iter().any(|c| !(c.rho > 0.0)) {
            return Err(Error::Config(format!("corner data violate the {sign:?}-sign ordering")));
        }
        Ok(PressurelessReference { sign, corners, x0, y0 })
    }

    /// Classifies the similarity point `(xi, eta)`: each quadrant translates
    /// rigidly with its own velocity.
    pub fn classify_similarity(&self, xi: f64, eta: f64) -> Region {
        let [q1, q2, q3, q4] = self.corners;
        let edges = [
            (xi - q1.u, eta - q1.v),
            (q2.u - xi, eta - q2.v),
            (q3.u - xi, q3.v - eta),
            (xi - q4.u, q4.v - eta),
        ];
        if edges.iter().any(|&(a, b)| (a == 0.0 && b >= 0.0) || (b == 0.0 && a >= 0.0)) {
            return Region::Boundary;
        }
        let covering: Vec<usize> = (0..4).filter(|&k| edges[k].0 > 0.0 && edges[k].1 > 0.0).collect();
        match covering.len() {
            0 => Region::Vacuum,
            1 => Region::Corner(covering[0] + 1),
            _ => Region::NearSupport,
        }
    }

    pub fn classify(&self, x: f64, y: f64, t: f64) -> Region {
        self.classify_similarity((x - self.x0) / t, (y - self.y0) / t)
    }

    /// The rectangle of similarity coordinates spanned by the four velocity
    /// points: the vacuum pyramid (same sign) or the delta-shock region.
    pub fn central_rectangle(&self) -> ((f64, f64), (f64, f64)) {
        let us = self.corners.map(|c| c.u);
        let vs = self.corners.map(|c| c.v);
        let min = |a: [f64; 4]| a.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = |a: [f64; 4]| a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        ((min(us), max(us)), (min(vs), max(vs)))
    }

    /// Strength `sqrt(rho1 rho3)` of the delta-shock.
    pub fn delta_strength(&self) -> Option<f64> {
        match self.sign {
            VortexSign::Same => None,
            VortexSign::Opposite => Some((self.corners[0].rho * self.corners[2].rho).sqrt()),
        }
    }

    /// Density of the limit at `(x, y, t)`; `None` on the singular support
    /// and on boundaries.
    pub fn density(&self, x: f64, y: f64, t: f64) -> Option<f64> {
        match self.classify(x, y, t) {
            Region::Corner(k) => Some(self.corners[k - 1].rho),
            Region::Vacuum => Some(0.0),
            Region::NearSupport | Region::Boundary => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(rho: f64, u: f64, v: f64) -> CornerState {
        CornerState { rho, u, v }
    }

    fn same() -> PressurelessReference {
        PressurelessReference::new(
            VortexSign::Same,
            [c(1.0, 0.75, -0.5), c(2.0, 0.75, 0.5), c(1.0, -0.75, 0.5), c(3.0, -0.75, -0.5)],
            0.5,
            0.5,
        )
        .unwrap()
    }

    fn opposite() -> PressurelessReference {
        PressurelessReference::new(
            VortexSign::Opposite,
            [c(1.0, -0.75, -0.5), c(2.0, -0.75, 0.5), c(1.0, 0.75, 0.5), c(3.0, 0.75, -0.5)],
            0.5,
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn vertices_are_boundaries() {
        let r = same();
        for q in r.corners {
            assert_eq!(r.classify_similarity(q.u, q.v), Region::Boundary);
        }
    }

    #[test]
    fn deep_quadrants_and_vacuum() {
        let r = same();
        assert_eq!(r.classify(0.95, 0.95, 0.1), Region::Corner(1));
        assert_eq!(r.classify(0.05, 0.95, 0.1), Region::Corner(2));
        assert_eq!(r.classify(0.05, 0.05, 0.1), Region::Corner(3));
        assert_eq!(r.classify(0.95, 0.05, 0.1), Region::Corner(4));
        assert_eq!(r.classify(0.5, 0.5, 0.1), Region::Vacuum);
        assert_eq!(r.density(0.51, 0.49, 0.2), Some(0.0));
    }

    #[test]
    fn opposite_centre_is_the_delta_region() {
        let r = opposite();
        assert_eq!(r.classify(0.5, 0.5, 0.1), Region::NearSupport);
        assert_eq!(r.delta_strength(), Some(1.0));
        assert_eq!(r.classify(0.95, 0.95, 0.1), Region::Corner(1));
    }

    #[test]
    fn ordering_is_enforced() {
        let bad = [c(1.0, -0.75, -0.5), c(2.0, -0.75, 0.5), c(1.0, 0.75, 0.5), c(3.0, 0.75, -0.5)];
        assert!(PressurelessReference::new(VortexSign::Same, bad, 0.5, 0.5).is_err());
    }

    #[test]
    fn every_point_is_classified_once() {
        let r = same();
        let mut counts = [0usize; 4];
        for i in 0..200 {
            for j in 0..200 {
                let (xi, eta) = (-2.0 + 0.0201 * i as f64, -2.0 + 0.0201 * j as f64);
                let k = match r.classify_similarity(xi, eta) {
                    Region::Corner(_) => 0,
                    Region::Vacuum => 1,
                    Region::NearSupport => 2,
                    Region::Boundary => 3,
                };
                counts[k] += 1;
            }
        }
        assert_eq!(counts[2], 0);
        assert!(counts[1] > 0 && counts[0] > 0);
    }
}
