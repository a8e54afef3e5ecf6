//! Axis-aligned boxes: detection bounding boxes and the annotated tissue
//! region used by the distance-to-tissue proxy.

use serde::{Deserialize, Serialize};

/// Detector bounding box in pixel coordinates with a confidence score.
///
/// Well-formed boxes satisfy `x_min <= x_max`, `y_min <= y_max`, all
/// coordinates finite, and `confidence` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
    /// Detector confidence in `[0, 1]`.
    pub confidence: f64,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64, confidence: f64) -> BoundingBox {
        BoundingBox { x_min, y_min, x_max, y_max, confidence }
    }

    /// Whether the box is geometrically valid and its confidence in range.
    pub fn is_well_formed(&self) -> bool {
        [self.x_min, self.y_min, self.x_max, self.y_max, self.confidence]
            .iter()
            .all(|v| v.is_finite())
            && self.x_min <= self.x_max
            && self.y_min <= self.y_max
            && (0.0..=1.0).contains(&self.confidence)
    }

    /// Center point `(x, y)`.
    pub fn center(&self) -> (f64, f64) {
        ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// Axis-aligned rectangle marking the tissue/wound area of a recording,
/// in the same pixel coordinates as the detections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TissueRegion {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl TissueRegion {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> TissueRegion {
        TissueRegion { x_min, y_min, x_max, y_max }
    }

    /// Whether the rectangle is geometrically valid.
    pub fn is_well_formed(&self) -> bool {
        [self.x_min, self.y_min, self.x_max, self.y_max].iter().all(|v| v.is_finite())
            && self.x_min <= self.x_max
            && self.y_min <= self.y_max
    }

    /// Euclidean distance from `(x, y)` to the nearest point of the
    /// rectangle; zero for points inside or on the boundary.
    pub fn distance_to_point(&self, x: f64, y: f64) -> f64 {
        let dx = (self.x_min - x).max(0.0).max(x - self.x_max);
        let dy = (self.y_min - y).max(0.0).max(y - self.y_max);
        dx.hypot(dy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_well_formedness() {
        assert!(BoundingBox::new(0.0, 0.0, 10.0, 5.0, 0.9).is_well_formed());
        assert!(BoundingBox::new(3.0, 3.0, 3.0, 3.0, 0.0).is_well_formed());
        assert!(!BoundingBox::new(10.0, 0.0, 0.0, 5.0, 0.9).is_well_formed());
        assert!(!BoundingBox::new(0.0, 5.0, 10.0, 0.0, 0.9).is_well_formed());
        assert!(!BoundingBox::new(0.0, 0.0, 10.0, 5.0, 1.1).is_well_formed());
        assert!(!BoundingBox::new(f64::NAN, 0.0, 10.0, 5.0, 0.9).is_well_formed());
    }

    #[test]
    fn box_center_and_extent() {
        let b = BoundingBox::new(10.0, 20.0, 30.0, 60.0, 0.8);
        assert_eq!(b.center(), (20.0, 40.0));
        assert_eq!(b.width(), 20.0);
        assert_eq!(b.height(), 40.0);
    }

    #[test]
    fn tissue_distance_is_zero_inside_and_on_the_boundary() {
        let r = TissueRegion::new(10.0, 10.0, 20.0, 20.0);
        assert_eq!(r.distance_to_point(15.0, 15.0), 0.0);
        assert_eq!(r.distance_to_point(10.0, 10.0), 0.0);
        assert_eq!(r.distance_to_point(20.0, 15.0), 0.0);
    }

    #[test]
    fn tissue_distance_clamps_to_edges_and_corners() {
        let r = TissueRegion::new(10.0, 10.0, 20.0, 20.0);
        // Straight out from an edge: distance along one axis only.
        assert_eq!(r.distance_to_point(25.0, 15.0), 5.0);
        assert_eq!(r.distance_to_point(15.0, 2.0), 8.0);
        // Past a corner: Euclidean distance to the corner (3-4-5 triangle).
        assert_eq!(r.distance_to_point(23.0, 24.0), 5.0);
        assert_eq!(r.distance_to_point(6.0, 7.0), 5.0);
    }
}
