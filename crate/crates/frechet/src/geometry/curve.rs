use crate::error::{Error, Result};

/// A point in `R^d` for arbitrary `d >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Point {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }
}

/// 2D convenience constructor, used all over the tests.
#[cfg(test)]
pub(crate) fn pt2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y])
}

/// An oriented segment borrowing its endpoints. Construction rejects
/// zero-length segments, so downstream code can divide by the squared length.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    start: &'a Point,
    end: &'a Point,
}

impl<'a> Segment<'a> {
    pub fn new(start: &'a Point, end: &'a Point) -> Result<Segment<'a>> {
        if start.dim() != end.dim() {
            return Err(Error::DimensionMismatch(start.dim(), end.dim()));
        }
        if start == end {
            return Err(Error::DegenerateSegment);
        }
        Ok(Segment { start, end })
    }

    pub fn start(&self) -> &Point {
        self.start
    }

    pub fn end(&self) -> &Point {
        self.end
    }

    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    pub fn len_sq(&self) -> f64 {
        self.start.dist_sq(self.end)
    }

    /// Point at parameter `t` (0 = start, 1 = end). Allocates; used by oracles
    /// and rendering, not by the inner DP loops.
    pub fn at(&self, t: f64) -> Point {
        let coords = self
            .start
            .coords()
            .iter()
            .zip(self.end.coords())
            .map(|(a, b)| a + t * (b - a))
            .collect();
        Point::new(coords)
    }
}

/// A polygonal curve: at least one vertex, all of one dimension, no two
/// consecutive vertices equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    vertices: Vec<Point>,
}

impl Curve {
    pub fn new(vertices: Vec<Point>) -> Result<Curve> {
        let first = vertices.first().ok_or(Error::EmptyCurve)?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::MixedDimensions {
                index: 0,
                got: 0,
                expected: 1,
            });
        }
        for (index, v) in vertices.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::MixedDimensions {
                    index,
                    got: v.dim(),
                    expected: dim,
                });
            }
            if v.coords().iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index });
            }
            if index > 0 && vertices[index - 1] == *v {
                return Err(Error::DuplicateVertex { index });
            }
        }
        Ok(Curve { dim, vertices })
    }

    pub fn from_coords(dim: usize, flat: &[f64]) -> Result<Curve> {
        assert!(dim >= 1 && flat.len() % dim == 0);
        let vertices = flat
            .chunks(dim)
            .map(|c| Point::new(c.to_vec()))
            .collect();
        Curve::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one vertex
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Edge `e` joins vertices `e` and `e+1` (0-based). The curve invariant
    /// guarantees the segment is non-degenerate.
    pub fn edge(&self, e: usize) -> Segment<'_> {
        Segment {
            start: &self.vertices[e],
            end: &self.vertices[e + 1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_rejects_duplicate_consecutive_vertices() {
        let err = Curve::new(vec![pt2(0.0, 0.0), pt2(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex { index: 1 }));
    }

    #[test]
    fn curve_rejects_mixed_dimensions() {
        let err = Curve::new(vec![pt2(0.0, 0.0), Point::new(vec![1.0])]).unwrap_err();
        assert!(matches!(err, Error::MixedDimensions { index: 1, .. }));
    }

    #[test]
    fn curve_rejects_empty_and_non_finite() {
        assert!(matches!(Curve::new(vec![]), Err(Error::EmptyCurve)));
        let err = Curve::new(vec![pt2(f64::NAN, 0.0), pt2(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteCoordinate { index: 0 }));
    }

    #[test]
    fn segment_rejects_zero_length() {
        let p = pt2(1.0, 2.0);
        let q = pt2(1.0, 2.0);
        assert!(matches!(
            Segment::new(&p, &q),
            Err(Error::DegenerateSegment)
        ));
    }

    #[test]
    fn single_vertex_curve_is_valid() {
        let c = Curve::new(vec![pt2(3.0, 4.0)]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.edge_count(), 0);
    }
}
