//! Convex planar polygons with exact rational vertices, starting at (0, 0)
//! for every polygon built in this crate.

use std::fmt;

use num_traits::Zero;

use crate::{Error, Rational, Result};

pub type Point = (Rational, Rational);

/// A lower convex polygon: x strictly increasing, slopes strictly increasing.
///
/// For a Newton polygon the horizontal length of the side with slope s is
/// the number of reciprocal roots whose ord_q equals s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Lower convex hull of a point set. Points sharing an x keep the lowest;
    /// collinear interior points are absorbed into segments.
    pub fn lower_hull(points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("empty point set".into()));
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup_by(|later, earlier| later.0 == earlier.0);
        let mut hull: Vec<Point> = Vec::with_capacity(pts.len());
        for pt in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // drop b unless it is strictly below segment a -> pt
                if cross(a, b, pt) <= Rational::zero() {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        Ok(Polygon { vertices: hull })
    }

    /// Builds from a vertex list, normalizing it through the hull.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        Self::lower_hull(&vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    /// Ordinate at x, by interpolation; None outside the x-range.
    pub fn ordinate(&self, x: Rational) -> Option<Rational> {
        let v = &self.vertices;
        if x < v[0].0 || x > v[v.len() - 1].0 {
            return None;
        }
        for w in v.windows(2) {
            let (a, b) = (w[0], w[1]);
            if x <= b.0 {
                return Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0));
            }
        }
        Some(v[v.len() - 1].1)
    }

    /// (slope, horizontal length) per side, in increasing slope order.
    pub fn sides(&self) -> Vec<(Rational, Rational)> {
        self.vertices
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0), w[1].0 - w[0].0))
            .collect()
    }

    /// Interior vertices: those followed and preceded by a side.
    pub fn break_points(&self) -> Vec<Point> {
        let v = &self.vertices;
        if v.len() < 3 {
            return Vec::new();
        }
        v[1..v.len() - 1].to_vec()
    }

    /// Whether every point of `other`'s domain lies on or above `self`.
    pub fn lies_below(&self, other: &Polygon) -> bool {
        other
            .vertices
            .iter()
            .chain(&self.vertices)
            .all(|&(x, _)| match (self.ordinate(x), other.ordinate(x)) {
                (Some(a), Some(b)) => a <= b,
                _ => true,
            })
    }

    /// Two-column "x y" text, one vertex per line.
    pub fn to_columns(&self) -> String {
        self.vertices
            .iter()
            .map(|(x, y)| format!("{} {}\n", x, y))
            .collect()
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

fn cross(a: Point, b: Point, c: Point) -> Rational {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

pub fn int_point(x: i64, y: i64) -> Point {
    (Rational::from_integer(x), Rational::from_integer(y))
}
