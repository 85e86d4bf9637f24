//! Emptiness of the BNS invariant of `⟨a, b | R⟩` by lattice-path tracing.
//!
//! The relator is walked in `Z²` letter by letter (`a` = +x, `b` = +y, no
//! simplification). On the boundary of the convex hull of the visited
//! points, a vertex is *simple* when the walk passes through it exactly
//! once, and a horizontal or vertical hull edge is *special* when both of
//! its endpoints are simple. The invariant is empty iff there is no simple
//! vertex and no special edge whose supporting line meets the hull in that
//! edge alone.
//!
//! Only the empty/nonempty decision and its certificate are computed; the
//! arcs of the invariant are not.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{CyclicWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BnsError {
    #[error("relator has exponent sums {0:?}; tracing needs trivial abelianization (0, 0)")]
    NonzeroExponentSums((i64, i64)),
    #[error("visited points are collinear or too few for a convex polygon")]
    DegenerateHull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    fn step(self, letter: Letter) -> Point {
        let (dx, dy) = match letter {
            Letter::A => (1, 0),
            Letter::AInv => (-1, 0),
            Letter::B => (0, 1),
            Letter::BInv => (0, -1),
        };
        Point::new(self.x + dx, self.y + dy)
    }
}

/// `(b - o) × (c - o)`; positive for a left turn.
fn cross(o: Point, b: Point, c: Point) -> i64 {
    (b.x - o.x) * (c.y - o.y) - (b.y - o.y) * (c.x - o.x)
}

/// The closed walk `s_0 = (0,0), s_1, …, s_L = s_0` traced by a relator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePath {
    pub points: Vec<Point>,
}

impl LatticePath {
    /// Number of steps `L`.
    pub fn len(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The points `s_0 … s_{L-1}`; the closing point is not repeated.
    pub fn cyclic_points(&self) -> &[Point] {
        &self.points[..self.len().max(1).min(self.points.len())]
    }

    /// Visit count of every visited point over `s_0 … s_{L-1}`.
    pub fn multiplicities(&self) -> BTreeMap<Point, usize> {
        let mut m = BTreeMap::new();
        for p in self.cyclic_points() {
            *m.entry(*p).or_insert(0) += 1;
        }
        m
    }
}

pub fn trace_path(r: &CyclicWord) -> Result<LatticePath, BnsError> {
    let sums = r.exponent_sums();
    if sums != (0, 0) {
        return Err(BnsError::NonzeroExponentSums(sums));
    }
    let mut points = Vec::with_capacity(r.len() + 1);
    let mut at = Point::ORIGIN;
    points.push(at);
    for &x in r.letters() {
        at = at.step(x);
        points.push(at);
    }
    debug_assert_eq!(at, Point::ORIGIN);
    Ok(LatticePath { points })
}

/// A strictly convex polygon, counterclockwise from its lexicographically
/// least vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullPolygon {
    pub vertices: Vec<Point>,
}

impl HullPolygon {
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Inside or on the boundary.
    pub fn contains(&self, p: Point) -> bool {
        self.edges().all(|(u, v)| cross(u, v, p) >= 0)
    }
}

/// Monotone-chain hull of the visited points, in exact integer arithmetic.
pub fn convex_hull(path: &LatticePath) -> Result<HullPolygon, BnsError> {
    let mut pts: Vec<Point> = path.points.clone();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(BnsError::DegenerateHull);
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(BnsError::DegenerateHull);
    }
    Ok(HullPolygon { vertices: lower })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialEdge {
    pub from: Point,
    pub to: Point,
    /// The supporting line meets the hull only in this edge.
    pub line_proviso: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVisits {
    pub vertex: Point,
    pub visits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BnsVerdict {
    pub simple_vertices: Vec<Point>,
    pub special_edges: Vec<SpecialEdge>,
    pub empty: bool,
    /// Visit counts of the hull vertices, in hull order.
    pub multiplicities: Vec<VertexVisits>,
}

/// Whether the line through `edge` meets `hull` in exactly that edge:
/// every other vertex lies strictly on one side.
fn line_meets_hull_only_in_edge(hull: &HullPolygon, (u, v): (Point, Point)) -> bool {
    let sides: Vec<i64> = hull
        .vertices
        .iter()
        .filter(|&&w| w != u && w != v)
        .map(|&w| cross(u, v, w).signum())
        .collect();
    sides.iter().all(|&s| s > 0) || sides.iter().all(|&s| s < 0)
}

/// Classifies hull vertices and edges of an already traced path.
pub fn classify_path(path: &LatticePath, hull: &HullPolygon) -> BnsVerdict {
    let visits = path.multiplicities();
    let count = |p: &Point| visits.get(p).copied().unwrap_or(0);
    let multiplicities: Vec<VertexVisits> = hull
        .vertices
        .iter()
        .map(|&vertex| VertexVisits {
            vertex,
            visits: count(&vertex),
        })
        .collect();
    let simple_vertices: Vec<Point> = hull.vertices.iter().copied().filter(|v| count(v) == 1).collect();
    let special_edges: Vec<SpecialEdge> = hull
        .edges()
        .filter(|(u, v)| (u.x == v.x || u.y == v.y) && count(u) == 1 && count(v) == 1)
        .map(|(u, v)| SpecialEdge {
            from: u,
            to: v,
            line_proviso: line_meets_hull_only_in_edge(hull, (u, v)),
        })
        .collect();
    let empty = simple_vertices.is_empty() && !special_edges.iter().any(|e| e.line_proviso);
    BnsVerdict {
        simple_vertices,
        special_edges,
        empty,
        multiplicities,
    }
}

/// Traces `r`, takes the hull and decides emptiness.
pub fn classify(r: &CyclicWord) -> Result<BnsVerdict, BnsError> {
    let path = trace_path(r)?;
    let hull = convex_hull(&path)?;
    Ok(classify_path(&path, &hull))
}
