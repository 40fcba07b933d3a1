//! Exact integer geometry: orientation, segment intersection, point location,
//! polygon simplicity and the two crossing counters behind the fitness.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest admissible absolute coordinate. Keeps every cross product of
/// coordinate differences inside `i64`.
pub const COORD_LIMIT: i64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("coordinate ({0}, {1}) outside [-{COORD_LIMIT}, {COORD_LIMIT}]")]
    OutOfBounds(i64, i64),
    #[error("zero-length segment at ({0}, {1})")]
    DegenerateSegment(i64, i64),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("cycle needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn in_bounds(self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    pub fn dist(self, other: Point) -> f64 {
        let dx = (self.x - other.x) as f64;
        let dy = (self.y - other.y) as f64;
        dx.hypot(dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// A closed straight segment with distinct endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeomError> {
        if a == b {
            return Err(GeomError::DegenerateSegment(a.x, a.y));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn reversed(&self) -> Segment {
        Segment { a: self.b, b: self.a }
    }

    pub fn intersects(&self, other: &Segment) -> bool {
        segments_intersect(self, other)
    }
}

/// Turn direction of `p -> q -> r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

#[inline]
fn cross(p: Point, q: Point, r: Point) -> i64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

#[inline]
pub fn orient(p: Point, q: Point, r: Point) -> Orientation {
    match cross(p, q, r).cmp(&0) {
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
        Ordering::Greater => Orientation::CounterClockwise,
    }
}

/// `r` is inside the axis-aligned box spanned by `p` and `q`.
#[inline]
fn in_box(p: Point, q: Point, r: Point) -> bool {
    p.x.min(q.x) <= r.x && r.x <= p.x.max(q.x) && p.y.min(q.y) <= r.y && r.y <= p.y.max(q.y)
}

/// Closed-segment intersection on raw endpoints: proper crossings, endpoint
/// touches and collinear overlaps all count.
#[inline]
pub(crate) fn raw_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return false;
    }
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if d1 != d2
        && d3 != d4
        && d1 != Orientation::Collinear
        && d2 != Orientation::Collinear
        && d3 != Orientation::Collinear
        && d4 != Orientation::Collinear
    {
        return true;
    }
    (d1 == Orientation::Collinear && in_box(a, b, c))
        || (d2 == Orientation::Collinear && in_box(a, b, d))
        || (d3 == Orientation::Collinear && in_box(c, d, a))
        || (d4 == Orientation::Collinear && in_box(c, d, b))
}

/// `p` lies on the closed segment `a`-`b`.
#[inline]
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == Orientation::Collinear && in_box(a, b, p)
}

/// Two segments sharing endpoint `shared` overlap beyond it (a 180 degree fold).
#[inline]
pub(crate) fn folds_at(prev: Point, shared: Point, next: Point) -> bool {
    if cross(prev, shared, next) != 0 {
        return false;
    }
    let (ux, uy) = (prev.x - shared.x, prev.y - shared.y);
    let (vx, vy) = (next.x - shared.x, next.y - shared.y);
    ux * vx + uy * vy > 0
}

/// Two segments properly cross: a single shared point interior to both.
#[inline]
pub(crate) fn raw_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(a, b, c).sign();
    let d2 = orient(a, b, d).sign();
    let d3 = orient(c, d, a).sign();
    let d4 = orient(c, d, b).sign();
    d1 * d2 < 0 && d3 * d4 < 0
}

pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    raw_intersect(s1.a, s1.b, s2.a, s2.b)
}

/// Point location relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A closed polygonal chain; closure from the last vertex back to the first
/// is implicit. Simplicity and orientation are checked separately because
/// non-simple chains are legitimate inputs to [`Polygon::is_simple`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Requires at least 3 vertices, each in bounds, with no two consecutive
    /// (cyclically) vertices equal.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let m = vertices.len();
        if m < 3 {
            return Err(GeomError::TooFewVertices(m));
        }
        if let Some(p) = vertices.iter().find(|p| !p.in_bounds()) {
            return Err(GeomError::OutOfBounds(p.x, p.y));
        }
        for i in 0..m {
            let j = (i + 1) % m;
            if vertices[i] == vertices[j] {
                return Err(GeomError::RepeatedVertex(i, j));
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Side `i` runs from vertex `i` to vertex `i + 1 (mod m)`.
    pub fn side(&self, i: usize) -> (Point, Point) {
        let m = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % m])
    }

    pub fn sides(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.side(i))
    }

    /// Twice the signed area (shoelace); positive for counter-clockwise.
    pub fn signed_area2(&self) -> i128 {
        self.sides()
            .map(|(p, q)| p.x as i128 * q.y as i128 - q.x as i128 * p.y as i128)
            .sum()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area2() > 0
    }

    /// Same polygon, counter-clockwise.
    pub fn into_ccw(mut self) -> Self {
        if self.signed_area2() < 0 {
            self.vertices.reverse();
        }
        self
    }

    /// Strictly convex and counter-clockwise: every vertex is a left turn.
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let m = v.len();
        (0..m).all(|i| orient(v[i], v[(i + 1) % m], v[(i + 2) % m]) == Orientation::CounterClockwise)
            && self.is_simple()
    }

    pub fn is_simple(&self) -> bool {
        polygon_is_simple(self)
    }

    pub fn locate(&self, p: Point) -> Location {
        point_in_polygon(p, self)
    }

    /// Inclusive bounding box as `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices[1..] {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }
}

/// Ray casting toward +x with half-open edge rule; on-side points are
/// detected exactly first.
pub fn point_in_polygon(p: Point, poly: &Polygon) -> Location {
    let mut inside = false;
    for (a, b) in poly.sides() {
        if orient(a, b, p) == Orientation::Collinear && in_box(a, b, p) {
            return Location::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            // Crossing of the ray's supporting line lies strictly right of p
            // iff p is on the appropriate side of the directed edge.
            let o = cross(a, b, p);
            if (b.y > a.y && o > 0) || (b.y < a.y && o < 0) {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

pub fn polygon_is_simple(poly: &Polygon) -> bool {
    let v = poly.vertices();
    let m = v.len();
    if m < 3 {
        return false;
    }
    for i in 0..m {
        let (a, b) = poly.side(i);
        if a == b {
            return false;
        }
        // Adjacent side i, i+1 share vertex i+1.
        if folds_at(a, b, v[(i + 2) % m]) {
            return false;
        }
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (c, d) = poly.side(j);
            if raw_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

pub(crate) fn check_cycle(points: &[Point], order: &[usize]) -> Result<(), GeomError> {
    let n = points.len();
    if n < 3 {
        return Err(GeomError::TooFewPoints(n));
    }
    if !is_permutation(order, n) {
        return Err(GeomError::NotAPermutation(n));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&i| points[i]);
    for w in idx.windows(2) {
        if points[w[0]] == points[w[1]] {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(GeomError::DuplicatePoint(a, b));
        }
    }
    Ok(())
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Counts intersecting non-adjacent edge pairs plus adjacent folds. No
/// validation; callers guarantee a permutation over distinct points.
pub(crate) fn self_crossings_unchecked(points: &[Point], order: &[usize]) -> usize {
    let n = order.len();
    let at = |k: usize| points[order[k % n]];
    let mut count = 0;
    for i in 0..n {
        let (a, b) = (at(i), at(i + 1));
        if folds_at(a, b, at(i + 2)) {
            count += 1;
        }
        // Edge n-1 is adjacent to edge 0.
        let last = if i == 0 { n - 1 } else { n };
        for j in (i + 2)..last {
            if raw_intersect(a, b, at(j), at(j + 1)) {
                count += 1;
            }
        }
    }
    count
}

pub(crate) fn polygon_crossings_unchecked(points: &[Point], order: &[usize], poly: &Polygon) -> usize {
    let n = order.len();
    let mut count = 0;
    for i in 0..n {
        let a = points[order[i]];
        let b = points[order[(i + 1) % n]];
        count += poly.sides().filter(|&(c, d)| raw_intersect(a, b, c, d)).count();
    }
    count
}

/// C1: self-crossings of the closed chain `points[order[0]], points[order[1]], ...`.
pub fn cycle_self_crossings(points: &[Point], order: &[usize]) -> Result<usize, GeomError> {
    check_cycle(points, order)?;
    Ok(self_crossings_unchecked(points, order))
}

/// C2: intersecting (cycle edge, polygon side) pairs.
pub fn cycle_polygon_crossings(
    points: &[Point],
    order: &[usize],
    poly: &Polygon,
) -> Result<usize, GeomError> {
    check_cycle(points, order)?;
    Ok(polygon_crossings_unchecked(points, order, poly))
}

pub fn cycle_length(points: &[Point], order: &[usize]) -> Result<f64, GeomError> {
    check_cycle(points, order)?;
    let n = order.len();
    Ok((0..n)
        .map(|i| points[order[i]].dist(points[order[(i + 1) % n]]))
        .sum())
}
