//! Problem instances: a simple polygon plus the interior points the cycle
//! must visit. Random generation, validation, and the canonical text format.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use rand::Rng;
use thiserror::Error;

use crate::geom::{orient, polygon_is_simple, GeomError, Location, Orientation, Point, Polygon, COORD_LIMIT};
use crate::geom::raw_intersect;
use crate::seed::{derive_seed, rng_from};

pub const DEFAULT_BOX: i64 = 500;
const POLYGON_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("invalid generation spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// How random polygons are shaped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolygonStyle {
    /// Random vertices in general position, untangled by 2-opt reversals.
    #[default]
    Untangled,
    /// Vertices at random angles on the circle inscribed in the box.
    Convex,
}

impl std::str::FromStr for PolygonStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "untangled" => Ok(PolygonStyle::Untangled),
            "convex" => Ok(PolygonStyle::Convex),
            other => Err(format!("unknown polygon style '{other}', expected untangled or convex")),
        }
    }
}

/// Parameters for random instance generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub sides: usize,
    pub points: usize,
    /// Half-width of the square coordinate box centred on the origin.
    pub bounding_box: i64,
    pub seed: u64,
    pub style: PolygonStyle,
}

impl GenSpec {
    pub fn new(sides: usize, points: usize, seed: u64) -> Self {
        GenSpec { sides, points, bounding_box: DEFAULT_BOX, seed, style: PolygonStyle::Untangled }
    }

    pub fn convex(mut self) -> Self {
        self.style = PolygonStyle::Convex;
        self
    }

    pub fn with_box(mut self, half_width: i64) -> Self {
        self.bounding_box = half_width;
        self
    }

    pub fn check(&self) -> Result<(), InstanceError> {
        if self.sides < 3 {
            return Err(InstanceError::Spec(format!("sides must be >= 3, got {}", self.sides)));
        }
        if self.points < 3 {
            return Err(InstanceError::Spec(format!("points must be >= 3, got {}", self.points)));
        }
        if !(10..=COORD_LIMIT).contains(&self.bounding_box) {
            return Err(InstanceError::Spec(format!(
                "box half-width must be in [10, {COORD_LIMIT}], got {}",
                self.bounding_box
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub polygon: Polygon,
    pub points: Vec<Point>,
    pub name: Option<String>,
}

impl Instance {
    /// Builds an instance, rejecting it if any invariant fails.
    pub fn new(polygon: Polygon, points: Vec<Point>) -> Result<Self, InstanceError> {
        let inst = Instance { polygon, points, name: None };
        let violations = inst.validate();
        if violations.is_empty() {
            Ok(inst)
        } else {
            Err(InstanceError::Invalid(violations))
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn m(&self) -> usize {
        self.polygon.len()
    }

    /// Every violated invariant, one message each. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let poly = &self.polygon;
        let simple = polygon_is_simple(poly);
        if !simple {
            out.push("polygon not simple".to_string());
        } else if !poly.is_ccw() {
            out.push("polygon is not counter-clockwise".to_string());
        }
        if self.points.len() < 3 {
            out.push(format!("need at least 3 points, got {}", self.points.len()));
        }

        let vertex_at: std::collections::HashMap<Point, usize> =
            poly.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, &p) in self.points.iter().enumerate() {
            if !p.in_bounds() {
                out.push(format!("point {i} {p} is out of coordinate range"));
                continue;
            }
            if let Some(v) = vertex_at.get(&p) {
                out.push(format!("point {i} {p} coincides with polygon vertex {v}"));
                continue;
            }
            // Location is meaningless for a non-simple boundary.
            if simple {
                match poly.locate(p) {
                    Location::Inside => {}
                    Location::Boundary => out.push(format!("point {i} {p} lies on the polygon boundary")),
                    Location::Outside => out.push(format!("point {i} {p} lies outside the polygon")),
                }
            }
        }

        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by_key(|&i| (self.points[i], i));
        for w in idx.windows(2) {
            if self.points[w[0]] == self.points[w[1]] {
                out.push(format!("points {} and {} coincide at {}", w[0], w[1], self.points[w[0]]));
            }
        }
        out
    }
}

/// Random simple polygon, counter-clockwise. The default style draws `sides`
/// grid points in general position and untangles them by 2-opt reversals of
/// crossing side pairs.
pub fn generate_polygon(spec: &GenSpec) -> Result<Polygon, InstanceError> {
    spec.check()?;
    let mut rng = rng_from(derive_seed(spec.seed, &[0x706f_6c79]));
    for _ in 0..POLYGON_ATTEMPTS {
        if spec.style == PolygonStyle::Convex {
            if let Some(poly) = sample_convex(&mut rng, spec.sides, spec.bounding_box) {
                return Ok(poly);
            }
            continue;
        }
        let Some(mut verts) = sample_general_position(&mut rng, spec.sides, spec.bounding_box) else {
            continue;
        };
        if !untangle(&mut verts) {
            continue;
        }
        let poly = Polygon::new(verts)?.into_ccw();
        if polygon_is_simple(&poly) && poly.signed_area2() > 0 {
            return Ok(poly);
        }
    }
    Err(InstanceError::Generation(format!(
        "no simple {}-gon found in box {} after {POLYGON_ATTEMPTS} attempts",
        spec.sides, spec.bounding_box
    )))
}

fn sample_convex<R: Rng>(rng: &mut R, m: usize, half: i64) -> Option<Polygon> {
    let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    angles.sort_by(f64::total_cmp);
    let r = half as f64;
    let verts: Vec<Point> = angles
        .iter()
        .map(|a| Point::new((r * a.cos()).round() as i64, (r * a.sin()).round() as i64))
        .collect();
    // Rounding can merge or flatten nearby vertices; such draws are retried.
    let poly = Polygon::new(verts).ok()?;
    poly.is_convex().then_some(poly)
}

fn sample_general_position<R: Rng>(rng: &mut R, m: usize, half: i64) -> Option<Vec<Point>> {
    let mut verts: Vec<Point> = Vec::with_capacity(m);
    let mut draws = 0;
    while verts.len() < m {
        draws += 1;
        if draws > 1000 * m {
            return None;
        }
        let c = Point::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
        if verts.contains(&c) {
            continue;
        }
        let collinear = verts.iter().enumerate().any(|(i, &a)| {
            verts[i + 1..].iter().any(|&b| orient(a, b, c) == Orientation::Collinear)
        });
        if !collinear {
            verts.push(c);
        }
    }
    Some(verts)
}

/// Reverses between crossing sides until none cross. With no three vertices
/// collinear every crossing is proper, so the perimeter strictly drops.
fn untangle(verts: &mut [Point]) -> bool {
    let m = verts.len();
    for _ in 0..100_000 {
        let mut found = None;
        'scan: for i in 0..m {
            let last = if i == 0 { m - 1 } else { m };
            for j in (i + 2)..last {
                if raw_intersect(verts[i], verts[i + 1], verts[j], verts[(j + 1) % m]) {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        match found {
            Some((i, j)) => verts[i + 1..=j].reverse(),
            None => return true,
        }
    }
    false
}

/// `n` distinct grid points strictly inside `poly`, by rejection sampling over
/// its bounding box.
pub fn generate_points(poly: &Polygon, n: usize, seed: u64) -> Result<Vec<Point>, InstanceError> {
    if n < 3 {
        return Err(InstanceError::Spec(format!("points must be >= 3, got {n}")));
    }
    let mut rng = rng_from(seed);
    let (lo, hi) = poly.bounding_box();
    let budget = 100_000 + 1_000 * n;
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for _ in 0..budget {
        let p = Point::new(rng.gen_range(lo.x..=hi.x), rng.gen_range(lo.y..=hi.y));
        if poly.locate(p) == Location::Inside && seen.insert(p) {
            out.push(p);
            if out.len() == n {
                return Ok(out);
            }
        }
    }
    Err(InstanceError::Generation(format!(
        "found only {} of {n} interior points after {budget} draws",
        out.len()
    )))
}

pub fn generate_instance(spec: &GenSpec) -> Result<Instance, InstanceError> {
    let polygon = generate_polygon(spec)?;
    let points = generate_points(&polygon, spec.points, derive_seed(spec.seed, &[0x70_74_73]))?;
    Instance::new(polygon, points)
}

/// Canonical text form. Always ends with a newline.
pub fn format_instance(inst: &Instance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "POLYGON {}", inst.polygon.len());
    for v in inst.polygon.vertices() {
        let _ = writeln!(s, "{} {}", v.x, v.y);
    }
    let _ = writeln!(s, "POINTS {}", inst.points.len());
    for p in &inst.points {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    s
}

pub fn write_instance<W: Write>(inst: &Instance, mut w: W) -> io::Result<()> {
    w.write_all(format_instance(inst).as_bytes())
}

pub fn read_instance<R: BufRead>(mut r: R) -> Result<Instance, InstanceError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    parse_instance(&text)
}

/// Parses the canonical format, then validates. Blank lines and `#` comments
/// are skipped.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let total_lines = text.lines().count();
    let eof = |what: &str| InstanceError::Syntax {
        line: total_lines + 1,
        message: format!("unexpected end of input, expected {what}"),
    };

    let (line, header) = lines.next().ok_or_else(|| eof("POLYGON header"))?;
    let m = parse_header(line, header, "POLYGON")?;
    let mut verts = Vec::new();
    for k in 0..m {
        let (line, row) = lines.next().ok_or_else(|| eof(&format!("polygon vertex {} of {m}", k + 1)))?;
        verts.push(parse_row(line, row, &format!("polygon vertex {} of {m}", k + 1))?);
    }

    let (line, header) = lines.next().ok_or_else(|| eof("POINTS header"))?;
    let n = parse_header(line, header, "POINTS")?;
    let mut points = Vec::new();
    for k in 0..n {
        let (line, row) = lines.next().ok_or_else(|| eof(&format!("point {} of {n}", k + 1)))?;
        points.push(parse_row(line, row, &format!("point {} of {n}", k + 1))?);
    }
    if let Some((line, extra)) = lines.next() {
        return Err(InstanceError::Syntax {
            line,
            message: format!("unexpected content after {n} points: '{extra}'"),
        });
    }

    let polygon = Polygon::new(verts).map_err(|e| InstanceError::Invalid(vec![e.to_string()]))?;
    Instance::new(polygon, points)
}

fn parse_header(line: usize, text: &str, keyword: &str) -> Result<usize, InstanceError> {
    let mut tok = text.split_whitespace();
    let bad = || InstanceError::Syntax {
        line,
        message: format!("expected '{keyword} <count>', found '{text}'"),
    };
    if tok.next() != Some(keyword) {
        return Err(bad());
    }
    let count = tok.next().and_then(|t| t.parse::<usize>().ok()).ok_or_else(bad)?;
    if tok.next().is_some() {
        return Err(bad());
    }
    Ok(count)
}

fn parse_row(line: usize, text: &str, what: &str) -> Result<Point, InstanceError> {
    let bad = |detail: &str| InstanceError::Syntax {
        line,
        message: format!("expected two integers for {what}, found '{text}'{detail}"),
    };
    let mut tok = text.split_whitespace();
    let x = tok.next().and_then(|t| t.parse::<i64>().ok()).ok_or_else(|| bad(""))?;
    let y = tok.next().and_then(|t| t.parse::<i64>().ok()).ok_or_else(|| bad(""))?;
    if tok.next().is_some() {
        return Err(bad(""));
    }
    let p = Point::new(x, y);
    if !p.in_bounds() {
        return Err(bad(&format!(" (coordinates limited to +/-{COORD_LIMIT})")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(half: i64) -> Polygon {
        Polygon::new(vec![
            Point::new(-half, -half),
            Point::new(half, -half),
            Point::new(half, half),
            Point::new(-half, half),
        ])
        .unwrap()
    }

    #[test]
    fn triangle_generation() {
        for seed in 0..20 {
            let poly = generate_polygon(&GenSpec::new(3, 3, seed)).unwrap();
            assert_eq!(poly.len(), 3);
            assert!(poly.is_simple());
            assert!(poly.is_ccw());
        }
    }

    #[test]
    fn polygon_generation_is_deterministic() {
        let spec = GenSpec::new(20, 10, 99);
        assert_eq!(generate_polygon(&spec).unwrap(), generate_polygon(&spec).unwrap());
        assert_ne!(
            generate_polygon(&spec).unwrap(),
            generate_polygon(&GenSpec::new(20, 10, 100)).unwrap()
        );
    }

    #[test]
    fn generated_polygons_stay_in_box() {
        let spec = GenSpec::new(15, 5, 3).with_box(40);
        let poly = generate_polygon(&spec).unwrap();
        assert!(poly.vertices().iter().all(|v| v.x.abs() <= 40 && v.y.abs() <= 40));
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(matches!(generate_polygon(&GenSpec::new(2, 5, 0)), Err(InstanceError::Spec(_))));
        assert!(matches!(generate_polygon(&GenSpec::new(5, 2, 0)), Err(InstanceError::Spec(_))));
        assert!(matches!(
            generate_polygon(&GenSpec::new(5, 5, 0).with_box(9)),
            Err(InstanceError::Spec(_))
        ));
    }

    #[test]
    fn convex_style() {
        for seed in 0..50 {
            let poly = generate_polygon(&GenSpec::new(10, 10, seed).convex()).unwrap();
            assert_eq!(poly.len(), 10);
            assert!(poly.is_convex());
        }
        let big = generate_polygon(&GenSpec::new(25, 10, 1).convex()).unwrap();
        assert!(big.is_convex());
    }

    #[test]
    fn points_in_square() {
        let sq = square(500);
        let pts = generate_points(&sq, 5, 11).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|&p| sq.locate(p) == Location::Inside));
        let uniq: HashSet<_> = pts.iter().collect();
        assert_eq!(uniq.len(), 5);
        assert_eq!(pts, generate_points(&sq, 5, 11).unwrap());
    }

    #[test]
    fn points_budget_exhausted() {
        // Only one interior grid point: (0, 0).
        let tiny = square(1);
        assert!(matches!(generate_points(&tiny, 3, 0), Err(InstanceError::Generation(_))));
    }

    #[test]
    fn generated_instance_is_valid() {
        let inst = generate_instance(&GenSpec::new(12, 9, 5)).unwrap();
        assert!(inst.validate().is_empty());
        assert_eq!(inst.m(), 12);
        assert_eq!(inst.n(), 9);
    }

    #[test]
    fn duplicate_point_violation() {
        let mut inst = generate_instance(&GenSpec::new(10, 5, 1)).unwrap();
        inst.points[4] = inst.points[1];
        let v = inst.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("points 1 and 4"), "{}", v[0]);
    }

    #[test]
    fn vertex_point_violation() {
        let mut inst = generate_instance(&GenSpec::new(10, 5, 1)).unwrap();
        inst.points[2] = inst.polygon.vertices()[3];
        let v = inst.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("vertex 3"));
    }

    #[test]
    fn boundary_and_outside_points() {
        let inst = Instance {
            polygon: square(10),
            points: vec![Point::new(0, 0), Point::new(10, 3), Point::new(20, 0)],
            name: None,
        };
        let v = inst.validate();
        assert_eq!(v.len(), 2);
        assert!(v[0].contains("boundary"));
        assert!(v[1].contains("outside"));
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let cw = Polygon::new(square(10).vertices().iter().rev().copied().collect()).unwrap();
        let inst = Instance {
            polygon: cw,
            points: vec![Point::new(0, 0), Point::new(1, 0), Point::new(0, 1)],
            name: None,
        };
        assert_eq!(inst.validate(), vec!["polygon is not counter-clockwise".to_string()]);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let inst = generate_instance(&GenSpec::new(10, 7, 42)).unwrap();
        let text = format_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(format_instance(&back), text);
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        assert_eq!(read_instance(&buf[..]).unwrap(), inst);
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let text = "# demo\nPOLYGON 4\n0 0\n10 0\n\n10 10\n0 10\n# pts\nPOINTS 3\n2 2\n5 5\n7 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.n(), 3);
        assert!(!format_instance(&inst).contains('#'));
    }

    #[test]
    fn points_count_mismatch_names_line() {
        let short = "POLYGON 4\n0 0\n10 0\n10 10\n0 10\nPOINTS 4\n2 2\n5 5\n7 3\n";
        match parse_instance(short) {
            Err(InstanceError::Syntax { line, .. }) => assert_eq!(line, 10),
            other => panic!("{other:?}"),
        }
        let long = "POLYGON 4\n0 0\n10 0\n10 10\n0 10\nPOINTS 2\n2 2\n5 5\n7 3\n";
        match parse_instance(long) {
            Err(InstanceError::Syntax { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
        let wrong_polygon = "POLYGON 5\n0 0\n10 0\n10 10\n0 10\nPOINTS 3\n2 2\n5 5\n7 3\n";
        match parse_instance(wrong_polygon) {
            Err(InstanceError::Syntax { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bowtie_rejected_as_not_simple() {
        let text = "POLYGON 4\n0 0\n10 10\n10 0\n0 10\nPOINTS 3\n2 1\n8 1\n5 3\n";
        match parse_instance(text) {
            Err(InstanceError::Invalid(v)) => assert!(v.contains(&"polygon not simple".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rows() {
        for text in [
            "",
            "POLYGON\n",
            "POLYGON x\n",
            "POLYGON 3 3\n",
            "POLYGON 3\n0 0\n1\n",
            "POLYGON 3\n0 0\n1 0 4\n",
            "POLYGON 3\n0 0\n1 0\n0 99999999999\nPOINTS 0\n",
        ] {
            assert!(matches!(parse_instance(text), Err(InstanceError::Syntax { .. })), "{text:?}");
        }
        assert!(matches!(
            parse_instance("POLYGON 2\n0 0\n1 0\nPOINTS 0\n"),
            Err(InstanceError::Invalid(_))
        ));
    }
}
