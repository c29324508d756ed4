//! Room map geometry and ray casting.
//!
//! The map is a simple counterclockwise polygon of wall segments in meters.
//! Directions are given as compass-style angles in degrees: the unit vector
//! for angle `a` is `(sin a, cos a)`, so 0 deg points along +x2 and 90 deg
//! along +x1. Degrees at every interface, radians internally.

use crate::error::{Error, Result};
use crate::real::{normalize_degrees, Real};

/// Ray parameter below this is treated as "at the origin" and ignored.
const RAY_PARAM_EPS: f64 = 1e-12;
/// Tolerance on the wall parameter `s` at segment endpoints (corner hits).
const WALL_PARAM_EPS: f64 = 1e-12;
/// A point closer than this to any wall does not count as interior.
const INTERIOR_MARGIN: f64 = 1e-9;

/// Point in map coordinates, meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2<F> {
    pub x1: F,
    pub x2: F,
}

impl<F: Real> Point2<F> {
    pub fn new(x1: F, x2: F) -> Self {
        Point2 { x1, x2 }
    }

    pub fn distance(&self, other: &Point2<F>) -> F {
        let d1 = self.x1 - other.x1;
        let d2 = self.x2 - other.x2;
        (d1 * d1 + d2 * d2).sqrt()
    }
}

/// Axis-aligned rectangle, used for bounding boxes and grid extents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds2<F> {
    pub x1_min: F,
    pub x1_max: F,
    pub x2_min: F,
    pub x2_max: F,
}

impl<F: Real> Bounds2<F> {
    pub fn new(x1_min: F, x1_max: F, x2_min: F, x2_max: F) -> Self {
        Bounds2 { x1_min, x1_max, x2_min, x2_max }
    }

    pub fn x1_extent(&self) -> F {
        self.x1_max - self.x1_min
    }

    pub fn x2_extent(&self) -> F {
        self.x2_max - self.x2_min
    }

    pub fn contains(&self, p: &Point2<F>) -> bool {
        p.x1 >= self.x1_min && p.x1 <= self.x1_max && p.x2 >= self.x2_min && p.x2 <= self.x2_max
    }
}

/// Object position (meters) and heading (degrees in [0, 360)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose<F> {
    pub x1: F,
    pub x2: F,
    pub heading_deg: F,
}

impl<F: Real> Pose<F> {
    /// Builds a pose, normalizing the heading to [0, 360).
    pub fn new(x1: F, x2: F, heading_deg: F) -> Self {
        Pose { x1, x2, heading_deg: normalize_degrees(heading_deg) }
    }

    pub fn position(&self) -> Point2<F> {
        Point2::new(self.x1, self.x2)
    }
}

/// Result of casting a ray against the room walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayHit<F> {
    /// Distance from the ray origin to the hit point, meters.
    pub range: F,
    /// Intersection point on the wall.
    pub hit_point: Point2<F>,
    /// Index of the intersected wall; wall k joins vertex k to vertex k+1.
    pub wall_index: usize,
}

/// Simple counterclockwise polygon of wall segments.
#[derive(Clone, Debug, PartialEq)]
pub struct RoomMap<F> {
    vertices: Vec<Point2<F>>,
}

impl<F: Real> RoomMap<F> {
    /// Validates and builds a map from vertices listed counterclockwise.
    pub fn new(vertices: Vec<Point2<F>>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidMap(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for v in &vertices {
            if !(v.x1.is_finite() && v.x2.is_finite()) {
                return Err(Error::InvalidMap("vertex coordinates must be finite".into()));
            }
        }
        let n = vertices.len();
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            if a.distance(&b) <= F::zero() {
                return Err(Error::InvalidMap(format!("wall {k} has zero length")));
            }
        }
        // Counterclockwise orientation: positive shoelace area.
        let mut area2 = F::zero();
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            area2 += a.x1 * b.x2 - b.x1 * a.x2;
        }
        if area2 <= F::zero() {
            return Err(Error::InvalidMap(
                "vertices must be ordered counterclockwise".into(),
            ));
        }
        // Simplicity: non-adjacent walls must not touch; consecutive walls
        // must not fold back onto each other.
        for i in 0..n {
            let (a1, a2) = (vertices[i], vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                let (b1, b2) = (vertices[j], vertices[(j + 1) % n]);
                if segments_touch(a1, a2, b1, b2) {
                    return Err(Error::InvalidMap(format!(
                        "walls {i} and {j} intersect; polygon is not simple"
                    )));
                }
            }
            let prev = vertices[i];
            let here = vertices[(i + 1) % n];
            let next = vertices[(i + 2) % n];
            let u = Point2::new(here.x1 - prev.x1, here.x2 - prev.x2);
            let v = Point2::new(next.x1 - here.x1, next.x2 - here.x2);
            let cross = u.x1 * v.x2 - u.x2 * v.x1;
            let dot = u.x1 * v.x1 + u.x2 * v.x2;
            if cross == F::zero() && dot < F::zero() {
                return Err(Error::InvalidMap(format!(
                    "walls {} and {} overlap (spike at a vertex)",
                    i,
                    (i + 1) % n
                )));
            }
        }
        Ok(RoomMap { vertices })
    }

    pub fn vertices(&self) -> &[Point2<F>] {
        &self.vertices
    }

    pub fn wall_count(&self) -> usize {
        self.vertices.len()
    }

    /// Wall `k` as its (start, end) vertices.
    pub fn wall(&self, k: usize) -> (Point2<F>, Point2<F>) {
        let n = self.vertices.len();
        (self.vertices[k % n], self.vertices[(k + 1) % n])
    }

    pub fn walls(&self) -> impl Iterator<Item = (Point2<F>, Point2<F>)> + '_ {
        (0..self.wall_count()).map(move |k| self.wall(k))
    }

    pub fn bounding_box(&self) -> Bounds2<F> {
        let mut b = Bounds2::new(
            self.vertices[0].x1,
            self.vertices[0].x1,
            self.vertices[0].x2,
            self.vertices[0].x2,
        );
        for v in &self.vertices {
            b.x1_min = b.x1_min.min(v.x1);
            b.x1_max = b.x1_max.max(v.x1);
            b.x2_min = b.x2_min.min(v.x2);
            b.x2_max = b.x2_max.max(v.x2);
        }
        b
    }

    /// Largest distance between two vertices; an upper bound on any range.
    pub fn diameter(&self) -> F {
        let mut d = F::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// Shortest distance from `p` to the polygon boundary.
    pub fn distance_to_boundary(&self, p: &Point2<F>) -> F {
        let mut best = F::infinity();
        for (a, b) in self.walls() {
            best = best.min(point_segment_distance(p, &a, &b));
        }
        best
    }

    /// True when `p` is strictly inside: enclosed by the polygon and farther
    /// than the interior margin from every wall.
    pub fn contains_interior(&self, p: &Point2<F>) -> bool {
        if !self.encloses(p) {
            return false;
        }
        self.distance_to_boundary(p) > F::cast(INTERIOR_MARGIN)
    }

    /// Even-odd crossing test, ignoring the interior margin.
    fn encloses(&self, p: &Point2<F>) -> bool {
        let mut inside = false;
        for (a, b) in self.walls() {
            if (a.x2 > p.x2) != (b.x2 > p.x2) {
                let t = (p.x2 - a.x2) / (b.x2 - a.x2);
                let x1_cross = a.x1 + t * (b.x1 - a.x1);
                if p.x1 < x1_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Builds the axis-aligned rectangular room [0, l1] x [0, l2].
pub fn make_rectangle<F: Real>(l1: F, l2: F) -> Result<RoomMap<F>> {
    if !(l1 > F::zero() && l2 > F::zero() && l1.is_finite() && l2.is_finite()) {
        return Err(Error::InvalidMap(format!(
            "rectangle dimensions must be positive and finite, got {l1} x {l2}"
        )));
    }
    RoomMap::new(vec![
        Point2::new(F::zero(), F::zero()),
        Point2::new(l1, F::zero()),
        Point2::new(l1, l2),
        Point2::new(F::zero(), l2),
    ])
}

/// Casts a ray from `origin` in direction `(sin angle, cos angle)` and
/// returns the nearest wall intersection.
///
/// `angle_deg` is normalized to [0, 360) before use, so `a` and `a + 360`
/// produce the same hit. At a corner, where two walls meet at the same ray
/// parameter, the lower wall index is reported.
pub fn ray_cast<F: Real>(map: &RoomMap<F>, origin: &Point2<F>, angle_deg: F) -> Result<RayHit<F>> {
    if !map.contains_interior(origin) {
        return Err(Error::OriginOutsideMap {
            x1: origin.x1.to_f64().unwrap_or(f64::NAN),
            x2: origin.x2.to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = normalize_degrees(angle_deg).to_radians();
    let dir = Point2::new(a.sin(), a.cos());

    let t_eps = F::cast(RAY_PARAM_EPS);
    let s_eps = F::cast(WALL_PARAM_EPS);
    let mut best: Option<(F, usize)> = None;
    for (k, (wa, wb)) in map.walls().enumerate() {
        let edge = Point2::new(wb.x1 - wa.x1, wb.x2 - wa.x2);
        let denom = cross(&dir, &edge);
        if denom == F::zero() {
            continue; // parallel; a grazing ray is resolved by the other walls
        }
        let rel = Point2::new(wa.x1 - origin.x1, wa.x2 - origin.x2);
        let t = cross(&rel, &edge) / denom;
        let s = cross(&rel, &dir) / denom;
        if t < t_eps || s < -s_eps || s > F::one() + s_eps {
            continue;
        }
        match best {
            // Strict improvement beyond the tie tolerance; corner ties keep
            // the earlier (lower) wall index.
            Some((t_best, _)) if t >= t_best - t_eps => {}
            _ => best = Some((t, k)),
        }
    }
    match best {
        Some((t, wall_index)) => {
            let hit_point = Point2::new(origin.x1 + t * dir.x1, origin.x2 + t * dir.x2);
            Ok(RayHit { range: origin.distance(&hit_point), hit_point, wall_index })
        }
        None => Err(Error::MapIntegrity(
            "ray from an interior point left the polygon without crossing a wall".into(),
        )),
    }
}

fn cross<F: Real>(u: &Point2<F>, v: &Point2<F>) -> F {
    u.x1 * v.x2 - u.x2 * v.x1
}

fn point_segment_distance<F: Real>(p: &Point2<F>, a: &Point2<F>, b: &Point2<F>) -> F {
    let ab = Point2::new(b.x1 - a.x1, b.x2 - a.x2);
    let ap = Point2::new(p.x1 - a.x1, p.x2 - a.x2);
    let len_sq = ab.x1 * ab.x1 + ab.x2 * ab.x2;
    if len_sq == F::zero() {
        return p.distance(a);
    }
    let t = ((ap.x1 * ab.x1 + ap.x2 * ab.x2) / len_sq).max(F::zero()).min(F::one());
    let proj = Point2::new(a.x1 + t * ab.x1, a.x2 + t * ab.x2);
    p.distance(&proj)
}

/// True when segments (a1, a2) and (b1, b2) share any point.
fn segments_touch<F: Real>(a1: Point2<F>, a2: Point2<F>, b1: Point2<F>, b2: Point2<F>) -> bool {
    let d1 = orient(&b1, &b2, &a1);
    let d2 = orient(&b1, &b2, &a2);
    let d3 = orient(&a1, &a2, &b1);
    let d4 = orient(&a1, &a2, &b2);
    if ((d1 > F::zero() && d2 < F::zero()) || (d1 < F::zero() && d2 > F::zero()))
        && ((d3 > F::zero() && d4 < F::zero()) || (d3 < F::zero() && d4 > F::zero()))
    {
        return true;
    }
    (d1 == F::zero() && on_segment(&b1, &b2, &a1))
        || (d2 == F::zero() && on_segment(&b1, &b2, &a2))
        || (d3 == F::zero() && on_segment(&a1, &a2, &b1))
        || (d4 == F::zero() && on_segment(&a1, &a2, &b2))
}

/// Sign of the area of triangle (a, b, c).
fn orient<F: Real>(a: &Point2<F>, b: &Point2<F>, c: &Point2<F>) -> F {
    (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1)
}

/// Assumes c is collinear with (a, b); true if it lies within the segment box.
fn on_segment<F: Real>(a: &Point2<F>, b: &Point2<F>, c: &Point2<F>) -> bool {
    c.x1 >= a.x1.min(b.x1)
        && c.x1 <= a.x1.max(b.x1)
        && c.x2 >= a.x2.min(b.x2)
        && c.x2 <= a.x2.max(b.x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect_4x6() -> RoomMap<f64> {
        make_rectangle(4.0, 6.0).unwrap()
    }

    #[test]
    fn rectangle_corners_and_walls() {
        let map = rect_4x6();
        assert_eq!(
            map.vertices(),
            &[
                Point2::new(0.0, 0.0),
                Point2::new(4.0, 0.0),
                Point2::new(4.0, 6.0),
                Point2::new(0.0, 6.0),
            ]
        );
        assert_eq!(map.wall_count(), 4);
    }

    #[test]
    fn unit_square_wall_lengths() {
        let map = make_rectangle(1.0_f64, 1.0).unwrap();
        for (a, b) in map.walls() {
            assert!((a.distance(&b) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_rectangle_rejected() {
        assert!(matches!(make_rectangle(0.0_f64, 6.0), Err(Error::InvalidMap(_))));
        assert!(matches!(make_rectangle(-1.0_f64, 6.0), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let cw = vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 6.0),
            Point2::new(4.0, 6.0),
            Point2::new(4.0, 0.0),
        ];
        assert!(matches!(RoomMap::new(cw), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        // bowtie
        let bow = vec![
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 6.0),
            Point2::new(4.0, 0.0),
            Point2::new(0.0, 6.0),
        ];
        assert!(matches!(RoomMap::new(bow), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn zero_length_wall_rejected() {
        let dup = vec![
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 6.0),
            Point2::new(0.0, 6.0),
        ];
        assert!(matches!(RoomMap::new(dup), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn ray_up_from_center() {
        let map = rect_4x6();
        let hit = ray_cast(&map, &Point2::new(2.0, 3.0), 0.0).unwrap();
        assert!((hit.range - 3.0).abs() < 1e-12);
        assert!((hit.hit_point.x1 - 2.0).abs() < 1e-12);
        assert!((hit.hit_point.x2 - 6.0).abs() < 1e-12);
        assert_eq!(hit.wall_index, 2);
    }

    #[test]
    fn ray_to_upper_right_corner() {
        let map = rect_4x6();
        // Exact corner direction: atan(2 / 3) from the +x2 axis.
        let corner_angle = (2.0_f64 / 3.0).atan().to_degrees();
        let hit = ray_cast(&map, &Point2::new(2.0, 3.0), corner_angle).unwrap();
        assert!((hit.range - 13.0_f64.sqrt()).abs() < 1e-9);
        assert!((hit.hit_point.x1 - 4.0).abs() < 1e-9);
        assert!((hit.hit_point.x2 - 6.0).abs() < 1e-9);
        // Corner tie resolves to the lower wall index (wall 1 meets wall 2 there).
        assert_eq!(hit.wall_index, 1);

        // The rounded angle from the same geometry stays close to sqrt(13).
        let hit = ray_cast(&map, &Point2::new(2.0, 3.0), 33.69).unwrap();
        assert!((hit.range - 3.6056).abs() < 1e-3);
    }

    #[test]
    fn ray_right_from_center() {
        let map = rect_4x6();
        let hit = ray_cast(&map, &Point2::new(2.0, 3.0), 90.0).unwrap();
        assert!((hit.range - 2.0).abs() < 1e-12);
        assert!((hit.hit_point.x1 - 4.0).abs() < 1e-12);
        assert!((hit.hit_point.x2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ray_to_upper_left_corner_region() {
        let map = rect_4x6();
        let hit = ray_cast(&map, &Point2::new(2.0, 3.0), 326.3).unwrap();
        assert!((hit.range - 3.6056).abs() < 5e-3);
        assert!(hit.hit_point.x1.abs() < 1e-2);
        assert!((hit.hit_point.x2 - 6.0).abs() < 1e-2);
    }

    #[test]
    fn origin_outside_rejected() {
        let map = rect_4x6();
        for p in [
            Point2::new(-1.0, 3.0),
            Point2::new(2.0, 6.0),     // on the boundary
            Point2::new(2.0, 6.0 - 1e-12), // inside but within the margin
        ] {
            assert!(matches!(
                ray_cast(&map, &p, 0.0),
                Err(Error::OriginOutsideMap { .. })
            ));
        }
    }

    #[test]
    fn interior_test_on_l_shaped_room() {
        // L-shape: big square with the upper-right quadrant removed.
        let map: RoomMap<f64> = RoomMap::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(4.0, 0.0),
            Point2::new(4.0, 2.0),
            Point2::new(2.0, 2.0),
            Point2::new(2.0, 4.0),
            Point2::new(0.0, 4.0),
        ])
        .unwrap();
        assert!(map.contains_interior(&Point2::new(1.0, 1.0)));
        assert!(map.contains_interior(&Point2::new(1.0, 3.0)));
        assert!(!map.contains_interior(&Point2::new(3.0, 3.0))); // removed quadrant
        assert!(!map.contains_interior(&Point2::new(2.0, 3.0))); // inner wall

        // A ray across the notch stops at the inner wall.
        let hit = ray_cast(&map, &Point2::new(3.0, 1.0), 0.0).unwrap();
        assert!((hit.range - 1.0).abs() < 1e-12);
        assert_eq!(hit.wall_index, 2);
    }

    #[test]
    fn f32_instantiation_works() {
        let map = make_rectangle(4.0_f32, 6.0).unwrap();
        let hit = ray_cast(&map, &Point2::new(2.0_f32, 3.0), 0.0).unwrap();
        assert!((hit.range - 3.0).abs() < 1e-5);
    }
}
