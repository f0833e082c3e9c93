//! Heat-power operating regions of cogeneration units.
//!
//! A region is stored as one or more convex pieces whose union is the
//! feasible set. Every benchmark region in the shipped data is either convex
//! or splits into two convex pieces along a shared edge, so membership and
//! nearest-point projection stay exact.

use serde::{Deserialize, Serialize};

/// Membership tolerance for points on or near the boundary (MW / MWth).
pub const REGION_TOLERANCE: f64 = 1e-6;

/// A `(power MW, heat MWth)` operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub power: f64,
    pub heat: f64,
}

impl OperatingPoint {
    pub const fn new(power: f64, heat: f64) -> Self {
        Self { power, heat }
    }

    fn sub(self, other: Self) -> (f64, f64) {
        (self.power - other.power, self.heat - other.heat)
    }

    fn distance(self, other: Self) -> f64 {
        let (dx, dy) = self.sub(other);
        dx.hypot(dy)
    }
}

impl From<[f64; 2]> for OperatingPoint {
    fn from(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<OperatingPoint> for [f64; 2] {
    fn from(p: OperatingPoint) -> Self {
        [p.power, p.heat]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} is not finite")]
    NonFinite(usize),
    #[error("vertex {0} has negative power or heat")]
    Negative(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("polygon is stored clockwise; counter-clockwise order is required")]
    Clockwise,
    #[error("polygon is not convex at vertex {0}")]
    NotConvex(usize),
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// A convex polygon with counter-clockwise vertices.
///
/// Deserialized polygons are unchecked until [`ConvexPolygon::validate`]
/// runs; the case loader always does so.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ConvexPolygon {
    vertices: Vec<OperatingPoint>,
}

impl From<Vec<[f64; 2]>> for ConvexPolygon {
    fn from(raw: Vec<[f64; 2]>) -> Self {
        Self { vertices: raw.into_iter().map(OperatingPoint::from).collect() }
    }
}

impl From<ConvexPolygon> for Vec<[f64; 2]> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices.into_iter().map(Into::into).collect()
    }
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<OperatingPoint>) -> Result<Self, PolygonError> {
        let polygon = Self { vertices };
        polygon.validate()?;
        Ok(polygon)
    }

    pub fn validate(&self) -> Result<(), PolygonError> {
        let vertices = &self.vertices;
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.power.is_finite() || !v.heat.is_finite() {
                return Err(PolygonError::NonFinite(i));
            }
            if v.power < 0.0 || v.heat < 0.0 {
                return Err(PolygonError::Negative(i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(PolygonError::RepeatedVertex(i, j));
                }
            }
        }

        let signed_area: f64 = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                a.power * b.heat - b.power * a.heat
            })
            .sum::<f64>()
            * 0.5;
        if signed_area <= 0.0 {
            return Err(PolygonError::Clockwise);
        }

        // Every turn must be a left turn (collinear vertices allowed), and the
        // edge directions must wind exactly once.
        let mut turning = 0.0;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let incoming = cur.sub(prev);
            let outgoing = next.sub(cur);
            let c = cross(incoming, outgoing);
            let scale = incoming.0.hypot(incoming.1) * outgoing.0.hypot(outgoing.1);
            if c < -1e-12 * scale {
                return Err(PolygonError::NotConvex(i));
            }
            let dot = incoming.0 * outgoing.0 + incoming.1 * outgoing.1;
            turning += c.atan2(dot);
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(PolygonError::SelfIntersecting);
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[OperatingPoint] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = (OperatingPoint, OperatingPoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Smallest signed distance of `p` to the edge lines; negative when outside.
    fn inner_margin(&self, p: OperatingPoint) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b.sub(a);
                cross(e, p.sub(a)) / e.0.hypot(e.1)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: OperatingPoint) -> bool {
        self.inner_margin(p) >= -REGION_TOLERANCE
    }

    /// Euclidean-nearest point of the polygon; interior points are returned unchanged.
    pub fn project(&self, p: OperatingPoint) -> OperatingPoint {
        if self.inner_margin(p) >= 0.0 {
            return p;
        }
        let mut best = p;
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let q = project_onto_segment(p, a, b);
            let d = q.distance(p);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }

    pub fn centroid(&self) -> OperatingPoint {
        let n = self.vertices.len();
        let (mut cx, mut cy, mut area2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let w = a.power * b.heat - b.power * a.heat;
            area2 += w;
            cx += (a.power + b.power) * w;
            cy += (a.heat + b.heat) * w;
        }
        OperatingPoint::new(cx / (3.0 * area2), cy / (3.0 * area2))
    }

    /// Closed interval of one coordinate where the orthogonal line through
    /// `value` on the other axis crosses the polygon.
    fn cross_section(&self, value: f64, along_heat: bool) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (a, b) in self.edges() {
            let (ka, kb, ta, tb) = if along_heat {
                (a.power, b.power, a.heat, b.heat)
            } else {
                (a.heat, b.heat, a.power, b.power)
            };
            let (kmin, kmax) = (ka.min(kb), ka.max(kb));
            if value < kmin - REGION_TOLERANCE || value > kmax + REGION_TOLERANCE {
                continue;
            }
            if (kb - ka).abs() < 1e-12 {
                lo = lo.min(ta.min(tb));
                hi = hi.max(ta.max(tb));
            } else {
                let s = ((value - ka) / (kb - ka)).clamp(0.0, 1.0);
                let t = ta + s * (tb - ta);
                lo = lo.min(t);
                hi = hi.max(t);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn bounding_box(&self) -> (OperatingPoint, OperatingPoint) {
        let mut lo = OperatingPoint::new(f64::INFINITY, f64::INFINITY);
        let mut hi = OperatingPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo.power = lo.power.min(v.power);
            lo.heat = lo.heat.min(v.heat);
            hi.power = hi.power.max(v.power);
            hi.heat = hi.heat.max(v.heat);
        }
        (lo, hi)
    }
}

/// Project `p` onto the segment `[a, b]`.
pub fn project_onto_segment(p: OperatingPoint, a: OperatingPoint, b: OperatingPoint) -> OperatingPoint {
    let e = b.sub(a);
    let len2 = e.0 * e.0 + e.1 * e.1;
    if len2 == 0.0 {
        return a;
    }
    let w = p.sub(a);
    let s = ((w.0 * e.0 + w.1 * e.1) / len2).clamp(0.0, 1.0);
    OperatingPoint::new(a.power + s * e.0, a.heat + s * e.1)
}

/// Feasible operation region of a cogeneration unit: a union of convex pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatingRegion {
    /// Where the vertex coordinates were transcribed from.
    pub source: String,
    pub pieces: Vec<ConvexPolygon>,
}

impl OperatingRegion {
    pub fn new(source: impl Into<String>, pieces: Vec<ConvexPolygon>) -> Self {
        Self { source: source.into(), pieces }
    }

    pub fn single(source: impl Into<String>, polygon: ConvexPolygon) -> Self {
        Self::new(source, vec![polygon])
    }

    pub fn contains(&self, p: OperatingPoint) -> bool {
        self.pieces.iter().any(|piece| piece.contains(p))
    }

    pub fn project(&self, p: OperatingPoint) -> OperatingPoint {
        if self.pieces.iter().any(|piece| piece.inner_margin(p) >= 0.0) {
            return p;
        }
        self.pieces
            .iter()
            .map(|piece| piece.project(p))
            .min_by(|a, b| a.distance(p).total_cmp(&b.distance(p)))
            .unwrap_or(p)
    }

    /// Distance from `p` to the region (0 inside).
    pub fn violation(&self, p: OperatingPoint) -> f64 {
        if self.contains(p) {
            0.0
        } else {
            self.project(p).distance(p)
        }
    }

    pub fn bounding_box(&self) -> (OperatingPoint, OperatingPoint) {
        let mut lo = OperatingPoint::new(f64::INFINITY, f64::INFINITY);
        let mut hi = OperatingPoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (l, h) in self.pieces.iter().map(ConvexPolygon::bounding_box) {
            lo.power = lo.power.min(l.power);
            lo.heat = lo.heat.min(l.heat);
            hi.power = hi.power.max(h.power);
            hi.heat = hi.heat.max(h.heat);
        }
        (lo, hi)
    }

    /// Feasible heat range at fixed power, taking the connected component
    /// nearest to `current_heat`.
    pub fn heat_range(&self, power: f64, current_heat: f64) -> Option<(f64, f64)> {
        merged_interval(
            self.pieces.iter().filter_map(|p| p.cross_section(power, true)),
            current_heat,
        )
    }

    /// Feasible power range at fixed heat, taking the connected component
    /// nearest to `current_power`.
    pub fn power_range(&self, heat: f64, current_power: f64) -> Option<(f64, f64)> {
        merged_interval(
            self.pieces.iter().filter_map(|p| p.cross_section(heat, false)),
            current_power,
        )
    }

    pub fn centroid(&self) -> OperatingPoint {
        self.pieces[0].centroid()
    }
}

fn merged_interval(intervals: impl Iterator<Item = (f64, f64)>, near: f64) -> Option<(f64, f64)> {
    let mut all: Vec<(f64, f64)> = intervals.collect();
    if all.is_empty() {
        return None;
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(all.len());
    for (lo, hi) in all {
        match merged.last_mut() {
            Some(last) if lo <= last.1 + REGION_TOLERANCE => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged.into_iter().min_by(|a, b| {
        let da = (a.0 - near).max(near - a.1).max(0.0);
        let db = (b.0 - near).max(near - b.1).max(0.0);
        da.total_cmp(&db)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[[f64; 2]]) -> Vec<OperatingPoint> {
        raw.iter().copied().map(OperatingPoint::from).collect()
    }

    fn quad() -> ConvexPolygon {
        ConvexPolygon::new(pts(&[[98.8, 0.0], [247.0, 0.0], [215.0, 180.0], [81.0, 104.8]])).unwrap()
    }

    #[test]
    fn rejects_bad_polygons() {
        assert_eq!(
            ConvexPolygon::new(pts(&[[0.0, 0.0], [1.0, 0.0]])),
            Err(PolygonError::TooFewVertices(2))
        );
        assert_eq!(
            ConvexPolygon::new(pts(&[[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])),
            Err(PolygonError::Clockwise)
        );
        // notch at (90, 25)
        let notched = pts(&[[35.0, 0.0], [105.0, 0.0], [90.0, 25.0], [90.0, 45.0], [35.0, 20.0]]);
        assert_eq!(ConvexPolygon::new(notched), Err(PolygonError::NotConvex(2)));
        assert_eq!(
            ConvexPolygon::new(pts(&[[0.0, 0.0], [1.0, -1.0], [1.0, 1.0]])),
            Err(PolygonError::Negative(1))
        );
        // pentagram winds twice
        let star: Vec<[f64; 2]> = (0..5)
            .map(|k| {
                let a = std::f64::consts::TAU * (2 * k) as f64 / 5.0;
                [10.0 + a.cos(), 10.0 + a.sin()]
            })
            .collect();
        assert_eq!(ConvexPolygon::new(pts(&star)), Err(PolygonError::SelfIntersecting));
    }

    #[test]
    fn centroid_and_vertices_are_inside() {
        let q = quad();
        assert!(q.contains(q.centroid()));
        for v in q.vertices() {
            assert!(q.contains(*v));
        }
        assert!(!q.contains(OperatingPoint::new(248.0, 10.0)));
    }

    #[test]
    fn projection_hits_edge_foot_and_vertex() {
        let square = ConvexPolygon::new(pts(&[[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]])).unwrap();
        let inside = OperatingPoint::new(0.5, 1.5);
        assert_eq!(square.project(inside), inside);
        assert_eq!(square.project(OperatingPoint::new(3.0, 1.0)), OperatingPoint::new(2.0, 1.0));
        assert_eq!(square.project(OperatingPoint::new(3.0, 5.0)), OperatingPoint::new(2.0, 2.0));
    }

    #[test]
    fn cross_sections_of_split_region() {
        let a = ConvexPolygon::new(pts(&[[35.0, 0.0], [90.0, 0.0], [90.0, 45.0], [35.0, 20.0]])).unwrap();
        let b = ConvexPolygon::new(pts(&[[90.0, 0.0], [105.0, 0.0], [90.0, 25.0]])).unwrap();
        let region = OperatingRegion::new("test", vec![a, b]);
        let (lo, hi) = region.power_range(10.0, 50.0).unwrap();
        assert!((lo - 35.0).abs() < 1e-12);
        assert!((hi - 99.0).abs() < 1e-9);
        let (lo, hi) = region.heat_range(90.0, 0.0).unwrap();
        assert_eq!((lo, hi), (0.0, 45.0));
        assert!(region.heat_range(120.0, 0.0).is_none());
    }
}
