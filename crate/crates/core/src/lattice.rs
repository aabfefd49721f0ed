//! Integral-affine planar geometry over exact rationals: primitive
//! directions, unimodular maps, convex polygons, lattice enumeration and the
//! Delzant (smooth corner) test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rat::{gcd_i64, LatticePoint, Rat, RatPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("(0, 0) is not a direction")]
    ZeroVector,
    #[error("({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("matrix has determinant {0}, expected +1 or -1")]
    NotUnimodular(i64),
    #[error("operation needs integral vertices; vertex {0} is {1}")]
    NonIntegralVertex(usize, Box<RatPoint>),
    #[error("vertex index {index} out of range for a {len}-gon")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("vertex {vertex} is not Delzant (edge determinant {det})")]
    NotDelzant { vertex: usize, det: i64 },
    #[error("chop size must be positive, got {0}")]
    NonPositiveSize(Rat),
    #[error("chop of size {size} at vertex {vertex} reaches an adjacent vertex (edge lattice length {limit})")]
    ChopTooLarge {
        vertex: usize,
        size: Box<Rat>,
        limit: Box<Rat>,
    },
    #[error("coordinate does not fit in a machine integer")]
    Overflow,
}

impl LatticeError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::TooFewVertices(_) => "polygon_too_few_vertices",
            LatticeError::NotConvex(_) => "polygon_not_convex",
            LatticeError::ZeroVector => "zero_vector",
            LatticeError::NotPrimitive(..) => "vector_not_primitive",
            LatticeError::NotUnimodular(_) => "matrix_not_unimodular",
            LatticeError::NonIntegralVertex(..) => "inapplicable_non_integral",
            LatticeError::VertexOutOfRange { .. } => "vertex_out_of_range",
            LatticeError::NotDelzant { .. } => "vertex_not_delzant",
            LatticeError::NonPositiveSize(_) => "chop_size_not_positive",
            LatticeError::ChopTooLarge { .. } => "chop_overlap",
            LatticeError::Overflow => "integer_overflow",
        }
    }
}

/// A primitive integer direction: `gcd(|p|, |q|) = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PrimitiveVector {
    p: i64,
    q: i64,
}

impl PrimitiveVector {
    pub fn new(p: i64, q: i64) -> Result<Self, LatticeError> {
        match gcd_i64(p, q) {
            0 => Err(LatticeError::ZeroVector),
            1 => Ok(PrimitiveVector { p, q }),
            _ => Err(LatticeError::NotPrimitive(p, q)),
        }
    }

    /// Divides out the gcd of the components.
    pub fn reduce(p: i64, q: i64) -> Result<Self, LatticeError> {
        let g = gcd_i64(p, q);
        if g == 0 {
            return Err(LatticeError::ZeroVector);
        }
        Ok(PrimitiveVector { p: p / g, q: q / g })
    }

    /// Primitive direction of a rational vector together with its lattice
    /// length, so that `(dx, dy) = length * (p, q)`.
    pub fn of_rational(dx: &Rat, dy: &Rat) -> Result<(Self, Rat), LatticeError> {
        if dx.is_zero() && dy.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let l = dx.denom().lcm(dy.denom());
        let ix: BigInt = dx.numer() * (&l / dx.denom());
        let iy: BigInt = dy.numer() * (&l / dy.denom());
        let g = ix.gcd(&iy);
        let p = (&ix / &g).to_i64().ok_or(LatticeError::Overflow)?;
        let q = (&iy / &g).to_i64().ok_or(LatticeError::Overflow)?;
        let length = Rat::from(g) / Rat::from(l);
        Ok((PrimitiveVector { p, q }, length))
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn neg(&self) -> Self {
        PrimitiveVector {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl fmt::Display for PrimitiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl Serialize for PrimitiveVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.p, self.q].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PrimitiveVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [p, q] = <[i64; 2]>::deserialize(deserializer)?;
        PrimitiveVector::new(p, q).map_err(serde::de::Error::custom)
    }
}

/// `det [u w]` for integer vectors given as pairs.
pub fn det2(u: (i64, i64), w: (i64, i64)) -> i64 {
    u.0 * w.1 - u.1 * w.0
}

/// Integer 2x2 matrix `[[a, b], [c, d]]` with determinant ±1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct UnimodularMatrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl UnimodularMatrix {
    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, LatticeError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(UnimodularMatrix { a, b, c, d })
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn mul(&self, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        let det = self.det();
        UnimodularMatrix {
            a: self.d * det,
            b: -self.b * det,
            c: -self.c * det,
            d: self.a * det,
        }
    }

    pub fn pow(&self, k: u32) -> UnimodularMatrix {
        (0..k).fold(Self::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn apply_int(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Image of a primitive vector; unimodular maps preserve primitivity.
    pub fn apply_vector(&self, v: PrimitiveVector) -> PrimitiveVector {
        let (p, q) = self.apply_int((v.p, v.q));
        PrimitiveVector { p, q }
    }

    pub fn apply_point(&self, v: &RatPoint) -> RatPoint {
        let (a, b, c, d) = (
            Rat::from_int(self.a),
            Rat::from_int(self.b),
            Rat::from_int(self.c),
            Rat::from_int(self.d),
        );
        RatPoint::new(&a * &v.x + &b * &v.y, &c * &v.x + &d * &v.y)
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for UnimodularMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnimodularMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[i64; 2]; 2]>::deserialize(deserializer)?;
        UnimodularMatrix::new(a, b, c, d).map_err(serde::de::Error::custom)
    }
}

/// Where a point sits relative to a closed convex polygon.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// Integer points of a polygon split into strict interior and boundary, each
/// sorted lexicographically.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct LatticePoints {
    pub interior: Vec<LatticePoint>,
    pub boundary: Vec<LatticePoint>,
}

/// Per-vertex outcome of the Delzant test.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VertexCheck {
    pub index: usize,
    pub det: i64,
    pub ok: bool,
}

/// A strictly convex polygon with rational vertices, stored counterclockwise
/// with the lexicographically smallest vertex first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatPolygon {
    vertices: Vec<RatPoint>,
}

fn cross(o: &RatPoint, a: &RatPoint, b: &RatPoint) -> Rat {
    let (ax, ay) = a.sub(o);
    let (bx, by) = b.sub(o);
    ax * by - ay * bx
}

impl RatPolygon {
    /// Builds the canonical polygon from vertices in either orientation.
    /// Rejects anything that is not strictly convex.
    pub fn new(mut vertices: Vec<RatPoint>) -> Result<Self, LatticeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LatticeError::TooFewVertices(n));
        }
        let orientation = cross(&vertices[0], &vertices[1], &vertices[2]).signum();
        if orientation == 0 {
            return Err(LatticeError::NotConvex(1));
        }
        if orientation < 0 {
            vertices.reverse();
        }
        // Strict convexity: every other vertex lies strictly left of each edge.
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            for (j, p) in vertices.iter().enumerate() {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                if !cross(a, b, p).is_positive() {
                    return Err(LatticeError::NotConvex((i + 1) % n));
                }
            }
        }
        let start = (0..n)
            .min_by(|&i, &j| vertices[i].cmp(&vertices[j]))
            .expect("nonempty");
        vertices.rotate_left(start);
        Ok(RatPolygon { vertices })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<Self, LatticeError> {
        RatPolygon::new(pts.iter().map(|&(x, y)| RatPoint::int(x, y)).collect())
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Result<&RatPoint, LatticeError> {
        self.vertices.get(i).ok_or(LatticeError::VertexOutOfRange {
            index: i,
            len: self.len(),
        })
    }

    pub fn index_of(&self, p: &RatPoint) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(RatPoint::is_integral)
    }

    fn require_integral(&self) -> Result<(), LatticeError> {
        match self.vertices.iter().position(|v| !v.is_integral()) {
            Some(i) => Err(LatticeError::NonIntegralVertex(
                i,
                Box::new(self.vertices[i].clone()),
            )),
            None => Ok(()),
        }
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (&RatPoint, &RatPoint)> {
        let n = self.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Primitive directions `(u, w)` of the edges leaving vertex `i`, towards
    /// the next and the previous vertex respectively.
    pub fn corner_directions(
        &self,
        i: usize,
    ) -> Result<(PrimitiveVector, PrimitiveVector), LatticeError> {
        let n = self.len();
        let v = self.vertex(i)?;
        let next = &self.vertices[(i + 1) % n];
        let prev = &self.vertices[(i + n - 1) % n];
        let (ux, uy) = next.sub(v);
        let (wx, wy) = prev.sub(v);
        let (u, _) = PrimitiveVector::of_rational(&ux, &uy)?;
        let (w, _) = PrimitiveVector::of_rational(&wx, &wy)?;
        Ok((u, w))
    }

    /// `det(u, w)` of the primitive edge directions at vertex `i`. Positive
    /// for counterclockwise polygons; equal to 1 exactly at smooth corners.
    pub fn corner_det(&self, i: usize) -> Result<i64, LatticeError> {
        let (u, w) = self.corner_directions(i)?;
        Ok(det2((u.p, u.q), (w.p, w.q)))
    }

    /// Lattice length of each edge, in counterclockwise order from vertex 0.
    pub fn edge_lattice_lengths(&self) -> Vec<Rat> {
        self.edges()
            .map(|(a, b)| {
                let (dx, dy) = b.sub(a);
                PrimitiveVector::of_rational(&dx, &dy)
                    .expect("distinct vertices")
                    .1
            })
            .collect()
    }

    /// Sum of the lattice lengths of the edges.
    pub fn affine_perimeter(&self) -> Rat {
        self.edge_lattice_lengths()
            .into_iter()
            .fold(Rat::zero(), |acc, l| acc + l)
    }

    /// Euclidean area by the shoelace formula.
    pub fn area(&self) -> Rat {
        let twice = self
            .edges()
            .fold(Rat::zero(), |acc, (a, b)| acc + (&a.x * &b.y - &a.y * &b.x));
        twice / Rat::from_int(2)
    }

    pub fn locate(&self, p: &RatPoint) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match cross(a, b, p).signum() {
                -1 => return Location::Exterior,
                0 => on_edge = true,
                _ => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Integer bounding box `(xmin, ymin, xmax, ymax)` of the lattice points
    /// that can lie in the polygon.
    pub fn lattice_bbox(&self) -> (i64, i64, i64, i64) {
        let to = |b: BigInt| b.to_i64().expect("polygon coordinates fit in i64");
        let xs = self.vertices.iter().map(|v| &v.x);
        let ys = self.vertices.iter().map(|v| &v.y);
        let xmin = to(xs.clone().min().expect("nonempty").ceil());
        let xmax = to(xs.max().expect("nonempty").floor());
        let ymin = to(ys.clone().min().expect("nonempty").ceil());
        let ymax = to(ys.max().expect("nonempty").floor());
        (xmin, ymin, xmax, ymax)
    }

    /// Exact partition of the lattice points of the closed polygon into
    /// strict interior and boundary. Each row `y = const` meets the polygon
    /// in a closed interval, computed exactly from the edge half-planes.
    pub fn lattice_points(&self) -> LatticePoints {
        let (_, ymin, _, ymax) = self.lattice_bbox();
        let edges: Vec<(&RatPoint, Rat, Rat)> = self
            .edges()
            .map(|(a, b)| {
                let (dx, dy) = b.sub(a);
                (a, dx, dy)
            })
            .collect();
        let mut out = LatticePoints::default();
        for y in ymin..=ymax {
            let yr = Rat::from_int(y);
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            let mut on_edge = false;
            let mut empty = false;
            for (a, dx, dy) in &edges {
                // cross(b - a, p - a) >= 0 reads  rest - dy * x >= 0
                let rest = dx * (&yr - &a.y) + dy * &a.x;
                match dy.signum() {
                    0 => match rest.signum() {
                        -1 => empty = true,
                        0 => on_edge = true,
                        _ => {}
                    },
                    1 => {
                        let bound = rest / dy;
                        if hi.as_ref().is_none_or(|h| bound < *h) {
                            hi = Some(bound);
                        }
                    }
                    _ => {
                        let bound = rest / dy;
                        if lo.as_ref().is_none_or(|l| bound > *l) {
                            lo = Some(bound);
                        }
                    }
                }
            }
            let (Some(lo), Some(hi)) = (lo, hi) else {
                continue;
            };
            if empty || lo > hi {
                continue;
            }
            let to = |b: BigInt| b.to_i64().expect("polygon coordinates fit in i64");
            let (first, last) = (to(lo.ceil()), to(hi.floor()));
            for x in first..=last {
                let xr = Rat::from_int(x);
                let p = LatticePoint::new(x, y);
                if on_edge || xr == lo || xr == hi {
                    out.boundary.push(p);
                } else {
                    out.interior.push(p);
                }
            }
        }
        out.interior.sort();
        out.boundary.sort();
        out
    }

    /// Checks Pick's identity `A = I + B/2 - 1`.
    pub fn pick_check(&self) -> Result<bool, LatticeError> {
        self.require_integral()?;
        let pts = self.lattice_points();
        let rhs = Rat::from_int(pts.interior.len() as i64) + Rat::new(pts.boundary.len() as i64, 2)
            - Rat::one();
        Ok(self.area() == rhs)
    }

    /// Delzant test at every vertex: the two primitive edge directions must
    /// form a lattice basis.
    pub fn is_delzant(&self) -> Result<Vec<VertexCheck>, LatticeError> {
        self.require_integral()?;
        (0..self.len())
            .map(|i| {
                let det = self.corner_det(i)?;
                Ok(VertexCheck {
                    index: i,
                    det,
                    ok: det.abs() == 1,
                })
            })
            .collect()
    }

    /// Replaces a smooth corner by the two points at lattice distance `size`
    /// along its edges.
    pub fn corner_chop(&self, vertex: usize, size: &Rat) -> Result<RatPolygon, LatticeError> {
        if !size.is_positive() {
            return Err(LatticeError::NonPositiveSize(size.clone()));
        }
        let n = self.len();
        let v = self.vertex(vertex)?.clone();
        let (u, w) = self.corner_directions(vertex)?;
        let det = det2((u.p, u.q), (w.p, w.q));
        if det.abs() != 1 {
            return Err(LatticeError::NotDelzant { vertex, det });
        }
        let lengths = self.edge_lattice_lengths();
        let limit = std::cmp::min(&lengths[vertex], &lengths[(vertex + n - 1) % n]).clone();
        if size >= &limit {
            return Err(LatticeError::ChopTooLarge {
                vertex,
                size: Box::new(size.clone()),
                limit: Box::new(limit),
            });
        }
        let toward_prev = v.offset(size, w.p, w.q);
        let toward_next = v.offset(size, u.p, u.q);
        let mut vertices = self.vertices.clone();
        vertices.splice(vertex..=vertex, [toward_prev, toward_next]);
        RatPolygon::new(vertices)
    }

    /// Chops the corner located at point `v`.
    pub fn corner_chop_at(&self, v: &RatPoint, size: &Rat) -> Result<RatPolygon, LatticeError> {
        let i = self.index_of(v).ok_or(LatticeError::VertexOutOfRange {
            index: usize::MAX,
            len: self.len(),
        })?;
        self.corner_chop(i, size)
    }

    /// Image under `x -> A x + t`, re-canonicalized.
    pub fn apply_unimodular(&self, a: &UnimodularMatrix, t: &RatPoint) -> RatPolygon {
        let image = self
            .vertices
            .iter()
            .map(|v| {
                let w = a.apply_point(v);
                RatPoint::new(w.x + &t.x, w.y + &t.y)
            })
            .collect();
        RatPolygon::new(image).expect("affine bijections preserve strict convexity")
    }
}

impl Serialize for RatPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            vertices: &'a [RatPoint],
        }
        Repr {
            vertices: &self.vertices,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatPolygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            vertices: Vec<RatPoint>,
        }
        let r = Repr::deserialize(deserializer)?;
        RatPolygon::new(r.vertices).map_err(serde::de::Error::custom)
    }
}

/// Number of integers strictly inside the open interval `(lo, hi)`.
pub fn integers_in_open_interval(lo: &Rat, hi: &Rat) -> u64 {
    if hi <= lo {
        return 0;
    }
    let first: BigInt = lo.floor() + 1;
    let last: BigInt = hi.ceil() - 1;
    if last < first {
        0
    } else {
        (last - first + 1u8).to_u64().unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp2(d: i64) -> RatPolygon {
        RatPolygon::from_ints(&[(0, 0), (d, 0), (0, d)]).unwrap()
    }

    fn blowup9() -> RatPolygon {
        RatPolygon::from_ints(&[
            (4, 0),
            (5, 0),
            (6, 1),
            (6, 2),
            (5, 4),
            (4, 5),
            (2, 6),
            (1, 6),
            (0, 5),
            (0, 4),
            (1, 2),
            (2, 1),
        ])
        .unwrap()
    }

    fn unit_square() -> RatPolygon {
        RatPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(cp2(9).area(), Rat::new(81, 2));
        assert_eq!(unit_square().area(), Rat::one());
        assert_eq!(blowup9().area(), Rat::from_int(24));
    }

    #[test]
    fn canonical_form_is_ccw_from_smallest_vertex() {
        let p = RatPolygon::from_ints(&[(0, 1), (1, 1), (1, 0), (0, 0)]).unwrap();
        assert_eq!(p, unit_square());
        assert_eq!(p.vertices()[0], RatPoint::int(0, 0));
        assert_eq!(p.vertices()[1], RatPoint::int(1, 0));
    }

    #[test]
    fn rejects_degenerate_polygons() {
        assert_eq!(
            RatPolygon::from_ints(&[(0, 0), (1, 0)]),
            Err(LatticeError::TooFewVertices(2))
        );
        assert!(RatPolygon::from_ints(&[(0, 0), (1, 0), (2, 0)]).is_err());
        // collinear middle vertex
        assert!(RatPolygon::from_ints(&[(0, 0), (1, 0), (2, 0), (0, 2)]).is_err());
        // pentagram winds twice
        assert!(RatPolygon::from_ints(&[(0, 0), (4, 2), (-1, 3), (3, -1), (2, 4)]).is_err());
    }

    #[test]
    fn lattice_counts() {
        let t = cp2(9).lattice_points();
        assert_eq!(t.interior.len(), 28);
        assert_eq!(t.boundary.len(), 27);
        let s = unit_square().lattice_points();
        assert!(s.interior.is_empty());
        assert_eq!(s.boundary.len(), 4);
        let b = blowup9().lattice_points();
        assert_eq!(b.interior.len(), 19);
        assert_eq!(b.boundary.len(), 12);
    }

    #[test]
    fn pick() {
        assert_eq!(blowup9().pick_check(), Ok(true));
        assert_eq!(unit_square().pick_check(), Ok(true));
        assert_eq!(cp2(9).pick_check(), Ok(true));
        let half = RatPolygon::new(vec![
            RatPoint::int(0, 0),
            RatPoint::new(Rat::new(1, 2), Rat::zero()),
            RatPoint::int(0, 1),
        ])
        .unwrap();
        assert_eq!(
            half.pick_check().unwrap_err().code(),
            "inapplicable_non_integral"
        );
    }

    #[test]
    fn delzant() {
        assert!(cp2(9).is_delzant().unwrap().iter().all(|c| c.ok));
        let checks = blowup9().is_delzant().unwrap();
        assert_eq!(checks.len(), 12);
        assert!(checks.iter().all(|c| c.ok && c.det == 1));
        // corner at the origin with edges (1,0) and (1,3)
        let q = RatPolygon::from_ints(&[(0, 0), (3, 0), (4, 8), (1, 3)]).unwrap();
        let c = &q.is_delzant().unwrap()[0];
        assert_eq!((c.index, c.det, c.ok), (0, 3, false));
    }

    #[test]
    fn chops_reproduce_the_nine_point_blowup() {
        let three = Rat::from_int(3);
        let mut p = cp2(9);
        for v in [(0, 0), (9, 0), (0, 9)] {
            p = p.corner_chop_at(&RatPoint::int(v.0, v.1), &three).unwrap();
        }
        assert_eq!(p.area(), Rat::from_int(27));
        assert_eq!(p.len(), 6);
        let one = Rat::one();
        for v in [(3, 0), (6, 0), (6, 3), (3, 6), (0, 6), (0, 3)] {
            p = p.corner_chop_at(&RatPoint::int(v.0, v.1), &one).unwrap();
        }
        assert_eq!(p, blowup9());
    }

    #[test]
    fn chop_errors() {
        let p = cp2(9);
        assert_eq!(
            p.corner_chop(0, &Rat::zero()).unwrap_err().code(),
            "chop_size_not_positive"
        );
        assert_eq!(
            p.corner_chop(0, &Rat::from_int(9)).unwrap_err().code(),
            "chop_overlap"
        );
        let q = RatPolygon::from_ints(&[(0, 0), (3, 0), (4, 8), (1, 3)]).unwrap();
        assert_eq!(
            q.corner_chop(0, &Rat::new(1, 2)).unwrap_err().code(),
            "vertex_not_delzant"
        );
    }

    #[test]
    fn chop_drops_area_by_half_size_squared() {
        let p = cp2(9);
        let s = Rat::new(5, 3);
        let q = p.corner_chop(1, &s).unwrap();
        assert_eq!(p.area() - q.area(), &s * &s / Rat::from_int(2));
    }

    #[test]
    fn unimodular_images() {
        let id = UnimodularMatrix::IDENTITY;
        assert_eq!(cp2(9).apply_unimodular(&id, &RatPoint::int(0, 0)), cp2(9));
        let swap = UnimodularMatrix::new(0, 1, 1, 0).unwrap();
        let img = cp2(9).apply_unimodular(&swap, &RatPoint::int(0, 0));
        assert_eq!(img.lattice_points().interior.len(), 28);
        let shear = UnimodularMatrix::new(1, 1, 0, 1).unwrap();
        let sq = unit_square().apply_unimodular(&shear, &RatPoint::int(0, 0));
        assert_eq!(sq.area(), Rat::one());
        assert!(UnimodularMatrix::new(2, 0, 0, 1).is_err());
    }

    #[test]
    fn primitive_vectors() {
        assert!(PrimitiveVector::new(2, 4).is_err());
        assert!(PrimitiveVector::new(0, 0).is_err());
        assert_eq!(
            PrimitiveVector::reduce(-2, -2).unwrap(),
            PrimitiveVector::new(-1, -1).unwrap()
        );
        let (v, len) = PrimitiveVector::of_rational(&Rat::new(3, 2), &Rat::new(-3, 4)).unwrap();
        assert_eq!((v.p(), v.q()), (2, -1));
        assert_eq!(len, Rat::new(3, 4));
    }

    #[test]
    fn open_interval_integers() {
        assert_eq!(
            integers_in_open_interval(&Rat::zero(), &Rat::from_int(3)),
            2
        );
        assert_eq!(
            integers_in_open_interval(&Rat::new(-1, 2), &Rat::new(7, 2)),
            4
        );
        assert_eq!(
            integers_in_open_interval(&Rat::new(1, 3), &Rat::new(2, 3)),
            0
        );
        assert_eq!(integers_in_open_interval(&Rat::one(), &Rat::zero()), 0);
    }
}
