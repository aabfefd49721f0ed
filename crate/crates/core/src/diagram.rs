//! Almost toric base diagrams: a Delzant polygon decorated with focus-focus
//! nodes, their eigenlines and branch cuts. Nodal trade, nodal slide and
//! the symplectic sum of two fully traded disks.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::lattice::{det2, LatticeError, Location, PrimitiveVector, RatPolygon, UnimodularMatrix};
use crate::rat::{Rat, RatPoint};

/// A focus-focus fiber in the base: `position = cut_anchor + t * eigenline`
/// for some `t > 0`, with `multiplicity` nodal points on the fiber.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Node {
    pub position: RatPoint,
    pub eigenline: PrimitiveVector,
    pub multiplicity: u32,
    pub cut_anchor: RatPoint,
}

impl Node {
    pub fn new(
        cut_anchor: RatPoint,
        eigenline: PrimitiveVector,
        t: &Rat,
        multiplicity: u32,
    ) -> Node {
        Node {
            position: cut_anchor.offset(t, eigenline.p(), eigenline.q()),
            eigenline,
            multiplicity,
            cut_anchor,
        }
    }

    /// The `t` with `position = cut_anchor + t * eigenline`, if any.
    pub fn param(&self) -> Option<Rat> {
        let (dx, dy) = self.position.sub(&self.cut_anchor);
        let (p, q) = (
            Rat::from_int(self.eigenline.p()),
            Rat::from_int(self.eigenline.q()),
        );
        // (dx, dy) must be parallel to (p, q)
        if &dx * &q != &dy * &p {
            return None;
        }
        Some(if p.is_zero() { dy / q } else { dx / p })
    }

    /// Monodromy around the node, `I + k [[-pq, p²], [-q², pq]]`.
    pub fn monodromy(&self) -> UnimodularMatrix {
        monodromy(self.eigenline, self.multiplicity)
    }
}

/// Monodromy of `multiplicity` nodes sharing the eigenline `v`. Fixes `v`;
/// determinant 1, trace 2.
pub fn monodromy(v: PrimitiveVector, multiplicity: u32) -> UnimodularMatrix {
    let (p, q, k) = (v.p(), v.q(), multiplicity as i64);
    UnimodularMatrix::new(1 - k * p * q, k * p * p, -k * q * q, 1 + k * p * q)
        .expect("shear conjugates have determinant 1")
}

/// An invariant violated by a diagram. Node and vertex fields are indices
/// into the diagram's node list and polygon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    TradedVertexOutOfRange { vertex: usize },
    ZeroMultiplicity { node: usize },
    NodeNotInterior { node: usize, on_boundary: bool },
    NodeOffEigenline { node: usize },
    AnchorNotVertex { node: usize },
    AnchorNotTraded { node: usize, vertex: usize },
    UntradedNotDelzant { vertex: usize, det: i64 },
    SharedAnchor { a: usize, b: usize },
    CoincidentNodes { a: usize, b: usize },
    CutsCross { a: usize, b: usize },
    CutsOverlap { a: usize, b: usize },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::TradedVertexOutOfRange { .. } => "traded_vertex_out_of_range",
            Violation::ZeroMultiplicity { .. } => "node_zero_multiplicity",
            Violation::NodeNotInterior { .. } => "node_not_interior",
            Violation::NodeOffEigenline { .. } => "node_off_eigenline",
            Violation::AnchorNotVertex { .. } => "anchor_not_vertex",
            Violation::AnchorNotTraded { .. } => "anchor_not_traded",
            Violation::UntradedNotDelzant { .. } => "untraded_vertex_not_delzant",
            Violation::SharedAnchor { .. } => "cut_anchor_shared",
            Violation::CoincidentNodes { .. } => "nodes_coincide",
            Violation::CutsCross { .. } => "cuts_cross",
            Violation::CutsOverlap { .. } => "cuts_overlap",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TradedVertexOutOfRange { vertex } => {
                write!(f, "traded vertex {vertex} does not exist")
            }
            Violation::ZeroMultiplicity { node } => write!(f, "node {node} has multiplicity 0"),
            Violation::NodeNotInterior {
                node,
                on_boundary: true,
            } => {
                write!(f, "node {node} lies on the polygon boundary")
            }
            Violation::NodeNotInterior { node, .. } => {
                write!(f, "node {node} lies outside the polygon")
            }
            Violation::NodeOffEigenline { node } => {
                write!(
                    f,
                    "node {node} is not on the open eigenline ray from its cut anchor"
                )
            }
            Violation::AnchorNotVertex { node } => {
                write!(f, "cut anchor of node {node} is not a polygon vertex")
            }
            Violation::AnchorNotTraded { node, vertex } => {
                write!(
                    f,
                    "cut anchor of node {node} is vertex {vertex}, which is not marked traded"
                )
            }
            Violation::UntradedNotDelzant { vertex, det } => {
                write!(
                    f,
                    "untraded vertex {vertex} is not Delzant (determinant {det})"
                )
            }
            Violation::SharedAnchor { a, b } => write!(f, "nodes {a} and {b} share a cut anchor"),
            Violation::CoincidentNodes { a, b } => write!(f, "nodes {a} and {b} coincide"),
            Violation::CutsCross { a, b } => write!(f, "cuts of nodes {a} and {b} cross"),
            Violation::CutsOverlap { a, b } => write!(f, "cuts of nodes {a} and {b} overlap"),
        }
    }
}

impl Serialize for Violation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Violation", 2)?;
        s.serialize_field("code", self.code())?;
        s.serialize_field("message", &self.to_string())?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("vertex {0} is already traded")]
    AlreadyTraded(usize),
    #[error("parameter must be positive, got {0}")]
    NonPositiveParameter(Rat),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("node position {0} is not strictly interior")]
    NotInterior(Box<RatPoint>),
    #[error("node index {index} out of range ({len} nodes)")]
    NodeOutOfRange { index: usize, len: usize },
    #[error("cut conflict: {0}")]
    CutConflict(Violation),
    #[error("invalid diagram: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(
        "vertex {vertex} of {half} is not traded; the boundary is not a smooth torus fibration"
    )]
    UntradedVertex { half: &'static str, vertex: usize },
    #[error("boundary affine perimeters differ: {0} vs {1}")]
    PerimeterMismatch(Box<Rat>, Box<Rat>),
    #[error("pre-quantum line bundles are not declared compatible along the gluing torus")]
    PrequantumIncompatible,
}

impl DiagramError {
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::Lattice(e) => e.code(),
            DiagramError::AlreadyTraded(_) => "vertex_already_traded",
            DiagramError::NonPositiveParameter(_) => "parameter_not_positive",
            DiagramError::ZeroMultiplicity => "multiplicity_not_positive",
            DiagramError::NotInterior(_) => "node_not_interior",
            DiagramError::NodeOutOfRange { .. } => "node_out_of_range",
            DiagramError::CutConflict(_) => "cut_collision",
            DiagramError::Invalid(_) => "invalid_diagram",
            DiagramError::UntradedVertex { .. } => "untraded_vertex",
            DiagramError::PerimeterMismatch(..) => "perimeter_mismatch",
            DiagramError::PrequantumIncompatible => "prequantum_incompatible",
        }
    }
}

fn cross(u: &(Rat, Rat), w: &(Rat, Rat)) -> Rat {
    &u.0 * &w.1 - &u.1 * &w.0
}

fn dot(u: &(Rat, Rat), w: &(Rat, Rat)) -> Rat {
    &u.0 * &w.0 + &u.1 * &w.1
}

/// Pairwise conflicts between the cuts `[anchor, position]` of two nodes.
///
/// A node may sit on another node's cut, and two cuts may touch at an
/// endpoint; what is rejected is a crossing interior to both segments, a
/// collinear overlap of positive length, a shared anchor, or coincident
/// positions.
fn cut_conflict(a: &Node, b: &Node, ia: usize, ib: usize) -> Option<Violation> {
    if a.position == b.position {
        return Some(Violation::CoincidentNodes { a: ia, b: ib });
    }
    if a.cut_anchor == b.cut_anchor {
        return Some(Violation::SharedAnchor { a: ia, b: ib });
    }
    let d1 = a.position.sub(&a.cut_anchor);
    let d2 = b.position.sub(&b.cut_anchor);
    let e = b.cut_anchor.sub(&a.cut_anchor);
    let denom = cross(&d1, &d2);
    let zero = Rat::zero();
    let one = Rat::one();
    if !denom.is_zero() {
        let s = cross(&e, &d2) / &denom;
        let r = cross(&e, &d1) / &denom;
        if s > zero && s < one && r > zero && r < one {
            return Some(Violation::CutsCross { a: ia, b: ib });
        }
        return None;
    }
    if !cross(&e, &d1).is_zero() {
        return None;
    }
    // collinear: project b's endpoints onto a's parameter
    let len2 = dot(&d1, &d1);
    let s0 = dot(&e, &d1) / &len2;
    let s1 = dot(&b.position.sub(&a.cut_anchor), &d1) / &len2;
    let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
    let lo = std::cmp::max(lo, zero);
    let hi = std::cmp::min(hi, one);
    (lo < hi).then_some(Violation::CutsOverlap { a: ia, b: ib })
}

/// Base of an almost toric fibration with only elliptic and focus-focus
/// singularities. Trades never move the polygon; they only add node and cut
/// metadata.
#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
pub struct Diagram {
    pub polygon: RatPolygon,
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub traded_vertices: BTreeSet<usize>,
}

impl Diagram {
    /// The toric diagram of `polygon`: no trades, no nodes.
    pub fn toric(polygon: RatPolygon) -> Diagram {
        Diagram {
            polygon,
            nodes: Vec::new(),
            traded_vertices: BTreeSet::new(),
        }
    }

    pub fn node(&self, index: usize) -> Result<&Node, DiagramError> {
        self.nodes.get(index).ok_or(DiagramError::NodeOutOfRange {
            index,
            len: self.nodes.len(),
        })
    }

    pub fn is_fully_traded(&self) -> bool {
        (0..self.polygon.len()).all(|v| self.traded_vertices.contains(&v))
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.nodes.iter().map(|n| n.multiplicity as u64).sum()
    }

    /// Every violated invariant, in a deterministic order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.polygon.len();
        for &v in &self.traded_vertices {
            if v >= n {
                out.push(Violation::TradedVertexOutOfRange { vertex: v });
            }
        }
        for v in (0..n).filter(|v| !self.traded_vertices.contains(v)) {
            let det = self.polygon.corner_det(v).expect("vertex in range");
            if det.abs() != 1 {
                out.push(Violation::UntradedNotDelzant { vertex: v, det });
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.multiplicity == 0 {
                out.push(Violation::ZeroMultiplicity { node: i });
            }
            match self.polygon.locate(&node.position) {
                Location::Interior => {}
                loc => out.push(Violation::NodeNotInterior {
                    node: i,
                    on_boundary: loc == Location::Boundary,
                }),
            }
            if !node.param().is_some_and(|t| t.is_positive()) {
                out.push(Violation::NodeOffEigenline { node: i });
            }
            match self.polygon.index_of(&node.cut_anchor) {
                None => out.push(Violation::AnchorNotVertex { node: i }),
                Some(v) if !self.traded_vertices.contains(&v) => {
                    out.push(Violation::AnchorNotTraded { node: i, vertex: v })
                }
                Some(_) => {}
            }
        }
        for i in 0..self.nodes.len() {
            for j in i + 1..self.nodes.len() {
                if let Some(v) = cut_conflict(&self.nodes[i], &self.nodes[j], i, j) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn check_placement(&self, candidate: &Node, skip: Option<usize>) -> Result<(), DiagramError> {
        if self.polygon.locate(&candidate.position) != Location::Interior {
            return Err(DiagramError::NotInterior(Box::new(
                candidate.position.clone(),
            )));
        }
        let new_index = skip.unwrap_or(self.nodes.len());
        for (j, other) in self.nodes.iter().enumerate() {
            if Some(j) == skip {
                continue;
            }
            if let Some(v) = cut_conflict(candidate, other, new_index, j) {
                return Err(DiagramError::CutConflict(v));
            }
        }
        Ok(())
    }

    /// Trades the elliptic-elliptic corner `vertex` for a focus-focus node at
    /// `vertex + t (u + w)`, where `u`, `w` are the primitive edge directions.
    pub fn nodal_trade(
        &self,
        vertex: usize,
        t: &Rat,
        multiplicity: u32,
    ) -> Result<Diagram, DiagramError> {
        let v = self.polygon.vertex(vertex)?.clone();
        if self.traded_vertices.contains(&vertex) {
            return Err(DiagramError::AlreadyTraded(vertex));
        }
        if !t.is_positive() {
            return Err(DiagramError::NonPositiveParameter(t.clone()));
        }
        if multiplicity == 0 {
            return Err(DiagramError::ZeroMultiplicity);
        }
        let (u, w) = self.polygon.corner_directions(vertex)?;
        let det = det2((u.p(), u.q()), (w.p(), w.q()));
        if det.abs() != 1 {
            return Err(LatticeError::NotDelzant { vertex, det }.into());
        }
        let eigenline = PrimitiveVector::reduce(u.p() + w.p(), u.q() + w.q())?;
        let node = Node::new(v, eigenline, t, multiplicity);
        self.check_placement(&node, None)?;
        let mut out = self.clone();
        out.nodes.push(node);
        out.traded_vertices.insert(vertex);
        Ok(out)
    }

    /// Moves node `index` along its eigenline to `cut_anchor + new_t * eigenline`.
    pub fn nodal_slide(&self, index: usize, new_t: &Rat) -> Result<Diagram, DiagramError> {
        let node = self.node(index)?;
        if !new_t.is_positive() {
            return Err(DiagramError::NonPositiveParameter(new_t.clone()));
        }
        let moved = Node::new(
            node.cut_anchor.clone(),
            node.eigenline,
            new_t,
            node.multiplicity,
        );
        self.check_placement(&moved, Some(index))?;
        let mut out = self.clone();
        out.nodes[index] = moved;
        Ok(out)
    }

    /// Slides every node by `delta` along its eigenline.
    pub fn slide_all_by(&self, delta: &Rat) -> Result<Diagram, DiagramError> {
        let mut out = self.clone();
        for i in 0..self.nodes.len() {
            let t = self.nodes[i].param().ok_or(DiagramError::Invalid(vec![
                Violation::NodeOffEigenline { node: i },
            ]))?;
            out = out.nodal_slide(i, &(t + delta))?;
        }
        Ok(out)
    }

    /// Image under the integral-affine map `x -> A x + t`.
    pub fn transform(&self, a: &UnimodularMatrix, t: &RatPoint) -> Diagram {
        let map = |p: &RatPoint| {
            let q = a.apply_point(p);
            RatPoint::new(q.x + &t.x, q.y + &t.y)
        };
        let polygon = self.polygon.apply_unimodular(a, t);
        let traded_vertices = self
            .traded_vertices
            .iter()
            .filter_map(|&v| self.polygon.vertices().get(v))
            .map(|p| polygon.index_of(&map(p)).expect("vertices map to vertices"))
            .collect();
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                position: map(&n.position),
                eigenline: a.apply_vector(n.eigenline),
                multiplicity: n.multiplicity,
                cut_anchor: map(&n.cut_anchor),
            })
            .collect();
        Diagram {
            polygon,
            nodes,
            traded_vertices,
        }
    }

    /// Same diagram with nodes sorted by position, the serialized order.
    pub fn canonical(&self) -> Diagram {
        let mut out = self.clone();
        out.nodes.sort_by(|a, b| {
            a.position
                .cmp(&b.position)
                .then_with(|| a.cut_anchor.cmp(&b.cut_anchor))
        });
        out
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let canon = self.canonical();
        let mut s = serializer.serialize_struct("Diagram", 3)?;
        s.serialize_field("polygon", &canon.polygon)?;
        s.serialize_field("nodes", &canon.nodes)?;
        s.serialize_field("traded_vertices", &canon.traded_vertices)?;
        s.end()
    }
}

/// What the closed manifold over a glued sphere base is known to be.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseKind {
    /// Twenty-four nodal points over the sphere.
    K3,
    Generic,
}

/// Nodal points an almost toric fibration over the sphere carries exactly
/// when its total space is a K3 surface.
pub const K3_NODE_COUNT: u64 = 24;

/// Sphere base obtained by gluing two fully traded disks along their
/// boundary circles.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClosedBase {
    pub half_a: Diagram,
    pub half_b: Diagram,
    pub gluing_note: String,
    pub kind: BaseKind,
}

impl ClosedBase {
    pub fn total_multiplicity(&self) -> u64 {
        self.half_a.total_multiplicity() + self.half_b.total_multiplicity()
    }

    pub fn node_count(&self) -> usize {
        self.half_a.nodes.len() + self.half_b.nodes.len()
    }

    /// Applies `f` to both halves, keeping the gluing record.
    pub fn map_halves(
        &self,
        mut f: impl FnMut(&Diagram) -> Result<Diagram, DiagramError>,
    ) -> Result<ClosedBase, DiagramError> {
        Ok(ClosedBase {
            half_a: f(&self.half_a)?,
            half_b: f(&self.half_b)?,
            gluing_note: self.gluing_note.clone(),
            kind: self.kind,
        })
    }
}

/// Glues two fully traded disks along their boundary tori.
///
/// Checkable preconditions only: both halves valid and fully traded, equal
/// boundary affine perimeter, and the caller's assertion that the
/// pre-quantum bundles restrict compatibly to the gluing torus.
pub fn symplectic_sum(
    a: &Diagram,
    b: &Diagram,
    prequantum_compatible: bool,
) -> Result<ClosedBase, DiagramError> {
    for (half, d) in [("half_a", a), ("half_b", b)] {
        let violations = d.validate();
        if !violations.is_empty() {
            return Err(DiagramError::Invalid(violations));
        }
        if let Some(vertex) = (0..d.polygon.len()).find(|v| !d.traded_vertices.contains(v)) {
            return Err(DiagramError::UntradedVertex { half, vertex });
        }
    }
    let (pa, pb) = (a.polygon.affine_perimeter(), b.polygon.affine_perimeter());
    if pa != pb {
        return Err(DiagramError::PerimeterMismatch(Box::new(pa), Box::new(pb)));
    }
    if !prequantum_compatible {
        return Err(DiagramError::PrequantumIncompatible);
    }
    let total = a.total_multiplicity() + b.total_multiplicity();
    let kind = if total == K3_NODE_COUNT {
        BaseKind::K3
    } else {
        BaseKind::Generic
    };
    let gluing_note = format!(
        "fiber sum along boundary tori: affine perimeter {pa}, {} + {} nodes ({} + {} nodal points), pre-quantum bundles declared compatible",
        a.nodes.len(),
        b.nodes.len(),
        a.total_multiplicity(),
        b.total_multiplicity(),
    );
    Ok(ClosedBase {
        half_a: a.clone(),
        half_b: b.clone(),
        gluing_note,
        kind,
    })
}
