//! Possibly unbounded semitoric bases, cut down to a finite lattice window.
//!
//! Regions are finite intersections of closed rational half-planes. Whether
//! a region pokes out of the window is decided exactly with Fourier–Motzkin
//! elimination.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::Node;
use crate::lattice::RatPolygon;
use crate::quantization::{quantize_classification, BSClass, ClassEntry, QuantReport};
use crate::rat::{LatticePoint, Rat, RatPoint};

/// The closed half-plane `a x + b y <= c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl HalfPlane {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        HalfPlane { a, b, c }
    }

    pub fn int(a: i64, b: i64, c: i64) -> Self {
        HalfPlane::new(Rat::from_int(a), Rat::from_int(b), Rat::from_int(c))
    }

    /// `c - (a x + b y)`: positive strictly inside, zero on the line.
    fn slack(&self, p: &RatPoint) -> Rat {
        &self.c - (&self.a * &p.x + &self.b * &p.y)
    }
}

/// Intersection of half-planes. No half-planes means the whole plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Region {
    pub halfplanes: Vec<HalfPlane>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RegionLocation {
    Interior,
    Boundary,
    Outside,
}

impl Region {
    pub fn new(halfplanes: Vec<HalfPlane>) -> Self {
        Region { halfplanes }
    }

    pub fn locate(&self, p: &RatPoint) -> RegionLocation {
        let mut boundary = false;
        for h in &self.halfplanes {
            match h.slack(p).signum() {
                -1 => return RegionLocation::Outside,
                0 => boundary = true,
                _ => {}
            }
        }
        if boundary {
            RegionLocation::Boundary
        } else {
            RegionLocation::Interior
        }
    }

    pub fn is_empty(&self) -> bool {
        !feasible(self.constraints().collect())
    }

    fn constraints(&self) -> impl Iterator<Item = Constraint> + '_ {
        self.halfplanes.iter().map(|h| Constraint {
            a: h.a.clone(),
            b: h.b.clone(),
            c: h.c.clone(),
            strict: false,
        })
    }

    /// Whether some point of the region lies outside the closed window box.
    pub fn exceeds(&self, w: &Window) -> bool {
        let (x0, y0, x1, y1) = (
            Rat::from_int(w.x0),
            Rat::from_int(w.y0),
            Rat::from_int(w.x1),
            Rat::from_int(w.y1),
        );
        let one = Rat::one();
        let zero = Rat::zero();
        // x < x0, x > x1, y < y0, y > y1
        let escapes = [
            (one.clone(), zero.clone(), x0),
            (-&one, zero.clone(), -x1),
            (zero.clone(), one.clone(), y0),
            (zero, -one, -y1),
        ];
        escapes.into_iter().any(|(a, b, c)| {
            let mut cs: Vec<Constraint> = self.constraints().collect();
            cs.push(Constraint {
                a,
                b,
                c,
                strict: true,
            });
            feasible(cs)
        })
    }
}

impl From<&RatPolygon> for Region {
    fn from(poly: &RatPolygon) -> Region {
        // left of each counterclockwise edge: cross(b - a, p - a) >= 0
        let halfplanes = poly
            .edges()
            .map(|(a, b)| {
                let (dx, dy) = b.sub(a);
                // dy * x - dx * y <= dy * ax - dx * ay
                let c = &dy * &a.x - &dx * &a.y;
                HalfPlane::new(dy, -dx, c)
            })
            .collect();
        Region { halfplanes }
    }
}

#[derive(Clone, Debug)]
struct Constraint {
    a: Rat,
    b: Rat,
    c: Rat,
    strict: bool,
}

/// Real feasibility of `a x + b y (<|<=) c` constraints by eliminating `y`
/// and then `x`.
fn feasible(cs: Vec<Constraint>) -> bool {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut in_x: Vec<(Rat, Rat, bool)> = Vec::new();
    for k in cs {
        match k.b.signum() {
            0 => in_x.push((k.a, k.c, k.strict)),
            1 => upper.push((&k.a / &k.b, &k.c / &k.b, k.strict)),
            _ => {
                let nb = -&k.b;
                lower.push((&k.a / &nb, &k.c / &nb, k.strict));
            }
        }
    }
    // upper: y + au x <= cu ; lower: -y + al x <= cl
    for (au, cu, su) in &upper {
        for (al, cl, sl) in &lower {
            in_x.push((au + al, cu + cl, *su || *sl));
        }
    }
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for (a, c, strict) in in_x {
        match a.signum() {
            0 => {
                if c.is_negative() || (strict && c.is_zero()) {
                    return false;
                }
            }
            1 => hi = tighten(hi, c / a, strict, |v, h| v < h),
            _ => lo = tighten(lo, c / a, strict, |v, l| v > l),
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => l < h || (l == h && !ls && !hs),
        _ => true,
    }
}

/// Keeps the tighter of two bounds; equal bounds are strict if either is.
fn tighten(
    cur: Option<(Rat, bool)>,
    v: Rat,
    strict: bool,
    tighter: impl Fn(&Rat, &Rat) -> bool,
) -> Option<(Rat, bool)> {
    match cur {
        None => Some((v, strict)),
        Some((b, bs)) if b == v => Some((b, bs || strict)),
        Some((b, _)) if tighter(&v, &b) => Some((v, strict)),
        keep => keep,
    }
}

/// Closed integer box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Window {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemitoricError {
    #[error("window [{x0}, {x1}] × [{y0}, {y1}] is empty")]
    EmptyWindow { x0: i64, y0: i64, x1: i64, y1: i64 },
    #[error("node {0} is not strictly inside the region")]
    NodeNotInterior(usize),
}

impl SemitoricError {
    pub fn code(&self) -> &'static str {
        match self {
            SemitoricError::EmptyWindow { .. } => "empty_window",
            SemitoricError::NodeNotInterior(_) => "node_not_interior",
        }
    }
}

impl Window {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Result<Self, SemitoricError> {
        if x0 > x1 || y0 > y1 {
            return Err(SemitoricError::EmptyWindow { x0, y0, x1, y1 });
        }
        Ok(Window { x0, y0, x1, y1 })
    }
}

/// A semitoric base: a region together with its focus-focus nodes. Cut
/// anchors are boundary points of the region.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SemitoricModel {
    pub name: String,
    pub region: Region,
    pub nodes: Vec<Node>,
}

/// Classification and counts of the lattice points of `model` inside
/// `window`. `truncated` is set when the region extends beyond the window.
pub fn quantize_semitoric(
    model: &SemitoricModel,
    window: &Window,
) -> Result<QuantReport, SemitoricError> {
    let window = Window::new(window.x0, window.y0, window.x1, window.y1)?;
    for (i, n) in model.nodes.iter().enumerate() {
        if model.region.locate(&n.position) != RegionLocation::Interior {
            return Err(SemitoricError::NodeNotInterior(i));
        }
    }
    let mut nodes: BTreeMap<LatticePoint, u32> = BTreeMap::new();
    for n in &model.nodes {
        if let Some(p) = n.position.to_lattice() {
            *nodes.entry(p).or_default() += n.multiplicity;
        }
    }
    let mut classification = Vec::new();
    for x in window.x0..=window.x1 {
        for y in window.y0..=window.y1 {
            let p = LatticePoint::new(x, y);
            let class = match model.region.locate(&p.to_rat()) {
                RegionLocation::Outside => continue,
                RegionLocation::Boundary => BSClass::EllipticBoundary,
                RegionLocation::Interior => match nodes.get(&p) {
                    Some(&k) => BSClass::FocusFocusBS(k),
                    None => BSClass::RegularBS,
                },
            };
            classification.push(ClassEntry {
                point: p,
                class,
                half: None,
            });
        }
    }
    let graded = quantize_classification(classification.iter().map(|e| &e.class));
    let truncated = !model.region.is_empty() && model.region.exceeds(&window);
    Ok(QuantReport {
        classification,
        graded,
        // unbounded regions have no finite volume to report
        symplectic_volume: Rat::zero(),
        kaehler_dimension: None,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Component;

    fn upper_half_plane() -> Region {
        Region::new(vec![HalfPlane::int(0, -1, 0)])
    }

    #[test]
    fn feasibility_basics() {
        assert!(!upper_half_plane().is_empty());
        // y >= 1 and y <= 0
        let r = Region::new(vec![HalfPlane::int(0, -1, -1), HalfPlane::int(0, 1, 0)]);
        assert!(r.is_empty());
        // the line y = 0 is feasible but has no interior
        let line = Region::new(vec![HalfPlane::int(0, -1, 0), HalfPlane::int(0, 1, 0)]);
        assert!(!line.is_empty());
        assert_eq!(line.locate(&RatPoint::int(3, 0)), RegionLocation::Boundary);
    }

    #[test]
    fn bounded_region_inside_window_is_not_truncated() {
        let tri = RatPolygon::from_ints(&[(0, 0), (3, 0), (0, 3)]).unwrap();
        let r = Region::from(&tri);
        assert!(!r.exceeds(&Window::new(0, 0, 3, 3).unwrap()));
        assert!(r.exceeds(&Window::new(0, 0, 2, 3).unwrap()));
        assert!(upper_half_plane().exceeds(&Window::new(-100, 0, 100, 100).unwrap()));
    }

    #[test]
    fn polygon_region_matches_polygon_location() {
        let tri = RatPolygon::from_ints(&[(0, 0), (4, 0), (0, 4)]).unwrap();
        let model = SemitoricModel {
            name: "tri".into(),
            region: Region::from(&tri),
            nodes: vec![],
        };
        let r = quantize_semitoric(&model, &Window::new(-1, -1, 5, 5).unwrap()).unwrap();
        assert!(!r.truncated);
        assert_eq!(r.graded.get(2), Component::new(3, 0));
        assert_eq!(
            r.classification
                .iter()
                .filter(|e| e.class == BSClass::EllipticBoundary)
                .count(),
            12
        );
    }

    #[test]
    fn empty_window_and_empty_region() {
        let m = SemitoricModel {
            name: "h".into(),
            region: upper_half_plane(),
            nodes: vec![],
        };
        let err = quantize_semitoric(
            &m,
            &Window {
                x0: 1,
                y0: 0,
                x1: 0,
                y1: 0,
            },
        )
        .unwrap_err();
        assert_eq!(err.code(), "empty_window");
        let empty = SemitoricModel {
            name: "e".into(),
            region: Region::new(vec![HalfPlane::int(0, -1, -1), HalfPlane::int(0, 1, 0)]),
            nodes: vec![],
        };
        let r = quantize_semitoric(&empty, &Window::new(0, 0, 5, 5).unwrap()).unwrap();
        assert!(r.graded.is_zero());
        assert!(r.classification.is_empty());
        assert!(!r.truncated);
    }
}
