//! Worked examples as constructible fixtures: ℂP², its nine-fold blowup,
//! the K3 half-disk and the glued K3 base, S² × S², the spherical pendulum
//! model, and moment-map samplers for the spin-spin and spin-oscillator
//! systems.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::diagram::{symplectic_sum, ClosedBase, Diagram, DiagramError, Node};
use crate::graded::{Component, GradedQuant};
use crate::lattice::{LatticeError, PrimitiveVector, RatPolygon};
use crate::quantization::{report, report_closed, QuantReport};
use crate::rat::{Rat, RatPoint};
use crate::semitoric::{
    quantize_semitoric, HalfPlane, Region, SemitoricError, SemitoricModel, Window,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("invalid parameter {name}: {reason}")]
    BadParameter { name: String, reason: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Semitoric(#[from] SemitoricError),
}

impl From<LatticeError> for CatalogError {
    fn from(e: LatticeError) -> Self {
        CatalogError::Diagram(e.into())
    }
}

impl CatalogError {
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::UnknownExample(_) => "unknown_example",
            CatalogError::BadParameter { .. } => "bad_parameter",
            CatalogError::Diagram(e) => e.code(),
            CatalogError::Semitoric(e) => e.code(),
        }
    }
}

/// ℂP² as the triangle `(0,0), (d,0), (0,d)`.
pub fn cp2(d: i64) -> Result<Diagram, CatalogError> {
    if d < 1 {
        return Err(CatalogError::BadParameter {
            name: "d".into(),
            reason: format!("side must be at least 1, got {d}"),
        });
    }
    Ok(Diagram::toric(RatPolygon::from_ints(&[
        (0, 0),
        (d, 0),
        (0, d),
    ])?))
}

/// The vertex list of the nine-fold blowup of ℂP², counterclockwise.
pub const CP2_BLOWUP9_VERTICES: [(i64, i64); 12] = [
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
];

/// ℂP² # 9 ℂP²-bar: three corner chops of size 3 on `cp2(9)`, then one of
/// size 1 at each of the six new corners.
pub fn cp2_blowup9() -> Result<Diagram, CatalogError> {
    let mut poly = cp2(9)?.polygon;
    let three = Rat::from_int(3);
    for (x, y) in [(0, 0), (9, 0), (0, 9)] {
        poly = poly.corner_chop_at(&RatPoint::int(x, y), &three)?;
    }
    let one = Rat::one();
    for (x, y) in [(3, 0), (6, 0), (6, 3), (3, 6), (0, 6), (0, 3)] {
        poly = poly.corner_chop_at(&RatPoint::int(x, y), &one)?;
    }
    Ok(Diagram::toric(poly))
}

/// Trades for the K3 half-disk: `(vertex, t)`. Each eigenline runs along a
/// side of the hexagon of interior lattice points. One end of every side
/// places its node on the nearest corner (`t = 1`), the other end on the
/// side's midpoint (`t = 2`), so the twelve nodes land on the twelve
/// non-central interior lattice points.
pub const K3_HALF_TRADES: [((i64, i64), i64); 12] = [
    ((2, 1), 1),
    ((6, 1), 2),
    ((5, 0), 1),
    ((5, 4), 2),
    ((6, 2), 1),
    ((2, 6), 2),
    ((4, 5), 1),
    ((0, 5), 2),
    ((1, 6), 1),
    ((1, 2), 2),
    ((0, 4), 1),
    ((4, 0), 2),
];

/// One half of the K3 base: the nine-fold blowup with all twelve corners
/// traded.
pub fn k3_half() -> Result<Diagram, CatalogError> {
    let mut d = cp2_blowup9()?;
    for ((x, y), t) in K3_HALF_TRADES {
        let v = d
            .polygon
            .index_of(&RatPoint::int(x, y))
            .expect("vertex of the blowup");
        d = d.nodal_trade(v, &Rat::from_int(t), 1)?;
    }
    Ok(d)
}

/// Two K3 halves glued along their boundary tori.
pub fn k3() -> Result<ClosedBase, CatalogError> {
    let half = k3_half()?;
    Ok(symplectic_sum(&half, &half, true)?)
}

/// Slide step that moves every K3 node off the lattice without making cuts
/// cross.
pub fn k3_slide_delta() -> Rat {
    Rat::new(-1, 3)
}

pub fn k3_slid() -> Result<ClosedBase, CatalogError> {
    let delta = k3_slide_delta();
    Ok(k3()?.map_halves(|d| d.slide_all_by(&delta))?)
}

/// The square of side 2; if `traded`, the corner `(2,2)` is traded for a
/// node at `(1,1)`.
pub fn s2xs2(traded: bool) -> Result<Diagram, CatalogError> {
    let d = Diagram::toric(RatPolygon::from_ints(&[(0, 0), (2, 0), (2, 2), (0, 2)])?);
    if !traded {
        return Ok(d);
    }
    let v = d.polygon.index_of(&RatPoint::int(2, 2)).expect("corner");
    Ok(d.nodal_trade(v, &Rat::one(), 1)?)
}

/// S² × S² with all four corners traded (nodes at distance 1/2), the
/// smallest square that can be glued into a closed base.
pub fn s2xs2_full() -> Result<Diagram, CatalogError> {
    let mut d = s2xs2(false)?;
    for v in 0..4 {
        d = d.nodal_trade(v, &Rat::new(1, 2), 1)?;
    }
    Ok(d)
}

/// Normalized spherical pendulum: the upper half-plane with one node above
/// the origin, integral exactly when `bs`.
pub fn spherical_pendulum_model(bs: bool) -> SemitoricModel {
    let t = if bs { Rat::one() } else { Rat::new(3, 2) };
    let node = Node::new(
        RatPoint::int(0, 0),
        PrimitiveVector::new(0, 1).expect("primitive"),
        &t,
        1,
    );
    SemitoricModel {
        name: if bs {
            "spherical-pendulum"
        } else {
            "spherical-pendulum-perturbed"
        }
        .into(),
        region: Region::new(vec![HalfPlane::int(0, -1, 0)]),
        nodes: vec![node],
    }
}

/// Default 10 × 10 window for the semitoric models.
pub const SEMITORIC_WINDOW: Window = Window {
    x0: -5,
    y0: 0,
    x1: 5,
    y1: 10,
};

/// A catalog fixture in the shared JSON schema.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(untagged)]
pub enum CatalogItem {
    Diagram(Diagram),
    Closed(ClosedBase),
    Semitoric(SemitoricModel),
}

impl CatalogItem {
    /// Quantization report; `window` only matters for semitoric models.
    pub fn report(&self, window: Option<&Window>) -> Result<QuantReport, CatalogError> {
        Ok(match self {
            CatalogItem::Diagram(d) => report(d),
            CatalogItem::Closed(c) => report_closed(c),
            CatalogItem::Semitoric(m) => {
                quantize_semitoric(m, window.unwrap_or(&SEMITORIC_WINDOW))?
            }
        })
    }
}

/// Names accepted by [`build`].
pub const NAMES: [&str; 13] = [
    "cp2",
    "cp2-blowup9",
    "k3-half",
    "k3-half-slid",
    "k3",
    "k3-slid",
    "s2xs2",
    "s2xs2-traded",
    "s2xs2-traded-slid",
    "s2xs2-full",
    "s2xs2-sum",
    "spherical-pendulum",
    "spherical-pendulum-perturbed",
];

/// Builds a named fixture. `cp2` takes the integer parameter `d`
/// (default 9).
pub fn build(name: &str, params: &BTreeMap<String, Rat>) -> Result<CatalogItem, CatalogError> {
    if let Some(k) = params
        .keys()
        .find(|k| !(name == "cp2" && k.as_str() == "d"))
    {
        return Err(CatalogError::BadParameter {
            name: k.clone(),
            reason: format!("not a parameter of {name}"),
        });
    }
    Ok(match name {
        "cp2" => {
            let d = match params.get("d") {
                None => 9,
                Some(r) => r.to_i64().ok_or_else(|| CatalogError::BadParameter {
                    name: "d".into(),
                    reason: format!("{r} is not an integer"),
                })?,
            };
            CatalogItem::Diagram(cp2(d)?)
        }
        "cp2-blowup9" => CatalogItem::Diagram(cp2_blowup9()?),
        "k3-half" => CatalogItem::Diagram(k3_half()?),
        "k3-half-slid" => CatalogItem::Diagram(k3_half()?.slide_all_by(&k3_slide_delta())?),
        "k3" => CatalogItem::Closed(k3()?),
        "k3-slid" => CatalogItem::Closed(k3_slid()?),
        "s2xs2" => CatalogItem::Diagram(s2xs2(false)?),
        "s2xs2-traded" => CatalogItem::Diagram(s2xs2(true)?),
        "s2xs2-traded-slid" => CatalogItem::Diagram(s2xs2(true)?.nodal_slide(0, &Rat::new(3, 2))?),
        "s2xs2-full" => CatalogItem::Diagram(s2xs2_full()?),
        "s2xs2-sum" => {
            let d = s2xs2_full()?;
            CatalogItem::Closed(symplectic_sum(&d, &d, true)?)
        }
        "spherical-pendulum" => CatalogItem::Semitoric(spherical_pendulum_model(true)),
        "spherical-pendulum-perturbed" => CatalogItem::Semitoric(spherical_pendulum_model(false)),
        other => return Err(CatalogError::UnknownExample(other.to_string())),
    })
}

/// Expected parts of a fixture's report.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExpectedFragment {
    pub graded: GradedQuant,
    pub symplectic_volume: Option<Rat>,
    pub kaehler_dimension: Option<i64>,
    pub truncated: bool,
}

impl ExpectedFragment {
    pub fn matches(&self, r: &QuantReport) -> bool {
        r.graded == self.graded
            && self
                .symplectic_volume
                .as_ref()
                .is_none_or(|v| *v == r.symplectic_volume)
            && self
                .kaehler_dimension
                .is_none_or(|k| r.kaehler_dimension == Some(k))
            && r.truncated == self.truncated
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExampleSpec {
    pub name: &'static str,
    pub parameters: BTreeMap<String, Rat>,
    pub expected: Option<ExpectedFragment>,
}

fn top(finite: u64, smooth: u64) -> GradedQuant {
    GradedQuant::concentrated(2, Component::new(finite, smooth))
}

fn expect(
    graded: GradedQuant,
    vol: Option<i64>,
    kaehler: Option<i64>,
    truncated: bool,
) -> Option<ExpectedFragment> {
    Some(ExpectedFragment {
        graded,
        symplectic_volume: vol.map(Rat::from_int),
        kaehler_dimension: kaehler,
        truncated,
    })
}

/// Every fixture with its known quantization.
pub fn examples() -> Vec<ExampleSpec> {
    let none = BTreeMap::new;
    let d = |v: i64| BTreeMap::from([("d".to_string(), Rat::from_int(v))]);
    vec![
        ExampleSpec {
            name: "cp2",
            parameters: d(9),
            expected: expect(top(28, 0), Some(81), None, false),
        },
        ExampleSpec {
            name: "cp2",
            parameters: d(4),
            expected: expect(top(3, 0), Some(16), None, false),
        },
        ExampleSpec {
            name: "cp2",
            parameters: d(1),
            expected: expect(top(0, 0), Some(1), None, false),
        },
        ExampleSpec {
            name: "cp2-blowup9",
            parameters: none(),
            expected: expect(top(19, 0), Some(48), None, false),
        },
        ExampleSpec {
            name: "k3-half",
            parameters: none(),
            expected: expect(top(7, 12), Some(48), None, false),
        },
        ExampleSpec {
            name: "k3-half-slid",
            parameters: none(),
            expected: expect(top(19, 0), Some(48), None, false),
        },
        ExampleSpec {
            name: "k3",
            parameters: none(),
            expected: expect(top(14, 24), Some(96), Some(50), false),
        },
        ExampleSpec {
            name: "k3-slid",
            parameters: none(),
            expected: expect(top(38, 0), Some(96), Some(50), false),
        },
        ExampleSpec {
            name: "s2xs2",
            parameters: none(),
            expected: expect(top(1, 0), Some(8), None, false),
        },
        ExampleSpec {
            name: "s2xs2-traded",
            parameters: none(),
            expected: expect(top(0, 1), Some(8), None, false),
        },
        ExampleSpec {
            name: "s2xs2-traded-slid",
            parameters: none(),
            expected: expect(top(1, 0), Some(8), None, false),
        },
        ExampleSpec {
            name: "s2xs2-full",
            parameters: none(),
            expected: expect(top(1, 0), Some(8), None, false),
        },
        ExampleSpec {
            name: "s2xs2-sum",
            parameters: none(),
            expected: expect(top(2, 0), Some(16), None, false),
        },
        ExampleSpec {
            name: "spherical-pendulum",
            parameters: none(),
            expected: expect(top(109, 1), None, None, true),
        },
        ExampleSpec {
            name: "spherical-pendulum-perturbed",
            parameters: none(),
            expected: expect(top(110, 0), None, None, true),
        },
    ]
}

/// Values of `(f1, f2)` over a grid, tagged with the system they came from.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct MomentSample {
    pub source: String,
    pub points: Vec<(f64, f64)>,
}

impl MomentSample {
    /// `f1,f2` per line, with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("f1,f2\n");
        for (a, b) in &self.points {
            s.push_str(&format!("{a:.12},{b:.12}\n"));
        }
        s
    }
}

/// `n` evenly spaced values on `[lo, hi]`, both ends included.
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + step * i as f64 })
}

/// `n` evenly spaced angles on `[0, 2π)`.
fn angles(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |i| 2.0 * PI * i as f64 / n as f64)
}

fn sphere_point(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn sphere_grid(grid: usize) -> Vec<[f64; 3]> {
    let thetas: Vec<f64> = linspace(0.0, PI, grid).collect();
    thetas
        .iter()
        .flat_map(|&t| angles(grid).map(move |p| sphere_point(t, p)))
        .collect()
}

/// Spin-spin integrals on S² × S²:
/// `f1 = z1/2 + (x1 x2 + y1 y2 + z1 z2)/2`, `f2 = z1 + z2`.
pub fn spin_spin(a: [f64; 3], b: [f64; 3]) -> (f64, f64) {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    (a[2] / 2.0 + dot / 2.0, a[2] + b[2])
}

/// Spin-oscillator integrals on ℝ² × S²:
/// `f1 = z + (u² + v²)/2`, `f2 = (x u + y v)/2`.
pub fn spin_oscillator(u: f64, v: f64, s: [f64; 3]) -> (f64, f64) {
    (s[2] + (u * u + v * v) / 2.0, (s[0] * u + s[1] * v) / 2.0)
}

fn check_grid(grid: usize) -> Result<(), CatalogError> {
    if grid < 2 {
        return Err(CatalogError::BadParameter {
            name: "grid".into(),
            reason: format!("need at least 2 samples per axis, got {grid}"),
        });
    }
    Ok(())
}

/// Samples the spin-spin system on a `grid⁴` product of spherical-angle grids.
pub fn sample_spin_spin(grid: usize) -> Result<MomentSample, CatalogError> {
    check_grid(grid)?;
    let sphere = sphere_grid(grid);
    let points = sphere
        .iter()
        .flat_map(|&a| sphere.iter().map(move |&b| spin_spin(a, b)))
        .collect();
    Ok(MomentSample {
        source: "spin-spin".into(),
        points,
    })
}

/// Samples the spin-oscillator system on a polar grid of the disk of the
/// given radius times a spherical-angle grid.
pub fn sample_spin_oscillator(grid: usize, radius: f64) -> Result<MomentSample, CatalogError> {
    check_grid(grid)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CatalogError::BadParameter {
            name: "radius".into(),
            reason: format!("must be positive and finite, got {radius}"),
        });
    }
    let sphere = sphere_grid(grid);
    let disk: Vec<(f64, f64)> = linspace(0.0, radius, grid)
        .flat_map(|r| angles(grid).map(move |a| (r * a.cos(), r * a.sin())))
        .collect();
    let points = disk
        .iter()
        .flat_map(|&(u, v)| sphere.iter().map(move |&s| spin_oscillator(u, v, s)))
        .collect();
    Ok(MomentSample {
        source: "spin-oscillator".into(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantization::quantize;

    #[test]
    fn cp2_sizes() {
        assert_eq!(cp2(1).unwrap().polygon.lattice_points().interior.len(), 0);
        assert_eq!(cp2(4).unwrap().polygon.lattice_points().interior.len(), 3);
        assert_eq!(cp2(0).unwrap_err().code(), "bad_parameter");
    }

    #[test]
    fn blowup_matches_vertex_list() {
        let built = cp2_blowup9().unwrap();
        let listed = RatPolygon::from_ints(&CP2_BLOWUP9_VERTICES).unwrap();
        assert_eq!(built.polygon, listed);
    }

    #[test]
    fn k3_half_nodes_sit_on_the_ring() {
        let d = k3_half().unwrap();
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        let mut got: Vec<(i64, i64)> = d
            .nodes
            .iter()
            .map(|n| {
                let p = n.position.to_lattice().unwrap();
                (p.x, p.y)
            })
            .collect();
        got.sort();
        let mut want = vec![
            (3, 1),
            (4, 1),
            (5, 1),
            (2, 2),
            (5, 2),
            (1, 3),
            (5, 3),
            (1, 4),
            (4, 4),
            (1, 5),
            (2, 5),
            (3, 5),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(quantize(&d), top(7, 12));
    }

    #[test]
    fn unknown_names_and_params() {
        assert_eq!(
            build("nope", &BTreeMap::new()).unwrap_err().code(),
            "unknown_example"
        );
        let p = BTreeMap::from([("d".to_string(), Rat::from_int(3))]);
        assert_eq!(build("k3", &p).unwrap_err().code(), "bad_parameter");
        let half = BTreeMap::from([("d".to_string(), Rat::new(1, 2))]);
        assert_eq!(build("cp2", &half).unwrap_err().code(), "bad_parameter");
    }

    #[test]
    fn pendulum_windowed() {
        let m = spherical_pendulum_model(true);
        let r = quantize_semitoric(&m, &SEMITORIC_WINDOW).unwrap();
        assert!(r.truncated);
        assert_eq!(r.graded.get(2).smooth, 1);
        let r = quantize_semitoric(&spherical_pendulum_model(false), &SEMITORIC_WINDOW).unwrap();
        assert_eq!(r.graded.get(2).smooth, 0);
        let bad = Window {
            x0: 0,
            y0: 0,
            x1: -1,
            y1: 0,
        };
        assert_eq!(
            quantize_semitoric(&m, &bad).unwrap_err().code(),
            "empty_window"
        );
    }

    #[test]
    fn spin_spin_poles() {
        let north = [0.0, 0.0, 1.0];
        let south = [0.0, 0.0, -1.0];
        assert_eq!(spin_spin(north, north), (1.0, 2.0));
        assert_eq!(spin_spin(north, south).1, 0.0);
    }

    #[test]
    fn spin_oscillator_poles() {
        assert_eq!(spin_oscillator(0.0, 0.0, [0.0, 0.0, -1.0]), (-1.0, 0.0));
        assert_eq!(spin_oscillator(0.0, 0.0, [0.0, 0.0, 1.0]), (1.0, 0.0));
    }

    #[test]
    fn sampler_sizes_and_errors() {
        assert_eq!(sample_spin_spin(3).unwrap().points.len(), 81);
        assert_eq!(sample_spin_oscillator(2, 1.0).unwrap().points.len(), 16);
        assert_eq!(sample_spin_spin(1).unwrap_err().code(), "bad_parameter");
        assert_eq!(
            sample_spin_oscillator(3, 0.0).unwrap_err().code(),
            "bad_parameter"
        );
        let csv = sample_spin_spin(2).unwrap().to_csv();
        assert!(csv.starts_with("f1,f2\n"));
        assert_eq!(csv.lines().count(), 17);
    }
}
