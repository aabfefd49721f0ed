//! Bohr–Sommerfeld classification over lattice points and the global count
//! of the real geometric quantization of an almost toric base.
//!
//! In normalized action coordinates the Bohr–Sommerfeld fibers sit over the
//! integer lattice. Each regular one contributes a copy of ℂ, each
//! Bohr–Sommerfeld focus-focus fiber with `n` nodal points contributes `n`
//! copies of `C^∞(ℝ;ℂ)`, and elliptic fibers over the boundary contribute
//! nothing. All contributions are placed in degree 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{BaseKind, ClosedBase, Diagram};
use crate::graded::{Component, GradedQuant};
use crate::rat::{LatticePoint, Rat};

/// Degree receiving every contribution of a four-dimensional base.
pub const TOP_DEGREE: usize = 2;

/// Fiber type over a point of the base.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BSClass {
    RegularBS,
    EllipticBoundary,
    /// Bohr–Sommerfeld focus-focus fiber carrying this many nodal points.
    FocusFocusBS(u32),
    NotBS,
}

impl BSClass {
    /// Contribution of one fiber of this class.
    pub fn contribution(self) -> Component {
        match self {
            BSClass::RegularBS => Component::new(1, 0),
            BSClass::FocusFocusBS(n) => Component::new(0, n as u64),
            BSClass::EllipticBoundary | BSClass::NotBS => Component::ZERO,
        }
    }
}

pub type Classification = BTreeMap<LatticePoint, BSClass>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantError {
    #[error("the Kähler dimension formula applies only to K3 bases")]
    NotK3,
    #[error("Kähler dimension {0} is not an integer")]
    NonIntegralDimension(Rat),
}

impl QuantError {
    pub fn code(&self) -> &'static str {
        match self {
            QuantError::NotK3 => "inapplicable_not_k3",
            QuantError::NonIntegralDimension(_) => "non_integral_dimension",
        }
    }
}

/// Classifies every lattice point of the (closed) polygon. Points outside
/// the polygon are implicitly [`BSClass::NotBS`] and are not listed.
pub fn classify_fibers(d: &Diagram) -> Classification {
    let pts = d.polygon.lattice_points();
    let mut nodes: BTreeMap<LatticePoint, u32> = BTreeMap::new();
    for n in &d.nodes {
        if let Some(p) = n.position.to_lattice() {
            *nodes.entry(p).or_default() += n.multiplicity;
        }
    }
    let mut out = Classification::new();
    for p in pts.interior {
        let class = match nodes.get(&p) {
            Some(&k) => BSClass::FocusFocusBS(k),
            None => BSClass::RegularBS,
        };
        out.insert(p, class);
    }
    for p in pts.boundary {
        out.insert(p, BSClass::EllipticBoundary);
    }
    out
}

/// Sums the contributions of a classification into the top degree.
pub fn quantize_classification<'a>(classes: impl IntoIterator<Item = &'a BSClass>) -> GradedQuant {
    let total = classes
        .into_iter()
        .fold(Component::ZERO, |acc, c| acc + c.contribution());
    GradedQuant::concentrated(TOP_DEGREE, total)
}

pub fn quantize(d: &Diagram) -> GradedQuant {
    quantize_classification(classify_fibers(d).values())
}

/// Direct sum of the two halves; only strict interior points of each half
/// contribute.
pub fn quantize_closed(c: &ClosedBase) -> GradedQuant {
    quantize(&c.half_a).direct_sum(&quantize(&c.half_b))
}

/// Symplectic volume `2 · area`, in units of `(2π)²`. Trades and slides
/// leave it unchanged.
pub fn symplectic_volume(d: &Diagram) -> Rat {
    Rat::from_int(2) * d.polygon.area()
}

pub fn symplectic_volume_closed(c: &ClosedBase) -> Rat {
    symplectic_volume(&c.half_a) + symplectic_volume(&c.half_b)
}

/// Dimension of the Kähler quantization of a K3 base, `c₁(L)²/2 + 2` with
/// `c₁(L)²` the total symplectic volume.
pub fn kaehler_dimension_k3(c: &ClosedBase) -> Result<i64, QuantError> {
    if c.kind != BaseKind::K3 {
        return Err(QuantError::NotK3);
    }
    let dim = symplectic_volume_closed(c) / Rat::from_int(2) + Rat::from_int(2);
    dim.to_i64().ok_or(QuantError::NonIntegralDimension(dim))
}

/// Which half of a closed base a classified point belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    A,
    B,
}

/// One classified lattice point. Serialized as `[point, class]`, or
/// `[point, class, half]` for closed bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassEntry {
    pub point: LatticePoint,
    pub class: BSClass,
    pub half: Option<Half>,
}

impl Serialize for ClassEntry {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.half {
            None => (&self.point, &self.class).serialize(serializer),
            Some(h) => (&self.point, &self.class, h).serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ClassEntry {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Closed(LatticePoint, BSClass, Half),
            Open(LatticePoint, BSClass),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Closed(point, class, half) => ClassEntry {
                point,
                class,
                half: Some(half),
            },
            Repr::Open(point, class) => ClassEntry {
                point,
                class,
                half: None,
            },
        })
    }
}

/// Full quantization report, the JSON payload of the `quantize` command.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuantReport {
    pub classification: Vec<ClassEntry>,
    pub graded: GradedQuant,
    pub symplectic_volume: Rat,
    pub kaehler_dimension: Option<i64>,
    pub truncated: bool,
}

impl QuantReport {
    /// Recomputes the graded total from the classification alone.
    pub fn rederive_graded(&self) -> GradedQuant {
        quantize_classification(self.classification.iter().map(|e| &e.class))
    }
}

fn entries(c: &Classification, half: Option<Half>) -> impl Iterator<Item = ClassEntry> + '_ {
    c.iter()
        .map(move |(&point, &class)| ClassEntry { point, class, half })
}

pub fn report(d: &Diagram) -> QuantReport {
    let classes = classify_fibers(d);
    let graded = quantize_classification(classes.values());
    QuantReport {
        classification: entries(&classes, None).collect(),
        graded,
        symplectic_volume: symplectic_volume(d),
        kaehler_dimension: None,
        truncated: false,
    }
}

pub fn report_closed(c: &ClosedBase) -> QuantReport {
    let a = classify_fibers(&c.half_a);
    let b = classify_fibers(&c.half_b);
    let classification = entries(&a, Some(Half::A))
        .chain(entries(&b, Some(Half::B)))
        .collect();
    QuantReport {
        classification,
        graded: quantize_closed(c),
        symplectic_volume: symplectic_volume_closed(c),
        kaehler_dimension: kaehler_dimension_k3(c).ok(),
        truncated: false,
    }
}
