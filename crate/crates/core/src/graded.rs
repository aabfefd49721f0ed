//! Formal graded modules: per cohomological degree, a finite rank over ℂ and
//! a number of `C^∞(ℝ;ℂ)` summands.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One degree of a [`GradedQuant`]: `ℂ^finite ⊕ C^∞(ℝ;ℂ)^smooth`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Component {
    pub finite: u64,
    pub smooth: u64,
}

impl Component {
    pub const ZERO: Component = Component {
        finite: 0,
        smooth: 0,
    };

    pub const fn new(finite: u64, smooth: u64) -> Self {
        Component { finite, smooth }
    }

    pub fn is_zero(&self) -> bool {
        self.finite == 0 && self.smooth == 0
    }
}

impl std::ops::Add for Component {
    type Output = Component;

    fn add(self, o: Component) -> Component {
        Component::new(self.finite + o.finite, self.smooth + o.smooth)
    }
}

/// Lowest degrees always present in serialized form (the real dimension of
/// an almost toric base).
pub const BASE_DEGREES: usize = 3;

/// Graded quantization space. Degrees beyond the last nonzero one are
/// implicitly zero, so two values compare equal iff all degrees agree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedQuant {
    degrees: Vec<Component>,
}

impl GradedQuant {
    pub fn zero() -> Self {
        GradedQuant::default()
    }

    /// A single component concentrated in `degree`.
    pub fn concentrated(degree: usize, c: Component) -> Self {
        let mut g = GradedQuant::zero();
        g.set(degree, c);
        g
    }

    pub fn get(&self, degree: usize) -> Component {
        self.degrees.get(degree).copied().unwrap_or_default()
    }

    pub fn set(&mut self, degree: usize, c: Component) {
        if self.degrees.len() <= degree {
            self.degrees.resize(degree + 1, Component::ZERO);
        }
        self.degrees[degree] = c;
        self.trim();
    }

    pub fn add_to(&mut self, degree: usize, c: Component) {
        let cur = self.get(degree);
        self.set(degree, cur + c);
    }

    fn trim(&mut self) {
        while self.degrees.last().is_some_and(Component::is_zero) {
            self.degrees.pop();
        }
    }

    /// One past the highest nonzero degree.
    pub fn degree_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `(degree, component)` for every degree up to the last nonzero one.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Component)> + '_ {
        self.degrees.iter().copied().enumerate()
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &GradedQuant) -> GradedQuant {
        let n = self.degree_count().max(other.degree_count());
        let mut out = GradedQuant::zero();
        for d in 0..n {
            out.set(d, self.get(d) + other.get(d));
        }
        out
    }

    /// Sum over all degrees, forgetting the grading.
    pub fn total(&self) -> Component {
        self.degrees.iter().fold(Component::ZERO, |a, c| a + *c)
    }
}

impl fmt::Debug for GradedQuant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(d, c)| (d, (c.finite, c.smooth))))
            .finish()
    }
}

impl fmt::Display for GradedQuant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.iter().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" ⊕ ")?;
            }
            first = false;
            write!(f, "H{d}: C^{} + S^{}", c.finite, c.smooth)?;
        }
        Ok(())
    }
}

/// `{"0": [f, s], "1": [f, s], "2": [f, s], ...}`; degrees 0..=2 always
/// appear, higher degrees only when nonzero.
impl Serialize for GradedQuant {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n = self.degree_count().max(BASE_DEGREES);
        let map: BTreeMap<usize, [u64; 2]> = (0..n)
            .map(|d| {
                let c = self.get(d);
                (d, [c.finite, c.smooth])
            })
            .collect();
        // BTreeMap<usize, _> orders numerically; keys become strings in JSON.
        serializer.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }
}

impl<'de> Deserialize<'de> for GradedQuant {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, [u64; 2]>::deserialize(deserializer)?;
        let mut g = GradedQuant::zero();
        for (k, [f, s]) in raw {
            let d: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("degree key {k:?} is not a number")))?;
            g.set(d, Component::new(f, s));
        }
        Ok(g)
    }
}
