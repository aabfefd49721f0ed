//! Symbolic Mayer–Vietoris and Künneth bookkeeping.
//!
//! Cohomology groups are free modules over one of two coefficient objects,
//! ℂ or `S = C^∞(ℝ;ℂ)`. Maps between them are constant integer matrices, so
//! kernel and cokernel ranks follow from the rank of the matrix over ℚ,
//! computed here by fraction-free (Bareiss) elimination.
//!
//! The saturated neighbourhood `V` of a focus-focus fiber with `n` nodes is
//! covered by `V₀` (the fiber minus the nodes, thickened) and `Vₙ` (small
//! balls `W_j` around the nodes). `V₀ ∩ W_j` has two components `W_j^±`.
//! Degree-0 groups vanish and so does everything in degree 2 except on
//! `V`, which leaves
//!
//! ```text
//! 0 → H¹(V) → H¹(V₀) ⊕ H¹(Vₙ) → H¹(V₀ ∩ Vₙ) → H²(V) → 0
//! ```
//!
//! with `H¹(Vₙ) = 0`, so `H¹(V)` is the kernel and `H²(V)` the cokernel of
//! the restriction map built by [`build_ff_covering_map`].

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::graded::{Component, GradedQuant};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MvError {
    #[error("coefficient objects differ: {0:?} vs {1:?}")]
    CoeffMismatch(CoeffObj, CoeffObj),
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("S ⊗ S in degrees ({p}, {q}): a completion might be needed for the Künneth formula")]
    CompletionGuard { p: usize, q: usize },
    #[error("a focus-focus fiber has at least one node")]
    NoNodes,
}

impl MvError {
    pub fn code(&self) -> &'static str {
        match self {
            MvError::CoeffMismatch(..) => "coeff_mismatch",
            MvError::DimensionMismatch { .. } => "dimension_mismatch",
            MvError::CompletionGuard { .. } => "completion_guard",
            MvError::NoNodes => "no_nodes",
        }
    }
}

/// Coefficient object of a free module.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CoeffObj {
    /// ℂ
    FinC,
    /// `C^∞(ℝ;ℂ)`
    SmoothS,
}

impl CoeffObj {
    /// `ℂ ⊗ ℂ = ℂ`, `ℂ ⊗ S = S`; `S ⊗ S` is refused.
    pub fn tensor(self, other: CoeffObj) -> Option<CoeffObj> {
        match (self, other) {
            (CoeffObj::FinC, CoeffObj::FinC) => Some(CoeffObj::FinC),
            (CoeffObj::SmoothS, CoeffObj::SmoothS) => None,
            _ => Some(CoeffObj::SmoothS),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FreeModule {
    pub coeff: CoeffObj,
    pub rank: usize,
}

impl FreeModule {
    pub fn new(coeff: CoeffObj, rank: usize) -> Self {
        FreeModule { coeff, rank }
    }
}

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// Rank over ℚ by Bareiss fraction-free elimination. All intermediate
    /// entries are minors of the input, so every division is exact. Runs in
    /// `i128` and redoes the elimination over `BigInt` only on overflow.
    pub fn rank(&self) -> usize {
        let small: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        bareiss_rank_i128(small, self.cols).unwrap_or_else(|| {
            let big = self
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect();
            bareiss_rank_big(big, self.cols)
        })
    }
}

fn bareiss_rank_i128(mut a: Vec<Vec<i128>>, n: usize) -> Option<usize> {
    let m = a.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(pivot) = (rank..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..m {
            for c in col + 1..n {
                let x = a[rank][col].checked_mul(a[r][c])?;
                let y = a[r][col].checked_mul(a[rank][c])?;
                a[r][c] = x.checked_sub(y)? / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        rank += 1;
    }
    Some(rank)
}

fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>, n: usize) -> usize {
    let m = a.len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(pivot) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..m {
            for c in col + 1..n {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_rows() {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

/// A map of free modules given by a constant integer matrix of shape
/// `codomain.rank × domain.rank`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FreeModuleMap {
    pub domain: FreeModule,
    pub codomain: FreeModule,
    pub matrix: IntMatrix,
}

impl FreeModuleMap {
    pub fn new(
        domain: FreeModule,
        codomain: FreeModule,
        matrix: IntMatrix,
    ) -> Result<Self, MvError> {
        let m = FreeModuleMap {
            domain,
            codomain,
            matrix,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), MvError> {
        if self.domain.coeff != self.codomain.coeff {
            return Err(MvError::CoeffMismatch(
                self.domain.coeff,
                self.codomain.coeff,
            ));
        }
        if self.matrix.rows() != self.codomain.rank || self.matrix.cols() != self.domain.rank {
            return Err(MvError::DimensionMismatch {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
                expected_rows: self.codomain.rank,
                expected_cols: self.domain.rank,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct KernelCokernel {
    pub rank: usize,
    pub kernel_rank: usize,
    pub cokernel_rank: usize,
}

pub fn kernel_cokernel(m: &FreeModuleMap) -> Result<KernelCokernel, MvError> {
    m.check()?;
    let rank = m.matrix.rank();
    Ok(KernelCokernel {
        rank,
        kernel_rank: m.domain.rank - rank,
        cokernel_rank: m.codomain.rank - rank,
    })
}

/// Shape of a saturated neighbourhood of a focus-focus fiber.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FFCovering {
    pub n_nodes: usize,
    pub compact: bool,
    /// Whether the singular fiber is Bohr–Sommerfeld.
    pub bs: bool,
}

/// The restriction `H¹(V₀) ⊕ H¹(Vₙ) → H¹(V₀ ∩ Vₙ)`, plus whether both sides
/// vanish because the fiber is not Bohr–Sommerfeld.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoveringMap {
    pub map: FreeModuleMap,
    pub vanishes: bool,
}

/// Builds the restriction map for the covering of a focus-focus fiber.
///
/// `V₀` has one `S` summand per arc of the fiber between nodes: `n` arcs in
/// a cycle when compact, `n + 1` in a chain with two unbounded ends
/// otherwise. Row `2j` is `W_j^-` and row `2j + 1` is `W_j^+`; each gets a 1
/// in the column of the arc it touches.
pub fn build_ff_covering_map(c: &FFCovering) -> Result<CoveringMap, MvError> {
    let n = c.n_nodes;
    if n == 0 {
        return Err(MvError::NoNodes);
    }
    if !c.bs {
        let zero = FreeModule::new(CoeffObj::SmoothS, 0);
        return Ok(CoveringMap {
            map: FreeModuleMap::new(zero, zero, IntMatrix::zeros(0, 0))?,
            vanishes: true,
        });
    }
    let arcs = if c.compact { n } else { n + 1 };
    let mut matrix = IntMatrix::zeros(2 * n, arcs);
    for j in 0..n {
        // arc j precedes node j and arc j + 1 follows it (cyclically if compact)
        let before = j;
        let after = if c.compact { (j + 1) % n } else { j + 1 };
        matrix.set(2 * j, before, 1);
        matrix.set(2 * j + 1, after, 1);
    }
    let map = FreeModuleMap::new(
        FreeModule::new(CoeffObj::SmoothS, arcs),
        FreeModule::new(CoeffObj::SmoothS, 2 * n),
        matrix,
    )?;
    Ok(CoveringMap {
        map,
        vanishes: false,
    })
}

/// Quantization of a saturated neighbourhood of a focus-focus fiber, read off
/// the Mayer–Vietoris sequence: `H⁰ = 0`, `H¹ = ker`, `H² = coker`.
pub fn local_ff_quantization(c: &FFCovering) -> Result<GradedQuant, MvError> {
    let cov = build_ff_covering_map(c)?;
    let kc = kernel_cokernel(&cov.map)?;
    let mut g = GradedQuant::zero();
    g.set(1, Component::new(0, kc.kernel_rank as u64));
    g.set(2, Component::new(0, kc.cokernel_rank as u64));
    Ok(g)
}

/// Künneth product of graded quantizations:
/// `Hⁿ(M₁ × M₂) = ⊕_{p+q=n} Hᵖ(M₁) ⊗ H^q(M₂)`, with `ℂᵃ ⊗ ℂᵇ = ℂᵃᵇ`,
/// `ℂᵃ ⊗ Sᵇ = Sᵃᵇ`, and `S ⊗ S` refused.
///
/// The topological hypotheses of the formula cannot be checked on these
/// symbolic inputs and are assumed.
pub fn kunneth(a: &GradedQuant, b: &GradedQuant) -> Result<GradedQuant, MvError> {
    let mut out = GradedQuant::zero();
    for (p, x) in a.iter() {
        for (q, y) in b.iter() {
            if x.smooth > 0 && y.smooth > 0 {
                return Err(MvError::CompletionGuard { p, q });
            }
            let c = Component::new(
                x.finite * y.finite,
                x.finite * y.smooth + x.smooth * y.finite,
            );
            out.add_to(p + q, c);
        }
    }
    Ok(out)
}

/// `T*I` with the vertical polarization: flat sections are `ℂ` in degree 0.
pub fn cotangent_interval_factor() -> GradedQuant {
    GradedQuant::concentrated(0, Component::new(1, 0))
}

/// `I_s × S¹`: one `S` in degree 1 per integer inside `I_s`.
pub fn circle_band_factor(n_integer_points: u64) -> GradedQuant {
    GradedQuant::concentrated(1, Component::new(0, n_integer_points))
}

/// Quantization of `T*I × (I_s × S¹)` where `I_s` contains
/// `n_integer_points` integers, as the Künneth product of its factors.
pub fn prop_kunn_model(n_integer_points: u64) -> Result<GradedQuant, MvError> {
    kunneth(
        &cotangent_interval_factor(),
        &circle_band_factor(n_integer_points),
    )
}
