//! Test-side oracles, written independently of the library's algorithms.
#![allow(dead_code)]

use atq_core::catalog::{self, CatalogItem};
use atq_core::lattice::{PrimitiveVector, UnimodularMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull (monotone chain), counterclockwise, collinear points
/// dropped. `None` if the points are all collinear.
pub fn convex_hull(mut pts: Vec<Pt>) -> Option<Vec<Pt>> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return None;
    }
    let mut lower: Vec<Pt> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    (lower.len() >= 3).then_some(lower)
}

pub fn random_convex_polygon<R: Rng>(rng: &mut R, radius: i64) -> Vec<Pt> {
    loop {
        let n = rng.gen_range(3..16);
        let pts = (0..n)
            .map(|_| {
                (
                    rng.gen_range(-radius..=radius),
                    rng.gen_range(-radius..=radius),
                )
            })
            .collect();
        if let Some(h) = convex_hull(pts) {
            return h;
        }
    }
}

/// Twice the area by a triangle fan from the first vertex.
pub fn twice_area(poly: &[Pt]) -> i64 {
    (1..poly.len() - 1)
        .map(|i| cross(poly[0], poly[i], poly[i + 1]))
        .sum()
}

/// Interior and boundary lattice point counts by scanning the bounding box
/// and testing every point against every edge.
pub fn brute_force_counts(poly: &[Pt]) -> (usize, usize) {
    let (xmin, xmax) = (
        poly.iter().map(|p| p.0).min().unwrap(),
        poly.iter().map(|p| p.0).max().unwrap(),
    );
    let (ymin, ymax) = (
        poly.iter().map(|p| p.1).min().unwrap(),
        poly.iter().map(|p| p.1).max().unwrap(),
    );
    let (mut interior, mut boundary) = (0, 0);
    for x in xmin..=xmax {
        for y in ymin..=ymax {
            let sides: Vec<i64> = (0..poly.len())
                .map(|i| cross(poly[i], poly[(i + 1) % poly.len()], (x, y)))
                .collect();
            if sides.iter().all(|&s| s > 0) {
                interior += 1;
            } else if sides.iter().all(|&s| s >= 0) {
                boundary += 1;
            }
        }
    }
    (interior, boundary)
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_matrix<R: Rng>(rng: &mut R) -> Vec<Vec<i64>> {
    let rows = rng.gen_range(0..9);
    let cols = rng.gen_range(0..9);
    let mut m: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
        .collect();
    // make rank deficiency common: overwrite some rows with combinations
    if rows >= 3 && rng.gen_bool(0.5) {
        for _ in 0..rng.gen_range(1..rows) {
            let (i, j, k) = (
                rng.gen_range(0..rows),
                rng.gen_range(0..rows),
                rng.gen_range(0..rows),
            );
            let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            m[k] = (0..cols).map(|c| a * m[i][c] + b * m[j][c]).collect();
        }
    }
    m
}

/// A random element of GL(2, ℤ) as a word in `[[1,1],[0,1]]`,
/// `[[0,-1],[1,0]]` and a reflection.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> UnimodularMatrix {
    let gens = [
        UnimodularMatrix::new(1, 1, 0, 1).unwrap(),
        UnimodularMatrix::new(1, -1, 0, 1).unwrap(),
        UnimodularMatrix::new(0, -1, 1, 0).unwrap(),
        UnimodularMatrix::new(1, 0, 0, -1).unwrap(),
    ];
    let mut m = UnimodularMatrix::IDENTITY;
    for _ in 0..rng.gen_range(0..8) {
        m = m.mul(&gens[rng.gen_range(0..gens.len())]);
    }
    m
}

pub fn random_primitive<R: Rng>(rng: &mut R) -> PrimitiveVector {
    loop {
        let (p, q) = (rng.gen_range(-60..=60), rng.gen_range(-60..=60));
        if let Ok(v) = PrimitiveVector::new(p, q) {
            return v;
        }
    }
}

pub fn mat_sub_identity(m: &UnimodularMatrix) -> [[i64; 2]; 2] {
    let [[a, b], [c, d]] = m.entries();
    [[a - 1, b], [c, d - 1]]
}

pub fn mat_square(n: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let [[a, b], [c, d]] = n;
    [
        [a * a + b * c, a * b + b * d],
        [c * a + d * c, c * b + d * d],
    ]
}

/// Every bounded catalog fixture, built with its listed parameters.
pub fn bounded_fixtures() -> Vec<(String, CatalogItem)> {
    catalog::examples()
        .into_iter()
        .filter_map(|spec| {
            let item = catalog::build(spec.name, &spec.parameters).expect("catalog fixture builds");
            let label = match spec.parameters.get("d") {
                Some(d) => format!("{}(d={d})", spec.name),
                None => spec.name.to_string(),
            };
            (!matches!(item, CatalogItem::Semitoric(_))).then_some((label, item))
        })
        .collect()
}

// Property checks shared by the proptest suites and the acceptance gate.
// Each returns a description of the first failure.

use atq_core::diagram::{monodromy, ClosedBase, Diagram};
use atq_core::lattice::RatPolygon;
use atq_core::mv::{kernel_cokernel, CoeffObj, FreeModule, FreeModuleMap, IntMatrix};
use atq_core::quantization::{classify_fibers, quantize, quantize_closed, symplectic_volume};
use atq_core::rat::{Rat, RatPoint};

pub fn check_pick(poly: &[Pt]) -> Result<(), String> {
    let p = RatPolygon::from_ints(poly).map_err(|e| format!("{poly:?}: {e}"))?;
    let a2 = twice_area(poly);
    let (i, b) = brute_force_counts(poly);
    if p.area() != Rat::new(a2, 2) {
        return Err(format!("{poly:?}: area {} vs oracle {a2}/2", p.area()));
    }
    let pts = p.lattice_points();
    if (pts.interior.len(), pts.boundary.len()) != (i, b) {
        return Err(format!(
            "{poly:?}: counts ({}, {}) vs oracle ({i}, {b})",
            pts.interior.len(),
            pts.boundary.len()
        ));
    }
    // 2A = 2I + B - 2
    if a2 != 2 * i as i64 + b as i64 - 2 {
        return Err(format!("{poly:?}: Pick fails with A2={a2}, I={i}, B={b}"));
    }
    if p.pick_check() != Ok(true) {
        return Err(format!("{poly:?}: library pick_check disagrees"));
    }
    Ok(())
}

fn moved(d: &Diagram, a: &UnimodularMatrix, t: &RatPoint) -> Diagram {
    d.transform(a, t)
}

pub fn check_unimodular_invariance(
    label: &str,
    item: &CatalogItem,
    a: &UnimodularMatrix,
    shift: Pt,
) -> Result<(), String> {
    let t = RatPoint::int(shift.0, shift.1);
    let fail = |what: &str| Err(format!("{label} under {a} + {shift:?}: {what}"));
    match item {
        CatalogItem::Diagram(d) => {
            let m = moved(d, a, &t);
            if !m.validate().is_empty() {
                return fail("image is invalid");
            }
            if quantize(&m) != quantize(d) {
                return fail("quantization changed");
            }
            if symplectic_volume(&m) != symplectic_volume(d) {
                return fail("volume changed");
            }
        }
        CatalogItem::Closed(c) => {
            let m = ClosedBase {
                half_a: moved(&c.half_a, a, &t),
                half_b: moved(&c.half_b, a, &t),
                ..c.clone()
            };
            if quantize_closed(&m) != quantize_closed(c) {
                return fail("quantization changed");
            }
        }
        CatalogItem::Semitoric(_) => return fail("semitoric fixtures are not transformed"),
    }
    Ok(())
}

pub fn check_monodromy(v: PrimitiveVector, k: u32) -> Result<(), String> {
    let m = monodromy(v, k);
    let fail = |what: &str| Err(format!("v={v} k={k} M={m}: {what}"));
    if m.apply_int((v.p(), v.q())) != (v.p(), v.q()) {
        return fail("v is not fixed");
    }
    if m.det() != 1 {
        return fail("det is not 1");
    }
    if m.trace() != 2 {
        return fail("trace is not 2");
    }
    if mat_square(mat_sub_identity(&m)) != [[0, 0], [0, 0]] {
        return fail("M - I is not nilpotent");
    }
    if monodromy(v, 1).pow(k) != m {
        return fail("M(v, k) differs from M(v, 1)^k");
    }
    // M w = w + k det(v, w) v
    for w in [(1, 0), (0, 1), (3, -7)] {
        let d = k as i64 * (v.p() * w.1 - v.q() * w.0);
        if m.apply_int(w) != (w.0 + d * v.p(), w.1 + d * v.q()) {
            return fail("M is not the shear along v");
        }
    }
    Ok(())
}

pub fn check_rank_nullity(rows: &[Vec<i64>], cols: usize) -> Result<(), String> {
    let m = IntMatrix::from_rows(rows);
    let matrix = if rows.is_empty() {
        IntMatrix::zeros(0, cols)
    } else {
        m
    };
    let map = FreeModuleMap::new(
        FreeModule::new(CoeffObj::SmoothS, cols),
        FreeModule::new(CoeffObj::SmoothS, rows.len()),
        matrix,
    )
    .map_err(|e| e.to_string())?;
    let kc = kernel_cokernel(&map).map_err(|e| e.to_string())?;
    let oracle = rational_rank(rows);
    if kc.rank != oracle {
        return Err(format!("{rows:?}: rank {} vs oracle {oracle}", kc.rank));
    }
    if kc.rank + kc.kernel_rank != cols || kc.rank + kc.cokernel_rank != rows.len() {
        return Err(format!("{rows:?}: rank-nullity fails: {kc:?}"));
    }
    Ok(())
}

fn differs_only_at(before: &Diagram, after: &Diagram, allowed: &[RatPoint]) -> Result<(), String> {
    let (a, b) = (classify_fibers(before), classify_fibers(after));
    if a.len() != b.len() {
        return Err("lattice point sets differ".into());
    }
    for (p, class) in &a {
        if b.get(p) != Some(class) && !allowed.contains(&p.to_rat()) {
            return Err(format!(
                "class at {p:?} changed from {class:?} to {:?}",
                b.get(p)
            ));
        }
    }
    Ok(())
}

/// Trades at every untraded vertex and slides every node, checking that
/// each move touches only the node it concerns.
pub fn check_trade_slide_locality(label: &str, d: &Diagram) -> Result<(), String> {
    let params = [
        Rat::new(1, 3),
        Rat::new(1, 2),
        Rat::one(),
        Rat::new(3, 2),
        Rat::from_int(2),
    ];
    for v in (0..d.polygon.len()).filter(|v| !d.traded_vertices.contains(v)) {
        for t in &params {
            let Ok(e) = d.nodal_trade(v, t, 1) else {
                continue;
            };
            let ctx = |what: String| format!("{label}: trade at {v} with t={t}: {what}");
            if e.polygon != d.polygon {
                return Err(ctx("polygon moved".into()));
            }
            if e.nodes.len() != d.nodes.len() + 1 || e.nodes[..d.nodes.len()] != d.nodes[..] {
                return Err(ctx("existing nodes changed".into()));
            }
            let new = e.nodes.last().unwrap();
            if &new.cut_anchor != d.polygon.vertices().get(v).unwrap() {
                return Err(ctx("new node is not anchored at the vertex".into()));
            }
            if !e.validate().is_empty() {
                return Err(ctx(format!("result invalid: {:?}", e.validate())));
            }
            differs_only_at(d, &e, std::slice::from_ref(&new.position)).map_err(ctx)?;
        }
    }
    for (i, n) in d.nodes.iter().enumerate() {
        for t in &params {
            let Ok(e) = d.nodal_slide(i, t) else { continue };
            let ctx = |what: String| format!("{label}: slide of node {i} to t={t}: {what}");
            if e.polygon != d.polygon || e.traded_vertices != d.traded_vertices {
                return Err(ctx("polygon or trades changed".into()));
            }
            for (j, m) in e.nodes.iter().enumerate() {
                if j != i && m != &d.nodes[j] {
                    return Err(ctx(format!("node {j} moved")));
                }
            }
            let s = &e.nodes[i];
            if s.cut_anchor != n.cut_anchor
                || s.eigenline != n.eigenline
                || s.param().as_ref() != Some(t)
            {
                return Err(ctx("slid node left its eigenline".into()));
            }
            differs_only_at(d, &e, &[n.position.clone(), s.position.clone()]).map_err(ctx)?;
        }
    }
    Ok(())
}

/// Diagrams among the bounded fixtures, closed bases split into halves.
pub fn fixture_diagrams() -> Vec<(String, Diagram)> {
    bounded_fixtures()
        .into_iter()
        .flat_map(|(label, item)| match item {
            CatalogItem::Diagram(d) => vec![(label, d)],
            CatalogItem::Closed(c) => vec![
                (format!("{label}/a"), c.half_a),
                (format!("{label}/b"), c.half_b),
            ],
            CatalogItem::Semitoric(_) => vec![],
        })
        .collect()
}

pub const SAMPLER_TOL: f64 = 1e-12;

/// Range checks for the spin-spin and spin-oscillator samplers:
/// `|f1| <= 1`, `|f2| <= 2` for spin-spin; `-1 <= f1 <= 1 + r²/2` and
/// `|f2| <= r/2` for spin-oscillator with disk radius `r`.
pub fn check_sampler_bounds(grid: usize, radius: f64) -> Result<(), String> {
    let ss = catalog::sample_spin_spin(grid).map_err(|e| e.to_string())?;
    if ss.points.len() != grid.pow(4) {
        return Err(format!(
            "spin-spin: {} samples for grid {grid}",
            ss.points.len()
        ));
    }
    for &(f1, f2) in &ss.points {
        if f1.abs() > 1.0 + SAMPLER_TOL || f2.abs() > 2.0 + SAMPLER_TOL {
            return Err(format!("spin-spin sample ({f1}, {f2}) out of range"));
        }
    }
    let so = catalog::sample_spin_oscillator(grid, radius).map_err(|e| e.to_string())?;
    for &(f1, f2) in &so.points {
        if f1 < -1.0 - SAMPLER_TOL || f1 > 1.0 + radius * radius / 2.0 + SAMPLER_TOL {
            return Err(format!("spin-oscillator f1 = {f1} out of range"));
        }
        if f2.abs() > radius / 2.0 + SAMPLER_TOL {
            return Err(format!("spin-oscillator f2 = {f2} out of range"));
        }
    }
    // the attained extremes sit exactly at the poles
    let max_f2 = ss.points.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    if (max_f2 - 2.0).abs() > SAMPLER_TOL {
        return Err(format!("spin-spin max f2 = {max_f2}, expected 2"));
    }
    Ok(())
}
