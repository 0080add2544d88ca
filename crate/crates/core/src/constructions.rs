//! Densest-packing constructions for every stoichiometry, the
//! square-triangle tiling correspondence, rigorous density measurement,
//! and the building-block counting arguments for pattern entropy.
//!
//! For x > 1/2 the construction is a tiling of vertical columns of squares
//! or triangles driven by the column word u(alpha) with alpha = (1-x)/x;
//! a column is squares when its letter is 1 (the letter of frequency
//! alpha), triangles when 0. For x < 1/2 it is a packing of vertical disc
//! columns driven by the expanded word: letter 1 gives a large-disc column
//! (square-grid geometry, with a small disc nested between consecutive
//! large columns), letter 0 a small-disc column (hexagonal geometry).

use crate::density::{RadiusClass, RadiusTriple};
use crate::fm::{self, FmError, NeighborhoodWord, Regime};
use crate::interval::{acos_i, constant, pi_half, ConstantName, Interval};
use crate::packing::{Disc, Packing, PackingError};
use crate::words::{Alpha, ExpandedWord, StandardWord, WordError};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("stoichiometry {0} outside the construction's range")]
    OutOfRange(f64),
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("disc {0} has a disallowed neighborhood {1}")]
    BadNeighborhoodPresent(usize, String),
    #[error("n must be even, got {0}")]
    OddN(u64),
    #[error("no beta in (0, 1) solves the ratio equation at this n")]
    NoSolution,
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Fm(#[from] FmError),
}

// --- square-triangle tilings ------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TileKind {
    Square,
    Triangle,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tile {
    pub kind: TileKind,
    pub v: Vec<u32>,
}

/// An edge-to-edge tiling by side-2 squares and equilateral triangles.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SquareTriangleTiling {
    pub vertices: Vec<[f64; 2]>,
    pub tiles: Vec<Tile>,
}

pub const EDGE_LEN: f64 = 2.0;

impl SquareTriangleTiling {
    /// Checks that every tile edge has length 2 (within the packing
    /// tolerance).
    pub fn validate(&self) -> Result<(), ConstructionError> {
        for (i, t) in self.tiles.iter().enumerate() {
            let n = t.v.len();
            let want = match t.kind {
                TileKind::Square => 4,
                TileKind::Triangle => 3,
            };
            if n != want {
                return Err(ConstructionError::InvalidTiling(format!(
                    "tile {i} has {n} vertices"
                )));
            }
            for k in 0..n {
                let a = self.vertices[t.v[k] as usize];
                let b = self.vertices[t.v[(k + 1) % n] as usize];
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
                if (d - EDGE_LEN).abs() > 1e-9 {
                    return Err(ConstructionError::InvalidTiling(format!(
                        "tile {i} edge length {d}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn square_fraction(&self) -> f64 {
        let squares = self
            .tiles
            .iter()
            .filter(|t| t.kind == TileKind::Square)
            .count();
        squares as f64 / self.tiles.len() as f64
    }
}

/// Column tiling for x in (1/2, 1]: columns of squares (letter 1) or
/// triangles (letter 0) of the word u(alpha), alpha = (1-x)/x.
pub fn column_tiling(x: f64, extent: u32) -> Result<SquareTriangleTiling, ConstructionError> {
    if !(x > 0.5 && x <= 1.0) {
        return Err(ConstructionError::OutOfRange(x));
    }
    let alpha = (1.0 - x) / x;
    let word = StandardWord::new(alpha_param(alpha)?);
    let ext = extent as i64;
    let height = extent as f64;

    // column k occupies [X_k, X_{k+1}]; letters decide width and the
    // vertical parity of the right line
    let sqrt3 = 3.0f64.sqrt();
    let cols: Vec<i64> = (-ext..ext).collect();
    let mut letters = HashMap::new();
    for &k in &cols {
        letters.insert(k, word.letter(k)?);
    }
    // line positions and phases; line k is the left line of column k
    let mut line_x = HashMap::new();
    let mut line_phase = HashMap::new();
    line_x.insert(0i64, 0.0f64);
    line_phase.insert(0i64, 0i64);
    for &k in cols.iter().filter(|&&k| k >= 0) {
        let w = if letters[&k] == 1 { EDGE_LEN } else { sqrt3 };
        let p = if letters[&k] == 1 { 0 } else { 1 };
        line_x.insert(k + 1, line_x[&k] + w);
        line_phase.insert(k + 1, (line_phase[&k] + p).rem_euclid(2));
    }
    for k in (-ext..0).rev() {
        let w = if letters[&k] == 1 { EDGE_LEN } else { sqrt3 };
        let p = if letters[&k] == 1 { 0 } else { 1 };
        line_x.insert(k, line_x[&(k + 1)] - w);
        line_phase.insert(k, (line_phase[&(k + 1)] - p).rem_euclid(2));
    }

    let mut tiling = SquareTriangleTiling::default();
    let mut vertex_ids: HashMap<(i64, i64), u32> = HashMap::new();
    let mut vertex = |tiling: &mut SquareTriangleTiling, line: i64, j: i64| -> u32 {
        let phase = line_phase[&line];
        *vertex_ids.entry((line, j)).or_insert_with(|| {
            let id = tiling.vertices.len() as u32;
            tiling
                .vertices
                .push([line_x[&line], (2 * j + phase) as f64]);
            id
        })
    };

    // rows: vertices on a line sit at y = 2j + phase
    let rows = (height / 2.0).ceil() as i64;
    for &k in &cols {
        let (l, r) = (k, k + 1);
        if letters[&k] == 1 {
            // square column: both lines share the phase
            for j in -rows..rows {
                let v = [
                    vertex(&mut tiling, l, j),
                    vertex(&mut tiling, r, j),
                    vertex(&mut tiling, r, j + 1),
                    vertex(&mut tiling, l, j + 1),
                ];
                tiling.tiles.push(Tile {
                    kind: TileKind::Square,
                    v: v.to_vec(),
                });
            }
        } else {
            // triangle column: right line offset by 1; per cell two
            // triangles. With phase p on the left line, left vertices sit
            // at 2j + p and right vertices at 2j + p +/- 1.
            for j in -rows..rows {
                // left vertices at levels j, j+1; right vertex between
                let a = vertex(&mut tiling, l, j);
                let b = vertex(&mut tiling, l, j + 1);
                let phase_l = line_phase[&l];
                let phase_r = line_phase[&r];
                // right line level j' with 2j' + phase_r = 2j + phase_l + 1
                let jr = (2 * j + phase_l + 1 - phase_r) / 2;
                let m = vertex(&mut tiling, r, jr);
                let m2 = vertex(&mut tiling, r, jr + 1);
                tiling.tiles.push(Tile {
                    kind: TileKind::Triangle,
                    v: vec![a, b, m],
                });
                tiling.tiles.push(Tile {
                    kind: TileKind::Triangle,
                    v: vec![b, m2, m],
                });
            }
        }
    }
    Ok(tiling)
}

fn alpha_param(alpha: f64) -> Result<Alpha, ConstructionError> {
    // recognize the algebraic parameter, otherwise use a rational
    // approximation with denominator 10^6 (exact for the test grid)
    let r = std::f64::consts::SQRT_2 - 1.0;
    if (alpha - r).abs() < 1e-12 {
        return Ok(Alpha::SqrtTwoMinusOne);
    }
    let den = 1_000_000i64;
    let num = (alpha * den as f64).round() as i64;
    Alpha::rational(num.clamp(0, den - 1), den).map_err(ConstructionError::Word)
}

/// Large disc on every vertex, small disc at every square's center.
pub fn tiling_to_packing(t: &SquareTriangleTiling) -> Result<Packing, ConstructionError> {
    t.validate()?;
    let mut discs: Vec<Disc> = t
        .vertices
        .iter()
        .map(|&[x, y]| Disc::new(x, y, RadiusClass::Large))
        .collect();
    for tile in &t.tiles {
        if tile.kind == TileKind::Square {
            let (mut cx, mut cy) = (0.0, 0.0);
            for &v in &tile.v {
                cx += t.vertices[v as usize][0];
                cy += t.vertices[v as usize][1];
            }
            discs.push(Disc::new(cx / 4.0, cy / 4.0, RadiusClass::Small));
        }
    }
    Ok(Packing::new(discs)?)
}

/// Column packing for x in (0, 1/2): vertical columns of identical discs
/// following the expanded word. Letter 1 gives a large column; letter 0 a
/// small column.
///
/// A large column carries one disc per height 2 while a hexagonal small
/// column carries one per height 2r, so the large-column letter frequency
/// that realizes a proportion x of large discs is
/// f = x / (x + r (1 - 2x)); with this frequency the packing's density is
/// exactly delta(x) (f -> 1 at x = 1/2 gives the square-grid phase, f -> 0
/// at x = 0 the hexagonal phase).
pub fn column_packing(x: f64, extent: u32) -> Result<Packing, ConstructionError> {
    if !(x > 0.0 && x < 0.5) {
        return Err(ConstructionError::OutOfRange(x));
    }
    let r_small = std::f64::consts::SQRT_2 - 1.0;
    let alpha = x / (x + r_small * (1.0 - 2.0 * x));
    let word = ExpandedWord::new(StandardWord::new(alpha_param(alpha)?));
    let ext = extent as i64;
    let height = extent as f64;
    let r = std::f64::consts::SQRT_2 - 1.0;
    let sqrt3 = 3.0f64.sqrt();

    let mut letters = HashMap::new();
    for p in -ext..=ext {
        letters.insert(p, word.letter(p)?);
    }
    // gap between consecutive column lines by letter pair
    let gap = |a: u8, b: u8| match (a, b) {
        (1, 1) => 2.0,
        (0, 0) => sqrt3 * r,
        _ => 1.0 + r,
    };
    let mut xs = HashMap::new();
    xs.insert(0i64, 0.0f64);
    for p in 0..ext {
        xs.insert(p + 1, xs[&p] + gap(letters[&p], letters[&(p + 1)]));
    }
    for p in (-ext..0).rev() {
        xs.insert(p, xs[&(p + 1)] - gap(letters[&p], letters[&(p + 1)]));
    }

    // hexagonal phase alternates inside each run of small columns
    let mut discs = Vec::new();
    let mut hex_parity = 0i64;
    for p in -ext..=ext {
        let xp = xs[&p];
        if letters[&p] == 1 {
            hex_parity = 0;
            let rows = (height / 2.0).floor() as i64;
            for j in -rows..=rows {
                discs.push(Disc::new(xp, 2.0 * j as f64, RadiusClass::Large));
            }
            // nested smalls between consecutive large columns
            if p < ext && letters[&(p + 1)] == 1 {
                for j in -rows..rows {
                    discs.push(Disc::new(xp + 1.0, 2.0 * j as f64 + 1.0, RadiusClass::Small));
                }
            }
        } else {
            let phase = if hex_parity == 0 { 0.0 } else { r };
            hex_parity ^= 1;
            let rows = ((height - phase) / (2.0 * r)).floor() as i64;
            for m in -rows..=rows {
                discs.push(Disc::new(xp, 2.0 * r * m as f64 + phase, RadiusClass::Small));
            }
        }
    }
    Ok(Packing::new(discs)?)
}

/// Convert a packing whose interior discs all have the x >= 1/2 allowed
/// neighborhoods back into a square-triangle tiling.
pub fn packing_to_tiling(p: &Packing) -> Result<SquareTriangleTiling, ConstructionError> {
    let t = fm::fm_triangulation(p)?;
    // discs whose whole fan is itself interior must carry allowed
    // neighborhoods; the boundary ring of a finite sample is exempt
    let closed: Vec<bool> = (0..p.len()).map(|i| t.neighbors_cw(i).is_ok()).collect();
    for i in 0..p.len() {
        if !closed[i] {
            continue;
        }
        let fan = t.neighbors_cw(i)?;
        if !fan.iter().all(|&j| closed[j as usize]) {
            continue;
        }
        let w = fm::neighborhood_word(&t, p, i)?;
        if fm::is_bad_neighborhood(&w, p.discs()[i].class, Regime::XGeHalf) {
            return Err(ConstructionError::BadNeighborhoodPresent(
                i,
                w.as_str().to_owned(),
            ));
        }
    }
    // vertices = large discs
    let mut vertex_of_disc: HashMap<u32, u32> = HashMap::new();
    let mut tiling = SquareTriangleTiling::default();
    for (i, d) in p.discs().iter().enumerate() {
        if d.class == RadiusClass::Large {
            vertex_of_disc.insert(i as u32, tiling.vertices.len() as u32);
            tiling.vertices.push(d.center);
        }
    }
    // squares: around each small disc with a closed 1111 fan
    for (i, d) in p.discs().iter().enumerate() {
        if d.class != RadiusClass::Small {
            continue;
        }
        if let Ok(fan) = t.neighbors_cw(i) {
            if fan.len() == 4
                && fan
                    .iter()
                    .all(|&j| p.discs()[j as usize].class == RadiusClass::Large)
            {
                // counterclockwise for a positively oriented tile
                let mut v: Vec<u32> = fan.iter().rev().map(|j| vertex_of_disc[j]).collect();
                v.rotate_left(0);
                tiling.tiles.push(Tile {
                    kind: TileKind::Square,
                    v,
                });
            }
        }
    }
    // triangles: all-large FM triangles with tangent side lengths
    for tri in t.triangles() {
        if tri
            .iter()
            .all(|&v| p.discs()[v as usize].class == RadiusClass::Large)
        {
            let ok = (0..3).all(|k| {
                let a = p.discs()[tri[k] as usize].center;
                let b = p.discs()[tri[(k + 1) % 3] as usize].center;
                let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
                (d - EDGE_LEN).abs() <= 1e-9
            });
            if ok {
                tiling.tiles.push(Tile {
                    kind: TileKind::Triangle,
                    v: tri.iter().map(|v| vertex_of_disc[v]).collect(),
                });
            }
        }
    }
    Ok(tiling)
}

// --- measured density ---------------------------------------------------

/// Rigorous enclosure of the fraction of the square [-k, k]^2 covered by
/// the discs, with exact circular-segment clipping evaluated in interval
/// arithmetic.
pub fn measured_density(p: &Packing, k: f64) -> Interval {
    assert!(k > 0.0);
    let window = [
        Interval::point(-k),
        Interval::point(k),
        Interval::point(-k),
        Interval::point(k),
    ];
    let mut total = Interval::ZERO;
    let pi = constant(ConstantName::Pi);
    let full_area = [
        pi, // large
        pi.mul(constant(ConstantName::RSquared)),
    ];
    for d in p.discs() {
        let r = d.class.radius_f64();
        let (cx, cy) = (d.center[0], d.center[1]);
        // quick paths
        if cx.abs() + r <= k && cy.abs() + r <= k {
            total = total.add(match d.class {
                RadiusClass::Large => full_area[0],
                RadiusClass::Small => full_area[1],
            });
            continue;
        }
        if cx.abs() - r >= k || cy.abs() - r >= k {
            continue;
        }
        let radius = d.class.radius();
        let a = circle_box_area(
            [Interval::point(cx), Interval::point(cy)],
            radius,
            &window,
        );
        total = total.add(a);
    }
    let side = Interval::point(2.0 * k);
    let box_area = side.square();
    total
        .div(box_area)
        .expect("window area positive")
        .intersect(Interval::new(0.0, 1.0))
        .unwrap_or(Interval::ZERO)
}

/// Area of the disc (center, radius) inside the box [x0,x1] x [y0,y1],
/// via inclusion-exclusion of upper-right quadrant areas.
fn circle_box_area(center: [Interval; 2], radius: Interval, window: &[Interval; 4]) -> Interval {
    let (x0, x1, y0, y1) = (window[0], window[1], window[2], window[3]);
    let ax0 = x0.sub(center[0]);
    let ax1 = x1.sub(center[0]);
    let ay0 = y0.sub(center[1]);
    let ay1 = y1.sub(center[1]);
    let area = quadrant_area(radius, ax0, ay0)
        .sub(quadrant_area(radius, ax1, ay0))
        .sub(quadrant_area(radius, ax0, ay1))
        .add(quadrant_area(radius, ax1, ay1));
    let full = constant(ConstantName::Pi).mul(radius.square());
    let bound = Interval::new(0.0, full.hi());
    area.intersect(bound).unwrap_or(bound)
}

/// Area of the disc of radius R centered at the origin within the
/// quadrant { u >= a, v >= b }.
fn quadrant_area(radius: Interval, a: Interval, b: Interval) -> Interval {
    // split on the sign of a (the formula differs for a < 0 where full
    // chords appear); the function is continuous so hulling is sound
    let mut parts: Vec<Interval> = Vec::new();
    if a.hi() >= 0.0 {
        let ap = Interval::new(a.lo().max(0.0), a.hi());
        parts.push(quadrant_area_pos(radius, ap, b));
    }
    if a.lo() < 0.0 {
        let an = Interval::new(a.lo(), a.hi().min(0.0));
        parts.push(quadrant_area_neg(radius, an, b));
    }
    parts
        .into_iter()
        .reduce(|x, y| x.hull(y))
        .expect("at least one branch")
}

/// Antiderivative of sqrt(R^2 - v^2): F(v) = (v sqrt(R^2-v^2) + R^2 asin(v/R)) / 2.
fn chord_integral(radius: Interval, v: Interval) -> Interval {
    let r2 = radius.square();
    let root = r2.sub(v.square()).clamp_min_zero().sqrt_clamped();
    let ratio = v
        .div(radius)
        .expect("radius positive")
        .intersect(Interval::new(-1.0, 1.0))
        .unwrap_or(Interval::new(-1.0, 1.0));
    let asin = pi_half().sub(acos_i(ratio).expect("clamped operand"));
    v.mul(root).add(r2.mul(asin)).scale(0.5)
}

fn clamp_iv(x: Interval, lo: Interval, hi: Interval) -> Interval {
    x.max_i(lo).min_i(hi)
}

/// a >= 0: the chord at height v meets { u >= a } only for |v| <= q,
/// q = sqrt(R^2 - a^2), contributing width(v) - a.
fn quadrant_area_pos(radius: Interval, a: Interval, b: Interval) -> Interval {
    let q2 = radius.square().sub(a.square()).clamp_min_zero();
    let q = q2.sqrt_clamped();
    let y1 = clamp_iv(b, q.neg(), q);
    let band = chord_integral(radius, q)
        .sub(chord_integral(radius, y1))
        .sub(a.mul(q.sub(y1)));
    band.clamp_min_zero()
}

/// a <= 0: middle band plus full-chord caps above q and below -q.
fn quadrant_area_neg(radius: Interval, a: Interval, b: Interval) -> Interval {
    let q2 = radius.square().sub(a.square()).clamp_min_zero();
    let q = q2.sqrt_clamped();
    let y1 = clamp_iv(b, q.neg(), q);
    let band = chord_integral(radius, q)
        .sub(chord_integral(radius, y1))
        .sub(a.mul(q.sub(y1)))
        .clamp_min_zero();
    let yt = clamp_iv(b, q, radius);
    let top = chord_integral(radius, radius)
        .sub(chord_integral(radius, yt))
        .scale(2.0)
        .clamp_min_zero();
    let yb = clamp_iv(b, radius.neg(), q.neg());
    let bottom = chord_integral(radius, q.neg())
        .sub(chord_integral(radius, yb))
        .scale(2.0)
        .clamp_min_zero();
    band.add(top).add(bottom)
}

// --- entropy widgets -----------------------------------------------------

/// Square/triangle counts of the two building blocks at even size n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockCounts {
    pub n: u64,
    pub s_square: u64,
    pub s_triangle: u64,
    pub t_square: u64,
    pub t_triangle: u64,
}

pub fn block_counts(n: u64) -> Result<BlockCounts, ConstructionError> {
    if n % 2 != 0 {
        return Err(ConstructionError::OddN(n));
    }
    Ok(BlockCounts {
        n,
        s_square: n * n + 4 * n + 7,
        s_triangle: 8 * n + 16,
        t_square: 3 * n / 2 + 3,
        t_triangle: n * n + 2 * n + 6,
    })
}

/// f(beta, n): squares-to-triangles ratio of the block-substituted tiling.
pub fn square_triangle_ratio(beta: f64, n: u64) -> Result<f64, ConstructionError> {
    let c = block_counts(n)?;
    let num = beta * c.s_square as f64 + (1.0 - beta) * c.t_square as f64;
    let den = beta * c.s_triangle as f64 + (1.0 - beta) * c.t_triangle as f64;
    Ok(num / den)
}

/// Solve f(beta, n) = alpha/(1-alpha) for beta; the equation is linear.
pub fn solve_beta(alpha: f64, n: u64) -> Result<f64, ConstructionError> {
    let c = block_counts(n)?;
    let rho = alpha / (1.0 - alpha);
    let (sq, st) = (c.s_square as f64, c.s_triangle as f64);
    let (tq, tt) = (c.t_square as f64, c.t_triangle as f64);
    // beta (sq - tq) + tq = rho (beta (st - tt) + tt)
    let denom = (sq - tq) - rho * (st - tt);
    if denom == 0.0 {
        return Err(ConstructionError::NoSolution);
    }
    let beta = (rho * tt - tq) / denom;
    if beta > 0.0 && beta < 1.0 && beta.is_finite() {
        Ok(beta)
    } else {
        Err(ConstructionError::NoSolution)
    }
}

/// log2 of the pattern-count lower bound from independently retiled
/// dodecagons: floor(density * pi k^2).
pub fn dodecagon_pattern_bound(k: f64, dodecagon_density: f64) -> u64 {
    assert!(k > 0.0 && dodecagon_density >= 0.0);
    (dodecagon_density * std::f64::consts::PI * k * k).floor() as u64
}

/// Interval residual of the identity: a regular dodecagon of edge 2 has
/// the area of 6 squares plus 12 triangles of the same edge.
/// Route one: shoelace, area = 3 rho^2 with rho^2 = 4 / (1 - cos 30).
/// Route two: 6 * 4 + 12 * Heron(2, 2, 2).
pub fn dodecagon_area_identity() -> Interval {
    let sqrt3 = constant(ConstantName::Sqrt3);
    let one = Interval::ONE;
    // s = 2 rho sin(pi/12), so rho^2 = 2 / (1 - cos 30) at s = 2
    let cos30 = sqrt3.scale(0.5);
    let rho2 = Interval::point(2.0).div(one.sub(cos30)).expect("positive");
    let dodecagon = rho2.scale(3.0);
    // 12 equilateral side-2 triangles have area sqrt(3) each
    let heron = {
        let t = RadiusTriple::Lll.tight_spec();
        crate::density::triangle_area(&t).expect("equilateral")
    };
    let tiles = Interval::point(24.0).add(heron.scale(12.0));
    dodecagon.sub(tiles)
}

/// Canonical neighborhood word helper shared with tests.
pub fn word_of(s: &str) -> NeighborhoodWord {
    NeighborhoodWord::from_letters(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_triangle_tiling_at_x_one() {
        let t = column_tiling(1.0, 6).unwrap();
        t.validate().unwrap();
        assert!(t.tiles.iter().all(|x| x.kind == TileKind::Triangle));
    }

    #[test]
    fn alternating_columns_at_x_two_thirds() {
        let t = column_tiling(2.0 / 3.0, 8).unwrap();
        t.validate().unwrap();
        let squares = t
            .tiles
            .iter()
            .filter(|x| x.kind == TileKind::Square)
            .count();
        let triangles = t.tiles.len() - squares;
        // alternating columns: 1 square per cell vs 2 triangles per cell
        assert_eq!(triangles, 2 * squares);
    }

    #[test]
    fn single_square_to_packing() {
        let t = SquareTriangleTiling {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]],
            tiles: vec![Tile {
                kind: TileKind::Square,
                v: vec![0, 1, 2, 3],
            }],
        };
        let p = tiling_to_packing(&t).unwrap();
        assert_eq!(p.len(), 5);
        let smalls: Vec<_> = p
            .discs()
            .iter()
            .filter(|d| d.class == RadiusClass::Small)
            .collect();
        assert_eq!(smalls.len(), 1);
        assert_eq!(smalls[0].center, [1.0, 1.0]);
        // four tangencies at distance sqrt(2)
        for d in p.discs().iter().filter(|d| d.class == RadiusClass::Large) {
            let dx = d.center[0] - 1.0;
            let dy = d.center[1] - 1.0;
            assert!(((dx * dx + dy * dy).sqrt() - std::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn single_triangle_to_packing() {
        let t = SquareTriangleTiling {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [1.0, 3.0f64.sqrt()]],
            tiles: vec![Tile {
                kind: TileKind::Triangle,
                v: vec![0, 1, 2],
            }],
        };
        let p = tiling_to_packing(&t).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn tiling_stoichiometry_converges() {
        for (x, tol) in [(0.75, 0.02), (0.6, 0.02)] {
            let t = column_tiling(x, 200).unwrap();
            let p = tiling_to_packing(&t).unwrap();
            assert!(
                (p.large_fraction() - x).abs() < tol,
                "x={x}: got {}",
                p.large_fraction()
            );
        }
    }

    #[test]
    fn column_packing_stoichiometry_converges() {
        let x = 0.3;
        let p = column_packing(x, 200).unwrap();
        assert!(
            (p.large_fraction() - x).abs() < 0.02,
            "got {}",
            p.large_fraction()
        );
    }

    #[test]
    fn x_half_limit_is_square_grid() {
        // an all-1 word gives the square grid with nested smalls; emulate
        // by x close to 1/2
        let p = column_packing(0.499, 30).unwrap();
        // large fraction near 1/2
        assert!((p.large_fraction() - 0.5).abs() < 0.05);
    }

    #[test]
    fn measured_density_of_hexagonal() {
        // unit hexagonal packing: density pi / (2 sqrt 3)
        let mut discs = Vec::new();
        let n = 60i32;
        for row in -n..=n {
            for col in -n..=n {
                let x = 2.0 * col as f64 + if row.rem_euclid(2) == 1 { 1.0 } else { 0.0 };
                let y = 3.0f64.sqrt() * row as f64;
                discs.push(Disc::new(x, y, RadiusClass::Large));
            }
        }
        let p = Packing::new(discs).unwrap();
        let d = measured_density(&p, 50.0);
        let expected = std::f64::consts::PI / (2.0 * 3.0f64.sqrt());
        assert!(
            (d.midpoint() - expected).abs() / expected < 0.005,
            "{d:?} vs {expected}"
        );
    }

    #[test]
    fn measured_density_of_square_grid() {
        let mut discs = Vec::new();
        let n = 55i32;
        for i in -n..=n {
            for j in -n..=n {
                discs.push(Disc::new(2.0 * i as f64, 2.0 * j as f64, RadiusClass::Large));
                discs.push(Disc::new(
                    2.0 * i as f64 + 1.0,
                    2.0 * j as f64 + 1.0,
                    RadiusClass::Small,
                ));
            }
        }
        let p = Packing::new(discs).unwrap();
        let d = measured_density(&p, 50.0);
        let expected = std::f64::consts::PI / (2.0 + std::f64::consts::SQRT_2);
        assert!(
            (d.midpoint() - expected).abs() / expected < 0.005,
            "{d:?} vs {expected}"
        );
    }

    #[test]
    fn empty_packing_density_is_zero() {
        let p = Packing::new(vec![]).unwrap();
        let d = measured_density(&p, 10.0);
        assert_eq!((d.lo(), d.hi()), (0.0, 0.0));
    }

    #[test]
    fn circle_box_area_against_monte_carlo() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let cx: f64 = rng.gen_range(-3.0..3.0);
            let cy: f64 = rng.gen_range(-3.0..3.0);
            let r: f64 = rng.gen_range(0.2..1.5);
            let k: f64 = rng.gen_range(0.5..3.0);
            let window = [
                Interval::point(-k),
                Interval::point(k),
                Interval::point(-k),
                Interval::point(k),
            ];
            let area = circle_box_area(
                [Interval::point(cx), Interval::point(cy)],
                Interval::point(r),
                &window,
            );
            // Monte Carlo oracle
            let samples = 200_000;
            let mut hit = 0u64;
            for _ in 0..samples {
                let u: f64 = rng.gen_range(-1.0..1.0);
                let v: f64 = rng.gen_range(-1.0..1.0);
                let (px, py) = (cx + u * r, cy + v * r);
                if u * u + v * v <= 1.0 && px.abs() <= k && py.abs() <= k {
                    hit += 1;
                }
            }
            let mc = hit as f64 / samples as f64 * 4.0 * r * r;
            let sigma = 4.0 * r * r / (samples as f64).sqrt() * 3.5;
            assert!(
                area.lo() - sigma <= mc && mc <= area.hi() + sigma,
                "disc ({cx},{cy},{r}) window {k}: interval {area:?} vs mc {mc}"
            );
            assert!(area.width() < 1e-6);
        }
    }

    #[test]
    fn round_trip_tiling_packing_tiling() {
        let t = column_tiling(0.75, 12).unwrap();
        let p = tiling_to_packing(&t).unwrap();
        let t2 = packing_to_tiling(&p).unwrap();
        // vertex sets agree within 1e-9
        let mut v1 = t.vertices.clone();
        let mut v2 = t2.vertices.clone();
        let key = |a: &[f64; 2], b: &[f64; 2]| {
            a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
        };
        v1.sort_by(|a, b| key(a, b));
        v2.sort_by(|a, b| key(a, b));
        assert_eq!(v1.len(), v2.len());
        for (a, b) in v1.iter().zip(&v2) {
            assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn packing_to_tiling_rejects_bad_neighborhoods() {
        // all-small hexagonal has rrrrrr words: bad in the x >= 1/2 regime
        let r = std::f64::consts::SQRT_2 - 1.0;
        let mut discs = Vec::new();
        for row in -8i32..=8 {
            for col in -8..=8 {
                let x = 2.0 * r * col as f64 + if row.rem_euclid(2) == 1 { r } else { 0.0 };
                let y = 3.0f64.sqrt() * r * row as f64;
                discs.push(Disc::new(x, y, RadiusClass::Small));
            }
        }
        let p = Packing::new(discs).unwrap();
        assert!(matches!(
            packing_to_tiling(&p),
            Err(ConstructionError::BadNeighborhoodPresent(_, _))
        ));
    }

    #[test]
    fn block_counts_closed_forms() {
        assert_eq!(
            block_counts(0).unwrap(),
            BlockCounts {
                n: 0,
                s_square: 7,
                s_triangle: 16,
                t_square: 3,
                t_triangle: 6
            }
        );
        assert_eq!(
            block_counts(2).unwrap(),
            BlockCounts {
                n: 2,
                s_square: 19,
                s_triangle: 32,
                t_square: 6,
                t_triangle: 14
            }
        );
        assert_eq!(
            block_counts(4).unwrap(),
            BlockCounts {
                n: 4,
                s_square: 39,
                s_triangle: 48,
                t_square: 9,
                t_triangle: 30
            }
        );
        assert_eq!(
            block_counts(8).unwrap(),
            BlockCounts {
                n: 8,
                s_square: 103,
                s_triangle: 80,
                t_square: 15,
                t_triangle: 86
            }
        );
        assert!(matches!(block_counts(3), Err(ConstructionError::OddN(3))));
    }

    #[test]
    fn ratio_values() {
        assert!((square_triangle_ratio(0.0, 4).unwrap() - 0.3).abs() < 1e-15);
        assert!((square_triangle_ratio(1.0, 4).unwrap() - 0.8125).abs() < 1e-15);
    }

    #[test]
    fn beta_round_trip() {
        let f = square_triangle_ratio(0.5, 4).unwrap();
        let alpha = f / (1.0 + f);
        let beta = solve_beta(alpha, 4).unwrap();
        assert!((beta - 0.5).abs() < 1e-12);
        let back = square_triangle_ratio(beta, 4).unwrap();
        assert!((back - f).abs() < 1e-12);
    }

    #[test]
    fn beta_no_solution_cases() {
        // alpha = 0.9: ratio 9 exceeds f(1, 4) = 0.8125
        assert!(matches!(
            solve_beta(0.9, 4),
            Err(ConstructionError::NoSolution)
        ));
        // ratio 1 at n = 4 gives beta = 1.75 > 1; n = 8 works
        assert!(matches!(
            solve_beta(0.5, 4),
            Err(ConstructionError::NoSolution)
        ));
        let beta = solve_beta(0.5, 8).unwrap();
        assert!(beta > 0.0 && beta < 1.0);
        assert!((beta - 71.0 / 94.0).abs() < 1e-12);
    }

    #[test]
    fn dodecagon_identity_holds() {
        let resid = dodecagon_area_identity();
        assert!(resid.contains_zero());
        assert!(resid.width() < 1e-12);
    }

    #[test]
    fn pattern_bound_scaling() {
        assert_eq!(dodecagon_pattern_bound(10.0, 0.0), 0);
        let b1 = dodecagon_pattern_bound(10.0, 0.05);
        let b2 = dodecagon_pattern_bound(20.0, 0.05);
        assert!((b2 as i64 - 4 * b1 as i64).abs() <= 4);
    }
}
