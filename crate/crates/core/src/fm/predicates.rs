//! Geometric predicates for additively weighted Delaunay triangulations.
//!
//! Every predicate is evaluated first in interval arithmetic; if the sign is
//! not certain, the affine predicates (orientation) and the equal-radius
//! in-circumscriber escalate to exact rational arithmetic. Mixed-radius
//! near-ties that survive the interval filter are reported as undecidable
//! rather than guessed.

use crate::interval::Interval;
use crate::packing::Disc;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// Exactly on the boundary (proved by exact arithmetic).
    Tie,
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn pt(x: f64) -> Interval {
    Interval::point(x)
}

/// Sign of the orientation determinant of points a, b, c
/// (positive = counterclockwise). Exact.
pub fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Sign {
    // interval filter
    let d = pt(b[0])
        .sub(pt(a[0]))
        .mul(pt(c[1]).sub(pt(a[1])))
        .sub(pt(b[1]).sub(pt(a[1])).mul(pt(c[0]).sub(pt(a[0]))));
    if d.lo() > 0.0 {
        return Sign::Positive;
    }
    if d.hi() < 0.0 {
        return Sign::Negative;
    }
    // exact rational fallback
    let det = (rat(b[0]) - rat(a[0])) * (rat(c[1]) - rat(a[1]))
        - (rat(b[1]) - rat(a[1])) * (rat(c[0]) - rat(a[0]));
    if det.is_zero() {
        Sign::Zero
    } else if det.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Support circle of three discs: the circle tangent externally to all
/// three, oriented so that the directions from its center to the three
/// disc centers wind counterclockwise (matching a CCW triple).
#[derive(Debug, Clone, Copy)]
pub struct SupportCircle {
    pub center: [Interval; 2],
    pub radius: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportOutcome {
    Found,
    /// Certainly no externally tangent circle with the right orientation.
    None,
    /// Interval arithmetic could not decide.
    Undecided,
}

pub fn support_circle(a: &Disc, b: &Disc, c: &Disc) -> (SupportOutcome, Option<SupportCircle>) {
    let (pa, pb, pc) = (a.center, b.center, c.center);
    let (ra, rb, rc) = (
        a.class.radius(),
        b.class.radius(),
        c.class.radius(),
    );
    // Linear system from the pairwise differences of
    // |p - P_i|^2 = (rho + r_i)^2:
    //   2 (P_b - P_a) . p = |P_b|^2 - |P_a|^2 - (r_b^2 - r_a^2) - 2 rho (r_b - r_a)
    let ex1 = pt(pb[0]).sub(pt(pa[0]));
    let ey1 = pt(pb[1]).sub(pt(pa[1]));
    let ex2 = pt(pc[0]).sub(pt(pa[0]));
    let ey2 = pt(pc[1]).sub(pt(pa[1]));
    let norm = |p: [f64; 2]| pt(p[0]).square().add(pt(p[1]).square());
    let u1 = norm(pb)
        .sub(norm(pa))
        .sub(rb.square().sub(ra.square()))
        .scale(0.5);
    let u2 = norm(pc)
        .sub(norm(pa))
        .sub(rc.square().sub(ra.square()))
        .scale(0.5);
    let v1 = ra.sub(rb);
    let v2 = ra.sub(rc);
    let det = ex1.mul(ey2).sub(ey1.mul(ex2));
    if det.contains_zero() {
        return (SupportOutcome::Undecided, None);
    }
    // p(rho) = p0 + rho * p1
    let solve = |w1: Interval, w2: Interval| -> [Interval; 2] {
        [
            w1.mul(ey2).sub(w2.mul(ey1)).div(det).unwrap(),
            ex1.mul(w2).sub(ex2.mul(w1)).div(det).unwrap(),
        ]
    };
    let p0 = solve(u1, u2);
    let p1 = solve(v1, v2);
    // |p0 + rho p1 - P_a|^2 = (rho + r_a)^2
    let d0 = [p0[0].sub(pt(pa[0])), p0[1].sub(pt(pa[1]))];
    let a2 = p1[0].square().add(p1[1].square()).sub(Interval::ONE);
    let a1 = p1[0]
        .mul(d0[0])
        .add(p1[1].mul(d0[1]))
        .sub(ra)
        .scale(2.0);
    let a0 = d0[0].square().add(d0[1].square()).sub(ra.square());
    let disc = a1.square().sub(a2.mul(a0).scale(4.0));
    if disc.hi() < 0.0 {
        return (SupportOutcome::None, None);
    }
    if disc.contains_zero() {
        return (SupportOutcome::Undecided, None);
    }
    if a2.contains_zero() {
        return (SupportOutcome::Undecided, None);
    }
    let sq = disc.sqrt_clamped();
    let min_r = ra.min_i(rb).min_i(rc);
    let mut found: Option<SupportCircle> = None;
    for root in [
        a1.neg().add(sq).div(a2.scale(2.0)).unwrap(),
        a1.neg().sub(sq).div(a2.scale(2.0)).unwrap(),
    ] {
        // valid tangent circle: all tangency distances rho + r_i >= 0
        if root.add(min_r).hi() < 0.0 {
            continue;
        }
        if root.add(min_r).lo() < 0.0 {
            return (SupportOutcome::Undecided, None);
        }
        let center = [p0[0].add(root.mul(p1[0])), p0[1].add(root.mul(p1[1]))];
        match ccw_from(center, pa, pb, pc) {
            Some(true) => {
                if found.is_some() {
                    // two CCW-compatible circles cannot be distinguished here
                    return (SupportOutcome::Undecided, None);
                }
                found = Some(SupportCircle {
                    center,
                    radius: root,
                });
            }
            Some(false) => {}
            None => return (SupportOutcome::Undecided, None),
        }
    }
    match found {
        Some(c) => (SupportOutcome::Found, Some(c)),
        None => (SupportOutcome::None, None),
    }
}

/// Do the directions from `p` to the three points wind counterclockwise?
/// `None` if the interval signs cannot decide.
fn ccw_from(p: [Interval; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<bool> {
    let dir = |q: [f64; 2]| [pt(q[0]).sub(p[0]), pt(q[1]).sub(p[1])];
    let (da, db, dc) = (dir(a), dir(b), dir(c));
    let cross = |u: &[Interval; 2], v: &[Interval; 2]| u[0].mul(v[1]).sub(u[1].mul(v[0]));
    let signs = [cross(&da, &db), cross(&db, &dc), cross(&dc, &da)];
    let pos = signs.iter().filter(|s| s.lo() > 0.0).count();
    let neg = signs.iter().filter(|s| s.hi() < 0.0).count();
    if pos >= 2 {
        Some(true)
    } else if neg >= 2 {
        Some(false)
    } else {
        None
    }
}

/// Is disc `q` in conflict with (weighted-closer than) the support circle?
pub fn conflicts(circle: &SupportCircle, q: &Disc) -> Option<Verdict> {
    let rq = q.class.radius();
    let reach = circle.radius.add(rq);
    let dx = circle.center[0].sub(pt(q.center[0]));
    let dy = circle.center[1].sub(pt(q.center[1]));
    let dist2 = dx.square().add(dy.square());
    if reach.hi() < 0.0 {
        return Some(Verdict::False);
    }
    if reach.lo() < 0.0 {
        return None;
    }
    let reach2 = reach.square();
    if dist2.certainly_lt(reach2) {
        Some(Verdict::True)
    } else if dist2.certainly_ge(reach2) {
        Some(Verdict::False)
    } else {
        None
    }
}

/// Conflict of disc `q` with the support circle of the (CCW) triple
/// `(a, b, c)`; interval filter with exact Q[sqrt(2)] fallback.
pub fn tri_conflict(a: &Disc, b: &Disc, c: &Disc, q: &Disc) -> Result<Verdict, ()> {
    let (outcome, circ) = support_circle(a, b, c);
    match outcome {
        SupportOutcome::Found => {
            if let Some(v) = conflicts(&circ.unwrap(), q) {
                return Ok(v);
            }
        }
        // A triple with no tangent circle can never be a triangle of the
        // diagram; treat as always in conflict so it gets flipped away.
        SupportOutcome::None => return Ok(Verdict::True),
        SupportOutcome::Undecided => {}
    }
    match super::exact::support_conflict(a, b, c, q) {
        super::exact::ExactVerdict::Conflict => Ok(Verdict::True),
        super::exact::ExactVerdict::NoConflict => Ok(Verdict::False),
        super::exact::ExactVerdict::Tie => Ok(Verdict::Tie),
        super::exact::ExactVerdict::NoCircle => Ok(Verdict::True),
        super::exact::ExactVerdict::Collinear => Err(()),
    }
}

/// Does disc `q` protrude beyond the outer tangent line of the hull edge
/// `(a, b)` (packing on the left of a->b)? Ties are exact tangencies.
pub fn beyond_hull_edge(a: &Disc, b: &Disc, q: &Disc) -> Result<Verdict, ()> {
    let (ra, rb, rq) = (
        a.class.radius(),
        b.class.radius(),
        q.class.radius(),
    );
    let ex = pt(b.center[0]).sub(pt(a.center[0]));
    let ey = pt(b.center[1]).sub(pt(a.center[1]));
    let len2 = ex.square().add(ey.square());
    let len = len2.sqrt_clamped();
    if len.lo() <= 0.0 {
        return Err(());
    }
    // unit outward normal n = beta * u + gamma * u_perp with
    // u = (b - a)/L, u_perp = (ey, -ex)/L (right of a->b), and
    // n . (P_b - P_a) = r_a - r_b  =>  beta = (r_a - r_b)/L.
    let beta = ra.sub(rb).div(len).unwrap();
    let gamma = Interval::ONE
        .sub(beta.square())
        .clamp_min_zero()
        .sqrt_clamped();
    let ux = ex.div(len).unwrap();
    let uy = ey.div(len).unwrap();
    let nx = beta.mul(ux).add(gamma.mul(uy));
    let ny = beta.mul(uy).sub(gamma.mul(ux));
    // condition: n . (P_q - P_a) + r_q - r_a > 0
    let qx = pt(q.center[0]).sub(pt(a.center[0]));
    let qy = pt(q.center[1]).sub(pt(a.center[1]));
    let margin = nx.mul(qx).add(ny.mul(qy)).add(rq).sub(ra);
    if margin.lo() > 0.0 {
        return Ok(Verdict::True);
    }
    if margin.hi() < 0.0 {
        return Ok(Verdict::False);
    }
    match super::exact::beyond_hull_edge_exact(a, b, q) {
        super::exact::ExactVerdict::Conflict => Ok(Verdict::True),
        super::exact::ExactVerdict::NoConflict => Ok(Verdict::False),
        super::exact::ExactVerdict::Tie => Ok(Verdict::Tie),
        _ => Err(()),
    }
}

/// Exact equality of disc centers.
pub fn same_center(a: &Disc, b: &Disc) -> bool {
    a.center == b.center
}

/// Exact sign of (p - b) . (b - a); used to decide "beyond the segment"
/// for points exactly on a hull line.
pub fn dot_sign_exact(p: [f64; 2], b: [f64; 2], a: [f64; 2]) -> Sign {
    let d = (rat(p[0]) - rat(b[0])) * (rat(b[0]) - rat(a[0]))
        + (rat(p[1]) - rat(b[1])) * (rat(b[1]) - rat(a[1]));
    if d.is_zero() {
        Sign::Zero
    } else if d.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Is disc q weighted-closer to point `p` than `wd` allows? Used by the
/// brute-force reference: wd(p, q) < rho with a certainty requirement.
pub fn weighted_distance(p: &[Interval; 2], q: &Disc) -> Interval {
    let dx = p[0].sub(pt(q.center[0]));
    let dy = p[1].sub(pt(q.center[1]));
    dx.square()
        .add(dy.square())
        .sqrt_clamped()
        .sub(q.class.radius())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::RadiusClass::*;

    fn d(x: f64, y: f64, c: crate::density::RadiusClass) -> Disc {
        Disc::new(x, y, c)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(
            orient2d([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]),
            Sign::Positive
        );
        assert_eq!(
            orient2d([0.0, 0.0], [1.0, 0.0], [0.5, -0.1]),
            Sign::Negative
        );
        assert_eq!(orient2d([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]), Sign::Zero);
        // one-ulp perturbation: below the interval filter, exactly decidable
        assert_eq!(
            orient2d([0.0, 0.0], [1e8, 1e8], [2e8, (2e8f64).next_up()]),
            Sign::Positive
        );
    }

    #[test]
    fn support_circle_of_tangent_unit_discs() {
        let a = d(0.0, 0.0, Large);
        let b = d(2.0, 0.0, Large);
        let c = d(1.0, 3.0f64.sqrt(), Large);
        let (out, circ) = support_circle(&a, &b, &c);
        assert_eq!(out, SupportOutcome::Found);
        let circ = circ.unwrap();
        // inner Soddy radius 2/sqrt(3) - 1
        let expected = 2.0 / 3.0f64.sqrt() - 1.0;
        assert!(circ.radius.contains(expected), "{:?}", circ.radius);
        assert!(circ.center[0].contains(1.0));
    }

    #[test]
    fn clockwise_triple_has_no_ccw_support_circle() {
        let a = d(0.0, 0.0, Large);
        let b = d(1.0, 3.0f64.sqrt(), Large);
        let c = d(2.0, 0.0, Large);
        let (out, _) = support_circle(&a, &b, &c);
        assert_eq!(out, SupportOutcome::None);
    }

    #[test]
    fn flat_triple_with_blocking_disc_has_no_support() {
        // two smalls tangent to a middle small, nearly collinear
        let r = std::f64::consts::SQRT_2 - 1.0;
        let a = d(0.0, 0.0, Small);
        let c = d(2.0 * r, 0.0, Small);
        let b = d(4.0 * r - 1e-3, 0.0, Small);
        let (out, _) = support_circle(&a, &c, &b);
        // collinear centers: the linear system is singular
        assert_ne!(out, SupportOutcome::Found);
    }

    #[test]
    fn conflict_detects_enclosed_disc() {
        let a = d(0.0, 0.0, Large);
        let b = d(2.0, 0.0, Large);
        let c = d(0.0, 2.0, Large);
        let q = d(2.0, 2.0, Large);
        // q on the circumcircle of the right isosceles triple: exact tie
        assert_eq!(tri_conflict(&a, &b, &c, &q), Ok(Verdict::Tie));
        let s = d(1.0, 1.0, Small);
        assert_eq!(tri_conflict(&a, &b, &c, &s), Ok(Verdict::True));
        let far = d(5.0, 5.0, Large);
        assert_eq!(tri_conflict(&a, &b, &c, &far), Ok(Verdict::False));
    }

    #[test]
    fn hull_edge_test() {
        let a = d(0.0, 0.0, Large);
        let b = d(2.0, 0.0, Large);
        // outward is down (packing on the left of a->b)
        assert_eq!(
            beyond_hull_edge(&a, &b, &d(1.0, -3.0, Large)),
            Ok(Verdict::True)
        );
        assert_eq!(
            beyond_hull_edge(&a, &b, &d(1.0, 3.0, Large)),
            Ok(Verdict::False)
        );
        // collinear tangent equal discs: exact tie
        assert_eq!(
            beyond_hull_edge(&a, &b, &d(4.0, 0.0, Large)),
            Ok(Verdict::Tie)
        );
        // small disc below the tangent line of two larges
        assert_eq!(
            beyond_hull_edge(&a, &b, &d(1.0, -0.7, Small)),
            Ok(Verdict::True)
        );
        // small disc between the larges, above their lower tangent
        assert_eq!(
            beyond_hull_edge(&a, &b, &d(1.0, 0.9, Small)),
            Ok(Verdict::False)
        );
    }
}
