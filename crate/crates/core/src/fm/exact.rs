//! Exact predicates over the field Q[sqrt(2)].
//!
//! Disc centers are f64 (exact rationals) and radii are 1 or sqrt(2)-1, so
//! every quantity in the support-circle predicates lies in Q[sqrt(2)] and
//! the one square root appearing (the discriminant) can be eliminated by
//! squaring with sign bookkeeping. These run only when the interval filter
//! fails, which is rare and confined to lattice-exact inputs.

use crate::density::RadiusClass;
use crate::packing::Disc;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element a + b sqrt(2) of Q[sqrt(2)].
#[derive(Debug, Clone, PartialEq)]
pub struct Q2 {
    a: BigRational,
    b: BigRational,
}

impl Q2 {
    fn new(a: BigRational, b: BigRational) -> Q2 {
        Q2 { a, b }
    }

    pub fn zero() -> Q2 {
        Q2::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_f64(x: f64) -> Q2 {
        Q2::new(
            BigRational::from_float(x).expect("finite coordinate"),
            BigRational::zero(),
        )
    }

    pub fn from_int(n: i64) -> Q2 {
        Q2::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }

    pub fn radius(class: RadiusClass) -> Q2 {
        match class {
            RadiusClass::Large => Q2::from_int(1),
            // sqrt(2) - 1
            RadiusClass::Small => Q2::new(
                -BigRational::one(),
                BigRational::one(),
            ),
        }
    }

    pub fn add(&self, o: &Q2) -> Q2 {
        Q2::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Q2) -> Q2 {
        Q2::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &Q2) -> Q2 {
        // (a + b s)(c + d s) = ac + 2bd + (ad + bc) s
        let two = BigRational::from_integer(BigInt::from(2));
        Q2::new(
            &self.a * &o.a + two * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn neg(&self) -> Q2 {
        Q2::new(-self.a.clone(), -self.b.clone())
    }

    pub fn scale_int(&self, n: i64) -> Q2 {
        let k = BigRational::from_integer(BigInt::from(n));
        Q2::new(&self.a * &k, &self.b * &k)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of a + b sqrt(2).
    pub fn sign(&self) -> i32 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: compare a^2 with 2 b^2
        let two = BigRational::from_integer(BigInt::from(2));
        let cmp = rational_sign(&(&self.a * &self.a - two * &self.b * &self.b));
        // |a| > |b| sqrt2  <=>  a^2 > 2 b^2; then the sign is sa
        match cmp {
            0 => 0,
            c if c > 0 => sa,
            _ => sb,
        }
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of X + sigma * Y * sqrt(W), where W >= 0, all in Q[sqrt(2)] and
/// sigma in {-1, +1}.
fn sign_with_sqrt(x: &Q2, sigma: i32, y: &Q2, w: &Q2) -> i32 {
    debug_assert!(w.sign() >= 0);
    let sy = y.sign() * sigma;
    if w.is_zero() || sy == 0 {
        return x.sign();
    }
    let sx = x.sign();
    if sx == 0 {
        return sy;
    }
    if sx == sy {
        return sx;
    }
    // opposite signs: compare X^2 against Y^2 W
    let cmp = x.mul(x).sub(&y.mul(y).mul(w)).sign();
    match cmp {
        0 => 0,
        c if c > 0 => sx,
        _ => sy,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactVerdict {
    Conflict,
    NoConflict,
    Tie,
    /// No CCW-compatible support circle exists for the triple.
    NoCircle,
    /// Collinear centers (the linear system is singular).
    Collinear,
}

struct Vec2 {
    x: Q2,
    y: Q2,
}

impl Vec2 {
    fn sub(a: &Vec2, b: &Vec2) -> Vec2 {
        Vec2 {
            x: a.x.sub(&b.x),
            y: a.y.sub(&b.y),
        }
    }
    fn dot(a: &Vec2, b: &Vec2) -> Q2 {
        a.x.mul(&b.x).add(&a.y.mul(&b.y))
    }
    fn cross(a: &Vec2, b: &Vec2) -> Q2 {
        a.x.mul(&b.y).sub(&a.y.mul(&b.x))
    }
}

fn center(d: &Disc) -> Vec2 {
    Vec2 {
        x: Q2::from_f64(d.center[0]),
        y: Q2::from_f64(d.center[1]),
    }
}

/// Solved exact support-circle context for a CCW triple.
pub struct ExactSupport {
    det: Q2,
    det2: Q2,
    p0s: Vec2,
    p1s: Vec2,
    a1: Q2,
    a0: Q2,
    a2: Q2,
    disc: Q2,
    sigma: i32,
}

/// Solve for the oriented support circle of the counterclockwise triple.
pub fn solve_support(a: &Disc, b: &Disc, c: &Disc) -> Result<ExactSupport, ExactVerdict> {
    let (pa, pb, pc) = (center(a), center(b), center(c));
    let (ra, rb, rc) = (
        Q2::radius(a.class),
        Q2::radius(b.class),
        Q2::radius(c.class),
    );
    let e1 = Vec2::sub(&pb, &pa);
    let e2 = Vec2::sub(&pc, &pa);
    let det = Vec2::cross(&e1, &e2);
    if det.is_zero() {
        return Err(ExactVerdict::Collinear);
    }
    // u_i = (|P_i|^2 - |P_a|^2 - (r_i^2 - r_a^2)) / 2, as 2*(P_i - P_a) . p =
    // 2 u_i - 2 rho (r_i - r_a); we scale by 1/2 throughout.
    let half_norm_diff = |p: &Vec2, r: &Q2| {
        // (|p|^2 - |pa|^2 - (r^2 - ra^2)) / 2 with p relative terms expanded
        let n_p = Vec2::dot(p, p);
        let n_a = Vec2::dot(&pa, &pa);
        let rr = r.mul(r).sub(&ra.mul(&ra));
        let num = n_p.sub(&n_a).sub(&rr);
        // divide by 2: (a + b sqrt2)/2
        Q2::new(num.a / BigRational::from_integer(BigInt::from(2)), num.b / BigRational::from_integer(BigInt::from(2)))
    };
    let u1 = half_norm_diff(&pb, &rb);
    let u2 = half_norm_diff(&pc, &rc);
    let v1 = ra.sub(&rb);
    let v2 = ra.sub(&rc);
    // p(rho) = p0 + rho p1 solves e_i . p = u_i + rho v_i
    let solve = |w1: &Q2, w2: &Q2| Vec2 {
        x: w1.mul(&e2.y).sub(&w2.mul(&e1.y)),
        y: e1.x.mul(w2).sub(&e2.x.mul(w1)),
    };
    // scaled by det: p = P / det; work with P and carry det powers.
    let p0s = solve(&u1, &u2); // p0 * det
    let p1s = solve(&v1, &v2); // p1 * det
    let det2 = det.mul(&det);
    // quadratic in rho (multiplied by det^2 > 0):
    //   A2 rho^2 + A1 rho + A0 = 0
    let d0s = Vec2 {
        x: p0s.x.sub(&det.mul(&pa.x)),
        y: p0s.y.sub(&det.mul(&pa.y)),
    }; // (p0 - P_a) * det
    let a2 = Vec2::dot(&p1s, &p1s).sub(&det2);
    let a1 = Vec2::dot(&p1s, &d0s).sub(&det2.mul(&ra)).scale_int(2);
    let a0 = Vec2::dot(&d0s, &d0s).sub(&det2.mul(&ra.mul(&ra)));
    let disc = a1.mul(&a1).sub(&a2.mul(&a0).scale_int(4));
    if disc.sign() < 0 {
        return Err(ExactVerdict::NoCircle);
    }
    let sa2 = a2.sign();
    if sa2 == 0 {
        // degenerate quadratic; outside the geometry of disjoint discs
        return Err(ExactVerdict::Collinear);
    }
    // candidate roots rho_sigma = (-A1 + sigma sqrt(disc)) / (2 A2)
    let min_r = [&ra, &rb, &rc]
        .into_iter()
        .min_by(|x, y| match x.sub(y).sign() {
            s if s < 0 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        })
        .unwrap()
        .clone();
    let mut chosen: Option<i32> = None;
    for sigma in [1i32, -1] {
        // validity: rho + min_r >= 0
        // (-A1 + 2 A2 min_r ... careful: rho + m = (-A1 + 2 A2 m + sigma sqrt(disc)) / (2 A2)
        let x = a1.neg().add(&a2.mul(&min_r).scale_int(2));
        let s = sign_with_sqrt(&x, sigma, &Q2::from_int(1), &disc) * sa2;
        if s < 0 {
            continue;
        }
        // orientation: directions from p(rho) to the three centers wind CCW.
        // cross(d_i, d_j)(rho) = G + H rho with (scaled by det^2):
        //   d_i * det = P_i * det - p0s - rho p1s
        let dir = |p: &Vec2| Vec2 {
            x: det.mul(&p.x).sub(&p0s.x),
            y: det.mul(&p.y).sub(&p0s.y),
        };
        let (da, db, dc) = (dir(&pa), dir(&pb), dir(&pc));
        let mut pos = 0;
        for (u, v) in [(&da, &db), (&db, &dc), (&dc, &da)] {
            // cross(u - rho p1s, v - rho p1s) = cross(u,v) - rho (u - v) x p1s
            let g = Vec2::cross(u, v);
            let h = Vec2::cross(&Vec2::sub(u, v), &p1s).neg();
            // value at rho: (2 A2 g + h(-A1) + h sigma sqrt(disc)) / (2 A2)
            let x = a2.mul(&g).scale_int(2).sub(&h.mul(&a1));
            let s = sign_with_sqrt(&x, sigma, &h, &disc) * sa2;
            if s > 0 {
                pos += 1;
            }
        }
        if pos >= 2 {
            if chosen.is_some() {
                // two CCW-compatible circles should not happen for
                // interior-disjoint discs; be conservative
                return Err(ExactVerdict::NoCircle);
            }
            chosen = Some(sigma);
        }
    }
    let Some(sigma) = chosen else {
        return Err(ExactVerdict::NoCircle);
    };
    Ok(ExactSupport {
        det,
        det2,
        p0s,
        p1s,
        a1,
        a0,
        a2,
        disc,
        sigma,
    })
}

impl ExactSupport {
    /// Exact conflict of disc `q` with the solved support circle.
    pub fn conflicts(&self, q: &Disc) -> ExactVerdict {
        let pq = center(q);
        let rq = Q2::radius(q.class);
        // |p(rho) - P_q|^2 - (rho + r_q)^2 < 0
        // B2 rho^2 + B1 rho + B0 with B2 = A2; reduce with the root
        // equation: value = (B0 - A0) + (B1 - A1) rho
        let dqs = Vec2 {
            x: self.p0s.x.sub(&self.det.mul(&pq.x)),
            y: self.p0s.y.sub(&self.det.mul(&pq.y)),
        };
        let b1 = Vec2::dot(&self.p1s, &dqs)
            .sub(&self.det2.mul(&rq))
            .scale_int(2);
        let b0 = Vec2::dot(&dqs, &dqs).sub(&self.det2.mul(&rq.mul(&rq)));
        let c1 = b1.sub(&self.a1);
        let c0 = b0.sub(&self.a0);
        // sign of c0 + c1 rho = (2 A2 c0 - c1 A1 + c1 sigma sqrt(disc)) / (2 A2)
        let x = self.a2.mul(&c0).scale_int(2).sub(&c1.mul(&self.a1));
        let s = sign_with_sqrt(&x, self.sigma, &c1, &self.disc) * self.a2.sign();
        match s {
            s if s < 0 => ExactVerdict::Conflict,
            0 => ExactVerdict::Tie,
            _ => ExactVerdict::NoConflict,
        }
    }
}

/// One-shot exact conflict of disc `q` with the support circle of the CCW
/// triple (a, b, c).
pub fn support_conflict(a: &Disc, b: &Disc, c: &Disc, q: &Disc) -> ExactVerdict {
    match solve_support(a, b, c) {
        Ok(ctx) => ctx.conflicts(q),
        Err(v) => v,
    }
}

/// Exact version of the hull-edge protrusion test: does disc q reach beyond
/// the outer tangent line of hull edge (a, b) (packing on the left of a->b)?
pub fn beyond_hull_edge_exact(a: &Disc, b: &Disc, q: &Disc) -> ExactVerdict {
    let (pa, pb, pq) = (center(a), center(b), center(q));
    let (ra, rb, rq) = (
        Q2::radius(a.class),
        Q2::radius(b.class),
        Q2::radius(q.class),
    );
    let e = Vec2::sub(&pb, &pa);
    let dq = Vec2::sub(&pq, &pa);
    let l2 = Vec2::dot(&e, &e);
    // margin * L^2 = (ra - rb)(e . dq) + sqrt(W) (e_perp . dq) + L^2 (rq - ra)
    // with W = L^2 - (ra - rb)^2 and e_perp = (e_y, -e_x) (outward side).
    let drab = ra.sub(&rb);
    let w = l2.sub(&drab.mul(&drab));
    if w.sign() < 0 {
        // one disc contains the other's tangent span; impossible for
        // interior-disjoint discs of these radii
        return ExactVerdict::Collinear;
    }
    let eperp_dq = e.y.mul(&dq.x).sub(&e.x.mul(&dq.y));
    let x = drab.mul(&Vec2::dot(&e, &dq)).add(&l2.mul(&rq.sub(&ra)));
    match sign_with_sqrt(&x, 1, &eperp_dq, &w) {
        s if s > 0 => ExactVerdict::Conflict,
        0 => ExactVerdict::Tie,
        _ => ExactVerdict::NoConflict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::RadiusClass::{Large, Small};

    #[test]
    fn q2_signs() {
        let x = Q2::from_int(3).sub(&Q2::radius(Small).mul(&Q2::radius(Small)).scale_int(1));
        // 3 - (3 - 2 sqrt2) = 2 sqrt2 > 0
        assert_eq!(x.sign(), 1);
        // sqrt2 - 1.5 < 0
        let y = Q2::new(
            BigRational::from_float(-1.5).unwrap(),
            BigRational::one(),
        );
        assert_eq!(y.sign(), -1);
        // sqrt2 - 1.4 > 0
        let z = Q2::new(
            BigRational::from_float(-1.4).unwrap(),
            BigRational::one(),
        );
        assert_eq!(z.sign(), 1);
        assert_eq!(Q2::zero().sign(), 0);
    }

    #[test]
    fn exact_tie_on_lattice() {
        // circumscribed circle of three grid larges passes exactly through
        // the fourth grid point
        let a = Disc::new(0.0, 0.0, Large);
        let b = Disc::new(2.0, 0.0, Large);
        let c = Disc::new(0.0, 2.0, Large);
        let q = Disc::new(2.0, 2.0, Large);
        assert_eq!(support_conflict(&a, &b, &c, &q), ExactVerdict::Tie);
        let s = Disc::new(1.0, 1.0, Small);
        assert_eq!(support_conflict(&a, &b, &c, &s), ExactVerdict::Conflict);
        let far = Disc::new(6.0, 6.0, Large);
        assert_eq!(support_conflict(&a, &b, &c, &far), ExactVerdict::NoConflict);
    }

    #[test]
    fn exact_mixed_radius_support() {
        // tangent small nested among two larges: support circle of
        // (L(0,0), L(2,0), S(1,1)) against L(2,2) and L(0,2)
        let a = Disc::new(0.0, 0.0, Large);
        let b = Disc::new(2.0, 0.0, Large);
        let s = Disc::new(1.0, 1.0, Small);
        let v = support_conflict(&a, &b, &s, &Disc::new(2.0, 2.0, Large));
        assert_eq!(v, ExactVerdict::NoConflict);
        // a disc overlapping the gap between the three conflicts
        let v = support_conflict(&a, &b, &s, &Disc::new(1.0, 0.5, Small));
        assert_eq!(v, ExactVerdict::Conflict);
        // the mirror small well below the circle does not
        let v = support_conflict(&a, &b, &s, &Disc::new(1.0, -1.0, Small));
        assert_eq!(v, ExactVerdict::NoConflict);
    }

    #[test]
    fn exact_hull_ties() {
        let a = Disc::new(0.0, 0.0, Large);
        let b = Disc::new(2.0, 0.0, Large);
        assert_eq!(
            beyond_hull_edge_exact(&a, &b, &Disc::new(4.0, 0.0, Large)),
            ExactVerdict::Tie
        );
        assert_eq!(
            beyond_hull_edge_exact(&a, &b, &Disc::new(1.0, -3.0, Small)),
            ExactVerdict::Conflict
        );
        assert_eq!(
            beyond_hull_edge_exact(&a, &b, &Disc::new(1.0, 1.0, Small)),
            ExactVerdict::NoConflict
        );
    }
}
