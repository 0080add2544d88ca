//! Maximal density, triangle geometry and emptiness over intervals.
//!
//! A triangle of discs is described by its three center-to-center side
//! lengths (side i opposite vertex i) plus a radius class per vertex. The
//! emptiness `E(T) = delta(x) * area(T) - cov(T)` measures how far the
//! triangle is from exceeding the claimed density: nonnegative emptiness
//! means local density at most delta(x).

use crate::interval::{acos_clipped, constant, pi_half, ConstantName, Interval};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("stoichiometry outside [0, 1]")]
    OutOfRange,
    #[error("triangle inequality fails over the whole box")]
    DegenerateBox,
    #[error("a vertex disc may reach the opposite side; box must be split")]
    SectorCrossesOppositeSide,
}

/// Disc size class: large (radius 1) or small (radius sqrt(2) - 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RadiusClass {
    Large,
    Small,
}

impl RadiusClass {
    #[inline]
    pub fn radius(self) -> Interval {
        match self {
            RadiusClass::Large => Interval::ONE,
            RadiusClass::Small => constant(ConstantName::R),
        }
    }

    #[inline]
    pub fn radius_f64(self) -> f64 {
        match self {
            RadiusClass::Large => 1.0,
            RadiusClass::Small => std::f64::consts::SQRT_2 - 1.0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            RadiusClass::Large => '1',
            RadiusClass::Small => 'r',
        }
    }
}

/// Radius-class triple of a triangle, by number of small discs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadiusTriple {
    Lll,
    Lls,
    Lss,
    Sss,
}

pub const ALL_TRIPLES: [RadiusTriple; 4] = [
    RadiusTriple::Lll,
    RadiusTriple::Lls,
    RadiusTriple::Lss,
    RadiusTriple::Sss,
];

impl RadiusTriple {
    /// Canonical vertex order (small discs last).
    pub fn radii(self) -> [RadiusClass; 3] {
        use RadiusClass::*;
        match self {
            RadiusTriple::Lll => [Large, Large, Large],
            RadiusTriple::Lls => [Large, Large, Small],
            RadiusTriple::Lss => [Large, Small, Small],
            RadiusTriple::Sss => [Small, Small, Small],
        }
    }

    pub fn from_classes(mut c: [RadiusClass; 3]) -> RadiusTriple {
        c.sort();
        match c.iter().filter(|&&x| x == RadiusClass::Small).count() {
            0 => RadiusTriple::Lll,
            1 => RadiusTriple::Lls,
            2 => RadiusTriple::Lss,
            _ => RadiusTriple::Sss,
        }
    }

    /// Tight (mutually tangent) side lengths, side i opposite vertex i.
    pub fn tight_sides(self) -> [Interval; 3] {
        let r = self.radii();
        [
            r[1].radius().add(r[2].radius()),
            r[2].radius().add(r[0].radius()),
            r[0].radius().add(r[1].radius()),
        ]
    }

    pub fn tight_spec(self) -> TriangleSpec {
        TriangleSpec {
            radii: self.radii(),
            sides: self.tight_sides(),
        }
    }
}

/// A box of triangles: radius classes plus side-length intervals
/// (side i opposite vertex i; sides are center-to-center distances).
#[derive(Debug, Clone, Copy)]
pub struct TriangleSpec {
    pub radii: [RadiusClass; 3],
    pub sides: [Interval; 3],
}

impl TriangleSpec {
    pub fn triple(&self) -> RadiusTriple {
        RadiusTriple::from_classes(self.radii)
    }

    /// The triangle inequality fails for every point of the box.
    pub fn certainly_degenerate(&self) -> bool {
        let [a, b, c] = self.sides;
        a.lo() > b.hi() + c.hi() || b.lo() > c.hi() + a.hi() || c.lo() > a.hi() + b.hi()
    }
}

/// Maximal density delta(x) of packings with a proportion `x` of large discs.
///
/// Evaluates the x <= 1/2 branch, the x >= 1/2 branch, or the hull of both
/// over the clipped halves when `x` straddles 1/2.
pub fn delta_max(x: Interval) -> Result<Interval, DensityError> {
    let unit = Interval::new(0.0, 1.0);
    let x = x.intersect(unit).ok_or(DensityError::OutOfRange)?;
    let le = x
        .intersect(Interval::new(0.0, 0.5))
        .map(delta_le_branch)
        .transpose()?;
    let ge = x
        .intersect(Interval::new(0.5, 1.0))
        .map(delta_ge_branch)
        .transpose()?;
    match (le, ge) {
        (Some(a), Some(b)) => Ok(a.hull(b)),
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(DensityError::OutOfRange),
    }
}

/// delta(x) = pi (x + (1-x) r^2) / (4x + 2(1-2x) r^2 sqrt(3)) for x in [0, 1/2].
pub fn delta_le_branch(x: Interval) -> Result<Interval, DensityError> {
    let pi = constant(ConstantName::Pi);
    let r2 = constant(ConstantName::RSquared);
    let sqrt3 = constant(ConstantName::Sqrt3);
    let one = Interval::ONE;
    let num = pi.mul(x.add(one.sub(x).mul(r2)));
    let den = x
        .scale(4.0)
        .add(one.sub(x.scale(2.0)).scale(2.0).mul(r2).mul(sqrt3));
    num.div(den).map_err(|_| DensityError::OutOfRange)
}

/// delta(x) = pi (x + (1-x) r^2) / (4(1-x) + 2(2x-1) sqrt(3)) for x in [1/2, 1].
pub fn delta_ge_branch(x: Interval) -> Result<Interval, DensityError> {
    let pi = constant(ConstantName::Pi);
    let r2 = constant(ConstantName::RSquared);
    let sqrt3 = constant(ConstantName::Sqrt3);
    let one = Interval::ONE;
    let num = pi.mul(x.add(one.sub(x).mul(r2)));
    let den = one
        .sub(x)
        .scale(4.0)
        .add(x.scale(2.0).sub(one).scale(2.0).mul(sqrt3));
    num.div(den).map_err(|_| DensityError::OutOfRange)
}

/// Heron's formula over the box, restricted to its feasible (triangle
/// inequality) part.
pub fn triangle_area(t: &TriangleSpec) -> Result<Interval, DensityError> {
    if t.certainly_degenerate() {
        return Err(DensityError::DegenerateBox);
    }
    let [a, b, c] = t.sides;
    let half = Interval::point(0.5);
    let s = a.add(b).add(c).mul(half);
    // Factors are nonnegative on the feasible subset; clamping the product
    // keeps the enclosure sound there.
    let p = s
        .mul(s.sub(a))
        .mul(s.sub(b))
        .mul(s.sub(c))
        .clamp_min_zero();
    Ok(p.sqrt_clamped())
}

/// Geometry of a triangle box shared by coverage and the certifier:
/// area, per-vertex cosines and angles.
pub struct TriangleMetrics {
    pub area: Interval,
    pub cos: [Interval; 3],
    pub angles: [Interval; 3],
}

pub fn triangle_metrics(t: &TriangleSpec) -> Result<TriangleMetrics, DensityError> {
    let area = triangle_area(t)?;
    let [a, b, c] = t.sides;
    let cos = [
        law_of_cosines(a, b, c),
        law_of_cosines(b, c, a),
        law_of_cosines(c, a, b),
    ];
    let mut angles = [Interval::ZERO; 3];
    for i in 0..3 {
        angles[i] = acos_clipped(cos[i]).ok_or(DensityError::DegenerateBox)?;
    }
    Ok(TriangleMetrics { area, cos, angles })
}

/// cos of the angle opposite side `opp`, adjacent sides `u`, `v`.
fn law_of_cosines(opp: Interval, u: Interval, v: Interval) -> Interval {
    let num = u.square().add(v.square()).sub(opp.square());
    let den = u.mul(v).scale(2.0);
    num.div(den).expect("side lengths are positive")
}

/// Each vertex disc must stay strictly on its side of the opposite edge;
/// then coverage is a plain sum of circular sectors.
pub fn sector_validity(t: &TriangleSpec, area: Interval) -> Result<(), DensityError> {
    for i in 0..3 {
        // distance from vertex i to the opposite side line: 2 area / side_i
        let h = area.scale(2.0).div(t.sides[i]).expect("positive side");
        if h.lo() < t.radii[i].radius().hi() {
            return Err(DensityError::SectorCrossesOppositeSide);
        }
    }
    Ok(())
}

/// Area of the triangle covered by its three vertex discs.
pub fn triangle_coverage(t: &TriangleSpec) -> Result<Interval, DensityError> {
    let m = triangle_metrics(t)?;
    sector_validity(t, m.area)?;
    Ok(coverage_from_angles(t, &m.angles))
}

pub fn coverage_from_angles(t: &TriangleSpec, angles: &[Interval; 3]) -> Interval {
    let mut cov = Interval::ZERO;
    for i in 0..3 {
        let r2 = t.radii[i].radius().square();
        cov = cov.add(angles[i].mul(r2).scale(0.5));
    }
    cov
}

/// E(T) = delta(x) * area(T) - cov(T).
pub fn emptiness(t: &TriangleSpec, x: Interval) -> Result<Interval, DensityError> {
    let delta = delta_max(x)?;
    let m = triangle_metrics(t)?;
    sector_validity(t, m.area)?;
    let cov = coverage_from_angles(t, &m.angles);
    Ok(delta.mul(m.area).sub(cov))
}

/// Emptiness of the tight triangle of a radius triple, using closed forms
/// for its area and coverage.
pub fn tight_emptiness(kind: RadiusTriple, x: Interval) -> Result<Interval, DensityError> {
    let delta = delta_max(x)?;
    Ok(delta.mul(tight_area(kind)).sub(tight_coverage(kind)))
}

/// Tight-triangle area (x-free constant).
pub fn tight_area(kind: RadiusTriple) -> Interval {
    match kind {
        // equilateral side 2: sqrt(3)
        RadiusTriple::Lll => constant(ConstantName::Sqrt3),
        // right isosceles legs sqrt2: area exactly 1
        RadiusTriple::Lls => Interval::ONE,
        // isosceles sides (2r, 1+r, 1+r): area = r * sqrt(2 - r^2)
        RadiusTriple::Lss => {
            let r = constant(ConstantName::R);
            let r2 = constant(ConstantName::RSquared);
            r.mul(Interval::point(2.0).sub(r2).sqrt_clamped())
        }
        // equilateral side 2r: r^2 sqrt(3)
        RadiusTriple::Sss => constant(ConstantName::RSquared).mul(constant(ConstantName::Sqrt3)),
    }
}

/// Tight-triangle coverage (x-free constant).
pub fn tight_coverage(kind: RadiusTriple) -> Interval {
    let pi = constant(ConstantName::Pi);
    let r2 = constant(ConstantName::RSquared);
    match kind {
        RadiusTriple::Lll => pi_half(),
        // two 45-degree unit sectors + one 90-degree r-sector
        RadiusTriple::Lls => pi.mul(Interval::ONE.add(r2)).scale(0.25),
        // apex angle at the large vertex + two small sectors, via the tight
        // spec's angles
        RadiusTriple::Lss => {
            let spec = RadiusTriple::Lss.tight_spec();
            let m = triangle_metrics(&spec).expect("tight Lss is nondegenerate");
            coverage_from_angles(&spec, &m.angles)
        }
        RadiusTriple::Sss => pi_half().mul(r2),
    }
}

/// Apex angle at vertex of class `vclass` in the tight triangle of `kind`.
pub fn tight_apex_angle(kind: RadiusTriple, vclass: RadiusClass) -> Interval {
    let spec = kind.tight_spec();
    let m = triangle_metrics(&spec).expect("tight triangles are nondegenerate");
    // canonical order puts smalls last
    let idx = match (kind, vclass) {
        (RadiusTriple::Lll, RadiusClass::Large) => 0,
        (RadiusTriple::Lls, RadiusClass::Large) => 0,
        (RadiusTriple::Lls, RadiusClass::Small) => 2,
        (RadiusTriple::Lss, RadiusClass::Large) => 0,
        (RadiusTriple::Lss, RadiusClass::Small) => 2,
        (RadiusTriple::Sss, RadiusClass::Small) => 0,
        _ => panic!("vertex class {vclass:?} does not occur in {kind:?}"),
    };
    m.angles[idx]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64) -> Interval {
        Interval::point(x)
    }

    // mpmath, 40 digits, frozen
    const DELTA_HALF: f64 = 0.9201511845106101; // pi/(2+sqrt2)
    const DELTA_ENDS: f64 = 0.9068996821171089; // pi/(2 sqrt3)
    const DELTA_QUARTER: f64 = 0.9171153611635090;

    #[test]
    fn delta_at_half_is_square_packing_density() {
        let d = delta_max(pt(0.5)).unwrap();
        assert!(d.contains(DELTA_HALF));
        assert!(d.width() <= 1e-10);
        // both branches agree at 1/2
        let le = delta_le_branch(pt(0.5)).unwrap();
        let ge = delta_ge_branch(pt(0.5)).unwrap();
        assert!(le.intersect(ge).is_some());
        assert!((le.midpoint() - ge.midpoint()).abs() <= 1e-10);
    }

    #[test]
    fn delta_at_ends_is_hexagonal_density() {
        for x in [0.0, 1.0] {
            let d = delta_max(pt(x)).unwrap();
            assert!(d.contains(DELTA_ENDS), "x={x}: {d:?}");
            assert!(d.width() <= 1e-10);
        }
    }

    #[test]
    fn delta_at_quarter_matches_oracle() {
        let d = delta_max(pt(0.25)).unwrap();
        assert!(d.contains(DELTA_QUARTER));
        assert!((d.midpoint() - 0.91710).abs() < 1e-4);
    }

    #[test]
    fn delta_straddling_half_hulls_both_branches() {
        let d = delta_max(Interval::new(0.49, 0.51)).unwrap();
        assert!(d.contains(DELTA_HALF));
        assert!(d.contains(delta_max(pt(0.49)).unwrap().midpoint()));
        assert!(d.contains(delta_max(pt(0.51)).unwrap().midpoint()));
    }

    #[test]
    fn delta_rejects_out_of_range() {
        assert!(delta_max(Interval::new(1.2, 1.3)).is_err());
    }

    #[test]
    fn delta_peaks_at_half() {
        let dmax = delta_max(pt(0.5)).unwrap();
        for k in 0..100 {
            let x = Interval::new(k as f64 / 100.0, (k + 1) as f64 / 100.0);
            let d = delta_max(x).unwrap();
            assert!(d.lo() <= dmax.hi(), "delta({x:?}) exceeds delta(1/2)");
        }
    }

    #[test]
    fn equilateral_area() {
        let t = RadiusTriple::Lll.tight_spec();
        let area = triangle_area(&t).unwrap();
        assert!(area.contains(3.0f64.sqrt()));
        assert!(area.width() < 1e-13);
    }

    #[test]
    fn tight_lls_area_is_one() {
        let area = triangle_area(&RadiusTriple::Lls.tight_spec()).unwrap();
        assert!(area.contains(1.0));
        assert!(area.width() < 1e-13);
        assert!(tight_area(RadiusTriple::Lls).contains(1.0));
    }

    #[test]
    fn small_equilateral_area_scales() {
        let area = triangle_area(&RadiusTriple::Sss.tight_spec()).unwrap();
        let r = std::f64::consts::SQRT_2 - 1.0;
        assert!(area.contains(r * r * 3.0f64.sqrt() * (1.0 - 1e-15)) || area.contains(r * r * 3.0f64.sqrt()));
        assert!((area.midpoint() - r * r * 3.0f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn degenerate_box_rejected() {
        let t = TriangleSpec {
            radii: RadiusTriple::Lll.radii(),
            sides: [pt(10.0), pt(2.0), pt(2.0)],
        };
        assert_eq!(triangle_area(&t), Err(DensityError::DegenerateBox));
    }

    #[test]
    fn coverage_of_tight_triangles() {
        let pi = std::f64::consts::PI;
        let r2 = 3.0 - 2.0 * std::f64::consts::SQRT_2;
        let cases = [
            (RadiusTriple::Lll, pi / 2.0),
            (RadiusTriple::Lls, pi * (1.0 + r2) / 4.0),
            (RadiusTriple::Sss, pi * r2 / 2.0),
        ];
        for (kind, expected) in cases {
            let cov = triangle_coverage(&kind.tight_spec()).unwrap();
            assert!(
                (cov.midpoint() - expected).abs() < 1e-12,
                "{kind:?}: {cov:?} vs {expected}"
            );
            let closed = tight_coverage(kind);
            assert!(closed.intersect(cov).is_some(), "{kind:?}");
        }
    }

    #[test]
    fn sector_crossing_reported() {
        // a long sliver: the middle disc reaches the opposite side
        let t = TriangleSpec {
            radii: RadiusTriple::Sss.radii(),
            sides: [
                Interval::new(0.8284, 0.8285),
                Interval::new(0.8284, 0.8285),
                Interval::new(1.62, 1.65),
            ],
        };
        assert_eq!(
            triangle_coverage(&t),
            Err(DensityError::SectorCrossesOppositeSide)
        );
    }

    // mpmath oracle values for tight emptiness
    const E111_05: f64 = 0.022952275422164646;
    const E111_06: f64 = 0.016016798310201543;
    const E11R_06: f64 = -0.004004199577550386;
    const ERRR_05: f64 = 0.003937987887798142;
    const E1RR_05: f64 = -0.00038333838338824215;

    #[test]
    fn tight_emptiness_values() {
        let e = tight_emptiness(RadiusTriple::Lll, pt(0.6)).unwrap();
        assert!(e.contains(E111_06), "{e:?}");
        assert!(e.width() < 1e-12);

        let e = tight_emptiness(RadiusTriple::Lls, pt(0.6)).unwrap();
        assert!(e.contains(E11R_06), "{e:?}");

        let e = tight_emptiness(RadiusTriple::Sss, pt(0.0)).unwrap();
        assert!(e.contains_zero(), "rrr tight is critical at x=0: {e:?}");
        assert!(e.width() < 1e-12);

        let e = tight_emptiness(RadiusTriple::Lll, pt(0.5)).unwrap();
        assert!(e.contains(E111_05));
        let e = tight_emptiness(RadiusTriple::Sss, pt(0.5)).unwrap();
        assert!(e.contains(ERRR_05));
        let e = tight_emptiness(RadiusTriple::Lss, pt(0.5)).unwrap();
        assert!(e.contains(E1RR_05));
    }

    #[test]
    fn tight_lls_emptiness_vanishes_at_half() {
        // delta(1/2) * 1 = pi(1+r^2)/4 exactly
        let e = tight_emptiness(RadiusTriple::Lls, pt(0.5)).unwrap();
        assert!(e.contains_zero());
        assert!(e.width() <= 1e-10);
        // and via the generic emptiness path
        let e2 = emptiness(&RadiusTriple::Lls.tight_spec(), pt(0.5)).unwrap();
        assert!(e2.contains_zero());
    }

    #[test]
    fn emptiness_scaling_between_lll_and_sss() {
        // E_rrr = r^2 E_111 at every x
        let r2 = 3.0 - 2.0 * std::f64::consts::SQRT_2;
        for x in [0.2, 0.5, 0.8] {
            let lll = tight_emptiness(RadiusTriple::Lll, pt(x)).unwrap();
            let sss = tight_emptiness(RadiusTriple::Sss, pt(x)).unwrap();
            assert!((sss.midpoint() - r2 * lll.midpoint()).abs() < 1e-12);
        }
    }

    #[test]
    fn tight_apex_angles() {
        let deg = 180.0 / std::f64::consts::PI;
        let cases = [
            (RadiusTriple::Lll, RadiusClass::Large, 60.0),
            (RadiusTriple::Lls, RadiusClass::Large, 45.0),
            (RadiusTriple::Lls, RadiusClass::Small, 90.0),
            (RadiusTriple::Lss, RadiusClass::Large, 34.06249691644686),
            (RadiusTriple::Lss, RadiusClass::Small, 72.96875154177657),
            (RadiusTriple::Sss, RadiusClass::Small, 60.0),
        ];
        for (kind, class, expected_deg) in cases {
            let a = tight_apex_angle(kind, class);
            assert!(
                (a.midpoint() * deg - expected_deg).abs() < 1e-9,
                "{kind:?} {class:?}: {}",
                a.midpoint() * deg
            );
        }
    }

    #[test]
    fn monotone_box_refinement() {
        // side 2 (opposite the small vertex) is the large-large side
        let parent = TriangleSpec {
            radii: RadiusTriple::Lls.radii(),
            sides: [
                Interval::new(1.45, 1.5),
                Interval::new(1.45, 1.5),
                Interval::new(2.0, 2.1),
            ],
        };
        let x = Interval::new(0.5, 0.51);
        let whole = emptiness(&parent, x).unwrap();
        let m = parent.sides[0].midpoint();
        for half in [
            Interval::new(parent.sides[0].lo(), m),
            Interval::new(m, parent.sides[0].hi()),
        ] {
            let child = TriangleSpec {
                radii: parent.radii,
                sides: [half, parent.sides[1], parent.sides[2]],
            };
            let e = emptiness(&child, x).unwrap();
            assert!(whole.contains_interval(e));
        }
    }

    #[test]
    fn coverage_bounds_sane() {
        let t = TriangleSpec {
            radii: RadiusTriple::Lls.radii(),
            sides: [
                Interval::new(1.45, 1.5),
                Interval::new(1.45, 1.5),
                Interval::new(2.0, 2.1),
            ],
        };
        let cov = triangle_coverage(&t).unwrap();
        assert!(cov.lo() >= 0.0);
        let pi = std::f64::consts::PI;
        let r2 = 3.0 - 2.0 * std::f64::consts::SQRT_2;
        let upper = pi / 2.0 * (1.0 + 1.0 + r2);
        assert!(cov.hi() <= upper);
    }
}
