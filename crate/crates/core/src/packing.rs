//! Finite packings of discs with radii 1 and sqrt(2) - 1, plus the JSON
//! wire format used by the CLI.

use crate::density::RadiusClass;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Documented slack for the interior-disjointness invariant.
pub const DISJOINT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackingError {
    #[error("discs {0} and {1} overlap: center distance {2} < radius sum - tolerance")]
    Overlap(usize, usize, f64),
    #[error("packing JSON: unsupported radius_small {0:?}")]
    BadRadiusTag(String),
    #[error("disc has a non-finite coordinate")]
    NonFiniteCoordinate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: [f64; 2],
    pub class: RadiusClass,
}

impl Disc {
    pub fn new(x: f64, y: f64, class: RadiusClass) -> Disc {
        Disc {
            center: [x, y],
            class,
        }
    }

    pub fn radius(&self) -> f64 {
        self.class.radius_f64()
    }
}

/// A set of interior-disjoint discs.
#[derive(Debug, Clone, Default)]
pub struct Packing {
    discs: Vec<Disc>,
}

impl Packing {
    /// Validates interior-disjointness (tolerance [`DISJOINT_TOL`]) with a
    /// spatial grid; O(n) for bounded-density inputs.
    pub fn new(discs: Vec<Disc>) -> Result<Packing, PackingError> {
        for d in &discs {
            if !d.center[0].is_finite() || !d.center[1].is_finite() {
                return Err(PackingError::NonFiniteCoordinate);
            }
        }
        let p = Packing { discs };
        if let Some((i, j, d)) = p.closest_violation() {
            return Err(PackingError::Overlap(i, j, d));
        }
        Ok(p)
    }

    /// Grid-accelerated search for a pair violating disjointness.
    fn closest_violation(&self) -> Option<(usize, usize, f64)> {
        const CELL: f64 = 2.5; // >= max radius sum + slack
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let key = |c: [f64; 2]| ((c[0] / CELL).floor() as i64, (c[1] / CELL).floor() as i64);
        for (i, d) in self.discs.iter().enumerate() {
            grid.entry(key(d.center)).or_default().push(i);
        }
        for (i, d) in self.discs.iter().enumerate() {
            let (kx, ky) = key(d.center);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(bucket) = grid.get(&(kx + dx, ky + dy)) else {
                        continue;
                    };
                    for &j in bucket {
                        if j <= i {
                            continue;
                        }
                        let e = &self.discs[j];
                        let ddx = d.center[0] - e.center[0];
                        let ddy = d.center[1] - e.center[1];
                        let dist = (ddx * ddx + ddy * ddy).sqrt();
                        let need = d.radius() + e.radius() - DISJOINT_TOL;
                        if dist < need {
                            return Some((i, j, dist));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    /// Fraction of large discs (NaN for an empty packing).
    pub fn large_fraction(&self) -> f64 {
        let large = self
            .discs
            .iter()
            .filter(|d| d.class == RadiusClass::Large)
            .count();
        large as f64 / self.discs.len() as f64
    }

    /// Discs whose centers lie in the closed square [-k, k]^2.
    pub fn indices_in_window(&self, k: f64) -> Vec<usize> {
        self.discs
            .iter()
            .enumerate()
            .filter(|(_, d)| d.center[0].abs() <= k && d.center[1].abs() <= k)
            .map(|(i, _)| i)
            .collect()
    }
}

// --- JSON wire format -------------------------------------------------

pub const RADIUS_SMALL_TAG: &str = "sqrt(2)-1";

#[derive(Debug, Serialize, Deserialize)]
pub struct PackingJson {
    pub radius_small: String,
    pub discs: Vec<DiscJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DiscJson {
    pub x: f64,
    pub y: f64,
    pub size: SizeTag,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub enum SizeTag {
    L,
    S,
}

impl From<&Packing> for PackingJson {
    fn from(p: &Packing) -> PackingJson {
        PackingJson {
            radius_small: RADIUS_SMALL_TAG.to_owned(),
            discs: p
                .discs
                .iter()
                .map(|d| DiscJson {
                    x: d.center[0],
                    y: d.center[1],
                    size: match d.class {
                        RadiusClass::Large => SizeTag::L,
                        RadiusClass::Small => SizeTag::S,
                    },
                })
                .collect(),
        }
    }
}

impl PackingJson {
    pub fn into_packing(self) -> Result<Packing, PackingError> {
        if self.radius_small != RADIUS_SMALL_TAG {
            return Err(PackingError::BadRadiusTag(self.radius_small));
        }
        Packing::new(
            self.discs
                .into_iter()
                .map(|d| {
                    Disc::new(
                        d.x,
                        d.y,
                        match d.size {
                            SizeTag::L => RadiusClass::Large,
                            SizeTag::S => RadiusClass::Small,
                        },
                    )
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlapping_discs_rejected() {
        let discs = vec![
            Disc::new(0.0, 0.0, RadiusClass::Large),
            Disc::new(1.5, 0.0, RadiusClass::Large),
        ];
        assert!(matches!(
            Packing::new(discs),
            Err(PackingError::Overlap(0, 1, _))
        ));
    }

    #[test]
    fn tangent_discs_accepted() {
        let discs = vec![
            Disc::new(0.0, 0.0, RadiusClass::Large),
            Disc::new(2.0, 0.0, RadiusClass::Large),
            Disc::new(1.0, 1.0, RadiusClass::Small),
        ];
        Packing::new(discs).unwrap();
    }

    #[test]
    fn tolerance_slack_accepted() {
        let discs = vec![
            Disc::new(0.0, 0.0, RadiusClass::Large),
            Disc::new(2.0 - 0.5e-9, 0.0, RadiusClass::Large),
        ];
        Packing::new(discs).unwrap();
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let p = Packing::new(vec![
            Disc::new(0.1, -0.25, RadiusClass::Large),
            Disc::new(3.0, 0.333333333333333333, RadiusClass::Small),
        ])
        .unwrap();
        let j1 = serde_json::to_string_pretty(&PackingJson::from(&p)).unwrap();
        let parsed: PackingJson = serde_json::from_str(&j1).unwrap();
        let p2 = parsed.into_packing().unwrap();
        let j2 = serde_json::to_string_pretty(&PackingJson::from(&p2)).unwrap();
        assert_eq!(j1, j2);
    }

    #[test]
    fn bad_radius_tag_rejected() {
        let json = r#"{"radius_small": "0.5", "discs": []}"#;
        let parsed: PackingJson = serde_json::from_str(json).unwrap();
        assert!(matches!(
            parsed.into_packing(),
            Err(PackingError::BadRadiusTag(_))
        ));
    }
}
