//! FM-triangulations (additively weighted Delaunay) of finite packings,
//! neighborhood words, and the neighborhood census.

mod exact;
mod mesh;
mod predicates;

pub use mesh::INF;
pub use predicates::{support_circle, weighted_distance, SupportCircle, SupportOutcome};

use crate::density::RadiusClass;
use crate::packing::Packing;
use predicates::{conflicts, orient2d, Sign, Verdict};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FmError {
    #[error("a triangulation needs at least 3 discs")]
    TooFewDiscs,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("disc {0} touches the outer face; its fan is not closed")]
    BoundaryDisc(usize),
    #[error("window contains no interior discs")]
    EmptyWindow,
}

/// The FM-triangulation of a packing: the dual of its additively weighted
/// cell partition, triangulating the convex region spanned by the discs.
pub struct FmTriangulation {
    mesh: mesh::Mesh,
    /// one incident mesh triangle per vertex
    vertex_tri: Vec<u32>,
}

pub fn fm_triangulation(p: &Packing) -> Result<FmTriangulation, FmError> {
    let mesh = mesh::build(p.discs())?;
    let mut vertex_tri = vec![u32::MAX; p.len()];
    for (t, tv) in mesh.tri.iter().enumerate() {
        for &v in tv {
            if v != INF {
                vertex_tri[v as usize] = t as u32;
            }
        }
    }
    Ok(FmTriangulation { mesh, vertex_tri })
}

impl FmTriangulation {
    /// Finite triangles as vertex-index triples (counterclockwise).
    pub fn triangles(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        self.mesh
            .tri
            .iter()
            .filter(|t| !t.contains(&INF))
            .copied()
    }

    /// Finite triangles normalized for set comparison.
    pub fn triangle_set(&self) -> Vec<[u32; 3]> {
        let mut v: Vec<[u32; 3]> = self
            .triangles()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        v.sort_unstable();
        v
    }

    /// Interior edges each carry exactly two triangles; returns the
    /// edge -> (triangle pair) adjacency over finite triangles.
    pub fn adjacency(&self) -> HashMap<(u32, u32), Vec<usize>> {
        let mut adj: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        for (i, t) in self.triangles().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                adj.entry((a.min(b), a.max(b))).or_default().push(i);
            }
        }
        adj
    }

    /// FM-neighbors of disc `i` in clockwise order; errors if the fan is
    /// open (boundary disc).
    pub fn neighbors_cw(&self, i: usize) -> Result<Vec<u32>, FmError> {
        let v = i as u32;
        let start = self.vertex_tri[i];
        if start == u32::MAX {
            return Err(FmError::BoundaryDisc(i));
        }
        // walk counterclockwise around v, then reverse
        let mut fan = Vec::new();
        let mut t = start;
        loop {
            if self.mesh.tri[t as usize].contains(&INF) {
                return Err(FmError::BoundaryDisc(i));
            }
            let tv = self.mesh.tri[t as usize];
            let k = tv.iter().position(|&x| x == v).unwrap();
            // neighbor listed after v in CCW order
            fan.push(tv[(k + 1) % 3]);
            // rotate: cross the edge (v, tv[k+2]) -> neighbor opposite tv[k+1]
            t = self.mesh.nbr[t as usize][(k + 1) % 3];
            if t == start {
                break;
            }
            if fan.len() > self.mesh.tri.len() {
                return Err(FmError::DegenerateInput(format!(
                    "fan walk around disc {i} did not close"
                )));
            }
        }
        fan.reverse();
        Ok(fan)
    }
}

/// Cyclic word over the radius classes of a disc's FM-neighbors, clockwise.
/// Equality is up to rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NeighborhoodWord {
    canonical: String,
}

impl NeighborhoodWord {
    pub fn from_classes(classes: &[RadiusClass]) -> NeighborhoodWord {
        let s: String = classes.iter().map(|c| c.letter()).collect();
        NeighborhoodWord {
            canonical: canonical_rotation(&s),
        }
    }

    pub fn from_letters(s: &str) -> NeighborhoodWord {
        assert!(s.chars().all(|c| c == '1' || c == 'r'));
        NeighborhoodWord {
            canonical: canonical_rotation(s),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }
}

impl std::fmt::Display for NeighborhoodWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical)
    }
}

/// Lexicographically smallest rotation.
fn canonical_rotation(s: &str) -> String {
    let b = s.as_bytes();
    let n = b.len();
    if n == 0 {
        return String::new();
    }
    let mut best = 0usize;
    for i in 1..n {
        for j in 0..n {
            let (x, y) = (b[(best + j) % n], b[(i + j) % n]);
            match y.cmp(&x) {
                std::cmp::Ordering::Less => {
                    best = i;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    s[best..].chars().chain(s[..best].chars()).collect()
}

/// Clockwise neighborhood word of disc `i`.
pub fn neighborhood_word(
    t: &FmTriangulation,
    p: &Packing,
    i: usize,
) -> Result<NeighborhoodWord, FmError> {
    let fan = t.neighbors_cw(i)?;
    let classes: Vec<RadiusClass> = fan
        .iter()
        .map(|&j| p.discs()[j as usize].class)
        .collect();
    Ok(NeighborhoodWord::from_classes(&classes))
}

/// Stoichiometry regime for the neighborhood statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    XLeHalf,
    XGeHalf,
}

/// Is the word outside the regime's allowed neighborhood set?
pub fn is_bad_neighborhood(w: &NeighborhoodWord, class: RadiusClass, regime: Regime) -> bool {
    let good: &[&str] = match (regime, class) {
        (Regime::XLeHalf, RadiusClass::Small) => &["1111", "rrrrrr"],
        (Regime::XLeHalf, RadiusClass::Large) => &["1r1r1r1r"],
        (Regime::XGeHalf, RadiusClass::Small) => &["1111"],
        (Regime::XGeHalf, RadiusClass::Large) => &["1r1r1r1r", "1111r1r", "111r11r", "111111"],
    };
    !good
        .iter()
        .any(|g| canonical_rotation(g) == *w.as_str())
}

/// Census of neighborhood words over the interior discs inside the window
/// [-k, k]^2. Boundary discs (open fans) are excluded.
#[derive(Debug, Clone)]
pub struct Census {
    pub counts: BTreeMap<(char, String), u64>,
    pub interior: u64,
    pub boundary_skipped: u64,
    pub bad_le_half: u64,
    pub bad_ge_half: u64,
}

impl Census {
    pub fn bad_fraction(&self, regime: Regime) -> f64 {
        let bad = match regime {
            Regime::XLeHalf => self.bad_le_half,
            Regime::XGeHalf => self.bad_ge_half,
        };
        bad as f64 / self.interior as f64
    }
}

pub fn neighborhood_census(p: &Packing, window_radius: f64) -> Result<Census, FmError> {
    let t = fm_triangulation(p)?;
    let mut census = Census {
        counts: BTreeMap::new(),
        interior: 0,
        boundary_skipped: 0,
        bad_le_half: 0,
        bad_ge_half: 0,
    };
    for i in p.indices_in_window(window_radius) {
        let class = p.discs()[i].class;
        match neighborhood_word(&t, p, i) {
            Ok(w) => {
                census.interior += 1;
                if is_bad_neighborhood(&w, class, Regime::XLeHalf) {
                    census.bad_le_half += 1;
                }
                if is_bad_neighborhood(&w, class, Regime::XGeHalf) {
                    census.bad_ge_half += 1;
                }
                *census
                    .counts
                    .entry((class.letter(), w.as_str().to_owned()))
                    .or_insert(0) += 1;
            }
            Err(FmError::BoundaryDisc(_)) => census.boundary_skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if census.interior == 0 {
        return Err(FmError::EmptyWindow);
    }
    Ok(census)
}

/// Brute-force reference: accept every counterclockwise triple whose
/// support circle exists and is in conflict with no other disc. O(n^4);
/// intended as the oracle for small instances.
pub fn reference_triangulation(p: &Packing) -> Result<Vec<[u32; 3]>, FmError> {
    let discs = p.discs();
    let n = discs.len();
    if n < 3 {
        return Err(FmError::TooFewDiscs);
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                // orient the triple counterclockwise
                let (a, b, c) = match orient2d(discs[i].center, discs[j].center, discs[k].center) {
                    Sign::Positive => (i, j, k),
                    Sign::Negative => (i, k, j),
                    Sign::Zero => continue,
                };
                let (outcome, circ) = support_circle(&discs[a], &discs[b], &discs[c]);
                enum Ctx {
                    Interval(SupportCircle),
                    Exact(exact::ExactSupport),
                }
                let ctx = match outcome {
                    SupportOutcome::Found => Ctx::Interval(circ.unwrap()),
                    SupportOutcome::None => continue,
                    SupportOutcome::Undecided => {
                        match exact::solve_support(&discs[a], &discs[b], &discs[c]) {
                            Ok(es) => Ctx::Exact(es),
                            Err(exact::ExactVerdict::NoCircle) => continue,
                            Err(_) => {
                                return Err(FmError::DegenerateInput(format!(
                                    "support circle of ({i},{j},{k}) degenerate"
                                )))
                            }
                        }
                    }
                };
                let mut empty = true;
                for (q, d) in discs.iter().enumerate() {
                    if q == i || q == j || q == k {
                        continue;
                    }
                    let verdict = match &ctx {
                        Ctx::Interval(circ) => match conflicts(circ, d) {
                            Some(v) => v,
                            None => {
                                match exact::support_conflict(&discs[a], &discs[b], &discs[c], d) {
                                    exact::ExactVerdict::Conflict
                                    | exact::ExactVerdict::NoCircle => Verdict::True,
                                    exact::ExactVerdict::NoConflict => Verdict::False,
                                    exact::ExactVerdict::Tie => Verdict::Tie,
                                    exact::ExactVerdict::Collinear => {
                                        return Err(FmError::DegenerateInput(format!(
                                            "collinear support solve for ({i},{j},{k})"
                                        )))
                                    }
                                }
                            }
                        },
                        Ctx::Exact(es) => match es.conflicts(d) {
                            exact::ExactVerdict::Conflict => Verdict::True,
                            exact::ExactVerdict::Tie => Verdict::Tie,
                            _ => Verdict::False,
                        },
                    };
                    if verdict == Verdict::True {
                        empty = false;
                        break;
                    }
                }
                if empty {
                    let mut t = [a as u32, b as u32, c as u32];
                    t.sort_unstable();
                    out.push(t);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
