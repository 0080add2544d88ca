//! Triangle mesh with one infinite vertex (sphere topology: every edge has
//! exactly two incident triangles), incremental insertion, and Lawson
//! legalization with the weighted in-circumscriber predicate.

use super::predicates::{
    beyond_hull_edge, dot_sign_exact, orient2d, same_center, tri_conflict, Sign, Verdict,
};
use super::FmError;
use crate::packing::Disc;

pub const INF: u32 = u32::MAX;

pub struct Mesh {
    pub tri: Vec<[u32; 3]>,
    pub nbr: Vec<[u32; 3]>,
}

#[derive(Debug, Clone, Copy)]
enum Loc {
    Inside(u32),
    OnEdge(u32, usize),
    OnVertex,
    InfFace(u32),
}

impl Mesh {
    fn slot(&self, t: u32, v: u32) -> usize {
        let tv = self.tri[t as usize];
        tv.iter().position(|&x| x == v).expect("vertex in triangle")
    }

    fn is_infinite(&self, t: u32) -> bool {
        self.tri[t as usize].contains(&INF)
    }

    /// Hull edge (a, b) of an infinite triangle, packing on the left of a->b.
    fn hull_edge(&self, t: u32) -> (u32, u32) {
        let k = self.slot(t, INF);
        let tv = self.tri[t as usize];
        (tv[(k + 2) % 3], tv[(k + 1) % 3])
    }

    /// Replace neighbor `old` of triangle `t` with `new`.
    fn replace_nbr(&mut self, t: u32, old: u32, new: u32) {
        let n = &mut self.nbr[t as usize];
        let k = n.iter().position(|&x| x == old).expect("neighbor link");
        n[k] = new;
    }

    fn locate(&self, discs: &[Disc], p: [f64; 2], hint: u32) -> Result<Loc, FmError> {
        let mut t = hint;
        let steps = 8 * self.tri.len() + 64;
        let mut prev = u32::MAX;
        for _ in 0..steps {
            if self.is_infinite(t) {
                let (a, b) = self.hull_edge(t);
                let (pa, pb) = (discs[a as usize].center, discs[b as usize].center);
                match orient2d(pa, pb, p) {
                    Sign::Negative => return Ok(Loc::InfFace(t)),
                    Sign::Positive => {
                        let k = self.slot(t, INF);
                        let next = self.nbr[t as usize][k];
                        prev = t;
                        t = next;
                    }
                    Sign::Zero => {
                        // on the hull line: between the endpoints it is an
                        // edge split; beyond them, move along the hull
                        if dot_sign_exact(p, pb, pa) == Sign::Positive {
                            let k = self.slot(t, a);
                            prev = t;
                            t = self.nbr[t as usize][k];
                        } else if dot_sign_exact(p, pa, pb) == Sign::Positive {
                            let k = self.slot(t, b);
                            prev = t;
                            t = self.nbr[t as usize][k];
                        } else {
                            return Ok(Loc::OnEdge(t, self.slot(t, INF)));
                        }
                    }
                }
                continue;
            }
            let tv = self.tri[t as usize];
            let mut zero_edge = None;
            let mut zeros = 0;
            let mut negatives: [Option<u32>; 3] = [None; 3];
            let mut any_negative = false;
            for i in 0..3 {
                let a = discs[tv[(i + 1) % 3] as usize].center;
                let b = discs[tv[(i + 2) % 3] as usize].center;
                match orient2d(a, b, p) {
                    Sign::Negative => {
                        negatives[i] = Some(self.nbr[t as usize][i]);
                        any_negative = true;
                    }
                    Sign::Zero => {
                        zero_edge = Some(i);
                        zeros += 1;
                    }
                    Sign::Positive => {}
                }
            }
            if any_negative {
                // prefer not to re-enter the triangle we just came from
                let next = negatives
                    .iter()
                    .flatten()
                    .copied()
                    .find(|&s| s != prev)
                    .or_else(|| negatives.iter().flatten().copied().next())
                    .unwrap();
                prev = t;
                t = next;
                continue;
            }
            return Ok(match zeros {
                0 => Loc::Inside(t),
                1 => Loc::OnEdge(t, zero_edge.unwrap()),
                _ => Loc::OnVertex,
            });
        }
        // fallback: exhaustive scan (exact predicates decide)
        for t in 0..self.tri.len() as u32 {
            if self.is_infinite(t) {
                let (a, b) = self.hull_edge(t);
                if orient2d(discs[a as usize].center, discs[b as usize].center, p) == Sign::Negative
                {
                    return Ok(Loc::InfFace(t));
                }
                continue;
            }
            let tv = self.tri[t as usize];
            let mut ok = true;
            let mut zero = None;
            let mut zeros = 0;
            for i in 0..3 {
                let a = discs[tv[(i + 1) % 3] as usize].center;
                let b = discs[tv[(i + 2) % 3] as usize].center;
                match orient2d(a, b, p) {
                    Sign::Negative => {
                        ok = false;
                        break;
                    }
                    Sign::Zero => {
                        zero = Some(i);
                        zeros += 1;
                    }
                    Sign::Positive => {}
                }
            }
            if ok {
                return Ok(match zeros {
                    0 => Loc::Inside(t),
                    1 => Loc::OnEdge(t, zero.unwrap()),
                    _ => Loc::OnVertex,
                });
            }
        }
        Err(FmError::DegenerateInput(
            "point location failed to terminate".into(),
        ))
    }

    /// Split triangle `t` into three at interior vertex `v`.
    /// Returns the triangles to legalize.
    fn split13(&mut self, t: u32, v: u32) -> [u32; 3] {
        let [a, b, c] = self.tri[t as usize];
        let [na, nb, nc] = self.nbr[t as usize];
        let t1 = self.tri.len() as u32;
        let t2 = t1 + 1;
        // t  := (a, b, v), t1 := (b, c, v), t2 := (c, a, v)
        self.tri[t as usize] = [a, b, v];
        self.tri.push([b, c, v]);
        self.tri.push([c, a, v]);
        self.nbr[t as usize] = [t1, t2, nc];
        self.nbr.push([t2, t, na]);
        self.nbr.push([t, t1, nb]);
        if na != t {
            self.replace_nbr(na, t, t1);
        }
        if nb != t {
            self.replace_nbr(nb, t, t2);
        }
        [t, t1, t2]
    }

    /// Split the shared edge opposite slot `k` of triangle `t` at vertex `v`.
    fn split24(&mut self, t: u32, k: usize, v: u32) -> [u32; 4] {
        let tv = self.tri[t as usize];
        let (p, q, r) = (tv[k], tv[(k + 1) % 3], tv[(k + 2) % 3]);
        let s = self.nbr[t as usize][k];
        let ks = {
            // slot of the vertex of s opposite the shared edge {q, r}
            let sv = self.tri[s as usize];
            (0..3)
                .find(|&i| sv[i] != q && sv[i] != r)
                .expect("opposite vertex")
        };
        let w = self.tri[s as usize][ks];
        // orient: t = (p, q, r) CCW, s = (w, r, q) CCW up to rotation
        let nt_q = self.nbr[t as usize][(k + 2) % 3]; // across (p, q)
        let nt_r = self.nbr[t as usize][(k + 1) % 3]; // across (r, p)
        let ns_q = {
            let sv = self.tri[s as usize];
            let i = (0..3).find(|&i| sv[i] == r).unwrap();
            self.nbr[s as usize][i] // across (q, w): edge opposite r
        };
        let ns_r = {
            let sv = self.tri[s as usize];
            let i = (0..3).find(|&i| sv[i] == q).unwrap();
            self.nbr[s as usize][i] // across (w, r): edge opposite q
        };
        let t2 = self.tri.len() as u32;
        let s2 = t2 + 1;
        // t  := (p, q, v), t2 := (p, v, r), s := (w, v, q), s2 := (w, r, v)
        self.tri[t as usize] = [p, q, v];
        self.tri[s as usize] = [w, v, q];
        self.tri.push([p, v, r]);
        self.tri.push([w, r, v]);
        self.nbr[t as usize] = [s, t2, nt_q];
        self.nbr[s as usize] = [t, ns_q, s2];
        self.nbr.push([s2, nt_r, t]);
        self.nbr.push([t2, s, ns_r]);
        if nt_r != s {
            self.replace_nbr(nt_r, t, t2);
        }
        if ns_r != t {
            self.replace_nbr(ns_r, s, s2);
        }
        [t, t2, s, s2]
    }

    /// Flip the edge opposite slot `k` of triangle `t`.
    /// Returns the two triangles after the flip (both contain `tri[t][k]`).
    fn flip(&mut self, t: u32, k: usize) -> [u32; 2] {
        let tv = self.tri[t as usize];
        let (p, q, r) = (tv[k], tv[(k + 1) % 3], tv[(k + 2) % 3]);
        let s = self.nbr[t as usize][k];
        let sv = self.tri[s as usize];
        let ks = (0..3)
            .find(|&i| sv[i] != q && sv[i] != r)
            .expect("opposite vertex");
        let w = sv[ks];
        let nt_q = self.nbr[t as usize][(k + 2) % 3]; // across (p, q)
        let nt_r = self.nbr[t as usize][(k + 1) % 3]; // across (r, p)
        let ns_q = {
            let i = (0..3).find(|&i| sv[i] == r).unwrap();
            self.nbr[s as usize][i] // across (q, w)
        };
        let ns_r = {
            let i = (0..3).find(|&i| sv[i] == q).unwrap();
            self.nbr[s as usize][i] // across (w, r)
        };
        // t := (p, q, w), s := (p, w, r)
        self.tri[t as usize] = [p, q, w];
        self.tri[s as usize] = [p, w, r];
        self.nbr[t as usize] = [ns_q, s, nt_q];
        self.nbr[s as usize] = [ns_r, nt_r, t];
        if ns_q != s {
            self.replace_nbr(ns_q, s, t);
        }
        if nt_r != t {
            self.replace_nbr(nt_r, t, s);
        }
        [t, s]
    }

    /// Restore the Delaunay property around newly inserted vertex `v`.
    fn legalize(&mut self, discs: &[Disc], v: u32, seeds: &[u32]) -> Result<(), FmError> {
        let mut stack: Vec<u32> = seeds.to_vec();
        let mut budget = 32 * self.tri.len() + 1024;
        while let Some(t) = stack.pop() {
            if budget == 0 {
                return Err(FmError::DegenerateInput(
                    "flip budget exceeded; input too degenerate".into(),
                ));
            }
            budget -= 1;
            if !self.tri[t as usize].contains(&v) {
                continue;
            }
            let k = self.slot(t, v);
            let s = self.nbr[t as usize][k];
            let flip_needed = if self.is_infinite(s) {
                let (a, b) = self.hull_edge(s);
                if a == v || b == v {
                    false
                } else {
                    let va = &discs[a as usize];
                    let vb = &discs[b as usize];
                    match beyond_hull_edge(va, vb, &discs[v as usize]) {
                        Ok(Verdict::True) => true,
                        Ok(_) => false,
                        Err(()) => {
                            return Err(FmError::DegenerateInput(format!(
                                "undecidable hull predicate at disc {v}"
                            )))
                        }
                    }
                }
            } else {
                let sv = self.tri[s as usize];
                if sv.contains(&v) {
                    false
                } else {
                    let (da, db, dc) = (
                        &discs[sv[0] as usize],
                        &discs[sv[1] as usize],
                        &discs[sv[2] as usize],
                    );
                    match tri_conflict(da, db, dc, &discs[v as usize]) {
                        Ok(Verdict::True) => true,
                        Ok(_) => false, // ties keep the current diagonal
                        Err(()) => {
                            return Err(FmError::DegenerateInput(format!(
                                "undecidable in-circumscriber predicate: triangle {:?} vs disc {v} at {:?}",
                                sv, discs[v as usize]
                            )))
                        }
                    }
                }
            };
            if flip_needed {
                let [t1, t2] = self.flip(t, k);
                stack.push(t1);
                stack.push(t2);
            }
        }
        Ok(())
    }

    #[cfg(test)]
    pub fn check_consistency(&self, discs: &[Disc]) {
        for t in 0..self.tri.len() as u32 {
            let tv = self.tri[t as usize];
            for i in 0..3 {
                let s = self.nbr[t as usize][i];
                let (a, b) = (tv[(i + 1) % 3], tv[(i + 2) % 3]);
                let sv = self.tri[s as usize];
                assert!(
                    sv.contains(&a) && sv.contains(&b) && s != t,
                    "edge ({a},{b}) of {t} not shared with {s}"
                );
                assert!(self.nbr[s as usize].contains(&t), "asymmetric link {t}<->{s}");
            }
            if !self.is_infinite(t) {
                let (a, b, c) = (
                    discs[tv[0] as usize].center,
                    discs[tv[1] as usize].center,
                    discs[tv[2] as usize].center,
                );
                assert_eq!(orient2d(a, b, c), Sign::Positive, "triangle {t} not CCW");
            }
        }
    }
}

/// Build the triangulation by incremental insertion in a deterministic
/// spatial order.
pub fn build(discs: &[Disc]) -> Result<Mesh, FmError> {
    if discs.len() < 3 {
        return Err(FmError::TooFewDiscs);
    }
    // Large discs go first: equal-radius hull degeneracies resolve by exact
    // ties, and small discs that sit exactly on a chord between two larges
    // (the nested-disc diagonal) then arrive as interior edge splits instead
    // of forcing a degenerate hull wrap.
    let mut order: Vec<u32> = (0..discs.len() as u32).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&discs[i as usize], &discs[j as usize]);
        let small = |d: &Disc| d.class == crate::density::RadiusClass::Small;
        small(a)
            .cmp(&small(b))
            .then(a.center[0].total_cmp(&b.center[0]))
            .then(a.center[1].total_cmp(&b.center[1]))
            .then(i.cmp(&j))
    });
    {
        let mut by_pos: Vec<u32> = (0..discs.len() as u32).collect();
        by_pos.sort_by(|&i, &j| {
            let (a, b) = (&discs[i as usize], &discs[j as usize]);
            a.center[0]
                .total_cmp(&b.center[0])
                .then(a.center[1].total_cmp(&b.center[1]))
        });
        for w in by_pos.windows(2) {
            if same_center(&discs[w[0] as usize], &discs[w[1] as usize]) {
                return Err(FmError::DegenerateInput("coincident disc centers".into()));
            }
        }
    }
    // bootstrap: first two discs plus the first non-collinear third
    let (i0, i1) = (order[0], order[1]);
    let mut third = None;
    for (pos, &i) in order.iter().enumerate().skip(2) {
        match orient2d(
            discs[i0 as usize].center,
            discs[i1 as usize].center,
            discs[i as usize].center,
        ) {
            Sign::Zero => continue,
            s => {
                third = Some((pos, i, s));
                break;
            }
        }
    }
    let Some((pos2, i2, s2)) = third else {
        return Err(FmError::DegenerateInput("all disc centers collinear".into()));
    };
    let (a, b, c) = if s2 == Sign::Positive {
        (i0, i1, i2)
    } else {
        (i1, i0, i2)
    };
    let mut mesh = Mesh {
        tri: vec![[a, b, c], [b, a, INF], [c, b, INF], [a, c, INF]],
        nbr: vec![[2, 3, 1], [3, 2, 0], [1, 3, 0], [2, 1, 0]],
    };
    // wiring above: finite 0 has neighbors across (b,c)=2, (c,a)=3, (a,b)=1
    let mut hint = 0u32;
    for (pos, &i) in order.iter().enumerate().skip(2) {
        if pos == pos2 {
            continue;
        }
        insert(&mut mesh, discs, i, &mut hint)?;
    }
    Ok(mesh)
}

fn insert(mesh: &mut Mesh, discs: &[Disc], v: u32, hint: &mut u32) -> Result<(), FmError> {
    let p = discs[v as usize].center;
    let loc = mesh.locate(discs, p, *hint)?;
    let seeds: Vec<u32> = match loc {
        Loc::OnVertex => {
            return Err(FmError::DegenerateInput(format!(
                "disc {v} coincides with an existing center"
            )))
        }
        Loc::Inside(t) | Loc::InfFace(t) => mesh.split13(t, v).to_vec(),
        Loc::OnEdge(t, k) => mesh.split24(t, k, v).to_vec(),
    };
    mesh.legalize(discs, v, &seeds)?;
    *hint = seeds[0];
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::RadiusClass::*;

    fn d(x: f64, y: f64, c: crate::density::RadiusClass) -> Disc {
        Disc::new(x, y, c)
    }

    fn finite_triangles(m: &Mesh) -> Vec<[u32; 3]> {
        let mut v: Vec<[u32; 3]> = m
            .tri
            .iter()
            .filter(|t| !t.contains(&INF))
            .map(|t| {
                let mut s = *t;
                s.sort_unstable();
                s
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn three_tangent_discs_one_triangle() {
        let discs = vec![
            d(0.0, 0.0, Large),
            d(2.0, 0.0, Large),
            d(1.0, 3.0f64.sqrt(), Large),
        ];
        let m = build(&discs).unwrap();
        m.check_consistency(&discs);
        assert_eq!(finite_triangles(&m), vec![[0, 1, 2]]);
    }

    #[test]
    fn square_of_unit_discs_with_center_small() {
        let discs = vec![
            d(0.0, 0.0, Large),
            d(2.0, 0.0, Large),
            d(2.0, 2.0, Large),
            d(0.0, 2.0, Large),
            d(1.0, 1.0, Small),
        ];
        let m = build(&discs).unwrap();
        m.check_consistency(&discs);
        let tris = finite_triangles(&m);
        assert_eq!(tris.len(), 4, "{tris:?}");
        for t in tris {
            assert!(t.contains(&4), "every triangle uses the center small: {t:?}");
        }
    }

    #[test]
    fn collinear_input_rejected() {
        let discs = vec![
            d(0.0, 0.0, Large),
            d(2.0, 0.0, Large),
            d(4.0, 0.0, Large),
        ];
        assert!(matches!(
            build(&discs),
            Err(FmError::DegenerateInput(_))
        ));
    }

    #[test]
    fn grid_with_collinear_rows_builds() {
        let mut discs = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                discs.push(d(2.0 * i as f64, 2.0 * j as f64, Large));
            }
        }
        // interleave the nested smalls
        for i in 0..4 {
            for j in 0..4 {
                discs.push(d(2.0 * i as f64 + 1.0, 2.0 * j as f64 + 1.0, Small));
            }
        }
        let m = build(&discs).unwrap();
        m.check_consistency(&discs);
        // Euler: V - E + F = 2 with the outer face
        let f = finite_triangles(&m).len();
        let mut edges = std::collections::HashSet::new();
        for t in finite_triangles(&m) {
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                edges.insert((u.min(v), u.max(v)));
            }
        }
        let v = discs.len() as i64;
        let e = edges.len() as i64;
        assert_eq!(v - e + (f as i64 + 1), 2);
    }
}
