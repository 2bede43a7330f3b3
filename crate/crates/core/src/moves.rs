//! Flag-like local moves: Pachner moves on tetrahedra, extended moves on
//! surface triangles and edges, the 3-6 move on knot edges, their inverses
//! and general stellar subdivision.
//!
//! Subdivisions (P14, X26, K36, stellar) and welds (P41, X62, K63) are
//! stellar moves on a simplex `σ`: the star of `σ` is `σ * L` and the star
//! of the new vertex `w` is `w * ∂σ * L`. Flips (P23, P32, X44) swap one
//! triangulation of a ball for another with the same boundary. Every
//! result is validated before it is returned.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    edge_key, induced_face, single_cycle_length, tet_key, triangle_key, ComplexIssue, EdgeKey, StratifiedTriangulation,
    TriangleKey, VertexId, VertexTable,
};
use crate::stratum::Stratum;
use crate::subdivision::stellar_subdivide;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum MoveKind {
    P14,
    P41,
    P23,
    P32,
    X26,
    X62,
    X44,
    K36,
    K63,
    Stellar,
}

impl MoveKind {
    pub const ALL: [MoveKind; 10] = [
        MoveKind::P14,
        MoveKind::P41,
        MoveKind::P23,
        MoveKind::P32,
        MoveKind::X26,
        MoveKind::X62,
        MoveKind::X44,
        MoveKind::K36,
        MoveKind::K63,
        MoveKind::Stellar,
    ];

    /// The moves used by random walks: everything but general stellar
    /// subdivision, which has no inverse in the set.
    pub const WALK: [MoveKind; 9] = [
        MoveKind::P14,
        MoveKind::P41,
        MoveKind::P23,
        MoveKind::P32,
        MoveKind::X26,
        MoveKind::X62,
        MoveKind::X44,
        MoveKind::K36,
        MoveKind::K63,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::P14 => "P14",
            MoveKind::P41 => "P41",
            MoveKind::P23 => "P23",
            MoveKind::P32 => "P32",
            MoveKind::X26 => "X26",
            MoveKind::X62 => "X62",
            MoveKind::X44 => "X44",
            MoveKind::K36 => "K36",
            MoveKind::K63 => "K63",
            MoveKind::Stellar => "STELLAR",
        }
    }

    /// Whether the move adds a vertex.
    pub fn adds_vertex(self) -> bool {
        matches!(self, MoveKind::P14 | MoveKind::X26 | MoveKind::K36 | MoveKind::Stellar)
    }

    pub fn inverse(self) -> Option<MoveKind> {
        Some(match self {
            MoveKind::P14 => MoveKind::P41,
            MoveKind::P41 => MoveKind::P14,
            MoveKind::P23 => MoveKind::P32,
            MoveKind::P32 => MoveKind::P23,
            MoveKind::X26 => MoveKind::X62,
            MoveKind::X62 => MoveKind::X26,
            MoveKind::X44 => MoveKind::X44,
            MoveKind::K36 => MoveKind::K63,
            MoveKind::K63 => MoveKind::K36,
            MoveKind::Stellar => return None,
        })
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = MoveError;

    fn from_str(s: &str) -> Result<Self, MoveError> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| MoveError::UnknownKind(s.to_string()))
    }
}

/// A move and the simplex it acts on. Sites are a tetrahedron (P14), a
/// triangle (P23, X26), an edge (P32, X44), a directed knot edge (K36),
/// a vertex (P41, X62, K63) or any simplex of dimension 1 to 3 (stellar).
/// New vertices always take the next free id and the last place in their
/// stratum order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub site: Vec<VertexId>,
}

impl MoveDescriptor {
    pub fn new(kind: MoveKind, site: Vec<VertexId>) -> Self {
        MoveDescriptor { kind, site }
    }
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for v in &self.site {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("unknown move kind {0:?}")]
    UnknownKind(String),
    #[error("{kind} not applicable at {site:?}: {reason}")]
    Inapplicable { kind: MoveKind, site: Vec<VertexId>, reason: String },
}

/// Outcome of [`applicable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applicability {
    pub applicable: bool,
    pub reason: String,
}

pub fn applicable(t: &StratifiedTriangulation, m: &MoveDescriptor) -> Applicability {
    match apply(t, m) {
        Ok(_) => Applicability { applicable: true, reason: "ok".into() },
        Err(MoveError::Inapplicable { reason, .. }) | Err(MoveError::UnknownKind(reason)) => {
            Applicability { applicable: false, reason }
        }
    }
}

pub fn apply(t: &StratifiedTriangulation, m: &MoveDescriptor) -> Result<StratifiedTriangulation, MoveError> {
    let fail = |reason: String| MoveError::Inapplicable { kind: m.kind, site: m.site.clone(), reason };
    let result = rewrite(t, m).map_err(fail)?;
    let report = result.validate();
    if let Some(issue) =
        report.iter().find(|i| matches!(i, ComplexIssue::FlagViolation { .. })).or_else(|| report.iter().next())
    {
        return Err(fail(issue.to_string()));
    }
    Ok(result)
}

fn rewrite(t: &StratifiedTriangulation, m: &MoveDescriptor) -> Result<StratifiedTriangulation, String> {
    let n = t.vertex_count();
    if let Some(v) = m.site.iter().find(|&&v| v >= n) {
        return Err(format!("vertex {v} out of range"));
    }
    let expect_len = |k: usize| {
        if m.site.len() == k {
            Ok(())
        } else {
            Err(format!("site needs {k} vertices, got {}", m.site.len()))
        }
    };
    match m.kind {
        MoveKind::P14 => {
            expect_len(4)?;
            subdivide(t, &m.site)
        }
        MoveKind::X26 => {
            expect_len(3)?;
            let tri = [m.site[0], m.site[1], m.site[2]];
            if !t.is_surface_triangle(tri) {
                return Err("not a surface triangle".into());
            }
            subdivide(t, &m.site)
        }
        MoveKind::K36 => {
            expect_len(2)?;
            let (a, b) = (m.site[0], m.site[1]);
            if !t.is_knot_edge(a, b) {
                return Err("not a knot edge".into());
            }
            let link = t.skeleton().edge_link(t, edge_key(a, b));
            if link.len() != 3 {
                return Err(format!("link has {} edges, not 3", link.len()));
            }
            subdivide(t, &m.site)
        }
        MoveKind::Stellar => {
            if !(2..=4).contains(&m.site.len()) {
                return Err("site must be an edge, triangle or tetrahedron".into());
            }
            subdivide(t, &m.site)
        }
        MoveKind::P41 => {
            expect_len(1)?;
            let w = m.site[0];
            if t.dim(w) != Stratum::Bulk {
                return Err("vertex is not in the bulk".into());
            }
            let sigma: BTreeSet<VertexId> = t.skeleton().vertex_link(t, w).iter().flatten().copied().collect();
            weld(t, w, sigma)
        }
        MoveKind::X62 => {
            expect_len(1)?;
            let w = m.site[0];
            if t.dim(w) != Stratum::Surface {
                return Err("vertex is not in the surface interior".into());
            }
            let sigma: BTreeSet<VertexId> = t
                .surface_triangles()
                .iter()
                .filter(|tri| tri.contains(&w))
                .flatten()
                .copied()
                .filter(|&v| v != w)
                .collect();
            weld(t, w, sigma)
        }
        MoveKind::K63 => {
            expect_len(1)?;
            let w = m.site[0];
            if t.dim(w) != Stratum::Knot {
                return Err("vertex is not on the knot".into());
            }
            let sigma: BTreeSet<VertexId> = t
                .knot_edges()
                .iter()
                .filter(|(a, b)| *a == w || *b == w)
                .map(|&(a, b)| if a == w { b } else { a })
                .collect();
            weld(t, w, sigma)
        }
        MoveKind::P23 => {
            expect_len(3)?;
            let tri = triangle_key([m.site[0], m.site[1], m.site[2]]);
            let s = t.skeleton();
            let Some(&ti) = s.triangle_index.get(&tri) else {
                return Err("not a triangle".into());
            };
            if s.surface.contains(&tri) {
                return Err("triangle lies in the surface".into());
            }
            let star = &s.triangle_tets[ti];
            if star.len() != 2 {
                return Err(format!("triangle is in {} tetrahedra", star.len()));
            }
            let apex = |ti: usize| *t.tetrahedra()[ti].iter().find(|v| !tri.contains(v)).unwrap();
            let (d, e) = (apex(star[0]), apex(star[1]));
            if d == e {
                return Err("both tetrahedra share their fourth vertex".into());
            }
            if t.has_edge(d, e) {
                return Err(format!("edge {:?} already exists", edge_key(d, e)));
            }
            let [a, b, c] = tri;
            flip(t, star, &[[a, b, d, e], [b, c, d, e], [a, c, d, e]], &[], &[])
        }
        MoveKind::P32 => {
            expect_len(2)?;
            let e = edge_key(m.site[0], m.site[1]);
            let s = t.skeleton();
            if !s.edge_index.contains_key(&e) {
                return Err("not an edge".into());
            }
            if s.surface_edges.contains_key(&e) {
                return Err("edge lies in the surface".into());
            }
            let link = s.edge_link(t, e);
            if single_cycle_length(&link) != Some(3) {
                return Err(format!("link has {} edges, not a 3-cycle", link.len()));
            }
            let ring: BTreeSet<VertexId> = link.iter().flatten().copied().collect();
            let [a, b, c] = <[VertexId; 3]>::try_from(ring.into_iter().collect::<Vec<_>>()).unwrap();
            if s.triangle_index.contains_key(&[a, b, c]) {
                return Err(format!("triangle {:?} already exists", [a, b, c]));
            }
            let star = star_of(t, &e);
            flip(t, &star, &[[a, b, c, e[0]], [a, b, c, e[1]]], &[], &[])
        }
        MoveKind::X44 => {
            expect_len(2)?;
            let e = edge_key(m.site[0], m.site[1]);
            let s = t.skeleton();
            if s.surface_edges.get(&e) != Some(&2) {
                return Err("not an interior surface edge".into());
            }
            let link = s.edge_link(t, e);
            if single_cycle_length(&link) != Some(4) {
                return Err(format!("link has {} edges, not a 4-cycle", link.len()));
            }
            let sides: Vec<VertexId> = t
                .surface_triangles()
                .iter()
                .filter(|tri| tri.contains(&e[0]) && tri.contains(&e[1]))
                .map(|tri| *tri.iter().find(|v| !e.contains(v)).unwrap())
                .collect();
            let (a, c) = (sides[0], sides[1]);
            if link.contains(&edge_key(a, c)) {
                return Err("surface triangles are faces of one tetrahedron".into());
            }
            if t.has_edge(a, c) {
                return Err(format!("edge {:?} already exists", edge_key(a, c)));
            }
            let others: Vec<VertexId> = link
                .iter()
                .flatten()
                .copied()
                .filter(|&v| v != a && v != c)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let (x, y) = (others[0], others[1]);
            let [b, d] = e;
            let star = star_of(t, &e);
            flip(
                t,
                &star,
                &[[a, b, c, x], [a, c, d, x], [a, b, c, y], [a, c, d, y]],
                &[triangle_key([a, b, d]), triangle_key([c, b, d])],
                &[[a, b, c], [a, c, d]],
            )
        }
    }
}

fn star_of(t: &StratifiedTriangulation, simplex: &[VertexId]) -> Vec<usize> {
    t.tetrahedra()
        .iter()
        .enumerate()
        .filter(|(_, tet)| simplex.iter().all(|v| tet.contains(v)))
        .map(|(i, _)| i)
        .collect()
}

fn subdivide(t: &StratifiedTriangulation, simplex: &[VertexId]) -> Result<StratifiedTriangulation, String> {
    stellar_subdivide(t, simplex).map_err(|e| e.to_string())
}

/// Replaces the tetrahedra `star` by `added`, orienting each new one
/// against a boundary face of the cavity.
fn flip(
    t: &StratifiedTriangulation,
    star: &[usize],
    added: &[[VertexId; 4]],
    surface_removed: &[TriangleKey],
    surface_added: &[[VertexId; 3]],
) -> Result<StratifiedTriangulation, String> {
    let mut faces: HashMap<TriangleKey, (i8, usize)> = HashMap::new();
    for &ti in star {
        let tet = t.tetrahedra()[ti];
        for omit in 0..4 {
            let (key, sign) = induced_face(&tet, omit);
            faces.entry(key).and_modify(|e| e.1 += 1).or_insert((sign, 1));
        }
    }
    let mut new_tets = Vec::with_capacity(added.len());
    for tet in added {
        let mut tet = tet_key(*tet);
        let (omit, sign) = (0..4)
            .find_map(|omit| {
                let (key, _) = induced_face(&tet, omit);
                faces.get(&key).filter(|f| f.1 == 1).map(|f| (omit, f.0))
            })
            .ok_or_else(|| format!("{tet:?} has no face on the cavity boundary"))?;
        if induced_face(&tet, omit).1 != sign {
            tet.swap(0, 1);
        }
        new_tets.push(tet);
    }
    let removed: BTreeSet<usize> = star.iter().copied().collect();
    let mut tetrahedra: Vec<[VertexId; 4]> =
        t.tetrahedra().iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, tet)| *tet).collect();
    tetrahedra.extend(new_tets);
    let mut surface: Vec<[VertexId; 3]> =
        t.surface_triangles().iter().filter(|tri| !surface_removed.contains(&triangle_key(**tri))).copied().collect();
    surface.extend_from_slice(surface_added);
    Ok(StratifiedTriangulation::from_parts(
        t.vertices().clone(),
        tetrahedra,
        surface,
        t.knot_edges().to_vec(),
        t.sigma_order().to_vec(),
        t.bulk_order().to_vec(),
    ))
}

/// Inverse of stellar subdivision of `sigma` with new vertex `w`.
fn weld(
    t: &StratifiedTriangulation,
    w: VertexId,
    sigma: BTreeSet<VertexId>,
) -> Result<StratifiedTriangulation, String> {
    let k = sigma.len();
    if !(2..=4).contains(&k) || sigma.contains(&w) {
        return Err(format!("vertex does not sit on a simplex ({k} candidate vertices)"));
    }
    let sigma: Vec<VertexId> = sigma.into_iter().collect();
    let star = star_of(t, &[w]);

    // the part of each star tetrahedron outside `σ ∪ {w}` is a simplex of the link of `σ`
    let mut link: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for &ti in &star {
        let rest: Vec<VertexId> =
            t.tetrahedra()[ti].iter().copied().filter(|v| *v != w && !sigma.contains(v)).collect();
        if rest.len() != 4 - k {
            return Err("star of the vertex is not a cone over the boundary of a simplex".into());
        }
        let mut rest = rest;
        rest.sort_unstable();
        link.insert(rest);
    }
    let mut expected = BTreeSet::new();
    for lam in &link {
        for x in &sigma {
            let mut tet: Vec<VertexId> = sigma.iter().copied().filter(|v| v != x).chain(lam.iter().copied()).collect();
            tet.push(w);
            tet.sort_unstable();
            expected.insert(tet);
        }
    }
    let actual: BTreeSet<Vec<VertexId>> = star
        .iter()
        .map(|&ti| {
            let mut tet = t.tetrahedra()[ti].to_vec();
            tet.sort_unstable();
            tet
        })
        .collect();
    if actual != expected || star.len() != expected.len() {
        return Err(format!("star has {} tetrahedra, not the {} of a weldable vertex", star.len(), expected.len()));
    }
    let s = t.skeleton();
    let exists = match k {
        2 => s.edge_index.contains_key(&[sigma[0], sigma[1]]),
        3 => s.triangle_index.contains_key(&[sigma[0], sigma[1], sigma[2]]),
        _ => s.tet_keys.contains(&[sigma[0], sigma[1], sigma[2], sigma[3]]),
    };
    if exists {
        return Err(format!("{sigma:?} already exists"));
    }

    // an old tetrahedron with `w` in place of the missing vertex of `σ` fixes the orientation
    let mut done: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let mut new_tets = Vec::new();
    for &ti in &star {
        let tet = t.tetrahedra()[ti];
        let missing = *sigma.iter().find(|v| !tet.contains(v)).unwrap();
        let welded = tet.map(|v| if v == w { missing } else { v });
        let mut key = welded.to_vec();
        key.sort_unstable();
        if done.insert(key) {
            new_tets.push(welded);
        }
    }
    let mut tetrahedra: Vec<[VertexId; 4]> =
        t.tetrahedra().iter().enumerate().filter(|(i, _)| !star.contains(i)).map(|(_, tet)| *tet).collect();
    tetrahedra.extend(new_tets);

    let mut surface = Vec::new();
    let mut seen = BTreeSet::new();
    for tri in t.surface_triangles() {
        if !tri.contains(&w) {
            surface.push(*tri);
            continue;
        }
        let Some(&missing) = sigma.iter().find(|v| !tri.contains(v)) else {
            return Err("surface near the vertex is not a cone".into());
        };
        let welded = tri.map(|v| if v == w { missing } else { v });
        if k <= 3 && welded.iter().filter(|v| sigma.contains(v)).count() != k {
            return Err("surface near the vertex is not a cone".into());
        }
        if seen.insert(triangle_key(welded)) {
            surface.push(welded);
        }
    }
    let mut knot = Vec::new();
    let (mut into, mut out) = (None, None);
    for &(a, b) in t.knot_edges() {
        if b == w {
            into = Some(a);
        } else if a == w {
            out = Some(b);
        } else {
            knot.push((a, b));
        }
    }
    match (into, out) {
        (Some(a), Some(b)) => knot.push((a, b)),
        (None, None) => {}
        _ => return Err("knot ends at the vertex".into()),
    }

    let relabel = |v: VertexId| if v > w { v - 1 } else { v };
    let mut dims = t.vertices().dims().to_vec();
    dims.remove(w);
    let order = |o: &[VertexId]| o.iter().filter(|&&v| v != w).map(|&v| relabel(v)).collect();
    Ok(StratifiedTriangulation::from_parts(
        VertexTable::new(dims),
        tetrahedra.into_iter().map(|tet| tet.map(relabel)).collect(),
        surface.into_iter().map(|tri| tri.map(relabel)).collect(),
        knot.into_iter().map(|(a, b)| (relabel(a), relabel(b))).collect(),
        order(t.sigma_order()),
        order(t.bulk_order()),
    ))
}

/// Candidate sites of the right shape for `kind`; applicability is not
/// checked.
pub fn sites(t: &StratifiedTriangulation, kind: MoveKind) -> Vec<MoveDescriptor> {
    let s = t.skeleton();
    let of = |site: Vec<VertexId>| MoveDescriptor::new(kind, site);
    let mut surface: Vec<TriangleKey> = s.surface.iter().copied().collect();
    surface.sort_unstable();
    let mut tets: Vec<[VertexId; 4]> = s.tet_keys.iter().copied().collect();
    tets.sort_unstable();
    let edges = |pred: &dyn Fn(&EdgeKey) -> bool| -> Vec<MoveDescriptor> {
        s.edges.iter().filter(|e| pred(e)).map(|e| of(e.to_vec())).collect()
    };
    let vertices = |stratum: Stratum| t.vertices().of_stratum(stratum).map(|v| of(vec![v])).collect();
    match kind {
        MoveKind::P14 => tets.iter().map(|k| of(k.to_vec())).collect(),
        MoveKind::P41 => vertices(Stratum::Bulk),
        MoveKind::P23 => s.triangles.iter().filter(|k| !s.surface.contains(*k)).map(|k| of(k.to_vec())).collect(),
        MoveKind::P32 => edges(&|e| !s.surface_edges.contains_key(e)),
        MoveKind::X26 => surface.iter().map(|k| of(k.to_vec())).collect(),
        MoveKind::X62 => vertices(Stratum::Surface),
        MoveKind::X44 => edges(&|e| s.surface_edges.get(e) == Some(&2)),
        MoveKind::K36 => {
            let mut knot = t.knot_edges().to_vec();
            knot.sort_unstable();
            knot.into_iter().map(|(a, b)| of(vec![a, b])).collect()
        }
        MoveKind::K63 => vertices(Stratum::Knot),
        MoveKind::Stellar => s
            .edges
            .iter()
            .map(|e| e.to_vec())
            .chain(s.triangles.iter().map(|k| k.to_vec()))
            .chain(tets.iter().map(|k| k.to_vec()))
            .map(of)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::s3_join_fixture;

    fn mv(kind: MoveKind, site: &[VertexId]) -> MoveDescriptor {
        MoveDescriptor::new(kind, site.to_vec())
    }

    fn counts(t: &StratifiedTriangulation) -> (usize, usize, usize, [usize; 3]) {
        (t.tetrahedra().len(), t.surface_triangles().len(), t.knot_edges().len(), t.vertices().stratum_counts())
    }

    #[test]
    fn p14_then_p41_is_identity() {
        let t = s3_join_fixture();
        let tet = t.tetrahedra()[0].to_vec();
        let u = apply(&t, &mv(MoveKind::P14, &tet)).unwrap();
        assert_eq!(u.tetrahedra().len(), 12);
        let w = t.vertex_count();
        let back = apply(&u, &mv(MoveKind::P41, &[w])).unwrap();
        assert_eq!(back.canonical_form(), t.canonical_form());
        assert_eq!(back.bulk_order(), t.bulk_order());
    }

    #[test]
    fn k36_on_fixture() {
        let t = s3_join_fixture();
        let m = mv(MoveKind::K36, &[0, 1]);
        assert!(applicable(&t, &m).applicable);
        let u = apply(&t, &m).unwrap();
        assert_eq!(u.tetrahedra().len(), 12);
        assert_eq!(u.vertices().stratum_counts()[0], 4);
        assert_eq!(u.knot_component_lengths(), vec![4]);
        let back = apply(&u, &mv(MoveKind::K63, &[t.vertex_count()])).unwrap();
        assert_eq!(back.canonical_form(), t.canonical_form());
    }

    #[test]
    fn x26_counts_and_inverse() {
        let t = s3_join_fixture();
        let tri = t.surface_triangles()[0].to_vec();
        let u = apply(&t, &mv(MoveKind::X26, &tri)).unwrap();
        let (tt, st, ..) = counts(&t);
        let (ut, us, ..) = counts(&u);
        assert_eq!((ut, us), (tt + 4, st + 2));
        let back = apply(&u, &mv(MoveKind::X62, &[t.vertex_count()])).unwrap();
        assert_eq!(back.canonical_form(), t.canonical_form());
        assert_eq!(back.sigma_order(), t.sigma_order());
    }

    #[test]
    fn p23_then_p32_is_identity() {
        let t = s3_join_fixture();
        let u = apply(&t, &mv(MoveKind::P14, &t.tetrahedra()[0])).unwrap();
        let mut done = false;
        for site in sites(&u, MoveKind::P23) {
            let Ok(v) = apply(&u, &site) else { continue };
            assert_eq!(v.tetrahedra().len(), u.tetrahedra().len() + 1);
            let new_edge: Vec<EdgeKey> = v.edges().iter().filter(|e| !u.has_edge(e[0], e[1])).copied().collect();
            assert_eq!(new_edge.len(), 1);
            let back = apply(&v, &mv(MoveKind::P32, &new_edge[0])).unwrap();
            assert_eq!(back.canonical_form(), u.canonical_form());
            done = true;
        }
        assert!(done);
    }

    #[test]
    fn x44_is_an_involution_on_a_refined_fixture() {
        let t = s3_join_fixture();
        let tri = t.surface_triangles()[0].to_vec();
        let u = apply(&t, &mv(MoveKind::X26, &tri)).unwrap();
        let mut flipped = 0;
        for site in sites(&u, MoveKind::X44) {
            let Ok(v) = apply(&u, &site) else { continue };
            assert_eq!(counts(&v), counts(&u));
            let new_edge: Vec<EdgeKey> = v.edges().iter().filter(|e| !u.has_edge(e[0], e[1])).copied().collect();
            let back = apply(&v, &mv(MoveKind::X44, &new_edge[0])).unwrap();
            assert_eq!(back.canonical_form(), u.canonical_form());
            flipped += 1;
        }
        assert!(flipped > 0);
    }

    #[test]
    fn x44_joining_knot_vertices_is_not_flag_like() {
        // after K36 on 0→1 the surface edge 1-3 has knot vertices 6 and 2 on
        // either side, and they are not joined in the knot
        let t = s3_join_fixture();
        let u = apply(&t, &mv(MoveKind::K36, &[0, 1])).unwrap();
        let verdict = applicable(&u, &mv(MoveKind::X44, &[1, 3]));
        assert!(!verdict.applicable);
        assert!(verdict.reason.contains("flag-likeness violated"), "{}", verdict.reason);
    }

    #[test]
    fn every_p14_site_is_applicable() {
        let t = s3_join_fixture();
        for site in sites(&t, MoveKind::P14) {
            assert!(applicable(&t, &site).applicable);
        }
    }

    #[test]
    fn wrong_shapes_are_rejected() {
        let t = s3_join_fixture();
        assert!(!applicable(&t, &mv(MoveKind::P14, &[0, 1, 2])).applicable);
        assert!(!applicable(&t, &mv(MoveKind::K36, &[3, 4])).applicable);
        assert!(!applicable(&t, &mv(MoveKind::P41, &[0])).applicable);
        assert!(!applicable(&t, &mv(MoveKind::X62, &[3])).applicable);
        assert!(!applicable(&t, &mv(MoveKind::P23, &[0, 1, 3])).applicable);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in MoveKind::ALL {
            assert_eq!(k.name().parse::<MoveKind>().unwrap(), k);
        }
        assert_eq!(mv(MoveKind::P23, &[1, 2, 3]).to_string(), "P23 1 2 3");
    }
}
