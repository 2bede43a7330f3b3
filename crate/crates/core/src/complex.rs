//! Flag-like triangulations of a knot / Seifert surface / 3-manifold triple.
//!
//! A [`StratifiedTriangulation`] stores the raw combinatorial data: vertex
//! strata, positively oriented tetrahedra, the surface and knot
//! subcomplexes and the two vertex orderings used to direct edges inside
//! `Σ ∖ K` and `M ∖ Σ`. Nothing is checked at construction time;
//! [`StratifiedTriangulation::validate`] lists every violated invariant.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::report::Report;
use crate::stratum::Stratum;

pub type VertexId = usize;

/// Sorted vertex pair.
pub type EdgeKey = [VertexId; 2];
/// Sorted vertex triple.
pub type TriangleKey = [VertexId; 3];

pub fn edge_key(a: VertexId, b: VertexId) -> EdgeKey {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn triangle_key(mut t: [VertexId; 3]) -> TriangleKey {
    t.sort_unstable();
    t
}

pub fn tet_key(mut t: [VertexId; 4]) -> [VertexId; 4] {
    t.sort_unstable();
    t
}

/// Sign of the permutation taking `from` to `to` (same multiset, no repeats).
pub fn permutation_sign(from: &[VertexId], to: &[VertexId]) -> i8 {
    debug_assert_eq!(from.len(), to.len());
    let mut perm: Vec<usize> =
        to.iter().map(|v| from.iter().position(|w| w == v).expect("not a permutation")).collect();
    let mut sign = 1;
    for i in 0..perm.len() {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// The face of an oriented tetrahedron opposite slot `omit`, as a sorted
/// triple together with the sign of its induced boundary orientation.
pub fn induced_face(tet: &[VertexId; 4], omit: usize) -> (TriangleKey, i8) {
    let face: Vec<VertexId> = (0..4).filter(|&i| i != omit).map(|i| tet[i]).collect();
    let key = triangle_key([face[0], face[1], face[2]]);
    let parity = permutation_sign(&face, &key);
    let sign = if omit.is_multiple_of(2) { parity } else { -parity };
    (key, sign)
}

/// Strata of all vertices; ids are `0..count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexTable {
    dims: Vec<Stratum>,
}

impl VertexTable {
    pub fn new(dims: Vec<Stratum>) -> Self {
        VertexTable { dims }
    }

    pub fn count(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, v: VertexId) -> Stratum {
        self.dims[v]
    }

    pub fn get(&self, v: VertexId) -> Option<Stratum> {
        self.dims.get(v).copied()
    }

    pub fn dims(&self) -> &[Stratum] {
        &self.dims
    }

    /// Number of vertices in each stratum, indexed by [`Stratum::index`].
    pub fn stratum_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for d in &self.dims {
            counts[d.index()] += 1;
        }
        counts
    }

    pub fn of_stratum(&self, s: Stratum) -> impl Iterator<Item = VertexId> + '_ {
        self.dims.iter().enumerate().filter(move |(_, d)| **d == s).map(|(v, _)| v)
    }
}

/// An edge oriented in its canonical direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail, self.head)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("{0:?} is not an edge of the triangulation")]
    EdgeNotFound(EdgeKey),
    #[error("{0:?} is not a simplex of the triangulation")]
    SimplexNotFound(Vec<VertexId>),
    #[error("edge directions on tetrahedron {0:?} are not acyclic")]
    CyclicTetrahedron([VertexId; 4]),
    #[error("edge directions on triangle {0:?} form a cycle")]
    CyclicTriangle(TriangleKey),
    #[error("vertices {0} and {1} have no canonical order")]
    Unordered(VertexId, VertexId),
    #[error("strata are not subcomplexes: {0}")]
    StrataNotSubcomplexes(String),
    #[error("{which} order is not a permutation of its stratum: {detail}")]
    NotAPermutation { which: &'static str, detail: String },
    #[error("invalid triangulation:\n{0}")]
    Invalid(Report<ComplexIssue>),
}

/// One violated invariant of a [`StratifiedTriangulation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexIssue {
    Empty,
    VertexOutOfRange { simplex: Vec<VertexId> },
    RepeatedVertex { simplex: Vec<VertexId> },
    DuplicateTetrahedron { tet: [VertexId; 4] },
    DuplicateSurfaceTriangle { triangle: TriangleKey },
    DuplicateKnotEdge { edge: EdgeKey },
    OpenTriangle { triangle: TriangleKey },
    OverfullTriangle { triangle: TriangleKey, tets: usize },
    OrientationMismatch { triangle: TriangleKey },
    SurfaceNotSubcomplex { triangle: TriangleKey },
    KnotNotSubcomplex { edge: EdgeKey },
    SurfaceEdgeOverfull { edge: EdgeKey, triangles: usize },
    BoundaryNotKnot { edge: EdgeKey },
    KnotNotBoundary { edge: EdgeKey },
    KnotNotCycles { vertex: VertexId },
    DimMismatch { vertex: VertexId, stored: Stratum, expected: Stratum },
    FlagViolation { simplex: Vec<VertexId>, reason: &'static str },
    OrderNotPermutation { which: &'static str, detail: String },
    KnotEdgeLink { edge: EdgeKey, len: usize },
    EdgeLinkNotCycle { edge: EdgeKey },
    VertexLinkNotSphere { vertex: VertexId },
}

impl fmt::Display for ComplexIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ComplexIssue::*;
        match self {
            Empty => write!(f, "no tetrahedra"),
            VertexOutOfRange { simplex } => write!(f, "vertex id out of range in {simplex:?}"),
            RepeatedVertex { simplex } => write!(f, "repeated vertex in {simplex:?}"),
            DuplicateTetrahedron { tet } => write!(f, "duplicate tetrahedron {tet:?}"),
            DuplicateSurfaceTriangle { triangle } => {
                write!(f, "duplicate surface triangle {triangle:?}")
            }
            DuplicateKnotEdge { edge } => write!(f, "duplicate knot edge {edge:?}"),
            OpenTriangle { triangle } => write!(f, "triangle in one tetrahedron: {triangle:?}"),
            OverfullTriangle { triangle, tets } => {
                write!(f, "triangle in {tets} tetrahedra: {triangle:?}")
            }
            OrientationMismatch { triangle } => {
                write!(f, "inconsistent orientation across triangle {triangle:?}")
            }
            SurfaceNotSubcomplex { triangle } => {
                write!(f, "surface subcomplex: {triangle:?} is not a triangle of M")
            }
            KnotNotSubcomplex { edge } => write!(f, "knot subcomplex: {edge:?} is not an edge of M"),
            SurfaceEdgeOverfull { edge, triangles } => {
                write!(f, "surface edge {edge:?} lies in {triangles} surface triangles")
            }
            BoundaryNotKnot { edge } => {
                write!(f, "boundary of the surface contains non-knot edge {edge:?}")
            }
            KnotNotBoundary { edge } => {
                write!(f, "knot edge {edge:?} is not on the boundary of the surface")
            }
            KnotNotCycles { vertex } => {
                write!(f, "knot edges do not form directed cycles at vertex {vertex}")
            }
            DimMismatch { vertex, stored, expected } => {
                write!(f, "vertex {vertex} has stratum dimension {stored} but subcomplex membership gives {expected}")
            }
            FlagViolation { simplex, reason } => {
                write!(f, "flag-likeness violated at {simplex:?}: {reason}")
            }
            OrderNotPermutation { which, detail } => {
                write!(f, "{which} order is not a permutation of its stratum: {detail}")
            }
            KnotEdgeLink { edge, len } => {
                write!(f, "link of knot edge {edge:?} is not a cycle of length >= 3 (length {len})")
            }
            EdgeLinkNotCycle { edge } => write!(f, "link of edge {edge:?} is not a single cycle"),
            VertexLinkNotSphere { vertex } => write!(f, "link of vertex {vertex} is not a 2-sphere"),
        }
    }
}

pub type ValidationReport = Report<ComplexIssue>;

/// Raw data of a triple `K ⊂ Σ ⊂ M` triangulated so that each stratum is a
/// subcomplex.
#[derive(Clone, Debug)]
pub struct StratifiedTriangulation {
    vertices: VertexTable,
    tetrahedra: Vec<[VertexId; 4]>,
    surface: Vec<[VertexId; 3]>,
    knot: Vec<(VertexId, VertexId)>,
    sigma_order: Vec<VertexId>,
    bulk_order: Vec<VertexId>,
    skeleton: OnceLock<Skeleton>,
}

impl PartialEq for StratifiedTriangulation {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.tetrahedra == other.tetrahedra
            && self.surface == other.surface
            && self.knot == other.knot
            && self.sigma_order == other.sigma_order
            && self.bulk_order == other.bulk_order
    }
}

impl Eq for StratifiedTriangulation {}

impl StratifiedTriangulation {
    /// Assembles a triangulation without checking anything.
    pub fn from_parts(
        vertices: VertexTable,
        tetrahedra: Vec<[VertexId; 4]>,
        surface: Vec<[VertexId; 3]>,
        knot: Vec<(VertexId, VertexId)>,
        sigma_order: Vec<VertexId>,
        bulk_order: Vec<VertexId>,
    ) -> Self {
        StratifiedTriangulation {
            vertices,
            tetrahedra,
            surface,
            knot,
            sigma_order,
            bulk_order,
            skeleton: OnceLock::new(),
        }
    }

    /// Assembles and validates.
    pub fn new(
        vertices: VertexTable,
        tetrahedra: Vec<[VertexId; 4]>,
        surface: Vec<[VertexId; 3]>,
        knot: Vec<(VertexId, VertexId)>,
        sigma_order: Vec<VertexId>,
        bulk_order: Vec<VertexId>,
    ) -> Result<Self, ComplexError> {
        let t = Self::from_parts(vertices, tetrahedra, surface, knot, sigma_order, bulk_order);
        let report = t.validate();
        if report.is_empty() {
            Ok(t)
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    pub fn vertices(&self) -> &VertexTable {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.count()
    }

    pub fn dim(&self, v: VertexId) -> Stratum {
        self.vertices.dim(v)
    }

    pub fn tetrahedra(&self) -> &[[VertexId; 4]] {
        &self.tetrahedra
    }

    pub fn surface_triangles(&self) -> &[[VertexId; 3]] {
        &self.surface
    }

    pub fn knot_edges(&self) -> &[(VertexId, VertexId)] {
        &self.knot
    }

    pub fn sigma_order(&self) -> &[VertexId] {
        &self.sigma_order
    }

    pub fn bulk_order(&self) -> &[VertexId] {
        &self.bulk_order
    }

    /// Derived incidence data, computed on first use.
    pub fn skeleton(&self) -> &Skeleton {
        self.skeleton.get_or_init(|| Skeleton::build(self))
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.skeleton().edges
    }

    pub fn triangles(&self) -> &[TriangleKey] {
        &self.skeleton().triangles
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.skeleton().edge_index.contains_key(&edge_key(a, b))
    }

    pub fn is_surface_triangle(&self, t: [VertexId; 3]) -> bool {
        self.skeleton().surface.contains(&triangle_key(t))
    }

    pub fn is_knot_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.skeleton().knot_dir.contains_key(&edge_key(a, b))
    }

    pub fn is_surface_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.skeleton().surface_edges.contains_key(&edge_key(a, b))
    }

    /// Euler characteristic of `M` (vertices − edges + triangles − tetrahedra).
    pub fn euler_characteristic(&self) -> i64 {
        let s = self.skeleton();
        self.vertex_count() as i64 - s.edges.len() as i64 + s.triangles.len() as i64 - self.tetrahedra.len() as i64
    }

    /// Euler characteristic of `Σ`.
    pub fn surface_euler_characteristic(&self) -> i64 {
        let s = self.skeleton();
        let verts: BTreeSet<VertexId> = s.surface.iter().flatten().copied().collect();
        verts.len() as i64 - s.surface_edges.len() as i64 + s.surface.len() as i64
    }

    /// Lengths of the knot components, sorted.
    pub fn knot_component_lengths(&self) -> Vec<usize> {
        let next: HashMap<VertexId, VertexId> = self.knot.iter().copied().collect();
        let mut seen = HashSet::new();
        let mut lengths = Vec::new();
        for &(start, _) in &self.knot {
            if seen.contains(&start) {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while seen.insert(v) {
                len += 1;
                match next.get(&v) {
                    Some(&w) => v = w,
                    None => break,
                }
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    /// Whether `u` precedes `v` in the canonical edge direction. `None` if
    /// the pair has no canonical order (two knot vertices not joined by a
    /// knot edge, or a vertex missing from its stratum order).
    pub fn precedes(&self, u: VertexId, v: VertexId) -> Option<bool> {
        let (du, dv) = (self.dim(u), self.dim(v));
        if du != dv {
            return Some(du < dv);
        }
        let s = self.skeleton();
        match du {
            Stratum::Knot => s.knot_dir.get(&edge_key(u, v)).map(|&(tail, _)| tail == u),
            _ => {
                let (ru, rv) = (s.rank[u], s.rank[v]);
                if ru == usize::MAX || rv == usize::MAX || u == v {
                    None
                } else {
                    Some(ru < rv)
                }
            }
        }
    }

    /// Canonical direction of an edge: away from lower strata, along the knot
    /// orientation on `K`, and by the stratum orderings elsewhere.
    pub fn edge_direction(&self, u: VertexId, v: VertexId) -> Result<DirectedEdge, ComplexError> {
        if !self.has_edge(u, v) {
            return Err(ComplexError::EdgeNotFound(edge_key(u, v)));
        }
        match self.precedes(u, v) {
            Some(true) => Ok(DirectedEdge { tail: u, head: v }),
            Some(false) => Ok(DirectedEdge { tail: v, head: u }),
            None => Err(ComplexError::Unordered(u, v)),
        }
    }

    /// The vertices of `tet` in the order of its longest directed path.
    pub fn longest_path(&self, tet: &[VertexId; 4]) -> Result<[VertexId; 4], ComplexError> {
        let mut out_degree = [0usize; 4];
        for i in 0..4 {
            for j in (i + 1)..4 {
                match self.precedes(tet[i], tet[j]) {
                    Some(true) => out_degree[i] += 1,
                    Some(false) => out_degree[j] += 1,
                    None => return Err(ComplexError::CyclicTetrahedron(*tet)),
                }
            }
        }
        let mut path = [usize::MAX; 4];
        for i in 0..4 {
            let slot = 3 - out_degree[i];
            if path[slot] != usize::MAX {
                return Err(ComplexError::CyclicTetrahedron(*tet));
            }
            path[slot] = tet[i];
        }
        Ok(path)
    }

    /// +1 if the longest-path order of `tet` agrees with its stored
    /// (positive) orientation, −1 otherwise.
    pub fn epsilon(&self, tet: &[VertexId; 4]) -> Result<i8, ComplexError> {
        let path = self.longest_path(tet)?;
        Ok(permutation_sign(tet, &path))
    }

    /// Same complex with new stratum orderings.
    pub fn reorder_vertices(
        &self,
        sigma_order: Vec<VertexId>,
        bulk_order: Vec<VertexId>,
    ) -> Result<Self, ComplexError> {
        check_permutation("sigma", &sigma_order, self.vertices.of_stratum(Stratum::Surface))
            .map_err(|detail| ComplexError::NotAPermutation { which: "sigma", detail })?;
        check_permutation("bulk", &bulk_order, self.vertices.of_stratum(Stratum::Bulk))
            .map_err(|detail| ComplexError::NotAPermutation { which: "bulk", detail })?;
        Ok(Self::from_parts(
            self.vertices.clone(),
            self.tetrahedra.clone(),
            self.surface.clone(),
            self.knot.clone(),
            sigma_order,
            bulk_order,
        ))
    }

    /// Same triangulation with every tetrahedron's orientation reversed.
    pub fn reversed(&self) -> Self {
        let tets = self.tetrahedra.iter().map(|t| [t[1], t[0], t[2], t[3]]).collect();
        Self::from_parts(
            self.vertices.clone(),
            tets,
            self.surface.clone(),
            self.knot.clone(),
            self.sigma_order.clone(),
            self.bulk_order.clone(),
        )
    }

    /// Canonical form for comparing complexes: sorted tetrahedra each with
    /// its orientation sign, sorted surface triangles and knot edges.
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut tets: Vec<([VertexId; 4], i8)> = self
            .tetrahedra
            .iter()
            .map(|t| {
                let key = tet_key(*t);
                (key, permutation_sign(t, &key))
            })
            .collect();
        tets.sort_unstable();
        let mut surface: Vec<TriangleKey> = self.surface.iter().map(|t| triangle_key(*t)).collect();
        surface.sort_unstable();
        let mut knot = self.knot.clone();
        knot.sort_unstable();
        CanonicalForm { dims: self.vertices.dims.clone(), tets, surface, knot }
    }

    /// Every invariant violation, or an empty report for a valid flag-like
    /// oriented triple.
    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Orientation-aware, ordering-free snapshot of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub dims: Vec<Stratum>,
    pub tets: Vec<([VertexId; 4], i8)>,
    pub surface: Vec<TriangleKey>,
    pub knot: Vec<(VertexId, VertexId)>,
}

fn check_permutation(
    _which: &'static str,
    order: &[VertexId],
    expected: impl Iterator<Item = VertexId>,
) -> Result<(), String> {
    let expected: BTreeSet<VertexId> = expected.collect();
    let given: BTreeSet<VertexId> = order.iter().copied().collect();
    if given.len() != order.len() {
        return Err("repeated vertex".into());
    }
    if given != expected {
        let missing: Vec<_> = expected.difference(&given).collect();
        let extra: Vec<_> = given.difference(&expected).collect();
        return Err(format!("missing {missing:?}, unexpected {extra:?}"));
    }
    Ok(())
}

/// Incidence data derived from a triangulation.
#[derive(Clone, Debug, Default)]
pub struct Skeleton {
    pub edges: Vec<EdgeKey>,
    pub edge_index: HashMap<EdgeKey, usize>,
    pub triangles: Vec<TriangleKey>,
    pub triangle_index: HashMap<TriangleKey, usize>,
    /// Tetrahedra (by index) containing each triangle.
    pub triangle_tets: Vec<Vec<usize>>,
    /// Tetrahedra (by index) containing each vertex.
    pub vertex_tets: Vec<Vec<usize>>,
    pub tet_keys: HashSet<[VertexId; 4]>,
    pub surface: HashSet<TriangleKey>,
    /// Number of surface triangles on each surface edge.
    pub surface_edges: HashMap<EdgeKey, usize>,
    /// Knot edges keyed by sorted pair, valued by their direction.
    pub knot_dir: HashMap<EdgeKey, (VertexId, VertexId)>,
    /// Position of each vertex in its stratum order; `usize::MAX` if absent.
    pub rank: Vec<usize>,
}

impl Skeleton {
    fn build(t: &StratifiedTriangulation) -> Skeleton {
        let n = t.vertex_count();
        let in_range = |s: &[VertexId]| s.iter().all(|&v| v < n);
        let mut edges = BTreeSet::new();
        let mut triangles: BTreeMap<TriangleKey, Vec<usize>> = BTreeMap::new();
        let mut vertex_tets = vec![Vec::new(); n];
        let mut tet_keys = HashSet::new();
        for (ti, tet) in t.tetrahedra.iter().enumerate() {
            if !in_range(tet) {
                continue;
            }
            tet_keys.insert(tet_key(*tet));
            for i in 0..4 {
                vertex_tets[tet[i]].push(ti);
                for j in (i + 1)..4 {
                    if tet[i] != tet[j] {
                        edges.insert(edge_key(tet[i], tet[j]));
                    }
                }
                let (key, _) = induced_face(tet, i);
                triangles.entry(key).or_default().push(ti);
            }
        }
        let edges: Vec<EdgeKey> = edges.into_iter().collect();
        let edge_index = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let (triangles, triangle_tets): (Vec<_>, Vec<_>) = triangles.into_iter().unzip();
        let triangle_index = triangles.iter().enumerate().map(|(i, t)| (*t, i)).collect();

        let surface: HashSet<TriangleKey> =
            t.surface.iter().filter(|s| in_range(&s[..])).map(|s| triangle_key(*s)).collect();
        let mut surface_edges = HashMap::new();
        for tri in &surface {
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                *surface_edges.entry(edge_key(tri[a], tri[b])).or_insert(0) += 1;
            }
        }
        let knot_dir =
            t.knot.iter().filter(|(a, b)| *a < n && *b < n).map(|&(a, b)| (edge_key(a, b), (a, b))).collect();
        let mut rank = vec![usize::MAX; n];
        for order in [&t.sigma_order, &t.bulk_order] {
            for (i, &v) in order.iter().enumerate() {
                if v < n {
                    rank[v] = i;
                }
            }
        }
        Skeleton {
            edges,
            edge_index,
            triangles,
            triangle_index,
            triangle_tets,
            vertex_tets,
            tet_keys,
            surface,
            surface_edges,
            knot_dir,
            rank,
        }
    }

    /// Opposite edges of the tetrahedra around `e`.
    pub fn edge_link(&self, t: &StratifiedTriangulation, e: EdgeKey) -> Vec<EdgeKey> {
        self.vertex_tets[e[0]]
            .iter()
            .map(|&ti| t.tetrahedra[ti])
            .filter(|tet| tet.contains(&e[1]))
            .map(|tet| {
                let rest: Vec<VertexId> = tet.iter().copied().filter(|v| !e.contains(v)).collect();
                edge_key(rest[0], rest[1])
            })
            .collect()
    }

    /// Opposite triangles of the tetrahedra around `v`.
    pub fn vertex_link(&self, t: &StratifiedTriangulation, v: VertexId) -> Vec<TriangleKey> {
        self.vertex_tets[v]
            .iter()
            .map(|&ti| {
                let tet = t.tetrahedra[ti];
                let rest: Vec<VertexId> = tet.iter().copied().filter(|&w| w != v).collect();
                triangle_key([rest[0], rest[1], rest[2]])
            })
            .collect()
    }
}

/// Whether a set of edges is a single cycle (every vertex of degree two,
/// connected). Returns the cycle length if so.
pub fn single_cycle_length(edges: &[EdgeKey]) -> Option<usize> {
    if edges.is_empty() {
        return None;
    }
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in edges {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if adj.values().any(|n| n.len() != 2) {
        return None;
    }
    let start = edges[0][0];
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    (seen.len() == adj.len() && edges.len() == adj.len()).then_some(edges.len())
}

/// Whether a set of triangles is a connected closed surface of Euler
/// characteristic two.
fn is_sphere(tris: &[TriangleKey]) -> bool {
    let mut edge_count: HashMap<EdgeKey, usize> = HashMap::new();
    let mut verts = BTreeSet::new();
    for t in tris {
        verts.extend(t.iter().copied());
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            *edge_count.entry(edge_key(t[a], t[b])).or_insert(0) += 1;
        }
    }
    if edge_count.values().any(|&c| c != 2) {
        return false;
    }
    let chi = verts.len() as i64 - edge_count.len() as i64 + tris.len() as i64;
    if chi != 2 {
        return false;
    }
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in edge_count.keys() {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    let Some(&start) = verts.iter().next() else { return false };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == verts.len()
}

/// Reason a simplex fails the flag condition, given its vertex strata and
/// the surface/knot subcomplexes.
pub(crate) fn flag_violation(
    simplex: &[VertexId],
    dim: impl Fn(VertexId) -> Stratum,
    is_surface_simplex: impl Fn(&[VertexId]) -> bool,
    is_knot_simplex: impl Fn(&[VertexId]) -> bool,
) -> Option<&'static str> {
    let low: Vec<VertexId> = simplex.iter().copied().filter(|&v| dim(v) <= Stratum::Surface).collect();
    let knot: Vec<VertexId> = simplex.iter().copied().filter(|&v| dim(v) == Stratum::Knot).collect();
    if knot.len() >= 2 && !is_knot_simplex(&knot) {
        return Some("knot vertices do not span a knot simplex");
    }
    if low.len() >= 2 && !is_surface_simplex(&low) {
        return Some("surface vertices do not span a surface simplex");
    }
    None
}

fn validate(t: &StratifiedTriangulation) -> ValidationReport {
    use ComplexIssue::*;
    let mut report = Report::new();
    let n = t.vertex_count();

    // Well-formedness first; later checks assume ids are in range.
    if t.tetrahedra.is_empty() {
        report.push(Empty);
    }
    let mut malformed = false;
    let mut check_simplex = |s: &[VertexId], report: &mut ValidationReport| {
        if s.iter().any(|&v| v >= n) {
            report.push(VertexOutOfRange { simplex: s.to_vec() });
            malformed = true;
        } else if s.iter().collect::<BTreeSet<_>>().len() != s.len() {
            report.push(RepeatedVertex { simplex: s.to_vec() });
            malformed = true;
        }
    };
    for tet in &t.tetrahedra {
        check_simplex(tet, &mut report);
    }
    for tri in &t.surface {
        check_simplex(tri, &mut report);
    }
    for &(a, b) in &t.knot {
        check_simplex(&[a, b], &mut report);
    }
    for &v in t.sigma_order.iter().chain(&t.bulk_order) {
        check_simplex(&[v], &mut report);
    }
    if malformed {
        return report;
    }

    let mut seen_tets = HashSet::new();
    for tet in &t.tetrahedra {
        if !seen_tets.insert(tet_key(*tet)) {
            report.push(DuplicateTetrahedron { tet: *tet });
        }
    }
    let mut seen_tris = HashSet::new();
    for tri in &t.surface {
        let key = triangle_key(*tri);
        if !seen_tris.insert(key) {
            report.push(DuplicateSurfaceTriangle { triangle: key });
        }
    }
    let mut seen_knot = HashSet::new();
    for &(a, b) in &t.knot {
        let key = edge_key(a, b);
        if !seen_knot.insert(key) {
            report.push(DuplicateKnotEdge { edge: key });
        }
    }

    let s = t.skeleton();

    // Closed pseudo-manifold with consistent orientation.
    let mut face_signs: HashMap<TriangleKey, Vec<i8>> = HashMap::new();
    for tet in &t.tetrahedra {
        for i in 0..4 {
            let (key, sign) = induced_face(tet, i);
            face_signs.entry(key).or_default().push(sign);
        }
    }
    let mut face_list: Vec<_> = face_signs.into_iter().collect();
    face_list.sort_unstable();
    let mut pseudo_manifold = true;
    for (key, signs) in &face_list {
        match signs.len() {
            1 => {
                report.push(OpenTriangle { triangle: *key });
                pseudo_manifold = false;
            }
            2 => {
                if signs[0] == signs[1] {
                    report.push(OrientationMismatch { triangle: *key });
                }
            }
            k => {
                report.push(OverfullTriangle { triangle: *key, tets: k });
                pseudo_manifold = false;
            }
        }
    }

    // Subcomplexes.
    let mut surface_sorted: Vec<TriangleKey> = s.surface.iter().copied().collect();
    surface_sorted.sort_unstable();
    for tri in &surface_sorted {
        if !s.triangle_index.contains_key(tri) {
            report.push(SurfaceNotSubcomplex { triangle: *tri });
        }
    }
    let mut knot_sorted: Vec<EdgeKey> = s.knot_dir.keys().copied().collect();
    knot_sorted.sort_unstable();
    for e in &knot_sorted {
        if !s.edge_index.contains_key(e) {
            report.push(KnotNotSubcomplex { edge: *e });
        }
    }

    // ∂Σ = K, and Σ is a surface along its edges.
    let mut surface_edges: Vec<(EdgeKey, usize)> = s.surface_edges.iter().map(|(e, c)| (*e, *c)).collect();
    surface_edges.sort_unstable();
    for (e, count) in &surface_edges {
        if *count > 2 {
            report.push(SurfaceEdgeOverfull { edge: *e, triangles: *count });
        } else if *count == 1 && !s.knot_dir.contains_key(e) {
            report.push(BoundaryNotKnot { edge: *e });
        }
    }
    for e in &knot_sorted {
        if s.surface_edges.get(e) != Some(&1) {
            report.push(KnotNotBoundary { edge: *e });
        }
    }

    // Knot edges form disjoint directed cycles.
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    for &(a, b) in &t.knot {
        out_deg[a] += 1;
        in_deg[b] += 1;
    }
    for v in 0..n {
        if (out_deg[v] > 0 || in_deg[v] > 0) && (out_deg[v] != 1 || in_deg[v] != 1) {
            report.push(KnotNotCycles { vertex: v });
        }
    }

    // Stored strata agree with subcomplex membership.
    let on_knot: HashSet<VertexId> = t.knot.iter().flat_map(|&(a, b)| [a, b]).collect();
    let on_surface: HashSet<VertexId> = s.surface.iter().flatten().copied().collect();
    for v in 0..n {
        let expected = if on_knot.contains(&v) {
            Stratum::Knot
        } else if on_surface.contains(&v) {
            Stratum::Surface
        } else {
            Stratum::Bulk
        };
        if t.dim(v) != expected {
            report.push(DimMismatch { vertex: v, stored: t.dim(v), expected });
        }
    }

    // Flag-likeness on every simplex.
    let is_surface_simplex = |low: &[VertexId]| match low.len() {
        2 => s.surface_edges.contains_key(&edge_key(low[0], low[1])),
        3 => s.surface.contains(&triangle_key([low[0], low[1], low[2]])),
        _ => false,
    };
    let is_knot_simplex = |k: &[VertexId]| k.len() == 2 && s.knot_dir.contains_key(&edge_key(k[0], k[1]));
    let dim = |v: VertexId| t.dim(v);
    let mut flagged = BTreeSet::new();
    let simplices = s
        .edges
        .iter()
        .map(|e| e.to_vec())
        .chain(s.triangles.iter().map(|f| f.to_vec()))
        .chain(t.tetrahedra.iter().map(|tet| tet_key(*tet).to_vec()));
    for simplex in simplices {
        if let Some(reason) = flag_violation(&simplex, dim, is_surface_simplex, is_knot_simplex) {
            if flagged.insert(simplex.clone()) {
                report.push(FlagViolation { simplex, reason });
            }
        }
    }

    // Orders.
    for (which, order, stratum) in [("sigma", &t.sigma_order, Stratum::Surface), ("bulk", &t.bulk_order, Stratum::Bulk)]
    {
        if let Err(detail) = check_permutation(which, order, t.vertices.of_stratum(stratum)) {
            report.push(OrderNotPermutation { which, detail });
        }
    }

    // Combinatorial manifold: edge links are cycles, vertex links spheres.
    if pseudo_manifold {
        for e in &s.edges {
            let link = s.edge_link(t, *e);
            let cycle = single_cycle_length(&link);
            if s.knot_dir.contains_key(e) {
                if !matches!(cycle, Some(len) if len >= 3) {
                    report.push(KnotEdgeLink { edge: *e, len: link.len() });
                }
            } else if cycle.is_none() {
                report.push(EdgeLinkNotCycle { edge: *e });
            }
        }
        for v in 0..n {
            if !s.vertex_tets[v].is_empty() && !is_sphere(&s.vertex_link(t, v)) {
                report.push(VertexLinkNotSphere { vertex: v });
            }
        }
    }

    report
}
