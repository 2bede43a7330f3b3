//! Backtracking over edge labels with triangle propagation.
//!
//! Edges are labelled one at a time in a fixed order. When an edge closes a
//! triangle (its other two edges already labelled), its candidates come from
//! that triangle: unique if it is the composite edge, a precomputed division
//! list otherwise. Every other triangle it closes is checked on the spot.
//! Tetrahedron weights are accumulated incrementally at the depth where the
//! last edge of their longest path is labelled.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::cocycle::PartialCocycle;
use crate::complex::{edge_key, ComplexError, EdgeKey, StratifiedTriangulation, VertexId};
use crate::parcel::{Parcel, CHAINS};

#[derive(Clone, Copy, Debug)]
pub(crate) struct EdgeInfo {
    pub tail: VertexId,
    pub head: VertexId,
    pub src: usize,
    pub tgt: usize,
}

/// A triangle `x → y → z` with edges `xy`, `yz`, `xz`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TriangleInfo {
    pub edges: [usize; 3],
    pub chain: (usize, usize, usize),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct TetInfo {
    /// Edges `v0v1`, `v1v2`, `v2v3` of the longest path.
    pub path: [usize; 3],
    pub chain: (usize, usize, usize),
    pub eps: i8,
}

/// Canonically directed edges, triangles and tetrahedra of a triangulation.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub edges: Vec<EdgeInfo>,
    pub triangles: Vec<TriangleInfo>,
    pub tets: Vec<TetInfo>,
}

impl Layout {
    pub fn new(t: &StratifiedTriangulation) -> Result<Layout, ComplexError> {
        let s = t.skeleton();
        let mut edges = Vec::with_capacity(s.edges.len());
        for &[a, b] in &s.edges {
            let d = t.edge_direction(a, b)?;
            edges.push(EdgeInfo { tail: d.tail, head: d.head, src: t.dim(d.tail).index(), tgt: t.dim(d.head).index() });
        }
        let edge_index: HashMap<EdgeKey, usize> = s.edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let e = |a, b| edge_index[&edge_key(a, b)];
        let dim = |v: VertexId| t.dim(v).index();

        let mut triangles = Vec::with_capacity(s.triangles.len());
        for tri in &s.triangles {
            let mut out = [0usize; 3];
            for (i, &v) in tri.iter().enumerate() {
                for (j, &w) in tri.iter().enumerate() {
                    if i != j && t.precedes(v, w) == Some(true) {
                        out[i] += 1;
                    }
                }
            }
            let mut order = [usize::MAX; 3];
            for i in 0..3 {
                let slot = 2 - out[i];
                if order[slot] != usize::MAX {
                    return Err(ComplexError::CyclicTriangle(*tri));
                }
                order[slot] = tri[i];
            }
            let [x, y, z] = order;
            triangles.push(TriangleInfo { edges: [e(x, y), e(y, z), e(x, z)], chain: (dim(x), dim(y), dim(z)) });
        }

        let mut tets = Vec::with_capacity(t.tetrahedra().len());
        for tet in t.tetrahedra() {
            let path = t.longest_path(tet)?;
            let eps = t.epsilon(tet)?;
            tets.push(TetInfo {
                path: [e(path[0], path[1]), e(path[1], path[2]), e(path[2], path[3])],
                chain: (dim(path[0]), dim(path[1]), dim(path[2])),
                eps,
            });
        }
        Ok(Layout { edges, triangles, tets })
    }

    /// Greedy labelling order: most triangles closed first, then edges
    /// touching an already reached vertex, then lowest stratum and ids.
    pub fn edge_order(&self) -> Vec<usize> {
        let n = self.edges.len();
        let mut edge_tris: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ti, tri) in self.triangles.iter().enumerate() {
            for &e in &tri.edges {
                edge_tris[e].push(ti);
            }
        }
        let key = |e: usize| {
            let info = &self.edges[e];
            let [a, b] = edge_key(info.tail, info.head);
            (info.src.min(info.tgt), a, b)
        };
        let mut placed = vec![false; n];
        let mut tri_placed = vec![0u8; self.triangles.len()];
        let mut reached = BTreeSet::new();
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let best = (0..n)
                .filter(|&e| !placed[e])
                .max_by(|&a, &b| {
                    let closes = |e: usize| edge_tris[e].iter().filter(|&&t| tri_placed[t] == 2).count();
                    let touches = |e: usize| {
                        let i = &self.edges[e];
                        reached.contains(&i.tail) || reached.contains(&i.head)
                    };
                    (closes(a), touches(a)).cmp(&(closes(b), touches(b))).then_with(|| key(b).cmp(&key(a)))
                })
                .expect("an unplaced edge remains");
            placed[best] = true;
            for &t in &edge_tris[best] {
                tri_placed[t] += 1;
            }
            reached.insert(self.edges[best].tail);
            reached.insert(self.edges[best].head);
            order.push(best);
        }
        order
    }

    /// Within-stratum edges of a spanning forest of each stratum's edge
    /// graph, chosen in `order`; also returns the number of trees
    /// (isolated vertices included) per stratum.
    pub fn gauge_forest(&self, t: &StratifiedTriangulation, order: &[usize]) -> (Vec<bool>, [usize; 3]) {
        let n = t.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut fixed = vec![false; self.edges.len()];
        for &e in order {
            let info = &self.edges[e];
            if info.src != info.tgt {
                continue;
            }
            let (ra, rb) = (find(&mut parent, info.tail), find(&mut parent, info.head));
            if ra != rb {
                parent[ra] = rb;
                fixed[e] = true;
            }
        }
        let mut trees = [0usize; 3];
        for v in 0..n {
            if find(&mut parent, v) == v {
                trees[t.dim(v).index()] += 1;
            }
        }
        (fixed, trees)
    }
}

/// Solutions of `compose(a, x) = c` and `compose(x, b) = c` for one chain.
#[derive(Clone, Debug, Default)]
struct Division {
    /// `left[a * n_ik + c]`: all `b` with `a·b = c`.
    left: Vec<Vec<u32>>,
    /// `right[b * n_ik + c]`: all `a` with `a·b = c`.
    right: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    First,
    Second,
    Composite,
}

#[derive(Clone, Copy, Debug)]
struct Constraint {
    tri: usize,
    role: Role,
}

#[derive(Clone, Debug)]
struct Step {
    edge: usize,
    size: u32,
    pinned: Option<u32>,
    generator: Option<Constraint>,
    /// Other triangles closed at this step.
    checks: Vec<usize>,
    tets: Vec<usize>,
}

/// Everything the search needs, independent of the cursor state.
pub(crate) struct Plan<'a> {
    parcel: &'a Parcel,
    layout: Layout,
    steps: Vec<Step>,
    /// Indexed by `9i + 3j + k`.
    division: Vec<Division>,
    alpha: Option<&'a PartialCocycle>,
    order: u32,
}

impl<'a> Plan<'a> {
    pub fn new(
        layout: Layout,
        parcel: &'a Parcel,
        order: &[usize],
        pinned: Option<&[bool]>,
        alpha: Option<&'a PartialCocycle>,
    ) -> Plan<'a> {
        let mut depth_of = vec![usize::MAX; layout.edges.len()];
        for (d, &e) in order.iter().enumerate() {
            depth_of[e] = d;
        }
        let mut closing: Vec<Vec<Constraint>> = vec![Vec::new(); order.len()];
        for (ti, tri) in layout.triangles.iter().enumerate() {
            let (last_pos, d) =
                tri.edges.iter().enumerate().map(|(pos, &e)| (pos, depth_of[e])).max_by_key(|p| p.1).unwrap();
            let role = [Role::First, Role::Second, Role::Composite][last_pos];
            closing[d].push(Constraint { tri: ti, role });
        }
        let mut tets_at: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        for (i, tet) in layout.tets.iter().enumerate() {
            let d = tet.path.iter().map(|&e| depth_of[e]).max().unwrap();
            tets_at[d].push(i);
        }
        let steps = order
            .iter()
            .enumerate()
            .map(|(d, &edge)| {
                let info = layout.edges[edge];
                let size = parcel.hom_sizes().get(info.src, info.tgt) as u32;
                let pinned = pinned.filter(|p| p[edge]).map(|_| parcel.identities()[info.src] as u32);
                let mut cons = closing[d].clone();
                // the composite role pins the value; prefer it as generator
                cons.sort_by_key(|c| c.role != Role::Composite);
                let generator = if pinned.is_some() { None } else { cons.first().copied() };
                let skip = usize::from(generator.is_some());
                let checks = cons[skip..].iter().map(|c| c.tri).collect();
                Step { edge, size, pinned, generator, checks, tets: std::mem::take(&mut tets_at[d]) }
            })
            .collect();

        let mut division = vec![Division::default(); 27];
        for (i, j, k) in CHAINS {
            let sizes = parcel.hom_sizes();
            let (n1, n2, n3) = (sizes.get(i, j), sizes.get(j, k), sizes.get(i, k));
            let mut div = Division { left: vec![Vec::new(); n1 * n3], right: vec![Vec::new(); n2 * n3] };
            for a in 0..n1 {
                for b in 0..n2 {
                    let c = parcel.compose_idx(i, j, k, a, b);
                    div.left[a * n3 + c].push(b as u32);
                    div.right[b * n3 + c].push(a as u32);
                }
            }
            division[9 * i + 3 * j + k] = div;
        }
        let order_n = alpha.map_or(1, |a| a.order());
        Plan { parcel, layout, steps, division, alpha, order: order_n }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    fn satisfied(&self, tri: usize, labels: &[u32]) -> bool {
        let t = &self.layout.triangles[tri];
        let (i, j, k) = t.chain;
        self.parcel.compose_idx(i, j, k, labels[t.edges[0]] as usize, labels[t.edges[1]] as usize)
            == labels[t.edges[2]] as usize
    }

    fn fill(&self, d: usize, labels: &[u32], out: &mut Vec<u32>) {
        out.clear();
        let step = &self.steps[d];
        if let Some(v) = step.pinned {
            if v < step.size {
                out.push(v);
            }
            return;
        }
        let Some(g) = step.generator else {
            out.extend(0..step.size);
            return;
        };
        let t = &self.layout.triangles[g.tri];
        let (i, j, k) = t.chain;
        let n3 = self.parcel.hom_sizes().get(i, k);
        let [xy, yz, xz] = t.edges.map(|e| labels[e] as usize);
        match g.role {
            Role::Composite => out.push(self.parcel.compose_idx(i, j, k, xy, yz) as u32),
            Role::Second => out.extend_from_slice(&self.division[9 * i + 3 * j + k].left[xy * n3 + xz]),
            Role::First => out.extend_from_slice(&self.division[9 * i + 3 * j + k].right[yz * n3 + xz]),
        }
    }

    #[inline]
    fn checks_pass(&self, d: usize, labels: &[u32]) -> bool {
        self.steps[d].checks.iter().all(|&tri| self.satisfied(tri, labels))
    }

    #[inline]
    fn weight_at(&self, d: usize, labels: &[u32]) -> u32 {
        let Some(alpha) = self.alpha else { return 0 };
        let mut total: i64 = 0;
        for &ti in &self.steps[d].tets {
            let tet = &self.layout.tets[ti];
            let (i, j, k) = tet.chain;
            let [a, b, c] = tet.path.map(|e| labels[e] as usize);
            total += tet.eps as i64 * alpha.exponent_idx(i, j, k, a, b, c) as i64;
        }
        total.rem_euclid(self.order as i64) as u32
    }
}

/// Depth-first cursor over complete labellings.
#[derive(Clone)]
pub(crate) struct Cursor {
    labels: Vec<u32>,
    candidates: Vec<Vec<u32>>,
    pos: Vec<usize>,
    exps: Vec<u32>,
    depth: usize,
    floor: usize,
    started: bool,
    done: bool,
}

impl Cursor {
    pub fn new(plan: &Plan<'_>) -> Self {
        let n = plan.depth();
        Cursor {
            labels: vec![0; plan.layout.edges.len()],
            candidates: vec![Vec::new(); n],
            pos: vec![0; n],
            exps: vec![0; n + 1],
            depth: 0,
            floor: 0,
            started: false,
            done: false,
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Weight exponent of the current leaf.
    pub fn exponent(&self) -> u32 {
        self.exps[self.exps.len() - 1]
    }

    /// Moves to the next complete labelling; false when exhausted.
    pub fn next_leaf(&mut self, plan: &Plan<'_>) -> bool {
        if self.done {
            return false;
        }
        let n = plan.depth();
        if n == 0 {
            self.done = true;
            return !std::mem::replace(&mut self.started, true);
        }
        if !self.started {
            self.started = true;
            self.depth = self.floor;
            if self.candidates[self.floor].is_empty() && self.pos[self.floor] == 0 {
                let mut buf = std::mem::take(&mut self.candidates[self.floor]);
                plan.fill(self.floor, &self.labels, &mut buf);
                self.candidates[self.floor] = buf;
            }
        } else {
            self.depth = n - 1;
        }
        loop {
            let d = self.depth;
            if self.pos[d] < self.candidates[d].len() {
                let v = self.candidates[d][self.pos[d]];
                self.pos[d] += 1;
                let edge = plan.steps[d].edge;
                self.labels[edge] = v;
                if !plan.checks_pass(d, &self.labels) {
                    continue;
                }
                let w = plan.weight_at(d, &self.labels);
                self.exps[d + 1] = (self.exps[d] + w) % plan.order;
                if d + 1 == n {
                    return true;
                }
                self.depth = d + 1;
                let mut buf = std::mem::take(&mut self.candidates[d + 1]);
                plan.fill(d + 1, &self.labels, &mut buf);
                self.candidates[d + 1] = buf;
                self.pos[d + 1] = 0;
            } else {
                if d == self.floor {
                    self.done = true;
                    return false;
                }
                self.depth = d - 1;
            }
        }
    }

    /// Sub-cursors, one per viable candidate at the first depth that branches.
    fn split(mut self, plan: &Plan<'_>) -> Vec<Cursor> {
        let n = plan.depth();
        let mut d = 0;
        loop {
            if d == n {
                // fully forced: a single leaf
                let mut leaf = self;
                leaf.floor = n.saturating_sub(1);
                return vec![leaf.rewound_to_leaf(plan)];
            }
            let mut buf = Vec::new();
            plan.fill(d, &self.labels, &mut buf);
            let viable: Vec<u32> = buf
                .into_iter()
                .filter(|&v| {
                    let mut labels = self.labels.clone();
                    labels[plan.steps[d].edge] = v;
                    plan.checks_pass(d, &labels)
                })
                .collect();
            match viable.len() {
                0 => return Vec::new(),
                1 => {
                    let edge = plan.steps[d].edge;
                    self.labels[edge] = viable[0];
                    let w = plan.weight_at(d, &self.labels);
                    self.exps[d + 1] = (self.exps[d] + w) % plan.order;
                    d += 1;
                }
                _ => {
                    return viable
                        .into_iter()
                        .map(|v| {
                            let mut c = self.clone();
                            c.floor = d;
                            c.depth = d;
                            c.candidates[d] = vec![v];
                            c.pos[d] = 0;
                            c.exps[d] = self.exps[d];
                            c
                        })
                        .collect();
                }
            }
        }
    }

    /// A cursor whose labels already form the unique leaf: replays it once.
    fn rewound_to_leaf(mut self, plan: &Plan<'_>) -> Self {
        let n = plan.depth();
        let d = n - 1;
        let edge = plan.steps[d].edge;
        self.candidates[d] = vec![self.labels[edge]];
        self.pos[d] = 0;
        self.floor = d;
        self.depth = d;
        self
    }
}

/// Number of leaves per weight exponent.
pub(crate) fn exponent_counts(plan: &Plan<'_>, parallel: bool) -> Vec<u64> {
    let n = plan.order() as usize;
    let run = |mut c: Cursor| {
        let mut counts = vec![0u64; n];
        while c.next_leaf(plan) {
            counts[c.exponent() as usize] += 1;
        }
        counts
    };
    if plan.depth() == 0 {
        let mut counts = vec![0u64; n];
        counts[0] = 1;
        return counts;
    }
    if !parallel {
        return run(Cursor::new(plan));
    }
    let parts = Cursor::new(plan).split(plan);
    let partials: Vec<Vec<u64>> = parts.into_par_iter().map(run).collect();
    let mut counts = vec![0u64; n];
    for part in partials {
        for (acc, x) in counts.iter_mut().zip(part) {
            *acc += x;
        }
    }
    counts
}
