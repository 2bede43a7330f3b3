#![allow(dead_code)]

use std::collections::BTreeSet;

use flagsum::cocycle::{pullback_group_cocycle, restrict, standard_cyclic_cocycle, GroupCocycle};
use flagsum::complex::{edge_key, permutation_sign, StratifiedTriangulation, VertexTable};
use flagsum::fixtures::{boundary_of_4_simplex, s3_join_fixture};
use flagsum::group::{Biset, FiniteGroup};
use flagsum::parcel::{from_group_spec, GroupParcelSpec, Parcel};
use flagsum::{PartialCocycle, Stratum};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn full_parcel(group: FiniteGroup) -> Parcel {
    from_group_spec(&GroupParcelSpec::full(group)).unwrap()
}

pub fn cyclic_twist(p: &Parcel, n: usize, k: i64) -> PartialCocycle {
    let beta = pullback_group_cocycle(p, &standard_cyclic_cocycle(n, k)).unwrap();
    restrict(&beta, p).unwrap()
}

/// Named groups of order at most `max`.
pub fn groups_up_to(max: usize) -> Vec<(String, FiniteGroup)> {
    let z = FiniteGroup::cyclic;
    let mut out: Vec<(String, FiniteGroup)> = (1..=max).map(|n| (format!("Z{n}"), z(n))).collect();
    let extra = [
        ("Z2xZ2", z(2).direct_product(&z(2))),
        ("S3", FiniteGroup::symmetric(3)),
        ("Z2xZ4", z(2).direct_product(&z(4))),
        ("Z2xZ2xZ2", z(2).direct_product(&z(2)).direct_product(&z(2))),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
    ];
    out.extend(extra.into_iter().filter(|(_, g)| g.order() <= max).map(|(n, g)| (n.to_string(), g)));
    out
}

/// Cyclic cocycles on `g`: the standard ones on `ℤ/m` pulled back along
/// every homomorphism `g → ℤ/m` that we can find by brute force over
/// images of generators, for `m` dividing `|g|`.
pub fn cyclic_cocycles(g: &FiniteGroup) -> Vec<(String, GroupCocycle)> {
    let n = g.order();
    let mut out = Vec::new();
    for m in 2..=n {
        if !n.is_multiple_of(m) {
            continue;
        }
        for hom in homomorphisms_to_cyclic(g, m) {
            if hom.iter().all(|&x| x == 0) {
                continue;
            }
            for k in 1..m as i64 {
                let std = standard_cyclic_cocycle(m, k);
                let h = hom.clone();
                let c = GroupCocycle::from_fn(n, m as u32, |a, b, c| std.exponent(h[a], h[b], h[c]) as i64);
                out.push((format!("Z{m}^{k} via {hom:?}"), c));
            }
        }
    }
    out
}

/// Every homomorphism to `ℤ/m`, as the image of each element.
fn homomorphisms_to_cyclic(g: &FiniteGroup, m: usize) -> Vec<Vec<usize>> {
    let n = g.order();
    // generators: greedily add elements outside the current span
    let mut gens = Vec::new();
    let mut span = g.generated(&[]);
    for x in 0..n {
        if !span.contains(&x) {
            gens.push(x);
            span = g.generated(&gens);
        }
    }
    let mut out = Vec::new();
    let mut images = vec![0usize; gens.len()];
    loop {
        if let Some(h) = extend_hom(g, &gens, &images, m) {
            out.push(h);
        }
        let Some(i) = (0..images.len()).find(|&i| images[i] + 1 < m) else { break };
        images[i] += 1;
        for x in images.iter_mut().take(i) {
            *x = 0;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn extend_hom(g: &FiniteGroup, gens: &[usize], images: &[usize], m: usize) -> Option<Vec<usize>> {
    let n = g.order();
    let mut h = vec![usize::MAX; n];
    h[g.identity()] = 0;
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for (&s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let v = (h[x] + img) % m;
            if h[y] == usize::MAX {
                h[y] = v;
                frontier.push(y);
            } else if h[y] != v {
                return None;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if h[g.mul(a, b)] != (h[a] + h[b]) % m {
                return None;
            }
        }
    }
    Some(h)
}

/// A random parcel inside `group`: random subgroups and random unions of
/// double cosets; `X₁₃` is sometimes enlarged beyond `X₁₂·X₂₃`.
pub fn random_spec(rng: &mut impl Rng, group: &FiniteGroup) -> GroupParcelSpec {
    let subgroups = group.small_subgroups();
    let g: [Vec<usize>; 3] = std::array::from_fn(|_| subgroups.choose(rng).unwrap().clone());
    let n = group.order();
    let seeds = |rng: &mut dyn rand::RngCore| -> Vec<usize> {
        let k = rng.gen_range(0..=2);
        (0..k).map(|_| rng.gen_range(0..n)).collect()
    };
    let x12 = group.double_coset_union(&g[0], &seeds(rng), &g[1]);
    let x23 = group.double_coset_union(&g[1], &seeds(rng), &g[2]);
    let x13 = if rng.gen_bool(0.5) {
        None
    } else {
        let mut s = group.product_set(&x12, &x23);
        s.extend(seeds(rng));
        Some(group.double_coset_union(&g[0], &s, &g[2]))
    };
    GroupParcelSpec { group: group.clone(), g, x12, x23, x13 }
}

/// A random biset over `g` and `h`: a disjoint union of quotients of
/// `g × h` by random relators.
pub fn random_biset(rng: &mut impl Rng, g: &FiniteGroup, h: &FiniteGroup) -> Biset {
    let parts = rng.gen_range(0..=2);
    let mut out = Biset::empty(g, h);
    for _ in 0..parts {
        let relators: Vec<(usize, usize)> =
            (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(0..g.order()), rng.gen_range(0..h.order()))).collect();
        out = out.disjoint_union(&Biset::product_quotient(g, h, &relators));
    }
    out
}

/// Number of colorings by trying every assignment of arrows to edges.
/// Directions, triangle orientation and the relation are derived here
/// from `precedes` alone.
pub fn brute_force_colorings(t: &StratifiedTriangulation, p: &Parcel) -> Vec<Vec<usize>> {
    let edges: Vec<[usize; 2]> =
        t.edges().iter().map(|&[a, b]| if t.precedes(a, b).unwrap() { [a, b] } else { [b, a] }).collect();
    let index = |a: usize, b: usize| t.edges().iter().position(|e| *e == edge_key(a, b)).unwrap();
    let dim = |v: usize| t.dim(v).index();
    let sizes: Vec<usize> = edges.iter().map(|&[a, b]| p.hom_sizes().get(dim(a), dim(b))).collect();
    let triangles: Vec<(usize, usize, usize, [usize; 3])> = t
        .triangles()
        .iter()
        .map(|tri| {
            let mut v = *tri;
            v.sort_by_key(|&x| std::cmp::Reverse(tri.iter().filter(|&&y| y != x && t.precedes(x, y).unwrap()).count()));
            (dim(v[0]), dim(v[1]), dim(v[2]), [index(v[0], v[1]), index(v[1], v[2]), index(v[0], v[2])])
        })
        .collect();
    let mut out = Vec::new();
    if sizes.contains(&0) {
        return out;
    }
    let mut labels = vec![0usize; edges.len()];
    loop {
        if triangles.iter().all(|&(i, j, k, [xy, yz, xz])| p.compose_idx(i, j, k, labels[xy], labels[yz]) == labels[xz])
        {
            out.push(labels.clone());
        }
        let Some(i) = (0..labels.len()).find(|&i| labels[i] + 1 < sizes[i]) else { break };
        labels[i] += 1;
        for x in labels.iter_mut().take(i) {
            *x = 0;
        }
    }
    out
}

/// Twisted sum by brute force: exponent counts over all colorings, with
/// each tetrahedron's path recomputed by sorting on out-degree.
pub fn brute_force_exponent_counts(t: &StratifiedTriangulation, p: &Parcel, alpha: &PartialCocycle) -> Vec<u64> {
    let n = alpha.order() as usize;
    let mut counts = vec![0u64; n];
    let index = |a: usize, b: usize| t.edges().iter().position(|e| *e == edge_key(a, b)).unwrap();
    for labels in brute_force_colorings(t, p) {
        let mut total: i64 = 0;
        for tet in t.tetrahedra() {
            let mut path = *tet;
            path.sort_by_key(|&x| {
                std::cmp::Reverse(tet.iter().filter(|&&y| y != x && t.precedes(x, y).unwrap()).count())
            });
            let eps = permutation_sign(tet, &path) as i64;
            let d = |v: usize| t.dim(v).index();
            let e = alpha.exponent_idx(
                d(path[0]),
                d(path[1]),
                d(path[2]),
                labels[index(path[0], path[1])],
                labels[index(path[1], path[2])],
                labels[index(path[2], path[3])],
            );
            total += eps * e as i64;
        }
        counts[total.rem_euclid(n as i64) as usize] += 1;
    }
    counts
}

/// Small complexes for the counting oracle: subsets of the tetrahedra of
/// the 4-simplex boundary or of the S³ join, cut down to at most 12 edges,
/// with random strata. Every pair of knot vertices is a knot edge directed
/// by id, and every triangle on low vertices is a surface triangle, so all
/// edges get a direction; the result need not be a manifold.
pub fn random_small_complex(rng: &mut impl Rng) -> StratifiedTriangulation {
    let base = if rng.gen_bool(0.5) { boundary_of_4_simplex() } else { s3_join_fixture() };
    let mut tets: Vec<[usize; 4]> = base.tetrahedra().to_vec();
    tets.shuffle(rng);
    tets.truncate(rng.gen_range(1..=tets.len()));
    while edge_count(&tets) > 12 {
        tets.pop();
    }
    let n = base.vertex_count();
    let dims: Vec<Stratum> = (0..n).map(|_| Stratum::ALL[rng.gen_range(0..3)]).collect();
    let mut knot = BTreeSet::new();
    let mut surface = BTreeSet::new();
    for tet in &tets {
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (tet[i], tet[j]);
                if a < b && dims[a] == Stratum::Knot && dims[b] == Stratum::Knot {
                    knot.insert((a, b));
                }
                for &c in tet {
                    if a < b && b < c && [a, b, c].iter().all(|&v| dims[v] != Stratum::Bulk) {
                        surface.insert([a, b, c]);
                    }
                }
            }
        }
    }
    let mut order = |s: Stratum| {
        let mut vs: Vec<usize> = (0..n).filter(|&v| dims[v] == s).collect();
        vs.shuffle(rng);
        vs
    };
    let sigma = order(Stratum::Surface);
    let bulk = order(Stratum::Bulk);
    StratifiedTriangulation::from_parts(
        VertexTable::new(dims),
        tets,
        surface.into_iter().collect(),
        knot.into_iter().collect(),
        sigma,
        bulk,
    )
}

fn edge_count(tets: &[[usize; 4]]) -> usize {
    let edges: BTreeSet<[usize; 2]> =
        tets.iter().flat_map(|t| (0..4).flat_map(move |i| (i + 1..4).map(move |j| edge_key(t[i], t[j])))).collect();
    edges.len()
}

/// Random permutations of both stratum orders.
pub fn shuffled_orders(rng: &mut impl Rng, t: &StratifiedTriangulation) -> StratifiedTriangulation {
    let mut sigma = t.sigma_order().to_vec();
    let mut bulk = t.bulk_order().to_vec();
    sigma.shuffle(rng);
    bulk.shuffle(rng);
    t.reorder_vertices(sigma, bulk).unwrap()
}
