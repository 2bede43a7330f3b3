//! Barycentric and stellar (Alexander) subdivision.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::complex::{
    edge_key, permutation_sign, tet_key, triangle_key, StratifiedTriangulation, VertexId, VertexTable,
};
use crate::stratum::Stratum;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("strata are not subcomplexes: {0}")]
    StrataNotSubcomplexes(String),
    #[error("{0:?} is not a simplex of the triangulation")]
    SimplexNotFound(Vec<VertexId>),
}

/// Checks only what subdivision needs: ids in range, `Σ` and `K` subcomplexes
/// of `M` with `K ⊂ Σ`.
fn check_strata(t: &StratifiedTriangulation) -> Result<(), SubdivisionError> {
    let n = t.vertex_count();
    let bad = |msg: String| Err(SubdivisionError::StrataNotSubcomplexes(msg));
    for tet in t.tetrahedra() {
        if tet.iter().any(|&v| v >= n) || tet.iter().collect::<HashSet<_>>().len() != 4 {
            return bad(format!("malformed tetrahedron {tet:?}"));
        }
    }
    let s = t.skeleton();
    for tri in t.surface_triangles() {
        if !s.triangle_index.contains_key(&triangle_key(*tri)) {
            return bad(format!("surface triangle {tri:?} is not a triangle of M"));
        }
    }
    for &(a, b) in t.knot_edges() {
        if !s.surface_edges.contains_key(&edge_key(a, b)) {
            return bad(format!("knot edge ({a}, {b}) is not an edge of the surface"));
        }
    }
    Ok(())
}

/// Stratum of the interior of a simplex given by sorted vertex ids.
fn interior_stratum(t: &StratifiedTriangulation, simplex: &[VertexId]) -> Stratum {
    match simplex.len() {
        1 => t.dim(simplex[0]),
        2 if t.is_knot_edge(simplex[0], simplex[1]) => Stratum::Knot,
        2 if t.is_surface_edge(simplex[0], simplex[1]) => Stratum::Surface,
        3 if t.is_surface_triangle([simplex[0], simplex[1], simplex[2]]) => Stratum::Surface,
        _ => Stratum::Bulk,
    }
}

const PERMUTATIONS_4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

const PERMUTATIONS_3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Barycentric subdivision. Barycenters of edges, then triangles, then
/// tetrahedra (each in sorted order) get fresh ids after the original
/// vertices and are appended to the end of their stratum order.
pub fn barycentric_subdivision(t: &StratifiedTriangulation) -> Result<StratifiedTriangulation, SubdivisionError> {
    check_strata(t)?;
    let s = t.skeleton();
    let mut dims = t.vertices().dims().to_vec();
    let mut sigma_order = t.sigma_order().to_vec();
    let mut bulk_order = t.bulk_order().to_vec();
    let mut barycenter: BTreeMap<Vec<VertexId>, VertexId> = BTreeMap::new();

    let mut tet_keys: Vec<[VertexId; 4]> = t.tetrahedra().iter().map(|x| tet_key(*x)).collect();
    tet_keys.sort_unstable();
    let simplices = s
        .edges
        .iter()
        .map(|e| e.to_vec())
        .chain(s.triangles.iter().map(|f| f.to_vec()))
        .chain(tet_keys.iter().map(|k| k.to_vec()));
    for simplex in simplices {
        let id = dims.len();
        let stratum = interior_stratum(t, &simplex);
        dims.push(stratum);
        match stratum {
            Stratum::Surface => sigma_order.push(id),
            Stratum::Bulk => bulk_order.push(id),
            Stratum::Knot => {}
        }
        barycenter.insert(simplex, id);
    }
    let center = |vs: &[VertexId]| -> VertexId {
        let mut key = vs.to_vec();
        key.sort_unstable();
        if key.len() == 1 {
            key[0]
        } else {
            barycenter[&key]
        }
    };

    let mut tetrahedra = Vec::with_capacity(24 * t.tetrahedra().len());
    for tet in t.tetrahedra() {
        for pi in PERMUTATIONS_4 {
            let p: Vec<VertexId> = pi.iter().map(|&i| tet[i]).collect();
            let mut new = [center(&p[..1]), center(&p[..2]), center(&p[..3]), center(&p)];
            if permutation_sign(&[0, 1, 2, 3], &pi) < 0 {
                new.swap(0, 1);
            }
            tetrahedra.push(new);
        }
    }

    let mut surface = Vec::with_capacity(6 * t.surface_triangles().len());
    for tri in t.surface_triangles() {
        for pi in PERMUTATIONS_3 {
            let p: Vec<VertexId> = pi.iter().map(|&i| tri[i]).collect();
            surface.push([center(&p[..1]), center(&p[..2]), center(&p)]);
        }
    }

    let mut knot = Vec::with_capacity(2 * t.knot_edges().len());
    for &(a, b) in t.knot_edges() {
        let m = center(&[a, b]);
        knot.push((a, m));
        knot.push((m, b));
    }

    Ok(StratifiedTriangulation::from_parts(VertexTable::new(dims), tetrahedra, surface, knot, sigma_order, bulk_order))
}

/// Replaces the star of `simplex` by the cone from a new vertex over the
/// boundary of the star. The new vertex takes the next free id, the
/// stratum of the interior of `simplex`, and the last place in its order.
/// Each new tetrahedron keeps the slot layout of the one it came from, so
/// orientations carry over.
pub fn stellar_subdivide(
    t: &StratifiedTriangulation,
    simplex: &[VertexId],
) -> Result<StratifiedTriangulation, SubdivisionError> {
    check_strata(t)?;
    let mut key = simplex.to_vec();
    key.sort_unstable();
    key.dedup();
    let s = t.skeleton();
    let exists = key.len() == simplex.len()
        && match key.len() {
            2 => s.edge_index.contains_key(&[key[0], key[1]]),
            3 => s.triangle_index.contains_key(&[key[0], key[1], key[2]]),
            4 => s.tet_keys.contains(&[key[0], key[1], key[2], key[3]]),
            _ => false,
        };
    if !exists {
        return Err(SubdivisionError::SimplexNotFound(simplex.to_vec()));
    }

    let w = t.vertex_count();
    let stratum = interior_stratum(t, &key);
    let mut dims = t.vertices().dims().to_vec();
    dims.push(stratum);
    let mut sigma_order = t.sigma_order().to_vec();
    let mut bulk_order = t.bulk_order().to_vec();
    match stratum {
        Stratum::Surface => sigma_order.push(w),
        Stratum::Bulk => bulk_order.push(w),
        Stratum::Knot => {}
    }

    let mut tetrahedra = Vec::new();
    for tet in t.tetrahedra() {
        if key.iter().all(|v| tet.contains(v)) {
            for x in &key {
                tetrahedra.push(tet.map(|v| if v == *x { w } else { v }));
            }
        } else {
            tetrahedra.push(*tet);
        }
    }
    let mut surface = Vec::new();
    for tri in t.surface_triangles() {
        if key.len() <= 3 && key.iter().all(|v| tri.contains(v)) {
            for x in &key {
                surface.push(tri.map(|v| if v == *x { w } else { v }));
            }
        } else {
            surface.push(*tri);
        }
    }
    let mut knot = Vec::new();
    for &(a, b) in t.knot_edges() {
        if key.len() == 2 && edge_key(a, b) == [key[0], key[1]] {
            knot.push((a, w));
            knot.push((w, b));
        } else {
            knot.push((a, b));
        }
    }

    Ok(StratifiedTriangulation::from_parts(VertexTable::new(dims), tetrahedra, surface, knot, sigma_order, bulk_order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{s3_join_fixture, sphere_in_boundary_of_4_simplex};

    #[test]
    fn barycentric_fixture_is_flag_like() {
        let t = s3_join_fixture();
        let b = barycentric_subdivision(&t).unwrap();
        let report = b.validate();
        assert!(report.is_empty(), "{report}");
        let simplices = 6 + t.edges().len() + t.triangles().len() + t.tetrahedra().len();
        assert_eq!(b.vertex_count(), simplices);
        assert_eq!(b.tetrahedra().len(), 24 * 9);
        assert_eq!(b.euler_characteristic(), 0);
        assert_eq!(b.surface_euler_characteristic(), 1);
        assert_eq!(b.knot_component_lengths(), vec![6]);
    }

    #[test]
    fn barycenter_strata() {
        let t = s3_join_fixture();
        let b = barycentric_subdivision(&t).unwrap();
        // edges come first in sorted order: [0, 1] is a knot edge
        assert_eq!(t.edges()[0], [0, 1]);
        assert_eq!(b.dim(6), Stratum::Knot);
        // the barycenter of a surface triangle has dim 2
        let tri_pos = t.triangles().iter().position(|&f| f == [0, 1, 3]).unwrap();
        assert_eq!(b.dim(6 + t.edges().len() + tri_pos), Stratum::Surface);
        // tetrahedron barycenters are bulk
        assert_eq!(b.dim(b.vertex_count() - 1), Stratum::Bulk);
    }

    #[test]
    fn barycentric_makes_non_flag_input_flag_like() {
        let t = sphere_in_boundary_of_4_simplex();
        assert!(t.validate().any(|i| matches!(i, crate::complex::ComplexIssue::FlagViolation { .. })));
        let b = barycentric_subdivision(&t).unwrap();
        let report = b.validate();
        assert!(report.is_empty(), "{report}");
    }

    #[test]
    fn stellar_at_tetrahedron_is_one_four() {
        let t = s3_join_fixture();
        let tet = t.tetrahedra()[0];
        let s = stellar_subdivide(&t, &tet).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(s.tetrahedra().len(), 12);
        assert_eq!(s.dim(6), Stratum::Bulk);
        assert_eq!(s.bulk_order().last(), Some(&6));
    }

    #[test]
    fn stellar_at_knot_edge_doubles_its_star() {
        let t = s3_join_fixture();
        let s = stellar_subdivide(&t, &[0, 1]).unwrap();
        let report = s.validate();
        assert!(report.is_empty(), "{report}");
        assert_eq!(s.tetrahedra().len(), 9 + 3);
        assert_eq!(s.dim(6), Stratum::Knot);
        assert_eq!(s.knot_component_lengths(), vec![4]);
        assert_eq!(s.surface_triangles().len(), 4);
    }

    #[test]
    fn stellar_at_surface_triangle() {
        let t = s3_join_fixture();
        let s = stellar_subdivide(&t, &[0, 1, 3]).unwrap();
        assert!(s.validate().is_empty());
        assert_eq!(s.dim(6), Stratum::Surface);
        assert_eq!(s.surface_triangles().len(), 5);
        assert_eq!(s.tetrahedra().len(), 9 + 4);
    }

    #[test]
    fn stellar_rejects_missing_simplex() {
        let t = s3_join_fixture();
        assert!(matches!(stellar_subdivide(&t, &[0, 1, 2]), Err(SubdivisionError::SimplexNotFound(_))));
        assert!(stellar_subdivide(&t, &[0]).is_err());
    }

    #[test]
    fn non_subcomplex_strata_are_rejected() {
        let t = s3_join_fixture();
        let bad = StratifiedTriangulation::from_parts(
            t.vertices().clone(),
            t.tetrahedra().to_vec(),
            vec![[0, 1, 2]],
            t.knot_edges().to_vec(),
            t.sigma_order().to_vec(),
            t.bulk_order().to_vec(),
        );
        assert!(matches!(barycentric_subdivision(&bad), Err(SubdivisionError::StrataNotSubcomplexes(_))));
    }
}
