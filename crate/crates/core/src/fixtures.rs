//! Small hand-built triangulations.

use crate::complex::{StratifiedTriangulation, VertexTable};
use crate::stratum::Stratum;

/// `S³` as the join of two triangle boundaries. The knot is the first circle
/// `0 → 1 → 2 → 0`; the Seifert surface is the cone on it from vertex 3 of
/// the second circle `3, 4, 5`.
pub fn s3_join_fixture() -> StratifiedTriangulation {
    let k = [0, 1, 2];
    let l = [3, 4, 5];
    let mut tetrahedra = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            tetrahedra.push([k[i], k[(i + 1) % 3], l[j], l[(j + 1) % 3]]);
        }
    }
    let surface = (0..3).map(|i| [k[i], k[(i + 1) % 3], 3]).collect();
    let knot = (0..3).map(|i| (k[i], k[(i + 1) % 3])).collect();
    StratifiedTriangulation::from_parts(
        VertexTable::new(vec![
            Stratum::Knot,
            Stratum::Knot,
            Stratum::Knot,
            Stratum::Surface,
            Stratum::Bulk,
            Stratum::Bulk,
        ]),
        tetrahedra,
        surface,
        knot,
        vec![3],
        vec![4, 5],
    )
}

fn boundary_of_4_simplex_tets() -> Vec<[usize; 4]> {
    (0..5)
        .map(|omit| {
            let rest: Vec<usize> = (0..5).filter(|&v| v != omit).collect();
            let mut tet = [rest[0], rest[1], rest[2], rest[3]];
            if omit % 2 == 1 {
                tet.swap(0, 1);
            }
            tet
        })
        .collect()
}

/// `S³` as the boundary of the 4-simplex with empty knot and surface.
pub fn boundary_of_4_simplex() -> StratifiedTriangulation {
    StratifiedTriangulation::from_parts(
        VertexTable::new(vec![Stratum::Bulk; 5]),
        boundary_of_4_simplex_tets(),
        vec![],
        vec![],
        vec![],
        (0..5).collect(),
    )
}

/// The boundary of the 4-simplex with `Σ` the boundary of the tetrahedron
/// `0123` and no knot. Not flag-like: that tetrahedron lies entirely in `Σ`.
pub fn sphere_in_boundary_of_4_simplex() -> StratifiedTriangulation {
    let mut dims = vec![Stratum::Surface; 4];
    dims.push(Stratum::Bulk);
    StratifiedTriangulation::from_parts(
        VertexTable::new(dims),
        boundary_of_4_simplex_tets(),
        vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
        vec![],
        (0..4).collect(),
        vec![4],
    )
}
