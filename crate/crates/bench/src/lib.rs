//! Shared inputs for the benchmarks.

use flagsum::cocycle::{pullback_group_cocycle, restrict, standard_cyclic_cocycle};
use flagsum::group::FiniteGroup;
use flagsum::parcel::{from_group_spec, GroupParcelSpec};
use flagsum::{barycentric_subdivision, s3_join_fixture, Parcel, PartialCocycle, StratifiedTriangulation};

pub fn cyclic_parcel(n: usize) -> Parcel {
    from_group_spec(&GroupParcelSpec::full(FiniteGroup::cyclic(n))).unwrap()
}

/// The restricted standard cocycle on the full `ℤ/n` parcel.
pub fn cyclic_twist(n: usize) -> (Parcel, PartialCocycle) {
    let p = cyclic_parcel(n);
    let beta = pullback_group_cocycle(&p, &standard_cyclic_cocycle(n, 1)).unwrap();
    let alpha = restrict(&beta, &p).unwrap();
    (p, alpha)
}

pub fn fixture() -> StratifiedTriangulation {
    s3_join_fixture()
}

pub fn subdivided_fixture() -> StratifiedTriangulation {
    barycentric_subdivision(&s3_join_fixture()).unwrap()
}
