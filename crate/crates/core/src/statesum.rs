//! Colorings of a triangulation by a parcel and the two state sums.
//!
//! A coloring labels every canonically directed edge by an arrow between
//! the strata of its endpoints so that each triangle commutes. The
//! untwisted invariant counts colorings; the twisted one weighs each by
//! the partial cocycle evaluated on the longest path of every tetrahedron.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use thiserror::Error;

use crate::cocycle::{CocycleError, PartialCocycle};
use crate::complex::{edge_key, ComplexError, DirectedEdge, StratifiedTriangulation, VertexId};
use crate::cyclotomic::{CycValue, CyclotomicSum};
use crate::parcel::{Arrow, Parcel};
use crate::search::{exponent_counts, Cursor, Layout, Plan};
use crate::stratum::Stratum;

#[derive(Debug, Error)]
pub enum StateSumError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// Arrows on canonically directed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    labels: BTreeMap<DirectedEdge, Arrow>,
}

impl Coloring {
    pub fn new(labels: BTreeMap<DirectedEdge, Arrow>) -> Self {
        Coloring { labels }
    }

    /// Label of the edge `tail → head`, if that is its canonical direction.
    pub fn get(&self, tail: VertexId, head: VertexId) -> Option<Arrow> {
        self.labels.get(&DirectedEdge { tail, head }).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DirectedEdge, Arrow)> + '_ {
        self.labels.iter().map(|(e, a)| (*e, *a))
    }

    /// Checks arrow types and the triangle relation directly.
    pub fn is_valid(&self, t: &StratifiedTriangulation, p: &Parcel) -> bool {
        let Ok(layout) = Layout::new(t) else { return false };
        if self.labels.len() != layout.edges.len() {
            return false;
        }
        let arrows: Option<Vec<Arrow>> = layout.edges.iter().map(|e| self.get(e.tail, e.head)).collect();
        let Some(arrows) = arrows else { return false };
        let typed = arrows
            .iter()
            .zip(&layout.edges)
            .all(|(a, e)| a.src.index() == e.src && a.tgt.index() == e.tgt && a.idx < p.hom_sizes().get(e.src, e.tgt));
        typed
            && layout.triangles.iter().all(|tri| {
                let [xy, yz, xz] = tri.edges.map(|e| arrows[e]);
                p.try_compose(xy, yz).is_ok_and(|c| c == xz)
            })
    }
}

/// Streaming enumeration of colorings in a fixed deterministic order.
pub struct Colorings<'a> {
    plan: Plan<'a>,
    cursor: Cursor,
}

impl Iterator for Colorings<'_> {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        if !self.cursor.next_leaf(&self.plan) {
            return None;
        }
        let layout = self.plan.layout();
        let labels = layout
            .edges
            .iter()
            .zip(self.cursor.labels())
            .map(|(e, &idx)| {
                let arrow = Arrow::new(Stratum::ALL[e.src], Stratum::ALL[e.tgt], idx as usize);
                (DirectedEdge { tail: e.tail, head: e.head }, arrow)
            })
            .collect();
        Some(Coloring { labels })
    }
}

pub fn enumerate_colorings<'a>(t: &StratifiedTriangulation, p: &'a Parcel) -> Result<Colorings<'a>, StateSumError> {
    let layout = Layout::new(t)?;
    let order = layout.edge_order();
    let plan = Plan::new(layout, p, &order, None, None);
    let cursor = Cursor::new(&plan);
    Ok(Colorings { plan, cursor })
}

/// Execution knobs; results never depend on them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SumOptions {
    /// Split the search tree at its first branching level across threads.
    pub parallel: bool,
}

pub fn count_colorings(t: &StratifiedTriangulation, p: &Parcel) -> Result<u64, StateSumError> {
    count_colorings_with(t, p, SumOptions::default())
}

pub fn count_colorings_with(t: &StratifiedTriangulation, p: &Parcel, opts: SumOptions) -> Result<u64, StateSumError> {
    let layout = Layout::new(t)?;
    let order = layout.edge_order();
    let plan = Plan::new(layout, p, &order, None, None);
    Ok(exponent_counts(&plan, opts.parallel)[0])
}

/// `∏ᵢ |Gᵢ|^{Vᵢ}` with `Vᵢ` the number of vertices of dimension `i`.
pub fn vertex_denominator(t: &StratifiedTriangulation, p: &Parcel) -> BigInt {
    let counts = t.vertices().stratum_counts();
    (0..3).fold(BigInt::one(), |acc, i| acc * BigInt::from(p.hom_sizes().get(i, i)).pow(counts[i] as u32))
}

pub fn untwisted_invariant(t: &StratifiedTriangulation, p: &Parcel) -> Result<BigRational, StateSumError> {
    untwisted_invariant_with(t, p, SumOptions::default())
}

/// Counts only colorings that are the identity on a spanning forest of
/// each stratum. The gauge group `∏ Gᵥ` acts on colorings, and with the
/// root of each tree held fixed it moves any labelling of the forest to
/// the identity in exactly one way, so the full count is the restricted
/// count times `|Gᵢ|` for every non-root vertex.
pub fn untwisted_invariant_with(
    t: &StratifiedTriangulation,
    p: &Parcel,
    opts: SumOptions,
) -> Result<BigRational, StateSumError> {
    let layout = Layout::new(t)?;
    let order = layout.edge_order();
    let (fixed, trees) = layout.gauge_forest(t, &order);
    let plan = Plan::new(layout, p, &order, Some(&fixed), None);
    let count = exponent_counts(&plan, opts.parallel)[0];
    let denom = (0..3).fold(BigInt::one(), |acc, i| acc * BigInt::from(p.hom_sizes().get(i, i)).pow(trees[i] as u32));
    Ok(BigRational::new(BigInt::from(count), denom))
}

/// Plain count over all colorings divided by [`vertex_denominator`].
pub fn untwisted_invariant_by_enumeration(
    t: &StratifiedTriangulation,
    p: &Parcel,
) -> Result<BigRational, StateSumError> {
    let count = count_colorings(t, p)?;
    Ok(BigRational::new(BigInt::from(count), vertex_denominator(t, p)))
}

/// Product over tetrahedra of `α^ε` on the arrows of the longest path.
pub fn weight(t: &StratifiedTriangulation, c: &Coloring, alpha: &PartialCocycle) -> Result<CycValue, StateSumError> {
    let mut total = CycValue::one(alpha.order());
    for tet in t.tetrahedra() {
        let path = t.longest_path(tet)?;
        let eps = t.epsilon(tet)?;
        let arrow = |a: VertexId, b: VertexId| c.get(a, b).ok_or(ComplexError::EdgeNotFound(edge_key(a, b)));
        let (f, g, h) = (arrow(path[0], path[1])?, arrow(path[1], path[2])?, arrow(path[2], path[3])?);
        let value = alpha.get(f, g, h).expect("longest path ends in the bulk after the surface");
        total = total * value.pow_sign(eps);
    }
    Ok(total)
}

pub fn twisted_invariant(
    t: &StratifiedTriangulation,
    p: &Parcel,
    alpha: &PartialCocycle,
) -> Result<CyclotomicSum, StateSumError> {
    twisted_invariant_with(t, p, alpha, SumOptions::default())
}

pub fn twisted_invariant_with(
    t: &StratifiedTriangulation,
    p: &Parcel,
    alpha: &PartialCocycle,
    opts: SumOptions,
) -> Result<CyclotomicSum, StateSumError> {
    alpha.check_parcel(p)?;
    let layout = Layout::new(t)?;
    let order = layout.edge_order();
    let plan = Plan::new(layout, p, &order, None, Some(alpha));
    let counts = exponent_counts(&plan, opts.parallel);
    Ok(CyclotomicSum::from_exponent_counts(alpha.order() as usize, &counts, vertex_denominator(t, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{pullback_group_cocycle, restrict, standard_cyclic_cocycle};
    use crate::fixtures::{boundary_of_4_simplex, s3_join_fixture};
    use crate::group::FiniteGroup;
    use crate::parcel::{from_group_spec, GroupParcelSpec};
    use num_traits::Zero;

    fn full(n: usize) -> Parcel {
        from_group_spec(&GroupParcelSpec::full(FiniteGroup::cyclic(n))).unwrap()
    }

    fn twist(p: &Parcel, n: usize) -> PartialCocycle {
        let beta = pullback_group_cocycle(p, &standard_cyclic_cocycle(n, 1)).unwrap();
        restrict(&beta, p).unwrap()
    }

    fn rational(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn trivial_parcel_has_one_coloring() {
        let t = s3_join_fixture();
        let p = Parcel::trivial();
        assert_eq!(count_colorings(&t, &p).unwrap(), 1);
        assert_eq!(untwisted_invariant(&t, &p).unwrap(), rational(1, 1));
        let alpha = PartialCocycle::trivial(&p, 3);
        assert_eq!(twisted_invariant(&t, &p, &alpha).unwrap(), CyclotomicSum::one(3));
    }

    #[test]
    fn fixture_counts() {
        let t = s3_join_fixture();
        assert_eq!(count_colorings(&t, &full(2)).unwrap(), 32);
        assert_eq!(count_colorings(&t, &full(3)).unwrap(), 243);
        assert_eq!(untwisted_invariant(&t, &full(2)).unwrap(), rational(1, 2));
        assert_eq!(untwisted_invariant(&t, &full(3)).unwrap(), rational(1, 3));
    }

    #[test]
    fn gauge_fixed_count_matches_enumeration() {
        for t in [s3_join_fixture(), boundary_of_4_simplex()] {
            for n in 2..=4 {
                let p = full(n);
                assert_eq!(untwisted_invariant(&t, &p).unwrap(), untwisted_invariant_by_enumeration(&t, &p).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_yields_distinct_valid_colorings() {
        let t = s3_join_fixture();
        let p = full(2);
        let all: Vec<Coloring> = enumerate_colorings(&t, &p).unwrap().collect();
        assert_eq!(all.len(), 32);
        assert!(all.iter().all(|c| c.is_valid(&t, &p)));
        let mut sorted: Vec<_> = all.iter().map(|c| c.iter().collect::<Vec<_>>()).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 32);
    }

    #[test]
    fn empty_hom_set_gives_zero() {
        let mut spec = GroupParcelSpec::full(FiniteGroup::cyclic(2));
        spec.x12 = Vec::new();
        let p = from_group_spec(&spec).unwrap();
        let t = s3_join_fixture();
        assert_eq!(count_colorings(&t, &p).unwrap(), 0);
        assert!(untwisted_invariant(&t, &p).unwrap().is_zero());
        let alpha = PartialCocycle::trivial(&p, 2);
        assert!(twisted_invariant(&t, &p, &alpha).unwrap().is_zero());
    }

    #[test]
    fn trivial_cocycle_reduces_to_untwisted() {
        let t = s3_join_fixture();
        for n in 2..=3 {
            let p = full(n);
            let alpha = PartialCocycle::trivial(&p, n as u32);
            let twisted = twisted_invariant(&t, &p, &alpha).unwrap();
            assert_eq!(twisted.as_rational(), Some(untwisted_invariant(&t, &p).unwrap()));
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let t = s3_join_fixture();
        let p = full(3);
        let alpha = twist(&p, 3);
        let par = SumOptions { parallel: true };
        assert_eq!(twisted_invariant(&t, &p, &alpha).unwrap(), twisted_invariant_with(&t, &p, &alpha, par).unwrap());
        assert_eq!(count_colorings(&t, &p).unwrap(), count_colorings_with(&t, &p, par).unwrap());
        assert_eq!(untwisted_invariant(&t, &p).unwrap(), untwisted_invariant_with(&t, &p, par).unwrap());
    }

    #[test]
    fn twisted_sum_matches_per_coloring_weights() {
        let t = s3_join_fixture();
        for n in 2..=3 {
            let p = full(n);
            let alpha = twist(&p, n);
            let mut counts = vec![0u64; n];
            let mut float = num_complex::Complex64::new(0.0, 0.0);
            for c in enumerate_colorings(&t, &p).unwrap() {
                let w = weight(&t, &c, &alpha).unwrap();
                counts[w.exponent() as usize] += 1;
                float += w.to_complex();
            }
            let denom = vertex_denominator(&t, &p);
            let expected = CyclotomicSum::from_exponent_counts(n, &counts, denom.clone());
            let value = twisted_invariant(&t, &p, &alpha).unwrap();
            assert_eq!(value, expected);
            let d: f64 = denom.to_string().parse().unwrap();
            assert!((value.to_complex() - float / d).norm() < 1e-12);
        }
    }

    #[test]
    fn weight_of_trivial_cocycle_is_one() {
        let t = s3_join_fixture();
        let p = full(2);
        let alpha = PartialCocycle::trivial(&p, 2);
        for c in enumerate_colorings(&t, &p).unwrap() {
            assert_eq!(weight(&t, &c, &alpha).unwrap().exponent(), 0);
        }
    }
}
