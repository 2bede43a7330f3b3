//! Finite 3-parcels: small categories over the chain `1 < 2 < 3` whose
//! endomorphism monoids are groups.
//!
//! Hom-sets are index ranges `0..size(i, j)`; composition is stored as one
//! table per chain `i ≤ j ≤ k` and read diagrammatically (`f` then `g`).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::group::{balanced_product, Biset, FiniteGroup, GroupError};
use crate::report::Report;
use crate::stratum::Stratum;

/// The ten chains `i ≤ j ≤ k` of object indices.
pub const CHAINS: [(usize, usize, usize); 10] =
    [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2), (0, 2, 2), (1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub src: Stratum,
    pub tgt: Stratum,
    pub idx: usize,
}

impl Arrow {
    pub fn new(src: Stratum, tgt: Stratum, idx: usize) -> Self {
        Arrow { src, tgt, idx }
    }

    pub fn is_endomorphism(&self) -> bool {
        self.src == self.tgt
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}:{}", self.src, self.tgt, self.idx)
    }
}

/// Sizes of the six hom-sets, indexed by object indices `i ≤ j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HomSizes(pub [[usize; 3]; 3]);

impl HomSizes {
    pub fn new(g1: usize, g2: usize, g3: usize, x12: usize, x23: usize, x13: usize) -> Self {
        HomSizes([[g1, x12, x13], [0, g2, x23], [0, 0, g3]])
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.0[i][j]
    }
}

/// Ambient group elements behind each arrow, kept by group-built parcels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParcelLabels {
    pub group: FiniteGroup,
    /// `elements[i][j][idx]` is the ambient element of arrow `idx` in `(i, j)`.
    pub elements: [[Vec<usize>; 3]; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParcelIssue {
    EmptyGroup { obj: Stratum },
    TableShape { chain: (Stratum, Stratum, Stratum), expected: usize, found: usize },
    EntryOutOfRange { chain: (Stratum, Stratum, Stratum), a: usize, b: usize },
    IdentityOutOfRange { obj: Stratum },
    NotIdentity { obj: Stratum, arrow: Arrow },
    NotAssociative { f: Arrow, g: Arrow, h: Arrow },
    NonInvertible { arrow: Arrow },
}

impl fmt::Display for ParcelIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParcelIssue::*;
        match self {
            EmptyGroup { obj } => write!(f, "endomorphism set of object {obj} is empty"),
            TableShape { chain: (i, j, k), expected, found } => {
                write!(f, "composition table {i}{j}{k} has {found} entries, expected {expected}")
            }
            EntryOutOfRange { chain: (i, j, k), a, b } => {
                write!(f, "composition table {i}{j}{k} entry ({a}, {b}) is missing or out of range")
            }
            IdentityOutOfRange { obj } => write!(f, "identity of object {obj} is out of range"),
            NotIdentity { obj, arrow } => {
                write!(f, "identity of object {obj} is not two-sided against {arrow}")
            }
            NotAssociative { f: a, g, h } => write!(f, "composition not associative at ({a}, {g}, {h})"),
            NonInvertible { arrow } => write!(f, "non-invertible endomorphism {arrow}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParcelError {
    #[error("invalid parcel:\n{0}")]
    Invalid(Report<ParcelIssue>),
    #[error("group spec: {0}")]
    Spec(String),
    #[error("components: {0}")]
    Components(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} is not an endomorphism")]
    NotEndomorphism(Arrow),
    #[error("{0} and {1} are not composable")]
    NotComposable(Arrow, Arrow),
}

/// A finite category with objects `1, 2, 3` and no arrows from a larger
/// object to a smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parcel {
    sizes: HomSizes,
    /// `tables[i][j][k][a * size(j, k) + b]` is the index of `a ∘ b`.
    tables: [[[Vec<usize>; 3]; 3]; 3],
    identities: [usize; 3],
    labels: Option<ParcelLabels>,
}

impl Parcel {
    /// Assembles a parcel from raw tables without checking anything.
    /// `compose` lists the table of each chain `(i, j, k)` (object indices).
    pub fn from_raw(
        sizes: HomSizes,
        compose: Vec<((usize, usize, usize), Vec<usize>)>,
        identities: [usize; 3],
    ) -> Self {
        let mut tables: [[[Vec<usize>; 3]; 3]; 3] = Default::default();
        for ((i, j, k), table) in compose {
            tables[i][j][k] = table;
        }
        Parcel { sizes, tables, identities, labels: None }
    }

    /// [`Parcel::from_raw`] followed by [`validate_parcel`].
    pub fn new(
        sizes: HomSizes,
        compose: Vec<((usize, usize, usize), Vec<usize>)>,
        identities: [usize; 3],
    ) -> Result<Self, ParcelError> {
        Self::from_raw(sizes, compose, identities).validated()
    }

    pub fn validated(self) -> Result<Self, ParcelError> {
        let report = validate_parcel(&self);
        if report.is_empty() {
            Ok(self)
        } else {
            Err(ParcelError::Invalid(report))
        }
    }

    /// The one-point category smeared over three objects.
    pub fn trivial() -> Self {
        let spec = GroupParcelSpec::full(FiniteGroup::trivial());
        from_group_spec(&spec).expect("trivial parcel")
    }

    pub fn with_labels(mut self, labels: ParcelLabels) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn hom_sizes(&self) -> HomSizes {
        self.sizes
    }

    pub fn size(&self, i: Stratum, j: Stratum) -> usize {
        self.sizes.get(i.index(), j.index())
    }

    pub fn table(&self, i: usize, j: usize, k: usize) -> &[usize] {
        &self.tables[i][j][k]
    }

    pub fn identities(&self) -> [usize; 3] {
        self.identities
    }

    pub fn labels(&self) -> Option<&ParcelLabels> {
        self.labels.as_ref()
    }

    /// Composition on object indices; no checks beyond slice indexing.
    #[inline]
    pub fn compose_idx(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> usize {
        self.tables[i][j][k][a * self.sizes.0[j][k] + b]
    }

    pub fn try_compose(&self, f: Arrow, g: Arrow) -> Result<Arrow, ParcelError> {
        if f.tgt != g.src {
            return Err(ParcelError::NotComposable(f, g));
        }
        let (i, j, k) = (f.src.index(), f.tgt.index(), g.tgt.index());
        Ok(Arrow::new(f.src, g.tgt, self.compose_idx(i, j, k, f.idx, g.idx)))
    }

    /// `f` then `g`. Panics if not composable.
    pub fn compose(&self, f: Arrow, g: Arrow) -> Arrow {
        self.try_compose(f, g).expect("arrows are not composable")
    }

    pub fn identity(&self, obj: Stratum) -> Arrow {
        Arrow::new(obj, obj, self.identities[obj.index()])
    }

    pub fn arrows(&self, src: Stratum, tgt: Stratum) -> impl Iterator<Item = Arrow> {
        (0..self.size(src, tgt)).map(move |idx| Arrow::new(src, tgt, idx))
    }

    /// Two-sided inverse of an endomorphism.
    pub fn inverse(&self, g: Arrow) -> Result<Arrow, ParcelError> {
        if !g.is_endomorphism() {
            return Err(ParcelError::NotEndomorphism(g));
        }
        let i = g.src.index();
        let e = self.identities[i];
        (0..self.sizes.get(i, i))
            .find(|&h| self.compose_idx(i, i, i, g.idx, h) == e && self.compose_idx(i, i, i, h, g.idx) == e)
            .map(|h| Arrow::new(g.src, g.src, h))
            .ok_or(ParcelError::Invalid({
                let mut r = Report::new();
                r.push(ParcelIssue::NonInvertible { arrow: g });
                r
            }))
    }

    /// Ambient group element of an arrow, for group-built parcels.
    pub fn element(&self, a: Arrow) -> Option<usize> {
        self.labels.as_ref().map(|l| l.elements[a.src.index()][a.tgt.index()][a.idx])
    }
}

/// Every violated parcel axiom; empty iff the tables define a category over
/// `1 < 2 < 3` whose endomorphism monoids are nonempty groups.
pub fn validate_parcel(p: &Parcel) -> Report<ParcelIssue> {
    let mut report = Report::new();
    let n = |i: usize, j: usize| p.sizes.get(i, j);
    let obj = |i: usize| Stratum::ALL[i];
    for i in 0..3 {
        if n(i, i) == 0 {
            report.push(ParcelIssue::EmptyGroup { obj: obj(i) });
        } else if p.identities[i] >= n(i, i) {
            report.push(ParcelIssue::IdentityOutOfRange { obj: obj(i) });
        }
    }
    for (i, j, k) in CHAINS {
        let chain = (obj(i), obj(j), obj(k));
        let table = &p.tables[i][j][k];
        let expected = n(i, j) * n(j, k);
        if table.len() != expected {
            report.push(ParcelIssue::TableShape { chain, expected, found: table.len() });
            continue;
        }
        for a in 0..n(i, j) {
            for b in 0..n(j, k) {
                if table[a * n(j, k) + b] >= n(i, k) {
                    report.push(ParcelIssue::EntryOutOfRange { chain, a, b });
                }
            }
        }
    }
    if !report.is_empty() {
        return report;
    }

    for i in 0..3 {
        let e = p.identities[i];
        for j in i..3 {
            for a in 0..n(i, j) {
                if p.compose_idx(i, i, j, e, a) != a {
                    report.push(ParcelIssue::NotIdentity { obj: obj(i), arrow: Arrow::new(obj(i), obj(j), a) });
                }
            }
        }
        for h in 0..=i {
            for a in 0..n(h, i) {
                if p.compose_idx(h, i, i, a, e) != a {
                    report.push(ParcelIssue::NotIdentity { obj: obj(i), arrow: Arrow::new(obj(h), obj(i), a) });
                }
            }
        }
    }
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                for l in k..3 {
                    for a in 0..n(i, j) {
                        for b in 0..n(j, k) {
                            let ab = p.compose_idx(i, j, k, a, b);
                            for c in 0..n(k, l) {
                                let left = p.compose_idx(i, k, l, ab, c);
                                let right = p.compose_idx(i, j, l, a, p.compose_idx(j, k, l, b, c));
                                if left != right {
                                    report.push(ParcelIssue::NotAssociative {
                                        f: Arrow::new(obj(i), obj(j), a),
                                        g: Arrow::new(obj(j), obj(k), b),
                                        h: Arrow::new(obj(k), obj(l), c),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for i in 0..3 {
        for g in 0..n(i, i) {
            let arrow = Arrow::new(obj(i), obj(i), g);
            if p.inverse(arrow).is_err() {
                report.push(ParcelIssue::NonInvertible { arrow });
            }
        }
    }
    report
}

/// A parcel inside an ambient group: subgroups `G₁, G₂, G₃` and subsets
/// `X₁₂, X₂₃` closed under the relevant one-sided multiplications. `X₁₃`
/// defaults to the product set `X₁₂·X₂₃`; an explicit `X₁₃` must contain it
/// and be closed under left `G₁` and right `G₃` multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupParcelSpec {
    pub group: FiniteGroup,
    pub g: [Vec<usize>; 3],
    pub x12: Vec<usize>,
    pub x23: Vec<usize>,
    pub x13: Option<Vec<usize>>,
}

impl GroupParcelSpec {
    /// Every hom-set equal to the whole group.
    pub fn full(group: FiniteGroup) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        GroupParcelSpec { group, g: [all.clone(), all.clone(), all.clone()], x12: all.clone(), x23: all, x13: None }
    }
}

fn sorted_set(group: &FiniteGroup, name: &str, xs: &[usize]) -> Result<Vec<usize>, ParcelError> {
    if let Some(x) = xs.iter().find(|&&x| x >= group.order()) {
        return Err(ParcelError::Spec(format!("{name} contains {x}, not an element of G")));
    }
    let set: BTreeSet<usize> = xs.iter().copied().collect();
    Ok(set.into_iter().collect())
}

fn check_closed(
    group: &FiniteGroup,
    name: &str,
    set: &[usize],
    left: (&str, &[usize]),
    right: (&str, &[usize]),
) -> Result<(), ParcelError> {
    for &x in set {
        for &g in left.1 {
            let y = group.mul(g, x);
            if set.binary_search(&y).is_err() {
                return Err(ParcelError::Spec(format!(
                    "{g}·{x} = {y} escapes {name} (left multiplication by {})",
                    left.0
                )));
            }
        }
        for &h in right.1 {
            let y = group.mul(x, h);
            if set.binary_search(&y).is_err() {
                return Err(ParcelError::Spec(format!(
                    "{x}·{h} = {y} escapes {name} (right multiplication by {})",
                    right.0
                )));
            }
        }
    }
    Ok(())
}

/// The parcel of a [`GroupParcelSpec`]: hom-sets are the given subsets,
/// composition is the group law, identities are the group identity.
pub fn from_group_spec(spec: &GroupParcelSpec) -> Result<Parcel, ParcelError> {
    let group = &spec.group;
    let mut g: [Vec<usize>; 3] = Default::default();
    for i in 0..3 {
        let name = format!("G{}", i + 1);
        g[i] = sorted_set(group, &name, &spec.g[i])?;
        if !group.is_subgroup(&g[i]) {
            return Err(ParcelError::Spec(format!("{name} is not a subgroup")));
        }
    }
    let x12 = sorted_set(group, "X12", &spec.x12)?;
    let x23 = sorted_set(group, "X23", &spec.x23)?;
    check_closed(group, "X12", &x12, ("G1", &g[0]), ("G2", &g[1]))?;
    check_closed(group, "X23", &x23, ("G2", &g[1]), ("G3", &g[2]))?;
    let product = group.product_set(&x12, &x23);
    let x13 = match &spec.x13 {
        None => product,
        Some(given) => {
            let x13 = sorted_set(group, "X13", given)?;
            check_closed(group, "X13", &x13, ("G1", &g[0]), ("G3", &g[2]))?;
            if let Some(p) = product.iter().find(|p| x13.binary_search(p).is_err()) {
                return Err(ParcelError::Spec(format!("product {p} of X12·X23 escapes X13")));
            }
            x13
        }
    };

    let elements: [[Vec<usize>; 3]; 3] =
        [[g[0].clone(), x12, x13], [Vec::new(), g[1].clone(), x23], [Vec::new(), Vec::new(), g[2].clone()]];
    let sizes = HomSizes(elements.clone().map(|row| row.map(|v| v.len())));
    let mut compose = Vec::with_capacity(10);
    for (i, j, k) in CHAINS {
        let (left, right, target) = (&elements[i][j], &elements[j][k], &elements[i][k]);
        let mut table = Vec::with_capacity(left.len() * right.len());
        for &a in left {
            for &b in right {
                let c = group.mul(a, b);
                table.push(target.binary_search(&c).expect("closure checked above"));
            }
        }
        compose.push(((i, j, k), table));
    }
    let id = group.identity();
    let identities = [0, 1, 2].map(|i| elements[i][i].binary_search(&id).expect("subgroup contains identity"));
    let labels = ParcelLabels { group: group.clone(), elements };
    Parcel::new(sizes, compose, identities).map(|p| p.with_labels(labels))
}

/// Groups, bisets and a composition map `φ: X₁₂ × X₂₃ → X₁₃` from which a
/// general parcel is assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParcelComponents {
    pub g: [FiniteGroup; 3],
    pub x12: Biset,
    pub x23: Biset,
    pub x13: Biset,
    /// `phi[x][y]`, required constant on `(x·g, y) ~ (x, g·y)` and
    /// biequivariant.
    pub phi: Vec<Vec<usize>>,
}

impl ParcelComponents {
    /// `X₁₃ = X₁₂ ×_{G₂} X₂₃` with `φ` the quotient map.
    pub fn universal(g: [FiniteGroup; 3], x12: Biset, x23: Biset) -> Self {
        let (x13, phi) = balanced_product(&x12, &x23, &g[0], &g[1], &g[2]);
        ParcelComponents { g, x12, x23, x13, phi }
    }
}

/// Assembles the parcel of [`ParcelComponents`] after checking the actions,
/// that `φ` is well defined on balanced classes and biequivariant; the
/// result is then validated exhaustively.
pub fn from_components(c: &ParcelComponents) -> Result<Parcel, ParcelError> {
    let [g1, g2, g3] = &c.g;
    c.x12.check(g1, g2)?;
    c.x23.check(g2, g3)?;
    c.x13.check(g1, g3)?;
    let bad = |m: String| Err(ParcelError::Components(m));
    if c.phi.len() != c.x12.size
        || c.phi.iter().any(|row| row.len() != c.x23.size || row.iter().any(|&z| z >= c.x13.size))
    {
        return bad("phi table has the wrong shape".into());
    }
    for x in 0..c.x12.size {
        for y in 0..c.x23.size {
            for k in 0..g2.order() {
                if c.phi[c.x12.right[x][k]][y] != c.phi[x][c.x23.left[k][y]] {
                    return bad(format!("phi is not constant on the class of ({x}, {y}) (middle element {k})"));
                }
            }
            for a in 0..g1.order() {
                if c.phi[c.x12.left[a][x]][y] != c.x13.left[a][c.phi[x][y]] {
                    return bad(format!("phi is not left equivariant at ({a}, {x}, {y})"));
                }
            }
            for b in 0..g3.order() {
                if c.phi[x][c.x23.right[y][b]] != c.x13.right[c.phi[x][y]][b] {
                    return bad(format!("phi is not right equivariant at ({x}, {y}, {b})"));
                }
            }
        }
    }

    let sizes = HomSizes::new(g1.order(), g2.order(), g3.order(), c.x12.size, c.x23.size, c.x13.size);
    let group_table = |g: &FiniteGroup| -> Vec<usize> {
        (0..g.order()).flat_map(|a| (0..g.order()).map(move |b| g.mul(a, b))).collect()
    };
    let left_table = |x: &Biset, g: &FiniteGroup| -> Vec<usize> {
        (0..g.order()).flat_map(|a| (0..x.size).map(move |y| x.left[a][y])).collect()
    };
    let right_table = |x: &Biset, g: &FiniteGroup| -> Vec<usize> {
        (0..x.size).flat_map(|y| (0..g.order()).map(move |b| x.right[y][b])).collect()
    };
    let compose = vec![
        ((0, 0, 0), group_table(g1)),
        ((0, 0, 1), left_table(&c.x12, g1)),
        ((0, 0, 2), left_table(&c.x13, g1)),
        ((0, 1, 1), right_table(&c.x12, g2)),
        ((0, 1, 2), c.phi.iter().flatten().copied().collect()),
        ((0, 2, 2), right_table(&c.x13, g3)),
        ((1, 1, 1), group_table(g2)),
        ((1, 1, 2), left_table(&c.x23, g2)),
        ((1, 2, 2), right_table(&c.x23, g3)),
        ((2, 2, 2), group_table(g3)),
    ];
    Parcel::new(sizes, compose, [g1.identity(), g2.identity(), g3.identity()])
}
