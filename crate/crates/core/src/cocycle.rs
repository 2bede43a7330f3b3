//! Partial 3-cocycles on a parcel, full category 3-cocycles, and group
//! 3-cocycles.
//!
//! Values are roots of unity `ζ_N^e` stored as exponents `e mod N`. Chains
//! are written with object indices `0, 1, 2` for the objects `1, 2, 3`.

use std::fmt;

use thiserror::Error;

use crate::cyclotomic::CycValue;
use crate::group::FiniteGroup;
use crate::parcel::{Arrow, HomSizes, Parcel};
use crate::report::Report;
use crate::stratum::Stratum;

/// Chains `(i, j, k)` of the partial cocycle domain: arrows `i → j → k → 3`
/// with `k ≠ 1`.
pub const PARTIAL_CHAINS: [(usize, usize, usize); 9] =
    [(0, 0, 1), (0, 1, 1), (1, 1, 1), (0, 0, 2), (0, 1, 2), (0, 2, 2), (1, 1, 2), (1, 2, 2), (2, 2, 2)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("cocycle order must be positive")]
    ZeroOrder,
    #[error("cocycle hom sizes {cocycle:?} do not match parcel hom sizes {parcel:?}")]
    IncompatibleParcel { cocycle: Box<HomSizes>, parcel: Box<HomSizes> },
    #[error("chain {0:?} is outside the partial cocycle domain")]
    OutsideDomain((usize, usize, usize)),
    #[error("arguments {args:?} out of range for chain {chain:?}")]
    ArgumentOutOfRange { chain: (usize, usize, usize), args: [usize; 3] },
    #[error("duplicate entry for chain {chain:?} arguments {args:?}")]
    DuplicateEntry { chain: (usize, usize, usize), args: [usize; 3] },
    #[error("parcel has no ambient group labels")]
    MissingLabels,
    #[error("group cocycle is for a group of order {cocycle}, parcel labels use order {group}")]
    GroupMismatch { cocycle: usize, group: usize },
    #[error("cocycle identity fails:\n{0}")]
    NotACocycle(Report<CocycleIssue>),
}

fn obj(i: usize) -> Stratum {
    Stratum::ALL[i]
}

/// A violated cocycle equation with its witnessing arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleIssue {
    Condition1 { f: Arrow, g: Arrow, h: Arrow, k: Arrow },
    Condition2 { a: Arrow, b: Arrow, c: Arrow, d: Arrow, e: Arrow },
    Condition3 { a: Arrow, b: Arrow, c: Arrow, d: Arrow, e: Arrow, f: Arrow, g: Arrow },
    FullIdentity { f: Arrow, g: Arrow, h: Arrow, k: Arrow },
    GroupIdentity { a: usize, b: usize, c: usize, d: usize },
}

impl fmt::Display for CocycleIssue {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CocycleIssue::*;
        match self {
            Condition1 { f, g, h, k } => write!(fm, "condition 1 fails at ({f}, {g}, {h}, {k})"),
            Condition2 { a, b, c, d, e } => {
                write!(fm, "condition 2 fails at ({a}, {b}, {c}) with d = {d}, e = {e}")
            }
            Condition3 { a, b, c, d, e, f, g } => {
                write!(fm, "condition 3 fails at ({a}, {b}, {c}, {d}) with e = {e}, f = {f}, g = {g}")
            }
            FullIdentity { f, g, h, k } => write!(fm, "cocycle identity fails at ({f}, {g}, {h}, {k})"),
            GroupIdentity { a, b, c, d } => {
                write!(fm, "group cocycle identity fails at ({a}, {b}, {c}, {d})")
            }
        }
    }
}

/// `α` on composable triples `(f, g, h)` with `t(h) = 3` and `s(h) ≠ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCocycle {
    order: u32,
    sizes: HomSizes,
    /// `tables[i][j][k][(f * |X_jk| + g) * |X_k3| + h]`
    tables: [[[Vec<u32>; 3]; 3]; 3],
}

impl PartialCocycle {
    /// `α` given by `exponent(i, j, k, f, g, h)` on every admissible triple.
    pub fn from_fn(
        sizes: HomSizes,
        order: u32,
        mut exponent: impl FnMut(usize, usize, usize, usize, usize, usize) -> i64,
    ) -> Result<Self, CocycleError> {
        if order == 0 {
            return Err(CocycleError::ZeroOrder);
        }
        let mut tables: [[[Vec<u32>; 3]; 3]; 3] = Default::default();
        for (i, j, k) in PARTIAL_CHAINS {
            let (n1, n2, n3) = (sizes.get(i, j), sizes.get(j, k), sizes.get(k, 2));
            let mut table = Vec::with_capacity(n1 * n2 * n3);
            for f in 0..n1 {
                for g in 0..n2 {
                    for h in 0..n3 {
                        table.push(exponent(i, j, k, f, g, h).rem_euclid(order as i64) as u32);
                    }
                }
            }
            tables[i][j][k] = table;
        }
        Ok(PartialCocycle { order, sizes, tables })
    }

    /// `α ≡ 1`.
    pub fn trivial(parcel: &Parcel, order: u32) -> Self {
        Self::from_fn(parcel.hom_sizes(), order, |_, _, _, _, _, _| 0).expect("positive order")
    }

    /// Builds from explicit entries `(chain, args, exponent)`; admissible
    /// triples without an entry get exponent 0 and are returned alongside.
    #[allow(clippy::type_complexity)]
    pub fn from_entries(
        sizes: HomSizes,
        order: u32,
        entries: &[((usize, usize, usize), [usize; 3], i64)],
    ) -> Result<(Self, Vec<((usize, usize, usize), [usize; 3])>), CocycleError> {
        let mut alpha = Self::from_fn(sizes, order, |_, _, _, _, _, _| 0)?;
        let mut seen: [[[Vec<bool>; 3]; 3]; 3] = Default::default();
        for (i, j, k) in PARTIAL_CHAINS {
            seen[i][j][k] = vec![false; alpha.tables[i][j][k].len()];
        }
        for &(chain, args, exponent) in entries {
            let (i, j, k) = chain;
            if !PARTIAL_CHAINS.contains(&chain) {
                return Err(CocycleError::OutsideDomain(chain));
            }
            if args[0] >= sizes.get(i, j) || args[1] >= sizes.get(j, k) || args[2] >= sizes.get(k, 2) {
                return Err(CocycleError::ArgumentOutOfRange { chain, args });
            }
            let at = alpha.offset(j, k, args[0], args[1], args[2]);
            if std::mem::replace(&mut seen[i][j][k][at], true) {
                return Err(CocycleError::DuplicateEntry { chain, args });
            }
            alpha.tables[i][j][k][at] = exponent.rem_euclid(order as i64) as u32;
        }
        let mut missing = Vec::new();
        for (i, j, k) in PARTIAL_CHAINS {
            let (n2, n3) = (sizes.get(j, k), sizes.get(k, 2));
            for (at, present) in seen[i][j][k].iter().enumerate() {
                if !present {
                    missing.push(((i, j, k), [at / (n2 * n3), (at / n3) % n2, at % n3]));
                }
            }
        }
        Ok((alpha, missing))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn hom_sizes(&self) -> HomSizes {
        self.sizes
    }

    pub fn check_parcel(&self, parcel: &Parcel) -> Result<(), CocycleError> {
        if self.sizes != parcel.hom_sizes() {
            return Err(CocycleError::IncompatibleParcel {
                cocycle: Box::new(self.sizes),
                parcel: Box::new(parcel.hom_sizes()),
            });
        }
        Ok(())
    }

    #[inline]
    fn offset(&self, j: usize, k: usize, f: usize, g: usize, h: usize) -> usize {
        (f * self.sizes.get(j, k) + g) * self.sizes.get(k, 2) + h
    }

    /// Exponent on object indices. Panics outside the domain.
    #[inline]
    pub fn exponent_idx(&self, i: usize, j: usize, k: usize, f: usize, g: usize, h: usize) -> u32 {
        self.tables[i][j][k][self.offset(j, k, f, g, h)]
    }

    pub fn table(&self, i: usize, j: usize, k: usize) -> &[u32] {
        &self.tables[i][j][k]
    }

    pub fn is_admissible(f: Arrow, g: Arrow, h: Arrow) -> bool {
        f.tgt == g.src && g.tgt == h.src && h.tgt == Stratum::Bulk && h.src != Stratum::Knot
    }

    pub fn get(&self, f: Arrow, g: Arrow, h: Arrow) -> Option<CycValue> {
        if !Self::is_admissible(f, g, h) {
            return None;
        }
        let (i, j, k) = (f.src.index(), g.src.index(), h.src.index());
        Some(CycValue::new(self.order, self.exponent_idx(i, j, k, f.idx, g.idx, h.idx) as i64))
    }

    /// Overwrites one exponent (reduced mod `N`). Panics outside the domain.
    pub fn set(&mut self, f: Arrow, g: Arrow, h: Arrow, exponent: i64) {
        assert!(Self::is_admissible(f, g, h), "triple outside the partial cocycle domain");
        let (i, j, k) = (f.src.index(), g.src.index(), h.src.index());
        let at = self.offset(j, k, f.idx, g.idx, h.idx);
        self.tables[i][j][k][at] = exponent.rem_euclid(self.order as i64) as u32;
    }

    pub fn domain_size(&self) -> usize {
        PARTIAL_CHAINS.iter().map(|&(i, j, k)| self.tables[i][j][k].len()).sum()
    }

    /// Every entry as `(f, g, h, exponent)`, chain by chain.
    pub fn entries(&self) -> impl Iterator<Item = (Arrow, Arrow, Arrow, u32)> + '_ {
        PARTIAL_CHAINS.iter().flat_map(move |&(i, j, k)| {
            let (n2, n3) = (self.sizes.get(j, k), self.sizes.get(k, 2));
            self.tables[i][j][k].iter().enumerate().map(move |(at, &e)| {
                (
                    Arrow::new(obj(i), obj(j), at / (n2 * n3)),
                    Arrow::new(obj(j), obj(k), (at / n3) % n2),
                    Arrow::new(obj(k), Stratum::Bulk, at % n3),
                    e,
                )
            })
        })
    }

    /// All three defining conditions.
    pub fn check(&self, p: &Parcel) -> Result<Report<CocycleIssue>, CocycleError> {
        let mut report = check_condition_1(self, p)?;
        report.extend(check_condition_2(self, p)?);
        report.extend(check_condition_3(self, p)?);
        Ok(report)
    }
}

/// The pentagon-shaped identity on quadruples `i → j → k → 3 → 3` with
/// `k ≠ 1`.
pub fn check_condition_1(alpha: &PartialCocycle, p: &Parcel) -> Result<Report<CocycleIssue>, CocycleError> {
    alpha.check_parcel(p)?;
    let n = |i, j| p.hom_sizes().get(i, j);
    let a = |i, j, k, f, g, h| alpha.exponent_idx(i, j, k, f, g, h) as i64;
    let order = alpha.order as i64;
    let mut report = Report::new();
    for i in 0..3 {
        for j in i..3 {
            for k in j.max(1)..3 {
                for f in 0..n(i, j) {
                    for g in 0..n(j, k) {
                        let fg = p.compose_idx(i, j, k, f, g);
                        for h in 0..n(k, 2) {
                            let gh = p.compose_idx(j, k, 2, g, h);
                            for kk in 0..n(2, 2) {
                                let hk = p.compose_idx(k, 2, 2, h, kk);
                                let total = a(j, k, 2, g, h, kk) - a(i, k, 2, fg, h, kk) + a(i, j, 2, f, gh, kk)
                                    - a(i, j, k, f, g, hk)
                                    + a(i, j, k, f, g, h);
                                if total.rem_euclid(order) != 0 {
                                    report.push(CocycleIssue::Condition1 {
                                        f: Arrow::new(obj(i), obj(j), f),
                                        g: Arrow::new(obj(j), obj(k), g),
                                        h: Arrow::new(obj(k), obj(2), h),
                                        k: Arrow::new(obj(2), obj(2), kk),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// For `a: i → j`, `b: j → 2`, `c ∈ G₂` the four-factor product is the
/// same for every `d: 2 → 3`.
pub fn check_condition_2(alpha: &PartialCocycle, p: &Parcel) -> Result<Report<CocycleIssue>, CocycleError> {
    alpha.check_parcel(p)?;
    let n = |i, j| p.hom_sizes().get(i, j);
    let al = |i, j, k, f, g, h| alpha.exponent_idx(i, j, k, f, g, h) as i64;
    let order = alpha.order as i64;
    let mut report = Report::new();
    for i in 0..2 {
        for j in i..2 {
            for a in 0..n(i, j) {
                for b in 0..n(j, 1) {
                    let ab = p.compose_idx(i, j, 1, a, b);
                    for c in 0..n(1, 1) {
                        let bc = p.compose_idx(j, 1, 1, b, c);
                        let side = |d: usize| {
                            let cd = p.compose_idx(1, 1, 2, c, d);
                            (al(i, j, 1, a, bc, d) + al(j, 1, 1, b, c, d)
                                - al(i, j, 1, a, b, cd)
                                - al(i, 1, 1, ab, c, d))
                            .rem_euclid(order)
                        };
                        if n(1, 2) == 0 {
                            continue;
                        }
                        let reference = side(0);
                        for e in 1..n(1, 2) {
                            if side(e) != reference {
                                report.push(CocycleIssue::Condition2 {
                                    a: Arrow::new(obj(i), obj(j), a),
                                    b: Arrow::new(obj(j), obj(1), b),
                                    c: Arrow::new(obj(1), obj(1), c),
                                    d: Arrow::new(obj(1), obj(2), 0),
                                    e: Arrow::new(obj(1), obj(2), e),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The 3-6 move identity for `a ∈ G₁`, `b: 1 → 2`, `c: 2 → 3`, `d ∈ G₃`,
/// every `e` with `be = bcd` and every factorization `a = fg`.
pub fn check_condition_3(alpha: &PartialCocycle, p: &Parcel) -> Result<Report<CocycleIssue>, CocycleError> {
    alpha.check_parcel(p)?;
    let n = |i, j| p.hom_sizes().get(i, j);
    let al = |i, j, k, f, g, h| alpha.exponent_idx(i, j, k, f, g, h) as i64;
    let order = alpha.order as i64;
    let mut report = Report::new();
    let g1 = n(0, 0);
    for a in 0..g1 {
        let factorizations: Vec<(usize, usize)> = (0..g1)
            .flat_map(|f| (0..g1).map(move |g| (f, g)))
            .filter(|&(f, g)| p.compose_idx(0, 0, 0, f, g) == a)
            .collect();
        for b in 0..n(0, 1) {
            for c in 0..n(1, 2) {
                let bc = p.compose_idx(0, 1, 2, b, c);
                for d in 0..n(2, 2) {
                    let bcd = p.compose_idx(0, 2, 2, bc, d);
                    for e in (0..n(1, 2)).filter(|&e| p.compose_idx(0, 1, 2, b, e) == bcd) {
                        let lhs = al(0, 0, 1, a, b, c) - al(0, 0, 1, a, b, e) + al(0, 0, 2, a, bc, d);
                        for &(f, g) in &factorizations {
                            let gb = p.compose_idx(0, 0, 1, g, b);
                            let gbc = p.compose_idx(0, 1, 2, gb, c);
                            let rhs = al(0, 0, 1, f, gb, c) - al(0, 0, 1, f, gb, e)
                                + al(0, 0, 2, f, gbc, d)
                                + al(0, 0, 1, g, b, c)
                                - al(0, 0, 1, g, b, e)
                                + al(0, 0, 2, g, bc, d);
                            if (lhs - rhs).rem_euclid(order) != 0 {
                                report.push(CocycleIssue::Condition3 {
                                    a: Arrow::new(obj(0), obj(0), a),
                                    b: Arrow::new(obj(0), obj(1), b),
                                    c: Arrow::new(obj(1), obj(2), c),
                                    d: Arrow::new(obj(2), obj(2), d),
                                    e: Arrow::new(obj(1), obj(2), e),
                                    f: Arrow::new(obj(0), obj(0), f),
                                    g: Arrow::new(obj(0), obj(0), g),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `β` on every composable triple of a parcel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCocycle {
    order: u32,
    sizes: HomSizes,
    /// `tables[i][j][k][l][(f * |X_jk| + g) * |X_kl| + h]`
    tables: [[[[Vec<u32>; 3]; 3]; 3]; 3],
}

impl FullCocycle {
    pub fn from_fn(
        sizes: HomSizes,
        order: u32,
        mut exponent: impl FnMut([usize; 4], usize, usize, usize) -> i64,
    ) -> Result<Self, CocycleError> {
        if order == 0 {
            return Err(CocycleError::ZeroOrder);
        }
        let mut tables: [[[[Vec<u32>; 3]; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    for l in k..3 {
                        let (n1, n2, n3) = (sizes.get(i, j), sizes.get(j, k), sizes.get(k, l));
                        let mut table = Vec::with_capacity(n1 * n2 * n3);
                        for f in 0..n1 {
                            for g in 0..n2 {
                                for h in 0..n3 {
                                    table.push(exponent([i, j, k, l], f, g, h).rem_euclid(order as i64) as u32);
                                }
                            }
                        }
                        tables[i][j][k][l] = table;
                    }
                }
            }
        }
        Ok(FullCocycle { order, sizes, tables })
    }

    pub fn trivial(parcel: &Parcel, order: u32) -> Self {
        Self::from_fn(parcel.hom_sizes(), order, |_, _, _, _| 0).expect("positive order")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn exponent_idx(&self, c: [usize; 4], f: usize, g: usize, h: usize) -> u32 {
        let [i, j, k, l] = c;
        self.tables[i][j][k][l][(f * self.sizes.get(j, k) + g) * self.sizes.get(k, l) + h]
    }

    pub fn domain_size(&self) -> usize {
        let mut total = 0;
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    for l in k..3 {
                        total += self.tables[i][j][k][l].len();
                    }
                }
            }
        }
        total
    }

    pub fn is_nontrivial(&self) -> bool {
        self.tables.iter().flatten().flatten().flatten().flatten().any(|&e| e != 0)
    }

    /// The 3-cocycle identity on every composable quadruple.
    pub fn check(&self, p: &Parcel) -> Result<Report<CocycleIssue>, CocycleError> {
        if self.sizes != p.hom_sizes() {
            return Err(CocycleError::IncompatibleParcel {
                cocycle: Box::new(self.sizes),
                parcel: Box::new(p.hom_sizes()),
            });
        }
        let n = |i, j| p.hom_sizes().get(i, j);
        let b = |c, f, g, h| self.exponent_idx(c, f, g, h) as i64;
        let order = self.order as i64;
        let mut report = Report::new();
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    for l in k..3 {
                        for m in l..3 {
                            for f in 0..n(i, j) {
                                for g in 0..n(j, k) {
                                    let fg = p.compose_idx(i, j, k, f, g);
                                    for h in 0..n(k, l) {
                                        let gh = p.compose_idx(j, k, l, g, h);
                                        for kk in 0..n(l, m) {
                                            let hk = p.compose_idx(k, l, m, h, kk);
                                            let total = b([j, k, l, m], g, h, kk) - b([i, k, l, m], fg, h, kk)
                                                + b([i, j, l, m], f, gh, kk)
                                                - b([i, j, k, m], f, g, hk)
                                                + b([i, j, k, l], f, g, h);
                                            if total.rem_euclid(order) != 0 {
                                                report.push(CocycleIssue::FullIdentity {
                                                    f: Arrow::new(obj(i), obj(j), f),
                                                    g: Arrow::new(obj(j), obj(k), g),
                                                    h: Arrow::new(obj(k), obj(l), h),
                                                    k: Arrow::new(obj(l), obj(m), kk),
                                                });
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}

/// Restriction of a full cocycle to the partial domain. Fails if `β` does
/// not satisfy the cocycle identity, or (which would contradict the
/// algebra) if the restriction fails a partial condition.
pub fn restrict(beta: &FullCocycle, p: &Parcel) -> Result<PartialCocycle, CocycleError> {
    let report = beta.check(p)?;
    if !report.is_empty() {
        return Err(CocycleError::NotACocycle(report));
    }
    let alpha = PartialCocycle::from_fn(beta.sizes, beta.order, |i, j, k, f, g, h| {
        beta.exponent_idx([i, j, k, 2], f, g, h) as i64
    })?;
    let report = alpha.check(p)?;
    if !report.is_empty() {
        return Err(CocycleError::NotACocycle(report));
    }
    Ok(alpha)
}

/// A 3-cocycle on a finite group with values `ζ_N^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCocycle {
    order: u32,
    group_order: usize,
    /// `table[(a * n + b) * n + c]`
    table: Vec<u32>,
}

impl GroupCocycle {
    pub fn from_fn(group_order: usize, order: u32, mut exponent: impl FnMut(usize, usize, usize) -> i64) -> Self {
        assert!(order >= 1);
        let n = group_order;
        let mut table = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table.push(exponent(a, b, c).rem_euclid(order as i64) as u32);
                }
            }
        }
        GroupCocycle { order, group_order, table }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn exponent(&self, a: usize, b: usize, c: usize) -> u32 {
        let n = self.group_order;
        self.table[(a * n + b) * n + c]
    }

    /// `α(b,c,d) α(ab,c,d)⁻¹ α(a,bc,d) α(a,b,cd)⁻¹ α(a,b,c) = 1` everywhere.
    pub fn check(&self, g: &FiniteGroup) -> Report<CocycleIssue> {
        let n = g.order();
        let mut report = Report::new();
        if n != self.group_order {
            report.push(CocycleIssue::GroupIdentity { a: n, b: 0, c: 0, d: 0 });
            return report;
        }
        let e = |a, b, c| self.exponent(a, b, c) as i64;
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    let bc = g.mul(b, c);
                    for d in 0..n {
                        let total = e(b, c, d) - e(ab, c, d) + e(a, bc, d) - e(a, b, g.mul(c, d)) + e(a, b, c);
                        if total.rem_euclid(self.order as i64) != 0 {
                            report.push(CocycleIssue::GroupIdentity { a, b, c, d });
                        }
                    }
                }
            }
        }
        report
    }
}

/// The standard representative `α(a, b, c) = ζ_n^(p·a·⌊(b + c)/n⌋)` on `ℤ/n`.
pub fn standard_cyclic_cocycle(n: usize, p: i64) -> GroupCocycle {
    assert!(n >= 1);
    GroupCocycle::from_fn(n, n as u32, |a, b, c| {
        let carry = i64::from(b + c >= n);
        p * a as i64 * carry
    })
}

/// `β(f, g, h) = α_G(f, g, h)` through the ambient group labels of a
/// group-built parcel.
pub fn pullback_group_cocycle(p: &Parcel, alpha: &GroupCocycle) -> Result<FullCocycle, CocycleError> {
    let labels = p.labels().ok_or(CocycleError::MissingLabels)?;
    if labels.group.order() != alpha.group_order {
        return Err(CocycleError::GroupMismatch { cocycle: alpha.group_order, group: labels.group.order() });
    }
    let el = &labels.elements;
    FullCocycle::from_fn(p.hom_sizes(), alpha.order, |[i, j, k, l], f, g, h| {
        alpha.exponent(el[i][j][f], el[j][k][g], el[k][l][h]) as i64
    })
}
