//! Finite groups by multiplication table, and finite bisets.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table is not square or has out-of-range entries")]
    Malformed,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("{0}")]
    Biset(String),
}

/// A finite group on `0..order` with `mul(a, b)` read as "a then b".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(GroupError::Malformed);
        }
        let identity =
            (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)).ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv =
                (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity).ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, identity, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with element `k` the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup { table, identity: 0, inverse }
    }

    /// `S_n` on permutations of `0..n` in lexicographic order; the product
    /// `a·b` is "apply `a`, then `b`".
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<usize> = (0..n).map(|x| b[a[x]]).collect();
                        index(&ab)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("symmetric group table")
    }

    /// Dihedral group of order `2n`: `r^k s^e` is element `2k + e`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let decode = |x: usize| (x / 2, x % 2);
        let table = (0..2 * n)
            .map(|a| {
                (0..2 * n)
                    .map(|b| {
                        let ((k1, e1), (k2, e2)) = (decode(a), decode(b));
                        // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1 + e2)
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        2 * (k % n) + (e1 + e2) % 2
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("dihedral group table")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`: element `2u + s` is `(-1)^s`
    /// times unit `u` of `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products as (sign, unit)
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (sign, unit) = UNITS[a / 2][b / 2];
                        2 * unit + (sign + a % 2 + b % 2) % 2
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("quaternion group table")
    }

    /// `G × H` with `(g, h)` encoded as `g·|H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|a| (0..n * m).map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m)).collect())
            .collect();
        Self::from_table(table).expect("direct product table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        !s.is_empty()
            && s.iter().all(|&x| x < self.order())
            && s.contains(&self.identity)
            && s.iter().all(|&a| s.contains(&self.inv(a)) && s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// The whole group and every subgroup generated by at most two elements
    /// (all subgroups, for groups of order at most 8), sorted.
    pub fn small_subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out = BTreeSet::from([(0..n).collect::<Vec<_>>()]);
        for a in 0..n {
            for b in a..n {
                out.insert(self.generated(&[a, b]));
            }
        }
        out.into_iter().collect()
    }

    /// `left · seeds · right`, sorted.
    pub fn double_coset_union(&self, left: &[usize], seeds: &[usize], right: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::new();
        for &x in seeds {
            for &g in left {
                for &h in right {
                    set.insert(self.mul(self.mul(g, x), h));
                }
            }
        }
        set.into_iter().collect()
    }

    /// `{ab : a ∈ xs, b ∈ ys}`, sorted.
    pub fn product_set(&self, xs: &[usize], ys: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = xs.iter().flat_map(|&a| ys.iter().map(move |&b| self.mul(a, b))).collect();
        set.into_iter().collect()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else { break };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// A finite set with commuting left `G`- and right `H`-actions.
/// `left[g][x]` is `g·x`, `right[x][h]` is `x·h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biset {
    pub size: usize,
    pub left: Vec<Vec<usize>>,
    pub right: Vec<Vec<usize>>,
}

impl Biset {
    /// Checks that both tables are actions and that they commute.
    pub fn check(&self, g: &FiniteGroup, h: &FiniteGroup) -> Result<(), GroupError> {
        let n = self.size;
        let err = |m: String| Err(GroupError::Biset(m));
        if self.left.len() != g.order() || self.left.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return err("left action table has the wrong shape".into());
        }
        if self.right.len() != n || self.right.iter().any(|r| r.len() != h.order() || r.iter().any(|&x| x >= n)) {
            return err("right action table has the wrong shape".into());
        }
        for x in 0..n {
            if self.left[g.identity()][x] != x || self.right[x][h.identity()] != x {
                return err(format!("identity does not act trivially on {x}"));
            }
            for a in 0..g.order() {
                for b in 0..g.order() {
                    if self.left[a][self.left[b][x]] != self.left[g.mul(a, b)][x] {
                        return err(format!("left action fails at ({a}, {b}, {x})"));
                    }
                }
                for c in 0..h.order() {
                    if self.right[self.left[a][x]][c] != self.left[a][self.right[x][c]] {
                        return err(format!("actions do not commute at ({a}, {x}, {c})"));
                    }
                }
            }
            for c in 0..h.order() {
                for d in 0..h.order() {
                    if self.right[self.right[x][c]][d] != self.right[x][h.mul(c, d)] {
                        return err(format!("right action fails at ({x}, {c}, {d})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `G × H` with `g'·(a, b)·h' = (g'a, bh')`, modulo the relation
    /// generated by `(as, b) ~ (a, tb)` for each relator `(s, t)`.
    pub fn product_quotient(g: &FiniteGroup, h: &FiniteGroup, relators: &[(usize, usize)]) -> Biset {
        let m = h.order();
        let pairs = g.order() * m;
        let mut uf = UnionFind::new(pairs);
        for a in 0..g.order() {
            for b in 0..m {
                for &(s, t) in relators {
                    uf.union(g.mul(a, s) * m + b, a * m + h.mul(t, b));
                }
            }
        }
        let (class, size) = uf.classes();
        let mut left = vec![vec![0; size]; g.order()];
        let mut right = vec![vec![0; m]; size];
        for a in 0..g.order() {
            for b in 0..m {
                let x = class[a * m + b];
                for c in 0..g.order() {
                    left[c][x] = class[g.mul(c, a) * m + b];
                }
                for d in 0..m {
                    right[x][d] = class[a * m + h.mul(b, d)];
                }
            }
        }
        Biset { size, left, right }
    }

    /// Disjoint union of two bisets over the same groups.
    pub fn disjoint_union(&self, other: &Biset) -> Biset {
        let shift = self.size;
        let left = self
            .left
            .iter()
            .zip(&other.left)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|x| x + shift)).collect())
            .collect();
        let right = self
            .right
            .iter()
            .cloned()
            .chain(other.right.iter().map(|r| r.iter().map(|x| x + shift).collect()))
            .collect();
        Biset { size: self.size + other.size, left, right }
    }

    pub fn empty(g: &FiniteGroup, _h: &FiniteGroup) -> Biset {
        Biset { size: 0, left: vec![Vec::new(); g.order()], right: Vec::new() }
    }
}

/// `X ×_H Y`: pairs `(x, y)` modulo `(x·k, y) ~ (x, k·y)`, as a biset over
/// the outer groups, together with the class of every pair (`class[x][y]`).
pub fn balanced_product(
    x: &Biset,
    y: &Biset,
    outer_left: &FiniteGroup,
    middle: &FiniteGroup,
    outer_right: &FiniteGroup,
) -> (Biset, Vec<Vec<usize>>) {
    let m = y.size;
    let mut uf = UnionFind::new(x.size * m);
    for a in 0..x.size {
        for b in 0..m {
            for k in 0..middle.order() {
                uf.union(x.right[a][k] * m + b, a * m + y.left[k][b]);
            }
        }
    }
    let (flat, size) = uf.classes();
    let class: Vec<Vec<usize>> = (0..x.size).map(|a| (0..m).map(|b| flat[a * m + b]).collect()).collect();
    let mut left = vec![vec![0; size]; outer_left.order()];
    let mut right = vec![vec![0; outer_right.order()]; size];
    for a in 0..x.size {
        for b in 0..m {
            let c = class[a][b];
            for g in 0..outer_left.order() {
                left[g][c] = class[x.left[g][a]][b];
            }
            for h in 0..outer_right.order() {
                right[c][h] = class[a][y.right[b][h]];
            }
        }
    }
    (Biset { size, left, right }, class)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Class index of every element, numbered by first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[x] = label[r];
        }
        (out, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_groups_are_groups() {
        for (g, n) in [
            (FiniteGroup::cyclic(5), 5),
            (FiniteGroup::symmetric(3), 6),
            (FiniteGroup::symmetric(4), 24),
            (FiniteGroup::dihedral(4), 8),
            (FiniteGroup::quaternion(), 8),
            (FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(4)), 8),
        ] {
            assert_eq!(g.order(), n);
            assert!(FiniteGroup::from_table(g.table().to_vec()).is_ok());
        }
        assert_eq!(FiniteGroup::symmetric(5).order(), 120);
    }

    #[test]
    fn non_groups_are_rejected() {
        assert_eq!(FiniteGroup::from_table(vec![]), Err(GroupError::Empty));
        // {0, 1} with 1·1 = 1 is a monoid without inverse for 1
        assert_eq!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]), Err(GroupError::NoInverse(1)));
        assert_eq!(FiniteGroup::from_table(vec![vec![0, 2]]), Err(GroupError::Malformed));
    }

    #[test]
    fn quaternion_is_not_abelian_and_has_one_involution() {
        let q = FiniteGroup::quaternion();
        let involutions = (0..8).filter(|&a| a != q.identity() && q.mul(a, a) == q.identity()).count();
        assert_eq!(involutions, 1);
        assert_ne!(q.mul(2, 4), q.mul(4, 2));
    }

    #[test]
    fn subgroups_of_s3() {
        let g = FiniteGroup::symmetric(3);
        let subs = g.small_subgroups();
        assert_eq!(subs.len(), 6);
        assert!(subs.iter().all(|s| g.is_subgroup(s)));
        assert!(!g.is_subgroup(&[0, 1, 2]));
    }

    #[test]
    fn balanced_product_of_free_actions() {
        // G₂ = ℤ/2 acting freely on two-element X₁₂ (right) and X₂₃ (left)
        let t = FiniteGroup::trivial();
        let z2 = FiniteGroup::cyclic(2);
        let x12 = Biset::product_quotient(&t, &z2, &[]);
        let x23 = Biset::product_quotient(&z2, &t, &[]);
        x12.check(&t, &z2).unwrap();
        x23.check(&z2, &t).unwrap();
        let (x13, class) = balanced_product(&x12, &x23, &t, &z2, &t);
        assert_eq!(x13.size, 2);
        x13.check(&t, &t).unwrap();
        assert_eq!(class[0][0], class[1][1]);
        assert_ne!(class[0][0], class[0][1]);
    }

    #[test]
    fn product_quotient_is_a_biset() {
        let g = FiniteGroup::symmetric(3);
        let h = FiniteGroup::cyclic(4);
        let x = Biset::product_quotient(&g, &h, &[(1, 2)]);
        x.check(&g, &h).unwrap();
        assert!(x.size < 24);
        let y = x.disjoint_union(&Biset::product_quotient(&g, &h, &[]));
        y.check(&g, &h).unwrap();
        assert_eq!(y.size, x.size + 24);
    }
}
