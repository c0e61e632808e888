//! Finite groups as explicit multiplication tables.
//!
//! Elements are the dense indices `0..n`. The table is the single source of
//! truth: every other structure (inverses, orders, subgroups) is derived
//! from it.

mod construct;
mod iso;

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::Subgroup;

pub use construct::{
    direct_product, direct_product_with_cap, group_from_permutations, quotient, quotient_with_projection,
    semidirect_product, semidirect_product_with_cap, standard_group, standard_group_with_cap, subgroup_as_group,
    subgroup_as_group_with_embedding, GroupSpec, PermutationGenSet,
};
pub use iso::{canonical_table, find_isomorphism, invariants, is_isomorphic, Invariants};

/// Largest group order accepted by default.
pub const DEFAULT_ORDER_CAP: usize = 400;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<u32>,
    label: String,
}

impl Group {
    /// Validates a raw multiplication table (`table[a][b]` is the index of
    /// `a·b`) and builds a group from it. Associativity is checked in full.
    pub fn from_table(rows: &[Vec<usize>], label: impl Into<String>) -> Result<Group> {
        Self::from_table_with_cap(rows, label, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_with_cap(rows: &[Vec<usize>], label: impl Into<String>, cap: usize) -> Result<Group> {
        let n = rows.len();
        if n == 0 {
            return Err(not_a_group("empty table", None));
        }
        if n > cap {
            return Err(Error::OrderCapExceeded { cap, reached: n });
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(not_a_group(format!("row {a} has length {}, expected {n}", row.len()), None));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(not_a_group(format!("entry [{a}][{b}] = {c} out of range"), Some((a, b, c))));
                }
                table.push(c as u32);
            }
        }
        let g = Group::from_raw_unchecked(n, table, label.into())?;
        g.check_associative()?;
        Ok(g)
    }

    /// Builds a group from a flat table that is known to be associative.
    /// Latin-square, identity and inverse checks still run.
    pub(crate) fn from_raw_unchecked(n: usize, table: Vec<u32>, label: String) -> Result<Group> {
        debug_assert_eq!(table.len(), n * n);
        let mut seen = vec![0usize; n];
        for a in 0..n {
            let stamp = a * 2 + 1;
            for b in 0..n {
                let c = table[a * n + b] as usize;
                if seen[c] == stamp {
                    return Err(not_a_group(format!("row {a} repeats element {c}"), Some((a, b, c))));
                }
                seen[c] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..n {
            let stamp = b * 2 + 1;
            for a in 0..n {
                let c = table[a * n + b] as usize;
                if seen[c] == stamp {
                    return Err(not_a_group(format!("column {b} repeats element {c}"), Some((a, b, c))));
                }
                seen[c] = stamp;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] as usize == a && table[a * n + e] as usize == a))
            .ok_or_else(|| not_a_group("no identity element", None))?;
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a * n + b] as usize == identity)
                .ok_or_else(|| not_a_group(format!("element {a} has no inverse"), None))?;
            if table[inv * n + a] as usize != identity {
                return Err(not_a_group(format!("element {a} has no two-sided inverse"), None));
            }
            inverses[a] = inv as u32;
        }
        Ok(Group { order: n, table, identity, inverses, label })
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                let row_ab = &self.table[ab * n..(ab + 1) * n];
                let row_a = &self.table[a * n..(a + 1) * n];
                let row_b = &self.table[b * n..(b + 1) * n];
                for c in 0..n {
                    if row_ab[c] != row_a[row_b[c] as usize] {
                        return Err(not_a_group(format!("associativity fails for ({a}, {b}, {c})"), Some((a, b, c))));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Group {
        Group { order: 1, table: vec![0], identity: 0, inverses: vec![0], label: "1".into() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `a^-1 · b · a`
    #[inline]
    pub fn conj(&self, b: usize, a: usize) -> usize {
        self.mul(self.mul(self.inv(a), b), a)
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Group {
        self.label = label.into();
        self
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn flat_table(&self) -> &[u32] {
        &self.table
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).iter().map(|&x| x as usize).collect()).collect()
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inverses
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().enumerate().all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order).map(|a| self.element_order(a)).collect()
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().into_iter().fold(1, num_integer::lcm)
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::new(self.order)
    }

    /// Subgroup generated by `seeds`, by breadth-first right multiplication.
    pub fn generate(&self, seeds: &[usize]) -> BitSet {
        let mut set = self.empty_set();
        set.insert(self.identity);
        let mut queue = vec![self.identity];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            i += 1;
            for &s in seeds {
                let y = self.mul(x, s);
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Subgroup generated by an existing subgroup `base` (with generators
    /// `base_gens`) together with `extra`. Works coset by coset, so the cost
    /// is proportional to the size of the result.
    pub fn join_with(&self, base: &BitSet, base_gens: &[usize], extra: &[usize]) -> BitSet {
        let base_elems: Vec<usize> = base.iter().collect();
        let mut result = base.clone();
        let mut reps = vec![self.identity];
        let mut i = 0;
        while i < reps.len() {
            let t = reps[i];
            i += 1;
            for &s in base_gens.iter().chain(extra.iter()) {
                let ts = self.mul(t, s);
                if !result.contains(ts) {
                    for &h in &base_elems {
                        result.insert(self.mul(h, ts));
                    }
                    reps.push(ts);
                }
            }
        }
        result
    }

    /// A small generating set chosen greedily from elements of largest order.
    pub fn generators(&self) -> Vec<usize> {
        self.generators_of(&BitSet::full(self.order))
    }

    /// Greedy generating set for the subgroup with members `sub`.
    pub fn generators_of(&self, sub: &BitSet) -> Vec<usize> {
        let orders = self.element_orders();
        let mut elems: Vec<usize> = sub.iter().collect();
        elems.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
        let target = sub.count();
        let mut gens = Vec::new();
        let mut cur = self.generate(&[]);
        for a in elems {
            if cur.count() == target {
                break;
            }
            if !cur.contains(a) {
                cur = self.join_with(&cur, &gens, &[a]);
                gens.push(a);
            }
        }
        gens
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let bits = BitSet::from_indices(
            self.order,
            (0..self.order).filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z))),
        );
        Subgroup::from_bits_unchecked(bits)
    }

    /// Subgroup generated by all commutators `[a, b]` with `a ∈ A`, `b ∈ B`.
    pub fn commutator_subgroup(&self, a: &BitSet, b: &BitSet) -> Subgroup {
        let mut comms = HashSet::new();
        for x in a.iter() {
            for y in b.iter() {
                comms.insert(self.commutator(x, y));
            }
        }
        let mut seeds: Vec<usize> = comms.into_iter().collect();
        seeds.sort_unstable();
        Subgroup::from_bits_unchecked(self.generate(&seeds))
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let all = BitSet::full(self.order);
        self.commutator_subgroup(&all, &all)
    }

    pub fn is_normal(&self, sub: &BitSet) -> bool {
        let gens = self.generators();
        let sub_gens = self.generators_of(sub);
        gens.iter().all(|&g| sub_gens.iter().all(|&s| sub.contains(self.conj(s, g))))
    }

    /// Image of `sub` under conjugation by `g` (that is, `g^-1 · sub · g`).
    pub fn conjugate_set(&self, sub: &BitSet, g: usize) -> BitSet {
        BitSet::from_indices(self.order, sub.iter().map(|x| self.conj(x, g)))
    }

    /// Number of conjugacy classes of elements.
    pub fn class_count(&self) -> usize {
        let mut seen = self.empty_set();
        let mut classes = 0;
        for a in 0..self.order {
            if seen.contains(a) {
                continue;
            }
            classes += 1;
            for g in 0..self.order {
                seen.insert(self.conj(a, g));
            }
        }
        classes
    }

    pub fn centralizer_sizes(&self) -> Vec<usize> {
        (0..self.order).map(|a| (0..self.order).filter(|&b| self.mul(a, b) == self.mul(b, a)).count()).collect()
    }
}

fn not_a_group(reason: impl Into<String>, witness: Option<(usize, usize, usize)>) -> Error {
    Error::NotAGroup { reason: reason.into(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_table() {
        let g = Group::from_table(&[vec![0]], "1").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn z2_table() {
        let g = Group::from_table(&[vec![0, 1], vec![1, 0]], "Z2").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn idempotent_non_identity_rejected() {
        let err = Group::from_table(&[vec![0, 1], vec![1, 1]], "bad").unwrap_err();
        assert!(matches!(err, Error::NotAGroup { .. }));
    }

    #[test]
    fn identity_not_at_zero() {
        // Z2 with the identity stored at index 1.
        let g = Group::from_table(&[vec![1, 0], vec![0, 1]], "Z2'").unwrap();
        assert_eq!(g.identity(), 1);
    }

    #[test]
    fn non_associative_latin_square_reports_triple() {
        // A Latin square with identity 0 that is not a group (order 5 loop).
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match Group::from_table(&rows, "loop") {
            Err(Error::NotAGroup { witness: Some(_), .. }) => {}
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_and_ragged() {
        assert!(Group::from_table(&[vec![0, 2], vec![1, 0]], "x").is_err());
        assert!(Group::from_table(&[vec![0, 1], vec![1]], "x").is_err());
        assert!(Group::from_table(&[], "x").is_err());
    }

    #[test]
    fn cap_enforced_on_tables() {
        let rows: Vec<Vec<usize>> = (0..5).map(|a| (0..5).map(|b| (a + b) % 5).collect()).collect();
        assert!(matches!(Group::from_table_with_cap(&rows, "Z5", 4), Err(Error::OrderCapExceeded { .. })));
    }
}
