//! Subgroup lattices, structural predicates and sections.

use std::collections::{HashMap, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{
    invariants, is_isomorphic, quotient, subgroup_as_group_with_embedding, Group, Invariants, DEFAULT_ORDER_CAP,
};
use crate::primes::is_prime;

/// A subgroup, stored as the bit-vector of its members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    order: usize,
    members: BitSet,
}

impl Subgroup {
    /// Checks that `bits` contains the identity and is closed under product
    /// and inverse.
    pub fn from_bits(g: &Group, bits: BitSet) -> Result<Subgroup> {
        if bits.len() != g.order() || !bits.contains(g.identity()) {
            return Err(Error::NotClosed);
        }
        let elems: Vec<usize> = bits.iter().collect();
        for &a in &elems {
            if !bits.contains(g.inv(a)) || elems.iter().any(|&b| !bits.contains(g.mul(a, b))) {
                return Err(Error::NotClosed);
            }
        }
        Ok(Subgroup::from_bits_unchecked(bits))
    }

    pub(crate) fn from_bits_unchecked(bits: BitSet) -> Subgroup {
        Subgroup { order: bits.count(), members: bits }
    }

    pub fn trivial(g: &Group) -> Subgroup {
        Subgroup::from_bits_unchecked(BitSet::from_indices(g.order(), [g.identity()]))
    }

    pub fn whole(g: &Group) -> Subgroup {
        Subgroup::from_bits_unchecked(BitSet::full(g.order()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order <= other.order && self.members.is_subset(&other.members)
    }
}

/// Smallest subgroup containing `seed`.
pub fn generated_subgroup(g: &Group, seed: &BitSet) -> Subgroup {
    let seeds: Vec<usize> = seed.iter().collect();
    Subgroup::from_bits_unchecked(g.generate(&seeds))
}

/// The complete subgroup lattice of a group.
///
/// Subgroups are sorted by `(order, bit-vector)`, so index 0 is the trivial
/// subgroup and the last index is the whole group.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: Group,
    subgroups: Vec<Subgroup>,
    gens: Vec<Vec<u32>>,
    normal: Vec<bool>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    index: HashMap<BitSet, usize>,
}

pub fn enumerate_subgroups(g: &Group) -> Result<SubgroupLattice> {
    enumerate_subgroups_with_cap(g, DEFAULT_ORDER_CAP)
}

/// Enumerates every subgroup: cyclic subgroups first, then joins with
/// cyclic subgroups until no new subgroup appears.
pub fn enumerate_subgroups_with_cap(g: &Group, cap: usize) -> Result<SubgroupLattice> {
    if g.order() > cap {
        return Err(Error::OrderCapExceeded { cap, reached: g.order() });
    }
    let n = g.order();

    let mut subgroups: Vec<BitSet> = Vec::new();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut index: HashMap<BitSet, usize> = HashMap::new();
    let mut add = |bits: BitSet, gen: Vec<u32>, subgroups: &mut Vec<BitSet>, gens: &mut Vec<Vec<u32>>| -> bool {
        if index.contains_key(&bits) {
            return false;
        }
        index.insert(bits.clone(), subgroups.len());
        subgroups.push(bits);
        gens.push(gen);
        true
    };

    add(g.generate(&[]), Vec::new(), &mut subgroups, &mut gens);
    let mut cyclic: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        let c = g.generate(&[a]);
        let size = c.count();
        if add(c, vec![a as u32], &mut subgroups, &mut gens) {
            cyclic.push((size, a));
        }
    }
    // Small cyclic subgroups first: their joins are the likeliest covers.
    cyclic.sort_unstable();

    let mut i = 0;
    while i < subgroups.len() {
        let h = subgroups[i].clone();
        let h_size = h.count();
        let h_gens: Vec<usize> = gens[i].iter().map(|&x| x as usize).collect();
        // Elements z with H ∨ <z> already known to be a prime-index cover.
        let mut covered = h.clone();
        for &(_, z) in &cyclic {
            if covered.contains(z) {
                continue;
            }
            let k = g.join_with(&h, &h_gens, &[z]);
            if is_prime((k.count() / h_size) as u64) {
                covered.union_with(&k);
            }
            let mut kg = gens[i].clone();
            kg.push(z as u32);
            add(k, kg, &mut subgroups, &mut gens);
        }
        i += 1;
    }

    let mut order: Vec<usize> = (0..subgroups.len()).collect();
    let counts: Vec<usize> = subgroups.iter().map(|s| s.count()).collect();
    order.sort_by(|&a, &b| counts[a].cmp(&counts[b]).then_with(|| subgroups[a].cmp(&subgroups[b])));
    let mut sorted = Vec::with_capacity(subgroups.len());
    let mut sorted_gens = Vec::with_capacity(subgroups.len());
    let mut subgroups: Vec<Option<BitSet>> = subgroups.into_iter().map(Some).collect();
    for &o in &order {
        sorted.push(Subgroup::from_bits_unchecked(subgroups[o].take().unwrap()));
        sorted_gens.push(std::mem::take(&mut gens[o]));
    }
    let index: HashMap<BitSet, usize> = sorted.iter().enumerate().map(|(i, s)| (s.members.clone(), i)).collect();

    let g_gens = g.generators();
    let normal: Vec<bool> = sorted
        .iter()
        .zip(&sorted_gens)
        .map(|(s, sg)| g_gens.iter().all(|&x| sg.iter().all(|&y| s.contains(g.conj(y as usize, x)))))
        .collect();

    let mut class_of = vec![usize::MAX; sorted.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..sorted.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut members = vec![start];
        if !normal[start] {
            let mut k = 0;
            while k < members.len() {
                let cur = members[k];
                k += 1;
                for &x in &g_gens {
                    let conj = g.conjugate_set(&sorted[cur].members, x);
                    let j = index[&conj];
                    if class_of[j] == usize::MAX {
                        class_of[j] = id;
                        members.push(j);
                    }
                }
            }
            members.sort_unstable();
        }
        classes.push(members);
    }

    Ok(SubgroupLattice { group: g.clone(), subgroups: sorted, gens: sorted_gens, normal, class_of, classes, index })
}

impl SubgroupLattice {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn generators(&self, i: usize) -> Vec<usize> {
        self.gens[i].iter().map(|&x| x as usize).collect()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn normal_flags(&self) -> &[bool] {
        &self.normal
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn index_of(&self, bits: &BitSet) -> Option<usize> {
        self.index.get(bits).copied()
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn whole_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// `true` if subgroup `i` is contained in subgroup `j`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subgroup_of(&self.subgroups[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let bits = self.subgroups[i].members.intersection(&self.subgroups[j].members);
        self.index[&bits]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        if self.le(i, j) {
            return j;
        }
        if self.le(j, i) {
            return i;
        }
        let extra = self.generators(j);
        let bits = self.group.join_with(&self.subgroups[i].members, &self.generators(i), &extra);
        self.index[&bits]
    }

    /// Upper covers of every subgroup, each list in lattice order.
    pub fn upper_covers(&self) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|i| {
                let mut covers: Vec<usize> = Vec::new();
                for j in i + 1..self.len() {
                    if self.subgroups[j].order > self.subgroups[i].order
                        && self.le(i, j)
                        && !covers.iter().any(|&c| self.le(c, j))
                    {
                        covers.push(j);
                    }
                }
                covers
            })
            .collect()
    }

    /// Indices of the maximal proper subgroups.
    pub fn maximal_subgroups(&self) -> Vec<usize> {
        let top = self.whole_index();
        let mut maximal: Vec<usize> = Vec::new();
        for i in (0..top).rev() {
            if !maximal.iter().any(|&m| self.le(i, m)) {
                maximal.push(i);
            }
        }
        maximal.sort_unstable();
        maximal
    }

    /// Intersection of all maximal subgroups (the whole group if there are none).
    pub fn frattini(&self) -> Subgroup {
        let mut bits = BitSet::full(self.group.order());
        for m in self.maximal_subgroups() {
            bits = bits.intersection(&self.subgroups[m].members);
        }
        Subgroup::from_bits_unchecked(bits)
    }

    /// Indices of the minimal normal subgroups.
    pub fn minimal_normal_subgroups(&self) -> Vec<usize> {
        let normals: Vec<usize> = (1..self.len()).filter(|&i| self.normal[i]).collect();
        normals.iter().copied().filter(|&i| !normals.iter().any(|&j| j != i && self.le(j, i))).collect()
    }

    /// Indices of subgroups of `host` that are normal in `host`.
    pub fn normal_subgroups_of(&self, host: usize) -> Vec<usize> {
        let g = &self.group;
        let host_gens = self.generators(host);
        (0..=host)
            .filter(|&n| self.le(n, host))
            .filter(|&n| {
                let sub = &self.subgroups[n];
                self.gens[n].iter().all(|&y| host_gens.iter().all(|&x| sub.contains(g.conj(y as usize, x))))
            })
            .collect()
    }
}

pub fn is_nilpotent(g: &Group) -> bool {
    let all = BitSet::full(g.order());
    let mut current = all.clone();
    loop {
        if current.count() == 1 {
            return true;
        }
        let next = g.commutator_subgroup(&current, &all);
        if next.order() == current.count() {
            return false;
        }
        current = next.members().clone();
    }
}

pub fn is_solvable(g: &Group) -> bool {
    let mut current = BitSet::full(g.order());
    loop {
        if current.count() == 1 {
            return true;
        }
        let next = g.commutator_subgroup(&current, &current);
        if next.order() == current.count() {
            return false;
        }
        current = next.members().clone();
    }
}

/// Outcome of a modularity check; a failure carries a triple `(h, k, l)`
/// of lattice indices with `h ≤ l` and `h ∨ (k ∧ l) ≠ (h ∨ k) ∧ l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modularity {
    Modular,
    Violated { h: usize, k: usize, l: usize },
}

impl Modularity {
    pub fn is_modular(&self) -> bool {
        matches!(self, Modularity::Modular)
    }
}

/// Whether the modular law holds for the triple `(h, k, l)` (vacuously when `h ≰ l`).
pub fn modular_law_holds(lat: &SubgroupLattice, h: usize, k: usize, l: usize) -> bool {
    if !lat.le(h, l) {
        return true;
    }
    lat.join(h, lat.meet(k, l)) == lat.meet(lat.join(h, k), l)
}

/// Decides modularity through the covering relation: a finite lattice is
/// modular iff it is both upper and lower semimodular. A semimodularity
/// failure is turned into an explicit modular-law violation.
pub fn is_modular_lattice(lat: &SubgroupLattice) -> Modularity {
    // Normal subgroups always form a modular lattice.
    if lat.normal.iter().all(|&x| x) {
        return Modularity::Modular;
    }
    let up = lat.upper_covers();
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); lat.len()];
    for (i, cs) in up.iter().enumerate() {
        for &c in cs {
            down[c].push(i);
        }
    }
    let strictly_between = |lo: usize, hi: usize| -> usize {
        up[lo].iter().copied().find(|&c| c != hi && lat.le(c, hi)).expect("non-cover has an intermediate")
    };

    for m in 0..lat.len() {
        let covers = &up[m];
        for (x, &a) in covers.iter().enumerate() {
            for &b in &covers[x + 1..] {
                let j = lat.join(a, b);
                for (lo, other) in [(a, b), (b, a)] {
                    if !up[lo].contains(&j) {
                        let c = strictly_between(lo, j);
                        return checked(lat, lo, other, c);
                    }
                }
            }
        }
    }
    for covers in &down {
        for (x, &a) in covers.iter().enumerate() {
            for &b in &covers[x + 1..] {
                let m = lat.meet(a, b);
                for (hi, other) in [(b, a), (a, b)] {
                    if !up[m].contains(&hi) {
                        let c = strictly_between(m, hi);
                        return checked(lat, c, other, hi);
                    }
                }
            }
        }
    }
    Modularity::Modular
}

fn checked(lat: &SubgroupLattice, h: usize, k: usize, l: usize) -> Modularity {
    debug_assert!(!modular_law_holds(lat, h, k, l), "semimodularity witness must violate the modular law");
    Modularity::Violated { h, k, l }
}

pub fn is_iwasawa(g: &Group) -> Result<bool> {
    if !is_nilpotent(g) {
        return Ok(false);
    }
    Ok(is_modular_lattice(&enumerate_subgroups(g)?).is_modular())
}

/// Non-nilpotent with every maximal subgroup nilpotent.
pub fn is_schmidt(lat: &SubgroupLattice) -> bool {
    let g = lat.group();
    if is_nilpotent(g) {
        return false;
    }
    lat.maximal_subgroups().into_iter().all(|m| {
        let (h, _) =
            subgroup_as_group_with_embedding(g, lat.subgroup(m).members()).expect("lattice members are subgroups");
        is_nilpotent(&h)
    })
}

/// A quotient `H/N` with `N` normal in `H ≤ G`, by lattice index.
#[derive(Clone, Debug)]
pub struct Section {
    pub host: usize,
    pub kernel: usize,
    pub quotient: Group,
}

#[derive(Clone, Copy, Debug)]
pub struct SectionOptions {
    /// Skip hosts conjugate to an earlier one and quotients isomorphic to an
    /// earlier one.
    pub dedup: bool,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { dedup: true }
    }
}

/// Streams all sections of the lattice's group in lattice order of
/// `(host, kernel)`.
pub fn sections(lat: &SubgroupLattice, opts: SectionOptions) -> Sections<'_> {
    Sections { lat, opts, host: 0, pending: VecDeque::new(), seen: Vec::new() }
}

pub struct Sections<'a> {
    lat: &'a SubgroupLattice,
    opts: SectionOptions,
    host: usize,
    pending: VecDeque<Section>,
    seen: Vec<(Invariants, Group)>,
}

/// Materializes the quotient `host/kernel` of two lattice members.
pub fn section_quotient(lat: &SubgroupLattice, host: usize, kernel: usize) -> Result<Group> {
    let g = lat.group();
    let (h, embed) = subgroup_as_group_with_embedding(g, lat.subgroup(host).members())?;
    let kernel_bits = lat.subgroup(kernel).members();
    let local = BitSet::from_indices(
        h.order(),
        embed.iter().enumerate().filter(|(_, &e)| kernel_bits.contains(e)).map(|(i, _)| i),
    );
    quotient(&h, &Subgroup::from_bits(&h, local)?)
}

impl Sections<'_> {
    fn fill(&mut self, host: usize) {
        for kernel in self.lat.normal_subgroups_of(host) {
            let q = section_quotient(self.lat, host, kernel).expect("kernel is normal in host");
            if self.opts.dedup {
                let inv = invariants(&q);
                if self.seen.iter().any(|(i, s)| *i == inv && is_isomorphic(s, &q)) {
                    continue;
                }
                self.seen.push((inv, q.clone()));
            }
            self.pending.push_back(Section { host, kernel, quotient: q });
        }
    }
}

impl Iterator for Sections<'_> {
    type Item = Section;

    fn next(&mut self) -> Option<Section> {
        loop {
            if let Some(s) = self.pending.pop_front() {
                return Some(s);
            }
            if self.host >= self.lat.len() {
                return None;
            }
            let host = self.host;
            self.host += 1;
            if self.opts.dedup && self.lat.conjugacy_classes()[self.lat.class_of(host)][0] != host {
                continue;
            }
            self.fill(host);
        }
    }
}
