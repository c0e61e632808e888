//! Subgroup commutativity degree `sd(G)`, its sectional minimum `sd*(G)`,
//! and census of commuting subgroup pairs.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{
    find_isomorphism, invariants, quotient, quotient_with_projection, subgroup_as_group_with_embedding, Group,
    Invariants,
};
use crate::lattice::{enumerate_subgroups, sections, SectionOptions, Subgroup, SubgroupLattice};
use crate::rational::ExactRational;

/// Set products `HK` and `KH` compared directly.
pub fn subgroups_permute(g: &Group, h: &Subgroup, k: &Subgroup) -> bool {
    let product = |a: &Subgroup, b: &Subgroup| {
        let mut out = g.empty_set();
        for x in a.members().iter() {
            for y in b.members().iter() {
                out.insert(g.mul(x, y));
            }
        }
        out
    };
    product(h, k) == product(k, h)
}

/// `HK` is a subgroup iff it is closed under right multiplication by the
/// generators of `H`. The set `HK` is accumulated coset by coset.
fn product_is_subgroup(g: &Group, h: &BitSet, h_gens: &[usize], k: &BitSet) -> bool {
    let size = h.count() * k.count() / h.intersection_count(k);
    if !g.order().is_multiple_of(size) {
        return false;
    }
    let mut hk = g.empty_set();
    for x in h.iter() {
        if hk.contains(x) {
            continue;
        }
        for y in k.iter() {
            hk.insert(g.mul(x, y));
        }
    }
    hk.iter().all(|x| h_gens.iter().all(|&s| hk.contains(g.mul(x, s))))
}

fn permutes_in(lat: &SubgroupLattice, i: usize, j: usize) -> bool {
    if i == j || lat.is_normal(i) || lat.is_normal(j) || lat.le(i, j) || lat.le(j, i) {
        return true;
    }
    // Iterate over the smaller subgroup's cosets.
    let (a, b) = if lat.subgroup(i).order() <= lat.subgroup(j).order() { (j, i) } else { (i, j) };
    product_is_subgroup(lat.group(), lat.subgroup(a).members(), &lat.generators(a), lat.subgroup(b).members())
}

/// Counts of commuting ordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub total_pairs: u64,
    pub commuting_pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<BTreeMap<String, u64>>,
}

impl PairCensus {
    pub fn sd(&self) -> ExactRational {
        ExactRational::new(self.commuting_pairs, self.total_pairs)
    }
}

const GENERIC_CATEGORIES: [&str; 5] = ["diagonal", "trivial_or_whole", "nested", "normal_partner", "other"];

fn generic_category(lat: &SubgroupLattice, i: usize, j: usize) -> usize {
    let top = lat.whole_index();
    if i == j {
        0
    } else if i == 0 || j == 0 || i == top || j == top {
        1
    } else if lat.le(i, j) || lat.le(j, i) {
        2
    } else if lat.is_normal(i) || lat.is_normal(j) {
        3
    } else {
        4
    }
}

/// Exact count over all ordered pairs; each unordered pair is tested once.
/// With `breakdown`, pairs are also tallied by a coarse reason for commuting.
pub fn pair_census(lat: &SubgroupLattice, breakdown: bool) -> PairCensus {
    let n = lat.len();
    let rows: Vec<[u64; 5]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = [0u64; 5];
            row[0] = 1;
            for j in i + 1..n {
                if permutes_in(lat, i, j) {
                    row[generic_category(lat, i, j)] += 2;
                }
            }
            row
        })
        .collect();
    let mut totals = [0u64; 5];
    for r in &rows {
        for (t, v) in totals.iter_mut().zip(r) {
            *t += v;
        }
    }
    PairCensus {
        total_pairs: (n as u64) * (n as u64),
        commuting_pairs: totals.iter().sum(),
        breakdown: breakdown.then(|| GENERIC_CATEGORIES.iter().map(|s| s.to_string()).zip(totals).collect()),
    }
}

pub fn sd_of_lattice(lat: &SubgroupLattice) -> ExactRational {
    pair_census(lat, false).sd()
}

pub fn sd(g: &Group) -> Result<ExactRational> {
    Ok(sd_of_lattice(&enumerate_subgroups(g)?))
}

/// Seven categories of commuting pairs in a minimal Schmidt group
/// `S1 = P1 ⋊ Q1`, in the order they are tallied.
pub const SCHMIDT_CATEGORIES: [&str; 7] = [
    "inside_p1",
    "p1_subgroup_with_whole",
    "q_conjugate_with_trivial",
    "q_conjugate_with_p1",
    "q_conjugate_with_whole",
    "q_conjugate_diagonal",
    "whole_with_whole",
];

/// Classifies every commuting pair of a minimal Schmidt group into the
/// seven categories. `p1` is the lattice index of the normal elementary
/// abelian Sylow subgroup, `q_conjugates` those of the Sylow q-subgroups.
pub fn pair_census_categorized(lat: &SubgroupLattice, p1: usize, q_conjugates: &[usize]) -> Result<PairCensus> {
    let g = lat.group();
    let top = lat.whole_index();
    let p1_order = lat.subgroup(p1).order();
    let bad = |m: String| Err(Error::NotMinimalSchmidt(m));
    if !lat.is_normal(p1) || p1 == top || p1 == 0 {
        return bad("P1 must be a proper non-trivial normal subgroup".into());
    }
    let q = g.order() / p1_order;
    if q_conjugates.is_empty() || q_conjugates.iter().any(|&c| lat.subgroup(c).order() != q) {
        return bad("Q-conjugates must all have order |S1|/|P1|".into());
    }
    let in_p1: Vec<bool> = (0..lat.len()).map(|i| lat.le(i, p1)).collect();
    let a = in_p1.iter().filter(|&&x| x).count();
    if lat.len() != a + q_conjugates.len() + 1 {
        return bad(format!("|L| = {} but |L(P1)| + #Q-conjugates + 1 = {}", lat.len(), a + q_conjugates.len() + 1));
    }
    let is_q = {
        let mut v = vec![false; lat.len()];
        for &c in q_conjugates {
            v[c] = true;
        }
        v
    };
    let category = |x: usize, y: usize| -> Option<usize> {
        if in_p1[x] && in_p1[y] {
            Some(0)
        } else if (in_p1[x] && y == top) || (x == top && in_p1[y]) {
            Some(1)
        } else if x == top && y == top {
            Some(6)
        } else if is_q[x] || is_q[y] {
            let other = if is_q[x] { y } else { x };
            match other {
                0 => Some(2),
                o if o == p1 => Some(3),
                o if o == top => Some(4),
                o if o == x && o == y => Some(5),
                _ => None,
            }
        } else {
            None
        }
    };

    let mut counts = [0u64; 7];
    for x in 0..lat.len() {
        for y in 0..lat.len() {
            if permutes_in(lat, x, y) {
                match category(x, y) {
                    Some(c) => counts[c] += 1,
                    None => return bad(format!("commuting pair ({x}, {y}) fits no category")),
                }
            }
        }
    }
    let n = lat.len() as u64;
    Ok(PairCensus {
        total_pairs: n * n,
        commuting_pairs: counts.iter().sum(),
        breakdown: Some(SCHMIDT_CATEGORIES.iter().map(|s| s.to_string()).zip(counts).collect()),
    })
}

/// `sd*(G)` together with a section `host/kernel` attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdStar {
    pub value: ExactRational,
    pub host: Subgroup,
    pub kernel: Subgroup,
}

impl SdStar {
    /// The witness section `host/kernel` as a group.
    pub fn section(&self, g: &Group) -> Result<Group> {
        let (h, embed) = subgroup_as_group_with_embedding(g, self.host.members())?;
        let local = BitSet::from_indices(
            h.order(),
            embed.iter().enumerate().filter(|(_, &e)| self.kernel.contains(e)).map(|(i, _)| i),
        );
        quotient(&h, &Subgroup::from_bits(&h, local)?)
    }
}

/// Minimum of `sd` over all sections.
///
/// Every section of `G` other than `G/1` is a section of a maximal subgroup
/// or of `G/N` for a minimal normal `N`, so the minimum is taken
/// recursively over those, with results memoised per isomorphism type.
/// Ties keep the earliest candidate in the order `G` itself, maximal
/// subgroups, quotients (each by lattice index).
pub fn sd_star(g: &Group) -> Result<SdStar> {
    SdStarSolver::default().solve(g)
}

/// Like [`sd_star`], with the witness section reported as lattice indices
/// `(value, host, kernel)`.
pub fn sd_star_in_lattice(lat: &SubgroupLattice) -> Result<(ExactRational, usize, usize)> {
    let s = sd_star(lat.group())?;
    let host = lat.index_of(s.host.members()).expect("witness host is a subgroup");
    let kernel = lat.index_of(s.kernel.members()).expect("witness kernel is a subgroup");
    Ok((s.value, host, kernel))
}

/// Minimum of `sd` over an explicit stream of sections, deduplicated by
/// isomorphism type. Returns `(value, host, kernel)` by lattice index.
pub fn sd_star_exhaustive(lat: &SubgroupLattice) -> Result<(ExactRational, usize, usize)> {
    let mut best: Option<(ExactRational, usize, usize)> = None;
    for s in sections(lat, SectionOptions { dedup: true }) {
        let v = if s.quotient.is_abelian() { ExactRational::one() } else { sd(&s.quotient)? };
        let better = match &best {
            None => true,
            Some((b, _, _)) => v < *b,
        };
        if better {
            best = Some((v, s.host, s.kernel));
        }
    }
    Ok(best.expect("every group has the section 1/1"))
}

struct MemoEntry {
    group: Group,
    value: ExactRational,
    host: BitSet,
    kernel: BitSet,
}

#[derive(Default)]
pub struct SdStarSolver {
    memo: HashMap<Invariants, Vec<MemoEntry>>,
}

impl SdStarSolver {
    pub fn solve(&mut self, g: &Group) -> Result<SdStar> {
        let (value, host, kernel) = self.solve_bits(g)?;
        Ok(SdStar { value, host: Subgroup::from_bits_unchecked(host), kernel: Subgroup::from_bits_unchecked(kernel) })
    }

    fn solve_bits(&mut self, g: &Group) -> Result<(ExactRational, BitSet, BitSet)> {
        let whole = BitSet::full(g.order());
        let trivial = g.generate(&[]);
        if g.is_abelian() {
            return Ok((ExactRational::one(), whole, trivial));
        }
        let inv = invariants(g);
        if let Some(entries) = self.memo.get(&inv) {
            for e in entries {
                if let Some(map) = find_isomorphism(&e.group, g) {
                    let host = BitSet::from_indices(g.order(), e.host.iter().map(|x| map[x]));
                    let kernel = BitSet::from_indices(g.order(), e.kernel.iter().map(|x| map[x]));
                    return Ok((e.value.clone(), host, kernel));
                }
            }
        }

        let lat = enumerate_subgroups(g)?;
        let mut best = (sd_of_lattice(&lat), whole, trivial);
        // An Iwasawa group has only Iwasawa sections.
        if !best.0.is_one() {
            let mut seen_classes = Vec::new();
            for m in lat.maximal_subgroups() {
                let class = lat.class_of(m);
                if seen_classes.contains(&class) {
                    continue;
                }
                seen_classes.push(class);
                let (h, embed) = subgroup_as_group_with_embedding(g, lat.subgroup(m).members())?;
                let (v, hb, kb) = self.solve_bits(&h)?;
                if v < best.0 {
                    let lift = |b: &BitSet| BitSet::from_indices(g.order(), b.iter().map(|x| embed[x]));
                    best = (v, lift(&hb), lift(&kb));
                }
            }
            for n in lat.minimal_normal_subgroups() {
                let (q, proj) = quotient_with_projection(g, lat.subgroup(n))?;
                let (v, hb, kb) = self.solve_bits(&q)?;
                if v < best.0 {
                    let preimage =
                        |b: &BitSet| BitSet::from_indices(g.order(), (0..g.order()).filter(|&x| b.contains(proj[x])));
                    best = (v, preimage(&hb), preimage(&kb));
                }
            }
        }
        self.memo.entry(inv).or_default().push(MemoEntry {
            group: g.clone(),
            value: best.0.clone(),
            host: best.1.clone(),
            kernel: best.2.clone(),
        });
        Ok(best)
    }
}
