//! Isomorphism testing and canonical forms for small groups.
//!
//! Both rest on the same fact: a homomorphism out of `G` is fixed by the
//! images of a generating set, and it can be propagated along the Cayley
//! graph with a breadth-first walk that checks consistency at every edge.

use serde::{Deserialize, Serialize};

use super::Group;
use crate::bitset::BitSet;

/// Isomorphism invariants used to prefilter candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Invariants {
    pub order: usize,
    /// `(element order, count)` pairs, sorted by element order.
    pub order_histogram: Vec<(usize, usize)>,
    pub center: usize,
    pub derived: usize,
    pub classes: usize,
}

pub fn invariants(g: &Group) -> Invariants {
    let mut hist = std::collections::BTreeMap::new();
    for o in g.element_orders() {
        *hist.entry(o).or_insert(0) += 1;
    }
    Invariants {
        order: g.order(),
        order_histogram: hist.into_iter().collect(),
        center: g.center().order(),
        derived: g.derived_subgroup().order(),
        classes: g.class_count(),
    }
}

/// Per-element invariant used to restrict candidate images.
fn element_keys(g: &Group) -> Vec<(usize, usize)> {
    g.element_orders().into_iter().zip(g.centralizer_sizes()).collect()
}

/// Propagates the assignment `gens[i] -> images[i]` over the subgroup the
/// generators span. Returns `None` on any inconsistency or collision.
fn propagate(g: &Group, h: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut map = vec![NONE; g.order()];
    let mut used = BitSet::new(h.order());
    map[g.identity()] = h.identity();
    used.insert(h.identity());
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x], t);
            if map[y] == NONE {
                if !used.insert(fy) {
                    return None;
                }
                map[y] = fy;
                queue.push(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// Returns an isomorphism `g -> h` as an element map, if one exists.
pub fn find_isomorphism(g: &Group, h: &Group) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    if g.order() == 1 {
        return Some(vec![h.identity()]);
    }
    if invariants(g) != invariants(h) {
        return None;
    }
    let gk = element_keys(g);
    let hk = element_keys(h);
    let gens = g.generators();
    let candidates: Vec<Vec<usize>> =
        gens.iter().map(|&s| (0..h.order()).filter(|&t| hk[t] == gk[s]).collect()).collect();
    let mut images = Vec::with_capacity(gens.len());
    search_iso(g, h, &gens, &candidates, &mut images)
}

fn search_iso(
    g: &Group,
    h: &Group,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = images.len();
    if depth == gens.len() {
        let map = propagate(g, h, gens, images)?;
        return map.iter().all(|&x| x != usize::MAX).then_some(map);
    }
    for &t in &candidates[depth] {
        images.push(t);
        if propagate(g, h, &gens[..=depth], images).is_some() {
            if let Some(map) = search_iso(g, h, gens, candidates, images) {
                return Some(map);
            }
        }
        images.pop();
    }
    None
}

pub fn is_isomorphic(g: &Group, h: &Group) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Canonical multiplication table: the lexicographically least relabelled
/// table over all generating tuples picked by an automorphism-invariant
/// greedy rule (at each step, any element of maximal `(order, centralizer
/// size)` outside the span so far). Elements are relabelled in breadth-first
/// order of the tuple. Gives up and returns `None` after exploring `budget`
/// search nodes.
pub fn canonical_table(g: &Group, budget: usize) -> Option<Vec<u32>> {
    let keys = element_keys(g);
    let mut search = CanonSearch { g, keys, best: None, nodes: 0, budget };
    let start = g.generate(&[]);
    let mut tuple = Vec::new();
    search.descend(&start, &mut tuple).then(|| search.best.unwrap_or_else(|| vec![0]))
}

struct CanonSearch<'a> {
    g: &'a Group,
    keys: Vec<(usize, usize)>,
    best: Option<Vec<u32>>,
    nodes: usize,
    budget: usize,
}

impl CanonSearch<'_> {
    /// Returns `false` when the budget is exhausted.
    fn descend(&mut self, span: &BitSet, tuple: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        let n = self.g.order();
        if span.count() == n {
            self.consider(tuple);
            return true;
        }
        let best_key = (0..n).filter(|&x| !span.contains(x)).map(|x| self.keys[x]).max().unwrap();
        let choices: Vec<usize> = (0..n).filter(|&x| !span.contains(x) && self.keys[x] == best_key).collect();
        for x in choices {
            let next = self.g.join_with(span, tuple, &[x]);
            tuple.push(x);
            let ok = self.descend(&next, tuple);
            tuple.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn consider(&mut self, tuple: &[usize]) {
        let g = self.g;
        let n = g.order();
        let mut label = vec![u32::MAX; n];
        let mut elems = Vec::with_capacity(n);
        label[g.identity()] = 0;
        elems.push(g.identity());
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            i += 1;
            for &s in tuple {
                let y = g.mul(x, s);
                if label[y] == u32::MAX {
                    label[y] = elems.len() as u32;
                    elems.push(y);
                }
            }
        }
        let mut table = Vec::with_capacity(n * n);
        let mut still_equal = self.best.is_some();
        for a in 0..n {
            for b in 0..n {
                let v = label[g.mul(elems[a], elems[b])];
                if still_equal {
                    let cur = self.best.as_ref().unwrap()[table.len()];
                    if v > cur {
                        return;
                    }
                    if v < cur {
                        still_equal = false;
                    }
                }
                table.push(v);
            }
        }
        if !still_equal {
            self.best = Some(table);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, standard_group};

    fn std(spec: &str) -> Group {
        standard_group(spec.parse().unwrap()).unwrap()
    }

    #[test]
    fn d8_vs_q8() {
        assert!(!is_isomorphic(&std("dihedral:8"), &std("quaternion8")));
    }

    #[test]
    fn self_isomorphic() {
        for s in ["dihedral:12", "quaternion8", "extraspecial:3", "alternating:4", "cyclic:1"] {
            let g = std(s);
            assert!(is_isomorphic(&g, &g), "{s}");
        }
    }

    #[test]
    fn found_map_is_homomorphism() {
        let g = std("dihedral:6");
        let h = std("symmetric:3");
        let map = find_isomorphism(&g, &h).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(map[g.mul(a, b)], h.mul(map[a], map[b]));
            }
        }
    }

    #[test]
    fn z6_is_z2_x_z3() {
        let z2 = std("cyclic:2");
        let z3 = std("cyclic:3");
        assert!(is_isomorphic(&direct_product(&z2, &z3).unwrap(), &std("cyclic:6")));
        assert!(!is_isomorphic(&std("cyclic:4"), &std("elementary_abelian:2:2")));
    }

    #[test]
    fn canonical_table_is_relabelling_invariant() {
        let d8 = std("dihedral:8");
        // Relabel by reversing the element indices.
        let n = d8.order();
        let rows: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| n - 1 - d8.mul(n - 1 - a, n - 1 - b)).collect()).collect();
        let relabelled = Group::from_table(&rows, "D8'").unwrap();
        let c1 = canonical_table(&d8, 10_000).unwrap();
        let c2 = canonical_table(&relabelled, 10_000).unwrap();
        assert_eq!(c1, c2);
        let q8 = canonical_table(&std("quaternion8"), 10_000).unwrap();
        assert_ne!(c1, q8);
    }

    #[test]
    fn canonical_budget_exhaustion() {
        assert!(canonical_table(&std("elementary_abelian:2:6"), 100).is_none());
    }
}
