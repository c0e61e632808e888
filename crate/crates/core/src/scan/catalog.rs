use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ingest::ingest_path;
use crate::error::{Error, Result};
use crate::group::{
    direct_product, invariants, is_isomorphic, standard_group, Group, GroupSpec, Invariants, DEFAULT_ORDER_CAP,
};
use crate::primes::{is_prime, primes};
use crate::schmidt::{construct_schmidt_minimal, SchmidtSpec};

/// Generator families of the catalog, in enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cyclic,
    AbelianProducts,
    Dihedral,
    Dicyclic,
    Extraspecial,
    Symmetric,
    Schmidt,
    DirectProducts,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Cyclic,
        Family::AbelianProducts,
        Family::Dihedral,
        Family::Dicyclic,
        Family::Extraspecial,
        Family::Symmetric,
        Family::Schmidt,
        Family::DirectProducts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::AbelianProducts => "abelian_products",
            Family::Dihedral => "dihedral",
            Family::Dicyclic => "dicyclic",
            Family::Extraspecial => "extraspecial",
            Family::Schmidt => "schmidt",
            Family::Symmetric => "symmetric",
            Family::DirectProducts => "direct_products",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::BadArgs(format!("unknown family '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogConfig {
    pub max_order: usize,
    pub families: BTreeSet<Family>,
    /// Files or directories of group files; ingested groups are kept
    /// regardless of `max_order`.
    pub ingest_paths: Vec<PathBuf>,
    pub threads: usize,
    pub resume: bool,
    pub cache_dir: Option<PathBuf>,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        CatalogConfig {
            max_order: 100,
            families: Family::ALL.into_iter().collect(),
            ingest_paths: Vec::new(),
            threads: 1,
            resume: false,
            cache_dir: None,
        }
    }
}

impl CatalogConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_order == 0 || self.max_order > DEFAULT_ORDER_CAP {
            return Err(Error::BadArgs(format!("max_order must be in 1..={DEFAULT_ORDER_CAP}")));
        }
        if self.threads == 0 {
            return Err(Error::BadArgs("threads must be positive".into()));
        }
        Ok(())
    }
}

/// Invariant factor lists `d1 | d2 | … | dk` with `k ≥ 2`, `d1 > 1` and
/// product `n`.
fn invariant_factor_lists(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for d in (min..=rest).filter(|d| rest.is_multiple_of(*d) && d % min == 0) {
            cur.push(d);
            go(rest / d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for d1 in (2..=n).filter(|d| n.is_multiple_of(*d)) {
        go(n / d1, d1, &mut vec![d1], &mut out);
    }
    out
}

fn product_of_cyclics(factors: &[usize]) -> Result<Group> {
    let mut g = standard_group(GroupSpec::Cyclic { n: factors[0] })?;
    for &d in &factors[1..] {
        g = direct_product(&g, &standard_group(GroupSpec::Cyclic { n: d })?)?;
    }
    let label = factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join(" x ");
    Ok(g.with_label(label))
}

fn family_members(family: Family, max: usize) -> Result<Vec<Group>> {
    let mut out = Vec::new();
    match family {
        Family::Cyclic => {
            for n in 1..=max {
                out.push(standard_group(GroupSpec::Cyclic { n })?);
            }
        }
        Family::AbelianProducts => {
            for n in 4..=max {
                for f in invariant_factor_lists(n) {
                    out.push(product_of_cyclics(&f)?);
                }
            }
        }
        Family::Dihedral => {
            for order in (6..=max).step_by(2) {
                out.push(standard_group(GroupSpec::Dihedral { order })?);
            }
        }
        Family::Dicyclic => {
            for order in (8..=max).step_by(4) {
                let spec = if order == 8 { GroupSpec::Quaternion8 } else { GroupSpec::Dicyclic { order } };
                out.push(standard_group(spec)?);
            }
        }
        Family::Extraspecial => {
            for p in primes().skip(1).take_while(|p| p * p * p <= max as u64) {
                out.push(standard_group(GroupSpec::ExtraspecialExponentP { p: p as usize })?);
            }
        }
        Family::Schmidt => {
            for spec in schmidt_grid(max as u64) {
                out.push(construct_schmidt_minimal(spec)?);
            }
        }
        Family::Symmetric => {
            for n in 3.. {
                let s = GroupSpec::Symmetric { n };
                if s.order().is_none_or(|o| o > max) {
                    break;
                }
                out.push(standard_group(s)?);
            }
            for n in 4.. {
                let a = GroupSpec::Alternating { n };
                if a.order().is_none_or(|o| o > max) {
                    break;
                }
                out.push(standard_group(a)?);
            }
        }
        Family::DirectProducts => unreachable!("built from the other families"),
    }
    Ok(out)
}

/// Keeps the first group of every isomorphism type.
#[derive(Default)]
struct Dedup {
    seen: Vec<(Invariants, Group)>,
}

impl Dedup {
    fn admit(&mut self, g: &Group) -> bool {
        let inv = invariants(g);
        if self.seen.iter().any(|(i, h)| *i == inv && is_isomorphic(h, g)) {
            return false;
        }
        self.seen.push((inv, g.clone()));
        true
    }
}

/// Builds the catalog: every family member of order at most `max_order`,
/// direct products `A x B` of two earlier members with `A` non-abelian,
/// then ingested groups, each isomorphism type once. Groups are listed by
/// order, ties in generation order.
pub fn build_catalog(config: &CatalogConfig) -> Result<Vec<Group>> {
    config.validate()?;
    let max = config.max_order;
    let mut dedup = Dedup::default();
    let mut base = Vec::new();
    for &family in &config.families {
        if family == Family::DirectProducts {
            continue;
        }
        for g in family_members(family, max)? {
            if dedup.admit(&g) {
                base.push(g);
            }
        }
    }
    let mut all = base.clone();
    if config.families.contains(&Family::DirectProducts) {
        for a in base.iter().filter(|g| !g.is_abelian()) {
            for b in base.iter().filter(|b| b.order() > 1 && a.order() * b.order() <= max) {
                if !b.is_abelian() && b.label() < a.label() {
                    continue;
                }
                let g = direct_product(a, b)?;
                if dedup.admit(&g) {
                    all.push(g);
                }
            }
        }
    }
    for path in &config.ingest_paths {
        for g in ingest_path(path)? {
            if dedup.admit(&g) {
                all.push(g);
            }
        }
    }
    all.sort_by_key(|g| g.order());
    Ok(all)
}

/// Pairs `(p, q)` of distinct primes whose minimal Schmidt group has order
/// at most `max`.
pub fn schmidt_grid(max: u64) -> Vec<SchmidtSpec> {
    let mut out = Vec::new();
    for q in (2..max).filter(|&q| is_prime(q)) {
        for p in (2..=max / q).filter(|&p| is_prime(p) && p != q) {
            let spec = SchmidtSpec::new(p, q).expect("distinct primes");
            if spec.order().is_some_and(|n| n <= max) {
                out.push(spec);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(config: &CatalogConfig) -> Vec<String> {
        build_catalog(config).unwrap().iter().map(|g| g.label().to_string()).collect()
    }

    #[test]
    fn invariant_factors() {
        assert_eq!(invariant_factor_lists(8), vec![vec![2, 2, 2], vec![2, 4]]);
        assert_eq!(invariant_factor_lists(12), vec![vec![2, 6]]);
        assert!(invariant_factor_lists(7).is_empty());
        assert_eq!(invariant_factor_lists(16).len(), 4);
    }

    #[test]
    fn trivial_catalog() {
        let c = CatalogConfig { max_order: 1, ..Default::default() };
        assert_eq!(labels(&c), vec!["Z1"]);
    }

    #[test]
    fn order_12_catalog_by_hand() {
        let c = CatalogConfig { max_order: 12, ..Default::default() };
        let gs = build_catalog(&c).unwrap();
        let count = |n: usize| gs.iter().filter(|g| g.order() == n).count();
        // Every group of order at most 12 up to isomorphism.
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5];
        for (n, &e) in (1..=12).zip(&expected) {
            assert_eq!(count(n), e, "order {n}");
        }
        let ls = labels(&c);
        assert!(ls.contains(&"A4".to_string()));
        assert!(!ls.contains(&"schmidt:2:3".to_string()));
        assert!(ls.contains(&"D6".to_string()));
        assert!(!ls.contains(&"S3".to_string()));
        assert!(gs.windows(2).all(|w| w[0].order() <= w[1].order()));
    }

    #[test]
    fn deterministic() {
        let c = CatalogConfig { max_order: 24, ..Default::default() };
        assert_eq!(labels(&c), labels(&c));
    }

    #[test]
    fn family_filter_and_validation() {
        let c = CatalogConfig { max_order: 10, families: [Family::Dihedral].into(), ..Default::default() };
        assert_eq!(labels(&c), vec!["D6", "D8", "D10"]);
        assert!(build_catalog(&CatalogConfig { max_order: 0, ..Default::default() }).is_err());
        assert!(build_catalog(&CatalogConfig { max_order: 401, ..Default::default() }).is_err());
        assert_eq!("schmidt".parse::<Family>().unwrap(), Family::Schmidt);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn grid() {
        let g: Vec<(u64, u64)> = schmidt_grid(30).iter().map(|s| (s.p, s.q)).collect();
        assert_eq!(g, vec![(3, 2), (5, 2), (7, 2), (11, 2), (13, 2), (2, 3), (7, 3)]);
    }
}
