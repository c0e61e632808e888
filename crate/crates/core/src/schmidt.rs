//! Minimal Schmidt groups `P1 ⋊ Z_q` with `P1 = (Z_p)^r`, `r = ord_q(p)`,
//! and checks of the structure shared by all Schmidt groups.
//!
//! The `Z_q`-action is the companion matrix of a monic degree-`r` divisor of
//! the `q`-th cyclotomic polynomial over `F_p`. Every irreducible factor of
//! that polynomial has degree exactly `r`, so any monic degree-`r` divisor is
//! irreducible and the action is faithful and irreducible.

use serde::Serialize;

use crate::closed_forms::{a_rp, multiplicative_order};
use crate::degrees::{pair_census_categorized, PairCensus};
use crate::error::{Error, Result};
use crate::group::{
    quotient, semidirect_product_with_cap, standard_group_with_cap, subgroup_as_group, Group, GroupSpec,
    DEFAULT_ORDER_CAP,
};
use crate::lattice::{enumerate_subgroups, is_schmidt, SubgroupLattice};
use crate::primes::{is_prime, prime_factors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchmidtSpec {
    pub p: u64,
    pub q: u64,
    pub r: u32,
}

impl SchmidtSpec {
    pub fn new(p: u64, q: u64) -> Result<SchmidtSpec> {
        if !is_prime(p) || !is_prime(q) || p == q {
            return Err(Error::BadSpec(format!("need distinct primes, got p={p}, q={q}")));
        }
        let r = multiplicative_order(p, q)?;
        Ok(SchmidtSpec { p, q, r })
    }

    /// `p^r q`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.r)?.checked_mul(self.q)
    }

    pub fn label(&self) -> String {
        format!("schmidt:{}:{}", self.p, self.q)
    }
}

/// Polynomial over `F_p`, coefficients from the constant term up.
type Poly = Vec<u64>;

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Poly {
    let d = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > d {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - d;
            for (i, &c) in m[..d].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
            }
        }
    }
    r
}

/// First monic degree-`r` divisor of `1 + x + … + x^(q-1)` over `F_p`, with
/// the low coefficients read as a base-`p` number in increasing order.
pub fn cyclotomic_factor(p: u64, q: u64, r: u32) -> Result<Poly> {
    let phi = vec![1u64; q as usize];
    let count = p.checked_pow(r).ok_or_else(|| Error::BadSpec(format!("{p}^{r} overflows")))?;
    for code in 0..count {
        let mut f: Poly = (0..r).map(|i| code / p.pow(i) % p).collect();
        f.push(1);
        if poly_rem(&phi, &f, p).iter().all(|&c| c == 0) {
            return Ok(f);
        }
    }
    Err(Error::ConstructionFailure(format!("no degree-{r} factor of the {q}-th cyclotomic polynomial mod {p}")))
}

/// `v -> C v` for the companion matrix `C` of the monic `f`, on vectors
/// encoded as `Σ v_i p^i` (the encoding of the elementary abelian group).
fn companion_action(f: &[u64], p: u64) -> impl Fn(usize) -> usize + '_ {
    let r = f.len() - 1;
    move |x| {
        let p = p as usize;
        let v: Vec<usize> = (0..r).map(|i| x / p.pow(i as u32) % p).collect();
        // C e_i = e_{i+1}, C e_{r-1} = -Σ f_i e_i.
        let top = v[r - 1];
        let mut out = 0;
        for i in (0..r).rev() {
            let shifted = if i == 0 { 0 } else { v[i - 1] };
            let c = (shifted + (p - f[i] as usize) * top) % p;
            out = out * p + c;
        }
        out
    }
}

pub fn construct_schmidt_minimal(spec: SchmidtSpec) -> Result<Group> {
    construct_schmidt_minimal_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn construct_schmidt_minimal_with_cap(spec: SchmidtSpec, cap: usize) -> Result<Group> {
    let expected = SchmidtSpec::new(spec.p, spec.q)?;
    if expected != spec {
        return Err(Error::BadSpec(format!("r must be ord_{}({}) = {}", spec.q, spec.p, expected.r)));
    }
    let order = spec.order().filter(|&n| n <= cap as u64);
    let Some(order) = order else {
        return Err(Error::OrderCapExceeded { cap, reached: spec.order().unwrap_or(u64::MAX) as usize });
    };
    let (p, q, r) = (spec.p as usize, spec.q as usize, spec.r);
    let p1 = standard_group_with_cap(GroupSpec::ElementaryAbelian { p, r }, cap)?;
    let zq = standard_group_with_cap(GroupSpec::Cyclic { n: q }, cap)?;
    let f = cyclotomic_factor(spec.p, spec.q, r)?;
    let c = companion_action(&f, spec.p);
    let generator: Vec<usize> = (0..p1.order()).map(&c).collect();

    let identity: Vec<usize> = (0..p1.order()).collect();
    let mut action = vec![identity.clone()];
    for k in 1..q {
        let prev: &Vec<usize> = &action[k - 1];
        action.push(prev.iter().map(|&x| generator[x]).collect());
    }
    if action[q - 1].iter().map(|&x| generator[x]).ne(identity.iter().copied()) || generator == identity {
        return Err(Error::ConstructionFailure(format!("companion matrix of {f:?} does not have order {q}")));
    }

    let s = semidirect_product_with_cap(&p1, &zq, &action, cap)?.with_label(spec.label());
    if s.order() as u64 != order || s.center().order() != 1 {
        return Err(Error::ConstructionFailure(format!(
            "{} has order {} and centre {}",
            spec.label(),
            s.order(),
            s.center().order()
        )));
    }
    if !is_schmidt(&enumerate_subgroups(&s)?) {
        return Err(Error::ConstructionFailure(format!("{} is not a Schmidt group", spec.label())));
    }
    Ok(s)
}

/// Sylow data of a group of order `p^m q^n` whose Sylow `p`-subgroup is
/// normal and whose Sylow `q`-subgroups are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylowData {
    pub p: u64,
    pub q: u64,
    pub m: u32,
    pub n: u32,
    /// Lattice index of the normal Sylow `p`-subgroup.
    pub sylow_p: usize,
    /// Lattice indices of all Sylow `q`-subgroups.
    pub sylow_q: Vec<usize>,
}

pub fn sylow_data(lat: &SubgroupLattice) -> Result<SylowData> {
    let order = lat.group().order() as u64;
    let unexpected = |m: String| Error::SylowStructureUnexpected(m);
    let primes = prime_factors(order as u128);
    if primes.len() != 2 {
        return Err(unexpected(format!("order {order} does not have exactly two prime divisors")));
    }
    let part = |p: u64| {
        let (mut e, mut x) = (0u32, order);
        while x % p == 0 {
            x /= p;
            e += 1;
        }
        e
    };
    let sylows = |p: u64, e: u32| -> Vec<usize> {
        let size = p.pow(e) as usize;
        (0..lat.len()).filter(|&i| lat.subgroup(i).order() == size).collect()
    };
    let (a, b) = (primes[0] as u64, primes[1] as u64);
    let (ea, eb) = (part(a), part(b));
    let (sa, sb) = (sylows(a, ea), sylows(b, eb));
    let (p, q, m, n, sp, sq) = match (sa.len() == 1, sb.len() == 1) {
        (true, false) => (a, b, ea, eb, sa, sb),
        (false, true) => (b, a, eb, ea, sb, sa),
        _ => return Err(unexpected("expected exactly one normal Sylow subgroup".into())),
    };
    Ok(SylowData { p, q, m, n, sylow_p: sp[0], sylow_q: sq })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionVerdict {
    pub p: u64,
    pub q: u64,
    pub r: u32,
    pub lattice_size: usize,
    /// `a_rp(r, p) + p^r + 1`.
    pub expected_size: usize,
    pub sylow_q_conjugates: usize,
}

/// Checks that `L(S1)` is `L(P1)`, the `p^r` conjugates of `Q1`, and `S1`,
/// and that no subgroup has order `p^i q` with `0 < i < r`.
pub fn lattice_decomposition_check(lat: &SubgroupLattice) -> Result<DecompositionVerdict> {
    let mismatch = |m: String| Err(Error::DecompositionMismatch(m));
    let data = sylow_data(lat)?;
    if data.n != 1 {
        return mismatch(format!("Sylow {}-subgroup has order {}^{}", data.q, data.q, data.n));
    }
    let (p, q, r) = (data.p, data.q, data.m);
    let p_pow_r = p.pow(r) as usize;
    let expected_size = usize::try_from(a_rp(r, p)?).unwrap() + p_pow_r + 1;
    if lat.len() != expected_size {
        return mismatch(format!("|L| = {}, expected {expected_size}", lat.len()));
    }
    if data.sylow_q.len() != p_pow_r {
        return mismatch(format!("{} Sylow {q}-subgroups, expected {p_pow_r}", data.sylow_q.len()));
    }
    let class = lat.class_of(data.sylow_q[0]);
    if let Some(&c) = data.sylow_q.iter().find(|&&c| lat.class_of(c) != class) {
        return mismatch(format!("Sylow {q}-subgroup #{c} is not conjugate to #{}", data.sylow_q[0]));
    }
    for i in 1..r {
        let bad = p.pow(i) as usize * q as usize;
        if let Some(h) = (0..lat.len()).find(|&h| lat.subgroup(h).order() == bad) {
            return mismatch(format!("subgroup #{h} {:?} has order {bad}", lat.subgroup(h).elements()));
        }
    }
    Ok(DecompositionVerdict { p, q, r, lattice_size: lat.len(), expected_size, sylow_q_conjugates: p_pow_r })
}

/// Structural facts of a Schmidt group `S = P ⋊ ⟨y⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub p: u64,
    pub q: u64,
    /// `ord_q(p)`.
    pub r: u32,
    pub p_abelian: bool,
    pub y_pow_q_central: bool,
    pub center_is_frattini: bool,
    pub derived_is_p: bool,
    pub p_derived_is_p_frattini: bool,
    pub p_abelianization_is_p_pow_r: bool,
    /// Vacuously true when `P` is non-abelian.
    pub p_minimal_normal: bool,
    /// Whether `S/Z(S)` is again Schmidt; `None` when the centre is trivial.
    pub central_quotient_schmidt: Option<bool>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.y_pow_q_central
            && self.center_is_frattini
            && self.derived_is_p
            && self.p_derived_is_p_frattini
            && self.p_abelianization_is_p_pow_r
            && self.p_minimal_normal
            && self.central_quotient_schmidt != Some(false)
    }
}

pub fn structure_report(lat: &SubgroupLattice) -> Result<StructureReport> {
    if !is_schmidt(lat) {
        return Err(Error::NotSchmidt);
    }
    let g = lat.group();
    let data = sylow_data(lat)?;
    let sylow_p = lat.subgroup(data.sylow_p);
    let r = multiplicative_order(data.p, data.q)?;

    let q_order = lat.subgroup(data.sylow_q[0]).order();
    let q_elems = lat.subgroup(data.sylow_q[0]).elements();
    let Some(&y) = q_elems.iter().find(|&&x| g.element_order(x) == q_order) else {
        return Err(Error::SylowStructureUnexpected("Sylow q-subgroup is not cyclic".into()));
    };
    let center = g.center();
    let y_pow_q = (0..data.q).fold(g.identity(), |acc, _| g.mul(acc, y));

    let pg = subgroup_as_group(g, sylow_p.members())?;
    let p_lat = enumerate_subgroups(&pg)?;
    let p_derived = pg.derived_subgroup();
    let p_frattini = p_lat.frattini();
    let p_abelian = pg.is_abelian();
    let p_minimal_normal = !p_abelian
        || (0..lat.len())
            .all(|h| !lat.is_normal(h) || h == lat.trivial_index() || h == data.sylow_p || !lat.le(h, data.sylow_p));
    let central_quotient_schmidt =
        if center.order() > 1 { Some(is_schmidt(&enumerate_subgroups(&quotient(g, &center)?)?)) } else { None };
    Ok(StructureReport {
        p: data.p,
        q: data.q,
        r,
        p_abelian,
        y_pow_q_central: center.contains(y_pow_q),
        center_is_frattini: center.members() == lat.frattini().members(),
        derived_is_p: g.derived_subgroup().members() == sylow_p.members(),
        p_derived_is_p_frattini: p_derived.members() == p_frattini.members(),
        p_abelianization_is_p_pow_r: pg.order() / p_derived.order() == data.p.pow(r) as usize,
        p_minimal_normal,
        central_quotient_schmidt,
    })
}

/// Seven-way census of commuting pairs in a minimal Schmidt group, with
/// `P1` and the Sylow `q`-subgroups located from the lattice.
pub fn schmidt_census(lat: &SubgroupLattice) -> Result<PairCensus> {
    let data = sylow_data(lat).map_err(|e| Error::NotMinimalSchmidt(e.to_string()))?;
    pair_census_categorized(lat, data.sylow_p, &data.sylow_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::sd_schmidt_formula;
    use crate::degrees::{sd_of_lattice, sd_star};
    use crate::group::{group_from_permutations, is_isomorphic, standard_group, PermutationGenSet};
    use crate::rational::ExactRational;

    fn build(p: u64, q: u64) -> Group {
        construct_schmidt_minimal(SchmidtSpec::new(p, q).unwrap()).unwrap()
    }

    /// SL(2,3) acting on the eight non-zero vectors of F_3^2.
    fn sl2_3() -> Group {
        let vecs: Vec<(u64, u64)> = (0..9).map(|i| (i % 3, i / 3)).filter(|&v| v != (0, 0)).collect();
        let perm = |m: [[u64; 2]; 2]| -> Vec<usize> {
            vecs.iter()
                .map(|&(a, b)| {
                    let img = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3);
                    vecs.iter().position(|&v| v == img).unwrap()
                })
                .collect()
        };
        let gens = PermutationGenSet::new(8, vec![perm([[1, 1], [0, 1]]), perm([[1, 0], [1, 1]])]).unwrap();
        group_from_permutations(&gens, "SL(2,3)", 400).unwrap()
    }

    #[test]
    fn factor_divides_cyclotomic() {
        let f = cyclotomic_factor(2, 7, 3).unwrap();
        assert_eq!(f, vec![1, 1, 0, 1]);
        assert_eq!(cyclotomic_factor(2, 3, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(cyclotomic_factor(3, 2, 1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn bad_specs() {
        assert!(SchmidtSpec::new(4, 3).is_err());
        assert!(SchmidtSpec::new(3, 3).is_err());
        let mut s = SchmidtSpec::new(2, 7).unwrap();
        s.r = 2;
        assert!(matches!(construct_schmidt_minimal(s), Err(Error::BadSpec(_))));
        assert!(matches!(
            construct_schmidt_minimal(SchmidtSpec::new(2, 31).unwrap()),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn small_cases_are_s3_and_a4() {
        assert!(is_isomorphic(&build(3, 2), &standard_group("symmetric:3".parse().unwrap()).unwrap()));
        assert!(is_isomorphic(&build(2, 3), &standard_group("alternating:4".parse().unwrap()).unwrap()));
    }

    #[test]
    fn deterministic_construction() {
        assert_eq!(build(2, 7).flat_table(), build(2, 7).flat_table());
    }

    #[test]
    fn order_56_group() {
        let s = build(2, 7);
        assert_eq!(s.order(), 56);
        let lat = enumerate_subgroups(&s).unwrap();
        let v = lattice_decomposition_check(&lat).unwrap();
        assert_eq!((v.lattice_size, v.expected_size, v.sylow_q_conjugates), (25, 25, 8));
        assert_eq!(sd_of_lattice(&lat), ExactRational::new(69, 125));
        assert_eq!(sd_star(&s).unwrap().value, sd_of_lattice(&lat));
        assert!(lat.frattini().order() == 1);
    }

    #[test]
    fn decomposition_sizes() {
        for (p, q, size) in [(3, 2, 6), (2, 3, 10), (5, 2, 8)] {
            let lat = enumerate_subgroups(&build(p, q)).unwrap();
            assert_eq!(lattice_decomposition_check(&lat).unwrap().lattice_size, size);
        }
    }

    #[test]
    fn decomposition_rejects_other_groups() {
        let d8 = enumerate_subgroups(&standard_group("dihedral:8".parse().unwrap()).unwrap()).unwrap();
        assert!(matches!(lattice_decomposition_check(&d8), Err(Error::SylowStructureUnexpected(_))));
        let d12 = enumerate_subgroups(&standard_group("dihedral:12".parse().unwrap()).unwrap()).unwrap();
        assert!(lattice_decomposition_check(&d12).is_err());
    }

    #[test]
    fn reports_on_constructed_groups() {
        for (p, q) in [(3, 2), (2, 3), (2, 7), (5, 2), (7, 3)] {
            let lat = enumerate_subgroups(&build(p, q)).unwrap();
            let rep = structure_report(&lat).unwrap();
            assert!(rep.all_hold(), "{p},{q}: {rep:?}");
            assert!(rep.p_abelian);
            assert_eq!(rep.central_quotient_schmidt, None);
        }
        let a4 = enumerate_subgroups(&build(2, 3)).unwrap();
        let rep = structure_report(&a4).unwrap();
        assert_eq!((rep.p, rep.q, rep.r), (2, 3, 2));
    }

    #[test]
    fn report_on_sl2_3() {
        let s = sl2_3();
        assert_eq!(s.order(), 24);
        let lat = enumerate_subgroups(&s).unwrap();
        let rep = structure_report(&lat).unwrap();
        assert!(!rep.p_abelian);
        assert_eq!(rep.central_quotient_schmidt, Some(true));
        assert!(rep.all_hold(), "{rep:?}");
    }

    #[test]
    fn report_rejects_non_schmidt() {
        let d8 = enumerate_subgroups(&standard_group("dihedral:8".parse().unwrap()).unwrap()).unwrap();
        assert_eq!(structure_report(&d8), Err(Error::NotSchmidt));
    }

    #[test]
    fn census_matches_formula() {
        for (p, q) in [(3, 2), (2, 3), (2, 7), (5, 2)] {
            let lat = enumerate_subgroups(&build(p, q)).unwrap();
            let census = schmidt_census(&lat).unwrap();
            assert_eq!(census.sd(), sd_schmidt_formula(p, q).unwrap().sd_value);
            let b = census.breakdown.unwrap();
            let pr = p.pow(multiplicative_order(p, q).unwrap());
            assert_eq!(b["q_conjugate_with_trivial"], 2 * pr);
            assert_eq!(b["q_conjugate_diagonal"], pr);
            assert_eq!(b["whole_with_whole"], 1);
        }
    }
}
