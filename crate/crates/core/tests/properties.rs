use latdeg::closed_forms::{a_rp, gaussian_binomial, multiplicative_order, schmidt_sd_value, sd_schmidt_formula};
use latdeg::degrees::{pair_census, sd_of_lattice, sd_star, sd_star_exhaustive, subgroups_permute};
use latdeg::group::{canonical_table, direct_product, is_isomorphic, standard_group, GroupSpec};
use latdeg::lattice::{enumerate_subgroups, is_iwasawa, is_nilpotent};
use latdeg::scan::cache::{fingerprint, CANONICAL_BUDGET, CANONICAL_MAX_ORDER};
use latdeg::scan::{threshold, Verdict};
use latdeg::{ExactRational, Group};
use num_bigint::BigInt;
use proptest::prelude::*;

fn small_spec() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1usize..=16).prop_map(|n| GroupSpec::Cyclic { n }),
        (3usize..=12).prop_map(|k| GroupSpec::Dihedral { order: 2 * k }),
        (2usize..=5).prop_map(|k| GroupSpec::Dicyclic { order: 4 * k }),
        Just(GroupSpec::Quaternion8),
        Just(GroupSpec::Alternating { n: 4 }),
        Just(GroupSpec::Symmetric { n: 4 }),
        Just(GroupSpec::ExtraspecialExponentP { p: 3 }),
        prop_oneof![Just((2, 2)), Just((2, 3)), Just((3, 2))].prop_map(|(p, r)| GroupSpec::ElementaryAbelian { p, r }),
    ]
}

/// A standard group, possibly times a small cyclic group.
fn small_group() -> impl Strategy<Value = Group> {
    (small_spec(), 1usize..=3).prop_map(|(spec, c)| {
        let g = standard_group(spec).unwrap();
        if c == 1 {
            g
        } else {
            direct_product(&g, &standard_group(GroupSpec::Cyclic { n: c }).unwrap()).unwrap()
        }
    })
}

fn relabel(g: &Group, perm: &[usize]) -> Group {
    let n = g.order();
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| perm[g.mul(inv[a], inv[b])]).collect()).collect();
    Group::from_table(&rows, g.label()).unwrap()
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gaussian_binomial_is_symmetric(n in 0u32..9, k in 0u32..9, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(k <= n);
        prop_assert_eq!(gaussian_binomial(n, k, p).unwrap(), gaussian_binomial(n, n - k, p).unwrap());
    }

    #[test]
    fn gaussian_pascal_rule(n in 1u32..9, k in 1u32..9, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(k < n);
        let lhs = gaussian_binomial(n, k, p).unwrap();
        let rhs = gaussian_binomial(n - 1, k - 1, p).unwrap()
            + BigInt::from(p).pow(k) * gaussian_binomial(n - 1, k, p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sd_bounds_and_pair_floor(g in small_group()) {
        let lat = enumerate_subgroups(&g).unwrap();
        let c = pair_census(&lat, false);
        let n = lat.len() as u64;
        prop_assert_eq!(c.total_pairs, n * n);
        // Diagonal pairs plus pairs with 1 or G always commute.
        prop_assert!(c.commuting_pairs >= (3 * n).saturating_sub(2).min(n * n));
        let s = c.sd();
        prop_assert!(s > ExactRational::zero() && s <= ExactRational::one());
        prop_assert_eq!(s.is_one(), g.is_abelian() || is_iwasawa(&g).unwrap());
    }

    #[test]
    fn census_matches_set_products(g in small_group()) {
        prop_assume!(g.order() <= 24);
        let lat = enumerate_subgroups(&g).unwrap();
        let subs = lat.subgroups();
        let mut count = 0u64;
        for h in subs {
            for k in subs {
                count += u64::from(subgroups_permute(&g, h, k));
            }
        }
        prop_assert_eq!(pair_census(&lat, false).commuting_pairs, count);
    }

    #[test]
    fn sd_star_routes_agree(g in small_group()) {
        prop_assume!(g.order() <= 32);
        let lat = enumerate_subgroups(&g).unwrap();
        let rec = sd_star(&g).unwrap();
        let (ex, _, _) = sd_star_exhaustive(&lat).unwrap();
        prop_assert_eq!(&rec.value, &ex);
        prop_assert!(rec.value <= sd_of_lattice(&lat));
        let section = rec.section(&g).unwrap();
        prop_assert_eq!(sd_of_lattice(&enumerate_subgroups(&section).unwrap()), rec.value);
    }

    #[test]
    fn relabelling_preserves_invariants(g in small_group().prop_flat_map(|g| { let n = g.order(); (Just(g), shuffled(n)) })) {
        let (g, perm) = g;
        let h = relabel(&g, &perm);
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(is_nilpotent(&g), is_nilpotent(&h));
        let (lg, lh) = (enumerate_subgroups(&g).unwrap(), enumerate_subgroups(&h).unwrap());
        prop_assert_eq!(lg.len(), lh.len());
        prop_assert_eq!(sd_of_lattice(&lg), sd_of_lattice(&lh));
        // Past the search budget the fingerprint falls back to the raw table.
        let invariant = g.is_abelian()
            || (g.order() <= CANONICAL_MAX_ORDER && canonical_table(&g, CANONICAL_BUDGET).is_some());
        if invariant {
            prop_assert_eq!(fingerprint(&g), fingerprint(&h));
        }
    }

    #[test]
    fn abelian_products_have_degree_one(a in 1usize..=12, b in 1usize..=12) {
        let g = direct_product(
            &standard_group(GroupSpec::Cyclic { n: a }).unwrap(),
            &standard_group(GroupSpec::Cyclic { n: b }).unwrap(),
        ).unwrap();
        prop_assert!(sd_of_lattice(&enumerate_subgroups(&g).unwrap()).is_one());
    }

    #[test]
    fn verdict_order(num in 1u64..=100, iwasawa: bool, schmidt: bool) {
        let s = ExactRational::new(num, 100u64);
        let v = Verdict::classify(&s, iwasawa, schmidt);
        let expected = if iwasawa {
            Verdict::Iwasawa
        } else if s <= threshold() {
            Verdict::BelowThreshold
        } else if schmidt {
            Verdict::Schmidt
        } else {
            Verdict::Counterexample
        };
        prop_assert_eq!(v, expected);
    }

    #[test]
    fn schmidt_formula_matches_parts(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), q in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31])) {
        prop_assume!(p != q);
        let rep = sd_schmidt_formula(p, q).unwrap();
        let r = multiplicative_order(p, q).unwrap();
        prop_assert_eq!(rep.r, r);
        prop_assert_eq!(&rep.a_rp, &a_rp(r, p).unwrap());
        let v = schmidt_sd_value(&rep.a_rp, &BigInt::from(p).pow(r));
        prop_assert_eq!(&rep.sd_value, &v);
        prop_assert!(rep.sd_value < ExactRational::one());
    }
}

#[test]
fn abelian_fingerprints_ignore_labelling() {
    let a = standard_group(GroupSpec::ElementaryAbelian { p: 2, r: 4 }).unwrap();
    let z4 = standard_group(GroupSpec::Cyclic { n: 4 }).unwrap();
    let b = direct_product(&z4, &z4).unwrap();
    let perm: Vec<usize> = (0..16).rev().collect();
    assert_eq!(fingerprint(&a), fingerprint(&relabel(&a, &perm)));
    assert_ne!(fingerprint(&a), fingerprint(&b));
    let z2 = standard_group(GroupSpec::Cyclic { n: 2 }).unwrap();
    let c = direct_product(&direct_product(&z4, &z2).unwrap(), &z2).unwrap();
    assert_ne!(fingerprint(&b), fingerprint(&c));
}
