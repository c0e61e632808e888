use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Group, DEFAULT_ORDER_CAP};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::Subgroup;
use crate::primes::is_prime;

/// Generators of a permutation group acting on `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationGenSet {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl PermutationGenSet {
    pub fn new(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        let set = PermutationGenSet { degree, generators };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.degree {
                return Err(Error::BadSpec(format!(
                    "generator {i} has length {}, expected degree {}",
                    g.len(),
                    self.degree
                )));
            }
            let mut seen = vec![false; self.degree];
            for &x in g {
                if x >= self.degree || seen[x] {
                    return Err(Error::BadSpec(format!("generator {i} is not a bijection")));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }
}

/// Closes a set of permutations under composition and returns the abstract
/// group on the generated elements. Products compose left to right:
/// `(x·y)(i) = y(x(i))`.
pub fn group_from_permutations(gens: &PermutationGenSet, label: impl Into<String>, cap: usize) -> Result<Group> {
    gens.validate()?;
    let d = gens.degree;
    let compose = |x: &[u32], y: &[u32]| -> Vec<u32> { x.iter().map(|&i| y[i as usize]).collect() };
    let gen_perms: Vec<Vec<u32>> = gens.generators.iter().map(|g| g.iter().map(|&x| x as u32).collect()).collect();

    let identity: Vec<u32> = (0..d as u32).collect();
    let mut elems = vec![identity.clone()];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in &gen_perms {
            let p = compose(&elems[i], g);
            if !index.contains_key(&p) {
                if elems.len() >= cap {
                    return Err(Error::OrderCapExceeded { cap, reached: elems.len() + 1 });
                }
                index.insert(p.clone(), elems.len());
                elems.push(p);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            table.push(index[&compose(a, b)] as u32);
        }
    }
    Group::from_raw_unchecked(n, table, label.into())
}

/// Named families of small groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic {
        n: usize,
    },
    /// Dihedral group of the given order (`order/2` rotations).
    Dihedral {
        order: usize,
    },
    Quaternion8,
    ElementaryAbelian {
        p: usize,
        r: u32,
    },
    /// Non-abelian group of order `p^3` and exponent `p`, `p` odd.
    ExtraspecialExponentP {
        p: usize,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    /// Dicyclic group of the given order (a multiple of 4).
    Dicyclic {
        order: usize,
    },
}

impl GroupSpec {
    pub fn label(&self) -> String {
        match *self {
            GroupSpec::Cyclic { n } => format!("Z{n}"),
            GroupSpec::Dihedral { order } => format!("D{order}"),
            GroupSpec::Quaternion8 => "Q8".into(),
            GroupSpec::ElementaryAbelian { p, r } => format!("Z{p}^{r}"),
            GroupSpec::ExtraspecialExponentP { p } => format!("E({p}^3)"),
            GroupSpec::Symmetric { n } => format!("S{n}"),
            GroupSpec::Alternating { n } => format!("A{n}"),
            GroupSpec::Dicyclic { order } => format!("Dic{order}"),
        }
    }

    /// Order of the group described, or `None` on overflow.
    pub fn order(&self) -> Option<usize> {
        let fact = |n: usize| (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        match *self {
            GroupSpec::Cyclic { n } => Some(n),
            GroupSpec::Dihedral { order } | GroupSpec::Dicyclic { order } => Some(order),
            GroupSpec::Quaternion8 => Some(8),
            GroupSpec::ElementaryAbelian { p, r } => p.checked_pow(r),
            GroupSpec::ExtraspecialExponentP { p } => p.checked_pow(3),
            GroupSpec::Symmetric { n } => fact(n),
            GroupSpec::Alternating { n } => fact(n).map(|f| if n >= 2 { f / 2 } else { f }),
        }
    }

    fn validate(&self, cap: usize) -> Result<()> {
        let bad = |m: String| Err(Error::BadSpec(m));
        match *self {
            GroupSpec::Cyclic { n: 0 } => return bad("cyclic order must be positive".into()),
            GroupSpec::Dihedral { order } if order < 2 || order % 2 != 0 => {
                return bad(format!("dihedral order {order} must be even and at least 2"))
            }
            GroupSpec::Dicyclic { order } if order < 4 || order % 4 != 0 => {
                return bad(format!("dicyclic order {order} must be a positive multiple of 4"))
            }
            GroupSpec::ElementaryAbelian { p, .. } if !is_prime(p as u64) => return bad(format!("{p} is not prime")),
            GroupSpec::ExtraspecialExponentP { p } if !is_prime(p as u64) || p == 2 => {
                return bad(format!("extraspecial exponent-p group needs an odd prime, got {p}"))
            }
            GroupSpec::Symmetric { n } | GroupSpec::Alternating { n } if n == 0 => {
                return bad("degree must be positive".into())
            }
            _ => {}
        }
        match self.order() {
            Some(n) if n <= cap => Ok(()),
            Some(n) => Err(Error::OrderCapExceeded { cap, reached: n }),
            None => Err(Error::OrderCapExceeded { cap, reached: usize::MAX }),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupSpec::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral { order } => write!(f, "dihedral:{order}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion8"),
            GroupSpec::ElementaryAbelian { p, r } => write!(f, "elementary_abelian:{p}:{r}"),
            GroupSpec::ExtraspecialExponentP { p } => write!(f, "extraspecial:{p}"),
            GroupSpec::Symmetric { n } => write!(f, "symmetric:{n}"),
            GroupSpec::Alternating { n } => write!(f, "alternating:{n}"),
            GroupSpec::Dicyclic { order } => write!(f, "dicyclic:{order}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `kind[:param[:param]]`, e.g. `dihedral:8`, `elementary_abelian:2:3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::BadSpec(format!("missing parameter in '{s}'")))?
                .parse()
                .map_err(|_| Error::BadSpec(format!("bad parameter in '{s}'")))
        };
        let spec = match parts[0].to_ascii_lowercase().as_str() {
            "cyclic" | "z" => GroupSpec::Cyclic { n: num(1)? },
            "dihedral" | "d" => GroupSpec::Dihedral { order: num(1)? },
            "quaternion8" | "q8" => GroupSpec::Quaternion8,
            "elementary_abelian" | "ea" => GroupSpec::ElementaryAbelian { p: num(1)?, r: num(2)? as u32 },
            "extraspecial" | "extraspecial_exponent_p" => GroupSpec::ExtraspecialExponentP { p: num(1)? },
            "symmetric" | "s" => GroupSpec::Symmetric { n: num(1)? },
            "alternating" | "a" => GroupSpec::Alternating { n: num(1)? },
            "dicyclic" | "dic" => GroupSpec::Dicyclic { order: num(1)? },
            other => return Err(Error::BadSpec(format!("unknown group kind '{other}'"))),
        };
        Ok(spec)
    }
}

pub fn standard_group(spec: GroupSpec) -> Result<Group> {
    standard_group_with_cap(spec, DEFAULT_ORDER_CAP)
}

pub fn standard_group_with_cap(spec: GroupSpec, cap: usize) -> Result<Group> {
    spec.validate(cap)?;
    let label = spec.label();
    match spec {
        GroupSpec::Cyclic { n } => from_fn(n, label, |a, b| (a + b) % n),
        GroupSpec::Dihedral { order } => {
            let n = order / 2;
            // r^i s^j  <->  i + n*j
            from_fn(order, label, |x, y| {
                let (i, a) = (x % n, x / n);
                let (k, b) = (y % n, y / n);
                let rot = if a == 0 { (i + k) % n } else { (i + n - k) % n };
                rot + n * (a ^ b)
            })
        }
        GroupSpec::Quaternion8 => {
            standard_group_with_cap(GroupSpec::Dicyclic { order: 8 }, cap).map(|g| g.with_label(label))
        }
        GroupSpec::Dicyclic { order } => {
            let m = order / 2;
            let half = m / 2;
            // a^i b^j  <->  i + m*j, with a^m = 1, b^2 = a^(m/2), b a = a^-1 b
            from_fn(order, label, |x, y| {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                match (j, l) {
                    (0, _) => (i + k) % m + m * l,
                    (_, 0) => (i + m - k) % m + m,
                    _ => (i + m - k + half) % m,
                }
            })
        }
        GroupSpec::ElementaryAbelian { p, r } => {
            let n = p.pow(r);
            from_fn(n, label, |x, y| {
                let (mut x, mut y, mut out, mut place) = (x, y, 0, 1);
                for _ in 0..r {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                out
            })
        }
        GroupSpec::ExtraspecialExponentP { p } => {
            // Upper unitriangular [[1,a,c],[0,1,b],[0,0,1]] <-> a + p*b + p^2*c
            from_fn(p * p * p, label, |x, y| {
                let (a, b, c) = (x % p, x / p % p, x / (p * p));
                let (a2, b2, c2) = (y % p, y / p % p, y / (p * p));
                let na = (a + a2) % p;
                let nb = (b + b2) % p;
                let nc = (c + c2 + a * b2) % p;
                na + p * nb + p * p * nc
            })
        }
        GroupSpec::Symmetric { n } => {
            let mut gens = Vec::new();
            if n >= 2 {
                let mut t: Vec<usize> = (0..n).collect();
                t.swap(0, 1);
                gens.push(t);
            }
            if n >= 3 {
                gens.push((0..n).map(|i| (i + 1) % n).collect());
            }
            group_from_permutations(&PermutationGenSet { degree: n, generators: gens }, label, cap)
        }
        GroupSpec::Alternating { n } => {
            let gens = (2..n)
                .map(|i| {
                    let mut c: Vec<usize> = (0..n).collect();
                    c[0] = 1;
                    c[1] = i;
                    c[i] = 0;
                    c
                })
                .collect();
            group_from_permutations(&PermutationGenSet { degree: n, generators: gens }, label, cap)
        }
    }
}

fn from_fn(n: usize, label: String, f: impl Fn(usize, usize) -> usize) -> Result<Group> {
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(f(a, b) as u32);
        }
    }
    Group::from_raw_unchecked(n, table, label)
}

pub fn direct_product(g: &Group, h: &Group) -> Result<Group> {
    direct_product_with_cap(g, h, DEFAULT_ORDER_CAP)
}

/// Componentwise product; the pair `(x, y)` has index `x·|H| + y`.
pub fn direct_product_with_cap(g: &Group, h: &Group, cap: usize) -> Result<Group> {
    let (m, k) = (g.order(), h.order());
    let n = m.saturating_mul(k);
    if n > cap {
        return Err(Error::OrderCapExceeded { cap, reached: n });
    }
    from_fn(n, format!("{} x {}", g.label(), h.label()), |x, y| g.mul(x / k, y / k) * k + h.mul(x % k, y % k))
}

pub fn semidirect_product(n: &Group, h: &Group, action: &[Vec<usize>]) -> Result<Group> {
    semidirect_product_with_cap(n, h, action, DEFAULT_ORDER_CAP)
}

/// `N ⋊ H` where `action[h]` is the automorphism of `N` induced by `h`.
/// Multiplication: `(n1, h1)(n2, h2) = (n1 · action[h1](n2), h1 h2)`; the
/// pair `(x, y)` has index `y·|N| + x`.
pub fn semidirect_product_with_cap(n: &Group, h: &Group, action: &[Vec<usize>], cap: usize) -> Result<Group> {
    let (nn, hn) = (n.order(), h.order());
    let total = nn.saturating_mul(hn);
    if total > cap {
        return Err(Error::OrderCapExceeded { cap, reached: total });
    }
    if action.len() != hn {
        return Err(Error::BadArgs(format!("action has {} images, expected {hn}", action.len())));
    }
    for (e, phi) in action.iter().enumerate() {
        if phi.len() != nn {
            return Err(Error::NotAnAutomorphism { element: e, reason: "wrong length".into() });
        }
        let mut seen = vec![false; nn];
        for &x in phi {
            if x >= nn || seen[x] {
                return Err(Error::NotAnAutomorphism { element: e, reason: "not a bijection".into() });
            }
            seen[x] = true;
        }
        for a in 0..nn {
            for b in 0..nn {
                if phi[n.mul(a, b)] != n.mul(phi[a], phi[b]) {
                    return Err(Error::NotAnAutomorphism {
                        element: e,
                        reason: format!("image of {a}·{b} is not the product of images"),
                    });
                }
            }
        }
    }
    for h1 in 0..hn {
        for h2 in 0..hn {
            let composed = &action[h.mul(h1, h2)];
            if (0..nn).any(|x| composed[x] != action[h1][action[h2][x]]) {
                return Err(Error::NotAHomomorphism(h1, h2));
            }
        }
    }
    from_fn(total, format!("{} : {}", n.label(), h.label()), |x, y| {
        let (n1, h1) = (x % nn, x / nn);
        let (n2, h2) = (y % nn, y / nn);
        n.mul(n1, action[h1][n2]) + nn * h.mul(h1, h2)
    })
}

/// `G/N` on left cosets, numbered in order of their smallest element.
pub fn quotient(g: &Group, normal: &Subgroup) -> Result<Group> {
    quotient_with_projection(g, normal).map(|(q, _)| q)
}

/// Like [`quotient`], also returning the projection: element `x` of `g`
/// maps to coset `projection[x]`.
pub fn quotient_with_projection(g: &Group, normal: &Subgroup) -> Result<(Group, Vec<usize>)> {
    let bits = normal.members();
    if bits.len() != g.order() || !g.is_normal(bits) {
        return Err(Error::NotNormal);
    }
    let members: Vec<usize> = bits.iter().collect();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for a in 0..g.order() {
        if coset_of[a] == usize::MAX {
            for &x in &members {
                coset_of[g.mul(a, x)] = reps.len();
            }
            reps.push(a);
        }
    }
    let k = reps.len();
    let label = if members.len() == 1 { g.label().to_string() } else { format!("{}/N{}", g.label(), members.len()) };
    let q = from_fn(k, label, |i, j| coset_of[g.mul(reps[i], reps[j])])?;
    Ok((q, coset_of))
}

pub fn subgroup_as_group(g: &Group, sub: &BitSet) -> Result<Group> {
    subgroup_as_group_with_embedding(g, sub).map(|(h, _)| h)
}

/// Like [`subgroup_as_group`], also returning the embedding: element `i` of
/// the new group is element `embedding[i]` of `g`.
pub fn subgroup_as_group_with_embedding(g: &Group, sub: &BitSet) -> Result<(Group, Vec<usize>)> {
    let sub = Subgroup::from_bits(g, sub.clone())?;
    let elems: Vec<usize> = sub.members().iter().collect();
    let mut index = vec![usize::MAX; g.order()];
    for (i, &e) in elems.iter().enumerate() {
        index[e] = i;
    }
    let label =
        if elems.len() == g.order() { g.label().to_string() } else { format!("{}<{}>", g.label(), elems.len()) };
    let h = from_fn(elems.len(), label, |a, b| index[g.mul(elems[a], elems[b])])?;
    Ok((h, elems))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_closure_basics() {
        let z2 = group_from_permutations(
            &PermutationGenSet { degree: 3, generators: vec![vec![1, 0, 2]] },
            "Z2",
            DEFAULT_ORDER_CAP,
        )
        .unwrap();
        assert_eq!(z2.order(), 2);
        let triv =
            group_from_permutations(&PermutationGenSet { degree: 3, generators: vec![] }, "1", DEFAULT_ORDER_CAP)
                .unwrap();
        assert_eq!(triv.order(), 1);
    }

    #[test]
    fn a5_from_permutations() {
        let gens = PermutationGenSet { degree: 5, generators: vec![vec![1, 2, 3, 4, 0], vec![1, 0, 3, 2, 4]] };
        let a5 = group_from_permutations(&gens, "A5", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(a5.order(), 5 * 4 * 3 * 2 / 2);
    }

    #[test]
    fn permutation_cap() {
        let err = standard_group_with_cap(GroupSpec::Symmetric { n: 4 }, 10).unwrap_err();
        assert!(matches!(err, Error::OrderCapExceeded { .. }));
        let gens = PermutationGenSet { degree: 4, generators: vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]] };
        assert!(matches!(group_from_permutations(&gens, "S4", 10), Err(Error::OrderCapExceeded { .. })));
    }

    #[test]
    fn bad_generator_rejected() {
        assert!(PermutationGenSet::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermutationGenSet::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn spec_parsing_round_trips() {
        for s in [
            "cyclic:12",
            "dihedral:8",
            "quaternion8",
            "elementary_abelian:2:3",
            "extraspecial:3",
            "symmetric:4",
            "alternating:5",
            "dicyclic:12",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("dihedral".parse::<GroupSpec>().is_err());
        assert!("frobnicate:3".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn bad_specs() {
        assert!(standard_group(GroupSpec::Dihedral { order: 7 }).is_err());
        assert!(standard_group(GroupSpec::ExtraspecialExponentP { p: 2 }).is_err());
        assert!(standard_group(GroupSpec::ElementaryAbelian { p: 4, r: 2 }).is_err());
        assert!(standard_group(GroupSpec::Cyclic { n: 0 }).is_err());
        assert!(standard_group(GroupSpec::Cyclic { n: 401 }).is_err());
    }

    #[test]
    fn standard_orders() {
        assert_eq!(standard_group(GroupSpec::Cyclic { n: 1 }).unwrap().order(), 1);
        assert_eq!(standard_group(GroupSpec::Dihedral { order: 8 }).unwrap().order(), 8);
        let e27 = standard_group(GroupSpec::ExtraspecialExponentP { p: 3 }).unwrap();
        assert_eq!(e27.order(), 27);
        assert_eq!(e27.exponent(), 3);
        assert!(!e27.is_abelian());
        let q8 = standard_group(GroupSpec::Quaternion8).unwrap();
        assert_eq!(q8.element_orders().iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(standard_group(GroupSpec::Symmetric { n: 4 }).unwrap().order(), 24);
        assert_eq!(standard_group(GroupSpec::Alternating { n: 4 }).unwrap().order(), 12);
        assert_eq!(standard_group(GroupSpec::Alternating { n: 2 }).unwrap().order(), 1);
    }

    #[test]
    fn dihedral_structure() {
        let d8 = standard_group(GroupSpec::Dihedral { order: 8 }).unwrap();
        let orders = d8.element_orders();
        // 1 identity, 5 involutions, 2 elements of order 4.
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 2);
        assert_eq!(d8.center().order(), 2);
    }

    #[test]
    fn semidirect_rejects_non_automorphism() {
        let z3 = standard_group(GroupSpec::Cyclic { n: 3 }).unwrap();
        let z2 = standard_group(GroupSpec::Cyclic { n: 2 }).unwrap();
        // Swapping 0 and 1 moves the identity: not an automorphism.
        let action = vec![vec![0, 1, 2], vec![1, 0, 2]];
        assert!(matches!(semidirect_product(&z3, &z2, &action), Err(Error::NotAnAutomorphism { element: 1, .. })));
    }

    #[test]
    fn semidirect_rejects_non_homomorphism() {
        let z3 = standard_group(GroupSpec::Cyclic { n: 3 }).unwrap();
        let z3h = standard_group(GroupSpec::Cyclic { n: 3 }).unwrap();
        // Inversion has order 2, so it cannot be the image of a generator of Z3.
        let inv = vec![0, 2, 1];
        let action = vec![vec![0, 1, 2], inv.clone(), inv];
        assert!(matches!(semidirect_product(&z3, &z3h, &action), Err(Error::NotAHomomorphism(..))));
    }

    #[test]
    fn quotient_requires_normal() {
        let s3 = standard_group(GroupSpec::Dihedral { order: 6 }).unwrap();
        // Index 3 is a reflection in the r^i s^j encoding.
        let refl = Subgroup::from_bits(&s3, s3.generate(&[3])).unwrap();
        assert_eq!(quotient(&s3, &refl), Err(Error::NotNormal));
    }

    #[test]
    fn subgroup_as_group_rejects_non_closed() {
        let z4 = standard_group(GroupSpec::Cyclic { n: 4 }).unwrap();
        let bits = BitSet::from_indices(4, [0, 1]);
        assert_eq!(subgroup_as_group(&z4, &bits).unwrap_err(), Error::NotClosed);
    }
}
