//! Exact evaluation of the closed forms for `sd` of the dihedral,
//! extraspecial and minimal Schmidt families, and numeric evidence for their
//! limiting behaviour.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::{is_prime, prime_factors, primes};
use crate::rational::ExactRational;

/// Number of `k`-dimensional subspaces of an `n`-dimensional space over a
/// field with `p` elements. The running product is integral after every
/// step, so each division is exact.
pub fn gaussian_binomial(n: u32, k: u32, p: u64) -> Result<BigInt> {
    if k > n || p < 2 {
        return Err(Error::BadArgs(format!("gaussian_binomial({n}, {k}, {p})")));
    }
    let p = BigInt::from(p);
    let mut acc = BigInt::one();
    for i in 1..=k {
        let num = p.pow(n - k + i) - 1u32;
        let den = p.pow(i) - 1u32;
        acc = acc * num / den;
    }
    Ok(acc)
}

/// Total number of subgroups of the elementary abelian group of order `p^r`.
pub fn a_rp(r: u32, p: u64) -> Result<BigInt> {
    if r == 0 || !is_prime(p) {
        return Err(Error::BadArgs(format!("a_rp needs r >= 1 and p prime, got r={r}, p={p}")));
    }
    (0..=r).map(|k| gaussian_binomial(r, k, p)).sum()
}

/// Degree of `p -> a_rp(r, p)` as a polynomial: `⌊r²/4⌋`.
pub fn degree_check_f_r(r: u32) -> u32 {
    r * r / 4
}

/// Coefficients (constant term first) of the interpolating polynomial
/// through the given points, by Newton divided differences.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let xs: Vec<BigRational> = points.iter().map(|(x, _)| BigRational::from(x.clone())).collect();
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| BigRational::from(y.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Horner-style expansion of the Newton form into monomial coefficients.
    let mut coeffs = vec![BigRational::zero(); n.max(1)];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![BigRational::zero(); n.max(1)];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j + 1 < next.len() {
                next[j + 1] += c;
            }
            next[j] -= c * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

pub fn evaluate(coeffs: &[BigRational], x: &BigInt) -> BigRational {
    let x = BigRational::from(x.clone());
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Smallest `d` such that the polynomial through `a_rp(r, ·)` at the first
/// `d + 1` primes reproduces it at the next `extra` primes.
pub fn interpolated_degree(r: u32, extra: usize) -> Result<(u32, Vec<BigRational>)> {
    let ps: Vec<u64> = primes().take(r as usize * r as usize / 4 + 2 + extra).collect();
    for d in 0..ps.len() - extra {
        let pts: Vec<(BigInt, BigInt)> =
            ps[..=d].iter().map(|&p| Ok((BigInt::from(p), a_rp(r, p)?))).collect::<Result<_>>()?;
        let poly = interpolate(&pts);
        let predicts = ps[d + 1..d + 1 + extra]
            .iter()
            .all(|&p| evaluate(&poly, &BigInt::from(p)) == BigRational::from(a_rp(r, p).unwrap()));
        if predicts {
            return Ok((d as u32, poly));
        }
    }
    Err(Error::BadArgs(format!("no polynomial fit for r = {r}")))
}

/// `sd(D_{2r}) = (7r+9)/(r+3)²` for an odd prime `r`.
pub fn sd_dihedral_2r(r: u64) -> Result<ExactRational> {
    if r < 3 || !is_prime(r) {
        return Err(Error::BadArgs(format!("r must be an odd prime, got {r}")));
    }
    let r = BigInt::from(r);
    Ok(ExactRational::new(&r * 7 + 9, BigInt::pow(&(&r + 3), 2)))
}

/// `sd(E(p³)) = (3p³+12p²+16p+16)/(p²+2p+4)²` for an odd prime `p`.
pub fn sd_e_p3(p: u64) -> Result<ExactRational> {
    if p < 3 || !is_prime(p) {
        return Err(Error::BadArgs(format!("p must be an odd prime, got {p}")));
    }
    let p = BigInt::from(p);
    let num = p.pow(3) * 3 + p.pow(2) * 12 + &p * 16 + 16;
    let den: BigInt = p.pow(2) + &p * 2 + 4;
    let den = den.pow(2);
    Ok(ExactRational::new(num, den))
}

/// Least `r ≥ 1` with `p^r ≡ 1 (mod q)`.
pub fn multiplicative_order(p: u64, q: u64) -> Result<u32> {
    if p == q || !is_prime(p) || !is_prime(q) {
        return Err(Error::BadArgs(format!("need distinct primes, got p={p}, q={q}")));
    }
    let mut x = p % q;
    let mut r = 1;
    while x != 1 {
        x = x * (p % q) % q;
        r += 1;
    }
    Ok(r)
}

/// `(a² + 2a + 7p^r + 1)/(a + p^r + 1)²` with `a = a_rp`.
pub fn schmidt_sd_value(a: &BigInt, p_pow_r: &BigInt) -> ExactRational {
    let num = a * a + a * 2 + p_pow_r * 7 + 1;
    let den: BigInt = a + p_pow_r + 1;
    let den = den.pow(2);
    ExactRational::new(num, den)
}

fn big_to_string<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Exact `sd` of the minimal Schmidt group of order `p^r q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub p: u64,
    pub q: u64,
    pub r: u32,
    #[serde(serialize_with = "big_to_string")]
    pub a_rp: BigInt,
    #[serde(serialize_with = "big_to_string")]
    pub p_pow_r: BigInt,
    pub sd_value: ExactRational,
    pub decimal: String,
}

pub fn sd_schmidt_formula(p: u64, q: u64) -> Result<FormulaReport> {
    let r = multiplicative_order(p, q)?;
    let a = a_rp(r, p)?;
    let p_pow_r = BigInt::from(p).pow(r);
    let sd_value = schmidt_sd_value(&a, &p_pow_r);
    Ok(FormulaReport { p, q, r, decimal: sd_value.decimal(), a_rp: a, p_pow_r, sd_value })
}

/// `Φ_r(p)` via the Möbius product over divisors of `r`.
fn cyclotomic_value(r: u32, p: u64) -> BigInt {
    let mobius = |mut n: u32| -> i32 {
        let mut sign = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                sign = -sign;
            }
            d += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    };
    let p = BigInt::from(p);
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for d in (1..=r).filter(|d| r.is_multiple_of(*d)) {
        match mobius(r / d) {
            1 => num *= p.pow(d) - 1u32,
            -1 => den *= p.pow(d) - 1u32,
            _ => {}
        }
    }
    num / den
}

/// Primes `q` with `ord_q(p) = r`, ascending. Every such `q` divides
/// `Φ_r(p)`, so the candidates are exactly its prime factors.
pub fn admissible_qs(p: u64, r: u32) -> Vec<u64> {
    let Ok(phi) = u128::try_from(cyclotomic_value(r, p)) else { return Vec::new() };
    let mut qs: Vec<u64> = prime_factors(phi)
        .into_iter()
        .filter_map(|q| u64::try_from(q).ok())
        .filter(|&q| q != p && multiplicative_order(p, q).ok() == Some(r))
        .collect();
    qs.sort_unstable();
    qs
}

pub fn smallest_admissible_q(p: u64, r: u32) -> Option<u64> {
    admissible_qs(p, r).first().copied()
}

/// How the companion prime `q` is picked for each `p` of a limit table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QChoice {
    /// Smallest admissible `q` for each `p`.
    #[default]
    Smallest,
    /// Smallest admissible `q` above the previous row's `q`; primes `p`
    /// without one are skipped, so both `p` and `q` increase strictly.
    StrictlyIncreasing,
}

/// One row of a limit table: `sd` of the minimal Schmidt group of order
/// `p^r q`, which depends on `(p, r)` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitRow {
    pub p: u64,
    pub q: u64,
    pub r: u32,
    pub sd: ExactRational,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitTable {
    pub r: u32,
    pub rows: Vec<LimitRow>,
}

impl LimitTable {
    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].sd < w[1].sd)
    }

    /// First index from which the values decrease strictly to the end.
    pub fn strictly_decreasing_from(&self) -> Option<usize> {
        if self.rows.is_empty() {
            return None;
        }
        let mut start = self.rows.len() - 1;
        while start > 0 && self.rows[start - 1].sd > self.rows[start].sd {
            start -= 1;
        }
        Some(start)
    }

    pub fn first_above(&self, c: &ExactRational) -> Option<&LimitRow> {
        self.rows.iter().find(|row| row.sd > *c)
    }

    pub fn first_below(&self, eps: &ExactRational) -> Option<&LimitRow> {
        self.rows.iter().find(|row| row.sd < *eps)
    }
}

/// Evaluates the Schmidt formula along increasing primes `p` that admit a
/// prime `q` with `ord_q(p) = r`, taking the smallest such `q`. Primes up to
/// `p_bound` are tried.
pub fn limit_diagnostics(r: u32, count: usize, p_bound: u64) -> Result<LimitTable> {
    limit_diagnostics_with(r, count, p_bound, QChoice::Smallest)
}

pub fn limit_diagnostics_with(r: u32, count: usize, p_bound: u64, choice: QChoice) -> Result<LimitTable> {
    if r == 0 {
        return Err(Error::BadArgs("r must be positive".into()));
    }
    let mut rows: Vec<LimitRow> = Vec::with_capacity(count);
    for p in primes().take_while(|&p| p <= p_bound) {
        if rows.len() == count {
            break;
        }
        let floor = match choice {
            QChoice::Smallest => 0,
            QChoice::StrictlyIncreasing => rows.last().map_or(0, |row| row.q),
        };
        let Some(q) = admissible_qs(p, r).into_iter().find(|&q| q > floor) else { continue };
        let a = a_rp(r, p)?;
        let sd = schmidt_sd_value(&a, &BigInt::from(p).pow(r));
        rows.push(LimitRow { p, q, r, decimal: sd.decimal(), sd });
    }
    if rows.len() < count {
        return Err(Error::NoAdmissiblePair { r, bound: p_bound });
    }
    Ok(LimitTable { r, rows })
}

/// `true` when every coefficient is an integer.
pub fn has_integer_coefficients(coeffs: &[BigRational]) -> bool {
    coeffs.iter().all(|c| c.is_integer() && !c.denom().is_negative())
}
