//! Small-integer number theory helpers.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in increasing order starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// Distinct prime factors of `n` in increasing order.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u128, mut exp: u128, modulus: u128) -> u128 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes().take(6).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
        assert!(!is_prime(1) && !is_prime(91) && is_prime(97));
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(31), vec![31]);
        assert_eq!(prime_factors(2u128.pow(10) - 1), vec![3, 11, 31]);
        assert_eq!(prime_factors(1), Vec::<u128>::new());
        assert_eq!(pow_mod(2, 5, 31), 1);
    }
}
