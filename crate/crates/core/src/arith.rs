//! Integer and rational helpers shared by the rest of the crate.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p.to_string()))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` for `k >= 0`.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), k as usize)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin; the twelve prime witnesses cover all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Distinct prime divisors of `|n|`, ascending. `n = 0` has none by convention.
///
/// Panics if `|n|` has a prime factor that does not fit in 64 bits.
pub fn prime_divisors(n: &BigInt) -> Vec<Prime> {
    let mut rest: BigUint = n.magnitude().clone();
    let mut out: Vec<u64> = Vec::new();
    if rest.is_zero() {
        return Vec::new();
    }
    let mut trial = 2u64;
    while trial < 1 << 12 {
        let t = BigUint::from(trial);
        if (&rest % &t).is_zero() {
            out.push(trial);
            while (&rest % &t).is_zero() {
                rest /= &t;
            }
        }
        trial += if trial == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let small = rest
            .to_u64()
            .expect("prime divisor search is limited to cofactors below 2^64");
        factor_u64_into(small, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(Prime).collect()
}

/// Largest `k` with `p^k | n`, for `n != 0`.
pub fn int_valuation(p: Prime, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let p = p.to_bigint();
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// Inverse of `a` modulo `m > 1`, if it exists, as a representative in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    prime_divisors(&BigInt::from(n))
        .into_iter()
        .all(|p| int_valuation(p, &BigInt::from(n)) == 1)
}

/// `x^k` for any integer `k`; `x` must be nonzero when `k < 0`.
pub fn rat_pow(x: &Rat, k: i64) -> Rat {
    let base = if k < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), brute_prime(n), "n = {n}");
        }
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(91).is_err());
    }

    #[test]
    fn divisors() {
        let ps: Vec<u64> = prime_divisors(&BigInt::from(2024)).into_iter().map(Prime::get).collect();
        assert_eq!(ps, [2, 11, 23]);
        let big = BigInt::from(1_000_003u64) * BigInt::from(999_983u64) * BigInt::from(8);
        let ps: Vec<u64> = prime_divisors(&-big).into_iter().map(Prime::get).collect();
        assert_eq!(ps, [2, 999_983, 1_000_003]);
        assert!(prime_divisors(&BigInt::from(1)).is_empty());
    }

    #[test]
    fn valuations_and_inverses() {
        let two = Prime::new(2).unwrap();
        assert_eq!(int_valuation(two, &BigInt::from(2024)), 3);
        assert_eq!(mod_inverse(&BigInt::from(2), &BigInt::from(27)), Some(BigInt::from(14)));
        assert_eq!(mod_inverse(&BigInt::from(3), &BigInt::from(27)), None);
        assert_eq!(mod_inverse(&BigInt::from(-1), &BigInt::from(5)), Some(BigInt::from(4)));
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(-1));
        assert!(is_squarefree(5));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(-18));
        assert!(!is_squarefree(0));
    }
}
