//! Arbitrary precision helpers shared by the group models.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

/// Sign byte, 4-byte length, big-endian magnitude.
pub fn write_int(out: &mut Vec<u8>, x: &Int) {
    let (sign, mag) = x.to_bytes_be();
    out.push(match sign {
        Sign::Minus => 0,
        Sign::NoSign => 1,
        Sign::Plus => 2,
    });
    if sign == Sign::NoSign {
        return;
    }
    out.extend_from_slice(&(mag.len() as u32).to_le_bytes());
    out.extend_from_slice(&mag);
}

/// Representative in [0, n) for n > 0; identity when n == 0.
pub fn reduce(x: &Int, n: &Int) -> Int {
    if n.is_zero() {
        x.clone()
    } else {
        x.mod_floor(n)
    }
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        Int::zero()
    } else {
        a.lcm(b)
    }
}

pub fn to_i64(x: &Int) -> i64 {
    x.to_i64().expect("integer exceeds 64-bit range")
}

pub fn to_u32(x: &Int) -> u32 {
    x.to_u32().expect("exponent exceeds 32-bit range")
}

pub fn pow(base: &Int, e: u32) -> Int {
    num_traits::pow(base.clone(), e as usize)
}

fn mod_pow(b: &Int, e: &Int, m: &Int) -> Int {
    b.modpow(e, m)
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first 13 primes as fixed bases. Exact below 3.3e24.
pub fn is_prime(n: &Int) -> bool {
    let two = int(2);
    if n < &two {
        return false;
    }
    for p in MR_BASES {
        let p = Int::from(p);
        if n == &p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let one = Int::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for a in MR_BASES {
        let mut x = mod_pow(&Int::from(a), &d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&Int::from(n))
}

/// Prime factorization by trial division; only used on small torsion orders.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn abs(x: &Int) -> Int {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_against_sieve() {
        let n = 5000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                let mut j = i * i;
                while j < n {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        for (i, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), p, "{i}");
        }
    }

    #[test]
    fn carmichael_rejected() {
        for c in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 3215031751] {
            assert!(!is_prime_u64(c));
        }
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
    }

    #[test]
    fn serialization_distinguishes() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_int(&mut a, &int(-5));
        write_int(&mut b, &int(5));
        assert_ne!(a, b);
        let mut z = Vec::new();
        write_int(&mut z, &int(0));
        assert_eq!(z, vec![1]);
    }
}
