//! Checked 128-bit integer helpers, square tests, prime sieves and factorization.

use crate::error::{Error, Result};
use std::sync::OnceLock;

#[inline]
pub fn cmul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

#[inline]
pub fn cadd(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub fn csub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Sum of products `Σ cᵢ·Πⱼ xᵢⱼ` with every step checked.
pub fn csum_prod(terms: &[(i128, &[i128])]) -> Result<i128> {
    let mut acc: i128 = 0;
    for (c, xs) in terms {
        let mut t = *c;
        for x in xs.iter() {
            t = cmul(t, *x)?;
        }
        acc = cadd(acc, t)?;
    }
    Ok(acc)
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

pub fn gcd3(a: i128, b: i128, c: i128) -> i128 {
    gcd(gcd(a, b), c)
}

/// Mathematical residue in `[0, m)`.
#[inline]
pub fn modp(a: i128, m: i128) -> i128 {
    a.rem_euclid(m)
}

#[inline]
pub fn divides(d: i128, n: i128) -> bool {
    n.rem_euclid(d) == 0
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    // correct the float estimate in both directions
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

/// Floor square root of a nonnegative integer.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative");
    isqrt_u128(n as u128) as i128
}

/// Smallest r ≥ 0 with r² ≥ n (n ≥ 0).
pub fn ceil_sqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Exact square test; negative numbers are never squares.
pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    // cheap residue filter mod 64
    if (0x0202_0212_0203_0213_u64 >> (n & 63)) & 1 == 0 {
        return false;
    }
    let r = isqrt(n);
    r * r == n
}

pub fn odd_part(n: i128) -> i128 {
    let n = n.abs();
    if n == 0 {
        return 0;
    }
    n >> n.trailing_zeros()
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: usize) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut comp = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut i = 2usize;
    while i <= limit {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                comp[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    out
}

const SMALL_LIMIT: usize = 1_000_000;

/// Shared read-only table of primes below 10⁶.
pub fn small_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| primes_up_to(SMALL_LIMIT))
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a * b) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut r: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            r = addmod(r, a, m);
        }
        a = addmod(a, a, m);
        b >>= 1;
    }
    r
}

#[inline]
fn addmod(a: u128, b: u128, m: u128) -> u128 {
    let s = a.wrapping_add(b);
    if s >= m || s < a {
        s.wrapping_sub(m)
    } else {
        s
    }
}

fn powmod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r: u128 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_EXTRA: [u128; 8] = [43, 47, 53, 59, 61, 67, 71, 73];

/// Strong-pseudoprime test with the first thirteen prime bases (deterministic below
/// 3.3·10²⁴); eight further bases are added above that range.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in MR_BASES.iter() {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let big = n >= 3_317_044_064_679_887_385_961_981u128;
    let bases = MR_BASES.iter().chain(MR_EXTRA.iter().filter(|_| big));
    'outer: for &a in bases {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite odd n.
fn rho(n: u128) -> u128 {
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| addmod(mulmod(x, x, n), c, n);
        let (mut x, mut y, mut q, mut g) = (2u128, 2u128, 1u128, 1u128);
        let mut ys = 2u128;
        let mut r: u64 = 1;
        let m: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd_u(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = isqrt_u128(n);
    if r * r == n {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    let d = if n < (SMALL_LIMIT as u128) * (SMALL_LIMIT as u128) {
        small_primes()
            .iter()
            .map(|&p| p as u128)
            .find(|&p| n % p == 0)
            .expect("composite below the sieve bound squared has a small factor")
    } else {
        rho(n)
    };
    split_large(d, out);
    split_large(n / d, out);
}

/// Prime factorization of |n| as sorted (prime, exponent) pairs. `factor(0)` and
/// `factor(±1)` are empty.
pub fn factor(n: i128) -> Vec<(u128, u32)> {
    let mut n = n.unsigned_abs();
    let mut out: Vec<(u128, u32)> = Vec::new();
    if n == 0 {
        return out;
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.push((2, tz));
        n >>= tz;
    }
    for &p in small_primes().iter().skip(1) {
        let p = p as u128;
        if p * p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_large(n, &mut rest);
        rest.sort_unstable();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    out
}

/// Distinct prime divisors of |n|.
pub fn prime_divisors(n: i128) -> Vec<u128> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors from a factorization.
pub fn divisors_from(fac: &[(u128, u32)]) -> Vec<i128> {
    let mut ds: Vec<i128> = vec![1];
    for &(p, e) in fac {
        let len = ds.len();
        let mut pk: i128 = 1;
        for _ in 0..e {
            pk *= p as i128;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

pub fn divisors(n: i128) -> Vec<i128> {
    divisors_from(&factor(n))
}

pub fn is_squarefree(n: i128) -> bool {
    n != 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

/// Bit table marking n ≤ limit whose odd part is squarefree.
pub struct OddSquarefreeTable {
    limit: u64,
    bits: Vec<u64>,
}

impl OddSquarefreeTable {
    pub fn new(limit: u64) -> Self {
        let words = (limit / 64 + 1) as usize;
        let mut bits = vec![u64::MAX; words];
        bits[0] &= !1; // zero is divisible by every square
        let root = isqrt_u128(limit as u128) as usize;
        for p in primes_up_to(root.max(2)).into_iter().skip(1) {
            let q = p * p;
            let mut j = q;
            while j <= limit {
                bits[(j / 64) as usize] &= !(1u64 << (j % 64));
                j += q;
            }
        }
        OddSquarefreeTable { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// True iff no odd prime square divides n (n = 0 gives false).
    #[inline]
    pub fn odd_squarefree(&self, n: i128) -> bool {
        let a = n.unsigned_abs();
        if a <= self.limit as u128 {
            let a = a as u64;
            (self.bits[(a / 64) as usize] >> (a % 64)) & 1 == 1
        } else {
            n != 0 && factor(n).iter().all(|&(p, e)| p == 2 || e == 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares() {
        for n in -5..2000i128 {
            let r = (0..50).any(|k: i128| k * k == n);
            assert_eq!(is_square(n), r, "{n}");
        }
        assert!(is_square((1i128 << 60) * (1i128 << 60)));
    }

    #[test]
    fn factor_roundtrip() {
        for n in 1..5000i128 {
            let f = factor(n);
            let prod: i128 = f.iter().map(|&(p, e)| (p as i128).pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        let big: i128 = 1_000_000_007 * 998_244_353 * 1_000_003;
        let f = factor(big);
        assert_eq!(f.len(), 3);
        let m: i128 = (1i128 << 61) - 1;
        assert_eq!(factor(m * m), vec![(m as u128, 2)]);
    }

    #[test]
    fn sqfree_table() {
        let t = OddSquarefreeTable::new(10_000);
        for n in 0..10_000i128 {
            let want = n != 0 && factor(n).iter().all(|&(p, e)| p == 2 || e == 1);
            assert_eq!(t.odd_squarefree(n), want, "{n}");
            assert_eq!(t.odd_squarefree(-n), want);
        }
        assert!(t.odd_squarefree(4 * 10_007));
        assert!(!t.odd_squarefree(9 * 10_007));
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(ceil_sqrt(15), 4);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(ceil_sqrt(0), 0);
    }
}
