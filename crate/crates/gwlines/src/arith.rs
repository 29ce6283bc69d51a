//! Integer helpers: primality, factorization and square-free parts.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod64(r, b, m);
        }
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter().take(12) {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in SMALL_PRIMES.iter().take(12) {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twenty prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in SMALL_PRIMES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in SMALL_PRIMES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho64(n: u64, c: u64) -> Option<u64> {
    // Brent's cycle detection with batched gcds.
    let f = |x: u64| (mulmod64(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let m = 128u64;
    let mut g = 1u64;
    let (mut x, mut ys) = (0u64, 0u64);
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
                q = mulmod64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn rho_big(n: &BigUint, c: u64, max_r: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let m = 128u64;
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        if r > max_r {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split(n: &BigUint) -> BigUint {
    for c in 1u64.. {
        let found = match n.to_u64() {
            Some(small) => rho64(small, c).map(BigUint::from),
            None => rho_big(n, c, 1 << 36),
        };
        if let Some(d) = found {
            return d;
        }
    }
    unreachable!()
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        factor_into(r.clone(), out);
        factor_into(r, out);
        return;
    }
    let d = split(&n);
    let e = &n / &d;
    factor_into(d, out);
    factor_into(e, out);
}

/// Prime factorization of a positive integer, primes ascending.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factorize(0)");
    let mut rest = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u64;
    while p < 2000 {
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigUint::from(p));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(rest, &mut primes);
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Sign times the product of primes dividing `n` to an odd power.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "squarefree_part(0)");
    let mut acc = BigUint::one();
    for (p, e) in factorize(n.magnitude()) {
        if e % 2 == 1 {
            acc *= p;
        }
    }
    let s = if n.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus };
    BigInt::from_biguint(s, acc)
}

/// Like [`squarefree_part`], but cofactors that resist a short Pollard
/// search are kept whole. The result is in the same square class as `n`
/// and is square-free whenever `n` factors within the budget.
pub fn reduced_square_class(n: &BigInt) -> BigInt {
    assert!(!n.is_zero(), "reduced_square_class(0)");
    let mut rest = n.magnitude().clone();
    let mut acc = BigUint::one();
    let mut p = 2u64;
    while p < 2000 {
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            acc *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    let mut odd: Vec<BigUint> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            continue;
        }
        if m.to_u64().is_some() || is_probable_prime(&m) {
            for (q, e) in factorize(&m) {
                if e % 2 == 1 {
                    odd.push(q);
                }
            }
            continue;
        }
        match (1..4).find_map(|c| rho_big(&m, c, 1 << 14)) {
            Some(d) => {
                let e = &m / &d;
                stack.push(d);
                stack.push(e);
            }
            None => odd.push(m),
        }
    }
    // Split pieces may repeat; a prime appearing twice cancels.
    odd.sort();
    let mut i = 0;
    while i < odd.len() {
        if i + 1 < odd.len() && odd[i] == odd[i + 1] {
            i += 2;
        } else {
            acc *= &odd[i];
            i += 1;
        }
    }
    let s = if n.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus };
    BigInt::from_biguint(s, acc)
}

/// Legendre symbol (a/p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let pi = BigInt::from(p.clone());
    let r = a.mod_floor(&pi).to_biguint().expect("nonnegative residue");
    if r.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if r.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigUint) -> u32 {
    assert!(!n.is_zero());
    let mut m = n.magnitude().clone();
    let mut v = 0;
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_match_trial_division() {
        for n in 1u64..3000 {
            let f = factorize(&BigUint::from(n));
            let mut prod = 1u64;
            for (p, e) in &f {
                let p = p.to_u64().unwrap();
                assert!(is_prime_u64(p));
                prod *= p.pow(*e);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn splits_products_of_large_primes() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let r = BigUint::from(832_976_664_643u64);
        let n = &p * &q * &r * &r;
        let f = factorize(&n);
        assert_eq!(f, vec![(q, 1), (p, 1), (r, 2)]);
    }

    #[test]
    fn reduced_class_matches_squarefree_part_when_factorable() {
        for n in [-72i64, 1, 2, 50, 360, 1_000_003 * 1_000_003 * 7, -(97 * 97 * 101)] {
            let n = BigInt::from(n);
            assert_eq!(reduced_square_class(&n), squarefree_part(&n));
        }
        // Two 80-bit primes are out of budget; the square of one still drops out.
        let p = BigUint::parse_bytes(b"1208925819614629174706189", 10).unwrap();
        let q = BigUint::parse_bytes(b"1208925819614629174706111", 10).unwrap();
        let n = BigInt::from(&p * &p * &q * 3u32);
        let r = reduced_square_class(&n);
        assert!(is_perfect_square(&(&n * &r)));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(-9)), BigInt::from(-1));
        assert_eq!(squarefree_part(&BigInt::from(120)), BigInt::from(30));
        assert_eq!(squarefree_part(&BigInt::from(1)), BigInt::from(1));
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre(&BigInt::from(a), &BigUint::from(p)), expect);
            }
        }
    }
}
