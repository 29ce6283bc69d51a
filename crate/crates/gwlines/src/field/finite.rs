use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::poly;
use super::{Field, FieldError};

/// Largest field order with exp/log tables.
const MAX_TABLE_ORDER: u64 = 1 << 24;
const NONE: u32 = u32::MAX;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[i] = log(1 + g^i)`, or `NONE` when `1 + g^i = 0`.
    zech: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
    nonresidue: u32,
}

/// `F_{p^m}` with elements encoded as `Σ c_i p^i` for the coefficient
/// vector `(c_0, …, c_{m−1})` in the power basis of the canonical modulus.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteField({})", self.descriptor())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.m == other.inner.m
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn pow_mod(mut b: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Tonelli-Shanks; `None` for non-residues.
fn sqrt_mod(a: u32, p: u32) -> Option<u32> {
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p as u64 - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p as u64 + 1) / 4, p));
    }
    let mut q = p as u64 - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p as u64 - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut c = pow_mod(z, q, p);
    let mut x = pow_mod(a, (q + 1) / 2, p);
    let mut t = pow_mod(a, q, p);
    let mut m = s;
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    Some(x)
}

impl FiniteField {
    /// `F_{p^m}`; rejects even or composite `p` and orders beyond table range.
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !crate::arith::is_prime_u64(p as u64) || m == 0 {
            return Err(FieldError::Invalid(format!("F {p}^{m}")));
        }
        if m == 1 {
            let mut nonresidue = 2;
            while sqrt_mod(nonresidue, p).is_some() {
                nonresidue += 1;
            }
            return Ok(FiniteField {
                inner: Arc::new(Inner { p, m, q: p, modulus: vec![0, 1], tables: None, nonresidue }),
            });
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_TABLE_ORDER)
            .ok_or_else(|| FieldError::Unsupported(format!("F {p}^{m} is too large")))?
            as u32;
        let modulus = canonical_modulus(p, m);
        let tables = build_tables(p, m, q, &modulus);
        let mut inner = Inner { p, m, q, modulus, tables: Some(tables), nonresidue: 0 };
        // Least encoding with odd discrete log.
        let t = inner.tables.as_ref().unwrap();
        inner.nonresidue = (1..q).find(|&a| t.log[a as usize] % 2 == 1).unwrap();
        Ok(FiniteField { inner: Arc::new(inner) })
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Monic modulus coefficients, little-endian.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn least_nonresidue(&self) -> u32 {
        self.inner.nonresidue
    }

    /// The prime subfield `F_p`.
    pub fn prime_field(&self) -> FiniteField {
        if self.m() == 1 {
            self.clone()
        } else {
            FiniteField::prime(self.p()).expect("prime subfield")
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.inner.p;
        let mut a = a;
        (0..self.inner.m)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        let p = self.inner.p;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d % p)
    }

    /// `a^p`.
    pub fn frobenius(&self, a: &u32) -> u32 {
        match &self.inner.tables {
            None => *a,
            Some(t) => {
                if *a == 0 {
                    return 0;
                }
                let q1 = (self.inner.q - 1) as u64;
                t.exp[((t.log[*a as usize] as u64 * self.inner.p as u64) % q1) as usize]
            }
        }
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        match &self.inner.tables {
            Some(t) => t.exp[1],
            None => {
                let p = self.inner.p;
                let n = p as u64 - 1;
                let mut primes = Vec::new();
                let mut r = n;
                let mut d = 2;
                while d * d <= r {
                    if r % d == 0 {
                        primes.push(d);
                        while r % d == 0 {
                            r /= d;
                        }
                    }
                    d += 1;
                }
                if r > 1 {
                    primes.push(r);
                }
                (1..p).find(|&g| primes.iter().all(|&l| pow_mod(g, n / l, p) != 1)).unwrap()
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q
    }

    /// Discrete log to the primitive element, for nonzero table-backed elements.
    pub fn log(&self, a: u32) -> Option<u32> {
        let t = self.inner.tables.as_ref()?;
        (a != 0).then(|| t.log[a as usize])
    }

    /// Embedding of `sub` as the subfield of matching order, sending the
    /// generator of `sub`'s power basis to the least root of its modulus.
    pub fn embedding_of(&self, sub: &FiniteField) -> Result<Vec<u32>, FieldError> {
        if sub.p() != self.p() || self.m() % sub.m() != 0 {
            return Err(FieldError::Unsupported(format!(
                "{} is not a subfield of {}",
                sub.descriptor(),
                self.descriptor()
            )));
        }
        if sub.m() == 1 {
            return Ok((0..sub.q()).collect());
        }
        let coeffs: Vec<u32> = sub.modulus().to_vec();
        let root = self
            .elements()
            .find(|x| {
                let v = coeffs.iter().rev().fold(0u32, |acc, &c| self.add(&self.mul(&acc, x), &c));
                v == 0
            })
            .expect("modulus has a root in the extension");
        let powers: Vec<u32> = (0..sub.m()).map(|i| self.pow(&root, i as u64)).collect();
        Ok((0..sub.q())
            .map(|a| {
                sub.digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&c, pw)| self.add(&acc, &self.mul(&c, pw)))
            })
            .collect())
    }
}

fn enc_add(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..m {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Product of two encodings modulo `modulus`, by schoolbook multiplication.
fn enc_mul(a: u32, b: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    let da: Vec<u32> = (0..m).map(|i| a / p.pow(i) % p).collect();
    let db: Vec<u32> = (0..m).map(|i| b / p.pow(i) % p).collect();
    let mut prod = vec![0u32; 2 * m as usize];
    for i in 0..m as usize {
        for j in 0..m as usize {
            prod[i + j] = (prod[i + j] + mul_mod(da[i], db[j], p)) % p;
        }
    }
    for k in (m as usize..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &mc) in modulus.iter().take(m as usize).enumerate() {
            let t = k - m as usize + j;
            prod[t] = (prod[t] + p - mul_mod(c, mc, p)) % p;
        }
    }
    prod.iter().take(m as usize).rev().fold(0, |acc, &d| acc * p + d)
}

fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let fp = FiniteField::prime(p).expect("prime");
    let m = f.len() - 1;
    let fpoly: Vec<u32> = f.to_vec();
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..m / 2 {
        xp = poly::powmod(&fp, &xp, p as u64, &fpoly);
        let g = poly::gcd(&fp, &fpoly, &poly::sub(&fp, &xp, &x));
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible of degree `m`, ordering by `Σ c_i p^i` over `i < m`.
fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut f: Vec<u32> = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, m: u32, q: u32, modulus: &[u32]) -> Tables {
    let q1 = q - 1;
    let mut exp = vec![0u32; q1 as usize];
    let mut log = vec![NONE; q as usize];
    for g in 2..q {
        log.iter_mut().for_each(|l| *l = NONE);
        let mut x = 1u32;
        let mut ok = true;
        for i in 0..q1 {
            if log[x as usize] != NONE {
                ok = false;
                break;
            }
            exp[i as usize] = x;
            log[x as usize] = i;
            x = enc_mul(x, g, p, m, modulus);
        }
        if ok && x == 1 {
            break;
        }
    }
    let zech = (0..q1)
        .map(|i| {
            let s = enc_add(exp[i as usize], 1, p, m);
            if s == 0 {
                NONE
            } else {
                log[s as usize]
            }
        })
        .collect();
    Tables { exp, log, zech }
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.inner.p as i64) as u32
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => {
                let s = *a as u64 + *b as u64;
                (if s >= inner.p as u64 { s - inner.p as u64 } else { s }) as u32
            }
            Some(t) => {
                if *a == 0 {
                    return *b;
                }
                if *b == 0 {
                    return *a;
                }
                let q1 = inner.q - 1;
                let la = t.log[*a as usize];
                let lb = t.log[*b as usize];
                let d = if lb >= la { lb - la } else { lb + q1 - la };
                let z = t.zech[d as usize];
                if z == NONE {
                    0
                } else {
                    let s = la + z;
                    t.exp[(if s >= q1 { s - q1 } else { s }) as usize]
                }
            }
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => (inner.p - *a) % inner.p,
            Some(t) => {
                if *a == 0 {
                    return 0;
                }
                let q1 = inner.q - 1;
                t.exp[((t.log[*a as usize] + q1 / 2) % q1) as usize]
            }
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => mul_mod(*a, *b, inner.p),
            Some(t) => {
                if *a == 0 || *b == 0 {
                    return 0;
                }
                let q1 = inner.q - 1;
                let s = t.log[*a as usize] + t.log[*b as usize];
                t.exp[(if s >= q1 { s - q1 } else { s }) as usize]
            }
        }
    }
    fn inv(&self, a: &u32) -> Result<u32, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let inner = &*self.inner;
        Ok(match &inner.tables {
            None => pow_mod(*a, inner.p as u64 - 2, inner.p),
            Some(t) => {
                let q1 = inner.q - 1;
                t.exp[((q1 - t.log[*a as usize]) % q1) as usize]
            }
        })
    }
    fn sqrt(&self, a: &u32) -> Option<u32> {
        let inner = &*self.inner;
        match &inner.tables {
            None => sqrt_mod(*a, inner.p),
            Some(t) => {
                if *a == 0 {
                    return Some(0);
                }
                let l = t.log[*a as usize];
                (l % 2 == 0).then(|| t.exp[(l / 2) as usize])
            }
        }
    }
    fn characteristic(&self) -> u64 {
        self.inner.p as u64
    }
    fn order(&self) -> Option<u64> {
        Some(self.inner.q as u64)
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        let inner = &*self.inner;
        match &inner.tables {
            None => pow_mod(*a, e, inner.p),
            Some(t) => {
                if e == 0 {
                    return 1;
                }
                if *a == 0 {
                    return 0;
                }
                let q1 = (inner.q - 1) as u64;
                t.exp[((t.log[*a as usize] as u64 * (e % q1)) % q1) as usize]
            }
        }
    }
    fn descriptor(&self) -> String {
        if self.inner.m == 1 {
            format!("F {}", self.inner.p)
        } else {
            format!("F {}^{}", self.inner.p, self.inner.m)
        }
    }
    fn format(&self, a: &u32) -> String {
        if self.inner.m == 1 {
            a.to_string()
        } else {
            let d: Vec<String> = self.digits(*a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", d.join(","))
        }
    }
    fn parse(&self, s: &str) -> Result<u32, FieldError> {
        let t = s.trim();
        let bad = || FieldError::Parse(s.to_string(), self.descriptor());
        if let Some(body) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs: Vec<i64> = body
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            if coeffs.len() != self.inner.m as usize {
                return Err(bad());
            }
            let digits: Vec<u32> = coeffs.iter().map(|&c| self.from_i64(c)).collect();
            return Ok(self.from_digits(&digits));
        }
        let n: i64 = t.parse().map_err(|_| bad())?;
        Ok(self.from_i64(n))
    }
}

/// Lookup from encodings of a subfield's image back to the subfield.
pub(crate) fn inverse_map(map: &[u32]) -> HashMap<u32, u32> {
    map.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect()
}
