//! Classes in the Grothendieck–Witt group of a field and trace forms.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{factorize, legendre, reduced_square_class, valuation};
use crate::field::{Field, FieldError, FieldExtension, FiniteField, Quad, QuadExt, Rationals};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GwError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("cannot decide equality of {0} and {1} over {2}")]
    Undecided(String, String, String),
}

/// Outcome of an equality decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Undecided,
}

/// Fields whose square classes and GW equality this crate can handle.
pub trait GwField: Field {
    /// A representative of `a·k*²`; equal for `a`, `b` iff `a/b` is a square.
    fn square_class_rep(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;

    /// Signs of `a` under each real embedding, in a fixed order.
    fn real_signs(&self, _a: &Self::Elem) -> Vec<i8> {
        Vec::new()
    }

    /// Hasse symbols `Π_{i<j} (a_i, a_j)_p` at the given primes.
    fn hasse(&self, _diag: &[Self::Elem], _primes: &BTreeSet<BigUint>) -> Vec<(BigUint, i8)> {
        Vec::new()
    }

    /// Primes at which Hasse symbols of forms with these entries may be nontrivial.
    fn relevant_primes(&self, _entries: &[Self::Elem]) -> BTreeSet<BigUint> {
        BTreeSet::new()
    }

    /// Whether rank, disc, signatures and Hasse symbols classify forms.
    fn invariants_classify(&self) -> bool;

    /// Further evidence once the invariants agree, for fields where they do not classify.
    fn decide_residual(&self, _a: &[Self::Elem], _b: &[Self::Elem]) -> Verdict {
        Verdict::Undecided
    }
}

// ---------------------------------------------------------------- ℚ

fn integral_rep(a: &BigRational) -> BigInt {
    a.numer() * a.denom()
}

/// Hilbert symbol places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Prime(BigUint),
}

/// `(a, b)_v` over `ℚ_v`: 1 iff `z² = a x² + b y²` has a nontrivial solution.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8, FieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(FieldError::Zero);
    }
    let (a, b) = (integral_rep(a), integral_rep(b));
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => hilbert_at_prime(&a, &b, p),
    })
}

fn strip(n: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let v = valuation(n, p);
    let pv = BigInt::from(p.pow(v));
    (v, n / pv)
}

fn hilbert_at_prime(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (alpha, u) = strip(a, p);
    let (beta, v) = strip(b, p);
    if *p == BigUint::from(2u32) {
        let eight = BigInt::from(8);
        let eps = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&BigInt::from(4)).to_u32().unwrap();
            u32::from(r == 3)
        };
        let omega = |x: &BigInt| -> u32 {
            let r = x.mod_floor(&eight).to_u32().unwrap();
            u32::from(r == 3 || r == 5)
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return if e % 2 == 0 { 1 } else { -1 };
    }
    let eps_p = ((p - 1u32) / 2u32 % 2u32).to_u32().unwrap();
    let mut s: i8 = if (alpha * beta * eps_p) % 2 == 1 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    s
}

impl GwField for Rationals {
    fn square_class_rep(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::Zero);
        }
        Ok(BigRational::from_integer(reduced_square_class(&integral_rep(a))))
    }

    fn real_signs(&self, a: &BigRational) -> Vec<i8> {
        vec![if a.is_negative() { -1 } else { 1 }]
    }

    fn hasse(&self, diag: &[BigRational], primes: &BTreeSet<BigUint>) -> Vec<(BigUint, i8)> {
        primes
            .iter()
            .map(|p| {
                let place = Place::Prime(p.clone());
                let mut s = 1i8;
                for i in 0..diag.len() {
                    for j in i + 1..diag.len() {
                        s *= hilbert_symbol(&diag[i], &diag[j], &place).expect("nonzero entries");
                    }
                }
                (p.clone(), s)
            })
            .collect()
    }

    fn relevant_primes(&self, entries: &[BigRational]) -> BTreeSet<BigUint> {
        let mut out = BTreeSet::new();
        out.insert(BigUint::from(2u32));
        for e in entries {
            let n = integral_rep(e);
            for (p, _) in factorize(n.magnitude()) {
                out.insert(p);
            }
        }
        out
    }

    fn invariants_classify(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------- F_q

impl GwField for FiniteField {
    fn square_class_rep(&self, a: &u32) -> Result<u32, FieldError> {
        if self.is_square(a)? {
            Ok(1)
        } else {
            Ok(self.least_nonresidue())
        }
    }

    fn invariants_classify(&self) -> bool {
        true
    }
}

// ---------------------------------------------------------------- ℚ(√d)

/// Sign of `x + y·√d` for rationals and a positive rational `d`.
fn sign_with_root(x: &BigRational, y: &BigRational, d: &BigRational) -> i8 {
    let sx = x.signum();
    let sy = y.signum();
    if sy.is_zero() || sx == sy {
        return if sx.is_zero() { sy.to_i8().unwrap() } else { sx.to_i8().unwrap() };
    }
    if sx.is_zero() {
        return sy.to_i8().unwrap();
    }
    let lhs = x * x;
    let rhs = y * y * d;
    if lhs > rhs {
        sx.to_i8().unwrap()
    } else {
        sy.to_i8().unwrap()
    }
}

fn small_relations(
    k: &QuadExt<Rationals>,
    a: &[Quad<BigRational>],
) -> Vec<Vec<Quad<BigRational>>> {
    // ⟨u⟩ + ⟨v⟩ = ⟨w⟩ + ⟨uvw⟩ for w = u x² + v y² ≠ 0.
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            for x in -2i64..=2 {
                for y in 0i64..=2 {
                    if x == 0 && y == 0 {
                        continue;
                    }
                    let w = k.add(
                        &k.mul(&a[i], &k.from_i64(x * x)),
                        &k.mul(&a[j], &k.from_i64(y * y)),
                    );
                    if k.is_zero(&w) {
                        continue;
                    }
                    let z = k.mul(&k.mul(&a[i], &a[j]), &w);
                    let mut next: Vec<_> = a
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| *t != i && *t != j)
                        .map(|(_, e)| e.clone())
                        .collect();
                    next.push(k.square_class_rep(&w).unwrap());
                    next.push(k.square_class_rep(&z).unwrap());
                    out.push(next);
                }
            }
        }
    }
    out
}

fn same_classes<K: GwField>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (j, y) in b.iter().enumerate() {
            if !used[j] && k.is_square(&k.div(x, y).unwrap()).unwrap() {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl GwField for QuadExt<Rationals> {
    /// Square classes of `ℚ(√d)` have no cheap canonical form; rational
    /// elements and squares are canonicalized, others keep a content-reduced
    /// representative and are compared through `is_square` of ratios.
    fn square_class_rep(&self, a: &Quad<BigRational>) -> Result<Quad<BigRational>, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::Zero);
        }
        if self.is_square(a)? {
            return Ok(Field::one(self));
        }
        if a.v.is_zero() {
            return Ok(self.lift(&Rationals.square_class_rep(&a.u)?));
        }
        // Clear denominators with a square, then divide out the square part of the content.
        let den = a.u.denom().lcm(a.v.denom());
        let sq = BigRational::from_integer(&den * &den);
        let (u, v) = ((&a.u * &sq).to_integer(), (&a.v * &sq).to_integer());
        let g = u.gcd(&v);
        // `g / r` is a perfect square because `r` divides `g` with `g·r` square.
        let c = (&g / reduced_square_class(&g)).sqrt();
        let c2 = &c * &c;
        let rep = self.make(BigRational::from_integer(u / &c2), BigRational::from_integer(v / &c2));
        Ok(rep)
    }

    fn real_signs(&self, a: &Quad<BigRational>) -> Vec<i8> {
        let d = self.d();
        if d.is_negative() {
            return Vec::new();
        }
        let neg_v = -a.v.clone();
        vec![sign_with_root(&a.u, &a.v, d), sign_with_root(&a.u, &neg_v, d)]
    }

    fn invariants_classify(&self) -> bool {
        false
    }

    fn decide_residual(&self, a: &[Quad<BigRational>], b: &[Quad<BigRational>]) -> Verdict {
        let ra = hyperbolic_reduce(self, a);
        let rb = hyperbolic_reduce(self, b);
        if ra.0 == rb.0 && same_classes(self, &ra.1, &rb.1) {
            return Verdict::Equal;
        }
        if ra.1.len() == rb.1.len() && ra.1.len() <= 4 {
            let mut frontier = vec![ra.1.clone()];
            for _ in 0..2 {
                let mut next = Vec::new();
                for f in &frontier {
                    for g in small_relations(self, f) {
                        let h = hyperbolic_reduce(self, &g);
                        if h.0 + ra.0 == rb.0 && same_classes(self, &h.1, &rb.1) {
                            return Verdict::Equal;
                        }
                        next.push(g);
                    }
                }
                next.truncate(400);
                frontier = next;
            }
        }
        Verdict::Undecided
    }
}

/// Splits off hyperbolic planes `⟨x⟩ + ⟨y⟩` with `−xy` a square.
fn hyperbolic_reduce<K: GwField>(k: &K, a: &[K::Elem]) -> (usize, Vec<K::Elem>) {
    let mut rest: Vec<K::Elem> = a.to_vec();
    let mut h = 0;
    'again: loop {
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let t = k.neg(&k.mul(&rest[i], &rest[j]));
                if k.is_square(&t).unwrap() {
                    rest.remove(j);
                    rest.remove(i);
                    h += 1;
                    continue 'again;
                }
            }
        }
        break;
    }
    (h, rest)
}

// ---------------------------------------------------------------- classes

/// `⟨a₁⟩ + … + ⟨a_r⟩` with canonical, sorted entries.
#[derive(Clone, PartialEq)]
pub struct GwClass<K: GwField> {
    field: K,
    diag: Vec<K::Elem>,
}

impl<K: GwField> fmt::Debug for GwClass<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field.descriptor())
    }
}

impl<K: GwField> fmt::Display for GwClass<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.diag.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.diag.iter().map(|a| format!("⟨{}⟩", self.field.format(a))).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Classification invariants of a form.
#[derive(Debug, Clone, PartialEq)]
pub struct GwInvariants<E> {
    pub rank: usize,
    pub disc: E,
    pub signature: Vec<i64>,
    pub hasse: Vec<(BigUint, i8)>,
}

impl<K: GwField> GwClass<K> {
    pub fn from_diagonal(field: &K, entries: &[K::Elem]) -> Result<Self, GwError> {
        let mut diag = entries
            .iter()
            .map(|a| field.square_class_rep(a))
            .collect::<Result<Vec<_>, _>>()?;
        diag.sort();
        Ok(GwClass { field: field.clone(), diag })
    }

    pub fn zero(field: &K) -> Self {
        GwClass { field: field.clone(), diag: Vec::new() }
    }

    pub fn one_dim(field: &K, a: &K::Elem) -> Result<Self, GwError> {
        Self::from_diagonal(field, std::slice::from_ref(a))
    }

    /// `m·(⟨1⟩ + ⟨−1⟩)`.
    pub fn hyperbolic(field: &K, m: usize) -> Self {
        let mut entries = Vec::new();
        for _ in 0..m {
            entries.push(field.one());
            entries.push(field.neg(&field.one()));
        }
        Self::from_diagonal(field, &entries).expect("units")
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn diag(&self) -> &[K::Elem] {
        &self.diag
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self, GwError> {
        if self.field != other.field {
            return Err(FieldError::ContextMismatch(
                self.field.descriptor(),
                other.field.descriptor(),
            )
            .into());
        }
        let mut diag = self.diag.clone();
        diag.extend(other.diag.iter().cloned());
        diag.sort();
        Ok(GwClass { field: self.field.clone(), diag })
    }

    pub fn sum<'a>(field: &K, items: impl IntoIterator<Item = &'a Self>) -> Result<Self, GwError>
    where
        K: 'a,
    {
        items.into_iter().try_fold(Self::zero(field), |acc, x| acc.add(x))
    }

    /// Multiplication by the rank-one class `⟨c⟩`.
    pub fn scale(&self, c: &K::Elem) -> Result<Self, GwError> {
        let entries: Vec<_> = self.diag.iter().map(|a| self.field.mul(a, c)).collect();
        Self::from_diagonal(&self.field, &entries)
    }

    pub fn disc(&self) -> K::Elem {
        let f = &self.field;
        let prod = self.diag.iter().fold(f.one(), |acc, a| f.mul(&acc, a));
        f.square_class_rep(&prod).expect("nonzero product")
    }

    pub fn signature(&self) -> Vec<i64> {
        let mut sig: Vec<i64> = Vec::new();
        for a in &self.diag {
            let s = self.field.real_signs(a);
            if sig.is_empty() {
                sig = vec![0; s.len()];
            }
            for (acc, x) in sig.iter_mut().zip(s) {
                *acc += x as i64;
            }
        }
        if sig.is_empty() {
            sig = vec![0; self.field.real_signs(&self.field.one()).len()];
        }
        sig
    }

    pub fn invariants(&self) -> GwInvariants<K::Elem> {
        let primes = self.field.relevant_primes(&self.diag);
        GwInvariants {
            rank: self.rank(),
            disc: self.disc(),
            signature: self.signature(),
            hasse: self.field.hasse(&self.diag, &primes),
        }
    }

    pub fn compare(&self, other: &Self) -> Result<Verdict, GwError> {
        if self.field != other.field {
            return Err(FieldError::ContextMismatch(
                self.field.descriptor(),
                other.field.descriptor(),
            )
            .into());
        }
        if self.diag == other.diag {
            return Ok(Verdict::Equal);
        }
        let f = &self.field;
        if self.rank() != other.rank() || self.signature() != other.signature() {
            return Ok(Verdict::NotEqual);
        }
        if f.is_zero(&f.add(&f.one(), &f.one())) {
            return self.compare_reduced(&self.diag, &other.diag);
        }
        let (a, b) = witt_reduce(f, &self.diag, &other.diag)?;
        if a.is_empty() && b.is_empty() {
            return Ok(Verdict::Equal);
        }
        self.compare_reduced(&a, &b)
    }

    fn compare_reduced(&self, a: &[K::Elem], b: &[K::Elem]) -> Result<Verdict, GwError> {
        let f = &self.field;
        let da = a.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
        let db = b.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
        if !f.is_square(&f.div(&da, &db)?)? {
            return Ok(Verdict::NotEqual);
        }
        let mut entries = a.to_vec();
        entries.extend(b.iter().cloned());
        let primes = f.relevant_primes(&entries);
        if f.hasse(a, &primes) != f.hasse(b, &primes) {
            return Ok(Verdict::NotEqual);
        }
        if f.invariants_classify() {
            return Ok(Verdict::Equal);
        }
        Ok(f.decide_residual(a, b))
    }

    /// Equality in `GW(k)`; an undecidable comparison is an error.
    pub fn gw_equal(&self, other: &Self) -> Result<bool, GwError> {
        match self.compare(other)? {
            Verdict::Equal => Ok(true),
            Verdict::NotEqual => Ok(false),
            Verdict::Undecided => Err(GwError::Undecided(
                self.to_string(),
                other.to_string(),
                self.field.descriptor(),
            )),
        }
    }

    pub fn format_entries(&self) -> Vec<String> {
        self.diag.iter().map(|a| self.field.format(a)).collect()
    }
}

/// Witt cancellation of two diagonal forms of equal rank: entries common to
/// both sides are dropped, then hyperbolic pairs `⟨x⟩ + ⟨−x⟩` cancel across
/// sides. Valid in characteristic different from 2.
fn witt_reduce<K: GwField>(f: &K, a: &[K::Elem], b: &[K::Elem]) -> Result<(Vec<K::Elem>, Vec<K::Elem>), GwError> {
    // `⟨x⟩ ≅ ⟨y⟩` iff `xy` is a square; representatives need not be canonical.
    let same = |x: &K::Elem, y: &K::Elem| -> Result<bool, GwError> { Ok(f.is_square(&f.mul(x, y))?) };
    let common = |a: &mut Vec<K::Elem>, b: &mut Vec<K::Elem>| -> Result<(), GwError> {
        let mut i = 0;
        while i < a.len() {
            let mut hit = None;
            for (j, y) in b.iter().enumerate() {
                if same(&a[i], y)? {
                    hit = Some(j);
                    break;
                }
            }
            match hit {
                Some(j) => {
                    a.swap_remove(i);
                    b.swap_remove(j);
                }
                None => i += 1,
            }
        }
        Ok(())
    };
    let pairs = |v: &mut Vec<K::Elem>| -> Result<usize, GwError> {
        let mut n = 0;
        let mut i = 0;
        while i < v.len() {
            let neg = f.neg(&v[i]);
            let mut hit = None;
            for j in i + 1..v.len() {
                if same(&neg, &v[j])? {
                    hit = Some(j);
                    break;
                }
            }
            match hit {
                Some(j) => {
                    v.swap_remove(j);
                    v.swap_remove(i);
                    n += 1;
                }
                None => i += 1,
            }
        }
        Ok(n)
    };
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    common(&mut a, &mut b)?;
    let (ha, hb) = (pairs(&mut a)?, pairs(&mut b)?);
    let h = ha.min(hb);
    let one = f.square_class_rep(&f.one())?;
    let minus = f.square_class_rep(&f.neg(&one))?;
    for (v, extra) in [(&mut a, ha - h), (&mut b, hb - h)] {
        for _ in 0..extra {
            v.push(one.clone());
            v.push(minus.clone());
        }
    }
    common(&mut a, &mut b)?;
    a.sort();
    b.sort();
    Ok((a, b))
}

/// Diagonal entries of a nondegenerate symmetric matrix under congruence.
pub fn diagonalize<K: Field>(k: &K, gram: &Matrix<K::Elem>) -> Result<Vec<K::Elem>, GwError> {
    let n = gram.len();
    let mut g = gram.clone();
    let mut out = Vec::with_capacity(n);
    for step in 0..n {
        if let Some(i) = (step..n).find(|&i| !k.is_zero(&g[i][i])) {
            g.swap(step, i);
            for row in g.iter_mut() {
                row.swap(step, i);
            }
        } else {
            let pair = (step..n)
                .flat_map(|i| (step..n).map(move |j| (i, j)))
                .find(|&(i, j)| !k.is_zero(&g[i][j]));
            let Some((i, j)) = pair else {
                return Err(GwError::Degenerate(format!("rank {step} of {n}")));
            };
            // Add row/column j to i; the new diagonal entry is 2·g_ij ≠ 0.
            for c in 0..n {
                let t = g[j][c].clone();
                g[i][c] = k.add(&g[i][c], &t);
            }
            for row in g.iter_mut() {
                let t = row[j].clone();
                row[i] = k.add(&row[i], &t);
            }
            g.swap(step, i);
            for row in g.iter_mut() {
                row.swap(step, i);
            }
        }
        let pivot = g[step][step].clone();
        let pinv = k.inv(&pivot)?;
        for r in step + 1..n {
            if k.is_zero(&g[r][step]) {
                continue;
            }
            let factor = k.mul(&g[r][step], &pinv);
            for c in step..n {
                let t = k.mul(&factor, &g[step][c]);
                g[r][c] = k.sub(&g[r][c], &t);
            }
            for row in g.iter_mut().skip(step) {
                let t = k.mul(&factor, &row[step]);
                row[r] = k.sub(&row[r], &t);
            }
        }
        out.push(pivot);
    }
    Ok(out)
}

/// Gram matrix of `(x, y) ↦ Tr(a·x·y)` on the extension's basis.
pub fn trace_gram<X: FieldExtension>(
    ext: &X,
    a: &<X::Top as Field>::Elem,
) -> Matrix<<X::Base as Field>::Elem> {
    let top = ext.top();
    let basis = ext.basis();
    basis
        .iter()
        .map(|x| basis.iter().map(|y| ext.trace(&top.mul(a, &top.mul(x, y)))).collect())
        .collect()
}

/// `Tr_{E/k}⟨a⟩`.
pub fn trace_form<X>(ext: &X, a: &<X::Top as Field>::Elem) -> Result<GwClass<X::Base>, GwError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    if ext.top().is_zero(a) {
        return Err(FieldError::Zero.into());
    }
    let entries = diagonalize(ext.base(), &trace_gram(ext, a))?;
    GwClass::from_diagonal(ext.base(), &entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::{FiniteExt, Trivial};

    fn qclass(v: &[(i64, i64)]) -> GwClass<Rationals> {
        let e: Vec<_> = v.iter().map(|&(n, d)| rat(n, d)).collect();
        GwClass::from_diagonal(&Rationals, &e).unwrap()
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(Rationals.square_class_rep(&rat(8, 15)).unwrap(), rat(30, 1));
        assert_eq!(Rationals.square_class_rep(&rat(-9, 1)).unwrap(), rat(-1, 1));
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(f7.square_class_rep(&4).unwrap(), 1);
        assert!(Rationals.square_class_rep(&rat(0, 1)).is_err());
    }

    #[test]
    fn from_diagonal_examples() {
        let c = qclass(&[(8, 15), (-8, 15)]);
        assert_eq!(c.to_string(), "⟨-30⟩+⟨30⟩");
        assert_eq!(qclass(&[]).rank(), 0);
        let f5 = FiniteField::prime(5).unwrap();
        let a = GwClass::from_diagonal(&f5, &[2]).unwrap();
        let b = GwClass::from_diagonal(&f5, &[3]).unwrap();
        assert_eq!(a.add(&b).unwrap().diag(), &[2, 2]);
    }

    #[test]
    fn invariants_of_hyperbolic_forms() {
        let h = GwClass::hyperbolic(&Rationals, 1);
        let inv = h.invariants();
        assert_eq!((inv.rank, inv.disc, inv.signature), (2, rat(-1, 1), vec![0]));
        let c = qclass(&[(30, 1), (-30, 1)]).invariants();
        assert_eq!(c.disc, rat(-1, 1));
        assert_eq!(h.add(&h).unwrap().rank(), 4);
    }

    #[test]
    fn equality_examples() {
        let h = GwClass::hyperbolic(&Rationals, 1);
        assert!(qclass(&[(8, 15), (-8, 15)]).gw_equal(&h).unwrap());
        assert!(!qclass(&[(1, 1), (1, 1)]).gw_equal(&h).unwrap());
        // Same rank, signature and disc; distinguished only at p = 3.
        assert!(!qclass(&[(1, 1), (1, 1)]).gw_equal(&qclass(&[(3, 1), (3, 1)])).unwrap());
        assert!(qclass(&[(1, 1), (1, 1)]).gw_equal(&qclass(&[(2, 1), (2, 1)])).unwrap());
        assert!(qclass(&[(1, 1), (1, 1)]).gw_equal(&qclass(&[(5, 1), (5, 1)])).unwrap());
    }

    #[test]
    fn hyperbolic_pairs_with_unfactored_entries() {
        // Products of two ~80-bit primes stay unfactored; cancellation must not need them.
        let p = BigInt::parse_bytes(b"1208925819614629174706189", 10).unwrap();
        let q = BigInt::parse_bytes(b"1208925819614629174706111", 10).unwrap();
        let a = BigRational::from_integer(&p * &q * BigInt::from(3));
        let b = BigRational::from_integer(&p * &q * BigInt::from(-3 * 49));
        let f = Rationals;
        let g = GwClass::from_diagonal(&f, &[a.clone(), b, rat(5, 1)]).unwrap();
        let h = GwClass::hyperbolic(&f, 1).add(&qclass(&[(20, 1)])).unwrap();
        assert!(g.gw_equal(&h).unwrap());
        let g2 = GwClass::from_diagonal(&f, &[a, rat(-1, 1)]).unwrap();
        assert!(!g2.gw_equal(&GwClass::hyperbolic(&f, 1)).unwrap());
    }

    #[test]
    fn hilbert_symbol_examples() {
        let m1 = rat(-1, 1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Prime(2u32.into())).unwrap(), -1);
        for p in [2u32, 3, 5, 7] {
            assert_eq!(hilbert_symbol(&rat(1, 1), &rat(7, 3), &Place::Prime(p.into())).unwrap(), 1);
        }
    }

    /// Exhaustive: z² + x² + y² ≡ 0 (mod 8) has no solution with x, y, z not all even.
    #[test]
    fn minus_one_minus_one_at_two_by_enumeration() {
        let mut primitive = false;
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..8 {
                    let odd = x % 2 == 1 || y % 2 == 1 || z % 2 == 1;
                    if odd && (x * x + y * y + z * z) % 8 == 0 {
                        primitive = true;
                    }
                }
            }
        }
        assert!(!primitive);
    }

    #[test]
    fn product_formula() {
        let vals = [-15i64, -2, -1, 2, 3, 6, 10, 21, 35, -77];
        for &a in &vals {
            for &b in &vals {
                let (a, b) = (rat(a, 1), rat(b, 1));
                let mut prod = hilbert_symbol(&a, &b, &Place::Infinity).unwrap();
                for p in [2u32, 3, 5, 7, 11] {
                    prod *= hilbert_symbol(&a, &b, &Place::Prime(p.into())).unwrap();
                }
                assert_eq!(prod, 1, "{a} {b}");
            }
        }
    }

    #[test]
    fn trace_forms() {
        assert_eq!(trace_form(&Trivial(Rationals), &rat(3, 2)).unwrap(), qclass(&[(6, 1)]));
        let k = QuadExt::rational(2).unwrap();
        let t = trace_form(&k, &Field::one(&k)).unwrap();
        assert!(t.gw_equal(&qclass(&[(2, 1), (1, 1)])).unwrap());
        // Independent route: the Gram matrix is diag(2, 4) in the basis {1, √2}.
        assert!(t.gw_equal(&qclass(&[(2, 1), (4, 1)])).unwrap());
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn diagonalizes_zero_diagonal() {
        let f = Rationals;
        let g = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        let d = diagonalize(&f, &g).unwrap();
        let c = GwClass::from_diagonal(&f, &d).unwrap();
        assert!(c.gw_equal(&GwClass::hyperbolic(&f, 1)).unwrap());
        assert!(diagonalize(&f, &vec![vec![rat(0, 1); 2]; 2]).is_err());
    }

    #[test]
    fn finite_trace_disc_pattern() {
        for q in [3u32, 5, 7, 11, 13] {
            let base = FiniteField::prime(q).unwrap();
            let top = FiniteField::new(q, 2).unwrap();
            let e = FiniteExt::new(&base, &top).unwrap();
            for a in top.elements().skip(1) {
                let t = trace_form(&e, &a).unwrap();
                assert_eq!(t.rank(), 2);
                let disc_square = base.is_square(&t.disc()).unwrap();
                assert_eq!(disc_square, !top.is_square(&a).unwrap(), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn quadratic_field_decisions() {
        let k = QuadExt::rational(5).unwrap();
        let c = k.parse("2+s").unwrap();
        let a = GwClass::from_diagonal(&k, &[c.clone(), k.neg(&c)]).unwrap();
        assert!(a.gw_equal(&GwClass::hyperbolic(&k, 1)).unwrap());
        let b = GwClass::from_diagonal(&k, &[Field::one(&k), Field::one(&k)]).unwrap();
        assert!(!b.gw_equal(&GwClass::hyperbolic(&k, 1)).unwrap());
        let sq = k.mul(&c, &c);
        let x = k.parse("3-2*s").unwrap();
        let lhs = GwClass::from_diagonal(&k, &[k.mul(&sq, &x)]).unwrap();
        let rhs = GwClass::from_diagonal(&k, &[x]).unwrap();
        assert!(lhs.gw_equal(&rhs).unwrap());
    }
}
