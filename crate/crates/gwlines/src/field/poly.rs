//! Dense univariate polynomials over a field, coefficients little-endian.
//!
//! Polynomials are plain `Vec`s normalized to have a nonzero leading
//! coefficient (the zero polynomial is the empty vector).

use super::{Field, FieldError};

pub type Poly<E> = Vec<E>;

pub fn trim<F: Field>(f: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| f.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &Poly<E>) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let out = (0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(f, out)
}

pub fn sub<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let nb: Poly<F::Elem> = b.iter().map(|c| f.neg(c)).collect();
    add(f, a, &nb)
}

pub fn mul<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub fn scale<F: Field>(f: &F, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

/// Quotient and remainder; errors when dividing by the zero polynomial.
pub fn divrem<F: Field>(
    f: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Result<(Poly<F::Elem>, Poly<F::Elem>), FieldError> {
    let db = degree(b).ok_or(FieldError::DivisionByZero)?;
    let lead_inv = f.inv(&b[db])?;
    let mut r = trim(f, a.clone());
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = f.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = f.sub(&r[shift + j], &f.mul(&c, bj));
        }
        q[shift] = c;
        r = trim(f, r);
    }
    Ok((trim(f, q), r))
}

pub fn rem<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    divrem(f, a, b).expect("nonzero modulus").1
}

pub fn monic<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(l) => scale(f, a, &f.inv(l).expect("nonzero leading coefficient")),
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (mut x, mut y) = (trim(f, a.clone()), trim(f, b.clone()));
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn eval<F: Field>(f: &F, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    trim(
        f,
        a.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.from_i64(i as i64), c)).collect(),
    )
}

/// `base^e mod m`.
pub fn powmod<F: Field>(
    f: &F,
    base: &Poly<F::Elem>,
    mut e: u64,
    m: &Poly<F::Elem>,
) -> Poly<F::Elem> {
    let mut acc = rem(f, &vec![f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// The unique polynomial of degree < n through `(xs[i], ys[i])`.
pub fn interpolate<F: Field>(
    f: &F,
    xs: &[F::Elem],
    ys: &[F::Elem],
) -> Result<Poly<F::Elem>, FieldError> {
    let mut out: Poly<F::Elem> = Vec::new();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        if f.is_zero(yi) {
            continue;
        }
        let mut basis = vec![f.one()];
        let mut denom = f.one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = mul(f, &basis, &vec![f.neg(xj), f.one()]);
                denom = f.mul(&denom, &f.sub(xi, xj));
            }
        }
        let c = f.div(yi, &denom)?;
        out = add(f, &out, &scale(f, &basis, &c));
    }
    Ok(out)
}

/// Determinant of the Sylvester matrix.
pub fn resultant<F: Field>(f: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> F::Elem {
    let (m, n) = match (degree(a), degree(b)) {
        (Some(m), Some(n)) => (m, n),
        _ => return f.zero(),
    };
    let size = m + n;
    if size == 0 {
        return f.one();
    }
    let mut rows = vec![vec![f.zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    crate::linalg::det(f, &rows)
}

/// Discriminant of a monic polynomial: `(−1)^{m(m−1)/2} Res(f, f′)`.
pub fn discriminant<F: Field>(f: &F, a: &Poly<F::Elem>) -> F::Elem {
    let m = degree(a).unwrap_or(0);
    let lead = a.last().cloned().unwrap_or_else(|| f.one());
    let r = f.div(&resultant(f, a, &derivative(f, a)), &lead).expect("nonzero leading coefficient");
    if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
        f.neg(&r)
    } else {
        r
    }
}
