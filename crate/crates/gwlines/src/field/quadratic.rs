use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Field, FieldError, Rationals};

/// `u + v·s` with `s² = d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quad<E> {
    pub u: E,
    pub v: E,
}

/// The quadratic extension `F(√d)` for a non-square `d` of `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt<F: Field> {
    base: F,
    d: F::Elem,
}

impl QuadExt<Rationals> {
    /// `ℚ(√d)` for a squarefree integer `d ∉ {0, 1}`.
    pub fn rational(d: i64) -> Result<Self, FieldError> {
        if d == 0 || d == 1 {
            return Err(FieldError::Invalid(format!("Q(sqrt {d})")));
        }
        let sf = crate::arith::squarefree_part(&BigInt::from(d));
        if sf != BigInt::from(d) {
            return Err(FieldError::Invalid(format!("{d} is not squarefree")));
        }
        QuadExt::new(Rationals, BigRational::from_integer(d.into()))
    }
}

impl<F: Field> QuadExt<F> {
    pub fn new(base: F, d: F::Elem) -> Result<Self, FieldError> {
        if base.characteristic() == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if base.is_zero(&d) || base.sqrt(&d).is_some() {
            return Err(FieldError::Invalid(format!(
                "{} is a square in {}",
                base.format(&d),
                base.descriptor()
            )));
        }
        Ok(QuadExt { base, d })
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn d(&self) -> &F::Elem {
        &self.d
    }

    pub fn make(&self, u: F::Elem, v: F::Elem) -> Quad<F::Elem> {
        Quad { u, v }
    }

    pub fn lift(&self, u: &F::Elem) -> Quad<F::Elem> {
        Quad { u: u.clone(), v: self.base.zero() }
    }

    /// The generator `s = √d`.
    pub fn gen(&self) -> Quad<F::Elem> {
        Quad { u: self.base.zero(), v: self.base.one() }
    }

    pub fn conj(&self, a: &Quad<F::Elem>) -> Quad<F::Elem> {
        Quad { u: a.u.clone(), v: self.base.neg(&a.v) }
    }

    pub fn norm(&self, a: &Quad<F::Elem>) -> F::Elem {
        let b = &self.base;
        b.sub(&b.mul(&a.u, &a.u), &b.mul(&self.d, &b.mul(&a.v, &a.v)))
    }

    fn wrap(&self, s: String) -> String {
        let inner = s.strip_prefix('-').unwrap_or(&s);
        if inner.contains(['+', '-', '*', 's', '(']) {
            format!("({s})")
        } else {
            s
        }
    }
}

/// Splits at top-level `+`/`-` signs, keeping each sign with its term.
fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let after_op = matches!(prev, None | Some('*') | Some('/') | Some('('));
        if depth == 0 && (ch == '+' || ch == '-') && !cur.trim().is_empty() && !after_op {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        terms.push(cur);
    }
    terms
}

fn strip_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        let mut depth = 0;
        for (i, ch) in t.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i != t.len() - 1 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        return &t[1..t.len() - 1];
    }
    t
}

impl<F: Field> Field for QuadExt<F> {
    type Elem = Quad<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Quad { u: self.base.zero(), v: self.base.zero() }
    }
    fn one(&self) -> Self::Elem {
        Quad { u: self.base.one(), v: self.base.zero() }
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        Quad { u: self.base.from_i64(n), v: self.base.zero() }
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Quad { u: self.base.add(&a.u, &b.u), v: self.base.add(&a.v, &b.v) }
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Quad { u: self.base.sub(&a.u, &b.u), v: self.base.sub(&a.v, &b.v) }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Quad { u: self.base.neg(&a.u), v: self.base.neg(&a.v) }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.base;
        let vv = f.mul(&f.mul(&a.v, &b.v), &self.d);
        Quad {
            u: f.add(&f.mul(&a.u, &b.u), &vv),
            v: f.add(&f.mul(&a.u, &b.v), &f.mul(&a.v, &b.u)),
        }
    }
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let n = self.norm(a);
        let ni = self.base.inv(&n)?;
        let c = self.conj(a);
        Ok(Quad { u: self.base.mul(&c.u, &ni), v: self.base.mul(&c.v, &ni) })
    }
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.base;
        if f.is_zero(&a.v) {
            if let Some(x) = f.sqrt(&a.u) {
                return Some(self.lift(&x));
            }
            let t = f.sqrt(&f.div(&a.u, &self.d).ok()?)?;
            return Some(Quad { u: f.zero(), v: t });
        }
        // (x + y s)² = u + v s  ⇔  x² + d y² = u, 2xy = v; then x² = (u ± n)/2 with n² = N(a).
        let n = f.sqrt(&self.norm(a))?;
        let two = f.from_i64(2);
        for cand in [f.add(&a.u, &n), f.sub(&a.u, &n)] {
            let x2 = f.div(&cand, &two).ok()?;
            if f.is_zero(&x2) {
                continue;
            }
            if let Some(x) = f.sqrt(&x2) {
                let y = f.div(&a.v, &f.mul(&two, &x)).ok()?;
                let r = Quad { u: x, v: y };
                debug_assert_eq!(&self.mul(&r, &r), a);
                return Some(r);
            }
        }
        None
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn order(&self) -> Option<u64> {
        self.base.order().map(|q| q * q)
    }
    fn descriptor(&self) -> String {
        format!("{}(sqrt {})", self.base.descriptor(), self.base.format(&self.d))
    }
    fn format(&self, a: &Self::Elem) -> String {
        let f = &self.base;
        if f.is_zero(&a.v) {
            return f.format(&a.u);
        }
        let vpart = if a.v == f.one() {
            "s".to_string()
        } else if a.v == f.neg(&f.one()) {
            "-s".to_string()
        } else {
            format!("{}*s", self.wrap(f.format(&a.v)))
        };
        if f.is_zero(&a.u) {
            return vpart;
        }
        let upart = self.wrap(f.format(&a.u));
        if vpart.starts_with('-') {
            format!("{upart}{vpart}")
        } else {
            format!("{upart}+{vpart}")
        }
    }
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError> {
        let f = &self.base;
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(FieldError::Parse(s.into(), "empty".into()));
        }
        let mut acc = self.zero();
        for term in split_terms(&text) {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, term.trim_start_matches('+').to_string()),
            };
            let val = if body == "s" {
                self.gen()
            } else if let Some(coef) = body.strip_suffix("*s") {
                Quad { u: f.zero(), v: f.parse(strip_parens(coef))? }
            } else {
                self.lift(&f.parse(strip_parens(&body))?)
            };
            acc = self.add(&acc, &if sign { self.neg(&val) } else { val });
        }
        Ok(acc)
    }
}
