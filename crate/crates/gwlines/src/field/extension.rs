use std::collections::HashMap;
use std::sync::Arc;

use super::finite::inverse_map;
use super::{Field, FieldError, FiniteField, QuadExt};

/// A finite separable extension `Top / Base` with a chosen `Base`-basis.
pub trait FieldExtension: Clone + Send + Sync {
    type Base: Field;
    type Top: Field;

    fn base(&self) -> &Self::Base;
    fn top(&self) -> &Self::Top;
    fn degree(&self) -> usize;
    fn embed(&self, a: &<Self::Base as Field>::Elem) -> <Self::Top as Field>::Elem;
    /// The preimage of `a` when it lies in the base field.
    fn restrict(&self, a: &<Self::Top as Field>::Elem) -> Option<<Self::Base as Field>::Elem>;
    fn basis(&self) -> Vec<<Self::Top as Field>::Elem>;
    fn trace(&self, a: &<Self::Top as Field>::Elem) -> <Self::Base as Field>::Elem;
}

/// `k / k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trivial<F: Field>(pub F);

impl<F: Field> FieldExtension for Trivial<F> {
    type Base = F;
    type Top = F;

    fn base(&self) -> &F {
        &self.0
    }
    fn top(&self) -> &F {
        &self.0
    }
    fn degree(&self) -> usize {
        1
    }
    fn embed(&self, a: &F::Elem) -> F::Elem {
        a.clone()
    }
    fn restrict(&self, a: &F::Elem) -> Option<F::Elem> {
        Some(a.clone())
    }
    fn basis(&self) -> Vec<F::Elem> {
        vec![self.0.one()]
    }
    fn trace(&self, a: &F::Elem) -> F::Elem {
        a.clone()
    }
}

impl<F: Field> FieldExtension for QuadExt<F> {
    type Base = F;
    type Top = QuadExt<F>;

    fn base(&self) -> &F {
        QuadExt::base(self)
    }
    fn top(&self) -> &QuadExt<F> {
        self
    }
    fn degree(&self) -> usize {
        2
    }
    fn embed(&self, a: &F::Elem) -> <QuadExt<F> as Field>::Elem {
        self.lift(a)
    }
    fn restrict(&self, a: &<QuadExt<F> as Field>::Elem) -> Option<F::Elem> {
        QuadExt::base(self).is_zero(&a.v).then(|| a.u.clone())
    }
    fn basis(&self) -> Vec<<QuadExt<F> as Field>::Elem> {
        vec![Field::one(self), self.gen()]
    }
    /// Trace of the multiplication matrix `[[u, d·v], [v, u]]` in the basis `{1, s}`.
    fn trace(&self, a: &<QuadExt<F> as Field>::Elem) -> F::Elem {
        let f = QuadExt::base(self);
        let col = |b: &<QuadExt<F> as Field>::Elem| self.mul(a, b);
        let m11 = col(&Field::one(self)).u;
        let m22 = col(&self.gen()).v;
        f.add(&m11, &m22)
    }
}

/// `F_{q^r} / F_q` for table-backed or prime fields of a common characteristic.
#[derive(Clone)]
pub struct FiniteExt {
    base: FiniteField,
    top: FiniteField,
    map: Arc<Vec<u32>>,
    back: Arc<HashMap<u32, u32>>,
    degree: usize,
}

impl std::fmt::Debug for FiniteExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteExt({} / {})", self.top.descriptor(), self.base.descriptor())
    }
}

impl FiniteExt {
    pub fn new(base: &FiniteField, top: &FiniteField) -> Result<Self, FieldError> {
        let map = top.embedding_of(base)?;
        let back = inverse_map(&map);
        Ok(FiniteExt {
            base: base.clone(),
            top: top.clone(),
            map: Arc::new(map),
            back: Arc::new(back),
            degree: (top.m() / base.m()) as usize,
        })
    }

    /// The Frobenius of `Top / Base`, `a ↦ a^{|Base|}`.
    pub fn relative_frobenius(&self, a: &u32) -> u32 {
        let mut b = *a;
        for _ in 0..self.base.m() {
            b = self.top.frobenius(&b);
        }
        b
    }

    fn trace_by_frobenius(&self, a: &u32) -> u32 {
        let mut acc = 0;
        let mut b = *a;
        for _ in 0..self.degree {
            acc = self.top.add(&acc, &b);
            b = self.relative_frobenius(&b);
        }
        *self.back.get(&acc).expect("trace lies in the base field")
    }

    /// Trace of multiplication by `a` in the power basis, prime base only.
    fn trace_by_matrix(&self, a: &u32) -> u32 {
        let t = &self.top;
        let mut acc = 0;
        for i in 0..t.m() {
            let xi = t.from_digits(&unit(t.m(), i));
            let col = t.digits(t.mul(a, &xi));
            acc = self.base.add(&acc, &col[i as usize]);
        }
        acc
    }
}

fn unit(m: u32, i: u32) -> Vec<u32> {
    (0..m).map(|j| u32::from(j == i)).collect()
}

impl FieldExtension for FiniteExt {
    type Base = FiniteField;
    type Top = FiniteField;

    fn base(&self) -> &FiniteField {
        &self.base
    }
    fn top(&self) -> &FiniteField {
        &self.top
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn embed(&self, a: &u32) -> u32 {
        self.map[*a as usize]
    }
    fn restrict(&self, a: &u32) -> Option<u32> {
        self.back.get(a).copied()
    }
    fn basis(&self) -> Vec<u32> {
        if self.base.m() == 1 {
            (0..self.top.m()).map(|i| self.top.from_digits(&unit(self.top.m(), i))).collect()
        } else {
            let g = self.top.primitive_element();
            (0..self.degree).map(|i| self.top.pow(&g, i as u64)).collect()
        }
    }
    fn trace(&self, a: &u32) -> u32 {
        if self.base.m() == 1 {
            self.trace_by_matrix(a)
        } else {
            self.trace_by_frobenius(a)
        }
    }
}

/// The composite `C / A` of `B / A` and `C / B`.
#[derive(Debug, Clone)]
pub struct Tower<L, U> {
    pub lower: L,
    pub upper: U,
}

impl<L, U> Tower<L, U>
where
    L: FieldExtension,
    U: FieldExtension<Base = L::Top>,
{
    pub fn new(lower: L, upper: U) -> Self {
        Tower { lower, upper }
    }
}

impl<L, U> FieldExtension for Tower<L, U>
where
    L: FieldExtension,
    U: FieldExtension<Base = L::Top>,
{
    type Base = L::Base;
    type Top = U::Top;

    fn base(&self) -> &L::Base {
        self.lower.base()
    }
    fn top(&self) -> &U::Top {
        self.upper.top()
    }
    fn degree(&self) -> usize {
        self.lower.degree() * self.upper.degree()
    }
    fn embed(&self, a: &<L::Base as Field>::Elem) -> <U::Top as Field>::Elem {
        self.upper.embed(&self.lower.embed(a))
    }
    fn restrict(&self, a: &<U::Top as Field>::Elem) -> Option<<L::Base as Field>::Elem> {
        self.lower.restrict(&self.upper.restrict(a)?)
    }
    fn basis(&self) -> Vec<<U::Top as Field>::Elem> {
        let top = self.upper.top();
        let mut out = Vec::new();
        for b in self.upper.basis() {
            for a in self.lower.basis() {
                out.push(top.mul(&self.upper.embed(&a), &b));
            }
        }
        out
    }
    fn trace(&self, a: &<U::Top as Field>::Elem) -> <L::Base as Field>::Elem {
        self.lower.trace(&self.upper.trace(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::Rationals;

    #[test]
    fn quadratic_traces() {
        let k = QuadExt::rational(2).unwrap();
        assert_eq!(k.trace(&k.gen()), rat(0, 1));
        assert_eq!(k.trace(&k.from_i64(3)), rat(6, 1));
    }

    #[test]
    fn trace_f9_over_f3() {
        let f3 = FiniteField::prime(3).unwrap();
        let f9 = FiniteField::new(3, 2).unwrap();
        let e = FiniteExt::new(&f3, &f9).unwrap();
        let x = f9.parse("[0,1]").unwrap();
        assert_eq!(e.trace(&x), 0);
        // Brute force: x + x³.
        assert_eq!(f9.add(&x, &f9.pow(&x, 3)), 0);
    }

    #[test]
    fn matrix_and_frobenius_traces_agree() {
        for (p, m) in [(3, 2), (5, 2), (5, 4), (7, 2), (3, 3)] {
            let base = FiniteField::prime(p).unwrap();
            let top = FiniteField::new(p, m).unwrap();
            let e = FiniteExt::new(&base, &top).unwrap();
            for a in top.elements() {
                assert_eq!(e.trace_by_matrix(&a), e.trace_by_frobenius(&a));
            }
        }
    }

    #[test]
    fn relative_extension_over_nonprime_base() {
        let base = FiniteField::new(5, 2).unwrap();
        let top = FiniteField::new(5, 4).unwrap();
        let e = FiniteExt::new(&base, &top).unwrap();
        assert_eq!(e.degree(), 2);
        for a in top.elements().step_by(7) {
            let t = e.trace(&a);
            assert_eq!(e.embed(&t), top.add(&a, &e.relative_frobenius(&a)));
        }
    }

    #[test]
    fn biquadratic_tower_trace() {
        let k2 = QuadExt::rational(2).unwrap();
        let k23 = QuadExt::new(k2.clone(), k2.from_i64(3)).unwrap();
        let t = Tower::new(k2.clone(), k23.clone());
        assert_eq!(t.degree(), 4);
        let one = Field::one(&k23);
        assert_eq!(t.trace(&one), rat(4, 1));
        let s3 = k23.gen();
        assert_eq!(t.trace(&s3), rat(0, 1));
        assert_eq!(t.trace(&k23.mul(&s3, &s3)), rat(12, 1));
        assert_eq!(t.restrict(&t.embed(&rat(5, 7))), Some(rat(5, 7)));
        assert_eq!(Trivial(Rationals).trace(&rat(2, 3)), rat(2, 3));
    }
}
