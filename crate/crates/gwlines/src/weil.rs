//! Restriction of scalars for the line bundle `Λ²S*` on `Gr(2, 4)`.
//!
//! A plane with coefficients in an étale algebra `E` of degree 4 gives a
//! section `σ` of `Res_{E/k} Λ²S*`. Writing `σ = Σ_q α_q σ_q` in a basis of
//! `E` produces four `k`-sections whose common zeros are the lines meeting
//! the four conjugate planes `j_p(π)`. Elements of `E` are coordinate vectors
//! in the basis `α_1 = 1, α_2, …, α_m`; the embeddings `j_p` are the rows of
//! `A`, computed in an explicit splitting field `T`.

use std::fmt;

use crate::field::{poly, Field, FieldError, FieldExtension, FiniteExt, FiniteField, Quad, QuadExt, Rationals, Tower, Trivial};
use crate::grassmann::{GeometryError, Line};
use crate::gw::{trace_form, GwClass, GwError, GwField};
use crate::linalg::{self, Matrix};
use crate::localindex::{IndexError, Section, TwoForm};
use crate::transversals::{self, TransversalError, Transversals};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeilError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("polynomial is not separable")]
    NotSeparable,
    #[error("{0} does not lie in the expected subfield")]
    OutsideSubfield(&'static str),
    #[error("the splitting field does not contain the residue field")]
    NeedsComposite,
}

type TopElem<X> = <<X as FieldExtension>::Top as Field>::Elem;
type BaseElem<X> = <<X as FieldExtension>::Base as Field>::Elem;

/// An étale algebra of degree `m` with embeddings into a splitting field.
#[derive(Clone)]
pub struct EtaleAlgebra<X: FieldExtension> {
    ext: X,
    m: usize,
    a: Matrix<TopElem<X>>,
    a_inv: Matrix<TopElem<X>>,
    poly: Option<Vec<BaseElem<X>>>,
    description: String,
}

impl<X: FieldExtension> fmt::Debug for EtaleAlgebra<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaleAlgebra({}, degree {})", self.description, self.m)
    }
}

impl<X: FieldExtension> EtaleAlgebra<X> {
    /// From the embedding matrix `A_{pq} = j_p(α_q)`; requires `α_1 = 1`.
    pub fn from_matrix(ext: X, a: Matrix<TopElem<X>>, description: String) -> Result<Self, WeilError> {
        let t = ext.top();
        let m = a.len();
        if m == 0 || a.iter().any(|r| r.len() != m) {
            return Err(WeilError::Invalid("embedding matrix must be square".into()));
        }
        if a.iter().any(|r| r[0] != t.one()) {
            return Err(WeilError::Invalid("the first basis element must be 1".into()));
        }
        let a_inv = linalg::inverse(t, &a).ok_or(WeilError::NotSeparable)?;
        Ok(EtaleAlgebra { ext, m, a, a_inv, poly: None, description })
    }

    /// `k^m` with basis `(1, …, 1), e_1, …, e_{m−1}`.
    pub fn split(ext: X, m: usize) -> Result<Self, WeilError> {
        let t = ext.top();
        let a = (0..m)
            .map(|p| (0..m).map(|q| if q == 0 || q == p + 1 { t.one() } else { t.zero() }).collect())
            .collect();
        let desc = format!("{}^{m}", ext_base_name(&ext));
        Self::from_matrix(ext, a, desc)
    }

    /// `k[t]/(f)` with the power basis, given the roots of `f` in the splitting field.
    pub fn from_poly(ext: X, f: Vec<BaseElem<X>>, roots: Vec<TopElem<X>>) -> Result<Self, WeilError> {
        let t = ext.top();
        let m = poly::degree(&f).ok_or_else(|| WeilError::Invalid("zero polynomial".into()))?;
        if roots.len() != m {
            return Err(WeilError::Invalid(format!("need {m} roots, got {}", roots.len())));
        }
        let fe: Vec<TopElem<X>> = f.iter().map(|c| ext.embed(c)).collect();
        if roots.iter().any(|r| !t.is_zero(&poly::eval(t, &fe, r))) {
            return Err(WeilError::Invalid("a given root does not annihilate f".into()));
        }
        let a = roots.iter().map(|r| (0..m).map(|q| t.pow(r, q as u64)).collect()).collect();
        let desc = format!("{}[t]/({})", ext_base_name(&ext), f.iter().map(|c| ext.base().format(c)).collect::<Vec<_>>().join(","));
        let mut alg = Self::from_matrix(ext, a, desc)?;
        alg.poly = Some(f);
        Ok(alg)
    }

    pub fn ext(&self) -> &X {
        &self.ext
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn poly(&self) -> Option<&[BaseElem<X>]> {
        self.poly.as_deref()
    }

    pub fn embedding_matrix(&self) -> &Matrix<TopElem<X>> {
        &self.a
    }

    pub fn det_a(&self) -> TopElem<X> {
        linalg::det(self.ext.top(), &self.a)
    }

    /// `(det A)²` as an element of `k`.
    pub fn det_a_squared(&self) -> Result<BaseElem<X>, WeilError> {
        let d = self.det_a();
        self.ext.restrict(&self.ext.top().mul(&d, &d)).ok_or(WeilError::OutsideSubfield("(det A)²"))
    }

    /// `j_p(x)` for `x ∈ E` in coordinates.
    pub fn embed_element(&self, p: usize, x: &[BaseElem<X>]) -> TopElem<X> {
        let t = self.ext.top();
        self.a[p].iter().zip(x).fold(t.zero(), |acc, (apq, c)| t.add(&acc, &t.mul(apq, &self.ext.embed(c))))
    }

    /// The same algebra with splitting field `T(√c)`.
    pub fn adjoin_sqrt(&self, c: TopElem<X>) -> Result<EtaleAlgebra<Tower<X, QuadExt<X::Top>>>, WeilError> {
        let up = QuadExt::new(self.ext.top().clone(), c)?;
        let a = self.a.iter().map(|r| r.iter().map(|x| up.lift(x)).collect()).collect();
        let ext = Tower::new(self.ext.clone(), up);
        let mut alg = EtaleAlgebra::from_matrix(ext, a, self.description.clone())?;
        alg.poly = self.poly.clone();
        Ok(alg)
    }
}

fn ext_base_name<X: FieldExtension>(ext: &X) -> String {
    ext.base().descriptor()
}

impl EtaleAlgebra<FiniteExt> {
    /// `F_q[t]/(f)` for `f` irreducible of degree `m`, split in `F_{q^m}`.
    pub fn finite_field(base: &FiniteField, f: Vec<u32>) -> Result<Self, WeilError> {
        let m = poly::degree(&f).ok_or_else(|| WeilError::Invalid("zero polynomial".into()))?;
        let top = FiniteField::new(base.p(), base.m() * m as u32)?;
        let ext = FiniteExt::new(base, &top)?;
        let fe: Vec<u32> = f.iter().map(|c| ext.embed(c)).collect();
        let roots: Vec<u32> = top.elements().filter(|r| poly::eval(&top, &fe, r) == 0).collect();
        if roots.len() != m {
            return Err(WeilError::Invalid("polynomial does not have distinct roots in F_{q^m}".into()));
        }
        Self::from_poly(ext, f, roots)
    }
}

/// `ℚ(√a)(√b)` as a tower over `ℚ`.
pub type Biquadratic = Tower<QuadExt<Rationals>, QuadExt<QuadExt<Rationals>>>;

impl EtaleAlgebra<Biquadratic> {
    /// `ℚ(√a, √b)` with basis `1, √a, √b, √(ab)`.
    pub fn biquadratic(a: i64, b: i64) -> Result<Self, WeilError> {
        let lower = QuadExt::rational(a)?;
        let bq = lower.lift(&Rationals.from_i64(b));
        let upper = QuadExt::new(lower.clone(), bq)?;
        let sa = upper.lift(&lower.gen());
        let sb = upper.gen();
        let t = &upper;
        let mut rows = Vec::new();
        for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let x = t.mul(&t.from_i64(s1), &sa);
            let y = t.mul(&t.from_i64(s2), &sb);
            rows.push(vec![t.one(), x.clone(), y.clone(), t.mul(&x, &y)]);
        }
        Self::from_matrix(Tower::new(lower, upper), rows, format!("Q(sqrt {a}, sqrt {b})"))
    }
}

/// A codimension-2 plane of `E⁴`: `alpha[j]`, `beta[j]` are elements of `E`.
#[derive(Clone, PartialEq)]
pub struct ResSection<K: Field> {
    pub alpha: Vec<Vec<K::Elem>>,
    pub beta: Vec<Vec<K::Elem>>,
}

impl<K: Field> fmt::Debug for ResSection<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResSection {{ alpha: {:?}, beta: {:?} }}", self.alpha, self.beta)
    }
}

impl<K: Field> ResSection<K> {
    pub fn new(alpha: Vec<Vec<K::Elem>>, beta: Vec<Vec<K::Elem>>, m: usize) -> Result<Self, WeilError> {
        if alpha.len() != 4 || beta.len() != 4 || alpha.iter().chain(&beta).any(|x| x.len() != m) {
            return Err(WeilError::Invalid(format!("a plane of E⁴ needs 4 + 4 elements of length {m}")));
        }
        Ok(ResSection { alpha, beta })
    }
}

/// The conjugate forms `j_p(α) ∧ j_p(β)` over the splitting field.
pub fn conjugate_forms<X: FieldExtension>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>) -> Vec<TwoForm<X::Top>> {
    let t = alg.ext.top();
    (0..alg.m)
        .map(|p| {
            let a: Vec<_> = sec.alpha.iter().map(|x| alg.embed_element(p, x)).collect();
            let b: Vec<_> = sec.beta.iter().map(|x| alg.embed_element(p, x)).collect();
            TwoForm::wedge(t, &a, &b)
        })
        .collect()
}

/// The `k`-sections `σ_q` with `σ = Σ_q α_q σ_q`.
pub fn res_decompose<X: FieldExtension>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>) -> Result<Vec<TwoForm<X::Base>>, WeilError> {
    let t = alg.ext.top();
    let k = alg.ext.base();
    let conj = conjugate_forms(alg, sec);
    let mut out = Vec::with_capacity(alg.m);
    for q in 0..alg.m {
        let mut acc = TwoForm::zero(t, 4);
        for (p, w) in conj.iter().enumerate() {
            acc = acc.add(&w.scale(&alg.a_inv[q][p]));
        }
        let m: Matrix<BaseElem<X>> = acc
            .matrix()
            .iter()
            .map(|r| r.iter().map(|x| alg.ext.restrict(x).ok_or(WeilError::OutsideSubfield("σ_q"))).collect())
            .collect::<Result<_, _>>()?;
        out.push(TwoForm::from_matrix(k, m)?);
    }
    Ok(out)
}

/// A closed point of the zero locus of `σ_Res`.
#[derive(Clone)]
pub enum ResZero<K: Field> {
    Rational(Line<K>),
    Conjugate { ext: QuadExt<K>, line: Line<QuadExt<K>> },
}

impl<K: Field> fmt::Debug for ResZero<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResZero::Rational(l) => write!(f, "Rational({:?})", l.canonical_rows()),
            ResZero::Conjugate { line, .. } => write!(f, "Conjugate({:?})", line.canonical_rows()),
        }
    }
}

impl<K: Field> ResZero<K> {
    pub fn degree(&self) -> usize {
        match self {
            ResZero::Rational(_) => 1,
            ResZero::Conjugate { .. } => 2,
        }
    }
}

/// Common zeros of `σ_1, …, σ_4`.
pub fn res_zeros<X>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>) -> Result<Vec<ResZero<X::Base>>, WeilError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let forms = res_decompose(alg, sec)?;
    Ok(match transversals::zeros_of_forms(alg.ext.base(), &forms)? {
        Transversals::Rational([a, b]) => vec![ResZero::Rational(a), ResZero::Rational(b)],
        Transversals::Conjugate { ext, line, .. } => vec![ResZero::Conjugate { ext, line }],
    })
}

/// `Tr_{k(P)/k}⟨(det A)^{-1}·det J(j_1σ, …, j_mσ)⟩`.
pub fn local_index_res<X>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>, zero: &ResZero<X::Base>) -> Result<GwClass<X::Base>, WeilError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    match local_index_res_in(alg, sec, zero) {
        Err(WeilError::NeedsComposite) => {
            let ResZero::Conjugate { ext, .. } = zero else { unreachable!("rational zeros live in T") };
            let big = alg.adjoin_sqrt(alg.ext.embed(ext.d()))?;
            local_index_res_in(&big, sec, zero)
        }
        r => r,
    }
}

fn local_index_res_in<X>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>, zero: &ResZero<X::Base>) -> Result<GwClass<X::Base>, WeilError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let t = alg.ext.top();
    let k = alg.ext.base();
    let line_t = match zero {
        ResZero::Rational(l) => l.embed(&alg.ext),
        ResZero::Conjugate { ext, line } => {
            let r = t.sqrt(&alg.ext.embed(ext.d())).ok_or(WeilError::NeedsComposite)?;
            line.map(t, |x| quad_into(alg, &r, x))
        }
    };
    let section = Section::new(t, 3, conjugate_forms(alg, sec))?;
    let value = t.div(&section.jacobian_det(&line_t)?, &alg.det_a())?;
    match zero {
        ResZero::Rational(_) => {
            let v = alg.ext.restrict(&value).ok_or(WeilError::OutsideSubfield("(det A)^-1 det J"))?;
            Ok(trace_form(&Trivial(k.clone()), &v)?)
        }
        ResZero::Conjugate { ext, .. } => {
            let r = t.sqrt(&alg.ext.embed(ext.d())).expect("checked above");
            let v = pull_back(alg, &r, &value)?;
            Ok(trace_form(ext, &ext.make(v.0, v.1))?)
        }
    }
}

/// `u + v√d ↦ u + v·r` for a chosen square root `r` of `d` in `T`.
fn quad_into<X: FieldExtension>(alg: &EtaleAlgebra<X>, r: &TopElem<X>, x: &Quad<BaseElem<X>>) -> TopElem<X> {
    let t = alg.ext.top();
    t.add(&alg.ext.embed(&x.u), &t.mul(&alg.ext.embed(&x.v), r))
}

/// Writes `x = u + v·r` with `u, v ∈ k`, using `Tr(x·b) = u·Tr(b) + v·Tr(r·b)`.
fn pull_back<X: FieldExtension>(alg: &EtaleAlgebra<X>, r: &TopElem<X>, x: &TopElem<X>) -> Result<(BaseElem<X>, BaseElem<X>), WeilError> {
    let (t, k, e) = (alg.ext.top(), alg.ext.base(), &alg.ext);
    let mut rows = Vec::new();
    for b in e.basis() {
        rows.push(vec![e.trace(&b), e.trace(&t.mul(r, &b)), k.neg(&e.trace(&t.mul(x, &b)))]);
    }
    let sol = linalg::kernel(k, &rows, 3);
    let s = sol.iter().find(|v| !k.is_zero(&v[2])).ok_or(WeilError::OutsideSubfield("(det A)^-1 det J"))?;
    let inv = k.inv(&s[2])?;
    let (u, v) = (k.mul(&s[0], &inv), k.mul(&s[1], &inv));
    let back = t.add(&e.embed(&u), &t.mul(&e.embed(&v), r));
    if sol.len() != 1 || back != *x {
        return Err(WeilError::OutsideSubfield("(det A)^-1 det J"));
    }
    Ok((u, v))
}

/// `Tr_{k(P)/k}⟨det J(σ_1, …, σ_m)⟩`, computed over `k(P)` without the splitting field.
pub fn local_index_res_oracle<X>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>, zero: &ResZero<X::Base>) -> Result<GwClass<X::Base>, WeilError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let k = alg.ext.base();
    let forms = res_decompose(alg, sec)?;
    match zero {
        ResZero::Rational(l) => {
            let det = Section::new(k, 3, forms)?.jacobian_det(l)?;
            Ok(trace_form(&Trivial(k.clone()), &det)?)
        }
        ResZero::Conjugate { ext, line } => {
            let lifted = forms.iter().map(|w| w.map(ext, |x| ext.lift(x))).collect();
            let det = Section::new(ext, 3, lifted)?.jacobian_det(line)?;
            Ok(trace_form(ext, &det)?)
        }
    }
}
