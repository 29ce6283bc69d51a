//! Sections of `⊕ Λ²S*` on `Gr(2, n+1)` and their local indices.
//!
//! A section is a list of 2-forms `ω_i` on `k^{n+1}`; the configuration of
//! codimension-2 planes `{α_i = β_i = 0}` gives the decomposable case
//! `ω_i = α_i ∧ β_i`. In the chart with lifts `ẽ_n, ẽ_{n+1}` the section is
//! trivialized by `φ̃_n ∧ φ̃_{n+1}`, so its i-th coordinate is `ω_i(ẽ_n, ẽ_{n+1})`.

pub mod zeros;

use std::fmt;

use crate::field::{Field, FieldError, FieldExtension};
use crate::grassmann::{plucker_of, Chart, GeometryError, Line};
use crate::gw::{trace_form, GwClass, GwError, GwField};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("line does not meet plane {0}")]
    Misses(usize),
    #[error("line is not a zero of the section")]
    NotAZero,
    #[error("chart is not centered at the line")]
    NotCentered,
    #[error("zero is not simple (Jacobian determinant vanishes)")]
    NonSimple,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

/// An alternating form on `k^{n+1}`, stored as its antisymmetric matrix.
#[derive(Clone, PartialEq)]
pub struct TwoForm<F: Field> {
    field: F,
    m: Matrix<F::Elem>,
}

impl<F: Field> fmt::Debug for TwoForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.plucker_coefficients().iter().map(|a| self.field.format(a)).collect();
        write!(f, "TwoForm{:?}", c)
    }
}

impl<F: Field> TwoForm<F> {
    /// `α ∧ β`, with `(α ∧ β)(u, v) = α(u)β(v) − α(v)β(u)`.
    pub fn wedge(field: &F, alpha: &[F::Elem], beta: &[F::Elem]) -> Self {
        let n1 = alpha.len();
        let m = (0..n1)
            .map(|j| {
                (0..n1)
                    .map(|k| field.sub(&field.mul(&alpha[j], &beta[k]), &field.mul(&alpha[k], &beta[j])))
                    .collect()
            })
            .collect();
        TwoForm { field: field.clone(), m }
    }

    pub fn from_matrix(field: &F, m: Matrix<F::Elem>) -> Result<Self, IndexError> {
        let n1 = m.len();
        for j in 0..n1 {
            if m[j].len() != n1 || !field.is_zero(&m[j][j]) {
                return Err(IndexError::Invalid("2-form matrix must be square and alternating".into()));
            }
            for k in 0..j {
                if field.add(&m[j][k], &m[k][j]) != field.zero() {
                    return Err(IndexError::Invalid("2-form matrix must be antisymmetric".into()));
                }
            }
        }
        Ok(TwoForm { field: field.clone(), m })
    }

    pub fn zero(field: &F, n1: usize) -> Self {
        TwoForm { field: field.clone(), m: vec![vec![field.zero(); n1]; n1] }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &Matrix<F::Elem> {
        &self.m
    }

    pub fn eval(&self, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mv = linalg::matvec(f, &self.m, v);
        linalg::dot(f, u, &mv)
    }

    /// The functional `ω(u, ·)`.
    pub fn contract(&self, u: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.dim())
            .map(|k| u.iter().zip(&self.m).fold(f.zero(), |acc, (a, row)| f.add(&acc, &f.mul(a, &row[k]))))
            .collect()
    }

    /// Coefficients `ω_{jk}`, `j < k`, in the Plücker order: `ω(W) = Σ ω_{jk} p_{jk}(W)`.
    pub fn plucker_coefficients(&self) -> Vec<F::Elem> {
        let n1 = self.dim();
        let mut out = Vec::new();
        for j in 0..n1 {
            for k in j + 1..n1 {
                out.push(self.m[j][k].clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        TwoForm { field: f.clone(), m: linalg::map::<F, F>(&self.m, |a| f.mul(c, a)) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f.add(a, b)).collect())
            .collect();
        TwoForm { field: f.clone(), m }
    }

    pub fn map<G: Field>(&self, target: &G, g: impl Fn(&F::Elem) -> G::Elem) -> TwoForm<G> {
        TwoForm { field: target.clone(), m: linalg::map::<F, G>(&self.m, g) }
    }

    /// Whether `ω` restricts to zero on the line.
    pub fn vanishes_on(&self, line: &Line<F>) -> bool {
        let [p, q] = line.rows();
        self.field.is_zero(&self.eval(p, q))
    }
}

/// The codimension-2 subspace `{α = β = 0}`.
#[derive(Clone, PartialEq)]
pub struct CodimTwoPlane<F: Field> {
    pub alpha: Vec<F::Elem>,
    pub beta: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for CodimTwoPlane<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Plane {{ alpha: {:?}, beta: {:?} }}", self.alpha, self.beta)
    }
}

impl<F: Field> CodimTwoPlane<F> {
    pub fn new(field: &F, alpha: Vec<F::Elem>, beta: Vec<F::Elem>) -> Result<Self, IndexError> {
        if alpha.len() != beta.len() {
            return Err(IndexError::Invalid("alpha and beta have different lengths".into()));
        }
        if linalg::rank(field, &vec![alpha.clone(), beta.clone()]) != 2 {
            return Err(IndexError::Invalid("alpha and beta are dependent".into()));
        }
        Ok(CodimTwoPlane { alpha, beta })
    }

    pub fn from_i64(field: &F, alpha: &[i64], beta: &[i64]) -> Result<Self, IndexError> {
        let conv = |v: &[i64]| v.iter().map(|&x| field.from_i64(x)).collect();
        Self::new(field, conv(alpha), conv(beta))
    }

    /// The plane of `P³` whose points are the line `span(p, q)`.
    pub fn from_line(line: &Line<F>) -> Self {
        let f = line.field();
        let k = linalg::kernel(f, &line.basis_matrix(), line.n() + 1);
        debug_assert_eq!(k.len(), line.n() - 1);
        assert_eq!(k.len(), 2, "only lines in P³ are codimension-2 planes");
        CodimTwoPlane { alpha: k[0].clone(), beta: k[1].clone() }
    }

    pub fn wedge(&self, field: &F) -> TwoForm<F> {
        TwoForm::wedge(field, &self.alpha, &self.beta)
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        field.is_zero(&linalg::dot(field, &self.alpha, v)) && field.is_zero(&linalg::dot(field, &self.beta, v))
    }

    /// `(α∧β)(e, f) = 0` for a basis `e, f` of the line.
    pub fn meets(&self, field: &F, line: &Line<F>) -> bool {
        self.wedge(field).vanishes_on(line)
    }

    /// A basis of the subspace `{α = β = 0}`.
    pub fn basis(&self, field: &F) -> Vec<Vec<F::Elem>> {
        linalg::kernel(field, &vec![self.alpha.clone(), self.beta.clone()], self.alpha.len())
    }

    /// Spans a nonzero vector of `W ∩ {α = β = 0}`, if any.
    pub fn intersection_point(&self, field: &F, line: &Line<F>) -> Option<Vec<F::Elem>> {
        let [w0, w1] = line.rows();
        let f = field;
        for form in [&self.alpha, &self.beta] {
            let (a0, a1) = (linalg::dot(f, form, w0), linalg::dot(f, form, w1));
            if f.is_zero(&a0) && f.is_zero(&a1) {
                continue;
            }
            let v = line.point(&[a1, f.neg(&a0)]);
            return self.contains(f, &v).then_some(v);
        }
        None
    }

    pub fn map<G: Field>(&self, g: impl Fn(&F::Elem) -> G::Elem) -> CodimTwoPlane<G> {
        CodimTwoPlane { alpha: self.alpha.iter().map(&g).collect(), beta: self.beta.iter().map(&g).collect() }
    }
}

/// `2n − 2` codimension-2 planes in `Pⁿ`, `n` odd.
#[derive(Clone)]
pub struct PlaneConfig<F: Field> {
    field: F,
    n: usize,
    planes: Vec<CodimTwoPlane<F>>,
}

impl<F: Field> fmt::Debug for PlaneConfig<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneConfig(n={}, {:?})", self.n, self.planes)
    }
}

impl<F: Field> PlaneConfig<F> {
    pub fn new(field: &F, n: usize, planes: Vec<CodimTwoPlane<F>>) -> Result<Self, IndexError> {
        if n < 3 || n % 2 == 0 {
            return Err(IndexError::Invalid(format!("n = {n} must be odd and at least 3")));
        }
        if planes.len() != 2 * n - 2 {
            return Err(IndexError::Invalid(format!("expected {} planes, got {}", 2 * n - 2, planes.len())));
        }
        for (i, p) in planes.iter().enumerate() {
            if p.alpha.len() != n + 1 {
                return Err(IndexError::Invalid(format!("plane {i} has forms of length {}", p.alpha.len())));
            }
            CodimTwoPlane::new(field, p.alpha.clone(), p.beta.clone())?;
        }
        Ok(PlaneConfig { field: field.clone(), n, planes })
    }

    /// Four lines of `P³` viewed as codimension-2 planes.
    pub fn from_lines(lines: &[Line<F>]) -> Result<Self, IndexError> {
        let first = lines.first().ok_or_else(|| IndexError::Invalid("no lines".into()))?;
        if lines.iter().any(|l| l.n() != 3) {
            return Err(IndexError::Invalid("lines must lie in P³".into()));
        }
        let planes = lines.iter().map(CodimTwoPlane::from_line).collect();
        Self::new(first.field(), 3, planes)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn planes(&self) -> &[CodimTwoPlane<F>] {
        &self.planes
    }

    pub fn section(&self) -> Section<F> {
        Section {
            field: self.field.clone(),
            n: self.n,
            forms: self.planes.iter().map(|p| p.wedge(&self.field)).collect(),
        }
    }

    pub fn meets_all(&self, line: &Line<F>) -> bool {
        self.planes.iter().all(|p| p.meets(&self.field, line))
    }

    pub fn map<G: Field>(&self, target: &G, g: impl Fn(&F::Elem) -> G::Elem) -> PlaneConfig<G> {
        PlaneConfig { field: target.clone(), n: self.n, planes: self.planes.iter().map(|p| p.map(&g)).collect() }
    }

    pub fn embed<X: FieldExtension<Base = F>>(&self, ext: &X) -> PlaneConfig<X::Top> {
        self.map(ext.top(), |a| ext.embed(a))
    }

    /// The configuration with plane `i`'s form `α_i` multiplied by `c`.
    pub fn scale_plane(&self, i: usize, c: &F::Elem) -> Result<Self, IndexError> {
        let mut out = self.clone();
        let f = &self.field;
        out.planes[i].alpha = out.planes[i].alpha.iter().map(|a| f.mul(c, a)).collect();
        Self::new(f, self.n, out.planes)
    }
}

/// A section of `⊕ Λ²S*` given by arbitrary 2-forms.
#[derive(Clone)]
pub struct Section<F: Field> {
    field: F,
    n: usize,
    forms: Vec<TwoForm<F>>,
}

impl<F: Field> fmt::Debug for Section<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Section(n={}, {:?})", self.n, self.forms)
    }
}

impl<F: Field> Section<F> {
    pub fn new(field: &F, n: usize, forms: Vec<TwoForm<F>>) -> Result<Self, IndexError> {
        if forms.len() != 2 * n - 2 || forms.iter().any(|w| w.dim() != n + 1) {
            return Err(IndexError::Invalid("a section needs 2n−2 forms on k^{n+1}".into()));
        }
        Ok(Section { field: field.clone(), n, forms })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forms(&self) -> &[TwoForm<F>] {
        &self.forms
    }

    pub fn map<G: Field>(&self, target: &G, g: impl Fn(&F::Elem) -> G::Elem) -> Section<G> {
        Section { field: target.clone(), n: self.n, forms: self.forms.iter().map(|w| w.map(target, &g)).collect() }
    }

    pub fn is_zero_at(&self, line: &Line<F>) -> bool {
        self.forms.iter().all(|w| w.vanishes_on(line))
    }

    /// The section in the chart trivialization at chart coordinates `(x, y)`.
    pub fn value_at(&self, chart: &Chart<F>, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let [en, en1] = chart.lifts(x, y);
        self.forms.iter().map(|w| w.eval(&en, &en1)).collect()
    }

    pub fn value(&self, line: &Line<F>, chart: &Chart<F>) -> Result<Vec<F::Elem>, IndexError> {
        let (x, y) = chart.coords(line).ok_or(GeometryError::OutOfChart)?;
        Ok(self.value_at(chart, &x, &y))
    }

    /// `∂f_i/∂x_j = ω_i(e_j, ẽ_{n+1})`, `∂f_i/∂y_j = ω_i(ẽ_n, e_j)`; row per variable, column per form.
    pub fn jacobian_at(&self, chart: &Chart<F>, x: &[F::Elem], y: &[F::Elem]) -> Matrix<F::Elem> {
        let n = self.n;
        let [en, en1] = chart.lifts(x, y);
        let cols = chart.columns();
        let mut rows = Vec::with_capacity(2 * n - 2);
        for e in &cols[..n - 1] {
            rows.push(self.forms.iter().map(|w| w.eval(e, &en1)).collect());
        }
        for e in &cols[..n - 1] {
            rows.push(self.forms.iter().map(|w| w.eval(&en, e)).collect());
        }
        rows
    }

    /// The Jacobian at a zero, in a chart centered there.
    pub fn jacobian_matrix(&self, line: &Line<F>, chart: &Chart<F>) -> Result<Matrix<F::Elem>, IndexError> {
        let (x, y) = chart.coords(line).ok_or(GeometryError::OutOfChart)?;
        if !x.iter().chain(&y).all(|a| self.field.is_zero(a)) {
            return Err(IndexError::NotCentered);
        }
        if !self.is_zero_at(line) {
            return Err(IndexError::NotAZero);
        }
        Ok(self.jacobian_at(chart, &x, &y))
    }

    /// `det J` in the chart [`Chart::centered_at`] the zero; errors at non-simple zeros.
    pub fn jacobian_det(&self, line: &Line<F>) -> Result<F::Elem, IndexError> {
        let chart = Chart::centered_at(line);
        let d = linalg::det(&self.field, &self.jacobian_matrix(line, &chart)?);
        if self.field.is_zero(&d) {
            return Err(IndexError::NonSimple);
        }
        Ok(d)
    }
}

/// Rewrites `(α, β)` so that `α` vanishes on the chart center, preserving `α ∧ β`.
pub fn normalize_forms<F: Field>(
    field: &F,
    plane: &CodimTwoPlane<F>,
    line: &Line<F>,
    chart: &Chart<F>,
) -> Result<CodimTwoPlane<F>, IndexError> {
    let f = field;
    let (x, y) = chart.coords(line).ok_or(GeometryError::OutOfChart)?;
    if !x.iter().chain(&y).all(|a| f.is_zero(a)) {
        return Err(IndexError::NotCentered);
    }
    if !plane.meets(f, line) {
        return Err(IndexError::Misses(0));
    }
    let n = chart.n();
    let cols = chart.columns();
    let on_w = |form: &[F::Elem]| [linalg::dot(f, form, &cols[n - 1]), linalg::dot(f, form, &cols[n])];
    let a = on_w(&plane.alpha);
    let b = on_w(&plane.beta);
    if a.iter().all(|v| f.is_zero(v)) {
        return Ok(plane.clone());
    }
    if b.iter().all(|v| f.is_zero(v)) {
        let alpha = plane.beta.iter().map(|v| f.neg(v)).collect();
        return Ok(CodimTwoPlane { alpha, beta: plane.alpha.clone() });
    }
    let k = if f.is_zero(&b[0]) { 1 } else { 0 };
    let t = f.div(&a[k], &b[k])?;
    let alpha = plane.alpha.iter().zip(&plane.beta).map(|(p, q)| f.sub(p, &f.mul(&t, q))).collect();
    Ok(CodimTwoPlane { alpha, beta: plane.beta.clone() })
}

/// Normalized lifts: `d_i ⊗ c_i` is the image of `α_i ∧ β_i` in `(V/W)* ⊗ W*`.
#[derive(Clone, PartialEq)]
pub struct NormalizedData<E> {
    pub c: Vec<[E; 2]>,
    pub d: Vec<Vec<E>>,
}

impl<E: fmt::Debug> fmt::Debug for NormalizedData<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalizedData").field("c", &self.c).field("d", &self.d).finish()
    }
}

/// Bases of `W` and of `k^{n+1}/W` (the latter as lifts).
#[derive(Clone)]
pub struct LineBases<E> {
    pub w: [Vec<E>; 2],
    pub quotient: Vec<Vec<E>>,
}

impl<E: Clone> LineBases<E> {
    /// The line's own basis, and the first standard vectors independent of `W`.
    pub fn standard<F: Field<Elem = E>>(line: &Line<F>) -> Self {
        let chart = Chart::centered_at(line);
        let n = line.n();
        LineBases { w: line.rows().clone(), quotient: chart.columns()[..n - 1].to_vec() }
    }

    /// The bases in which `i(L)` equals `det J` in [`Chart::centered_at`]: `(ẽ_{n+1}, ẽ_n)` and `ẽ_1, …, ẽ_{n−1}`.
    pub fn chart_adapted<F: Field<Elem = E>>(line: &Line<F>) -> Self {
        let std = Self::standard(line);
        let [w0, w1] = std.w;
        LineBases { w: [w1, w0], quotient: std.quotient }
    }
}

/// Normalized coordinates of every plane at `line`, in the given bases.
///
/// The image of `ω ∈ Ker` is the pairing `(v̄, w) ↦ ω(v, w)`; it has rank one
/// for decomposable `ω` and is factored as `d ⊗ c`.
pub fn normalized_coordinates<F: Field>(
    cfg: &PlaneConfig<F>,
    line: &Line<F>,
    bases: &LineBases<F::Elem>,
) -> Result<NormalizedData<F::Elem>, IndexError> {
    let f = cfg.field();
    let n = cfg.n();
    if bases.quotient.len() != n - 1 {
        return Err(IndexError::Invalid("quotient basis must have n−1 vectors".into()));
    }
    let mut all = bases.quotient.clone();
    all.extend(bases.w.iter().cloned());
    if linalg::rank(f, &all) != n + 1 {
        return Err(IndexError::Invalid("bases do not span k^{n+1}".into()));
    }
    let mut data = NormalizedData { c: Vec::new(), d: Vec::new() };
    for (i, plane) in cfg.planes().iter().enumerate() {
        let w = plane.wedge(f);
        if !w.vanishes_on(line) {
            return Err(IndexError::Misses(i));
        }
        let m: Vec<[F::Elem; 2]> =
            bases.quotient.iter().map(|q| [w.eval(q, &bases.w[0]), w.eval(q, &bases.w[1])]).collect();
        let Some((j0, k0)) = (0..n - 1).flat_map(|j| [(j, 0), (j, 1)]).find(|&(j, k)| !f.is_zero(&m[j][k])) else {
            return Err(IndexError::Degenerate(format!("plane {i} contains the line")));
        };
        let c = m[j0].clone();
        let piv = f.inv(&m[j0][k0])?;
        let d: Vec<F::Elem> = m.iter().map(|row| f.mul(&row[k0], &piv)).collect();
        for (row, dj) in m.iter().zip(&d) {
            if (0..2).any(|k| f.mul(dj, &c[k]) != row[k]) {
                return Err(IndexError::Degenerate(format!("image of plane {i} has rank 2")));
            }
        }
        data.c.push(c);
        data.d.push(d);
    }
    Ok(data)
}

/// `det` of the matrix whose column `i` is `(d_{ij} c_{i0})_j` over `(d_{ij} c_{i1})_j`.
pub fn i_of_l<F: Field>(field: &F, nd: &NormalizedData<F::Elem>) -> F::Elem {
    let f = field;
    let cols: Matrix<F::Elem> = nd
        .c
        .iter()
        .zip(&nd.d)
        .map(|(c, d)| {
            let mut col: Vec<F::Elem> = d.iter().map(|x| f.mul(x, &c[0])).collect();
            col.extend(d.iter().map(|x| f.mul(x, &c[1])));
            col
        })
        .collect();
    linalg::det(f, &linalg::transpose(&cols))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jacobian,
    Geometric,
}

/// The element of `k(L)` whose trace form is the local index.
pub fn local_index_value<F: Field>(cfg: &PlaneConfig<F>, line: &Line<F>, method: Method) -> Result<F::Elem, IndexError> {
    let f = cfg.field();
    let jac = cfg.section().jacobian_det(line)?;
    match method {
        Method::Jacobian => Ok(jac),
        Method::Geometric => {
            let nd = normalized_coordinates(cfg, line, &LineBases::standard(line))?;
            let v = i_of_l(f, &nd);
            if f.is_zero(&v) {
                return Err(IndexError::NonSimple);
            }
            Ok(v)
        }
    }
}

/// `Tr_{k(L)/k}⟨det J⟩` or `Tr_{k(L)/k}⟨i(L)⟩` for a zero defined over `ext.top()`.
pub fn local_index<X>(
    cfg: &PlaneConfig<X::Base>,
    line: &Line<X::Top>,
    ext: &X,
    method: Method,
) -> Result<GwClass<X::Base>, IndexError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let v = local_index_value(&cfg.embed(ext), line, method)?;
    Ok(trace_form(ext, &v)?)
}

/// The Plücker vector of `line` restricted to the coefficients of a 2-form.
pub fn form_on_line<F: Field>(field: &F, w: &TwoForm<F>, line: &Line<F>) -> F::Elem {
    let [p, q] = line.rows();
    linalg::dot(field, &w.plucker_coefficients(), &plucker_of(field, p, q))
}
