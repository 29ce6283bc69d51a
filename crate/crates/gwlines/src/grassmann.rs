//! Lines in projective space as points of `Gr(2, n+1)`, Plücker
//! coordinates and affine charts.
//!
//! A chart is a basis `e₁, …, e_{n+1}` of `k^{n+1}`, centered at
//! `span(e_n, e_{n+1})`; its coordinates `(x, y)` name the line spanned by
//! `e_n + Σ xᵢeᵢ` and `e_{n+1} + Σ yᵢeᵢ`.

use std::fmt;

use crate::field::{Field, FieldError, FieldExtension};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("basis rows are dependent")]
    RankDeficient,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line is not in the chart")]
    OutOfChart,
}

/// A 2-dimensional subspace `W ⊆ F^{n+1}` given by a basis.
#[derive(Clone)]
pub struct Line<F: Field> {
    field: F,
    rows: [Vec<F::Elem>; 2],
}

impl<F: Field> fmt::Debug for Line<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<Vec<String>> =
            self.rows.iter().map(|row| row.iter().map(|a| self.field.format(a)).collect()).collect();
        write!(f, "Line{:?}", r)
    }
}

impl<F: Field> PartialEq for Line<F> {
    /// Equality of subspaces.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.canonical_rows() == other.canonical_rows()
    }
}

impl<F: Field> Line<F> {
    pub fn new(field: &F, p: Vec<F::Elem>, q: Vec<F::Elem>) -> Result<Self, GeometryError> {
        if p.len() != q.len() || p.len() < 3 {
            return Err(GeometryError::Dimension(format!("rows of length {} and {}", p.len(), q.len())));
        }
        if linalg::rank(field, &vec![p.clone(), q.clone()]) != 2 {
            return Err(GeometryError::RankDeficient);
        }
        Ok(Line { field: field.clone(), rows: [p, q] })
    }

    pub fn from_i64(field: &F, p: &[i64], q: &[i64]) -> Result<Self, GeometryError> {
        let conv = |v: &[i64]| v.iter().map(|&x| field.from_i64(x)).collect();
        Self::new(field, conv(p), conv(q))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The ambient projective dimension `n`.
    pub fn n(&self) -> usize {
        self.rows[0].len() - 1
    }

    pub fn rows(&self) -> &[Vec<F::Elem>; 2] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> Matrix<F::Elem> {
        self.rows.to_vec()
    }

    /// Reduced row echelon basis, a canonical representative of the subspace.
    pub fn canonical_rows(&self) -> Matrix<F::Elem> {
        linalg::rref(&self.field, &self.basis_matrix()).0
    }

    pub fn canonical(&self) -> Self {
        let r = self.canonical_rows();
        Line { field: self.field.clone(), rows: [r[0].clone(), r[1].clone()] }
    }

    /// 2×2 minors in lexicographic column order.
    pub fn plucker(&self) -> Vec<F::Elem> {
        plucker_of(&self.field, &self.rows[0], &self.rows[1])
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let m = vec![self.rows[0].clone(), self.rows[1].clone(), v.to_vec()];
        linalg::rank(&self.field, &m) == 2
    }

    /// The point `c₀·w₀ + c₁·w₁`.
    pub fn point(&self, c: &[F::Elem; 2]) -> Vec<F::Elem> {
        let f = &self.field;
        self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(a, b)| f.add(&f.mul(&c[0], a), &f.mul(&c[1], b)))
            .collect()
    }

    /// The same subspace with basis `M·rows`.
    pub fn rebased(&self, m: &[[F::Elem; 2]; 2]) -> Result<Self, GeometryError> {
        let p = self.point(&m[0]);
        let q = self.point(&m[1]);
        Self::new(&self.field, p, q)
    }

    /// Image under a field embedding.
    pub fn embed<X>(&self, ext: &X) -> Line<X::Top>
    where
        X: FieldExtension<Base = F>,
    {
        let rows = self.rows.clone().map(|r| r.iter().map(|a| ext.embed(a)).collect());
        Line { field: ext.top().clone(), rows }
    }

    /// Applies `g` entrywise; `g` must be a field homomorphism into `target`.
    pub fn map<G: Field>(&self, target: &G, g: impl Fn(&F::Elem) -> G::Elem) -> Line<G> {
        let rows = self.rows.clone().map(|r| r.iter().map(&g).collect());
        Line { field: target.clone(), rows }
    }
}

pub fn plucker_of<F: Field>(f: &F, p: &[F::Elem], q: &[F::Elem]) -> Vec<F::Elem> {
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(f.sub(&f.mul(&p[i], &q[j]), &f.mul(&p[j], &q[i])));
        }
    }
    out
}

/// An affine chart of `Gr(2, n+1)` given by a basis (stored as columns).
#[derive(Clone)]
pub struct Chart<F: Field> {
    field: F,
    columns: Vec<Vec<F::Elem>>,
    inverse: Matrix<F::Elem>,
}

impl<F: Field> fmt::Debug for Chart<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({} columns)", self.columns.len())
    }
}

impl<F: Field> Chart<F> {
    pub fn new(field: &F, columns: Vec<Vec<F::Elem>>) -> Result<Self, GeometryError> {
        let n1 = columns.len();
        if n1 < 3 || columns.iter().any(|c| c.len() != n1) {
            return Err(GeometryError::Dimension("chart basis must be square".into()));
        }
        let m = linalg::transpose(&columns);
        let inverse = linalg::inverse(field, &m).ok_or(GeometryError::RankDeficient)?;
        Ok(Chart { field: field.clone(), columns, inverse })
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let cols = linalg::identity(field, n + 1);
        Self::new(field, cols).expect("identity is invertible")
    }

    /// The chart centered at `line` whose first `n−1` columns are the first
    /// standard vectors independent of `W`, chosen greedily.
    pub fn centered_at(line: &Line<F>) -> Self {
        let f = line.field();
        let n1 = line.n() + 1;
        let mut span = line.basis_matrix();
        let mut cols = Vec::new();
        for k in 0..n1 {
            let e: Vec<F::Elem> = (0..n1).map(|i| if i == k { f.one() } else { f.zero() }).collect();
            let mut trial = span.clone();
            trial.push(e.clone());
            if linalg::rank(f, &trial) == trial.len() {
                span = trial;
                cols.push(e);
            }
            if cols.len() == n1 - 2 {
                break;
            }
        }
        cols.push(line.rows[0].clone());
        cols.push(line.rows[1].clone());
        Self::new(f, cols).expect("completed basis")
    }

    /// Like [`Chart::centered_at`] but completing from the last standard vector backwards.
    pub fn centered_at_reversed(line: &Line<F>) -> Self {
        let f = line.field();
        let n1 = line.n() + 1;
        let mut span = line.basis_matrix();
        let mut cols = Vec::new();
        for k in (0..n1).rev() {
            let e: Vec<F::Elem> = (0..n1).map(|i| if i == k { f.one() } else { f.zero() }).collect();
            let mut trial = span.clone();
            trial.push(e.clone());
            if linalg::rank(f, &trial) == trial.len() {
                span = trial;
                cols.push(e);
            }
            if cols.len() == n1 - 2 {
                break;
            }
        }
        cols.push(line.rows[0].clone());
        cols.push(line.rows[1].clone());
        Self::new(f, cols).expect("completed basis")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn columns(&self) -> &[Vec<F::Elem>] {
        &self.columns
    }

    /// Coordinates of `v` in this chart's basis.
    pub fn coordinates(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        linalg::matvec(&self.field, &self.inverse, v)
    }

    fn combine(&self, coeffs: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let n1 = self.columns.len();
        (0..n1)
            .map(|i| {
                coeffs
                    .iter()
                    .zip(&self.columns)
                    .fold(f.zero(), |acc, (c, col)| f.add(&acc, &f.mul(c, &col[i])))
            })
            .collect()
    }

    /// The lifts `ẽ_n = e_n + Σ xᵢeᵢ` and `ẽ_{n+1} = e_{n+1} + Σ yᵢeᵢ`.
    pub fn lifts(&self, x: &[F::Elem], y: &[F::Elem]) -> [Vec<F::Elem>; 2] {
        let f = &self.field;
        let n = self.n();
        let mut cx: Vec<F::Elem> = x.to_vec();
        cx.extend([f.one(), f.zero()]);
        let mut cy: Vec<F::Elem> = y.to_vec();
        cy.extend([f.zero(), f.one()]);
        debug_assert_eq!(cx.len(), n + 1);
        [self.combine(&cx), self.combine(&cy)]
    }

    pub fn point(&self, x: &[F::Elem], y: &[F::Elem]) -> Result<Line<F>, GeometryError> {
        if x.len() != self.n() - 1 || y.len() != self.n() - 1 {
            return Err(GeometryError::Dimension("chart coordinates have length n−1".into()));
        }
        let [p, q] = self.lifts(x, y);
        Line::new(&self.field, p, q)
    }

    /// `(x, y)` with `point(x, y) = line`, or `None` when the line is out of the chart.
    pub fn coords(&self, line: &Line<F>) -> Option<(Vec<F::Elem>, Vec<F::Elem>)> {
        let f = &self.field;
        let n = self.n();
        let m: Matrix<F::Elem> = line.rows.iter().map(|r| self.coordinates(r)).collect();
        let p = vec![
            vec![m[0][n - 1].clone(), m[0][n].clone()],
            vec![m[1][n - 1].clone(), m[1][n].clone()],
        ];
        let pinv = linalg::inverse(f, &p)?;
        let normalized = linalg::matmul(f, &pinv, &m);
        Some((normalized[0][..n - 1].to_vec(), normalized[1][..n - 1].to_vec()))
    }
}

/// Determinant of the derivative of the chart change `c → c′` at `line`,
/// with coordinates ordered `(x₁, …, x_{n−1}, y₁, …, y_{n−1})`.
pub fn transition_jacobian_det<F: Field>(
    c: &Chart<F>,
    c2: &Chart<F>,
    line: &Line<F>,
) -> Result<F::Elem, GeometryError> {
    let f = c.field();
    let n = c.n();
    let (x, y) = c.coords(line).ok_or(GeometryError::OutOfChart)?;
    c2.coords(line).ok_or(GeometryError::OutOfChart)?;
    // Rows of the c-normalized basis, expressed in c′-coordinates.
    let [ex, ey] = c.lifts(&x, &y);
    let m2 = [c2.coordinates(&ex), c2.coordinates(&ey)];
    let p2 = vec![
        vec![m2[0][n - 1].clone(), m2[0][n].clone()],
        vec![m2[1][n - 1].clone(), m2[1][n].clone()],
    ];
    let p2inv = linalg::inverse(f, &p2).ok_or(GeometryError::OutOfChart)?;
    let w2: Matrix<F::Elem> = m2.iter().map(|r| r[..n - 1].to_vec()).collect();
    let x2 = linalg::matmul(f, &p2inv, &w2);
    // Tangent directions δ(x, y) = unit vectors; δM′ = δ(c-basis rows) in c′-coordinates.
    let mut jac: Matrix<F::Elem> = Vec::with_capacity(2 * (n - 1));
    for dir in 0..2 * (n - 1) {
        let (row, j) = (dir / (n - 1), dir % (n - 1));
        let dv = c2.coordinates(&c.columns[j]);
        let mut dm = vec![vec![f.zero(); n + 1]; 2];
        dm[row] = dv;
        let dw: Matrix<F::Elem> = dm.iter().map(|r| r[..n - 1].to_vec()).collect();
        let dp: Matrix<F::Elem> =
            dm.iter().map(|r| vec![r[n - 1].clone(), r[n].clone()]).collect();
        let corr = linalg::matmul(f, &dp, &x2);
        let inner: Matrix<F::Elem> = dw
            .iter()
            .zip(&corr)
            .map(|(a, b)| a.iter().zip(b).map(|(s, t)| f.sub(s, t)).collect())
            .collect();
        let dx2 = linalg::matmul(f, &p2inv, &inner);
        let mut col = dx2[0].clone();
        col.extend(dx2[1].iter().cloned());
        jac.push(col);
    }
    Ok(linalg::det(f, &jac))
}

/// The 2×2 change of basis `B` on `W` and the `(n−1)×(n−1)` change of basis
/// `C` on the quotient, between the bases induced by two charts at `line`.
pub fn chart_change_blocks<F: Field>(
    c: &Chart<F>,
    c2: &Chart<F>,
    line: &Line<F>,
) -> Result<(Matrix<F::Elem>, Matrix<F::Elem>), GeometryError> {
    let f = c.field();
    let n = c.n();
    let (x, y) = c.coords(line).ok_or(GeometryError::OutOfChart)?;
    let (x2, y2) = c2.coords(line).ok_or(GeometryError::OutOfChart)?;
    let w = c.lifts(&x, &y);
    let w2 = c2.lifts(&x2, &y2);
    // w = B·w2: read off from the last two c′-coordinates.
    let b: Matrix<F::Elem> = w
        .iter()
        .map(|r| {
            let co = c2.coordinates(r);
            vec![co[n - 1].clone(), co[n].clone()]
        })
        .collect();
    // e_j ≡ Σ_i C_ij e′_i mod W.
    let mut cmat = vec![vec![f.zero(); n - 1]; n - 1];
    for j in 0..n - 1 {
        let mut co = c2.coordinates(&c.columns[j]);
        let (a0, a1) = (co[n - 1].clone(), co[n].clone());
        let s0 = c2.coordinates(&w2[0]);
        let s1 = c2.coordinates(&w2[1]);
        for i in 0..=n {
            co[i] = f.sub(&co[i], &f.add(&f.mul(&a0, &s0[i]), &f.mul(&a1, &s1[i])));
        }
        for i in 0..n - 1 {
            cmat[i][j] = co[i].clone();
        }
    }
    Ok((b, cmat))
}

/// Whether the chart change at `line` preserves the orientation of
/// `Gr(2, n+1)` up to squares; always true for odd `n`.
pub fn orientation_cocycle_square<F: Field>(
    c: &Chart<F>,
    c2: &Chart<F>,
    line: &Line<F>,
) -> Result<bool, GeometryError> {
    let d = transition_jacobian_det(c, c2, line)?;
    Ok(c.field().is_square(&d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::{FiniteField, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(v: &[i64]) -> Vec<num_rational::BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn plucker_examples() {
        let f = Rationals;
        let l = Line::new(&f, q(&[0, 0, 1, 0]), q(&[0, 0, 0, 1])).unwrap();
        assert_eq!(l.plucker(), q(&[0, 0, 0, 0, 0, 1]));
        let l = Line::new(&f, q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0])).unwrap();
        assert_eq!(l.plucker(), q(&[1, 0, 0, 0, 0, 0]));
        assert!(Line::new(&f, q(&[1, 2, 3, 4]), q(&[2, 4, 6, 8])).is_err());
    }

    #[test]
    fn chart_point_examples() {
        let f = Rationals;
        let c = Chart::identity(&f, 3);
        let l = c.point(&q(&[1, 0]), &q(&[0, 1])).unwrap();
        assert_eq!(l.plucker(), q(&[1, 0, 1, -1, 0, 1]));
        assert_eq!(c.coords(&l), Some((q(&[1, 0]), q(&[0, 1]))));
        let center = c.point(&q(&[0, 0]), &q(&[0, 0])).unwrap();
        assert_eq!(center, Line::new(&f, q(&[0, 0, 1, 0]), q(&[0, 0, 0, 1])).unwrap());
        assert_eq!(c.coords(&center), Some((q(&[0, 0]), q(&[0, 0]))));
        let out = Line::new(&f, q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0])).unwrap();
        assert_eq!(c.coords(&out), None);
    }

    fn random_chart(f: &FiniteField, n: usize, rng: &mut ChaCha8Rng) -> Chart<FiniteField> {
        loop {
            let cols: Vec<Vec<u32>> =
                (0..=n).map(|_| (0..=n).map(|_| rng.gen_range(0..f.q())).collect()).collect();
            if let Ok(c) = Chart::new(f, cols) {
                return c;
            }
        }
    }

    #[test]
    fn plucker_relation_and_scaling() {
        let f = FiniteField::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p: Vec<u32> = (0..4).map(|_| rng.gen_range(0..11)).collect();
            let r: Vec<u32> = (0..4).map(|_| rng.gen_range(0..11)).collect();
            let Ok(l) = Line::new(&f, p, r) else { continue };
            let pl = l.plucker();
            let rel = f.add(
                &f.sub(&f.mul(&pl[0], &pl[5]), &f.mul(&pl[1], &pl[4])),
                &f.mul(&pl[2], &pl[3]),
            );
            assert_eq!(rel, 0);
            let m = [[2, 3], [5, 7]];
            let det = f.from_i64(2 * 7 - 3 * 5);
            let scaled: Vec<u32> = pl.iter().map(|x| f.mul(x, &det)).collect();
            assert_eq!(l.rebased(&m).unwrap().plucker(), scaled);
        }
    }

    #[test]
    fn chart_round_trip() {
        let f = FiniteField::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [3usize, 4, 5] {
            let c = random_chart(&f, n, &mut rng);
            for _ in 0..20 {
                let x: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..13)).collect();
                let y: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..13)).collect();
                let l = c.point(&x, &y).unwrap();
                assert_eq!(c.coords(&l), Some((x, y)));
            }
        }
    }

    #[test]
    fn jacobian_matches_block_formula() {
        // det J = det(B)^{−(n−1)} · det(C)²: the tangent space is Hom(W, V/W).
        let f = FiniteField::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [3usize, 4, 5] {
            let mut checked = 0;
            while checked < 10 {
                let c = random_chart(&f, n, &mut rng);
                let c2 = random_chart(&f, n, &mut rng);
                let x: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..101)).collect();
                let y: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..101)).collect();
                let l = c.point(&x, &y).unwrap();
                let Ok(j) = transition_jacobian_det(&c, &c2, &l) else { continue };
                let (b, cm) = chart_change_blocks(&c, &c2, &l).unwrap();
                let db = linalg::det(&f, &b);
                let dc = linalg::det(&f, &cm);
                let expect = f.mul(&f.powi(&db, -(n as i64 - 1)).unwrap(), &f.pow(&dc, 2));
                assert_eq!(j, expect, "n={n}");
                checked += 1;
            }
        }
    }

    #[test]
    fn same_chart_is_identity() {
        let f = Rationals;
        let c = Chart::identity(&f, 3);
        let l = c.point(&q(&[2, -1]), &q(&[3, 5])).unwrap();
        assert_eq!(transition_jacobian_det(&c, &c, &l).unwrap(), rat(1, 1));
        assert!(orientation_cocycle_square(&c, &c, &l).unwrap());
    }

    #[test]
    fn centered_charts_have_origin_at_line() {
        let f = Rationals;
        let l = Line::new(&f, q(&[1, 2, 0, 1, 0]), q(&[0, 1, 1, 0, 3])).unwrap();
        for c in [Chart::centered_at(&l), Chart::centered_at_reversed(&l)] {
            let (x, y) = c.coords(&l).unwrap();
            assert!(x.iter().chain(&y).all(|v| *v == rat(0, 1)));
        }
    }
}
