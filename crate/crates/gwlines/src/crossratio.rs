//! Cross-ratios `λ_L` of the points `L ∩ L_i` and `μ_L` of the planes
//! `span(L, L_i)`, and the index `Tr⟨λ_L − μ_L⟩`.

use std::fmt;

use crate::field::{Field, FieldError, FieldExtension};
use crate::grassmann::{GeometryError, Line};
use crate::gw::{trace_form, GwClass, GwError, GwField};
use crate::linalg;
use crate::localindex::{CodimTwoPlane, LineBases};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrossRatioError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error("{0} {1} and {2} coincide")]
    Coincident(&'static str, usize, usize),
    #[error("line {0} does not meet L")]
    Misses(usize),
    #[error("line {0} equals L")]
    Contained(usize),
    #[error("expected four lines in P³")]
    Shape,
    #[error("λ = μ: the index is degenerate")]
    LambdaEqualsMu,
}

/// `[pq] = p₀q₁ − p₁q₀`.
pub fn bracket<F: Field>(f: &F, p: &[F::Elem; 2], q: &[F::Elem; 2]) -> F::Elem {
    f.sub(&f.mul(&p[0], &q[1]), &f.mul(&p[1], &q[0]))
}

/// `[p₄p₁][p₂p₃] / ([p₂p₁][p₄p₃])` for pairwise distinct points of `P¹`.
pub fn cross_ratio<F: Field>(f: &F, pts: &[[F::Elem; 2]; 4]) -> Result<F::Elem, CrossRatioError> {
    cross_ratio_of(f, pts, "points")
}

fn cross_ratio_of<F: Field>(f: &F, pts: &[[F::Elem; 2]; 4], what: &'static str) -> Result<F::Elem, CrossRatioError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if f.is_zero(&bracket(f, &pts[i], &pts[j])) {
                return Err(CrossRatioError::Coincident(what, i, j));
            }
        }
    }
    let [p1, p2, p3, p4] = pts;
    let num = f.mul(&bracket(f, p4, p1), &bracket(f, p2, p3));
    let den = f.mul(&bracket(f, p2, p1), &bracket(f, p4, p3));
    Ok(f.div(&num, &den)?)
}

#[derive(Clone)]
pub struct CrossRatioData<F: Field> {
    pub lambda: F::Elem,
    pub mu: F::Elem,
    /// `L ∩ L_i` in the basis `L.rows()` of `W`.
    pub points: [[F::Elem; 2]; 4],
    /// Image of `L_i` in `V/W`, in the basis of [`LineBases::standard`].
    pub planes: [[F::Elem; 2]; 4],
}

impl<F: Field> fmt::Debug for CrossRatioData<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrossRatioData")
            .field("lambda", &self.lambda)
            .field("mu", &self.mu)
            .field("points", &self.points)
            .field("planes", &self.planes)
            .finish()
    }
}

impl<F: Field> CrossRatioData<F> {
    pub fn difference(&self, f: &F) -> F::Elem {
        f.sub(&self.lambda, &self.mu)
    }
}

/// Coordinates `[a : b]` with `v ≡ a·b₀ + b·b₁` modulo the span of `rest`.
fn coords_mod<F: Field>(f: &F, basis: [&[F::Elem]; 2], rest: &[Vec<F::Elem>], v: &[F::Elem]) -> Option<[F::Elem; 2]> {
    let mut cols: Vec<Vec<F::Elem>> = vec![basis[0].to_vec(), basis[1].to_vec()];
    cols.extend(rest.iter().cloned());
    cols.push(v.to_vec());
    let k = linalg::kernel(f, &linalg::transpose(&cols), cols.len());
    let rel = k.first()?;
    let last = rel.last()?;
    if k.len() != 1 || f.is_zero(last) {
        return None;
    }
    Some([rel[0].clone(), rel[1].clone()])
}

/// `λ_L` and `μ_L` for a line meeting four lines of `P³`.
pub fn lambda_mu<F: Field>(lines: &[Line<F>], l: &Line<F>) -> Result<CrossRatioData<F>, CrossRatioError> {
    if lines.len() != 4 || l.n() != 3 || lines.iter().any(|m| m.n() != 3) {
        return Err(CrossRatioError::Shape);
    }
    let f = l.field();
    let [w0, w1] = l.rows();
    let quotient = LineBases::standard(l).quotient;
    let mut points = Vec::with_capacity(4);
    let mut planes = Vec::with_capacity(4);
    for (i, m) in lines.iter().enumerate() {
        if m == l {
            return Err(CrossRatioError::Contained(i));
        }
        let v = CodimTwoPlane::from_line(m).intersection_point(f, l).ok_or(CrossRatioError::Misses(i))?;
        points.push(coords_mod(f, [w0, w1], &[], &v).ok_or(CrossRatioError::Misses(i))?);
        let x = m.rows().iter().find(|r| !l.contains(r)).expect("a line other than L has a row outside W");
        planes.push(coords_mod(f, [&quotient[0], &quotient[1]], &[w0.clone(), w1.clone()], x).expect("quotient basis"));
    }
    let points: [[F::Elem; 2]; 4] = points.try_into().map_err(|_| CrossRatioError::Shape)?;
    let planes: [[F::Elem; 2]; 4] = planes.try_into().map_err(|_| CrossRatioError::Shape)?;
    let lambda = cross_ratio_of(f, &points, "points")?;
    let mu = cross_ratio_of(f, &planes, "planes")?;
    Ok(CrossRatioData { lambda, mu, points, planes })
}

/// `Tr_{k(L)/k}⟨λ_L − μ_L⟩` for a transversal defined over `ext.top()`.
pub fn index_via_cross_ratio<X>(
    lines: &[Line<X::Base>],
    l: &Line<X::Top>,
    ext: &X,
) -> Result<GwClass<X::Base>, CrossRatioError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let up: Vec<Line<X::Top>> = lines.iter().map(|m| m.embed(ext)).collect();
    let data = lambda_mu(&up, l)?;
    let diff = data.difference(ext.top());
    if ext.top().is_zero(&diff) {
        return Err(CrossRatioError::LambdaEqualsMu);
    }
    Ok(trace_form(ext, &diff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::{FiniteField, Rationals, Trivial};
    use crate::transversals::{lines_meeting_four, Transversals};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(a: i64, b: i64) -> [BigRational; 2] {
        [rat(a, 1), rat(b, 1)]
    }

    fn example(fourth: i64) -> Vec<Line<Rationals>> {
        let f = Rationals;
        [
            ([1, 0, 0, 0], [0, 0, 0, 1]),
            ([1, 0, 1, 0], [0, 1, 0, 1]),
            ([1, 0, 2, 0], [1, 2, 2, 1]),
            ([fourth, 1, 0, 0], [0, 0, 1, fourth]),
        ]
        .iter()
        .map(|(p, q)| Line::from_i64(&f, p, q).unwrap())
        .collect()
    }

    #[test]
    fn normalization_example() {
        let f = Rationals;
        for lam in [-3, 2, 7] {
            assert_eq!(cross_ratio(&f, &[pt(1, 0), pt(1, 1), pt(0, 1), pt(1, lam)]).unwrap(), rat(lam, 1));
        }
        assert!(matches!(
            cross_ratio(&f, &[pt(1, 0), pt(2, 0), pt(0, 1), pt(1, 1)]),
            Err(CrossRatioError::Coincident(_, 0, 1))
        ));
    }

    #[test]
    fn printed_point_examples() {
        let f = Rationals;
        // As printed the fourth point gives 1/5; [1:2] gives the published 1/3.
        assert_eq!(cross_ratio(&f, &[pt(0, 1), pt(1, 1), pt(2, 1), pt(1, 3)]).unwrap(), rat(1, 5));
        assert_eq!(cross_ratio(&f, &[pt(0, 1), pt(1, 1), pt(2, 1), pt(1, 2)]).unwrap(), rat(1, 3));
    }

    #[test]
    fn worked_example_values() {
        let f = Rationals;
        let lines = example(2);
        let l = Line::from_i64(&f, &[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap();
        let l2 = Line::from_i64(&f, &[0, 1, -1, 0], &[-1, 0, 0, 1]).unwrap();
        let a = lambda_mu(&lines, &l).unwrap();
        let b = lambda_mu(&lines, &l2).unwrap();
        assert_eq!((a.lambda.clone(), a.mu.clone()), (rat(1, 3), rat(-1, 5)));
        assert_eq!((b.lambda.clone(), b.mu.clone()), (rat(-1, 5), rat(1, 3)));
        assert_eq!(a.difference(&f), rat(8, 15));
        let ext = Trivial(f);
        let ia = index_via_cross_ratio(&lines, &l, &ext).unwrap();
        let ib = index_via_cross_ratio(&lines, &l2, &ext).unwrap();
        assert!(ia.gw_equal(&GwClass::one_dim(&f, &rat(30, 1)).unwrap()).unwrap());
        assert!(ia.add(&ib).unwrap().gw_equal(&GwClass::hyperbolic(&f, 1)).unwrap());
    }

    #[test]
    fn printed_configuration_values() {
        let f = Rationals;
        let lines = example(3);
        let l = Line::from_i64(&f, &[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap();
        let a = lambda_mu(&lines, &l).unwrap();
        assert_eq!((a.lambda.clone(), a.mu.clone()), (rat(1, 5), rat(-1, 7)));
        assert_eq!(a.difference(&f), rat(12, 35));
    }

    #[test]
    fn basis_independence() {
        let f = FiniteField::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut done = 0;
        while done < 20 {
            let lines: Vec<Line<FiniteField>> = (0..4)
                .filter_map(|_| {
                    let a = (0..4).map(|_| rng.gen_range(0..101)).collect();
                    let b = (0..4).map(|_| rng.gen_range(0..101)).collect();
                    Line::new(&f, a, b).ok()
                })
                .collect();
            let Ok(Transversals::Rational([l, l2])) = lines_meeting_four(&lines) else { continue };
            let (Ok(a), Ok(b)) = (lambda_mu(&lines, &l), lambda_mu(&lines, &l2)) else { continue };
            // Swap symmetry.
            assert_eq!(a.mu, b.lambda);
            assert_eq!(b.mu, a.lambda);
            let g = [[rng.gen_range(1..101), rng.gen_range(0..101)], [rng.gen_range(0..101), rng.gen_range(1..101)]];
            if let Ok(lr) = l.rebased(&g) {
                let c = lambda_mu(&lines, &lr).unwrap();
                assert_eq!((c.lambda, c.mu), (a.lambda.clone(), a.mu.clone()));
            }
            done += 1;
        }
    }
}
