//! The two lines meeting four general lines (or four linear sections of the
//! Plücker quadric) in `P³`.
//!
//! Each condition is a linear form on Plücker space `P⁵`; four of them cut a
//! pencil `u·P + v·Q`, and the Plücker quadric restricts to a binary
//! quadratic on it. Its two roots are the transversals.

use std::fmt;

use crate::field::{Field, FieldError, QuadExt};
use crate::grassmann::{GeometryError, Line};
use crate::gw::GwField;
use crate::linalg;
use crate::localindex::TwoForm;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransversalError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("lines {0} and {1} intersect")]
    Intersecting(usize, usize),
    #[error("transversals solve lines in P³ only")]
    NotInP3,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("the two transversals coincide (tangent configuration)")]
    Tangent,
}

/// `p₀₁p₂₃ − p₀₂p₁₃ + p₀₃p₁₂`.
pub fn plucker_quadric<F: Field>(f: &F, p: &[F::Elem]) -> F::Elem {
    let t1 = f.mul(&p[0], &p[5]);
    let t2 = f.mul(&p[1], &p[4]);
    let t3 = f.mul(&p[2], &p[3]);
    f.add(&f.sub(&t1, &t2), &t3)
}

/// The polarization of the quadric; vanishes exactly when two lines meet.
pub fn pairing<F: Field>(f: &F, p: &[F::Elem], q: &[F::Elem]) -> F::Elem {
    linalg::dot(f, &line_condition_of(f, q), p)
}

/// The linear form `p ↦ ⟨p, q⟩`.
fn line_condition_of<F: Field>(f: &F, q: &[F::Elem]) -> Vec<F::Elem> {
    vec![q[5].clone(), f.neg(&q[4]), q[3].clone(), q[2].clone(), f.neg(&q[1]), q[0].clone()]
}

/// The condition "meets `line`" on Plücker space.
pub fn line_condition<F: Field>(line: &Line<F>) -> Result<Vec<F::Elem>, TransversalError> {
    if line.n() != 3 {
        return Err(TransversalError::NotInP3);
    }
    Ok(line_condition_of(line.field(), &line.plucker()))
}

/// The condition "`ω` vanishes on the line".
pub fn form_condition<F: Field>(w: &TwoForm<F>) -> Result<Vec<F::Elem>, TransversalError> {
    if w.dim() != 4 {
        return Err(TransversalError::NotInP3);
    }
    Ok(w.plucker_coefficients())
}

/// The line with the given Plücker coordinates, which must satisfy the quadric.
pub fn line_from_plucker<F: Field>(f: &F, p: &[F::Elem]) -> Result<Line<F>, TransversalError> {
    if p.len() != 6 || !f.is_zero(&plucker_quadric(f, p)) {
        return Err(GeometryError::Dimension("not a point of the Plücker quadric".into()).into());
    }
    // Row k of the Plücker matrix is x_k·y − y_k·x, a vector of the line.
    let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let entry = |j: usize, k: usize| -> F::Elem {
        if j == k {
            return f.zero();
        }
        let (a, b, sign) = if j < k { (j, k, false) } else { (k, j, true) };
        let i = idx.iter().position(|&x| x == (a, b)).unwrap();
        if sign {
            f.neg(&p[i])
        } else {
            p[i].clone()
        }
    };
    let i = (0..6).find(|&i| !f.is_zero(&p[i])).ok_or_else(|| GeometryError::Dimension("zero Plücker vector".into()))?;
    let (a, b) = idx[i];
    let row = |k: usize| (0..4).map(|j| entry(k, j)).collect::<Vec<_>>();
    Ok(Line::new(f, row(a), row(b))?.canonical())
}

/// Transversals of a general configuration.
#[derive(Clone)]
pub enum Transversals<F: Field> {
    /// Two distinct lines defined over `k`.
    Rational([Line<F>; 2]),
    /// One closed point of degree 2: a line over `k(√d)` and its conjugate.
    Conjugate { d: F::Elem, ext: QuadExt<F>, line: Line<QuadExt<F>> },
}

impl<F: Field> fmt::Debug for Transversals<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transversals::Rational([a, b]) => write!(f, "Rational({:?}, {:?})", a.canonical_rows(), b.canonical_rows()),
            Transversals::Conjugate { d, line, .. } => write!(f, "Conjugate(d = {:?}, {:?})", d, line.canonical_rows()),
        }
    }
}

impl<F: Field> Transversals<F> {
    /// Number of geometric transversals.
    pub fn degree(&self) -> usize {
        2
    }

    pub fn closed_points(&self) -> usize {
        match self {
            Transversals::Rational(_) => 2,
            Transversals::Conjugate { .. } => 1,
        }
    }
}

/// The Galois conjugate of a line over `k(√d)`.
pub fn conjugate_line<F: Field>(ext: &QuadExt<F>, line: &Line<QuadExt<F>>) -> Line<QuadExt<F>> {
    line.map(ext, |a| ext.conj(a))
}

/// Solves four linear conditions on Plücker space against the quadric.
pub fn solve_plucker<F: GwField>(f: &F, conditions: &[Vec<F::Elem>]) -> Result<Transversals<F>, TransversalError> {
    if conditions.len() != 4 || conditions.iter().any(|c| c.len() != 6) {
        return Err(TransversalError::Degenerate("need four linear forms on Plücker space".into()));
    }
    let k = linalg::kernel(f, &conditions.to_vec(), 6);
    if k.len() != 2 {
        return Err(TransversalError::Degenerate(format!("solution space has dimension {}", k.len())));
    }
    let (p, q) = (&k[0], &k[1]);
    let a = plucker_quadric(f, p);
    let b = pairing(f, p, q);
    let c = plucker_quadric(f, q);
    if [&a, &b, &c].iter().all(|x| f.is_zero(x)) {
        return Err(TransversalError::Degenerate("the pencil lies on the quadric".into()));
    }
    let disc = f.sub(&f.mul(&b, &b), &f.mul(&f.from_i64(4), &f.mul(&a, &c)));
    if f.is_zero(&disc) {
        return Err(TransversalError::Tangent);
    }
    let combo = |u: &F::Elem, v: &F::Elem| -> Vec<F::Elem> {
        p.iter().zip(q).map(|(x, y)| f.add(&f.mul(u, x), &f.mul(v, y))).collect()
    };
    if let Some(s) = f.sqrt(&disc) {
        let roots = if f.is_zero(&a) {
            [(f.one(), f.zero()), (f.neg(&c), b.clone())]
        } else {
            let two_a = f.add(&a, &a);
            [(f.sub(&s, &b), two_a.clone()), (f.neg(&f.add(&s, &b)), two_a)]
        };
        let l0 = line_from_plucker(f, &combo(&roots[0].0, &roots[0].1))?;
        let l1 = line_from_plucker(f, &combo(&roots[1].0, &roots[1].1))?;
        return Ok(Transversals::Rational([l0, l1]));
    }
    // a ≠ 0 here: otherwise disc = b² is a square.
    let d = f.square_class_rep(&disc)?;
    let s = f.sqrt(&f.div(&disc, &d)?).expect("disc / d is a square");
    let ext = QuadExt::new(f.clone(), d.clone())?;
    let u = ext.make(f.neg(&b), s);
    let v = ext.lift(&f.add(&a, &a));
    let pe: Vec<_> = p.iter().map(|x| ext.lift(x)).collect();
    let qe: Vec<_> = q.iter().map(|x| ext.lift(x)).collect();
    let point: Vec<_> = pe.iter().zip(&qe).map(|(x, y)| ext.add(&ext.mul(&u, x), &ext.mul(&v, y))).collect();
    let line = line_from_plucker(&ext, &point)?;
    Ok(Transversals::Conjugate { d, ext, line })
}

/// The transversals of four pairwise disjoint lines in `P³`.
pub fn lines_meeting_four<F: GwField>(lines: &[Line<F>]) -> Result<Transversals<F>, TransversalError> {
    if lines.len() != 4 {
        return Err(TransversalError::Degenerate(format!("expected 4 lines, got {}", lines.len())));
    }
    let f = lines[0].field();
    let pl: Vec<Vec<F::Elem>> = lines
        .iter()
        .map(|l| if l.n() == 3 { Ok(l.plucker()) } else { Err(TransversalError::NotInP3) })
        .collect::<Result<_, _>>()?;
    for i in 0..4 {
        for j in i + 1..4 {
            if f.is_zero(&pairing(f, &pl[i], &pl[j])) {
                return Err(TransversalError::Intersecting(i, j));
            }
        }
    }
    let conds: Vec<_> = lines.iter().map(line_condition).collect::<Result<_, _>>()?;
    solve_plucker(f, &conds)
}

/// Transversals of the section given by four 2-forms on `k⁴`.
pub fn zeros_of_forms<F: GwField>(f: &F, forms: &[TwoForm<F>]) -> Result<Transversals<F>, TransversalError> {
    let conds: Vec<_> = forms.iter().map(form_condition).collect::<Result<_, _>>()?;
    solve_plucker(f, &conds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::{FiniteField, Rationals};
    use crate::localindex::{zeros, PlaneConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lines(f: &Rationals, data: &[([i64; 4], [i64; 4])]) -> Vec<Line<Rationals>> {
        data.iter().map(|(p, q)| Line::from_i64(f, p, q).unwrap()).collect()
    }

    fn example() -> Vec<Line<Rationals>> {
        lines(
            &Rationals,
            &[
                ([1, 0, 0, 0], [0, 0, 0, 1]),
                ([1, 0, 1, 0], [0, 1, 0, 1]),
                ([1, 0, 2, 0], [1, 2, 2, 1]),
                ([2, 1, 0, 0], [0, 0, 1, 2]),
            ],
        )
    }

    #[test]
    fn pairing_detects_meeting() {
        let f = Rationals;
        let a = Line::from_i64(&f, &[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        let b = Line::from_i64(&f, &[1, 0, 0, 0], &[0, 0, 1, 0]).unwrap();
        let c = Line::from_i64(&f, &[0, 0, 1, 0], &[0, 0, 0, 1]).unwrap();
        assert_eq!(pairing(&f, &a.plucker(), &b.plucker()), rat(0, 1));
        assert_ne!(pairing(&f, &a.plucker(), &c.plucker()), rat(0, 1));
        assert_eq!(plucker_quadric(&f, &a.plucker()), rat(0, 1));
        assert_eq!(line_from_plucker(&f, &c.plucker()).unwrap(), c);
    }

    #[test]
    fn worked_example_transversals() {
        let f = Rationals;
        let Transversals::Rational(found) = lines_meeting_four(&example()).unwrap() else { panic!("expected rational") };
        let expect = [
            Line::from_i64(&f, &[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap(),
            Line::from_i64(&f, &[0, 1, -1, 0], &[-1, 0, 0, 1]).unwrap(),
        ];
        assert!(found.contains(&expect[0]) && found.contains(&expect[1]));
        for l in &found {
            for m in example() {
                assert_eq!(pairing(&f, &l.plucker(), &m.plucker()), rat(0, 1));
            }
        }
    }

    #[test]
    fn printed_variant_has_same_transversals() {
        let mut ls = example();
        ls[3] = Line::from_i64(&Rationals, &[3, 1, 0, 0], &[0, 0, 1, 3]).unwrap();
        let Transversals::Rational(found) = lines_meeting_four(&ls).unwrap() else { panic!() };
        let l = Line::from_i64(&Rationals, &[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap();
        assert!(found.contains(&l));
    }

    #[test]
    fn conjugate_pair_over_q() {
        // Perturbing the fourth line makes the discriminant a non-square.
        let f = Rationals;
        let mut ls = example();
        let mut found = None;
        for a in 2..12 {
            ls[3] = Line::from_i64(&f, &[a, 1, 0, 0], &[0, 0, 1, a + 3]).unwrap();
            if let Ok(Transversals::Conjugate { d, ext, line }) = lines_meeting_four(&ls) {
                found = Some((d, ext, line));
                break;
            }
        }
        let (d, ext, line) = found.expect("a non-square discriminant in the family");
        assert!(!f.is_square(&d).unwrap());
        let conj = conjugate_line(&ext, &line);
        assert_ne!(conj, line);
        for m in &ls {
            let me = m.map(&ext, |x| ext.lift(x));
            assert!(ext.is_zero(&pairing(&ext, &line.plucker(), &me.plucker())));
            assert!(ext.is_zero(&pairing(&ext, &conj.plucker(), &me.plucker())));
        }
    }

    #[test]
    fn common_ruling_is_degenerate() {
        // Four lines of one ruling of x0x3 = x1x2 have infinitely many transversals.
        let f = Rationals;
        let ls: Vec<_> = (1..5)
            .map(|t| Line::from_i64(&f, &[1, t, 0, 0], &[0, 0, 1, t]).unwrap())
            .collect();
        assert!(matches!(lines_meeting_four(&ls), Err(TransversalError::Degenerate(_))));
    }

    #[test]
    fn intersecting_lines_rejected() {
        let mut ls = example();
        ls[1] = Line::from_i64(&Rationals, &[1, 0, 0, 0], &[0, 1, 0, 0]).unwrap();
        assert_eq!(lines_meeting_four(&ls).unwrap_err(), TransversalError::Intersecting(0, 1));
    }

    #[test]
    fn agrees_with_sweep_over_small_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [3u32, 5, 7, 11] {
            let f = FiniteField::prime(p).unwrap();
            let mut done = 0;
            while done < 5 {
                let ls: Vec<Line<FiniteField>> = (0..4)
                    .filter_map(|_| {
                        let a: Vec<u32> = (0..4).map(|_| rng.gen_range(0..p)).collect();
                        let b: Vec<u32> = (0..4).map(|_| rng.gen_range(0..p)).collect();
                        Line::new(&f, a, b).ok()
                    })
                    .collect();
                if ls.len() != 4 {
                    continue;
                }
                let Ok(t) = lines_meeting_four(&ls) else { continue };
                let cfg = PlaneConfig::from_lines(&ls).unwrap();
                let z = zeros::zero_locus_bruteforce(&cfg, 2).unwrap();
                match t {
                    Transversals::Rational(found) => {
                        assert_eq!(z.points.len(), 2);
                        for l in &found {
                            assert!(z.points.iter().any(|pt| pt.line == *l));
                        }
                    }
                    Transversals::Conjugate { .. } => {
                        assert_eq!(z.points.len(), 1);
                        assert_eq!(z.points[0].degree, 2);
                    }
                }
                done += 1;
            }
        }
    }
}
