//! Zero loci of plane configurations over finite fields.
//!
//! Every transversal meets `π_1` in a point `p`. Lines through `p` meeting
//! `π_i` are the 2-planes inside `ker R(p)`, where `R(p)` stacks the
//! functionals `ω_i(p, ·)` for `i ≥ 2`; `p` is always in that kernel, so a
//! transversal through `p` exists iff `rank R(p) ≤ n − 1`. The sweep walks
//! `P(π_1)(F_Q)` and keeps those `p`. `R` is linear in `p`, so along a
//! pencil `p = p_0 + t·u` the maximal minors are polynomials in `t` of
//! degree at most `n` and their common roots in `F_Q` bound the candidates.

use std::collections::BTreeMap;

use crate::field::{poly, Field, FieldError, FieldExtension, FiniteExt, FiniteField};
use crate::grassmann::Line;
use crate::linalg::{self, Matrix};

use super::{IndexError, PlaneConfig};

/// Below this field size every value of `t` is tested directly.
const DIRECT_SCAN_ORDER: u32 = 64;

/// A closed point of the zero locus with residue field `F_{q^degree}`.
#[derive(Debug, Clone)]
pub struct ClosedPoint {
    pub degree: usize,
    pub ext: FiniteExt,
    /// Orbit representative, defined over `ext.top()`.
    pub line: Line<FiniteField>,
}

impl ClosedPoint {
    pub fn field(&self) -> &FiniteField {
        self.ext.top()
    }
}

#[derive(Debug, Clone)]
pub struct ZeroLocus {
    pub points: Vec<ClosedPoint>,
    /// Sum of residue degrees of the points found.
    pub accounted: usize,
    pub max_degree: usize,
}

/// `F_{q^d}` where `q = |base|`.
fn extension_of(base: &FiniteField, d: usize) -> Result<FiniteField, IndexError> {
    Ok(FiniteField::new(base.p(), base.m() * d as u32)?)
}

/// Sweep degrees whose divisors cover `1..=max_degree`.
pub fn sweep_degrees(max_degree: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for d in (1..=max_degree).rev() {
        if !chosen.iter().any(|m| m % d == 0) {
            chosen.push(d);
        }
    }
    chosen
}

/// All closed points of degree at most `max_degree` of the zero locus.
///
/// Output is sorted by degree, then by canonical echelon rows.
pub fn zero_locus_bruteforce(cfg: &PlaneConfig<FiniteField>, max_degree: usize) -> Result<ZeroLocus, IndexError> {
    let base = cfg.field();
    let mut found: BTreeMap<(usize, Matrix<u32>), ClosedPoint> = BTreeMap::new();
    for m in sweep_degrees(max_degree) {
        let big = extension_of(base, m)?;
        let ext = FiniteExt::new(base, &big)?;
        let lines = lines_over(&cfg.embed(&ext))?;
        for line in lines {
            let pt = closed_point(base, &big, &line)?;
            found.entry((pt.degree, pt.line.canonical_rows())).or_insert(pt);
        }
    }
    let points: Vec<ClosedPoint> = found.into_values().collect();
    let accounted = points.iter().map(|p| p.degree).sum();
    Ok(ZeroLocus { points, accounted, max_degree })
}

/// Residue field and orbit-minimal representative of a line over `big ⊇ base`.
fn closed_point(base: &FiniteField, big: &FiniteField, line: &Line<FiniteField>) -> Result<ClosedPoint, IndexError> {
    let m = (big.m() / base.m()) as usize;
    let rows = line.canonical_rows();
    let entries: Vec<u32> = rows.iter().flatten().copied().collect();
    let mut degree = m;
    for d in (1..=m).filter(|d| m % d == 0) {
        let sub = extension_of(base, d)?;
        let e = FiniteExt::new(&sub, big)?;
        if entries.iter().all(|a| e.restrict(a).is_some()) {
            degree = d;
            break;
        }
    }
    let sub = extension_of(base, degree)?;
    let down = FiniteExt::new(&sub, big)?;
    let ext = FiniteExt::new(base, &sub)?;
    let mut rep: Matrix<u32> =
        rows.iter().map(|r| r.iter().map(|a| down.restrict(a).expect("entry in residue field")).collect()).collect();
    let mut conj = rep.clone();
    for _ in 1..degree {
        conj = conj.iter().map(|r| r.iter().map(|a| ext.relative_frobenius(a)).collect()).collect();
        if conj < rep {
            rep = conj.clone();
        }
    }
    let line = Line::new(&sub, rep[0].clone(), rep[1].clone())?;
    Ok(ClosedPoint { degree, ext, line })
}

/// All `F_Q`-rational zeros of a configuration, as canonical lines.
pub fn lines_over(cfg: &PlaneConfig<FiniteField>) -> Result<Vec<Line<FiniteField>>, IndexError> {
    lines_over_with(cfg, DIRECT_SCAN_ORDER)
}

fn lines_over_with(cfg: &PlaneConfig<FiniteField>, direct_scan: u32) -> Result<Vec<Line<FiniteField>>, IndexError> {
    let f = cfg.field();
    let n = cfg.n();
    let section = cfg.section();
    let forms = &section.forms()[1..];
    let u = cfg.planes()[0].basis(f);
    debug_assert_eq!(u.len(), n - 1);
    let cols = n + 1;
    let rows = forms.len();
    // R(u_j), row-major, for each basis vector of π_1.
    let r_of: Vec<Vec<u32>> = u.iter().map(|v| forms.iter().flat_map(|w| w.contract(v)).collect()).collect();
    let combine = |coeffs: &[(usize, u32)], acc: &mut [u32]| {
        acc.fill(0);
        for &(j, c) in coeffs {
            for (a, b) in acc.iter_mut().zip(&r_of[j]) {
                *a = f.add(a, &f.mul(&c, b));
            }
        }
    };
    let unflatten = |flat: &[u32]| -> Matrix<u32> { flat.chunks(cols).map(|r| r.to_vec()).collect() };
    let mut out: BTreeMap<Matrix<u32>, Line<FiniteField>> = BTreeMap::new();
    let mut record = |r: &Matrix<u32>| -> Result<(), IndexError> {
        if let Some(line) = line_through(f, n, r)? {
            out.entry(line.canonical_rows()).or_insert(line);
        }
        Ok(())
    };
    let dim = n - 1;
    let last = dim - 1;
    let filter = MinorFilter::new(f, n, rows, &u[last], direct_scan)?;
    let mut r0 = vec![0u32; rows * cols];
    let mut r = vec![0u32; rows * cols];
    for lead in 0..dim {
        if lead == last {
            combine(&[(lead, 1)], &mut r);
            record(&unflatten(&r))?;
            continue;
        }
        let mut prefix = vec![0u32; last - lead - 1];
        loop {
            let mut coeffs: Vec<(usize, u32)> = vec![(lead, 1)];
            coeffs.extend(prefix.iter().enumerate().map(|(i, &c)| (lead + 1 + i, c)));
            combine(&coeffs, &mut r0);
            let p0 = coeffs.iter().fold(0, |acc, &(j, c)| f.add(&acc, &f.mul(&c, &u[j][filter.col])));
            for t in filter.candidates(&r0, &r_of[last], p0) {
                coeffs.push((last, t));
                combine(&coeffs, &mut r);
                coeffs.pop();
                record(&unflatten(&r))?;
            }
            if !advance(&mut prefix, f.q()) {
                break;
            }
        }
    }
    Ok(out.into_values().collect())
}

fn advance(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// The unique line through `p` inside `ker R`, if `rank R ≤ n − 1`.
fn line_through(f: &FiniteField, n: usize, r: &Matrix<u32>) -> Result<Option<Line<FiniteField>>, IndexError> {
    let k = linalg::kernel(f, r, n + 1);
    match k.len() {
        0 | 1 => Ok(None),
        2 => Ok(Some(Line::new(f, k[0].clone(), k[1].clone())?.canonical())),
        _ => Err(IndexError::Degenerate("a point of π_1 lies on infinitely many transversals".into())),
    }
}

/// Determinant of a row-major `n × n` block, destroying it.
fn det_in_place(f: &FiniteField, a: &mut [u32], n: usize) -> u32 {
    let mut d = 1u32;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in col..n {
                a.swap(piv * n + c, col * n + c);
            }
            d = f.neg(&d);
        }
        let pv = a[col * n + col];
        d = f.mul(&d, &pv);
        let pinv = f.inv(&pv).expect("nonzero pivot");
        for r in col + 1..n {
            let lead = a[r * n + col];
            if lead == 0 {
                continue;
            }
            let factor = f.neg(&f.mul(&lead, &pinv));
            for c in col + 1..n {
                a[r * n + c] = f.add(&a[r * n + c], &f.mul(&factor, &a[col * n + c]));
            }
        }
    }
    d
}

/// Filters the pencil `R_0 + t·R_1` by two maximal minors.
///
/// With `p(t) = p_0 + t·u` in the kernel of every `n`-row block `A(t)`, the
/// signed maximal minors of `A(t)` are `g(t)·p(t)`, so the minor omitting
/// column `c` is `±g(t)·p_c(t)`. Dividing by `p_c` leaves `g`, which vanishes
/// wherever the block drops rank.
struct MinorFilter<'a> {
    f: &'a FiniteField,
    n: usize,
    rows: usize,
    col: usize,
    u_col: u32,
    direct: bool,
    xs: Vec<u32>,
    vinv: Matrix<u32>,
}

impl<'a> MinorFilter<'a> {
    fn new(f: &'a FiniteField, n: usize, rows: usize, u_last: &[u32], direct_scan: u32) -> Result<Self, IndexError> {
        let col = u_last.iter().position(|a| *a != 0).expect("nonzero basis vector");
        let direct = f.q() <= direct_scan || f.q() as usize <= n + 1;
        let xs: Vec<u32> = (0..=n as u32).collect();
        let vinv = if direct {
            Vec::new()
        } else {
            let v: Matrix<u32> = xs.iter().map(|x| (0..=n).map(|j| f.pow(x, j as u64)).collect()).collect();
            linalg::inverse(f, &v).ok_or(FieldError::DivisionByZero)?
        };
        Ok(MinorFilter { f, n, rows, col, u_col: u_last[col], direct, xs, vinv })
    }

    fn candidates(&self, r0: &[u32], r1: &[u32], p0_col: u32) -> Vec<u32> {
        let f = self.f;
        let (n, cols) = (self.n, self.n + 1);
        if self.direct {
            return (0..f.q()).collect();
        }
        let mut block = vec![0u32; n * n];
        let mut g: Option<poly::Poly<u32>> = None;
        for first in [0, self.rows - n] {
            let ys: Vec<u32> = self
                .xs
                .iter()
                .map(|t| {
                    let mut k = 0;
                    for r in first..first + n {
                        for c in (0..cols).filter(|&c| c != self.col) {
                            let i = r * cols + c;
                            block[k] = f.add(&r0[i], &f.mul(t, &r1[i]));
                            k += 1;
                        }
                    }
                    det_in_place(f, &mut block, n)
                })
                .collect();
            let coeffs: Vec<u32> = self.vinv.iter().map(|row| linalg::dot(f, row, &ys)).collect();
            let minor = poly::trim(f, coeffs);
            if minor.is_empty() {
                continue;
            }
            let linear = vec![p0_col, self.u_col];
            let reduced = match poly::divrem(f, &minor, &linear) {
                Ok((quo, rem)) if rem.is_empty() => quo,
                _ => minor,
            };
            g = Some(match g {
                None => reduced,
                Some(h) => poly::gcd(f, &h, &reduced),
            });
        }
        let Some(g) = g else { return (0..f.q()).collect() };
        let g = poly::monic(f, &g);
        if g.len() <= 1 {
            return Vec::new();
        }
        // Split part: gcd(g, t^Q − t).
        let x = vec![0, 1];
        let xq = poly::powmod(f, &x, f.q() as u64, &g);
        let split = poly::monic(f, &poly::gcd(f, &g, &poly::sub(f, &xq, &x)));
        let mut roots = Vec::new();
        split_roots(f, &split, &mut roots);
        roots.sort_unstable();
        roots
    }
}

/// Roots of a squarefree polynomial that splits into linear factors (Cantor–Zassenhaus).
fn split_roots(f: &FiniteField, g: &poly::Poly<u32>, out: &mut Vec<u32>) {
    match poly::degree(g) {
        None | Some(0) => {}
        Some(1) => out.push(f.neg(&f.div(&g[0], &g[1]).expect("monic"))),
        Some(d) => {
            let e = (f.q() as u64 - 1) / 2;
            for a in 0..f.q() {
                let h = poly::powmod(f, &vec![a, 1], e, g);
                let h = poly::sub(f, &h, &vec![1]);
                let c = poly::monic(f, &poly::gcd(f, g, &h));
                let dc = poly::degree(&c).unwrap_or(0);
                if dc > 0 && dc < d {
                    let (rest, _) = poly::divrem(f, g, &c).expect("nonzero divisor");
                    split_roots(f, &c, out);
                    split_roots(f, &poly::monic(f, &rest), out);
                    return;
                }
            }
            unreachable!("a split squarefree polynomial of degree ≥ 2 has a separating shift");
        }
    }
}

/// Visits every point of `Gr(2, n+1)(F_Q)` once, as its reduced row-echelon rows.
pub fn for_each_rref(f: &FiniteField, n: usize, mut visit: impl FnMut(&[Vec<u32>; 2])) {
    let q = f.q();
    let n1 = n + 1;
    for i in 0..n1 {
        for j in i + 1..n1 {
            let free0: Vec<usize> = (i + 1..n1).filter(|&c| c != j).collect();
            let free1: Vec<usize> = (j + 1..n1).collect();
            let mut digits = vec![0u32; free0.len() + free1.len()];
            let mut rows = [vec![0u32; n1], vec![0u32; n1]];
            rows[0][i] = 1;
            rows[1][j] = 1;
            loop {
                for (k, &c) in free0.iter().enumerate() {
                    rows[0][c] = digits[k];
                }
                for (k, &c) in free1.iter().enumerate() {
                    rows[1][c] = digits[free0.len() + k];
                }
                visit(&rows);
                if !advance(&mut digits, q) {
                    break;
                }
            }
        }
    }
}

/// The literal oracle: filter all of `Gr(2, n+1)(F_Q)` by incidence.
pub fn lines_over_exhaustive(cfg: &PlaneConfig<FiniteField>) -> Vec<Line<FiniteField>> {
    let f = cfg.field();
    let section = cfg.section();
    let mut out = Vec::new();
    for_each_rref(f, cfg.n(), |[p, q]| {
        if section.forms().iter().all(|w| f.is_zero(&w.eval(p, q))) {
            out.push(Line::new(f, p.clone(), q.clone()).expect("echelon rows are independent"));
        }
    });
    out.sort_by_key(|l| l.canonical_rows());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localindex::CodimTwoPlane;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_config(f: &FiniteField, n: usize, rng: &mut ChaCha8Rng) -> PlaneConfig<FiniteField> {
        loop {
            let planes: Result<Vec<_>, _> = (0..2 * n - 2)
                .map(|_| {
                    let a = (0..=n).map(|_| rng.gen_range(0..f.q())).collect();
                    let b = (0..=n).map(|_| rng.gen_range(0..f.q())).collect();
                    CodimTwoPlane::new(f, a, b)
                })
                .collect();
            if let Ok(p) = planes {
                return PlaneConfig::new(f, n, p).unwrap();
            }
        }
    }

    fn worked_example_mod(p: u32) -> PlaneConfig<FiniteField> {
        let f = FiniteField::prime(p).unwrap();
        let lines: Vec<_> = [
            ([1, 0, 0, 0], [0, 0, 0, 1]),
            ([1, 0, 1, 0], [0, 1, 0, 1]),
            ([1, 0, 2, 0], [1, 2, 2, 1]),
            ([2, 1, 0, 0], [0, 0, 1, 2]),
        ]
        .iter()
        .map(|(a, b)| Line::from_i64(&f, a, b).unwrap())
        .collect();
        PlaneConfig::from_lines(&lines).unwrap()
    }

    #[test]
    fn grassmannian_point_counts() {
        // |Gr(2,4)(F_q)| = (q²+1)(q²+q+1), |Gr(2,6)(F_3)| = 11011.
        for q in [3u32, 5] {
            let f = FiniteField::prime(q).unwrap();
            let q = q as usize;
            let mut count = 0;
            for_each_rref(&f, 3, |_| count += 1);
            assert_eq!(count, (q * q + 1) * (q * q + q + 1));
        }
        let f = FiniteField::prime(3).unwrap();
        let mut count = 0;
        for_each_rref(&f, 5, |_| count += 1);
        assert_eq!(count, 11011);
    }

    #[test]
    fn worked_example_mod_7_has_two_rational_zeros() {
        let cfg = worked_example_mod(7);
        let z = zero_locus_bruteforce(&cfg, 1).unwrap();
        assert_eq!(z.points.len(), 2);
        assert!(z.points.iter().all(|p| p.degree == 1));
        let direct: Vec<_> = lines_over_exhaustive(&cfg).iter().map(|l| l.canonical_rows()).collect();
        let swept: Vec<_> = z.points.iter().map(|p| p.line.canonical_rows()).collect();
        assert_eq!(direct, swept);
        // L = span((0,1,1,0),(1,0,0,1)) reduces to one of them.
        let f = cfg.field();
        let l = Line::from_i64(f, &[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap();
        assert!(swept.contains(&l.canonical_rows()));
    }

    #[test]
    fn sweep_matches_rref_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m, n) in [(3u32, 1u32, 3usize), (5, 1, 3), (7, 1, 3), (3, 2, 3), (3, 1, 5)] {
            let k = FiniteField::new(p, m).unwrap();
            for _ in 0..4 {
                let cfg = random_config(&k, n, &mut rng);
                let Ok(swept) = lines_over(&cfg) else { continue };
                let swept: Vec<_> = swept.iter().map(|l| l.canonical_rows()).collect();
                let direct: Vec<_> = lines_over_exhaustive(&cfg).iter().map(|l| l.canonical_rows()).collect();
                assert_eq!(swept, direct, "F_{p}^{m}, n = {n}");
            }
        }
    }

    #[test]
    fn polynomial_filter_matches_direct_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m, n) in [(5u32, 2u32, 3usize), (13, 1, 3), (7, 1, 5)] {
            let k = FiniteField::new(p, m).unwrap();
            let cfg = random_config(&k, n, &mut rng);
            let Ok(swept) = lines_over_with(&cfg, 0) else { continue };
            let direct = lines_over_exhaustive(&cfg);
            assert_eq!(
                swept.iter().map(|l| l.canonical_rows()).collect::<Vec<_>>(),
                direct.iter().map(|l| l.canonical_rows()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn degree_two_point_over_f3() {
        let f = FiniteField::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = false;
        for _ in 0..200 {
            let cfg = random_config(&f, 3, &mut rng);
            let Ok(z) = zero_locus_bruteforce(&cfg, 2) else { continue };
            if z.points.len() == 1 && z.points[0].degree == 2 {
                let pt = &z.points[0];
                assert_eq!(pt.field().q(), 9);
                assert!(cfg.embed(&pt.ext).meets_all(&pt.line));
                // Its Frobenius conjugate is the other F_9-point.
                let f9 = pt.field().clone();
                let over9: Vec<_> = lines_over(&cfg.embed(&pt.ext)).unwrap().iter().map(|l| l.canonical()).collect();
                assert_eq!(over9.len(), 2);
                let conj = pt.line.map(&f9, |x| f9.frobenius(x)).canonical();
                assert_ne!(conj, pt.line.canonical());
                assert!(over9.contains(&conj) && over9.contains(&pt.line.canonical()));
                seen = true;
                break;
            }
        }
        assert!(seen);
    }

    #[test]
    fn sweep_degree_cover() {
        assert_eq!(sweep_degrees(4), vec![4, 3]);
        assert_eq!(sweep_degrees(2), vec![2]);
        assert_eq!(sweep_degrees(6), vec![6, 5, 4]);
    }
}
