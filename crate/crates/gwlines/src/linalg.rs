//! Dense linear algebra over a field. Matrices are row-major `Vec<Vec<_>>`.

use crate::field::Field;

pub type Matrix<E> = Vec<Vec<E>>;

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect()
}

pub fn transpose<E: Clone>(a: &Matrix<E>) -> Matrix<E> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn matmul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(&row[k], &b[k][j])))
                })
                .collect()
        })
        .collect()
}

pub fn matvec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
        .collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(f: &F, a: &Matrix<F::Elem>) -> F::Elem {
    let n = a.len();
    let mut m = a.clone();
    let mut d = f.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
            return f.zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = f.neg(&d);
        }
        let pinv = f.inv(&m[col][col]).expect("nonzero pivot");
        d = f.mul(&d, &m[col][col]);
        for r in col + 1..n {
            if f.is_zero(&m[r][col]) {
                continue;
            }
            let factor = f.mul(&m[r][col], &pinv);
            for c in col..n {
                let t = f.mul(&factor, &m[col][c]);
                m[r][c] = f.sub(&m[r][c], &t);
            }
        }
    }
    d
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(piv, r);
        let inv = f.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// A basis of `{x : a·x = 0}`, one vector per free column.
pub fn kernel<F: Field>(f: &F, a: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(f, a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&r[i][fc]);
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = a.len();
    let aug: Matrix<F::Elem> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn map<F: Field, G: Field>(
    a: &Matrix<F::Elem>,
    g: impl Fn(&F::Elem) -> G::Elem,
) -> Matrix<G::Elem> {
    a.iter().map(|row| row.iter().map(&g).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational::rat;
    use crate::field::{FiniteField, Rationals};

    fn q(rows: &[&[i64]]) -> Matrix<num_rational::BigRational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let f = Rationals;
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&f, &a), rat(18, 1));
        let inv = inverse(&f, &a).unwrap();
        assert_eq!(matmul(&f, &a, &inv), identity(&f, 3));
        assert!(inverse(&f, &q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = FiniteField::prime(7).unwrap();
        let a = vec![vec![1, 2, 3, 4], vec![2, 4, 6, 2]];
        let k = kernel(&f, &a, 4);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(matvec(&f, &a, &v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn permutation_sign() {
        let f = Rationals;
        assert_eq!(det(&f, &q(&[&[0, 1], &[1, 0]])), rat(-1, 1));
    }
}
