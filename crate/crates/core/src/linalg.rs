//! Determinants and ranks over exact fields and over floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::CycloNum;

/// Field operations needed by elimination. Constants are produced "like"
/// an existing element so that field parameters (the conductor) carry over.
pub trait FieldElem: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_null(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Division by a nonzero element.
    fn div_ref(&self, o: &Self) -> Self;
}

impl FieldElem for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
}

impl FieldElem for CycloNum {
    fn zero_like(&self) -> Self {
        CycloNum::zero(self.field())
    }
    fn one_like(&self) -> Self {
        CycloNum::one(self.field())
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn div_ref(&self, o: &Self) -> Self {
        self.div(o).expect("division by a nonzero cyclotomic number")
    }
}

/// Bareiss fraction-free elimination; every division is exact in the ring
/// generated by the entries. `one` is returned for the empty matrix.
pub fn bareiss_det<T: FieldElem>(matrix: &[Vec<T>], one: &T) -> T {
    let n = matrix.len();
    if n == 0 {
        return one.one_like();
    }
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let mut prev = one.one_like();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_null() {
            match (k + 1..n).find(|&r| !a[r][k].is_null()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return one.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul_ref(&a[k][k]).sub_ref(&a[i][k].mul_ref(&a[k][j]));
                a[i][j] = v.div_ref(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.zero_like().sub_ref(&d)
    } else {
        d
    }
}

/// Rank of the row space by Gaussian elimination.
pub fn exact_rank<T: FieldElem>(rows: &[Vec<T>]) -> usize {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_null()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_null() {
                let f = a[r][c].div_ref(&pivot);
                for j in c..cols {
                    let v = a[r][j].sub_ref(&f.mul_ref(&a[rank][j]));
                    a[r][j] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Unique solution of the square system `a·x = b`, or `None` if singular.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, rhs)| row.iter().cloned().chain([rhs.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=n {
                    let v = &m[c][j] * &f;
                    m[r][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub fn int_det(matrix: &[Vec<i64>]) -> BigInt {
    let q: Vec<Vec<BigRational>> =
        matrix.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let d = bareiss_det(&q, &BigRational::one());
    debug_assert!(d.is_integer());
    d.to_integer()
}

pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let q: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    exact_rank(&q)
}

/// Relative tolerance for floating-point pivots.
pub const FLOAT_PIVOT_TOL: f64 = 1e-8;

/// Determinant with partial pivoting.
pub fn float_det(matrix: &[Vec<f64>]) -> f64 {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).expect("nonempty range");
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

pub fn float_rank(rows: &[Vec<f64>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = FLOAT_PIVOT_TOL * scale;
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) =
            (rank..a.len()).filter(|&r| a[r][c].abs() > tol).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
        else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank {
                let f = a[r][c] / a[rank][c];
                for j in c..cols {
                    a[r][j] -= f * a[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rounds to the nearest integer when within `tol`.
pub fn snap_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= tol).then_some(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycloField;

    #[test]
    fn tridiagonal_determinants() {
        for n in 1..8usize {
            let m: Vec<Vec<i64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match i.abs_diff(j) {
                            0 => 2,
                            1 => -1,
                            _ => 0,
                        })
                        .collect()
                })
                .collect();
            assert_eq!(int_det(&m), BigInt::from(n as i64 + 1));
            assert!(
                (float_det(&m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<_>>())
                    - (n as f64 + 1.0))
                    .abs()
                    < 1e-9
            );
        }
        assert_eq!(int_det(&[]), BigInt::one());
        assert_eq!(int_det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
    }

    #[test]
    fn cyclotomic_block() {
        let f = CycloField::get(5);
        let xi = CycloNum::root_of_unity(&f, 2);
        let one = CycloNum::one(&f);
        let a = vec![
            vec![one.sub(&xi), CycloNum::from_int(&f, -1)],
            vec![CycloNum::from_int(&f, -1), CycloNum::from_int(&f, 2)],
        ];
        let direct = one.sub(&xi).mul(&CycloNum::from_int(&f, 2)).sub(&one);
        assert_eq!(bareiss_det(&a, &one), direct);
        assert_eq!(exact_rank(&a), 2);
        assert_eq!(exact_rank(&[a[0].clone(), a[0].clone()]), 1);
    }

    #[test]
    fn ranks() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(float_rank(&[vec![1.0, 2.0], vec![2.0, 4.0 + 1e-12]]), 1);
        assert_eq!(float_rank(&[vec![1.0, 0.0], vec![0.0, 1.0]]), 2);
    }
}
