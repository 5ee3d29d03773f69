//! Small exact linear algebra over `Z` and `Q`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Sizes in this crate are tiny (at most
//! a few dozen rows, ambient dimension ≤ 4 in practice), so plain Gaussian
//! elimination is all that is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn to_rational(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
pub fn det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank of an integer matrix.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (piv, lead) = (a[r][c].clone(), a[i][c].clone());
            let mut g = BigInt::zero();
            for j in c..ncols {
                a[i][j] = &a[i][j] * &piv - &a[r][j] * &lead;
                g = g.gcd(&a[i][j]);
            }
            if !g.is_zero() && !g.is_one() {
                for x in &mut a[i][c..] {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form; returns the reduced matrix and its pivot columns.
pub fn rref(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in &mut a[r] {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// One solution of `a · x = b`, with free variables set to zero, or `None` if
/// the system is inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> Option<Vec<BigRational>> {
    debug_assert_eq!(a.len(), b.len());
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), ncols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix, or `None` if it is singular.
pub fn inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of `{x : a · x = 0}`.
pub fn nullspace(a: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (red, pivots) = rref(a.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Basis of the linear relations `{λ : Σ λᵢ rowᵢ = 0}` among the rows.
pub fn row_relations(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let transposed: Vec<Vec<BigRational>> = (0..ncols)
        .map(|c| {
            rows.iter()
                .map(|r| BigRational::from_integer(r[c].clone()))
                .collect()
        })
        .collect();
    nullspace(&transposed, nrows)
}

/// Integer normal to the hyperplane spanned by `n − 1` vectors in `Z^n`:
/// `aⱼ = (−1)ʲ det(V with column j removed)`. Zero iff the vectors are
/// dependent.
pub fn cofactor_normal(vectors: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    debug_assert_eq!(vectors.len() + 1, n);
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = det(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Lcm of the denominators of a rational vector.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

pub fn abs_det(rows: &[Vec<BigInt>]) -> BigInt {
    det(rows).abs()
}
