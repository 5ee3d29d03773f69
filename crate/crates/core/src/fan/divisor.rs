//! Torus-invariant Weil divisors on a fan: ℚ-Cartier data, Picard rank, nefness.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{Adjugate, Fan};
use crate::error::{Error, Result};
use crate::lattice::{linalg, Lattice, LatticePoint};

/// `Σ a_i D_i`, with one coefficient per ray of the fan it lives on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilDivisor {
    coeffs: Vec<BigRational>,
}

impl WeilDivisor {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        WeilDivisor { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(rays: usize) -> Self {
        Self::new(vec![BigRational::zero(); rays])
    }

    /// The toric divisor `D_i`.
    pub fn ray(rays: usize, i: usize) -> Self {
        let mut d = Self::zero(rays);
        d.coeffs[i] = BigRational::one();
        d
    }

    /// `−K = Σ D_i`.
    pub fn anticanonical(rays: usize) -> Self {
        Self::new(vec![BigRational::one(); rays])
    }

    /// `div(χ^m) = Σ ⟨m, v_i⟩ D_i`.
    pub fn principal<L: Lattice>(fan: &Fan<L>, m: &[BigRational]) -> Self {
        Self::new(fan.rays().iter().map(|v| pair_rational(m, v)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Indices of rays with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub(crate) fn check_len<L: Lattice>(&self, fan: &Fan<L>) -> Result<()> {
        if self.len() != fan.rays().len() {
            return Err(Error::DivisorSize {
                expected: fan.rays().len(),
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl Add for &WeilDivisor {
    type Output = WeilDivisor;

    fn add(self, rhs: &WeilDivisor) -> WeilDivisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different fans");
        WeilDivisor::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &WeilDivisor {
    type Output = WeilDivisor;

    fn sub(self, rhs: &WeilDivisor) -> WeilDivisor {
        self + &-rhs
    }
}

impl Neg for &WeilDivisor {
    type Output = WeilDivisor;

    fn neg(self) -> WeilDivisor {
        WeilDivisor::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul<&WeilDivisor> for &BigRational {
    type Output = WeilDivisor;

    fn mul(self, rhs: &WeilDivisor) -> WeilDivisor {
        rhs.scale(self)
    }
}

impl fmt::Display for WeilDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.support().map(|i| format!("{}*D{}", self.coeffs[i], i)).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

pub(crate) fn pair_rational<L: Lattice>(m: &[BigRational], v: &LatticePoint<L>) -> BigRational {
    m.iter()
        .zip(v.coords())
        .map(|(a, b)| a * BigRational::from_integer(b.clone()))
        .sum()
}

/// Local linear data of a ℚ-Cartier divisor: `m_σ` with `⟨m_σ, v⟩ = −a_v` for
/// every ray `v` of every maximal cone `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCartierData {
    /// One vector per maximal cone, in the fan's maximal-cone order.
    pub m: Vec<Vec<BigRational>>,
    /// Smallest `k > 0` with `k·D` Cartier.
    pub index: BigInt,
}

/// Per-cone linear data, or `None` when the divisor is not ℚ-Cartier.
pub fn qcartier_data<L: Lattice>(fan: &Fan<L>, d: &WeilDivisor) -> Result<Option<QCartierData>> {
    d.check_len(fan)?;
    let n = fan.dim();
    let m: Option<Vec<Vec<BigRational>>> = fan
        .maximal_cones()
        .par_iter()
        .zip(fan.cone_adjugates())
        .map(|(cone, adj)| {
            let b: Vec<BigRational> = cone.rays.iter().map(|&r| -d.coeff(r)).collect();
            if let Some(Adjugate { adj, det }) = adj {
                // rows of A are the rays, so A·m = b gives m = adj·b / det
                let det = BigRational::from_integer(det.clone());
                return Some(
                    adj.iter()
                        .map(|row| {
                            let s: BigRational = row.iter().zip(&b).map(|(x, y)| y * x).sum();
                            s / &det
                        })
                        .collect(),
                );
            }
            let a: Vec<Vec<BigRational>> = cone
                .rays
                .iter()
                .map(|&r| fan.rays()[r].coords().iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect();
            linalg::solve(&a, &b, n)
        })
        .collect();
    Ok(m.map(|m| {
        let index = m
            .iter()
            .map(|v| linalg::common_denominator(v))
            .fold(linalg::common_denominator(d.coeffs()), |acc, x| acc.lcm(&x));
        QCartierData { m, index }
    }))
}

/// `(is ℚ-Cartier, Cartier index)`.
pub fn is_qcartier<L: Lattice>(fan: &Fan<L>, d: &WeilDivisor) -> Result<(bool, Option<BigInt>)> {
    Ok(match qcartier_data(fan, d)? {
        Some(data) => (true, Some(data.index)),
        None => (false, None),
    })
}

/// `dim_ℚ Pic(X_Σ) ⊗ ℚ`: ℚ-Cartier divisors modulo principal ones.
///
/// A divisor is ℚ-Cartier iff its coefficients on every non-simplicial
/// maximal cone satisfy the linear relations among that cone's rays.
pub fn picard_rank_q<L: Lattice>(fan: &Fan<L>) -> usize {
    let nrays = fan.rays().len();
    let mut constraints: Vec<Vec<BigInt>> = Vec::new();
    for cone in fan.maximal_cones().iter().filter(|c| !c.is_simplicial()) {
        let rows: Vec<Vec<BigInt>> = cone.rays.iter().map(|&r| fan.rays()[r].coords().to_vec()).collect();
        for rel in linalg::row_relations(&rows) {
            let den = linalg::common_denominator(&rel);
            let mut row = vec![BigInt::zero(); nrays];
            for (&r, c) in cone.rays.iter().zip(&rel) {
                row[r] = (c * BigRational::from_integer(den.clone())).to_integer();
            }
            constraints.push(row);
        }
    }
    let rank = if constraints.is_empty() { 0 } else { linalg::rank(&constraints) };
    nrays - rank - fan.dim()
}

/// Convexity of the support function: `⟨m_σ, v⟩ ≥ −a_v` for every maximal
/// cone `σ` and every ray `v ∉ σ`.
pub fn is_nef<L: Lattice>(fan: &Fan<L>, d: &WeilDivisor) -> Result<bool> {
    d.check_len(fan)?;
    if fan.is_simplicial() {
        return Ok(is_nef_simplicial(fan, d));
    }
    let data = qcartier_data(fan, d)?.ok_or(Error::NotQCartier)?;
    Ok(fan.maximal_cones().par_iter().enumerate().all(|(s, cone)| {
        (0..fan.rays().len())
            .filter(|&v| !cone.contains_ray(v))
            .all(|v| !(pair_rational(&data.m[s], &fan.rays()[v]) + d.coeff(v)).is_negative())
    }))
}

/// Integer form of the same test: with `a = A/D` and `m_σ = −adj·A_σ / (det·D)`,
/// the inequality becomes `sign(det)·(⟨adj·(−A_σ), v⟩ + det·A_v) ≥ 0`.
fn is_nef_simplicial<L: Lattice>(fan: &Fan<L>, d: &WeilDivisor) -> bool {
    let den = linalg::common_denominator(d.coeffs());
    let a: Vec<BigInt> = d
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let local: Vec<Vec<BigInt>> = fan
        .maximal_cones()
        .par_iter()
        .zip(fan.cone_adjugates())
        .map(|(cone, adj)| {
            let adj = adj.as_ref().expect("simplicial full-dimensional cone");
            adj.adj
                .iter()
                .map(|row| row.iter().zip(&cone.rays).map(|(x, &r)| -(x * &a[r])).sum())
                .collect()
        })
        .collect();
    let holds = |s: usize, v: usize| {
        let det = &fan.cone_adjugates()[s].as_ref().unwrap().det;
        let pairing: BigInt = local[s].iter().zip(fan.rays()[v].coords()).map(|(x, y)| x * y).sum();
        let value = pairing + det * &a[v];
        !(value * det.signum()).is_negative()
    };
    // neighbours across walls first: cheap, and catches most failures
    let across_walls = fan.walls().par_iter().all(|w| {
        w.between.iter().all(|&s| {
            w.between
                .iter()
                .flat_map(|&t| fan.maximal_cones()[t].rays.iter())
                .filter(|&&v| !fan.maximal_cones()[s].contains_ray(v))
                .all(|&v| holds(s, v))
        })
    });
    across_walls
        && fan.maximal_cones().par_iter().enumerate().all(|(s, cone)| {
            (0..fan.rays().len())
                .filter(|&v| !cone.contains_ray(v))
                .all(|v| holds(s, v))
        })
}
