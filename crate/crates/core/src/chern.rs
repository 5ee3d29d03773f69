//! Intersection theory on simplicial complete toric varieties and the second
//! Chern class of the anticanonical Calabi-Yau hypersurface.
//!
//! On a simplicial fan, `V(τ)·D_j = V(τ ∪ j)·mult(τ)/mult(τ ∪ j)` when
//! `j ∉ τ` and `τ ∪ j` is a cone, and zero when it is not a cone. A divisor
//! with a nonzero coefficient on a ray of `τ` is first moved by a principal
//! divisor `div(χ^m)` so that it vanishes on `τ`. Along any chain
//! `0 ⊂ τ₁ ⊂ … ⊂ σ` the multiplicity ratios telescope to `1/mult(σ)`.
//!
//! The hypersurface `Z ∈ |−K|` has `c(TZ) = ∏(1 + D_i) / (1 − K)` restricted
//! to `Z`, so `c₂(Z)·L = Σ_{i<j} D_i·D_j·L·(−K)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fan::{is_nef, Fan, WeilDivisor};
use crate::hodge::PointType;
use crate::lattice::{linalg, Lattice};
use crate::polytope::{Polytope, ReflexivePair};

/// Memoized intersection form of a simplicial complete fan.
pub struct IntersectionForm<'a, L: Lattice> {
    fan: &'a Fan<L>,
    /// `τ ↦ {j ∉ τ : τ ∪ j is a cone}` for every cone `τ`, including the zero cone.
    link: HashMap<Vec<usize>, Vec<usize>>,
    mult: HashMap<Vec<usize>, BigInt>,
    memo: Mutex<HashMap<Vec<usize>, BigRational>>,
}

impl<'a, L: Lattice> IntersectionForm<'a, L> {
    pub fn new(fan: &'a Fan<L>) -> Result<Self> {
        fan.require_simplicial()?;
        fan.require_complete()?;
        let mut cones: HashSet<Vec<usize>> = HashSet::new();
        cones.insert(Vec::new());
        for d in 1..=fan.dim() {
            cones.extend(fan.cones(d).iter().map(|c| c.rays.clone()));
        }
        let mut link: HashMap<Vec<usize>, BTreeSet<usize>> = HashMap::new();
        for c in &cones {
            for (k, &r) in c.iter().enumerate() {
                let mut face = c.clone();
                face.remove(k);
                link.entry(face).or_default().insert(r);
            }
        }
        let link = link.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect();
        let mult = fan
            .maximal_cones()
            .iter()
            .map(|c| (c.rays.clone(), c.mult.clone().expect("simplicial")))
            .collect();
        Ok(IntersectionForm {
            fan,
            link,
            mult,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn fan(&self) -> &Fan<L> {
        self.fan
    }

    pub fn rays(&self) -> usize {
        self.fan.rays().len()
    }

    fn link(&self, tau: &[usize]) -> &[usize] {
        self.link.get(tau).map_or(&[], Vec::as_slice)
    }

    pub fn is_cone(&self, rays: &[usize]) -> bool {
        let mut sorted = rays.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == rays.len() && (self.link.contains_key(&sorted) || self.mult.contains_key(&sorted))
    }

    /// Coefficients of `d + div(χ^m)` on the link of `τ`, where `m` makes
    /// the result vanish on the rays of `τ`.
    fn moved(&self, tau: &[usize], d: &[BigRational]) -> Vec<(usize, BigRational)> {
        let link = self.link(tau);
        if tau.iter().all(|&r| d[r].is_zero()) {
            return link
                .iter()
                .filter(|&&j| !d[j].is_zero())
                .map(|&j| (j, d[j].clone()))
                .collect();
        }
        let n = self.fan.dim();
        let rays = self.fan.rays();
        let a: Vec<Vec<BigRational>> = tau
            .iter()
            .map(|&r| rays[r].coords().iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let b: Vec<BigRational> = tau.iter().map(|&r| -&d[r]).collect();
        let m = linalg::solve(&a, &b, n).expect("rays of a simplicial cone are independent");
        link.iter()
            .filter_map(|&j| {
                let c = &d[j] + crate::fan::pair_rational(&m, &rays[j]);
                (!c.is_zero()).then_some((j, c))
            })
            .collect()
    }

    fn product(&self, tau: Vec<usize>, divisors: &[&[BigRational]]) -> BigRational {
        let Some((first, rest)) = divisors.split_first() else {
            return match self.mult.get(&tau) {
                Some(m) => BigRational::new(BigInt::one(), m.clone()),
                None => BigRational::zero(),
            };
        };
        let mut total = BigRational::zero();
        for (j, c) in self.moved(&tau, first) {
            let mut next = tau.clone();
            let pos = next.binary_search(&j).unwrap_err();
            next.insert(pos, j);
            total += c * self.product(next, rest);
        }
        total
    }

    /// `D_{i₁}·…·D_{iₙ}` for a multiset of rays.
    pub fn monomial(&self, rays: &[usize]) -> BigRational {
        assert_eq!(rays.len(), self.fan.dim(), "need one ray per dimension");
        let mut key = rays.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut distinct = key.clone();
        distinct.dedup();
        let value = if !self.is_cone(&distinct) {
            BigRational::zero()
        } else {
            let mut repeated = key.clone();
            for r in &distinct {
                let pos = repeated.iter().position(|x| x == r).unwrap();
                repeated.remove(pos);
            }
            let units: Vec<Vec<BigRational>> = repeated
                .iter()
                .map(|&r| WeilDivisor::ray(self.rays(), r).coeffs().to_vec())
                .collect();
            let refs: Vec<&[BigRational]> = units.iter().map(Vec::as_slice).collect();
            self.product(distinct, &refs)
        };
        self.memo.lock().unwrap().insert(key, value.clone());
        value
    }

    /// `d₁·…·dₙ` for arbitrary ℚ-divisors.
    pub fn intersection_number(&self, divisors: &[WeilDivisor]) -> Result<BigRational> {
        if divisors.len() != self.fan.dim() {
            return Err(Error::WrongDimension {
                expected: self.fan.dim(),
                found: divisors.len(),
            });
        }
        for d in divisors {
            d.check_len(self.fan)?;
        }
        let refs: Vec<&[BigRational]> = divisors.iter().map(WeilDivisor::coeffs).collect();
        Ok(self.product(Vec::new(), &refs))
    }

    /// The same number expanded over ray monomials, using the memo table.
    pub fn intersection_number_by_monomials(&self, divisors: &[WeilDivisor]) -> Result<BigRational> {
        if divisors.len() != self.fan.dim() {
            return Err(Error::WrongDimension {
                expected: self.fan.dim(),
                found: divisors.len(),
            });
        }
        let mut total = BigRational::zero();
        let mut stack: Vec<(Vec<usize>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        while let Some((chosen, coeff)) = stack.pop() {
            let k = chosen.len();
            if k == divisors.len() {
                total += coeff * self.monomial(&chosen);
                continue;
            }
            for r in divisors[k].support() {
                let mut next = chosen.clone();
                next.push(r);
                let mut distinct = next.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if self.is_cone(&distinct) {
                    stack.push((next, &coeff * divisors[k].coeff(r)));
                }
            }
        }
        Ok(total)
    }

    /// `C_k = c₂(X)·D_k·(−K) = Σ_{i<j} D_i·D_j·D_k·(−K)` for every ray `k`.
    /// Requires a 4-dimensional fan.
    pub fn c2_functional(&self) -> Result<Vec<BigRational>> {
        if self.fan.dim() != 4 {
            return Err(Error::WrongDimension {
                expected: 4,
                found: self.fan.dim(),
            });
        }
        let nrays = self.rays();
        let partial: Vec<Vec<BigRational>> = self
            .fan
            .cones(2)
            .par_iter()
            .map(|edge| {
                let mut out = vec![BigRational::zero(); nrays];
                let (i, j) = (edge.rays[0], edge.rays[1]);
                let ks: Vec<usize> = edge.rays.iter().chain(self.link(&edge.rays)).copied().collect();
                for k in ks {
                    let mut tau = vec![i, j, k];
                    tau.sort_unstable();
                    tau.dedup();
                    let ls: Vec<usize> = tau.iter().chain(self.link(&tau)).copied().collect();
                    for l in ls {
                        out[k] += self.monomial(&[i, j, k, l]);
                    }
                }
                out
            })
            .collect();
        let mut c = vec![BigRational::zero(); nrays];
        for p in partial {
            for (a, b) in c.iter_mut().zip(p) {
                *a += b;
            }
        }
        Ok(c)
    }

    /// `D_k·(−K)^{n−1}` for every ray `k`.
    pub fn anticanonical_degrees(&self) -> Vec<BigRational> {
        let k = WeilDivisor::anticanonical(self.rays());
        let tail: Vec<&[BigRational]> = vec![k.coeffs(); self.fan.dim() - 1];
        (0..self.rays())
            .into_par_iter()
            .map(|r| self.product(vec![r], &tail))
            .collect()
    }
}

fn dot(a: &[BigRational], d: &WeilDivisor) -> BigRational {
    a.iter().zip(d.coeffs()).map(|(x, y)| x * y).sum()
}

/// `c₂(Z)·L` for the anticanonical hypersurface `Z` in the toric variety of
/// `fan` (the MPCP fan of a reflexive 4-polytope).
pub fn c2_dot<L: Lattice>(form: &IntersectionForm<L>, l: &WeilDivisor) -> Result<BigRational> {
    l.check_len(form.fan())?;
    Ok(dot(&form.c2_functional()?, l))
}

/// `L·(−K)³`, the degree of `L` restricted to the hypersurface.
pub fn restricted_degree<L: Lattice>(form: &IntersectionForm<L>, l: &WeilDivisor) -> Result<BigRational> {
    l.check_len(form.fan())?;
    Ok(dot(&form.anticanonical_degrees(), l))
}

/// What the toric surface `V(⟨v_i, v_j⟩)` cuts out on a general hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveClass {
    Empty,
    /// Disjoint toric rational curves, one per component of the edge's F-divisor.
    RationalCurves { components: usize },
    /// An exceptional curve over the singular curve of the unresolved hypersurface.
    ExceptionalBranch,
    SmoothCurve,
}

impl CurveClass {
    pub fn name(self) -> &'static str {
        match self {
            CurveClass::Empty => "empty",
            CurveClass::RationalCurves { .. } => "rational-curves",
            CurveClass::ExceptionalBranch => "exceptional-branch",
            CurveClass::SmoothCurve => "smooth-curve",
        }
    }

    pub fn is_empty(self) -> bool {
        self == CurveClass::Empty
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEntry {
    /// Ray indices of the 2-cone, sorted.
    pub edge: [usize; 2],
    pub endpoint_types: [PointType; 2],
    /// Dimension of the smallest face of `Δ*` containing the edge.
    pub face_dim: usize,
    pub class: CurveClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCensus {
    pub entries: Vec<CurveEntry>,
    /// Rays lying on at least one edge with a nonempty class.
    pub covered: Vec<usize>,
    /// Rays that are E- or F-divisors but lie on no nonempty edge.
    pub uncovered_basis: Vec<usize>,
}

/// Classifies every 2-cone of the MPCP fan.
pub fn curve_census<L: Lattice>(pair: &ReflexivePair<L>, fan: &Fan<L::Dual>) -> Result<CurveCensus> {
    let dstar = pair.dual();
    let delta = pair.primal();
    let faces: Vec<usize> = fan
        .rays()
        .iter()
        .map(|r| dstar.carrier(r).ok_or_else(|| Error::UnknownRay(r.to_string())))
        .collect::<Result<_>>()?;
    let types: Vec<PointType> = faces
        .iter()
        .map(|&f| PointType::from_face_dim(dstar.face(f).dim))
        .collect();

    let entries: Vec<CurveEntry> = fan
        .cones(2)
        .iter()
        .map(|edge| {
            let (i, j) = (edge.rays[0], edge.rays[1]);
            let face = smallest_common_face(dstar, &fan.rays()[i], &fan.rays()[j]);
            let face_dim = dstar.face(face).dim;
            let endpoint_types = [types[i], types[j]];
            let class = if endpoint_types.contains(&PointType::Interior3Face) || face_dim >= 3 {
                CurveClass::Empty
            } else if face_dim == 2 {
                CurveClass::RationalCurves {
                    components: delta.lattice_points().l_star(pair.primal_face(face)) + 1,
                }
            } else if endpoint_types == [PointType::Vertex; 2] {
                CurveClass::SmoothCurve
            } else {
                CurveClass::ExceptionalBranch
            };
            CurveEntry {
                edge: [i, j],
                endpoint_types,
                face_dim,
                class,
            }
        })
        .collect();

    let covered: BTreeSet<usize> = entries
        .iter()
        .filter(|e| !e.class.is_empty())
        .flat_map(|e| e.edge)
        .collect();
    let uncovered_basis = (0..fan.rays().len())
        .filter(|r| types[*r] != PointType::Interior3Face && !covered.contains(r))
        .collect();
    Ok(CurveCensus {
        entries,
        covered: covered.into_iter().collect(),
        uncovered_basis,
    })
}

fn smallest_common_face<L: Lattice>(
    p: &Polytope<L>,
    a: &crate::lattice::LatticePoint<L>,
    b: &crate::lattice::LatticePoint<L>,
) -> usize {
    let ta = p.tight_facets(a);
    let tb = p.tight_facets(b);
    let common: Vec<usize> = ta.into_iter().filter(|f| tb.contains(f)).collect();
    p.faces()
        .meet_of_facets(&common)
        .expect("edge of a boundary triangulation lies in a facet")
}

/// A nef class with its positivity data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityCheck {
    pub label: String,
    pub divisor: WeilDivisor,
    pub degree: BigRational,
    pub c2: BigRational,
}

impl PositivityCheck {
    /// Positive restricted degree forces positive `c₂·L`.
    pub fn holds(&self) -> bool {
        !self.degree.is_positive() || self.c2.is_positive()
    }
}

#[derive(Clone, Debug)]
pub struct ChernReport {
    /// `c₂(Z)·D_k` per ray.
    pub c2_values: Vec<BigRational>,
    pub c2_anticanonical: BigRational,
    pub curves: CurveCensus,
    pub positivity: Vec<PositivityCheck>,
}

impl ChernReport {
    /// Computes the report; `tests` are candidate classes, of which the nef
    /// ones are checked for positivity.
    pub fn compute<L: Lattice>(
        pair: &ReflexivePair<L>,
        fan: &Fan<L::Dual>,
        tests: &[(String, WeilDivisor)],
    ) -> Result<Self> {
        let form = IntersectionForm::new(fan)?;
        let c2_values = form.c2_functional()?;
        let degrees = form.anticanonical_degrees();
        let k = WeilDivisor::anticanonical(fan.rays().len());
        let mut positivity = Vec::new();
        for (label, d) in std::iter::once(("-K".to_string(), k.clone())).chain(tests.iter().cloned()) {
            d.check_len(fan)?;
            if d.is_zero() || !matches!(is_nef(fan, &d), Ok(true)) {
                continue;
            }
            positivity.push(PositivityCheck {
                label,
                degree: dot(&degrees, &d),
                c2: dot(&c2_values, &d),
                divisor: d,
            });
        }
        Ok(ChernReport {
            c2_anticanonical: dot(&c2_values, &k),
            c2_values,
            curves: curve_census(pair, fan)?,
            positivity,
        })
    }
}

/// Standard nef test classes: `−K`, each `D_k`, each `−K + D_k` and each
/// `2(−K) − D_k`; callers filter by [`is_nef`].
pub fn candidate_classes(rays: usize) -> Vec<(String, WeilDivisor)> {
    let k = WeilDivisor::anticanonical(rays);
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();
    for r in 0..rays {
        let d = WeilDivisor::ray(rays, r);
        out.push((format!("D{r}"), d.clone()));
        out.push((format!("-K+D{r}"), &k + &d));
        out.push((format!("-2K-D{r}"), &k.scale(&two) - &d));
    }
    out
}
