//! Complete fans in `N_ℝ` built from reflexive polytopes: the face fan of
//! `Δ*` and its MPCP refinements, with multiplicity audits.

mod divisor;
mod triangulate;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

pub use divisor::{is_nef, is_qcartier, picard_rank_q, qcartier_data, QCartierData, WeilDivisor};
pub(crate) use divisor::pair_rational;
pub use triangulate::{mpcp_triangulate, PlacingOrder};

use crate::error::{Error, Result};
use crate::lattice::{linalg, Lattice, LatticePoint};
use crate::polytope::ReflexivePair;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanKind {
    /// Cones over the proper faces of a polytope.
    FaceFan,
    /// A simplicial subdivision of a face fan.
    Refinement,
}

/// A cone given by indices into its fan's ray list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    /// Sorted ray indices.
    pub rays: Vec<usize>,
    pub dim: usize,
    /// `|det|` of the generators; set for full-dimensional simplicial cones.
    pub mult: Option<BigInt>,
}

impl Cone {
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }
}

/// `A⁻¹ = adj / det` for an integer matrix `A`.
#[derive(Clone, Debug)]
pub(crate) struct Adjugate {
    pub adj: Vec<Vec<BigInt>>,
    pub det: BigInt,
}

/// A codimension-one cone together with the maximal cones containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cone: usize,
    pub between: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Fan<L: Lattice> {
    dim: usize,
    rays: Vec<LatticePoint<L>>,
    maximal: Vec<Cone>,
    /// All nonzero cones, grouped by dimension (`cones[d − 1]` holds dim `d`).
    cones: Vec<Vec<Cone>>,
    walls: Vec<Wall>,
    kind: FanKind,
    /// Adjugate and determinant of the ray matrix of each simplicial maximal
    /// cone, built on first use.
    adjugates: OnceLock<Vec<Option<Adjugate>>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn make_cone<L: Lattice>(rays: &[LatticePoint<L>], mut idx: Vec<usize>, ambient: usize) -> Cone {
    idx.sort_unstable();
    let rows: Vec<Vec<BigInt>> = idx.iter().map(|&i| rays[i].coords().to_vec()).collect();
    let dim = linalg::rank(&rows);
    let mult = (dim == ambient && idx.len() == ambient).then(|| linalg::abs_det(&rows));
    Cone { rays: idx, dim, mult }
}

impl<L: Lattice> Fan<L> {
    /// Assembles a fan from rays, maximal cones and the complete list of
    /// nonzero cones.
    pub(crate) fn from_cones(
        dim: usize,
        rays: Vec<LatticePoint<L>>,
        maximal: Vec<Vec<usize>>,
        all: Vec<Vec<usize>>,
        kind: FanKind,
    ) -> Self {
        let mut maximal: Vec<Cone> = maximal.into_iter().map(|c| make_cone(&rays, c, dim)).collect();
        maximal.sort();
        let mut cones = vec![Vec::new(); dim];
        for c in all {
            let cone = make_cone(&rays, c, dim);
            if cone.dim > 0 {
                cones[cone.dim - 1].push(cone);
            }
        }
        for level in &mut cones {
            level.sort();
            level.dedup();
        }
        let walls = if dim < 2 {
            Vec::new()
        } else {
            cones[dim - 2]
                .iter()
                .enumerate()
                .map(|(i, w)| Wall {
                    cone: i,
                    between: maximal
                        .iter()
                        .enumerate()
                        .filter(|(_, m)| is_subset(&w.rays, &m.rays))
                        .map(|(j, _)| j)
                        .collect(),
                })
                .collect()
        };
        Fan {
            dim,
            rays,
            maximal,
            cones,
            walls,
            kind,
            adjugates: OnceLock::new(),
        }
    }

    /// Simplicial fan from rays and maximal simplices; faces are all subsets.
    pub(crate) fn simplicial(dim: usize, rays: Vec<LatticePoint<L>>, maximal: Vec<Vec<usize>>, kind: FanKind) -> Self {
        let mut all = BTreeSet::new();
        for m in &maximal {
            for mask in 1u32..(1 << m.len()) {
                let sub: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &r)| r)
                    .collect();
                all.insert(sub);
            }
        }
        Self::from_cones(dim, rays, maximal, all.into_iter().collect(), kind)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive ray generators, sorted lexicographically.
    pub fn rays(&self) -> &[LatticePoint<L>] {
        &self.rays
    }

    pub fn ray_index(&self, ray: &LatticePoint<L>) -> Option<usize> {
        self.rays.binary_search(ray).ok()
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// All cones of dimension `d` (`1 ≤ d ≤ n`).
    pub fn cones(&self, d: usize) -> &[Cone] {
        d.checked_sub(1)
            .and_then(|i| self.cones.get(i))
            .map_or(&[], Vec::as_slice)
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn kind(&self) -> FanKind {
        self.kind
    }

    pub fn cone_rays(&self, cone: &Cone) -> Vec<&LatticePoint<L>> {
        cone.rays.iter().map(|&i| &self.rays[i]).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal.iter().all(Cone::is_simplicial)
    }

    /// Every wall lies in exactly two maximal cones.
    pub fn walls_are_consistent(&self) -> bool {
        self.walls.iter().all(|w| w.between.len() == 2)
    }

    /// Σ mult over maximal cones; `None` unless simplicial.
    pub fn total_multiplicity(&self) -> Option<BigInt> {
        self.maximal
            .iter()
            .map(|c| c.mult.clone())
            .sum::<Option<BigInt>>()
    }

    /// For each maximal cone, `(adj A, det A)` where the rows of `A` are its
    /// rays, if the cone is simplicial and full-dimensional.
    pub(crate) fn cone_adjugates(&self) -> &[Option<Adjugate>] {
        self.adjugates.get_or_init(|| {
            self.maximal
                .par_iter()
                .map(|c| {
                    c.mult.as_ref()?;
                    let rows: Vec<Vec<BigInt>> = c.rays.iter().map(|&r| self.rays[r].coords().to_vec()).collect();
                    let det = linalg::det(&rows);
                    let inv = linalg::inverse(&linalg::to_rational(&rows))?;
                    let det_q = BigRational::from_integer(det.clone());
                    let adj = inv
                        .into_iter()
                        .map(|row| row.into_iter().map(|x| (x * &det_q).to_integer()).collect())
                        .collect();
                    Some(Adjugate { adj, det })
                })
                .collect()
        })
    }

    pub(crate) fn require_simplicial(&self) -> Result<()> {
        match self.maximal.iter().find(|c| !c.is_simplicial()) {
            Some(c) => Err(Error::NotSimplicial(format!("{:?}", c.rays))),
            None => Ok(()),
        }
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        match self.walls.iter().find(|w| w.between.len() != 2) {
            Some(w) => Err(Error::IncompleteFan(format!(
                "wall {:?} lies in {} maximal cones",
                self.cones(self.dim - 1)[w.cone].rays,
                w.between.len()
            ))),
            None => Ok(()),
        }
    }
}

/// The fan over the proper faces of `Δ*`.
pub fn face_fan<L: Lattice>(pair: &ReflexivePair<L>) -> Fan<L::Dual> {
    let dstar = pair.dual();
    let rays = dstar.vertices().to_vec();
    let maximal = dstar
        .faces()
        .by_dim(dstar.dim() - 1)
        .iter()
        .map(|&f| dstar.face(f).vertices.clone())
        .collect();
    let all = dstar.faces().iter().map(|(_, f)| f.vertices.clone()).collect();
    Fan::from_cones(dstar.dim(), rays, maximal, all, FanKind::FaceFan)
}

/// `|det|` of the generators of a full-dimensional simplicial cone.
pub fn cone_mult<L: Lattice>(rays: &[LatticePoint<L>]) -> Result<BigInt> {
    let n = rays.first().map_or(0, LatticePoint::dim);
    let rows: Vec<Vec<BigInt>> = rays.iter().map(|r| r.coords().to_vec()).collect();
    if rays.len() != n || linalg::rank(&rows) != n {
        return Err(Error::NotSimplicial(format!("{} generators in dimension {n}", rays.len())));
    }
    Ok(linalg::abs_det(&rows))
}

/// A singular maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub cone: usize,
    pub mult: BigInt,
}

/// Maximal cones with multiplicity above one.
pub fn singularity_census<L: Lattice>(fan: &Fan<L>) -> Result<Vec<Singularity>> {
    fan.require_simplicial()?;
    Ok(fan
        .maximal
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let mult = c.mult.clone().expect("simplicial full-dimensional cone");
            (!mult.is_one()).then_some(Singularity { cone: i, mult })
        })
        .collect())
}

/// Histogram of multiplicities of maximal cones.
pub fn multiplicity_histogram<L: Lattice>(fan: &Fan<L>) -> Result<BTreeMap<BigInt, usize>> {
    fan.require_simplicial()?;
    let mut out = BTreeMap::new();
    for c in &fan.maximal {
        *out.entry(c.mult.clone().unwrap()).or_default() += 1;
    }
    Ok(out)
}
