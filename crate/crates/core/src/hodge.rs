//! Hodge numbers of Calabi-Yau hypersurfaces in toric varieties built from
//! reflexive 4-polytopes, and the toric divisors that generate `H^{1,1}`.
//!
//! For a reflexive pair `(Δ, Δ*)`:
//!
//! ```text
//! h¹¹(Z_Δ) = l(Δ*) − 5 − Σ_{dim Θ* = 3} l*(Θ*) + Σ_{dim Θ* = 2} l*(Θ*)·l*(Θ)
//! ```
//!
//! where `Θ` is the edge of `Δ` dual to the 2-face `Θ*`. `h¹²` is `h¹¹` of the
//! mirror pair and `χ = 2(h¹¹ − h¹²)`.

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticePoint};
use crate::polytope::{FaceId, Polytope, ReflexivePair};

/// Position of a boundary lattice point of `Δ*`, by the dimension of the face
/// whose relative interior contains it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointType {
    Interior3Face,
    Interior2Face,
    Interior1Face,
    Vertex,
}

impl PointType {
    pub fn from_face_dim(dim: usize) -> Self {
        match dim {
            0 => PointType::Vertex,
            1 => PointType::Interior1Face,
            2 => PointType::Interior2Face,
            _ => PointType::Interior3Face,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointType::Interior3Face => "interior-3-face",
            PointType::Interior2Face => "interior-2-face",
            PointType::Interior1Face => "interior-1-face",
            PointType::Vertex => "vertex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifiedPoint<L: Lattice> {
    pub point: LatticePoint<L>,
    pub kind: PointType,
    pub face: FaceId,
}

fn require_dim4<L: Lattice>(p: &Polytope<L>) -> Result<()> {
    if p.dim() != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            found: p.dim(),
        });
    }
    Ok(())
}

/// Every boundary lattice point of a reflexive 4-polytope with its type, in
/// lexicographic point order.
pub fn classify_boundary<L: Lattice>(dstar: &Polytope<L>) -> Result<Vec<ClassifiedPoint<L>>> {
    require_dim4(dstar)?;
    if !dstar.is_reflexive()? {
        return Err(Error::NotReflexive);
    }
    Ok(dstar
        .lattice_points()
        .boundary_points()
        .map(|(_, p, face)| ClassifiedPoint {
            point: p.clone(),
            kind: PointType::from_face_dim(dstar.face(face).dim),
            face,
        })
        .collect())
}

/// Counts per [`PointType`], in the order 3-face, 2-face, 1-face, vertex.
pub fn type_counts<L: Lattice>(points: &[ClassifiedPoint<L>]) -> [usize; 4] {
    let mut out = [0; 4];
    for p in points {
        out[p.kind as usize] += 1;
    }
    out
}

/// The individual terms of the `h¹¹` formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct H11Terms {
    /// `l(Δ*)`.
    pub points: usize,
    /// `Σ_{dim Θ* = 3} l*(Θ*)`.
    pub facet_interior: usize,
    /// `Σ_{dim Θ* = 2} l*(Θ*)·l*(Θ)`.
    pub two_face_correction: usize,
}

impl H11Terms {
    pub fn value(&self) -> i64 {
        self.points as i64 - 5 - self.facet_interior as i64 + self.two_face_correction as i64
    }
}

pub fn h11_terms<L: Lattice>(pair: &ReflexivePair<L>) -> Result<H11Terms> {
    require_dim4(pair.primal())?;
    let dstar = pair.dual();
    let delta = pair.primal();
    let census = dstar.lattice_points();
    let facet_interior = dstar
        .faces()
        .by_dim(3)
        .iter()
        .map(|&f| census.l_star(f))
        .sum();
    let two_face_correction = dstar
        .faces()
        .by_dim(2)
        .iter()
        .map(|&f| census.l_star(f) * delta.lattice_points().l_star(pair.primal_face(f)))
        .sum();
    Ok(H11Terms {
        points: census.total(),
        facet_interior,
        two_face_correction,
    })
}

pub fn h11<L: Lattice>(pair: &ReflexivePair<L>) -> Result<i64> {
    Ok(h11_terms(pair)?.value())
}

pub fn h12<L: Lattice>(pair: &ReflexivePair<L>) -> Result<i64> {
    h11(&pair.mirror())
}

pub fn euler<L: Lattice>(pair: &ReflexivePair<L>) -> Result<i64> {
    Ok(2 * (h11(pair)? - h12(pair)?))
}

/// A lattice point interior to a 2-face of `Δ*`; its divisor on the
/// hypersurface splits into `components = l*(Θ) + 1` pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDivisor<L: Lattice> {
    pub point: LatticePoint<L>,
    pub face: FaceId,
    pub components: usize,
}

/// Toric divisors of the resolved ambient space, sorted by how they meet the
/// hypersurface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorCensus<L: Lattice> {
    /// Vertices and points interior to edges of `Δ*`: one irreducible divisor each.
    pub e_divisors: Vec<LatticePoint<L>>,
    pub f_divisors: Vec<FDivisor<L>>,
    /// Points interior to facets: their divisors miss the hypersurface.
    pub skipped: Vec<LatticePoint<L>>,
    /// Number of independent linear relations among the divisors.
    pub relation_dim: usize,
}

impl<L: Lattice> DivisorCensus<L> {
    /// `a`.
    pub fn a(&self) -> usize {
        self.e_divisors.len()
    }

    /// `a + Σ d(Θ)`.
    pub fn components(&self) -> usize {
        self.a() + self.f_divisors.iter().map(|f| f.components).sum::<usize>()
    }

    /// `a + Σ d(Θ) − 4`, which equals `h¹¹`.
    pub fn h11(&self) -> i64 {
        self.components() as i64 - self.relation_dim as i64
    }
}

pub fn divisor_census<L: Lattice>(pair: &ReflexivePair<L>) -> Result<DivisorCensus<L::Dual>> {
    let points = classify_boundary(pair.dual())?;
    let delta = pair.primal().lattice_points();
    let mut census = DivisorCensus {
        e_divisors: Vec::new(),
        f_divisors: Vec::new(),
        skipped: Vec::new(),
        relation_dim: 4,
    };
    for p in points {
        match p.kind {
            PointType::Vertex | PointType::Interior1Face => census.e_divisors.push(p.point),
            PointType::Interior2Face => census.f_divisors.push(FDivisor {
                components: delta.l_star(pair.primal_face(p.face)) + 1,
                point: p.point,
                face: p.face,
            }),
            PointType::Interior3Face => census.skipped.push(p.point),
        }
    }
    Ok(census)
}

/// Everything the `cy` commands report about one reflexive pair.
#[derive(Clone, Debug)]
pub struct HodgeReport<L: Lattice> {
    pub h11: i64,
    pub h12: i64,
    pub euler: i64,
    pub terms: H11Terms,
    pub mirror_terms: H11Terms,
    pub census: DivisorCensus<L::Dual>,
    pub type_counts: [usize; 4],
}

impl<L: Lattice> HodgeReport<L> {
    pub fn compute(pair: &ReflexivePair<L>) -> Result<Self> {
        let terms = h11_terms(pair)?;
        let mirror_terms = h11_terms(&pair.mirror())?;
        let (h11, h12) = (terms.value(), mirror_terms.value());
        let points = classify_boundary(pair.dual())?;
        Ok(HodgeReport {
            h11,
            h12,
            euler: 2 * (h11 - h12),
            terms,
            mirror_terms,
            census: divisor_census(pair)?,
            type_counts: type_counts(&points),
        })
    }
}
