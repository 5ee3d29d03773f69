//! Lattice polytopes: hulls, face lattices, lattice-point censuses, polar
//! duality and reflexive pairs.
//!
//! Facets are stored as primitive hyperplanes `{⟨x, n_F⟩ = c_F}` with the
//! polytope on the side `⟨x, n_F⟩ ≥ c_F`. When the origin is interior every
//! `c_F` is negative, the facet's integral distance from the origin is
//! `−c_F`, and the dual vertex attached to the facet is `n_F / (−c_F)`.

mod faces;
mod hull;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

pub use faces::{Face, FaceId, FaceLattice};
pub use hull::hull;

use crate::error::{Error, Result};
use crate::lattice::{pairing, primitive, Hyperplane, Lattice, LatticePoint, RationalPoint};

/// A full-dimensional lattice polytope with both V- and H-representation.
#[derive(Clone, Debug)]
pub struct Polytope<L: Lattice> {
    dim: usize,
    vertices: Vec<LatticePoint<L>>,
    facets: Vec<Hyperplane<L>>,
    faces: FaceLattice,
    census: OnceLock<PointCensus<L>>,
}

/// Lattice-point counts of one face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceData {
    pub dim: usize,
    /// Number of lattice points of the closed face.
    pub l: usize,
    /// Number of lattice points in the relative interior.
    pub l_star: usize,
    /// Length `l* + 1`, set for edges only.
    pub d: Option<usize>,
}

/// Every lattice point of a polytope, each tagged with the face whose
/// relative interior contains it (`None` for the interior of the polytope).
#[derive(Clone, Debug)]
pub struct PointCensus<L: Lattice> {
    points: Vec<LatticePoint<L>>,
    owners: Vec<Option<FaceId>>,
    l: Vec<usize>,
    l_star: Vec<usize>,
    interior: usize,
}

impl<L: Lattice> PointCensus<L> {
    /// `l(P)`.
    pub fn total(&self) -> usize {
        self.points.len()
    }

    /// `l*(P)`.
    pub fn interior(&self) -> usize {
        self.interior
    }

    pub fn boundary(&self) -> usize {
        self.points.len() - self.interior
    }

    /// All lattice points, sorted lexicographically.
    pub fn points(&self) -> &[LatticePoint<L>] {
        &self.points
    }

    pub fn owner(&self, index: usize) -> Option<FaceId> {
        self.owners[index]
    }

    /// `(point, owning face)` for every boundary point, in point order.
    pub fn boundary_points(&self) -> impl Iterator<Item = (usize, &LatticePoint<L>, FaceId)> {
        self.points
            .iter()
            .zip(&self.owners)
            .enumerate()
            .filter_map(|(i, (p, o))| o.map(|f| (i, p, f)))
    }

    pub fn index_of(&self, p: &LatticePoint<L>) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub fn l(&self, face: FaceId) -> usize {
        self.l[face]
    }

    pub fn l_star(&self, face: FaceId) -> usize {
        self.l_star[face]
    }
}

impl<L: Lattice> Polytope<L> {
    /// Convex hull of lattice points; see [`hull`].
    pub fn from_points(points: &[LatticePoint<L>]) -> Result<Self> {
        hull(points)
    }

    pub(crate) fn from_parts(dim: usize, mut vertices: Vec<LatticePoint<L>>, mut facets: Vec<Hyperplane<L>>) -> Self {
        vertices.sort();
        facets.sort();
        let coords: Vec<&[BigInt]> = vertices.iter().map(|v| v.coords()).collect();
        let facet_vertices: Vec<Vec<usize>> = facets
            .iter()
            .map(|h| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| h.contains(v).expect("dimensions agree"))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let faces = FaceLattice::build(dim, &coords, &facet_vertices);
        Polytope {
            dim,
            vertices,
            facets,
            faces,
            census: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[LatticePoint<L>] {
        &self.vertices
    }

    /// Facet hyperplanes; the polytope is `{x : ⟨x, n_F⟩ ≥ c_F for all F}`.
    pub fn facets(&self) -> &[Hyperplane<L>] {
        &self.facets
    }

    pub fn faces(&self) -> &FaceLattice {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        self.faces.face(id)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.f_vector()
    }

    pub fn face_vertices(&self, id: FaceId) -> Vec<&LatticePoint<L>> {
        self.face(id).vertices.iter().map(|&v| &self.vertices[v]).collect()
    }

    pub fn contains(&self, p: &LatticePoint<L>) -> Result<bool> {
        for h in &self.facets {
            if h.evaluate(p)?.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices of the facets whose hyperplane contains `p`.
    pub fn tight_facets(&self, p: &LatticePoint<L>) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains(p).unwrap_or(false))
            .map(|(i, _)| i)
            .collect()
    }

    /// The face whose relative interior contains `p` (`None` if `p` is
    /// interior or outside).
    pub fn carrier(&self, p: &LatticePoint<L>) -> Option<FaceId> {
        if !self.contains(p).ok()? {
            return None;
        }
        self.faces.meet_of_facets(&self.tight_facets(p))
    }

    /// Strict interiority of the origin.
    pub fn has_interior_origin(&self) -> bool {
        self.facets.iter().all(|h| h.offset().is_negative())
    }

    /// Lattice-point census: bounding box filtered by the facet inequalities.
    pub fn lattice_points(&self) -> &PointCensus<L> {
        self.census.get_or_init(|| self.compute_census())
    }

    fn compute_census(&self) -> PointCensus<L> {
        let lo: Vec<BigInt> = (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| &v.coords()[j]).min().unwrap().clone())
            .collect();
        let hi: Vec<BigInt> = (0..self.dim)
            .map(|j| self.vertices.iter().map(|v| &v.coords()[j]).max().unwrap().clone())
            .collect();

        let mut points = Vec::new();
        let mut current = lo.clone();
        'outer: loop {
            let p = LatticePoint::<L>::new(current.clone());
            if self.contains(&p).expect("dimensions agree") {
                points.push(p);
            }
            // odometer over the box, last coordinate fastest
            for j in (0..self.dim).rev() {
                if current[j] < hi[j] {
                    current[j] += 1;
                    continue 'outer;
                }
                current[j] = lo[j].clone();
            }
            break;
        }
        points.sort();

        let owners: Vec<Option<FaceId>> = points
            .iter()
            .map(|p| self.faces.meet_of_facets(&self.tight_facets(p)))
            .collect();
        let nfaces = self.faces.len();
        let mut l = vec![0; nfaces];
        let mut l_star = vec![0; nfaces];
        let mut interior = 0;
        for owner in &owners {
            match owner {
                None => interior += 1,
                Some(o) => {
                    l_star[*o] += 1;
                    let ov = &self.face(*o).vertices;
                    for (id, face) in self.faces.iter() {
                        if faces::is_subset(ov, &face.vertices) {
                            l[id] += 1;
                        }
                    }
                }
            }
        }
        PointCensus {
            points,
            owners,
            l,
            l_star,
            interior,
        }
    }

    pub fn face_data(&self, id: FaceId) -> FaceData {
        let census = self.lattice_points();
        let dim = self.face(id).dim;
        let l_star = census.l_star(id);
        FaceData {
            dim,
            l: census.l(id),
            l_star,
            d: (dim == 1).then_some(l_star + 1),
        }
    }

    /// The polar dual `{y : ⟨x, y⟩ ≥ −1 for all x ∈ P}`.
    pub fn dual(&self) -> Result<DualPolytope<L::Dual>> {
        if !self.has_interior_origin() {
            return Err(Error::OriginNotInterior);
        }
        let vertices = self
            .facets
            .iter()
            .map(|h| {
                let c = BigRational::from_integer(-h.offset());
                RationalPoint::new(
                    h.normal()
                        .coords()
                        .iter()
                        .map(|x| BigRational::from_integer(x.clone()) / &c)
                        .collect(),
                )
            })
            .collect();
        Ok(DualPolytope {
            dim: self.dim,
            vertices,
            facet_normals: self.vertices.clone(),
        })
    }

    /// Whether every facet lies at integral distance one from the origin.
    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.has_interior_origin() {
            return Err(Error::OriginNotInterior);
        }
        let by_distance = self.facets.iter().all(|h| {
            h.integral_distance(&LatticePoint::zero(self.dim))
                .expect("dimensions agree")
                .is_one()
        });
        let by_dual = self.dual()?.is_integral();
        debug_assert_eq!(by_distance, by_dual);
        Ok(by_distance)
    }

    /// The dual as a lattice polytope in the dual lattice; fails unless the
    /// dual vertices are integral.
    pub fn lattice_dual(&self) -> Result<Polytope<L::Dual>> {
        self.dual()?.to_polytope()
    }
}

/// The polar dual of a polytope with the origin in its interior. Vertices may
/// be rational; vertex `i` is dual to facet `i` of the original polytope.
#[derive(Clone, Debug)]
pub struct DualPolytope<L: Lattice> {
    dim: usize,
    vertices: Vec<RationalPoint<L>>,
    facet_normals: Vec<LatticePoint<L::Dual>>,
}

impl<L: Lattice> DualPolytope<L> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in the facet order of the original polytope.
    pub fn vertices(&self) -> &[RationalPoint<L>] {
        &self.vertices
    }

    /// Facet normals: the dual polytope is `{y : ⟨x, y⟩ ≥ −1}` over these `x`.
    pub fn facet_normals(&self) -> &[LatticePoint<L::Dual>] {
        &self.facet_normals
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(RationalPoint::is_integral)
    }

    pub fn to_polytope(&self) -> Result<Polytope<L>> {
        let vertices: Vec<LatticePoint<L>> = self
            .vertices
            .iter()
            .map(|v| v.to_lattice().ok_or(Error::NotReflexive))
            .collect::<Result<_>>()?;
        let facets = self
            .facet_normals
            .iter()
            .map(|x| {
                let normal = primitive(x)?;
                let offset = vertices
                    .iter()
                    .map(|y| pairing(y, &normal))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .min()
                    .expect("nonempty vertex list");
                Hyperplane::new(normal, offset)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Polytope::from_parts(self.dim, vertices, facets))
    }
}

/// A reflexive polytope together with its (lattice) dual and the
/// inclusion-reversing bijection between their faces.
#[derive(Clone, Debug)]
pub struct ReflexivePair<L: Lattice> {
    primal: Polytope<L>,
    dual: Polytope<L::Dual>,
}

impl<L: Lattice> ReflexivePair<L> {
    pub fn new(primal: Polytope<L>) -> Result<Self> {
        if !primal.is_reflexive()? {
            return Err(Error::NotReflexive);
        }
        let dual = primal.lattice_dual()?;
        Ok(ReflexivePair { primal, dual })
    }

    pub fn from_points(points: &[LatticePoint<L>]) -> Result<Self> {
        Self::new(hull(points)?)
    }

    /// `Δ`.
    pub fn primal(&self) -> &Polytope<L> {
        &self.primal
    }

    /// `Δ*`.
    pub fn dual(&self) -> &Polytope<L::Dual> {
        &self.dual
    }

    pub fn dim(&self) -> usize {
        self.primal.dim()
    }

    /// The same pair seen from the other side: `(Δ*, Δ)`.
    pub fn mirror(&self) -> ReflexivePair<L::Dual> {
        ReflexivePair {
            primal: self.dual.clone(),
            dual: self.primal.clone(),
        }
    }

    /// `Θ ↦ Θ* = {y ∈ Δ* : ⟨x, y⟩ = −1 for all x ∈ Θ}`.
    pub fn dual_face(&self, face: FaceId) -> FaceId {
        dual_face_between(&self.primal, &self.dual, face)
    }

    /// Inverse of [`dual_face`](Self::dual_face): a face of `Δ*` to its face of `Δ`.
    pub fn primal_face(&self, face: FaceId) -> FaceId {
        dual_face_between(&self.dual, &self.primal, face)
    }
}

fn dual_face_between<A: Lattice>(from: &Polytope<A>, to: &Polytope<A::Dual>, face: FaceId) -> FaceId {
    let minus_one = -BigInt::one();
    let xs = from.face_vertices(face);
    let verts: Vec<usize> = to
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, y)| {
            xs.iter()
                .all(|x| pairing(*x, y).expect("dimensions agree") == minus_one)
        })
        .map(|(i, _)| i)
        .collect();
    to.faces()
        .find(&verts)
        .expect("dual of a proper face of a reflexive polytope is a proper face")
}
