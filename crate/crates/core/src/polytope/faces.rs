use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;

use crate::lattice::linalg;

pub type FaceId = usize;

/// A proper face of a polytope, identified by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    /// Indices into the polytope's vertex list, sorted.
    pub vertices: Vec<usize>,
    /// Indices of the facets containing this face, sorted.
    pub facets: Vec<usize>,
    /// Faces of dimension `dim − 1` contained in this face.
    pub subfaces: Vec<FaceId>,
    /// Faces of dimension `dim + 1` containing this face.
    pub superfaces: Vec<FaceId>,
}

/// All proper faces (dimension `0..n−1`), ordered by dimension and then by
/// vertex set.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    by_dim: Vec<Vec<FaceId>>,
    index: HashMap<Vec<usize>, FaceId>,
    facet_faces: Vec<FaceId>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

fn affine_dim(vertices: &[usize], coords: &[&[BigInt]]) -> usize {
    let base = coords[vertices[0]];
    let diffs: Vec<Vec<BigInt>> = vertices[1..]
        .iter()
        .map(|&v| coords[v].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs)
}

impl FaceLattice {
    /// Builds the lattice top-down from the facets' vertex sets by closing
    /// under intersection.
    pub(crate) fn build(ambient_dim: usize, coords: &[&[BigInt]], facet_vertices: &[Vec<usize>]) -> Self {
        let mut seen: HashSet<Vec<usize>> = facet_vertices.iter().cloned().collect();
        let mut queue: Vec<Vec<usize>> = seen.iter().cloned().collect();
        while let Some(face) = queue.pop() {
            for facet in facet_vertices {
                let meet = intersect(&face, facet);
                if !meet.is_empty() && meet != face && seen.insert(meet.clone()) {
                    queue.push(meet);
                }
            }
        }

        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vertices| {
                let facets = facet_vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| is_subset(&vertices, f))
                    .map(|(i, _)| i)
                    .collect();
                Face {
                    dim: affine_dim(&vertices, coords),
                    vertices,
                    facets,
                    subfaces: Vec::new(),
                    superfaces: Vec::new(),
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));

        let mut by_dim = vec![Vec::new(); ambient_dim];
        for (id, f) in faces.iter().enumerate() {
            by_dim[f.dim].push(id);
        }
        for d in 1..ambient_dim {
            for &hi in &by_dim[d] {
                for &lo in &by_dim[d - 1] {
                    if is_subset(&faces[lo].vertices, &faces[hi].vertices) {
                        faces[hi].subfaces.push(lo);
                        faces[lo].superfaces.push(hi);
                    }
                }
            }
        }
        let index: HashMap<Vec<usize>, FaceId> = faces
            .iter()
            .enumerate()
            .map(|(id, f)| (f.vertices.clone(), id))
            .collect();
        let facet_faces = facet_vertices.iter().map(|f| index[f]).collect();
        FaceLattice {
            faces,
            by_dim,
            index,
            facet_faces,
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (FaceId, &Face)> {
        self.faces.iter().enumerate()
    }

    pub fn by_dim(&self, dim: usize) -> &[FaceId] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    /// `f_k` for `k = 0..n−1`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn find(&self, vertices: &[usize]) -> Option<FaceId> {
        self.index.get(vertices).copied()
    }

    /// The face that is the facet with the given index.
    pub fn facet_face(&self, facet: usize) -> FaceId {
        self.facet_faces[facet]
    }

    /// Smallest face contained in all the given facets, i.e. their
    /// intersection; `None` for an empty facet list or empty intersection.
    pub fn meet_of_facets(&self, facets: &[usize]) -> Option<FaceId> {
        let (first, rest) = facets.split_first()?;
        let mut verts = self.faces[self.facet_faces[*first]].vertices.clone();
        for &f in rest {
            verts = intersect(&verts, &self.faces[self.facet_faces[f]].vertices);
        }
        self.find(&verts)
    }
}
