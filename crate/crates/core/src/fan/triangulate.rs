//! Fine regular star triangulations of `∂Δ*` by placing.
//!
//! Every facet of `Δ*` is triangulated separately by inserting its lattice
//! points one at a time in a global order; each new point is joined to the
//! boundary faces of the current partial triangulation that it sees. The
//! restriction of a placing triangulation to a face is the placing
//! triangulation of that face in the induced order, so the facet
//! triangulations agree on shared faces and glue to a fan.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::{Fan, FanKind};
use crate::error::{Error, Result};
use crate::lattice::{linalg, Lattice, LatticePoint};
use crate::polytope::ReflexivePair;

/// Insertion order for the placing triangulation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PlacingOrder {
    /// By squared Euclidean norm, then lexicographically. A point never lies
    /// in the hull of points of smaller or equal norm, so every point is used.
    #[default]
    Norm,
    /// Lexicographic in the coordinates. May skip points lying inside the
    /// hull of earlier ones, which is reported as [`Error::NotFine`].
    Lexicographic,
}

impl PlacingOrder {
    fn compare<L: Lattice>(self, a: &LatticePoint<L>, b: &LatticePoint<L>) -> Ordering {
        match self {
            PlacingOrder::Norm => (a.norm_squared(), a).cmp(&(b.norm_squared(), b)),
            PlacingOrder::Lexicographic => a.cmp(b),
        }
    }
}

/// The MPCP fan: a simplicial refinement of the face fan whose rays are all
/// boundary lattice points of `Δ*`.
pub fn mpcp_triangulate<L: Lattice>(pair: &ReflexivePair<L>, order: PlacingOrder) -> Result<Fan<L::Dual>> {
    let dstar = pair.dual();
    let n = dstar.dim();
    let rays: Vec<LatticePoint<L::Dual>> = dstar
        .lattice_points()
        .boundary_points()
        .map(|(_, p, _)| p.clone())
        .collect();

    let mut maximal = Vec::new();
    for (facet_idx, facet) in dstar.facets().iter().enumerate() {
        let mut pts: Vec<usize> = (0..rays.len())
            .filter(|&i| facet.contains(&rays[i]).expect("dimensions agree"))
            .collect();
        pts.sort_by(|&a, &b| order.compare(&rays[a], &rays[b]));
        let simplices = place(&rays, &pts).map_err(|skipped| {
            Error::NotFine(format!("{} (facet {facet_idx})", rays[skipped]))
        })?;
        maximal.extend(simplices);
    }
    Ok(Fan::simplicial(n, rays, maximal, FanKind::Refinement))
}

/// Coordinates on which the span of `vectors` projects isomorphically.
fn chart(vectors: &[Vec<BigInt>], n: usize, k: usize) -> Vec<usize> {
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let minor: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| subset.iter().map(|&c| v[c].clone()).collect())
            .collect();
        if !linalg::det(&minor).is_zero() {
            return subset;
        }
        // next k-subset of 0..n in lexicographic order
        let mut i = k;
        while i > 0 && subset[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        assert!(i > 0, "vectors are linearly dependent");
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

fn orientation<L: Lattice>(rays: &[LatticePoint<L>], cols: &[usize], face: &[usize], extra: usize) -> Sign {
    let rows: Vec<Vec<BigInt>> = face
        .iter()
        .chain(std::iter::once(&extra))
        .map(|&r| cols.iter().map(|&c| rays[r].coords()[c].clone()).collect())
        .collect();
    linalg::det(&rows).sign()
}

/// Placing triangulation of points lying on a common affine hyperplane that
/// misses the origin. Returns the maximal simplices, or the first point that
/// did not become a vertex.
fn place<L: Lattice>(rays: &[LatticePoint<L>], order: &[usize]) -> std::result::Result<Vec<Vec<usize>>, usize> {
    let Some((&first, rest)) = order.split_first() else {
        return Ok(Vec::new());
    };
    let n = rays[first].dim();
    let mut basis: Vec<Vec<BigInt>> = vec![rays[first].coords().to_vec()];
    let mut cols = chart(&basis, n, 1);
    let mut simplices: Vec<Vec<usize>> = vec![vec![first]];

    for &p in rest {
        let v = rays[p].coords().to_vec();
        basis.push(v);
        if linalg::rank(&basis) == basis.len() {
            for s in &mut simplices {
                s.push(p);
            }
            cols = chart(&basis, n, basis.len());
            continue;
        }
        basis.pop();

        let mut boundary: HashMap<Vec<usize>, Option<usize>> = HashMap::new();
        for s in &simplices {
            for (k, &opposite) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(k);
                face.sort_unstable();
                boundary
                    .entry(face)
                    .and_modify(|o| *o = None)
                    .or_insert(Some(opposite));
            }
        }
        let mut visible: Vec<Vec<usize>> = boundary
            .into_iter()
            .filter_map(|(face, opp)| {
                let opp = opp?;
                let sp = orientation(rays, &cols, &face, p);
                let so = orientation(rays, &cols, &face, opp);
                (sp != Sign::NoSign && sp != so).then_some(face)
            })
            .collect();
        if visible.is_empty() {
            return Err(p);
        }
        visible.sort();
        for mut face in visible {
            face.push(p);
            simplices.push(face);
        }
    }
    for s in &mut simplices {
        s.sort_unstable();
    }
    simplices.sort();
    Ok(simplices)
}
