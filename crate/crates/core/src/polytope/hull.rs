//! Beneath-beyond convex hull with exact predicates.
//!
//! The boundary is kept as a simplicial complex of oriented facets while
//! points are inserted; afterwards coplanar simplices are merged into the
//! (usually non-simplicial) facets of the polytope and the true vertices are
//! read off from the merged facets.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Polytope;
use crate::error::{Error, Result};
use crate::lattice::{linalg, primitive, Hyperplane, Lattice, LatticePoint};

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Vec<BigInt>,
    offset: BigInt,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Convex hull of a set of lattice points.
pub fn hull<L: Lattice>(points: &[LatticePoint<L>]) -> Result<Polytope<L>> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    let n = first.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    if n == 0 {
        return Err(Error::NotFullDimensional {
            affine_dim: 0,
            ambient_dim: 0,
        });
    }
    let mut pts: Vec<LatticePoint<L>> = points.to_vec();
    pts.sort();
    pts.dedup();
    let coords: Vec<&[BigInt]> = pts.iter().map(|p| p.coords()).collect();

    // initial simplex: greedily extend the affine rank
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<BigInt>> = Vec::new();
    for (i, c) in coords.iter().enumerate().skip(1) {
        if diffs.len() == n {
            break;
        }
        let d: Vec<BigInt> = c.iter().zip(coords[0]).map(|(a, b)| a - b).collect();
        diffs.push(d);
        if linalg::rank(&diffs) == diffs.len() {
            chosen.push(i);
        } else {
            diffs.pop();
        }
    }
    if diffs.len() < n {
        return Err(Error::NotFullDimensional {
            affine_dim: diffs.len(),
            ambient_dim: n,
        });
    }

    // (n+1) · centroid of the initial simplex, strictly interior forever after
    let scale = BigInt::from(n + 1);
    let reference: Vec<BigInt> = (0..n)
        .map(|j| chosen.iter().map(|&i| &coords[i][j]).sum())
        .collect();

    let make_facet = |verts: Vec<usize>| -> SimplexFacet {
        let q0 = coords[verts[0]];
        let ds: Vec<Vec<BigInt>> = verts[1..]
            .iter()
            .map(|&v| coords[v].iter().zip(q0).map(|(a, b)| a - b).collect())
            .collect();
        let mut normal = linalg::cofactor_normal(&ds, n);
        let mut offset = dot(&normal, q0);
        let side = dot(&normal, &reference) - &scale * &offset;
        debug_assert!(!side.is_zero(), "reference point on a facet hyperplane");
        if side.is_negative() {
            normal.iter_mut().for_each(|x| *x = -&*x);
            offset = -offset;
        }
        SimplexFacet {
            verts,
            normal,
            offset,
        }
    };

    let mut facets: Vec<SimplexFacet> = (0..chosen.len())
        .map(|skip| {
            let verts: Vec<usize> = chosen
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            make_facet(verts)
        })
        .collect();

    for (i, p) in coords.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = facets
            .iter()
            .map(|f| dot(&f.normal, p) < f.offset)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..f.verts.len() {
                let mut ridge = f.verts.clone();
                ridge.remove(skip);
                *ridges.entry(ridge).or_default() += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|&(_, count)| count == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        let mut keep = visible.iter();
        facets.retain(|_| !*keep.next().unwrap());
        for mut ridge in horizon {
            ridge.push(i);
            ridge.sort_unstable();
            facets.push(make_facet(ridge));
        }
    }

    // merge coplanar simplices into the polytope's facets
    let mut merged: BTreeMap<(Vec<BigInt>, BigInt), ()> = BTreeMap::new();
    for f in &facets {
        let normal = LatticePoint::<L::Dual>::new(f.normal.clone());
        let g = normal.content();
        let prim = primitive(&normal)?;
        merged.insert((prim.into_coords(), &f.offset / &g), ());
    }
    let hyperplanes: Vec<Hyperplane<L>> = merged
        .into_keys()
        .map(|(normal, offset)| Hyperplane::new(LatticePoint::new(normal), offset))
        .collect::<Result<_>>()?;

    let vertices: Vec<LatticePoint<L>> = pts
        .iter()
        .filter(|p| {
            let tight: Vec<Vec<BigInt>> = hyperplanes
                .iter()
                .filter(|h| h.evaluate(p).map(|v| v.is_zero()).unwrap_or(false))
                .map(|h| h.normal().coords().to_vec())
                .collect();
            linalg::rank(&tight) == n
        })
        .cloned()
        .collect();

    Ok(Polytope::from_parts(n, vertices, hyperplanes))
}
