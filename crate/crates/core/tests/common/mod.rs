//! Independent reference computations shared by the integration tests.
//!
//! Everything here works on plain `i64` vectors and never calls into the
//! library's geometry, so it can be used to check it.

#![allow(dead_code)]

pub mod invariants;

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_rational::BigRational;
use reflexive::io::read_polytope;
use reflexive::lattice::{MPoint, M};
use reflexive::polytope::ReflexivePair;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(name: &str) -> Vec<MPoint> {
    read_polytope::<M>(fixture(name)).unwrap()
}

pub fn pair(name: &str) -> ReflexivePair<M> {
    ReflexivePair::from_points(&load(name)).unwrap()
}

/// The reflexive 4-dimensional fixtures.
pub const CORPUS_4D: [&str; 6] = [
    "example_s3.poly",
    "example_s3_dual.poly",
    "quintic.poly",
    "quintic_mirror.poly",
    "cube.poly",
    "cross.poly",
];

pub fn polygon_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture("polygons"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "poly"))
        .collect();
    v.sort();
    v
}

pub fn to_i64(p: &MPoint) -> Vec<i64> {
    p.coords().iter().map(|c| i64::try_from(c).unwrap()).collect()
}

pub fn ints<L: reflexive::lattice::Lattice>(p: &reflexive::lattice::LatticePoint<L>) -> Vec<i64> {
    p.coords().iter().map(|c| i64::try_from(c).unwrap()).collect()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Facet inequalities `⟨x, normal⟩ ≥ offset` of `conv(points)` by trying
/// every hyperplane through `n` of the points. Normals are primitive.
pub fn brute_facets(points: &[Vec<i64>]) -> BTreeSet<(Vec<i64>, i64)> {
    let n = points[0].len();
    let mut out = BTreeSet::new();
    for s in subsets(points.len(), n) {
        let diffs: Vec<Vec<i64>> = s[1..]
            .iter()
            .map(|&i| points[i].iter().zip(&points[s[0]]).map(|(a, b)| a - b).collect())
            .collect();
        // cofactor expansion of the (n−1)×n matrix gives a normal vector
        let mut normal: Vec<i64> = (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = diffs
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                if c % 2 == 0 {
                    det(&minor)
                } else {
                    -det(&minor)
                }
            })
            .collect();
        let g = normal.iter().fold(0, |g, &x| gcd(g, x));
        if g == 0 {
            continue;
        }
        normal.iter_mut().for_each(|x| *x /= g);
        let c = dot(&points[s[0]], &normal);
        let vals: Vec<i64> = points.iter().map(|p| dot(p, &normal)).collect();
        if vals.iter().all(|&v| v >= c) {
            out.insert((normal, c));
        } else if vals.iter().all(|&v| v <= c) {
            out.insert((normal.iter().map(|x| -x).collect(), -c));
        }
    }
    out
}

/// Lattice points of `k·P` for `P` given by facet inequalities, by scanning
/// the bounding box of `k·points`.
pub fn brute_points(points: &[Vec<i64>], facets: &BTreeSet<(Vec<i64>, i64)>, k: i64) -> Vec<Vec<i64>> {
    let n = points[0].len();
    let lo: Vec<i64> = (0..n).map(|i| k * points.iter().map(|p| p[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|i| k * points.iter().map(|p| p[i]).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if facets.iter().all(|(nv, c)| dot(&x, nv) >= k * c) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

/// `n!·vol(P)` from the Ehrhart counts `#(kP ∩ ℤⁿ)`, `k = 0..n`: the n-th
/// finite difference of a degree-n polynomial is `n!` times its leading
/// coefficient.
pub fn normalized_volume(points: &[Vec<i64>]) -> i64 {
    let n = points[0].len();
    let facets = brute_facets(points);
    let mut total = 0i64;
    let mut binom = 1i64;
    for k in 0..=n {
        let count = brute_points(points, &facets, k as i64).len() as i64;
        let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
        total += sign * binom * count;
        binom = binom * (n - k) as i64 / (k + 1) as i64;
    }
    total
}

/// Truncated commutative polynomials in `vars` variables over ℚ, used for the
/// Chern-series hand expansions.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub terms: std::collections::BTreeMap<Vec<u32>, BigRational>,
    pub vars: usize,
    pub max_degree: u32,
}

impl Series {
    pub fn constant(vars: usize, max_degree: u32, c: BigRational) -> Self {
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(vec![0; vars], c);
        Series { terms, vars, max_degree }
    }

    pub fn linear(vars: usize, max_degree: u32, c0: i64, coeffs: &[i64]) -> Self {
        let mut s = Series::constant(vars, max_degree, q(c0, 1));
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars];
            e[i] = 1;
            s.terms.insert(e, q(c, 1));
        }
        s
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = Series::constant(self.vars, self.max_degree, q(0, 1));
        out.terms.clear();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if e.iter().sum::<u32>() > self.max_degree {
                    continue;
                }
                *out.terms.entry(e).or_insert_with(|| q(0, 1)) += c1 * c2;
            }
        }
        out
    }

    /// `1/self` as a geometric series; the constant term must be 1.
    pub fn inverse(&self) -> Series {
        let mut x = self.clone();
        x.terms.remove(&vec![0; self.vars]);
        let mut minus_x = x.clone();
        minus_x.terms.values_mut().for_each(|c| *c = -c.clone());
        let mut out = Series::constant(self.vars, self.max_degree, q(1, 1));
        let mut power = out.clone();
        for _ in 0..self.max_degree {
            power = power.mul(&minus_x);
            for (e, c) in &power.terms {
                *out.terms.entry(e.clone()).or_insert_with(|| q(0, 1)) += c;
            }
        }
        out
    }

    pub fn degree_part(&self, d: u32) -> Series {
        let mut s = self.clone();
        s.terms.retain(|e, _| e.iter().sum::<u32>() == d);
        s
    }

    /// Applies `evaluate` to every top-degree monomial and sums.
    pub fn integrate(&self, evaluate: impl Fn(&[u32]) -> BigRational) -> BigRational {
        self.terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == self.max_degree)
            .map(|(e, c)| c * evaluate(e))
            .sum()
    }
}

/// Canonical form of a reflexive polygon under `GL₂(ℤ)`: every edge lies on a
/// line at lattice distance 1, so each (edge, orientation) determines a unique
/// unimodular map sending its endpoints to `(0,−1)` and `(g,−1)`; the form is
/// the smallest sorted image.
pub fn polygon_normal_form(vertices: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut ordered = vertices.to_vec();
    ordered.sort_by(|a, b| {
        let (aa, ab) = ((a[1] as f64).atan2(a[0] as f64), (b[1] as f64).atan2(b[0] as f64));
        aa.partial_cmp(&ab).unwrap()
    });
    let k = ordered.len();
    let mut best: Option<Vec<Vec<i64>>> = None;
    for i in 0..k {
        for (u, w) in [(&ordered[i], &ordered[(i + 1) % k]), (&ordered[(i + 1) % k], &ordered[i])] {
            let e = [w[0] - u[0], w[1] - u[1]];
            let g = gcd(e[0], e[1]);
            let d = [e[0] / g, e[1] / g];
            // complete d to a basis: s·d0 + t·d1 = 1 gives (−t, s) with det 1
            let (s, t) = bezout(d[0], d[1]);
            let inv = [[s, t], [-d[1], d[0]]];
            let apply = |m: &[[i64; 2]; 2], p: &[i64]| vec![m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]];
            let mut m = inv;
            let img = apply(&m, u);
            assert_eq!(img[1].abs(), 1, "edge not at distance 1");
            if img[1] == 1 {
                m[1] = [-m[1][0], -m[1][1]];
            }
            let img = apply(&m, u);
            // shear x ↦ x + shift·y with y = −1 moves u to x = 0
            let shift = img[0];
            let m = [[m[0][0] + shift * m[1][0], m[0][1] + shift * m[1][1]], m[1]];
            let mut image: Vec<Vec<i64>> = vertices.iter().map(|p| apply(&m, p)).collect();
            image.sort();
            if best.as_ref().is_none_or(|b| image < *b) {
                best = Some(image);
            }
        }
    }
    best.unwrap()
}

fn bezout(a: i64, b: i64) -> (i64, i64) {
    if b == 0 {
        return (a.signum(), 0);
    }
    let (s, t) = bezout(b, a % b);
    (t, s - (a / b) * t)
}

/// Vertices of a polygon given by points, by dropping points that are convex
/// combinations of two others on the boundary or inside.
pub fn polygon_vertices(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let facets = brute_facets(points);
    let mut out: Vec<Vec<i64>> = points
        .iter()
        .filter(|p| facets.iter().filter(|(n, c)| dot(p, n) == *c).count() >= 2)
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| {
                    let (mut a, mut b) = (g.abs(), x.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Batyrev's `h¹¹` of the hypersurface for a reflexive 4-polytope `Δ` given by
/// its points, counted by brute force: faces of `Δ*` are keyed by the set of
/// facets tight at a point, and the dual edge of a 2-face is the segment
/// between the two facet normals.
pub fn batyrev_h11(delta: &[Vec<i64>]) -> i64 {
    let n = delta[0].len();
    let primal_facets = brute_facets(delta);
    assert!(primal_facets.iter().all(|(_, c)| *c == -1), "not reflexive");
    let dual_vertices: Vec<Vec<i64>> = primal_facets.iter().map(|(v, _)| v.clone()).collect();
    let dual_facets = brute_facets(&dual_vertices);
    let points = brute_points(&dual_vertices, &dual_facets, 1);
    let mut two_faces: std::collections::BTreeMap<Vec<Vec<i64>>, i64> = Default::default();
    let mut facet_interior = 0;
    for y in &points {
        let tight: Vec<Vec<i64>> = dual_facets
            .iter()
            .filter(|(nv, c)| dot(y, nv) == *c)
            .map(|(nv, _)| nv.clone())
            .collect();
        match tight.len() {
            0 => {}
            _ => match n - rank(&tight) {
                d if d == n - 1 => facet_interior += 1,
                2 => *two_faces.entry(tight).or_default() += 1,
                _ => {}
            },
        }
    }
    let correction: i64 = two_faces
        .iter()
        .map(|(normals, inner)| {
            assert_eq!(normals.len(), 2, "dual of a 2-face is an edge");
            let e: Vec<i64> = normals[0].iter().zip(&normals[1]).map(|(a, b)| a - b).collect();
            inner * (e.iter().fold(0, |g, &x| gcd(g, x)) - 1)
        })
        .sum();
    points.len() as i64 - (n as i64 + 1) - facet_interior + correction
}

/// Vertices of `Δ*` for a reflexive `Δ`: the facet normals.
pub fn dual_vertices(delta: &[Vec<i64>]) -> Vec<Vec<i64>> {
    brute_facets(delta).into_iter().map(|(v, _)| v).collect()
}

/// `χ(Z) = ∫_X c₃(Z)·Z` with `c(Z) = Π(1+D_i)/(1+ΣD_i)`, whose degree-3 part
/// is `e₃ − e₁e₂` in the elementary symmetric functions of the `D_i`.
pub fn euler_from_chern_classes(fan: &reflexive::fan::Fan<reflexive::lattice::N>) -> BigRational {
    let form = reflexive::chern::IntersectionForm::new(fan).unwrap();
    let r = fan.rays().len();
    let k = reflexive::fan::WeilDivisor::anticanonical(r);
    let d = |i: usize| reflexive::fan::WeilDivisor::ray(r, i);
    let mut total = <BigRational as num_traits::Zero>::zero();
    for c in fan.cones(3) {
        let [a, b, e] = [c.rays[0], c.rays[1], c.rays[2]];
        total += form.intersection_number(&[d(a), d(b), d(e), k.clone()]).unwrap();
    }
    for c in fan.cones(2) {
        let [a, b] = [c.rays[0], c.rays[1]];
        total -= form.intersection_number(&[d(a), d(b), k.clone(), k.clone()]).unwrap();
    }
    total
}

/// Random reflexive 4-polytopes: the convex hull of a random subset of
/// `{−1,0,1}⁴ ∖ {0}` under a random unimodular shear, kept when reflexive.
/// The hull is returned as the dual side, so the fan lives on these points.
pub fn random_reflexive(rng: &mut impl rand::Rng) -> ReflexivePair<reflexive::lattice::N> {
    use rand::seq::SliceRandom;
    let cube: Vec<Vec<i64>> = (0..81)
        .map(|x: i64| (0..4).map(|k| (x / 3i64.pow(k)) % 3 - 1).collect::<Vec<i64>>())
        .filter(|v| v.iter().any(|&c| c != 0))
        .collect();
    loop {
        let k = rng.gen_range(6..=14);
        let mut pts: Vec<Vec<i64>> = cube.choose_multiple(rng, k).cloned().collect();
        // x_i += s·x_j
        let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
        if i != j {
            let s = rng.gen_range(-1..=1);
            for p in &mut pts {
                p[i] += s * p[j];
            }
        }
        let pts: Vec<MPoint> = pts.iter().map(|p| MPoint::from_i64s(p)).collect();
        let Ok(p) = reflexive::polytope::hull(&pts) else { continue };
        if let Ok(pair) = ReflexivePair::new(p) {
            return pair.mirror();
        }
    }
}
