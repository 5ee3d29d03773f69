//! Structural invariants of reflexive pairs, their fans and intersection
//! forms, shared by the property and acceptance suites.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use reflexive::chern::{c2_dot, candidate_classes, IntersectionForm};
use reflexive::fan::{face_fan, is_nef, mpcp_triangulate, picard_rank_q, PlacingOrder, WeilDivisor};
use reflexive::hodge::{divisor_census, h11, h12};
use reflexive::lattice::{Lattice, LatticePoint, N};
use reflexive::polytope::{Polytope, ReflexivePair};

use super::*;

pub const SEED: u64 = 0x5eed_2024;
pub const RANDOM_POLYTOPES: usize = 10;

/// Runs `check` on every 4-dimensional fixture and on the random sample.
pub fn for_all(mut check: impl FnMut(&str, &dyn Fn() -> Box<dyn Checkable>)) {
    for name in CORPUS_4D {
        check(name, &|| Box::new(pair(name)));
    }
    for (i, p) in random_sample().iter().enumerate() {
        check(&format!("random #{i}"), &move || Box::new(p.clone()));
    }
}

pub fn random_sample() -> &'static [ReflexivePair<N>] {
    static SAMPLE: OnceLock<Vec<ReflexivePair<N>>> = OnceLock::new();
    SAMPLE.get_or_init(|| {
        let mut rng = StdRng::seed_from_u64(SEED);
        (0..RANDOM_POLYTOPES).map(|_| random_reflexive(&mut rng)).collect()
    })
}

/// Object-safe view of a reflexive pair over either lattice.
pub trait Checkable {
    fn duality_involution(&self);
    fn census_partition(&self);
    fn boundary_membership(&self);
    fn representations_agree(&self);
    fn mpcp_properties(&self);
    fn hodge_properties(&self);
    fn intersection_properties(&self, rng: &mut StdRng) -> usize;
    fn positivity(&self);
}

impl<L: Lattice> Checkable for ReflexivePair<L> {
    fn duality_involution(&self) {
        let back = self.dual().dual().unwrap();
        let got: BTreeSet<Vec<i64>> = back.vertices().iter().map(|v| ints(&v.to_lattice().unwrap())).collect();
        let want: BTreeSet<Vec<i64>> = self.primal().vertices().iter().map(ints).collect();
        assert_eq!(got, want);
        let again = self.primal().lattice_dual().unwrap().lattice_dual().unwrap();
        assert_eq!(again.vertices(), self.primal().vertices());
    }

    fn census_partition(&self) {
        partition(self.primal());
        partition(self.dual());
    }

    fn boundary_membership(&self) {
        let xs: Vec<Vec<i64>> = self.primal().vertices().iter().map(ints).collect();
        let census = self.dual().lattice_points();
        for (i, y) in census.points().iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let y = ints(y);
            let on_boundary = xs.iter().any(|x| dot(x, &y) == -1);
            assert_eq!(on_boundary, census.owner(i).is_some(), "{y:?}");
        }
    }

    fn representations_agree(&self) {
        hv_consistent(self.primal());
        hv_consistent(self.dual());
        // reflexivity three ways
        assert!(self.primal().is_reflexive().unwrap());
        assert!(self.primal().dual().unwrap().is_integral());
        let pts: Vec<Vec<i64>> = self.primal().vertices().iter().map(ints).collect();
        assert!(brute_facets(&pts).iter().all(|(_, c)| *c == -1));
    }

    fn mpcp_properties(&self) {
        let ff = face_fan(self);
        let fan = mpcp_triangulate(self, PlacingOrder::Norm).unwrap();
        assert!(ff.walls_are_consistent());
        assert!(fan.walls_are_consistent());
        assert!(fan.is_simplicial());

        // volume conservation
        let dstar: Vec<Vec<i64>> = self.dual().vertices().iter().map(ints).collect();
        assert_eq!(fan.total_multiplicity().unwrap(), normalized_volume(&dstar).into());

        // fineness
        let facets = brute_facets(&dstar);
        let boundary: BTreeSet<Vec<i64>> = brute_points(&dstar, &facets, 1)
            .into_iter()
            .filter(|y| facets.iter().any(|(n, c)| dot(y, n) == *c))
            .collect();
        let rays: BTreeSet<Vec<i64>> = fan.rays().iter().map(ints).collect();
        assert_eq!(rays, boundary);

        // crepancy
        let xs: Vec<Vec<i64>> = self.primal().vertices().iter().map(ints).collect();
        for y in &rays {
            assert_eq!(xs.iter().map(|x| dot(x, y)).min(), Some(-1));
        }

        // refinement: each cone lies in exactly one facet cone of Δ*
        for cone in fan.maximal_cones() {
            let containing = xs
                .iter()
                .filter(|x| cone.rays.iter().all(|&r| dot(x, &ints(&fan.rays()[r])) == -1))
                .count();
            assert_eq!(containing, 1);
        }
        assert_eq!(ff.maximal_cones().len(), xs.len());

        assert_eq!(picard_rank_q(&fan), fan.rays().len() - 4);
        assert!(picard_rank_q(&ff) <= picard_rank_q(&fan));
    }

    fn hodge_properties(&self) {
        let census = divisor_census(self).unwrap();
        assert_eq!(census.h11(), h11(self).unwrap());
        let mirror = self.mirror();
        assert_eq!(h11(self).unwrap(), h12(&mirror).unwrap());
        assert_eq!(h12(self).unwrap(), h11(&mirror).unwrap());
    }

    fn intersection_properties(&self, rng: &mut StdRng) -> usize {
        let fan = mpcp_triangulate(self, PlacingOrder::Norm).unwrap();
        let form = IntersectionForm::new(&fan).unwrap();
        let r = fan.rays().len();

        // maximal cones contribute 1/mult
        for cone in fan.maximal_cones() {
            let mult = BigRational::from_integer(cone.mult.clone().unwrap());
            assert_eq!(form.monomial(&cone.rays), mult.recip());
        }

        let mut checked = 0;
        for _ in 0..12 {
            let quad: Vec<WeilDivisor> = (0..4).map(|_| random_divisor(rng, r)).collect();
            let value = form.intersection_number(&quad).unwrap();
            assert_eq!(form.intersection_number_by_monomials(&quad).unwrap(), value);
            let mut perm = quad.clone();
            perm.rotate_left(rng.gen_range(1..4));
            perm.swap(rng.gen_range(0..4), rng.gen_range(0..4));
            assert_eq!(form.intersection_number(&perm).unwrap(), value);

            let m: Vec<BigRational> = (0..4).map(|_| q(rng.gen_range(-3..=3), 1)).collect();
            let principal = WeilDivisor::principal(&fan, &m);
            let mut with_relation = quad.clone();
            with_relation[0] = principal;
            assert_eq!(form.intersection_number(&with_relation).unwrap(), BigRational::zero());
            checked += 1;
        }

        // linearity of c₂·L
        for _ in 0..3 {
            let (a, b) = (random_divisor(rng, r), random_divisor(rng, r));
            let alpha = q(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            let beta = q(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            let combo = &(&alpha * &a) + &(&beta * &b);
            assert_eq!(
                c2_dot(&form, &combo).unwrap(),
                alpha * c2_dot(&form, &a).unwrap() + beta * c2_dot(&form, &b).unwrap()
            );
        }
        checked
    }

    fn positivity(&self) {
        let fan = mpcp_triangulate(self, PlacingOrder::Norm).unwrap();
        let form = IntersectionForm::new(&fan).unwrap();
        let k = WeilDivisor::anticanonical(fan.rays().len());
        assert!(c2_dot(&form, &k).unwrap().is_positive());
        let c2 = form.c2_functional().unwrap();
        let degrees = form.anticanonical_degrees();
        let pair_with = |v: &[BigRational], d: &WeilDivisor| -> BigRational { v.iter().zip(d.coeffs()).map(|(a, b)| a * b).sum() };
        for (label, d) in candidate_classes(fan.rays().len()) {
            if is_nef(&fan, &d).unwrap() && pair_with(&degrees, &d).is_positive() {
                assert!(pair_with(&c2, &d).is_positive(), "{label}");
            }
        }
    }
}

pub fn partition<L: Lattice>(p: &Polytope<L>) {
    let census = p.lattice_points();
    let faces: usize = p.faces().iter().map(|(id, _)| census.l_star(id)).sum();
    assert_eq!(census.total(), census.interior() + faces);
    for (id, face) in p.faces().iter() {
        let data = p.face_data(id);
        assert!(data.l >= data.l_star);
        if face.dim == 1 {
            assert_eq!(data.l, data.l_star + 2);
        }
    }
}

pub fn hv_consistent<L: Lattice>(p: &Polytope<L>) {
    for h in p.facets() {
        let tight: Vec<&LatticePoint<L>> = p.vertices().iter().filter(|v| h.contains(v).unwrap()).collect();
        assert!(tight.len() >= p.dim());
        let diffs: Vec<Vec<i64>> = tight.iter().map(|v| ints(v).iter().zip(ints(tight[0])).map(|(a, b)| a - b).collect()).collect();
        assert_eq!(rank_of(&diffs), p.dim() - 1);
        for v in p.vertices() {
            assert!(h.evaluate(v).unwrap() >= h.offset().clone());
        }
    }
}

fn rank_of(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let f = &m[i][c] / &m[rank][c];
            for j in 0..cols {
                let sub = &f * &m[rank][j];
                m[i][j] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_divisor(rng: &mut impl Rng, rays: usize) -> WeilDivisor {
    let mut coeffs = vec![BigRational::zero(); rays];
    for _ in 0..rng.gen_range(1..=3) {
        coeffs[rng.gen_range(0..rays)] += q(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    }
    WeilDivisor::new(coeffs)
}

