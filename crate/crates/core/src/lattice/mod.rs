//! Dual lattices `M` and `N`, their points, the pairing between them, and
//! primitive rational hyperplanes.
//!
//! Points of `M` and of `N = Hom(M, Z)` are distinct types. The only operation
//! that combines them is [`pairing`]. Everything is exact: coordinates are
//! arbitrary-precision integers, and rational points use `BigRational`.

pub mod linalg;

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Marker for one side of a dual pair of lattices.
pub trait Lattice:
    Copy + Clone + fmt::Debug + Default + PartialEq + Eq + Hash + PartialOrd + Ord + Send + Sync + 'static
{
    type Dual: Lattice<Dual = Self>;
    const NAME: &'static str;
}

/// The lattice `M` that carries the polytope `Δ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct M;

/// The dual lattice `N = Hom(M, Z)` that carries `Δ*` and the fan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct N;

impl Lattice for M {
    type Dual = N;
    const NAME: &'static str = "M";
}

impl Lattice for N {
    type Dual = M;
    const NAME: &'static str = "N";
}

/// An integer point of the lattice `L`. Ordering is lexicographic in the
/// coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint<L> {
    coords: Vec<BigInt>,
    lattice: PhantomData<L>,
}

pub type MPoint = LatticePoint<M>;
pub type NPoint = LatticePoint<N>;

impl<L: Lattice> LatticePoint<L> {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint {
            coords,
            lattice: PhantomData,
        }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut coords = vec![BigInt::zero(); dim];
        coords[i] = BigInt::one();
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coords.iter().map(|c| c * k).collect())
    }

    pub fn norm_squared(&self) -> BigInt {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// Reinterprets the coordinates in the dual lattice. Only meaningful when
    /// a basis of `L` and its dual basis are identified, e.g. to compare
    /// polygons across the two lattices.
    pub fn transpose(&self) -> LatticePoint<L::Dual> {
        LatticePoint::new(self.coords.clone())
    }

    pub fn to_rational(&self) -> RationalPoint<L> {
        RationalPoint::new(
            self.coords
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

impl<L: Lattice> fmt::Debug for LatticePoint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", L::NAME, self)
    }
}

impl<L> fmt::Display for LatticePoint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<L: Lattice> Add for &LatticePoint<L> {
    type Output = LatticePoint<L>;
    fn add(self, rhs: Self) -> LatticePoint<L> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in addition");
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<L: Lattice> Sub for &LatticePoint<L> {
    type Output = LatticePoint<L>;
    fn sub(self, rhs: Self) -> LatticePoint<L> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in subtraction");
        LatticePoint::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl<L: Lattice> Neg for &LatticePoint<L> {
    type Output = LatticePoint<L>;
    fn neg(self) -> LatticePoint<L> {
        LatticePoint::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// A point of `L ⊗ Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint<L> {
    coords: Vec<BigRational>,
    lattice: PhantomData<L>,
}

impl<L: Lattice> RationalPoint<L> {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint {
            coords,
            lattice: PhantomData,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticePoint<L>> {
        self.is_integral()
            .then(|| LatticePoint::new(self.coords.iter().map(|c| c.to_integer()).collect()))
    }

    /// Lcm of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// `⟨self, y⟩` for `y` in the dual lattice.
    pub fn pair(&self, y: &LatticePoint<L::Dual>) -> Result<BigRational> {
        check_dims(self.dim(), y.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(y.coords())
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum())
    }
}

impl<L: Lattice> fmt::Debug for RationalPoint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", L::NAME, self)
    }
}

impl<L> fmt::Display for RationalPoint<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The pairing `⟨x, y⟩ = Σ xᵢ yᵢ` between a lattice and its dual.
pub fn pairing<L: Lattice>(x: &LatticePoint<L>, y: &LatticePoint<L::Dual>) -> Result<BigInt> {
    check_dims(x.dim(), y.dim())?;
    Ok(x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive<L: Lattice>(v: &LatticePoint<L>) -> Result<LatticePoint<L>> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticePoint::new(v.coords.iter().map(|c| c / &g).collect()))
}

/// The affine hyperplane `{x ∈ L ⊗ Q : ⟨x, normal⟩ = offset}` with a primitive
/// normal in the dual lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane<L: Lattice> {
    normal: LatticePoint<L::Dual>,
    offset: BigInt,
}

impl<L: Lattice> Hyperplane<L> {
    pub fn new(normal: LatticePoint<L::Dual>, offset: BigInt) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !normal.is_primitive() {
            return Err(Error::NonPrimitiveNormal(normal.to_string()));
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn normal(&self) -> &LatticePoint<L::Dual> {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `⟨p, normal⟩ − offset`.
    pub fn evaluate(&self, p: &LatticePoint<L>) -> Result<BigInt> {
        Ok(pairing(p, &self.normal)? - &self.offset)
    }

    pub fn contains(&self, p: &LatticePoint<L>) -> Result<bool> {
        Ok(self.evaluate(p)?.is_zero())
    }

    /// `|offset − ⟨p, normal⟩|`.
    pub fn integral_distance(&self, p: &LatticePoint<L>) -> Result<BigInt> {
        Ok(self.evaluate(p)?.abs())
    }
}

/// Integral distance between a primitive hyperplane and a lattice point.
pub fn integral_distance<L: Lattice>(h: &Hyperplane<L>, p: &LatticePoint<L>) -> Result<BigInt> {
    h.integral_distance(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(c: &[i64]) -> MPoint {
        MPoint::from_i64s(c)
    }

    fn n(c: &[i64]) -> NPoint {
        NPoint::from_i64s(c)
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&m(&[1, 0, 0, 0]), &n(&[1, 0, 0, 0])).unwrap(), 1.into());
        assert_eq!(pairing(&m(&[0, 0, 0, 0]), &n(&[3, -7, 2, 9])).unwrap(), 0.into());
        // 1 + 1 + 1 + 2
        assert_eq!(pairing(&m(&[1, 1, 1, -1]), &n(&[1, 1, 1, -2])).unwrap(), 5.into());
    }

    #[test]
    fn pairing_dimension_mismatch() {
        assert_eq!(
            pairing(&m(&[1, 0]), &n(&[1, 0, 0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&n(&[2, 4, 0, 0])).unwrap(), n(&[1, 2, 0, 0]));
        assert_eq!(primitive(&n(&[1, 1, 1, -2])).unwrap(), n(&[1, 1, 1, -2]));
        assert_eq!(primitive(&n(&[-3, -6, -9, 0])).unwrap(), n(&[-1, -2, -3, 0]));
        assert_eq!(primitive(&n(&[0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn integral_distance_examples() {
        let h = Hyperplane::<M>::new(n(&[1, 0]), 1.into()).unwrap();
        assert_eq!(h.integral_distance(&m(&[0, 0])).unwrap(), 1.into());
        let h = Hyperplane::<M>::new(n(&[1, 1]), 2.into()).unwrap();
        assert_eq!(integral_distance(&h, &m(&[0, 0])).unwrap(), 2.into());
        let h = Hyperplane::<M>::new(n(&[1, 1, 1, -2]), (-1).into()).unwrap();
        assert_eq!(h.integral_distance(&MPoint::zero(4)).unwrap(), 1.into());
    }

    #[test]
    fn non_primitive_hyperplane_rejected() {
        assert!(matches!(
            Hyperplane::<M>::new(n(&[2, 2]), 2.into()),
            Err(Error::NonPrimitiveNormal(_))
        ));
        assert_eq!(
            Hyperplane::<M>::new(n(&[0, 0]), 1.into()),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn rational_point_integrality() {
        let p = RationalPoint::<N>::new(vec![
            BigRational::new(4.into(), 2.into()),
            BigRational::from_integer((-1).into()),
        ]);
        assert_eq!(p.to_lattice(), Some(n(&[2, -1])));
        let q = RationalPoint::<N>::new(vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(q.to_lattice(), None);
        assert_eq!(q.denominator(), 2.into());
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-20i64..=20, dim)
    }

    proptest! {
        #[test]
        fn pairing_is_bilinear(x in small_vec(4), x2 in small_vec(4), y in small_vec(4), y2 in small_vec(4)) {
            let (x, x2, y, y2) = (m(&x), m(&x2), n(&y), n(&y2));
            let lhs = pairing(&(&x + &x2), &y).unwrap();
            prop_assert_eq!(lhs, pairing(&x, &y).unwrap() + pairing(&x2, &y).unwrap());
            let rhs = pairing(&x, &(&y + &y2)).unwrap();
            prop_assert_eq!(rhs, pairing(&x, &y).unwrap() + pairing(&x, &y2).unwrap());
        }

        #[test]
        fn primitive_is_idempotent(v in small_vec(4)) {
            let v = n(&v);
            prop_assume!(!v.is_zero());
            let p = primitive(&v).unwrap();
            prop_assert!(p.is_primitive());
            prop_assert_eq!(primitive(&p).unwrap(), p.clone());
            // same direction: v = content * p
            prop_assert_eq!(p.scale(&v.content()), v);
        }

        #[test]
        fn distance_zero_iff_on_hyperplane(normal in small_vec(3), c in -10i64..=10, p in small_vec(3)) {
            let normal = n(&normal);
            prop_assume!(!normal.is_zero());
            let h = Hyperplane::<M>::new(primitive(&normal).unwrap(), c.into()).unwrap();
            let p = m(&p);
            prop_assert_eq!(h.integral_distance(&p).unwrap().is_zero(), h.contains(&p).unwrap());
        }
    }
}
