//! Integer lattices with an explicit Gram matrix: exact pairings, invariants,
//! saturation of sublattices, divisibility, reflections, and the brute-force
//! box enumeration that the oracle and the searches share.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix;
use crate::scalar::{is_even, scalar, Scalar};

/// Coordinate vector in the distinguished basis of an [`IntegerLattice`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatVec<T>(Vec<T>);

impl<T: Scalar> LatVec<T> {
    pub fn new(coords: Vec<T>) -> Self {
        LatVec(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatVec(vec![T::zero(); rank])
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(coords: &[i64]) -> Self {
        LatVec(coords.iter().map(|&c| scalar(c)).collect())
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Gcd of the coordinates; zero for the zero vector.
    pub fn content(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scaled(&self, k: &T) -> Self {
        LatVec(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }
}

impl<T: Scalar> fmt::Display for LatVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<T: Scalar> Add for &LatVec<T> {
    type Output = LatVec<T>;
    fn add(self, rhs: Self) -> LatVec<T> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        LatVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Sub for &LatVec<T> {
    type Output = LatVec<T>;
    fn sub(self, rhs: Self) -> LatVec<T> {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        LatVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }
}

impl<T: Scalar> Neg for &LatVec<T> {
    type Output = LatVec<T>;
    fn neg(self) -> LatVec<T> {
        LatVec(self.0.iter().map(|a| -a.clone()).collect())
    }
}

/// Exact invariants of the bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants<T> {
    pub det: T,
    /// Inertia counts (positive, negative, zero).
    pub signature: (usize, usize, usize),
    /// All diagonal entries even, i.e. x^2 even for every x.
    pub even: bool,
    /// Signature equals (1, rank-1, 0).
    pub hyperbolic: bool,
}

/// Saturation (primitive closure) of a span of lattice vectors.
///
/// `basis` is the row Hermite form of the closure, so equal sublattices
/// compare equal. `index` is the index of the generated subgroup inside the
/// closure, and `det` the determinant of the restricted Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice<T> {
    pub basis: Vec<LatVec<T>>,
    pub gram_restricted: Vec<Vec<T>>,
    pub det: T,
    pub index: T,
}

impl<T> Sublattice<T> {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// A lattice of finite rank given by a symmetric integer Gram matrix.
///
/// Degenerate or indefinite forms are accepted here; the criterion layer
/// decides which inputs are geometrically meaningful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice<T> {
    rank: usize,
    gram: Vec<Vec<T>>,
}

impl<T: Scalar> IntegerLattice<T> {
    pub fn new(gram: Vec<Vec<T>>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::EmptyGram);
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::NotSquare {
                    rows: rank,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(IntegerLattice { rank, gram })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| scalar(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<T>] {
        &self.gram
    }

    fn check_dim(&self, x: &LatVec<T>) -> Result<()> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// gram * x, i.e. the linear form y -> x.y in the dual basis.
    pub(crate) fn form_apply(&self, x: &[T]) -> Vec<T> {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (g, c)| acc + g.clone() * c.clone())
            })
            .collect()
    }

    pub(crate) fn pair_raw(&self, x: &[T], y: &[T]) -> T {
        let gy = self.form_apply(y);
        x.iter()
            .zip(&gy)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn pair(&self, x: &LatVec<T>, y: &LatVec<T>) -> Result<T> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.pair_raw(x.coords(), y.coords()))
    }

    pub fn norm(&self, x: &LatVec<T>) -> Result<T> {
        self.pair(x, x)
    }

    pub fn invariants(&self) -> Invariants<T> {
        let det = matrix::det_bareiss(&self.gram);
        let signature = matrix::signature_rational(&self.gram);
        let even = (0..self.rank).all(|i| is_even(&self.gram[i][i]));
        let hyperbolic = signature == (1, self.rank - 1, 0);
        Invariants {
            det,
            signature,
            even,
            hyperbolic,
        }
    }

    /// Positive generator of the ideal x.L inside Z (zero only when x pairs
    /// to zero with everything, which needs a degenerate form).
    pub fn divisibility(&self, x: &LatVec<T>) -> Result<T> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self
            .form_apply(x.coords())
            .iter()
            .fold(T::zero(), |acc, e| acc.gcd(e)))
    }

    pub fn is_primitive(&self, x: &LatVec<T>) -> Result<bool> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(x.content().is_one())
    }

    /// Saturation of the span of `gens`: smallest sublattice containing the
    /// span with torsion-free quotient.
    pub fn saturate(&self, gens: &[LatVec<T>]) -> Result<Sublattice<T>> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in gens {
            self.check_dim(g)?;
        }
        if gens.iter().all(LatVec::is_zero) {
            return Err(Error::AllGeneratorsZero);
        }
        let a: Vec<Vec<T>> = gens.iter().map(|g| g.coords().to_vec()).collect();
        let d = matrix::diagonalize(a);
        let basis_rows = matrix::row_hnf(d.qinv[..d.rank].to_vec());
        let index = d
            .diag
            .iter()
            .fold(T::one(), |acc, x| acc * x.abs());
        let gram_restricted: Vec<Vec<T>> = basis_rows
            .iter()
            .map(|bi| basis_rows.iter().map(|bj| self.pair_raw(bi, bj)).collect())
            .collect();
        let det = matrix::det_bareiss(&gram_restricted);
        Ok(Sublattice {
            basis: basis_rows.into_iter().map(LatVec).collect(),
            gram_restricted,
            det,
            index,
        })
    }

    /// All vectors with every coordinate in [-bound, bound], optionally
    /// filtered to a fixed norm, in ascending lexicographic order.
    pub fn enumerate_box(&self, bound: u32, norm_target: Option<&T>) -> Vec<LatVec<T>> {
        let mut out = Vec::new();
        scan_box(self.rank, bound, |c: &[T]| {
            if norm_target.is_none_or(|t| &self.pair_raw(c, c) == t) {
                out.push(LatVec(c.to_vec()));
            }
            true
        });
        out
    }

    /// Reflection x -> x + (x.delta) delta in a (-2)-class delta.
    pub fn reflect(&self, x: &LatVec<T>, delta: &LatVec<T>) -> Result<LatVec<T>> {
        self.check_dim(x)?;
        let n = self.norm(delta)?;
        if n != scalar(-2) {
            return Err(Error::RootNormNotMinusTwo {
                norm: n.to_string(),
            });
        }
        let p = self.pair_raw(x.coords(), delta.coords());
        Ok(x + &delta.scaled(&p))
    }
}

/// Visit every coordinate vector of the given rank with entries in
/// [-bound, bound], in ascending lexicographic order. The visitor returns
/// false to stop early.
pub(crate) fn scan_box<T: Scalar>(rank: usize, bound: u32, mut visit: impl FnMut(&[T]) -> bool) {
    let hi: T = scalar(i64::from(bound));
    let lo = -hi.clone();
    let mut cur: Vec<T> = vec![lo.clone(); rank];
    loop {
        if !visit(&cur) {
            return;
        }
        let mut i = rank;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] == hi {
                cur[i] = lo.clone();
            } else {
                cur[i] = cur[i].clone() + T::one();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Int, Lattice, Vector};
    use proptest::prelude::*;

    fn l2(g: [[i64; 2]; 2]) -> IntegerLattice<i64> {
        IntegerLattice::from_ints(&[&g[0], &g[1]]).unwrap()
    }

    fn v(c: &[i64]) -> LatVec<i64> {
        LatVec::from_ints(c)
    }

    #[test]
    fn construction_rejects_bad_gram() {
        assert!(matches!(
            IntegerLattice::<i64>::new(vec![]),
            Err(Error::EmptyGram)
        ));
        assert!(matches!(
            IntegerLattice::<i64>::from_ints(&[&[1, 2]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            IntegerLattice::<i64>::from_ints(&[&[8, 1], &[2, -2]]),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn pairings() {
        let l = l2([[8, 1], [1, -2]]);
        assert_eq!(l.pair(&v(&[1, 0]), &v(&[1, 2])).unwrap(), 10);
        assert_eq!(l.pair(&v(&[1, 0]), &v(&[0, 0])).unwrap(), 0);
        assert_eq!(l.norm(&v(&[1, 2])).unwrap(), 4);
        let l = l2([[8, 1], [1, -4]]);
        assert_eq!(l.norm(&v(&[1, 2])).unwrap(), -4);
        let l8 = IntegerLattice::<i64>::from_ints(&[&[8]]).unwrap();
        assert_eq!(l8.pair(&v(&[1]), &v(&[1])).unwrap(), 8);
        assert!(matches!(
            l8.pair(&v(&[1, 0]), &v(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invariants_fixtures() {
        let i = l2([[8, 1], [1, -2]]).invariants();
        assert_eq!(i.det, -17);
        assert_eq!(i.signature, (1, 1, 0));
        assert!(i.even && i.hyperbolic);

        let i = IntegerLattice::<i64>::from_ints(&[&[8]]).unwrap().invariants();
        assert_eq!(i.det, 8);
        assert_eq!(i.signature, (1, 0, 0));
        assert!(i.even && i.hyperbolic);

        let i = l2([[8, 1], [1, -4]]).invariants();
        assert_eq!(i.det, -33);
        assert_eq!(i.signature, (1, 1, 0));

        let i = l2([[8, 2], [2, 4]]).invariants();
        assert_eq!(i.det, 28);
        assert_eq!(i.signature, (2, 0, 0));
        assert!(!i.hyperbolic);

        let i = l2([[8, 1], [1, -2]]);
        assert!(!IntegerLattice::<i64>::from_ints(&[&[8, 1], &[1, -3]])
            .unwrap()
            .invariants()
            .even);
        drop(i);
    }

    #[test]
    fn divisibility_fixtures() {
        assert_eq!(l2([[8, 1], [1, -2]]).divisibility(&v(&[1, 0])).unwrap(), 1);
        let l8 = IntegerLattice::<i64>::from_ints(&[&[8]]).unwrap();
        assert_eq!(l8.divisibility(&v(&[1])).unwrap(), 8);
        assert_eq!(l2([[8, 2], [2, 4]]).divisibility(&v(&[1, 0])).unwrap(), 2);
        assert!(matches!(
            l2([[8, 2], [2, 4]]).divisibility(&v(&[0, 0])),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn primitivity() {
        let l = l2([[8, 1], [1, -2]]);
        assert!(!l.is_primitive(&v(&[2, 0])).unwrap());
        assert!(l.is_primitive(&v(&[1, 2])).unwrap());
        assert!(!l.is_primitive(&v(&[3, 6])).unwrap());
        assert!(matches!(
            l.is_primitive(&v(&[0, 0])),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn saturation_fixtures() {
        let l = l2([[8, 1], [1, -2]]);
        let s = l.saturate(&[v(&[1, 0]), v(&[1, 2])]).unwrap();
        assert_eq!(s.basis, vec![v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(s.det, -17);
        assert_eq!(s.index, 2);
        // determinant of the generator span checks det * index^2
        let span_gram = vec![vec![8, 10], vec![10, 4]];
        assert_eq!(crate::matrix::det_bareiss(&span_gram), -68);
        assert_eq!(-68, s.det * s.index * s.index);

        let l8 = IntegerLattice::<i64>::from_ints(&[&[8]]).unwrap();
        let s = l8.saturate(&[v(&[1])]).unwrap();
        assert_eq!(s.det, 8);
        assert_eq!(s.index, 1);
        assert_eq!(s.rank(), 1);

        let l = l2([[8, 1], [1, -4]]);
        let s = l.saturate(&[v(&[1, 0]), v(&[1, 2])]).unwrap();
        assert_eq!(s.det, -33);
        assert_eq!(s.index, 2);

        // presentation independence
        let l = l2([[8, 1], [1, -2]]);
        let a = l.saturate(&[v(&[1, 0]), v(&[1, 2])]).unwrap();
        let b = l.saturate(&[v(&[1, 2]), v(&[1, 0])]).unwrap();
        let c = l
            .saturate(&[v(&[1, 0]), v(&[1, 2]), v(&[2, 2]), v(&[0, 0])])
            .unwrap();
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.basis, c.basis);

        assert!(matches!(l.saturate(&[]), Err(Error::EmptyGenerators)));
        assert!(matches!(
            l.saturate(&[v(&[0, 0])]),
            Err(Error::AllGeneratorsZero)
        ));
    }

    #[test]
    fn box_enumeration() {
        let l8 = IntegerLattice::<i64>::from_ints(&[&[8]]).unwrap();
        assert!(l8.enumerate_box(5, Some(&4)).is_empty());
        assert!(l8.enumerate_box(5, Some(&-4)).is_empty());

        let l = l2([[8, 1], [1, -2]]);
        let hits = l.enumerate_box(3, Some(&4));
        assert!(hits.contains(&v(&[1, 2])));
        assert!(hits.contains(&v(&[-1, -2])));
        let mut sorted = hits.clone();
        sorted.sort();
        assert_eq!(hits, sorted);

        assert_eq!(l.enumerate_box(0, None), vec![v(&[0, 0])]);
        assert_eq!(l.enumerate_box(0, Some(&0)), vec![v(&[0, 0])]);
        assert!(l.enumerate_box(0, Some(&5)).is_empty());
    }

    #[test]
    fn reflections() {
        let l = l2([[8, 1], [1, -2]]);
        let delta = v(&[0, 1]);
        assert_eq!(l.reflect(&delta, &delta).unwrap(), v(&[0, -1]));
        assert_eq!(l.reflect(&v(&[1, 0]), &delta).unwrap(), v(&[1, 1]));
        assert_eq!(l.norm(&v(&[1, 1])).unwrap(), 8);
        // (2,1) pairs to zero with delta, hence is fixed
        assert_eq!(l.pair(&v(&[2, 1]), &delta).unwrap(), 0);
        assert_eq!(l.reflect(&v(&[2, 1]), &delta).unwrap(), v(&[2, 1]));
        assert!(matches!(
            l.reflect(&v(&[1, 0]), &v(&[1, 0])),
            Err(Error::RootNormNotMinusTwo { .. })
        ));
    }

    #[test]
    fn bigint_alias_smoke() {
        let l: Lattice = Lattice::from_ints(&[&[8, 1], &[1, -2]]).unwrap();
        let h: Vector = Vector::from_ints(&[1, 0]);
        assert_eq!(l.norm(&h).unwrap(), Int::from(8));
        let s = l.saturate(&[h.clone(), Vector::from_ints(&[1, 2])]).unwrap();
        assert_eq!(s.index, Int::from(2));
        assert_eq!(s.det, Int::from(-17));
        assert_eq!(h.to_string(), "(1, 0)");
    }

    fn even_gram(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-10i64..=10, rank), rank).prop_map(
            move |m| {
                let mut g = vec![vec![0i64; rank]; rank];
                for i in 0..rank {
                    for j in 0..=i {
                        if i == j {
                            g[i][i] = 2 * m[i][i];
                        } else {
                            g[i][j] = m[i][j];
                            g[j][i] = m[i][j];
                        }
                    }
                }
                g
            },
        )
    }

    fn gens_strategy(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, rank), 1..=rank)
    }

    proptest! {
        #[test]
        fn saturation_properties(
            (gram, gens) in (2usize..=4)
                .prop_flat_map(|r| (even_gram(r), gens_strategy(r)))
        ) {
            prop_assume!(gens.iter().any(|g| g.iter().any(|&c| c != 0)));
            let l: Lattice = Lattice::new(
                gram.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
            ).unwrap();
            let gvecs: Vec<Vector> = gens.iter().map(|g| Vector::from_ints(g)).collect();
            let s = l.saturate(&gvecs).unwrap();

            // idempotence, and the closure of a saturated lattice has index 1
            let s2 = l.saturate(&s.basis).unwrap();
            prop_assert_eq!(&s2.basis, &s.basis);
            prop_assert_eq!(s2.index, Int::from(1));
            prop_assert_eq!(&s2.det, &s.det);

            // det(span gram) = det * index^2 whenever the generators are
            // independent
            if gvecs.len() == s.rank() {
                let span_gram: Vec<Vec<Int>> = gvecs.iter()
                    .map(|a| gvecs.iter().map(|b| l.pair(a, b).unwrap()).collect())
                    .collect();
                let span_det = crate::matrix::det_bareiss(&span_gram);
                if !span_det.is_zero() {
                    prop_assert_eq!(span_det, &s.det * (&s.index * &s.index));
                }
            }
        }

        #[test]
        fn reflect_is_an_isometric_involution(
            e in -6i64..=6,
            x in proptest::collection::vec(-15i64..=15, 2),
            y in proptest::collection::vec(-15i64..=15, 2),
        ) {
            // (0,1) has norm -2 in every member of this family
            let l = IntegerLattice::<i64>::from_ints(&[&[8, e], &[e, -2]]).unwrap();
            let delta = v(&[0, 1]);
            let x = v(&x);
            let y = v(&y);
            let rx = l.reflect(&x, &delta).unwrap();
            let ry = l.reflect(&y, &delta).unwrap();
            prop_assert_eq!(l.norm(&rx).unwrap(), l.norm(&x).unwrap());
            prop_assert_eq!(l.pair(&rx, &ry).unwrap(), l.pair(&x, &y).unwrap());
            prop_assert_eq!(l.reflect(&rx, &delta).unwrap(), x);
        }

        #[test]
        fn divisibility_divides_norm_and_pairings(
            gram in even_gram(3),
            x in proptest::collection::vec(-9i64..=9, 3),
            y in proptest::collection::vec(-9i64..=9, 3),
        ) {
            prop_assume!(x.iter().any(|&c| c != 0));
            let l = IntegerLattice::<i64>::new(gram).unwrap();
            let xv = v(&x);
            let d = l.divisibility(&xv).unwrap();
            prop_assume!(d != 0);
            prop_assert_eq!(l.norm(&xv).unwrap() % d, 0);
            prop_assert_eq!(l.pair(&xv, &v(&y)).unwrap() % d, 0);
        }

        #[test]
        fn box_is_negation_symmetric(
            gram in even_gram(2),
            target in proptest::option::of(-6i64..=6),
        ) {
            let l = IntegerLattice::<i64>::new(gram).unwrap();
            let out = l.enumerate_box(2, target.as_ref());
            for w in &out {
                prop_assert!(out.contains(&-w));
            }
        }
    }
}
