//! Brute-force reimplementations of the witness searches, sharing no code
//! with the main path: pairings by explicit double loops, box enumeration by
//! recursion, and the closure divisibility computed from scratch by
//! enumerating candidate denominators of the saturation. Used to cross-check
//! the fast searches (see the `oracle` CLI subcommand).


use crate::criterion::SearchOptions;
use crate::error::Result;
use crate::lattice::{IntegerLattice, LatVec};
use crate::scalar::{is_even, scalar, Scalar};

fn naive_pair<T: Scalar>(l: &IntegerLattice<T>, x: &[T], y: &[T]) -> T {
    let mut acc = T::zero();
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            acc = acc + xi.clone() * l.gram()[i][j].clone() * yj.clone();
        }
    }
    acc
}

fn naive_box<T: Scalar>(rank: usize, bound: i64) -> Vec<Vec<T>> {
    fn rec<T: Scalar>(rank: usize, bound: i64, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == rank {
            out.push(cur.clone());
            return;
        }
        let mut c = -bound;
        while c <= bound {
            cur.push(scalar(c));
            rec(rank, bound, cur, out);
            cur.pop();
            c += 1;
        }
    }
    let mut out = Vec::new();
    rec(rank, bound, &mut Vec::new(), &mut out);
    out
}

/// Divisibility of h inside the saturation of Zh + Zh1, computed without any
/// matrix reduction: the index m of the span in its saturation satisfies
/// m^2 | |det Gram(h, h1)|, so enumerate denominators m and fractional
/// combinations (a h + b h1)/m with integral coordinates, and take the gcd of
/// h paired against everything found.
pub fn naive_closure_divisibility<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    h1: &LatVec<T>,
) -> Result<T> {
    let hh = naive_pair(l, h.coords(), h.coords());
    let hp = naive_pair(l, h.coords(), h1.coords());
    let nn = naive_pair(l, h1.coords(), h1.coords());
    let det = (hh.clone() * nn - hp.clone() * hp.clone()).abs();
    let mut g = hh.gcd(&hp);
    if det.is_zero() {
        // degenerate span (h1 proportional to h): only the line through h
        return Ok(g);
    }
    let mut m = T::one() + T::one();
    while m.clone() * m.clone() <= det {
        if det.is_multiple_of(&(m.clone() * m.clone())) {
            let mut a = T::zero();
            while a < m {
                let mut b = T::zero();
                while b < m {
                    if !(a.is_zero() && b.is_zero()) {
                        let integral = h
                            .coords()
                            .iter()
                            .zip(h1.coords())
                            .all(|(x, y)| {
                                (a.clone() * x.clone() + b.clone() * y.clone()).is_multiple_of(&m)
                            });
                        if integral {
                            let pairing =
                                (a.clone() * hh.clone() + b.clone() * hp.clone()) / m.clone();
                            g = g.gcd(&pairing);
                        }
                    }
                    b = b + T::one();
                }
                a = a + T::one();
            }
        }
        m = m + T::one();
    }
    Ok(g)
}

pub fn naive_search_h1<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
) -> Result<Vec<LatVec<T>>> {
    let four: T = scalar(4);
    let minus_four: T = scalar(-4);
    let mut out = Vec::new();
    for c in naive_box::<T>(l.rank(), i64::from(bound)) {
        let n = naive_pair(l, &c, &c);
        if n != four && n != minus_four {
            continue;
        }
        if !is_even(&naive_pair(l, h.coords(), &c)) {
            continue;
        }
        let h1 = LatVec::new(c);
        if naive_closure_divisibility(l, h, &h1)?.is_one() {
            out.push(h1);
        }
    }
    out.sort();
    Ok(out)
}

pub fn naive_search_d<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
) -> Result<Vec<LatVec<T>>> {
    let minus_one: T = scalar(-1);
    let minus_three: T = scalar(-3);
    let two: T = scalar(2);
    let mut out = Vec::new();
    for c in naive_box::<T>(l.rank(), i64::from(bound)) {
        let quad = naive_pair(l, &c, &c) + naive_pair(l, h.coords(), &c);
        if quad != minus_one && quad != minus_three {
            continue;
        }
        let h1 = LatVec::new(
            h.coords()
                .iter()
                .zip(&c)
                .map(|(a, b)| a.clone() + two.clone() * b.clone())
                .collect(),
        );
        if naive_closure_divisibility(l, h, &h1)?.is_one() {
            out.push(LatVec::new(c));
        }
    }
    out.sort();
    Ok(out)
}

/// Outcome of running a fast search against its oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport<T> {
    pub checked: usize,
    pub missing_in_fast: Vec<LatVec<T>>,
    pub extra_in_fast: Vec<LatVec<T>>,
}

impl<T> OracleReport<T> {
    pub fn matches(&self) -> bool {
        self.missing_in_fast.is_empty() && self.extra_in_fast.is_empty()
    }
}

fn diff<T: Scalar>(fast: Vec<LatVec<T>>, slow: Vec<LatVec<T>>) -> OracleReport<T> {
    let checked = slow.len();
    let missing_in_fast = slow.iter().filter(|v| !fast.contains(v)).cloned().collect();
    let extra_in_fast = fast.iter().filter(|v| !slow.contains(v)).cloned().collect();
    OracleReport {
        checked,
        missing_in_fast,
        extra_in_fast,
    }
}

/// Run `search_h1` (with the given options) against the strict oracle.
pub fn compare_h1<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
    opts: &SearchOptions,
) -> Result<OracleReport<T>> {
    let fast = crate::criterion::search_h1(l, h, bound, opts)?;
    let slow = naive_search_h1(l, h, bound)?;
    Ok(diff(fast, slow))
}

/// Run `search_d` (with the given options) against the strict oracle.
pub fn compare_d<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
    opts: &SearchOptions,
) -> Result<OracleReport<T>> {
    let fast = crate::criterion::search_d(l, h, bound, opts)?;
    let slow = naive_search_d(l, h, bound)?;
    Ok(diff(fast, slow))
}
