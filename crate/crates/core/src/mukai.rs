//! Mukai vectors (r, c1, s) over a fixed Picard lattice, the operations the
//! isomorphism chain is built from, and the chain itself.
//!
//! The pairing is c1.c1' - r s' - r' s, so (2, H, 2) is isotropic exactly
//! when H^2 = 8. Twisting by a class D is the Mukai product with
//! (1, D, D^2/2); swapping r and s is the identification M(r,c,s) = M(s,c,r).

use std::fmt;


use crate::chambers::{EffectivityCert, EffectivityStatus};
use crate::error::{Error, Result};
use crate::lattice::{IntegerLattice, LatVec};
use crate::scalar::{is_even, scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVec<T> {
    pub r: T,
    pub c1: LatVec<T>,
    pub s: T,
}

impl<T: Scalar> MukaiVec<T> {
    pub fn new(r: T, c1: LatVec<T>, s: T) -> Self {
        MukaiVec { r, c1, s }
    }

    pub fn from_ints(r: i64, c1: &[i64], s: i64) -> Self {
        MukaiVec {
            r: scalar(r),
            c1: LatVec::from_ints(c1),
            s: scalar(s),
        }
    }
}

impl<T: Scalar> fmt::Display for MukaiVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c1, self.s)
    }
}

pub fn mukai_pair<T: Scalar>(
    l: &IntegerLattice<T>,
    v: &MukaiVec<T>,
    w: &MukaiVec<T>,
) -> Result<T> {
    let cc = l.pair(&v.c1, &w.c1)?;
    Ok(cc - v.r.clone() * w.s.clone() - w.r.clone() * v.s.clone())
}

pub fn is_isotropic<T: Scalar>(l: &IntegerLattice<T>, v: &MukaiVec<T>) -> Result<bool> {
    Ok(mukai_pair(l, v, v)?.is_zero())
}

pub fn euler_characteristic<T: Scalar>(v: &MukaiVec<T>) -> T {
    v.r.clone() + v.s.clone()
}

/// Tensor by the line bundle of class d: (r, c1, s) becomes
/// (r, c1 + r d, s + c1.d + r d^2/2). Needs d^2 even.
pub fn twist<T: Scalar>(
    l: &IntegerLattice<T>,
    v: &MukaiVec<T>,
    d: &LatVec<T>,
) -> Result<MukaiVec<T>> {
    let nd = l.norm(d)?;
    if !is_even(&nd) {
        return Err(Error::OddNormTwist {
            norm: nd.to_string(),
        });
    }
    let half_nd = nd / scalar(2);
    let c1d = l.pair(&v.c1, d)?;
    Ok(MukaiVec {
        r: v.r.clone(),
        c1: &v.c1 + &d.scaled(&v.r),
        s: v.s.clone() + c1d + v.r.clone() * half_nd,
    })
}

pub fn swap_rank<T: Scalar>(v: &MukaiVec<T>) -> MukaiVec<T> {
    MukaiVec {
        r: v.s.clone(),
        c1: v.c1.clone(),
        s: v.r.clone(),
    }
}

/// Euler characteristic of a line bundle with class h on a K3: 2 + h^2/2.
pub fn chi_line_bundle<T: Scalar>(l: &IntegerLattice<T>, h: &LatVec<T>) -> Result<T> {
    let n = l.norm(h)?;
    if !is_even(&n) {
        return Err(Error::OddNormChi { norm: n.to_string() });
    }
    Ok(scalar::<T>(2) + n / scalar(2))
}

/// Certificate bundle carried by the extension-construction step of the
/// h1^2 = -4 chain. The underlying rank-2 bundle is not computable from
/// lattice data; these are exactly the hypotheses needed to build it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinusCertificates<T> {
    /// H.D, must be odd and > -4.
    pub pairing_h_d: T,
    /// chi of the line bundle h1 = H + 2D, must vanish.
    pub chi_h1: T,
    /// Non-pseudo-effectivity verdict for +-h1.
    pub effectivity: Option<EffectivityCert<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep<T> {
    Start(MukaiVec<T>),
    Twist {
        d: LatVec<T>,
        result: MukaiVec<T>,
    },
    RankSwap {
        result: MukaiVec<T>,
    },
    ExtensionConstruction {
        d: LatVec<T>,
        certificates: MinusCertificates<T>,
    },
    EndX,
}

/// Ordered symbolic record of moduli identifications ending in "= X".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoChain<T> {
    pub steps: Vec<ChainStep<T>>,
}

impl<T: Scalar> IsoChain<T> {
    /// Mukai vectors carried by the steps, in order.
    pub fn mukai_vectors(&self) -> Vec<&MukaiVec<T>> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ChainStep::Start(v) => Some(v),
                ChainStep::Twist { result, .. } => Some(result),
                ChainStep::RankSwap { result } => Some(result),
                _ => None,
            })
            .collect()
    }

    /// Last Mukai vector before EndX, when the chain carries one.
    pub fn endpoint(&self) -> Option<&MukaiVec<T>> {
        self.mukai_vectors().into_iter().next_back()
    }

    /// Recompute every step from its predecessor and recheck isotropy and
    /// certificates. `Ok` means the chain is internally consistent.
    pub fn verify(&self, l: &IntegerLattice<T>) -> Result<()> {
        let bad = |step: usize, reason: &'static str| Error::ChainStep { step, reason };
        let Some(ChainStep::Start(first)) = self.steps.first() else {
            return Err(bad(0, "chain must begin with Start"));
        };
        if !is_isotropic(l, first)? {
            return Err(bad(0, "start vector is not isotropic"));
        }
        let mut cur = first;
        let mut via_extension = false;
        let last = self.steps.len() - 1;
        for (i, step) in self.steps.iter().enumerate().skip(1) {
            match step {
                ChainStep::Start(_) => return Err(bad(i, "Start not at the head")),
                ChainStep::Twist { d, result } => {
                    if twist(l, cur, d)? != *result {
                        return Err(bad(i, "twist result mismatch"));
                    }
                    if !is_isotropic(l, result)? {
                        return Err(bad(i, "twist result is not isotropic"));
                    }
                    cur = result;
                }
                ChainStep::RankSwap { result } => {
                    if swap_rank(cur) != *result {
                        return Err(bad(i, "rank swap result mismatch"));
                    }
                    cur = result;
                }
                ChainStep::ExtensionConstruction { d, certificates } => {
                    let h1 = &cur.c1 + &d.scaled(&scalar(2));
                    check_minus_certificates(l, &cur.c1, d, &h1, certificates)?;
                    via_extension = true;
                }
                ChainStep::EndX => {
                    if i != last {
                        return Err(bad(i, "EndX before the end"));
                    }
                    if !via_extension && !cur.r.is_one() {
                        return Err(bad(i, "endpoint does not have rank 1"));
                    }
                }
            }
        }
        if !matches!(self.steps.last(), Some(ChainStep::EndX)) {
            return Err(bad(last, "chain must end with EndX"));
        }
        Ok(())
    }
}

fn check_minus_certificates<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    d: &LatVec<T>,
    h1: &LatVec<T>,
    certs: &MinusCertificates<T>,
) -> Result<()> {
    if l.norm(h1)? != scalar(-4) {
        return Err(Error::ChainNormMismatch {
            expected: -4,
            got: l.norm(h1)?.to_string(),
        });
    }
    if is_even(&certs.pairing_h_d) {
        return Err(Error::BadCertificate {
            which: "H.D parity (must be odd)",
        });
    }
    if certs.pairing_h_d != l.pair(h, d)? {
        return Err(Error::BadCertificate {
            which: "H.D value does not match the data",
        });
    }
    if certs.pairing_h_d <= scalar(-4) {
        return Err(Error::BadCertificate {
            which: "normalization H.D > -4",
        });
    }
    if !certs.chi_h1.is_zero() || chi_line_bundle(l, h1)? != certs.chi_h1 {
        return Err(Error::BadCertificate {
            which: "chi of h1 (must vanish)",
        });
    }
    let Some(eff) = &certs.effectivity else {
        return Err(Error::BadCertificate {
            which: "effectivity certificate missing",
        });
    };
    if eff.subject != *h1 {
        return Err(Error::BadCertificate {
            which: "effectivity certificate subject mismatch",
        });
    }
    if matches!(eff.status, EffectivityStatus::Inconclusive) {
        return Err(Error::BadCertificate {
            which: "effectivity certificate inconclusive",
        });
    }
    Ok(())
}

/// The h1^2 = 4 chain: M(2,H,2) = M(2,H+2D,1) = M(1,H+2D,2) = X.
pub fn build_chain_plus<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    d: &LatVec<T>,
) -> Result<IsoChain<T>> {
    let nh = l.norm(h)?;
    if nh != scalar(8) {
        return Err(Error::PolarizationNormNotEight {
            norm: nh.to_string(),
        });
    }
    let h1 = h + &d.scaled(&scalar(2));
    let n1 = l.norm(&h1)?;
    if n1 != scalar(4) {
        return Err(Error::ChainNormMismatch {
            expected: 4,
            got: n1.to_string(),
        });
    }
    let start = MukaiVec::new(scalar(2), h.clone(), scalar(2));
    let twisted = twist(l, &start, d)?;
    let swapped = swap_rank(&twisted);
    let chain = IsoChain {
        steps: vec![
            ChainStep::Start(start),
            ChainStep::Twist {
                d: d.clone(),
                result: twisted,
            },
            ChainStep::RankSwap { result: swapped },
            ChainStep::EndX,
        ],
    };
    chain.verify(l)?;
    Ok(chain)
}

/// The h1^2 = -4 chain: a single symbolic extension-construction step whose
/// hypotheses are all checked exactly.
pub fn build_chain_minus<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    d: &LatVec<T>,
    certificates: MinusCertificates<T>,
) -> Result<IsoChain<T>> {
    let nh = l.norm(h)?;
    if nh != scalar(8) {
        return Err(Error::PolarizationNormNotEight {
            norm: nh.to_string(),
        });
    }
    let h1 = h + &d.scaled(&scalar(2));
    check_minus_certificates(l, h, d, &h1, &certificates)?;
    let start = MukaiVec::new(scalar(2), h.clone(), scalar(2));
    let chain = IsoChain {
        steps: vec![
            ChainStep::Start(start),
            ChainStep::ExtensionConstruction {
                d: d.clone(),
                certificates,
            },
            ChainStep::EndX,
        ],
    };
    chain.verify(l)?;
    Ok(chain)
}
