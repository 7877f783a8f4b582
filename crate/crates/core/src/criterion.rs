//! The decision procedure: validate the input, search for witnesses D / h1,
//! check the arithmetic conditions, certify the norm -4 case, and assemble
//! the verdict with its isomorphism chain.
//!
//! A witness is a class h1 = H + 2D with h1^2 = +-4, H.h1 even, and H of
//! divisibility 1 inside the saturation of [H, h1] (equivalently: that
//! saturation has odd determinant). The +4 case yields a twist/swap chain;
//! the -4 case needs the extension certificates, including a bounded
//! non-pseudo-effectivity certificate for +-h1.

use std::cmp::Ordering;


use crate::chambers::{
    minus_two_classes, negate_subject, not_pseudo_effective_with_walls, orbit_search,
};
use crate::error::{Error, Result};
use crate::lattice::{scan_box, IntegerLattice, LatVec, Sublattice};
use crate::mukai::{
    build_chain_minus, build_chain_plus, chi_line_bundle, IsoChain, MinusCertificates,
};
use crate::scalar::{is_even, scalar, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Plus4,
    Minus4,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseTag::Plus4 => "+4",
            CaseTag::Minus4 => "-4",
        })
    }
}

/// Structural checks on (L, H). Nefness of H cannot be decided from the Gram
/// matrix; it is taken as an assertion, cross-checked by a bounded root scan
/// (roots orthogonal to H are reported as walls containing H; an effectively
/// oriented root can never pair negatively with the orientation reference,
/// so `nef_violations` stays empty unless the scan itself is changed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<T> {
    pub even: bool,
    pub nondegenerate: bool,
    pub hyperbolic: bool,
    pub signature: (usize, usize, usize),
    pub det: T,
    pub h_primitive: bool,
    pub h_norm: T,
    pub nef_asserted: bool,
    pub nef_scan_bound: u32,
    pub nef_violations: Vec<LatVec<T>>,
    pub walls_containing_h: Vec<LatVec<T>>,
}

impl<T: Scalar> ValidationReport<T> {
    pub fn h_norm_is_eight(&self) -> bool {
        self.h_norm == scalar(8)
    }

    pub fn passed(&self) -> bool {
        self.even
            && self.nondegenerate
            && self.hyperbolic
            && self.h_primitive
            && self.h_norm_is_eight()
            && self.nef_asserted
            && self.nef_violations.is_empty()
    }

    /// Human-readable reasons for a failed validation.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.even {
            out.push("the Gram matrix has an odd diagonal entry".into());
        }
        if !self.nondegenerate {
            out.push("the Gram matrix is degenerate".into());
        }
        if !self.hyperbolic {
            out.push(format!(
                "signature is ({}, {}, {}), not (1, rank-1, 0)",
                self.signature.0, self.signature.1, self.signature.2
            ));
        }
        if !self.h_primitive {
            out.push("H is not primitive".into());
        }
        if !self.h_norm_is_eight() {
            out.push(format!("H^2 = {}, expected 8", self.h_norm));
        }
        if !self.nef_asserted {
            out.push("nefness of H was not asserted".into());
        }
        for v in &self.nef_violations {
            out.push(format!("root {v} pairs negatively with H"));
        }
        out
    }
}

pub fn validate_input<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    nef_asserted: bool,
    nef_scan_bound: u32,
) -> Result<ValidationReport<T>> {
    let inv = l.invariants();
    let h_primitive = l.is_primitive(h)?;
    let h_norm = l.norm(h)?;
    let mut nef_violations = Vec::new();
    let mut walls_containing_h = Vec::new();
    if inv.even && inv.hyperbolic {
        let walls = minus_two_classes(l, h, nef_scan_bound)?;
        for root in walls.roots {
            if root.ambiguous {
                walls_containing_h.push(root.delta);
            } else if l.pair(h, &root.delta)?.is_negative() {
                nef_violations.push(root.delta);
            }
        }
    }
    Ok(ValidationReport {
        even: inv.even,
        nondegenerate: !inv.det.is_zero(),
        hyperbolic: inv.hyperbolic,
        signature: inv.signature,
        det: inv.det,
        h_primitive,
        h_norm,
        nef_asserted,
        nef_scan_bound,
        nef_violations,
        walls_containing_h,
    })
}

/// H.N(X) = Z, i.e. H has divisibility 1.
pub fn mukai_condition<T: Scalar>(l: &IntegerLattice<T>, h: &LatVec<T>) -> Result<bool> {
    Ok(l.divisibility(h)?.is_one())
}

/// Divisibility of h inside the saturation of the span of {h, x}: the gcd of
/// the pairings of h with a basis of that saturation.
pub(crate) fn closure_divisibility<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    closure: &Sublattice<T>,
) -> Result<T> {
    let mut g = T::zero();
    for b in &closure.basis {
        g = g.gcd(&l.pair(h, b)?);
    }
    Ok(g)
}

/// Per-condition report for a candidate h1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport<T> {
    pub h1: LatVec<T>,
    pub norm: T,
    pub case: Option<CaseTag>,
    pub pairing: T,
    pub pairing_even: bool,
    pub closure: Sublattice<T>,
    pub closure_det_odd: bool,
    pub divisibility_in_closure: T,
    pub divisibility_is_one: bool,
    /// The odd-determinant and divisibility-1 formulations are equivalent;
    /// both are computed independently and compared.
    pub equivalence_consistent: bool,
}

impl<T> ConditionReport<T> {
    pub fn passed(&self) -> bool {
        self.case.is_some() && self.pairing_even && self.divisibility_is_one
    }
}

pub fn check_h1<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    h1: &LatVec<T>,
) -> Result<ConditionReport<T>> {
    if h1.is_zero() {
        return Err(Error::ZeroVector);
    }
    let norm = l.norm(h1)?;
    let case = if norm == scalar(4) {
        Some(CaseTag::Plus4)
    } else if norm == scalar(-4) {
        Some(CaseTag::Minus4)
    } else {
        None
    };
    let pairing = l.pair(h, h1)?;
    let pairing_even = is_even(&pairing);
    let closure = l.saturate(&[h.clone(), h1.clone()])?;
    let closure_det_odd = !is_even(&closure.det);
    let divisibility_in_closure = closure_divisibility(l, h, &closure)?;
    let divisibility_is_one = divisibility_in_closure.is_one();
    Ok(ConditionReport {
        h1: h1.clone(),
        norm,
        case,
        pairing,
        pairing_even,
        closure,
        closure_det_odd,
        divisibility_in_closure,
        divisibility_is_one,
        equivalence_consistent: closure_det_odd == divisibility_is_one,
    })
}

/// Knobs for the searches. `check_pairing_parity` exists so the oracle can
/// demonstrate a diff when the parity condition is deliberately dropped; the
/// normal pipeline always leaves it on.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub check_pairing_parity: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            check_pairing_parity: true,
        }
    }
}

/// All D in the box with D^2 + H.D in {-1, -3} (i.e. (H+2D)^2 = +-4) whose
/// h1 = H + 2D passes the closure-divisibility condition, in lexicographic
/// order. The pairing parity of such h1 is automatic: H.h1 = 8 + 2 H.D.
pub fn search_d<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
    opts: &SearchOptions,
) -> Result<Vec<LatVec<T>>> {
    l.norm(h)?;
    let gh = l.form_apply(h.coords());
    let minus_one: T = scalar(-1);
    let minus_three: T = scalar(-3);
    let mut raw = Vec::new();
    scan_box::<T>(l.rank(), bound, |c| {
        let quad = l.pair_raw(c, c)
            + c.iter()
                .zip(&gh)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        if quad == minus_one || quad == minus_three {
            raw.push(LatVec::new(c.to_vec()));
        }
        true
    });
    let mut out = Vec::new();
    for d in raw {
        let h1 = h + &d.scaled(&scalar(2));
        let report = check_h1(l, h, &h1)?;
        if opts.check_pairing_parity && !report.pairing_even {
            continue;
        }
        if report.divisibility_is_one {
            out.push(d);
        }
    }
    Ok(out)
}

/// All h1 in the box passing every condition of [`check_h1`], in
/// lexicographic order.
pub fn search_h1<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
    opts: &SearchOptions,
) -> Result<Vec<LatVec<T>>> {
    l.norm(h)?;
    let four: T = scalar(4);
    let minus_four: T = scalar(-4);
    let mut raw = Vec::new();
    scan_box::<T>(l.rank(), bound, |c| {
        let n = l.pair_raw(c, c);
        if n == four || n == minus_four {
            raw.push(LatVec::new(c.to_vec()));
        }
        true
    });
    let mut out = Vec::new();
    for h1 in raw {
        let report = check_h1(l, h, &h1)?;
        if opts.check_pairing_parity && !report.pairing_even {
            continue;
        }
        if report.divisibility_is_one {
            out.push(h1);
        }
    }
    Ok(out)
}

/// D = (h1 - H)/2. When the conditions hold, h1 - H is divisible by 2
/// coordinatewise; an odd coordinate is a counterexample to that bridge and
/// is reported as a hard error.
pub fn lemma_bridge_to_d<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    h1: &LatVec<T>,
) -> Result<LatVec<T>> {
    l.pair(h, h1)?;
    let two: T = scalar(2);
    let diff = h1 - h;
    let mut coords = Vec::with_capacity(diff.len());
    for (i, c) in diff.coords().iter().enumerate() {
        if !is_even(c) {
            return Err(Error::BridgeOddCoordinate { index: i });
        }
        coords.push(c.clone() / two.clone());
    }
    Ok(LatVec::new(coords))
}

/// Normalize a -4-case D so that H.D > -4, replacing D by -H-D when needed
/// (this flips h1 = H+2D to -h1 and preserves D^2 + H.D = -3).
pub fn normalize_d<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    d: &LatVec<T>,
) -> Result<LatVec<T>> {
    let quad = l.norm(d)? + l.pair(h, d)?;
    if quad != scalar(-3) {
        return Err(Error::NormalizePrecondition {
            got: quad.to_string(),
        });
    }
    let minus_four: T = scalar(-4);
    if l.pair(h, d)? > minus_four {
        return Ok(d.clone());
    }
    let flipped = &(-h) - d;
    if l.pair(h, &flipped)? <= minus_four {
        // unreachable in an even lattice, where H.D is odd
        return Err(Error::NormalizePrecondition {
            got: l.pair(h, &flipped)?.to_string(),
        });
    }
    Ok(flipped)
}

/// det Gram(H, h1) = 8 h1^2 - (H.h1)^2, and it never vanishes: the identity
/// plus nonvanishing that forces every witness to span a rank-2 sublattice.
pub fn det_identity_check<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    h1: &LatVec<T>,
) -> Result<bool> {
    let hh = l.norm(h)?;
    let nn = l.norm(h1)?;
    let hp = l.pair(h, h1)?;
    let det = hh * nn.clone() - hp.clone() * hp.clone();
    let claimed = scalar::<T>(8) * nn - hp.clone() * hp;
    Ok(det == claimed && !det.is_zero())
}

/// Order by coordinate magnitude before sign (nonnegative first), position
/// by position. Used to pick the reported witness: smallest in this order.
pub fn zigzag_cmp<T: Scalar>(a: &LatVec<T>, b: &LatVec<T>) -> Ordering {
    for (x, y) in a.coords().iter().zip(b.coords()) {
        let kx = (x.abs(), u8::from(x.is_negative()));
        let ky = (y.abs(), u8::from(y.is_negative()));
        match kx.cmp(&ky) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<T> {
    pub h1: LatVec<T>,
    pub d: LatVec<T>,
    pub case_tag: CaseTag,
    pub closure_det: T,
    /// Divisibility of H in the saturation of [H, h1]; must be 1.
    pub divisibility_certificate: T,
    /// H.D; must be odd.
    pub parity_certificate: T,
    /// H.D > -4.
    pub normalized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessaryReport<T> {
    pub mukai_condition: bool,
    pub h_divisibility: T,
    pub rank: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictStatus<T> {
    SufficientHolds {
        witness: Witness<T>,
        chain: IsoChain<T>,
    },
    NotFoundWithinBound {
        bound: u32,
    },
    NecessaryFails {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<T> {
    pub status: VerdictStatus<T>,
    pub necessary_report: NecessaryReport<T>,
    pub diagnostics: Vec<String>,
}

fn make_witness<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    d: &LatVec<T>,
) -> Result<Witness<T>> {
    let h1 = h + &d.scaled(&scalar(2));
    let report = check_h1(l, h, &h1)?;
    let case_tag = report.case.ok_or(Error::BadCertificate {
        which: "witness norm is not +-4",
    })?;
    let parity_certificate = l.pair(h, d)?;
    let normalized = parity_certificate > scalar(-4);
    Ok(Witness {
        h1,
        d: d.clone(),
        case_tag,
        closure_det: report.closure.det,
        divisibility_certificate: report.divisibility_in_closure,
        parity_certificate,
        normalized,
    })
}

fn case_of<T: Scalar>(l: &IntegerLattice<T>, h: &LatVec<T>, d: &LatVec<T>) -> Result<CaseTag> {
    let quad = l.norm(d)? + l.pair(h, d)?;
    if quad == scalar(-1) {
        Ok(CaseTag::Plus4)
    } else if quad == scalar(-3) {
        Ok(CaseTag::Minus4)
    } else {
        Err(Error::BadCertificate {
            which: "witness norm is not +-4",
        })
    }
}

/// Full decision pipeline. Assumes [`validate_input`] passed; the search
/// bound doubles as the root-enumeration bound for certificates.
pub fn verdict<T: Scalar>(
    l: &IntegerLattice<T>,
    h: &LatVec<T>,
    bound: u32,
    orbit_depth: u32,
) -> Result<Verdict<T>> {
    let h_divisibility = l.divisibility(h)?;
    let mukai = h_divisibility.is_one();
    let mut notes = vec![
        "the necessary direction assumes a K3 surface general for this Picard lattice; \
         genericity is not visible in the Gram matrix"
            .to_string(),
    ];
    if l.rank() == 1 {
        notes.push(
            "Picard rank 1: 8k^2 never equals +-4, so no witness exists at any bound".to_string(),
        );
    }
    let necessary_report = NecessaryReport {
        mukai_condition: mukai,
        h_divisibility,
        rank: l.rank(),
        notes,
    };
    let mut diagnostics: Vec<String> = Vec::new();

    let ds = search_d(l, h, bound, &SearchOptions::default())?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for d in ds {
        match case_of(l, h, &d)? {
            CaseTag::Plus4 => plus.push(d),
            CaseTag::Minus4 => minus.push(d),
        }
    }
    plus.sort_by(zigzag_cmp);
    minus.sort_by(zigzag_cmp);

    if let Some(d) = plus.first() {
        let witness = make_witness(l, h, d)?;
        if !det_identity_check(l, h, &witness.h1)? {
            diagnostics.push(format!(
                "determinant identity failed for h1 = {} (this should be impossible)",
                witness.h1
            ));
        }
        let chain = build_chain_plus(l, h, d)?;
        return Ok(Verdict {
            status: VerdictStatus::SufficientHolds { witness, chain },
            necessary_report,
            diagnostics,
        });
    }

    let walls = minus_two_classes(l, h, bound)?;
    let finish_minus = |d: &LatVec<T>,
                            cert,
                            mut diagnostics: Vec<String>,
                            necessary_report|
     -> Result<Verdict<T>> {
        let witness = make_witness(l, h, d)?;
        if !det_identity_check(l, h, &witness.h1)? {
            diagnostics.push(format!(
                "determinant identity failed for h1 = {} (this should be impossible)",
                witness.h1
            ));
        }
        let certificates = MinusCertificates {
            pairing_h_d: witness.parity_certificate.clone(),
            chi_h1: chi_line_bundle(l, &witness.h1)?,
            effectivity: Some(cert),
        };
        let chain = build_chain_minus(l, h, d, certificates)?;
        Ok(Verdict {
            status: VerdictStatus::SufficientHolds { witness, chain },
            necessary_report,
            diagnostics,
        })
    };

    let mut uncertified: Vec<LatVec<T>> = Vec::new();
    for d in &minus {
        let dn = normalize_d(l, h, d)?;
        let h1 = h + &dn.scaled(&scalar(2));
        if uncertified.contains(&h1) {
            continue;
        }
        let cert = not_pseudo_effective_with_walls(l, h, &h1, &walls)?;
        if cert.is_conclusive() {
            return finish_minus(&dn, cert, diagnostics, necessary_report);
        }
        uncertified.push(h1);
    }

    for h1 in &uncertified {
        let Some((image, cert)) = orbit_search(l, h, h1, bound, orbit_depth)? else {
            continue;
        };
        let d_image = lemma_bridge_to_d(l, h, &image)?;
        let dn = normalize_d(l, h, &d_image)?;
        let cert = if dn == d_image {
            cert
        } else {
            negate_subject(&cert)
        };
        diagnostics.push(format!(
            "witness found in the reflection orbit of {h1} (no direct certificate in the box)"
        ));
        return finish_minus(&dn, cert, diagnostics, necessary_report);
    }

    let status = if l.rank() >= 2 && !mukai {
        VerdictStatus::NecessaryFails {
            reason: format!(
                "the Mukai condition fails: H has divisibility {} in the Picard lattice, \
                 so H.N(X) != Z",
                necessary_report.h_divisibility
            ),
        }
    } else {
        if !uncertified.is_empty() {
            diagnostics.push(format!(
                "{} norm -4 candidate(s) satisfy the arithmetic conditions but none could be \
                 certified non-pseudo-effective within the bound; the criterion without the \
                 effectivity condition would accept this input",
                uncertified.len()
            ));
        }
        VerdictStatus::NotFoundWithinBound { bound }
    };
    Ok(Verdict {
        status,
        necessary_report,
        diagnostics,
    })
}
