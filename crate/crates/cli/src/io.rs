//! JSON types for the CLI: the input document, the output document, and the
//! conversions from the core structures. Integers are arbitrary precision:
//! emitted as JSON numbers while they fit the 53-bit safe range and as
//! decimal strings beyond it; both forms (and either) are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use k3moduli::chambers::{EffectivityCert, EffectivityStatus, WallSet};
use k3moduli::criterion::{NecessaryReport, ValidationReport, Witness};
use k3moduli::lattice::LatVec;
use k3moduli::mukai::{ChainStep, IsoChain, MinusCertificates, MukaiVec};
use k3moduli::oracle::OracleReport;
use k3moduli::{Int, Lattice, Vector};

const JSON_SAFE_MAX: i64 = 9_007_199_254_740_991; // 2^53 - 1

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        JsonInt(x.clone())
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(n) if n.abs() <= JSON_SAFE_MAX => serializer.serialize_i64(n),
            _ => serializer.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        let literal = match &value {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.trim().to_string(),
            other => {
                return Err(D::Error::custom(format!(
                    "expected an integer (number or decimal string), got {other}"
                )))
            }
        };
        literal
            .parse::<BigInt>()
            .map(JsonInt)
            .map_err(|_| D::Error::custom(format!("not an integer literal: {literal:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub gram: Vec<Vec<JsonInt>>,
    #[serde(alias = "H")]
    pub h: Vec<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assert_nef: Option<bool>,
}

impl InputDocument {
    pub fn lattice(&self) -> k3moduli::Result<Lattice> {
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|x| x.0.clone()).collect())
            .collect();
        Lattice::new(gram)
    }

    pub fn polarization(&self) -> Vector {
        LatVec::new(self.h.iter().map(|x| x.0.clone()).collect())
    }
}

pub fn json_vec(v: &Vector) -> Vec<JsonInt> {
    v.coords().iter().map(JsonInt::from).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationJson {
    pub passed: bool,
    pub even: bool,
    pub nondegenerate: bool,
    pub hyperbolic: bool,
    pub signature: [usize; 3],
    pub det: JsonInt,
    pub h_primitive: bool,
    pub h_norm: JsonInt,
    pub nef_asserted: bool,
    pub nef_scan_bound: u32,
    pub nef_violations: Vec<Vec<JsonInt>>,
    pub walls_containing_h: Vec<Vec<JsonInt>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

pub fn validation_json(r: &ValidationReport<Int>) -> ValidationJson {
    ValidationJson {
        passed: r.passed(),
        even: r.even,
        nondegenerate: r.nondegenerate,
        hyperbolic: r.hyperbolic,
        signature: [r.signature.0, r.signature.1, r.signature.2],
        det: JsonInt(r.det.clone()),
        h_primitive: r.h_primitive,
        h_norm: JsonInt(r.h_norm.clone()),
        nef_asserted: r.nef_asserted,
        nef_scan_bound: r.nef_scan_bound,
        nef_violations: r.nef_violations.iter().map(json_vec).collect(),
        walls_containing_h: r.walls_containing_h.iter().map(json_vec).collect(),
        failures: r.failures(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub h1: Vec<JsonInt>,
    pub d: Vec<JsonInt>,
    pub case: String,
    pub closure_det: JsonInt,
    pub divisibility: JsonInt,
    pub pairing_h_d: JsonInt,
    pub normalized: bool,
}

pub fn witness_json(w: &Witness<Int>) -> WitnessJson {
    WitnessJson {
        h1: json_vec(&w.h1),
        d: json_vec(&w.d),
        case: w.case_tag.to_string(),
        closure_det: JsonInt(w.closure_det.clone()),
        divisibility: JsonInt(w.divisibility_certificate.clone()),
        pairing_h_d: JsonInt(w.parity_certificate.clone()),
        normalized: w.normalized,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MukaiJson {
    pub r: JsonInt,
    pub c1: Vec<JsonInt>,
    pub s: JsonInt,
}

fn mukai_json(v: &MukaiVec<Int>) -> MukaiJson {
    MukaiJson {
        r: JsonInt(v.r.clone()),
        c1: json_vec(&v.c1),
        s: JsonInt(v.s.clone()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EffectivityJson {
    pub subject: Vec<JsonInt>,
    pub root_bound: u32,
    pub conclusive: bool,
    pub status: EffectivityStatusJson,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum EffectivityStatusJson {
    #[serde(rename = "wall-inside-nef")]
    WallInsideNef { wall: Vec<JsonInt> },
    #[serde(rename = "not-pseudo-effective-pair")]
    NotPseudoEffectivePair {
        lower: Vec<JsonInt>,
        upper: Vec<JsonInt>,
    },
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

pub fn effectivity_json(c: &EffectivityCert<Int>) -> EffectivityJson {
    let status = match &c.status {
        EffectivityStatus::WallInsideNef(w) => EffectivityStatusJson::WallInsideNef {
            wall: json_vec(w),
        },
        EffectivityStatus::NotPseudoEffectivePair(a, b) => {
            EffectivityStatusJson::NotPseudoEffectivePair {
                lower: json_vec(a),
                upper: json_vec(b),
            }
        }
        EffectivityStatus::Inconclusive => EffectivityStatusJson::Inconclusive,
    };
    EffectivityJson {
        subject: json_vec(&c.subject),
        root_bound: c.root_bound,
        conclusive: c.is_conclusive(),
        status,
    }
}

pub fn effectivity_text(status: &EffectivityStatus<Int>) -> String {
    match status {
        EffectivityStatus::WallInsideNef(w) => {
            format!("wall generator {w} is nef-certified")
        }
        EffectivityStatus::NotPseudoEffectivePair(a, b) => {
            format!("nef classes {a} and {b} straddle the wall")
        }
        EffectivityStatus::Inconclusive => "inconclusive".to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificatesJson {
    pub pairing_h_d: JsonInt,
    pub chi_h1: JsonInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effectivity: Option<EffectivityJson>,
}

fn certificates_json(c: &MinusCertificates<Int>) -> CertificatesJson {
    CertificatesJson {
        pairing_h_d: JsonInt(c.pairing_h_d.clone()),
        chi_h1: JsonInt(c.chi_h1.clone()),
        effectivity: c.effectivity.as_ref().map(effectivity_json),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStepJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<JsonInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mukai: Option<MukaiJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<CertificatesJson>,
}

pub fn chain_json(chain: &IsoChain<Int>) -> Vec<ChainStepJson> {
    chain
        .steps
        .iter()
        .map(|step| match step {
            ChainStep::Start(v) => ChainStepJson {
                kind: "start",
                d: None,
                mukai: Some(mukai_json(v)),
                certificates: None,
            },
            ChainStep::Twist { d, result } => ChainStepJson {
                kind: "twist",
                d: Some(json_vec(d)),
                mukai: Some(mukai_json(result)),
                certificates: None,
            },
            ChainStep::RankSwap { result } => ChainStepJson {
                kind: "rank-swap",
                d: None,
                mukai: Some(mukai_json(result)),
                certificates: None,
            },
            ChainStep::ExtensionConstruction { d, certificates } => ChainStepJson {
                kind: "extension-construction",
                d: Some(json_vec(d)),
                mukai: None,
                certificates: Some(certificates_json(certificates)),
            },
            ChainStep::EndX => ChainStepJson {
                kind: "end-x",
                d: None,
                mukai: None,
                certificates: None,
            },
        })
        .collect()
}

/// Compact one-line arrow rendering of a chain.
pub fn chain_text(chain: &IsoChain<Int>) -> String {
    let mut out = String::new();
    for step in &chain.steps {
        match step {
            ChainStep::Start(v) => out.push_str(&format!("M{v}")),
            ChainStep::Twist { d, result } => {
                out.push_str(&format!(" -> twist by D={d} -> M{result}"));
            }
            ChainStep::RankSwap { result } => {
                out.push_str(&format!(" -> rank-degree swap -> M{result}"));
            }
            ChainStep::ExtensionConstruction { d, certificates } => {
                let eff = certificates
                    .effectivity
                    .as_ref()
                    .map(|c| effectivity_text(&c.status))
                    .unwrap_or_else(|| "no effectivity certificate".to_string());
                out.push_str(&format!(
                    " -> extension construction via D={d} [H.D={}, chi(h1)={}, {}]",
                    certificates.pairing_h_d, certificates.chi_h1, eff
                ));
            }
            ChainStep::EndX => out.push_str(" -> X"),
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NecessaryJson {
    pub mukai_condition: bool,
    pub h_divisibility: JsonInt,
    pub rank: usize,
    pub notes: Vec<String>,
}

pub fn necessary_json(n: &NecessaryReport<Int>) -> NecessaryJson {
    NecessaryJson {
        mukai_condition: n.mukai_condition,
        h_divisibility: JsonInt(n.h_divisibility.clone()),
        rank: n.rank,
        notes: n.notes.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootJson {
    pub delta: Vec<JsonInt>,
    pub ambiguous: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallsJson {
    pub bound: u32,
    pub complete_within_bound: bool,
    pub count: usize,
    pub roots: Vec<RootJson>,
}

pub fn walls_json(w: &WallSet<Int>) -> WallsJson {
    WallsJson {
        bound: w.bound,
        complete_within_bound: w.complete_within_bound,
        count: w.roots.len(),
        roots: w
            .roots
            .iter()
            .map(|r| RootJson {
                delta: json_vec(&r.delta),
                ambiguous: r.ambiguous,
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleJson {
    pub target: &'static str,
    pub checked: usize,
    pub matches: bool,
    pub missing_in_fast: Vec<Vec<JsonInt>>,
    pub extra_in_fast: Vec<Vec<JsonInt>>,
}

pub fn oracle_json(target: &'static str, r: &OracleReport<Int>) -> OracleJson {
    OracleJson {
        target,
        checked: r.checked,
        matches: r.matches(),
        missing_in_fast: r.missing_in_fast.iter().map(json_vec).collect(),
        extra_in_fast: r.extra_in_fast.iter().map(json_vec).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRowJson {
    pub e: i64,
    pub f: i64,
    pub hyperbolic: bool,
    pub mukai: bool,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<ChainStepJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub necessary_report: Option<NecessaryJson>,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<JsonInt>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walls: Option<WallsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effectivity: Option<EffectivityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<OracleJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRowJson>>,
}

impl OutputDocument {
    pub fn new(command: &'static str) -> Self {
        OutputDocument {
            tool: "k3moduli",
            version: env!("CARGO_PKG_VERSION"),
            command,
            error: None,
            bound: None,
            orbit_depth: None,
            validation: None,
            verdict: None,
            case: None,
            reason: None,
            witness: None,
            chain: None,
            chain_text: None,
            necessary_report: None,
            diagnostics: Vec::new(),
            witnesses: None,
            walls: None,
            effectivity: None,
            oracle: None,
            sweep: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_serialization_switches_to_strings() {
        let small = JsonInt(BigInt::from(JSON_SAFE_MAX));
        assert_eq!(
            serde_json::to_string(&small).unwrap(),
            "9007199254740991"
        );
        let big = JsonInt(BigInt::from(JSON_SAFE_MAX) + 1);
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"9007199254740992\"");
        let neg = JsonInt(-(BigInt::from(JSON_SAFE_MAX) + 1i64));
        assert_eq!(
            serde_json::to_string(&neg).unwrap(),
            "\"-9007199254740992\""
        );
    }

    #[test]
    fn int_deserialization_accepts_numbers_and_strings() {
        let a: JsonInt = serde_json::from_str("-42").unwrap();
        assert_eq!(a.0, BigInt::from(-42));
        let b: JsonInt = serde_json::from_str("\"123456789012345678901234567890\"").unwrap();
        assert_eq!(
            b.0,
            "123456789012345678901234567890".parse::<BigInt>().unwrap()
        );
        // beyond 2^53 as a bare JSON number: parsed exactly
        let c: JsonInt = serde_json::from_str("36893488147419103232").unwrap();
        assert_eq!(c.0, BigInt::from(2u8).pow(65));
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"abc\"").is_err());
        assert!(serde_json::from_str::<JsonInt>("[1]").is_err());
    }

    #[test]
    fn input_document_round_trip() {
        let doc = InputDocument {
            gram: vec![
                vec![JsonInt(8.into()), JsonInt(1.into())],
                vec![JsonInt(1.into()), JsonInt((-2).into())],
            ],
            h: vec![JsonInt(1.into()), JsonInt(0.into())],
            bound: Some(12),
            orbit_depth: None,
            assert_nef: None,
        };
        let s = serde_json::to_string(&doc).unwrap();
        let back: InputDocument = serde_json::from_str(&s).unwrap();
        assert_eq!(doc, back);
        // uppercase H accepted
        let alt: InputDocument =
            serde_json::from_str(r#"{"gram": [[8]], "H": [1]}"#).unwrap();
        assert_eq!(alt.h, vec![JsonInt(1.into())]);
        // unknown fields rejected
        assert!(
            serde_json::from_str::<InputDocument>(r#"{"gram": [[8]], "h": [1], "x": 0}"#).is_err()
        );
    }
}
