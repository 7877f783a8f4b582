//! Human text and CSV renderers for the output document (JSON is just serde).

use std::fmt::Write as _;

use crate::io::{EffectivityJson, EffectivityStatusJson, JsonInt, OutputDocument};

fn fmt_vec(v: &[JsonInt]) -> String {
    let mut s = String::from("(");
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&x.0.to_string());
    }
    s.push(')');
    s
}

fn paint(s: &str, code: &str, color: bool) -> String {
    if color {
        format!("\x1b[{code}m{s}\x1b[0m")
    } else {
        s.to_string()
    }
}

fn effectivity_lines(out: &mut String, eff: &EffectivityJson) {
    let _ = writeln!(
        out,
        "effectivity: subject {} (root bound {})",
        fmt_vec(&eff.subject),
        eff.root_bound
    );
    let line = match &eff.status {
        EffectivityStatusJson::WallInsideNef { wall } => format!(
            "  not pseudo-effective for both signs: wall generator {} is nef-certified",
            fmt_vec(wall)
        ),
        EffectivityStatusJson::NotPseudoEffectivePair { lower, upper } => format!(
            "  not pseudo-effective for both signs: nef classes {} and {} straddle the wall",
            fmt_vec(lower),
            fmt_vec(upper)
        ),
        EffectivityStatusJson::Inconclusive => {
            "  inconclusive within the bound (this does not refute the criterion)".to_string()
        }
    };
    let _ = writeln!(out, "{line}");
}

pub fn render_text(doc: &OutputDocument, color: bool) -> String {
    let mut out = String::new();
    if let Some(err) = &doc.error {
        let _ = writeln!(out, "{}: {err}", paint("error", "31", color));
        return out;
    }
    if let Some(v) = &doc.validation {
        let status = if v.passed {
            paint("passed", "32", color)
        } else {
            paint("failed", "31", color)
        };
        let _ = writeln!(
            out,
            "validation: {status} (signature ({}, {}, {}), det {})",
            v.signature[0], v.signature[1], v.signature[2], v.det.0
        );
        for f in &v.failures {
            let _ = writeln!(out, "  - {f}");
        }
        if !v.walls_containing_h.is_empty() {
            let walls: Vec<String> = v.walls_containing_h.iter().map(|w| fmt_vec(w)).collect();
            let _ = writeln!(out, "  walls containing H: {}", walls.join(", "));
        }
    }
    if let Some(verdict) = doc.verdict {
        let code = match verdict {
            "sufficient-holds" => "32",
            "not-found-within-bound" => "33",
            _ => "31",
        };
        match &doc.case {
            Some(case) => {
                let _ = writeln!(
                    out,
                    "verdict: {} (case {case})",
                    paint(verdict, code, color)
                );
            }
            None => {
                let _ = writeln!(out, "verdict: {}", paint(verdict, code, color));
            }
        }
    }
    if let Some(reason) = &doc.reason {
        let _ = writeln!(out, "reason: {reason}");
    }
    if let Some(w) = &doc.witness {
        let _ = writeln!(
            out,
            "witness: h1 = {} (h1^2 = {}), D = {}",
            fmt_vec(&w.h1),
            w.case,
            fmt_vec(&w.d)
        );
        let _ = writeln!(
            out,
            "  closure det {} (odd), divisibility {}, H.D = {} (odd), normalized: {}",
            w.closure_det.0,
            w.divisibility.0,
            w.pairing_h_d.0,
            if w.normalized { "yes" } else { "no" }
        );
    }
    if let Some(chain) = &doc.chain_text {
        let _ = writeln!(out, "chain: {chain}");
    }
    if let Some(n) = &doc.necessary_report {
        let _ = writeln!(
            out,
            "necessary conditions: mukai (H.N = Z): {}, divisibility {}, rank {}",
            if n.mukai_condition { "yes" } else { "no" },
            n.h_divisibility.0,
            n.rank
        );
        for note in &n.notes {
            let _ = writeln!(out, "  note: {note}");
        }
    }
    if let Some(ws) = &doc.witnesses {
        let _ = writeln!(out, "witnesses ({}):", ws.len());
        for w in ws {
            let _ = writeln!(out, "  {}", fmt_vec(w));
        }
    }
    if let Some(walls) = &doc.walls {
        let _ = writeln!(
            out,
            "walls: {} root(s) within bound {} (complete: {})",
            walls.count, walls.bound, walls.complete_within_bound
        );
        for r in &walls.roots {
            let tag = if r.ambiguous { " [contains H]" } else { "" };
            let _ = writeln!(out, "  {}{tag}", fmt_vec(&r.delta));
        }
    }
    if let Some(eff) = &doc.effectivity {
        effectivity_lines(&mut out, eff);
    }
    if let Some(reports) = &doc.oracle {
        for r in reports {
            if r.matches {
                let _ = writeln!(
                    out,
                    "oracle {}: {} ({} brute-force witnesses)",
                    r.target,
                    paint("match", "32", color),
                    r.checked
                );
            } else {
                let _ = writeln!(
                    out,
                    "oracle {}: {}",
                    r.target,
                    paint("MISMATCH", "31", color)
                );
                for v in &r.missing_in_fast {
                    let _ = writeln!(out, "  missing in fast search: {}", fmt_vec(v));
                }
                for v in &r.extra_in_fast {
                    let _ = writeln!(out, "  extra in fast search: {}", fmt_vec(v));
                }
            }
        }
    }
    if let Some(rows) = &doc.sweep {
        let _ = writeln!(out, "{:>4} {:>4} {:>10} {:>6} {:<22} {:<4}",
            "e", "f", "hyperbolic", "mukai", "verdict", "case");
        for r in rows {
            let _ = writeln!(
                out,
                "{:>4} {:>4} {:>10} {:>6} {:<22} {:<4}",
                r.e,
                r.f,
                r.hyperbolic,
                r.mukai,
                r.verdict,
                r.case.as_deref().unwrap_or("-")
            );
        }
    }
    for d in &doc.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

/// One table per document, chosen by the command's payload. Vector-valued
/// cells use the "(a, b)" form; the csv writer handles quoting.
pub fn render_csv(doc: &OutputDocument) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(err) = &doc.error {
        w.write_record(["error"]).unwrap();
        w.write_record([err.as_str()]).unwrap();
    } else if let Some(rows) = &doc.sweep {
        w.write_record(["e", "f", "hyperbolic", "mukai", "verdict", "case"])
            .unwrap();
        for r in rows {
            w.write_record([
                r.e.to_string(),
                r.f.to_string(),
                r.hyperbolic.to_string(),
                r.mukai.to_string(),
                r.verdict.to_string(),
                r.case.clone().unwrap_or_default(),
            ])
            .unwrap();
        }
    } else if let Some(ws) = &doc.witnesses {
        w.write_record(["index", "witness"]).unwrap();
        for (i, v) in ws.iter().enumerate() {
            w.write_record([i.to_string(), fmt_vec(v)]).unwrap();
        }
    } else if let Some(walls) = &doc.walls {
        w.write_record(["delta", "ambiguous"]).unwrap();
        for r in &walls.roots {
            w.write_record([fmt_vec(&r.delta), r.ambiguous.to_string()])
                .unwrap();
        }
    } else if let Some(reports) = &doc.oracle {
        w.write_record(["target", "checked", "matches", "missing_in_fast", "extra_in_fast"])
            .unwrap();
        for r in reports {
            let missing: Vec<String> = r.missing_in_fast.iter().map(|v| fmt_vec(v)).collect();
            let extra: Vec<String> = r.extra_in_fast.iter().map(|v| fmt_vec(v)).collect();
            w.write_record([
                r.target.to_string(),
                r.checked.to_string(),
                r.matches.to_string(),
                missing.join(" "),
                extra.join(" "),
            ])
            .unwrap();
        }
    } else {
        w.write_record(["verdict", "case", "h1", "d", "closure_det", "divisibility"])
            .unwrap();
        let wit = doc.witness.as_ref();
        w.write_record([
            doc.verdict.unwrap_or("").to_string(),
            doc.case.clone().unwrap_or_default(),
            wit.map(|w| fmt_vec(&w.h1)).unwrap_or_default(),
            wit.map(|w| fmt_vec(&w.d)).unwrap_or_default(),
            wit.map(|w| w.closure_det.0.to_string()).unwrap_or_default(),
            wit.map(|w| w.divisibility.0.to_string()).unwrap_or_default(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}
