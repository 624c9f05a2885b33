//! JSON and plain-text renderings of a classification run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::catalog::{ClassDescriptor, Expected};
use super::models::ModelRecord;
use super::run::ClassReport;
use super::PipelineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Everything one `classify` invocation produces.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub classes: Vec<ClassReport>,
    pub models: Vec<ModelRecord>,
    /// Per-class disagreements with the catalog expectations.
    pub mismatches: Vec<String>,
}

impl Document {
    pub fn from_json(s: &str) -> Result<Self, PipelineError> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Disagreements between a report and its expected values; empty on
/// success. Fields absent from `expected` are not checked.
pub fn check_expected(report: &ClassReport, expected: &Expected) -> Vec<String> {
    let mut out = Vec::new();
    let l = &report.label;
    if let Some(b2) = &expected.betti2 {
        if *b2 != report.betti2 {
            out.push(format!("{l}: b² = {:?}, expected {:?}", report.betti2, b2));
        }
    }
    if let Some(b3) = &expected.betti3_above_1 {
        let got: Vec<(i64, usize)> = report.betti3.iter().copied().filter(|(w, n)| *w >= 2 && *n > 0).collect();
        if *b3 != got {
            out.push(format!("{l}: b³ in weights ≥ 2 = {got:?}, expected {b3:?}"));
        }
    }
    if expected.components.len() != report.components.len() {
        out.push(format!(
            "{l}: {} components, expected {}",
            report.components.len(),
            expected.components.len()
        ));
    }
    for e in &expected.components {
        let Some(c) = report.components.iter().find(|c| c.locus == e.locus) else {
            out.push(format!("{l}: no component {}", e.locus));
            continue;
        };
        if c.verdict.status() != e.verdict {
            out.push(format!("{l} [{}]: {}, expected {}", e.locus, c.verdict.status(), e.verdict));
        }
        if let Some(d) = e.generic_d {
            if c.generic_d != d {
                out.push(format!("{l} [{}]: generic d = {}, expected {d}", e.locus, c.generic_d));
            }
        }
        if let Some(f) = &e.flat_locus {
            if *f != c.flat_locus {
                out.push(format!("{l} [{}]: flat locus {:?}, expected {:?}", e.locus, c.flat_locus, f));
            }
        }
    }
    out
}

/// All mismatches of a run: catalog expectations per report, retained
/// components at unnamed special points of a family, failed model checks,
/// and disagreement between a model table and the retained component of
/// its class.
pub fn audit(classes: &[ClassDescriptor], reports: &[ClassReport], models: &[ModelRecord]) -> Vec<String> {
    let mut out = Vec::new();
    for r in reports {
        let exp = classes.iter().find_map(|c| {
            if c.label == r.label {
                return Some(&c.expected);
            }
            c.special.iter().find(|s| s.label == r.label).map(|s| &s.expected)
        });
        match exp {
            Some(e) => out.extend(check_expected(r, e)),
            None if r.has_models() => out.push(format!("{}: unexpected retained component", r.label)),
            None => {}
        }
    }
    for m in models {
        if !m.passed() {
            out.push(format!("model {} [{}]: {}", m.label, m.instance, m.failures.join("; ")));
        }
        let class = m.label.split_whitespace().next().unwrap_or("");
        let Some(r) = reports.iter().find(|r| r.label == class) else { continue };
        let kept: Vec<_> = r.components.iter().filter(|c| c.verdict.is_retained()).collect();
        let agrees = kept
            .iter()
            .any(|c| Some(c.generic_d) == m.symmetry_dimension && c.quintic_type == m.quintic_type);
        if !agrees {
            out.push(format!("model {} [{}]: no retained component of {class} with the same d and type", m.label, m.instance));
        }
    }
    out
}

fn table(b: &[(i64, usize)]) -> String {
    if b.is_empty() {
        return "0".into();
    }
    b.iter().map(|(w, n)| format!("{n}@{w}")).collect::<Vec<_>>().join(" ")
}

fn text(doc: &Document) -> String {
    let mut s = String::new();
    if !doc.classes.is_empty() || doc.models.is_empty() {
        let _ = writeln!(s, "{:<16} {:>5} {:<18} {:<18}", "class", "dim k", "b2 (dim@E-weight)", "b3");
    }
    for r in &doc.classes {
        let _ = writeln!(s, "{:<16} {:>5} {:<18} {:<18}", r.label, r.dim_k, table(&r.betti2), table(&r.betti3));
    }
    for r in &doc.classes {
        let _ = writeln!(s, "\n{} (k0 = {})", r.label, r.k0.join(", "));
        if !r.coordinates.is_empty() {
            let cs: Vec<String> = r
                .coordinates
                .iter()
                .map(|c| format!("{} ({},{},{})", c.name, c.weight[0], c.weight[1], c.weight[2]))
                .collect();
            let _ = writeln!(s, "  coordinates: {}", cs.join(", "));
        }
        if !r.obstructions.is_empty() {
            let _ = writeln!(s, "  obstructions: {}", r.obstructions.join(", "));
        }
        for c in &r.components {
            let _ = writeln!(s, "  component {}", c.locus);
            let _ = writeln!(s, "    scalar {}", c.scalar);
            let _ = writeln!(s, "    quintic [{}] type {}", c.quintic.join(", "), c.quintic_type.as_deref().unwrap_or("0"));
            let _ = writeln!(s, "    generic d {}  bianchi {}", c.generic_d, c.bianchi);
            let _ = writeln!(s, "    flat locus {}", c.flat_locus.join(" | "));
            for sl in &c.slices {
                let _ = writeln!(s, "    slice {sl}");
            }
            match &c.verdict {
                super::Verdict::Retained => {
                    let _ = writeln!(s, "    retained");
                }
                super::Verdict::Discarded { reason } => {
                    let _ = writeln!(s, "    discarded: {reason}");
                }
            }
        }
        for n in &r.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    let ds: Vec<String> = doc
        .classes
        .iter()
        // discrete catalog classes; specializations carry '(' or '^'
        .filter(|r| r.params.is_empty() && r.components.len() == 1 && !r.label.contains(['(', '^']))
        .map(|r| format!("{} {}", r.label, r.components[0].generic_d))
        .collect();
    if !ds.is_empty() {
        let _ = writeln!(s, "\ngeneric d: {}", ds.join(", "));
    }
    let kept: Vec<&str> = doc.classes.iter().filter(|r| r.has_models()).map(|r| r.label.as_str()).collect();
    if !doc.classes.is_empty() || doc.models.is_empty() {
        let _ = writeln!(s, "classes with models: {}", if kept.is_empty() { "none".into() } else { kept.join(", ") });
    }
    if !doc.models.is_empty() {
        let _ = writeln!(s, "{}models", if doc.classes.is_empty() { "" } else { "\n" });
        for m in &doc.models {
            let inst = if m.instance.is_empty() { String::new() } else { format!(" [{}]", m.instance) };
            let status = if m.passed() { "ok".to_string() } else { format!("FAIL: {}", m.failures.join("; ")) };
            let _ = writeln!(
                s,
                "  {}{}: d = {}, type {}, {}",
                m.label,
                inst,
                m.symmetry_dimension.map_or("-".into(), |d| d.to_string()),
                m.quintic_type.as_deref().unwrap_or("-"),
                status
            );
        }
    }
    for m in &doc.mismatches {
        let _ = writeln!(s, "mismatch: {m}");
    }
    s
}

/// Deterministic rendering: report order is preserved and JSON is pretty
/// printed with struct field order.
pub fn emit_report(doc: &Document, format: Format) -> Result<String, PipelineError> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(doc)? + "\n",
        Format::Text => text(doc),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_valid_json() {
        let s = emit_report(&Document::default(), Format::Json).unwrap();
        assert_eq!(Document::from_json(&s).unwrap(), Document::default());
        assert!(emit_report(&Document::default(), Format::Text).unwrap().contains("none"));
    }
}
