//! The AS-to-AS matrix and its area-weighted summary.
//!
//! The full square of ordered user pairs in a country has area 1. A cell for
//! networks `i` and `j` covers `f_i * f_j` of it, so the cells together cover
//! `(sum f)^2` and the rest is the unexamined area.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    AsNumber, CellVerdict, DirectnessVerdict, Evidence, EyeballMatrix, EyeballSet, LocalityVerdict,
    MetricsSummary, ModelError,
};
use crate::path::classify_pair;
use crate::selection::ProbeSelection;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("verdict for ({0}, {1}) names a network outside the eyeball set")]
    UnknownAsnInVerdicts(AsNumber, AsNumber),
    #[error("verdict for ({0}, {1}) given although a network of the pair has no selected probes")]
    UncoveredPairVerdict(AsNumber, AsNumber),
    #[error("verdict keyed ({0}, {1}) describes ({2}, {3})")]
    KeyMismatch(AsNumber, AsNumber, AsNumber, AsNumber),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Builds a covered-pair verdict from per-traceroute evidence.
pub fn cell_from_evidence(
    src: AsNumber,
    dst: AsNumber,
    mut evidence: Vec<Evidence>,
) -> CellVerdict {
    evidence.sort_by_key(|e| (e.measurement, e.classification));
    let labels: Vec<_> = evidence.iter().map(|e| e.classification).collect();
    let v = classify_pair(&labels, true);
    CellVerdict {
        src_asn: src,
        dst_asn: dst,
        locality: v.locality,
        directness: v.directness,
        area_weight: 0.0,
        evidence,
    }
}

/// Lays out one cell per ordered pair of member networks.
///
/// Pairs where both networks have selected probes take their verdict from
/// `verdicts`, or become `Undetermined` when no verdict is supplied. Every
/// other pair is `NoCoverage`. Area weights are always recomputed from the
/// set's user fractions.
pub fn build_matrix(
    set: &EyeballSet,
    selection: &ProbeSelection,
    verdicts: &BTreeMap<(AsNumber, AsNumber), CellVerdict>,
) -> Result<EyeballMatrix, MatrixError> {
    for (&(src, dst), cell) in verdicts {
        if set.position(src).is_none() || set.position(dst).is_none() {
            return Err(MatrixError::UnknownAsnInVerdicts(src, dst));
        }
        if !selection.contains(src) || !selection.contains(dst) {
            return Err(MatrixError::UncoveredPairVerdict(src, dst));
        }
        if (cell.src_asn, cell.dst_asn) != (src, dst) {
            return Err(MatrixError::KeyMismatch(
                src,
                dst,
                cell.src_asn,
                cell.dst_asn,
            ));
        }
    }
    let nets = set.networks();
    let mut cells = Vec::with_capacity(nets.len() * nets.len());
    for row in nets {
        for col in nets {
            let weight = row.user_fraction * col.user_fraction;
            let covered = selection.contains(row.asn) && selection.contains(col.asn);
            let cell = if !covered {
                CellVerdict::no_coverage(row.asn, col.asn, weight)
            } else {
                let mut cell = verdicts
                    .get(&(row.asn, col.asn))
                    .cloned()
                    .unwrap_or_else(|| cell_from_evidence(row.asn, col.asn, Vec::new()));
                cell.area_weight = weight;
                cell
            };
            cells.push(cell);
        }
    }
    Ok(EyeballMatrix::from_cells(set.clone(), cells, 0)?)
}

/// Sums cell areas per locality verdict; the remainder of the unit square
/// is the unexamined area.
pub fn compute_metrics(matrix: &EyeballMatrix) -> MetricsSummary {
    let mut m = MetricsSummary::default();
    for cell in matrix.cells() {
        let w = cell.area_weight;
        match cell.locality {
            LocalityVerdict::InCountry => m.in_country += w,
            LocalityVerdict::OutOfCountry => m.out_of_country += w,
            LocalityVerdict::Inconsistent => m.inconsistent += w,
            LocalityVerdict::NoCoverage => m.no_coverage += w,
            LocalityVerdict::Undetermined => m.undetermined += w,
        }
        match cell.directness {
            DirectnessVerdict::Indirect => m.indirect += w,
            DirectnessVerdict::Mixed => m.mixed += w,
            DirectnessVerdict::Direct | DirectnessVerdict::NotApplicable => {}
        }
    }
    let covered = matrix.eyeball_set().covered_fraction();
    m.unexamined = 1.0 - covered * covered;
    m
}

/// Ordered pairs `(a, b)` with `a` before `b` in member order whose two
/// directions carry different locality verdicts.
pub fn asymmetries(
    matrix: &EyeballMatrix,
) -> Vec<(AsNumber, AsNumber, LocalityVerdict, LocalityVerdict)> {
    let n = matrix.size();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (ab, ba) = (matrix.cell_at(i, j), matrix.cell_at(j, i));
            if ab.locality != ba.locality {
                out.push((ab.src_asn, ab.dst_asn, ab.locality, ba.locality));
            }
        }
    }
    out
}

fn pct(x: f64) -> String {
    format!("{:.1}%", x * 100.0)
}

pub fn locality_label(v: LocalityVerdict) -> &'static str {
    match v {
        LocalityVerdict::InCountry => "in-country",
        LocalityVerdict::OutOfCountry => "out-of-country",
        LocalityVerdict::Inconsistent => "inconsistent",
        LocalityVerdict::NoCoverage => "no-coverage",
        LocalityVerdict::Undetermined => "undetermined",
    }
}

/// Human-readable report: one line per area category, then the asymmetry note.
pub fn summarize(matrix: &EyeballMatrix, metrics: &MetricsSummary) -> Vec<String> {
    let set = matrix.eyeball_set();
    let mut lines = vec![
        format!("country: {}", set.country()),
        format!(
            "eyeball networks: {} covering {} of Internet users",
            set.len(),
            pct(set.covered_fraction())
        ),
        format!("in-country: {}", pct(metrics.in_country)),
        format!("out-of-country: {}", pct(metrics.out_of_country)),
        format!("no-coverage: {}", pct(metrics.no_coverage)),
        format!("inconsistent: {}", pct(metrics.inconsistent)),
        format!("undetermined: {}", pct(metrics.undetermined)),
        format!("unexamined: {}", pct(metrics.unexamined)),
        format!("indirect: {}", pct(metrics.indirect)),
        format!("mixed-directness: {}", pct(metrics.mixed)),
    ];
    let asym = asymmetries(matrix);
    if asym.is_empty() {
        lines.push("asymmetric pairs: none".into());
    } else {
        lines.push(format!("asymmetric pairs: {}", asym.len()));
        for (a, b, ab, ba) in asym {
            lines.push(format!(
                "  AS{a} -> AS{b}: {} / AS{b} -> AS{a}: {}",
                locality_label(ab),
                locality_label(ba)
            ));
        }
    }
    lines
}

/// `metrics_<CC>.csv`.
pub fn write_metrics_csv(metrics: &MetricsSummary) -> String {
    let mut out = String::from("category,area_fraction\n");
    for (name, v) in [
        ("in_country", metrics.in_country),
        ("out_of_country", metrics.out_of_country),
        ("no_coverage", metrics.no_coverage),
        ("inconsistent", metrics.inconsistent),
        ("undetermined", metrics.undetermined),
        ("unexamined", metrics.unexamined),
        ("indirect", metrics.indirect),
        ("mixed", metrics.mixed),
    ] {
        let _ = writeln!(out, "{name},{v:.6}");
    }
    out
}

/// `matrix_<CC>.json`: the eyeball set and the row-major cell list.
pub fn write_matrix_json(matrix: &EyeballMatrix) -> String {
    let mut out = serde_json::to_string_pretty(matrix).expect("matrix serializes");
    out.push('\n');
    out
}
