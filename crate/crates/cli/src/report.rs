use jumpscope::{DetectionReport, EventKind, MaskReason, SmoothnessKind};
use serde::Serialize;

/// Report document. Keys are emitted in declaration order and floats in
/// their shortest round-trip form, so parsing a report and re-serializing
/// it is byte-identical and reports diff cleanly across runs.
#[derive(Debug, Serialize)]
pub struct Report {
    pub params: Params,
    pub derivative: Vec<[f64; 2]>,
    pub events: Vec<EventOut>,
    pub masked: Vec<MaskedOut>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Params {
    pub delta: f64,
    pub mode: String,
    pub m1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ma: Option<f64>,
    pub h: f64,
    pub epsilon: f64,
    pub table_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_step: Option<f64>,
    pub thresholds: ThresholdsOut,
    pub kinks_enabled: bool,
}

#[derive(Debug, Serialize)]
pub struct ThresholdsOut {
    pub jump_factor: f64,
    pub jump_threshold: f64,
    pub kink_threshold: f64,
    pub critical_threshold: f64,
    pub sign_floor: f64,
    pub p_min: f64,
}

#[derive(Debug, Serialize)]
pub struct EventOut {
    pub kind: String,
    pub interval: [f64; 2],
    pub location: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_error_bound: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct MaskedOut {
    pub node: usize,
    pub x: f64,
    pub reason: String,
}

pub fn kind_name(kind: EventKind) -> &'static str {
    match kind {
        EventKind::Jump => "jump",
        EventKind::Kink => "kink",
        EventKind::CriticalPoint => "critical_point",
    }
}

fn reason_name(reason: MaskReason) -> &'static str {
    match reason {
        MaskReason::JumpNeighborhood => "jump_neighborhood",
        MaskReason::KinkNeighborhood => "kink_neighborhood",
        MaskReason::CriticalNeighborhood => "critical_neighborhood",
    }
}

pub fn build(report: &DetectionReport, warnings: Vec<String>) -> Report {
    let class = report.params.class;
    let (mode, m2, alpha, ma) = match class.kind() {
        SmoothnessKind::Smooth { m2, .. } => ("smooth", Some(m2), None, None),
        SmoothnessKind::Fractional { a, ma, .. } => ("fractional", None, Some(a), Some(ma)),
        SmoothnessKind::Linear { .. } => ("linear", Some(0.0), None, None),
    };
    Report {
        params: Params {
            delta: report.params.delta,
            mode: mode.to_string(),
            m1: class.m1(),
            m2,
            alpha,
            ma,
            h: report.params.h,
            epsilon: report.params.epsilon,
            table_step: report.params.table_step,
            slope_step: report.params.slope_step,
            thresholds: ThresholdsOut {
                jump_factor: report.params.jump_factor,
                jump_threshold: report.params.jump_threshold,
                kink_threshold: report.params.kink_threshold,
                critical_threshold: report.params.critical_threshold,
                sign_floor: report.params.sign_floor,
                p_min: report.params.p_min,
            },
            kinks_enabled: report.params.kinks_enabled,
        },
        derivative: report.derivative.iter().map(|&(x, v)| [x, v]).collect(),
        events: report
            .events
            .iter()
            .map(|e| EventOut {
                kind: kind_name(e.kind).to_string(),
                interval: [e.interval.0, e.interval.1],
                location: e.location,
                size: e.size,
                size_error_bound: e.size_error_bound,
            })
            .collect(),
        masked: report
            .masked_nodes
            .iter()
            .map(|m| MaskedOut { node: m.node, x: m.x, reason: reason_name(m.reason).to_string() })
            .collect(),
        warnings,
    }
}

pub fn to_json(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

/// Plot-ready table: one `x<TAB>f_j<TAB>flag` row per node of the table
/// grid, with masked nodes carrying their mask reason as the flag.
pub fn plot_table(report: &DetectionReport, all_values: &[(f64, f64)]) -> String {
    use std::fmt::Write;
    let mut out = String::from("# x\tf_j\tflag\n");
    let masked: std::collections::BTreeMap<usize, &'static str> = report
        .masked_nodes
        .iter()
        .map(|m| (m.node, reason_name(m.reason)))
        .collect();
    for (j, &(x, v)) in all_values.iter().enumerate() {
        let flag = masked.get(&(j + 1)).copied().unwrap_or("ok");
        writeln!(out, "{x}\t{v}\t{flag}").expect("string write");
    }
    out
}
