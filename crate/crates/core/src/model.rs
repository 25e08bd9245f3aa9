//! Domain types shared by all stages: signal sources, smoothness classes,
//! step policies, detection grids and detected events.
//!
//! The central quantity everywhere is the step `h`. For a twice-differentiable
//! signal with `|f''| <= M2` and sup-norm noise `delta`, the central difference
//! at half-width `h` has worst-case error `delta/h + M2*h/2`; the minimizer is
//! `h = sqrt(2*delta/M2)` with minimum value `epsilon = sqrt(2*M2*delta)`.
//! Every threshold downstream is expressed in units of that `epsilon`.

use serde::Serialize;
use thiserror::Error;

/// Relative slack used when deciding grid-fit questions in floating point.
pub(crate) const GRID_SLACK: f64 = 1e-12;

/// Errors raised while constructing model types.
#[derive(Debug, Error)]
pub enum ModelError {
    /// The step is too large for the unit domain (`2h >= 1`).
    #[error("domain too small: step h = {h} requires 2h < 1 (delta too large for the smoothness bounds)")]
    DomainTooSmall { h: f64 },
    /// A smoothness-class invariant failed.
    #[error("invalid smoothness class: {0}")]
    InvalidClass(String),
    /// The noise bound is not a positive finite number.
    #[error("invalid delta {0}: must be positive and finite")]
    InvalidDelta(f64),
    /// Sample abscissas are not a uniform grid on `[0,1]`.
    #[error("non-uniform sample grid: {0}")]
    NonUniformGrid(String),
}

/// A point-queryable noisy function on `[0,1]`.
///
/// `eval` must be deterministic per instance (repeated queries at the same
/// abscissa return the same value) and safe to call concurrently. `delta`
/// is the sup-norm noise bound: `|f(x) - eval(x)| <= delta` at every point
/// where `f` is continuous.
pub trait SignalSource: Send + Sync {
    fn eval(&self, x: f64) -> f64;
    fn delta(&self) -> f64;
    /// Smallest abscissa difference the source resolves: the grid spacing
    /// for sampled tables, 0 for analytically backed sources.
    fn resolution(&self) -> f64 {
        0.0
    }
}

impl<S: SignalSource + ?Sized> SignalSource for &S {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn delta(&self) -> f64 {
        (**self).delta()
    }
    fn resolution(&self) -> f64 {
        (**self).resolution()
    }
}

/// A signal backed by a uniform sample table on `[0,1]`.
///
/// Queries snap to the nearest grid node. Snapping a query on a smooth piece
/// perturbs the value by at most `m1 * dx / 2`, so the effective noise bound
/// grows by that amount over the raw per-sample bound.
#[derive(Debug, Clone)]
pub struct SampledGridSource {
    values: Vec<f64>,
    dx: f64,
    delta_raw: f64,
    m1: f64,
}

impl SampledGridSource {
    /// Builds a source from values at the implicit abscissas `k * dx`,
    /// `k = 0..values.len()-1`, with `dx = 1/(len-1)`.
    pub fn new(values: Vec<f64>, delta_raw: f64, m1: f64) -> Result<Self, ModelError> {
        if values.len() < 2 {
            return Err(ModelError::NonUniformGrid(
                "need at least two samples to span [0,1]".into(),
            ));
        }
        if !delta_raw.is_finite() || delta_raw <= 0.0 {
            return Err(ModelError::InvalidDelta(delta_raw));
        }
        if !m1.is_finite() || m1 < 0.0 {
            return Err(ModelError::InvalidClass(format!("m1 = {m1} must be >= 0")));
        }
        let dx = 1.0 / (values.len() - 1) as f64;
        Ok(Self { values, dx, delta_raw, m1 })
    }

    /// Builds a source from explicit `(x, value)` pairs.
    ///
    /// The abscissas must start at 0, end at 1, and be uniform to within
    /// `1e-12` relative tolerance; they are then snapped to the exact grid.
    pub fn from_points(points: &[(f64, f64)], delta_raw: f64, m1: f64) -> Result<Self, ModelError> {
        Self::from_points_with_tolerance(points, delta_raw, m1, GRID_SLACK)
    }

    /// Like [`Self::from_points`] but with a caller-supplied relative
    /// tolerance on the abscissa uniformity check.
    pub fn from_points_with_tolerance(
        points: &[(f64, f64)],
        delta_raw: f64,
        m1: f64,
        rel_tol: f64,
    ) -> Result<Self, ModelError> {
        if points.len() < 2 {
            return Err(ModelError::NonUniformGrid(
                "need at least two samples to span [0,1]".into(),
            ));
        }
        let n = points.len() - 1;
        let dx = 1.0 / n as f64;
        if points[0].0.abs() > rel_tol {
            return Err(ModelError::NonUniformGrid(format!(
                "first abscissa {} is not 0",
                points[0].0
            )));
        }
        if (points[n].0 - 1.0).abs() > rel_tol {
            return Err(ModelError::NonUniformGrid(format!(
                "last abscissa {} is not 1",
                points[n].0
            )));
        }
        for (k, &(x, _)) in points.iter().enumerate() {
            let expect = k as f64 * dx;
            if (x - expect).abs() > rel_tol {
                return Err(ModelError::NonUniformGrid(format!(
                    "abscissa {x} at row {k} deviates from uniform grid value {expect}"
                )));
            }
            if k > 0 && x <= points[k - 1].0 {
                return Err(ModelError::NonUniformGrid(format!(
                    "abscissas not strictly increasing at row {k}"
                )));
            }
        }
        let values = points.iter().map(|&(_, v)| v).collect();
        Self::new(values, delta_raw, m1)
    }

    /// Grid spacing of the sample table.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Raw per-sample noise bound, before quantization inflation.
    pub fn delta_raw(&self) -> f64 {
        self.delta_raw
    }

    /// Noise bound including abscissa quantization: `delta_raw + m1*dx/2`.
    ///
    /// All downstream guarantees use this inflated value.
    pub fn effective_delta(&self) -> f64 {
        self.delta_raw + self.m1 * self.dx / 2.0
    }
}

impl SignalSource for SampledGridSource {
    fn eval(&self, x: f64) -> f64 {
        let k = (x / self.dx).round();
        let k = (k.max(0.0) as usize).min(self.values.len() - 1);
        self.values[k]
    }

    fn delta(&self) -> f64 {
        self.effective_delta()
    }

    fn resolution(&self) -> f64 {
        self.dx
    }
}

/// Which smoothness assumption governs the step choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SmoothnessKind {
    /// `|f'| <= m1`, `|f''| <= m2` off the discontinuities, `m2 > 0`.
    Smooth { m1: f64, m2: f64 },
    /// Fractional order `a` in `(1,2]` with bound `ma` on the order-`a` norm.
    Fractional { m1: f64, a: f64, ma: f64 },
    /// Piecewise-linear: `|f'| <= m1` between breakpoints, `m2 = 0`.
    Linear { m1: f64 },
}

/// A validated smoothness class. `m0` (a bound on `|f|`) is informational
/// only; no step or threshold formula uses it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessClass {
    #[serde(flatten)]
    kind: SmoothnessKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    m0: Option<f64>,
}

fn check_positive(name: &str, v: f64) -> Result<(), ModelError> {
    if !v.is_finite() || v <= 0.0 {
        return Err(ModelError::InvalidClass(format!("{name} = {v} must be > 0 and finite")));
    }
    Ok(())
}

impl SmoothnessClass {
    pub fn smooth(m1: f64, m2: f64) -> Result<Self, ModelError> {
        check_positive("m1", m1)?;
        check_positive("m2", m2)?;
        Ok(Self { kind: SmoothnessKind::Smooth { m1, m2 }, m0: None })
    }

    pub fn fractional(m1: f64, a: f64, ma: f64) -> Result<Self, ModelError> {
        check_positive("m1", m1)?;
        check_positive("ma", ma)?;
        if !a.is_finite() || a <= 1.0 || a > 2.0 {
            return Err(ModelError::InvalidClass(format!("a = {a} must lie in (1, 2]")));
        }
        Ok(Self { kind: SmoothnessKind::Fractional { m1, a, ma }, m0: None })
    }

    pub fn linear(m1: f64) -> Result<Self, ModelError> {
        check_positive("m1", m1)?;
        Ok(Self { kind: SmoothnessKind::Linear { m1 }, m0: None })
    }

    /// Attaches the informational `|f| <= m0` bound.
    pub fn with_m0(mut self, m0: f64) -> Result<Self, ModelError> {
        if !m0.is_finite() || m0 < 0.0 {
            return Err(ModelError::InvalidClass(format!("m0 = {m0} must be >= 0 and finite")));
        }
        self.m0 = Some(m0);
        Ok(self)
    }

    pub fn kind(&self) -> SmoothnessKind {
        self.kind
    }

    pub fn m0(&self) -> Option<f64> {
        self.m0
    }

    /// First-derivative bound, common to all variants.
    pub fn m1(&self) -> f64 {
        match self.kind {
            SmoothnessKind::Smooth { m1, .. }
            | SmoothnessKind::Fractional { m1, .. }
            | SmoothnessKind::Linear { m1 } => m1,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, SmoothnessKind::Linear { .. })
    }
}

/// The step `h` and error scale `epsilon` produced by a smoothness class at a
/// given noise level.
///
/// For the linear variant `epsilon` degenerates to 0 (there is no curvature
/// term to balance) and the policy carries two steps: `h` for jump detection
/// and `slope_step()` for derivative estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    h: f64,
    epsilon: f64,
    delta: f64,
    t: f64,
    class: SmoothnessClass,
}

/// Default slope-confidence parameter for the linear variant: the slope
/// estimation step is `t * delta / m1` and the absolute slope error is `m1/t`.
pub const DEFAULT_SLOPE_CONFIDENCE: f64 = 10.0;

/// Computes the step and error scale for `class` at noise level `delta`.
///
/// * smooth: `h = sqrt(2*delta/m2)`, `epsilon = sqrt(2*m2*delta)`
/// * fractional: `h = (2*delta/(ma*(a-1)))^(1/a)`,
///   `epsilon = a * ma^(1/a) * (2/(a-1))^((a-1)/a) * delta^((a-1)/a)`
/// * linear: `h = delta/(2*m1)`, `epsilon = 0`
///
/// Fails with `DomainTooSmall` when the resulting grid does not fit in the
/// unit domain (`2h >= 1`; for the linear variant the slope grid must fit
/// as well).
pub fn make_step_policy(class: SmoothnessClass, delta: f64) -> Result<StepPolicy, ModelError> {
    make_step_policy_with_t(class, delta, DEFAULT_SLOPE_CONFIDENCE)
}

/// [`make_step_policy`] with an explicit slope-confidence parameter `t`
/// (linear variant only; ignored otherwise).
pub fn make_step_policy_with_t(
    class: SmoothnessClass,
    delta: f64,
    t: f64,
) -> Result<StepPolicy, ModelError> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(ModelError::InvalidDelta(delta));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(ModelError::InvalidClass(format!("t = {t} must be > 0")));
    }
    let (h, epsilon) = match class.kind() {
        SmoothnessKind::Smooth { m2, .. } => {
            ((2.0 * delta / m2).sqrt(), (2.0 * m2 * delta).sqrt())
        }
        SmoothnessKind::Fractional { a, ma, .. } => {
            let h = (2.0 * delta / (ma * (a - 1.0))).powf(1.0 / a);
            let eps = a * ma.powf(1.0 / a)
                * (2.0 / (a - 1.0)).powf((a - 1.0) / a)
                * delta.powf((a - 1.0) / a);
            (h, eps)
        }
        SmoothnessKind::Linear { m1 } => (delta / (2.0 * m1), 0.0),
    };
    let policy = StepPolicy { h, epsilon, delta, t, class };
    if 2.0 * h >= 1.0 {
        return Err(ModelError::DomainTooSmall { h });
    }
    if let Some(hs) = policy.slope_step() {
        if 2.0 * hs >= 1.0 {
            return Err(ModelError::DomainTooSmall { h: hs });
        }
    }
    Ok(policy)
}

impl StepPolicy {
    /// Step used for the detection grid.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Worst-case derivative error scale; all classification thresholds are
    /// multiples of this.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn class(&self) -> SmoothnessClass {
        self.class
    }

    pub fn m1(&self) -> f64 {
        self.class.m1()
    }

    /// Slope-confidence parameter (linear variant).
    pub fn t(&self) -> f64 {
        self.t
    }

    /// The slope-estimation step `t * delta / m1` for the linear variant,
    /// `None` otherwise.
    pub fn slope_step(&self) -> Option<f64> {
        match self.class.kind() {
            SmoothnessKind::Linear { m1 } => Some(self.t * self.delta / m1),
            _ => None,
        }
    }
}

/// The node set for detection at step `h`: nodes `j = 1..=j_max` at `x = j*h`
/// with intervals `I_j = (j*h - h, j*h + h)`, where `j_max` is the largest
/// index with `j*h + h <= 1`. Consecutive intervals overlap on `(jh, jh+h)`,
/// so one feature can flag up to two adjacent nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionGrid {
    h: f64,
    j_max: usize,
}

impl DetectionGrid {
    pub fn new(h: f64) -> Result<Self, ModelError> {
        if !h.is_finite() || h <= 0.0 || 2.0 * h >= 1.0 {
            return Err(ModelError::DomainTooSmall { h });
        }
        // Seed from 1/h, then pin down "largest j with jh + h <= 1" exactly,
        // allowing a relative slack so that e.g. h = 0.1 yields j_max = 9.
        let mut j_max = (1.0 / h).floor() as i64;
        while j_max >= 1 && (j_max as f64 + 1.0) * h > 1.0 + GRID_SLACK {
            j_max -= 1;
        }
        while ((j_max + 2) as f64) * h <= 1.0 + GRID_SLACK {
            j_max += 1;
        }
        if j_max < 1 {
            return Err(ModelError::DomainTooSmall { h });
        }
        Ok(Self { h, j_max: j_max as usize })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// Node abscissa `j*h`.
    pub fn node_x(&self, j: usize) -> f64 {
        j as f64 * self.h
    }

    /// The open interval `(jh - h, jh + h)` probed by node `j`.
    pub fn interval(&self, j: usize) -> (f64, f64) {
        (self.node_x(j) - self.h, self.node_x(j) + self.h)
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.j_max
    }
}

/// What kind of feature an event reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Discontinuity of the function itself.
    Jump,
    /// The function is continuous but its derivative jumps.
    Kink,
    /// The derivative changes sign smoothly (within the curvature budget).
    CriticalPoint,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EventKind::Jump => write!(f, "jump"),
            EventKind::Kink => write!(f, "kink"),
            EventKind::CriticalPoint => write!(f, "critical_point"),
        }
    }
}

/// A detected feature with its localization interval and, for jumps and
/// kinks, a size estimate with a guaranteed error bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    /// Open interval known to contain the feature.
    pub interval: (f64, f64),
    /// Midpoint of `interval`, reported as the location estimate.
    pub location: f64,
    /// Jump size estimate (signed) for `Jump`, derivative-jump estimate
    /// (signed) for `Kink`, absent for `CriticalPoint`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<f64>,
    /// Guaranteed half-width of the size estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_error_bound: Option<f64>,
    /// The derivative-table values that triggered the classification.
    pub diagnostics: Vec<f64>,
}

impl Event {
    pub(crate) fn new(kind: EventKind, interval: (f64, f64)) -> Self {
        Event {
            kind,
            interval,
            location: 0.5 * (interval.0 + interval.1),
            size: None,
            size_error_bound: None,
            diagnostics: Vec::new(),
        }
    }
}

/// Why a node was excluded from the reported derivative table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskReason {
    /// The node's interval intersects a jump event interval.
    JumpNeighborhood,
    /// The node's interval intersects a kink event interval.
    KinkNeighborhood,
    /// The node's interval intersects a critical-point event interval.
    CriticalNeighborhood,
}

/// A grid node excluded from the derivative table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaskedNode {
    pub node: usize,
    pub x: f64,
    pub reason: MaskReason,
}

/// Parameters a detection run actually used, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub delta: f64,
    pub class: SmoothnessClass,
    pub h: f64,
    pub epsilon: f64,
    /// Step of the grid the derivative table was computed on (differs from
    /// `h` in the linear variant, where slopes use the wider step).
    pub table_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_step: Option<f64>,
    pub jump_factor: f64,
    pub jump_threshold: f64,
    pub kink_threshold: f64,
    pub critical_threshold: f64,
    pub sign_floor: f64,
    pub p_min: f64,
    pub kinks_enabled: bool,
}

/// Output of a detection run: the derivative table restricted to the warranted
/// sub-domain, the event list, the parameters used, and the masked nodes.
///
/// Every node of the table grid appears exactly once, either in `derivative`
/// or in `masked_nodes`. Events are disjoint in interval and sorted by
/// location.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    /// `(x, f_j)` pairs at unmasked nodes; each value carries the worst-case
    /// error `epsilon` (or `m1/t` in the linear variant).
    pub derivative: Vec<(f64, f64)>,
    pub events: Vec<Event>,
    pub params: ReportParams,
    pub masked_nodes: Vec<MaskedNode>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_policy_matches_closed_forms() {
        let class = SmoothnessClass::smooth(1.0, 4.0).unwrap();
        let p = make_step_policy(class, 0.02).unwrap();
        assert!((p.h() - 0.1).abs() < 1e-15);
        assert!((p.epsilon() - 0.4).abs() < 1e-15);
        // h * m2 = epsilon, and epsilon = 2*delta/h, both algebraic identities.
        assert!((p.h() * 4.0 - p.epsilon()).abs() <= 1e-12 * p.epsilon());
        assert!((2.0 * p.delta() / p.h() - p.epsilon()).abs() <= 1e-12 * p.epsilon());
    }

    #[test]
    fn fractional_at_two_reduces_to_smooth() {
        let m2 = 4.0;
        let delta = 0.02;
        let smooth = make_step_policy(SmoothnessClass::smooth(1.0, m2).unwrap(), delta).unwrap();
        let frac =
            make_step_policy(SmoothnessClass::fractional(1.0, 2.0, m2).unwrap(), delta).unwrap();
        assert!((frac.h() - smooth.h()).abs() <= 1e-12 * smooth.h());
        assert!((frac.h() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn linear_policy_steps() {
        let class = SmoothnessClass::linear(2.0).unwrap();
        let p = make_step_policy(class, 0.01).unwrap();
        assert!((p.h() - 0.0025).abs() < 1e-18);
        assert_eq!(p.epsilon(), 0.0);
        let hs = p.slope_step().unwrap();
        assert!((hs - 10.0 * 0.01 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let class = SmoothnessClass::smooth(1.0, 2.0).unwrap();
        match make_step_policy(class, 0.3) {
            Err(ModelError::DomainTooSmall { h }) => assert!((h - 0.3f64.sqrt()).abs() < 1e-12),
            other => panic!("expected DomainTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn policy_is_monotone_in_delta() {
        let class = SmoothnessClass::smooth(1.0, 3.0).unwrap();
        let mut prev_h = 0.0;
        let mut prev_eps = 0.0;
        for delta in [1e-5, 1e-4, 1e-3, 1e-2] {
            let p = make_step_policy(class, delta).unwrap();
            assert!(p.h() > prev_h && p.epsilon() > prev_eps);
            prev_h = p.h();
            prev_eps = p.epsilon();
        }
    }

    #[test]
    fn class_invariants_enforced() {
        assert!(SmoothnessClass::smooth(1.0, 0.0).is_err());
        assert!(SmoothnessClass::smooth(0.0, 1.0).is_err());
        assert!(SmoothnessClass::fractional(1.0, 1.0, 1.0).is_err());
        assert!(SmoothnessClass::fractional(1.0, 2.1, 1.0).is_err());
        assert!(SmoothnessClass::fractional(1.0, 1.5, 0.0).is_err());
        assert!(SmoothnessClass::linear(0.0).is_err());
        assert!(SmoothnessClass::smooth(1.0, 1.0).unwrap().with_m0(-1.0).is_err());
    }

    #[test]
    fn grid_nodes_for_tenth_step() {
        let g = DetectionGrid::new(0.1).unwrap();
        assert_eq!(g.j_max(), 9);
        assert!((g.node_x(1) - 0.1).abs() < 1e-15);
        assert!((g.node_x(9) - 0.9).abs() < 1e-15);
        for j in g.nodes() {
            let x = g.node_x(j);
            assert!(x >= g.h() - 1e-12 && x <= 1.0 - g.h() + 1e-12);
        }
    }

    #[test]
    fn grid_intervals_overlap_on_half_step() {
        let g = DetectionGrid::new(0.07).unwrap();
        for j in 1..g.j_max() {
            let (_, hi) = g.interval(j);
            let (lo_next, _) = g.interval(j + 1);
            assert!(lo_next < hi, "I_{j} and I_{} must overlap", j + 1);
            assert!((hi - lo_next - g.h()).abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_source_snaps_and_inflates_delta() {
        let values: Vec<f64> = (0..=1000).map(|k| (k as f64 / 1000.0).powi(2)).collect();
        let src = SampledGridSource::new(values, 0.001, 2.0).unwrap();
        assert!((src.dx() - 0.001).abs() < 1e-15);
        assert!((src.effective_delta() - 0.002).abs() < 1e-15);
        // Snap to nearest node.
        assert_eq!(src.eval(0.50002), src.eval(0.5));
        assert_eq!(src.eval(0.4996), src.eval(0.5));
        assert_eq!(src.eval(-5.0), src.eval(0.0));
        assert_eq!(src.eval(7.0), src.eval(1.0));
    }

    #[test]
    fn effective_delta_examples() {
        let src = SampledGridSource::new(vec![0.0; 251], 0.01, 5.0).unwrap();
        assert!((src.dx() - 0.004).abs() < 1e-15);
        assert!((src.effective_delta() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn from_points_validates_uniformity() {
        let good: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64 / 10.0, 0.0)).collect();
        assert!(SampledGridSource::from_points(&good, 0.01, 1.0).is_ok());

        let mut jittered = good.clone();
        jittered[5].0 += 1e-6;
        assert!(matches!(
            SampledGridSource::from_points(&jittered, 0.01, 1.0),
            Err(ModelError::NonUniformGrid(_))
        ));

        let not_unit: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64 / 5.0, 0.0)).collect();
        assert!(SampledGridSource::from_points(&not_unit, 0.01, 1.0).is_err());
    }
}
