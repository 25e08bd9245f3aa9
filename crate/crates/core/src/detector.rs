//! Classification of grid nodes into smooth / jump / kink / critical-point,
//! with guaranteed error bounds on every reported size.
//!
//! On a smooth stretch `|f_j| <= m1 + delta/h`, so any node exceeding
//! `jump_threshold = kappa * (m1 + 0.5*epsilon)` with `kappa > 1` certifies a
//! discontinuity inside its interval (for the smooth step, `delta/h` equals
//! `0.5*epsilon` exactly). Kink logic runs on the pair increments
//! `f_{j+1} - f_j`: on a fully smooth window the true part is at most
//! `epsilon` (two interval means of `f'` taken `2h` apart, times 1/2) and the
//! four noise terms contribute up to `2*delta/h = epsilon` more, so the pair
//! increment of a smooth window never exceeds `2*epsilon` under any admissible
//! noise. The kink threshold is set at `2.5*epsilon` to keep a half-epsilon
//! margin above that ceiling.
//!
//! Sign changes of `f'` are certified through the sign floor: `|f_j| >
//! epsilon` pins the sign of `f'(jh)`. A certified sign change whose interior
//! never fires the kink rule is a critical point; a certified adjacent pair
//! with increment above `epsilon` is a derivative jump. Both follow from the
//! error bound on `f_j`; the windowed form is what makes flat vertex regions
//! (where several nodes sit below the floor) classifiable at all.

use crate::differentiator::{derivative_table, DerivativeEstimate};
use crate::model::{
    make_step_policy_with_t, DetectionGrid, DetectionReport, Event, EventKind, MaskReason,
    MaskedNode, ModelError, ReportParams, SignalSource, SmoothnessClass, SmoothnessKind,
    StepPolicy,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("kink classification is unsupported in linear mode (epsilon degenerates to 0)")]
    ModeUnsupportedKinks,
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("bracket cannot be refined: {0}")]
    NotRefinable(String),
    #[error("invalid refinement request: {0}")]
    InvalidRefinement(String),
}

/// Default exceedance factor over the smooth-region ceiling for jump flags.
pub const DEFAULT_JUMP_FACTOR: f64 = 4.0;

/// Multiple of `epsilon` a pair increment must exceed to certify a kink.
/// The smooth-window ceiling under worst-case noise is `2*epsilon`
/// (`epsilon` from the increment of the true derivative means, `epsilon`
/// from the four noise endpoints), so 2.5 leaves a sound margin.
pub const KINK_FACTOR: f64 = 2.5;

/// All classification thresholds, in the units of the active policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Exceedance factor `kappa > 1`.
    pub jump_factor: f64,
    /// `kappa * (m1 + 0.5*epsilon)`: flag node `j` when `|f_j|` exceeds this.
    pub jump_threshold: f64,
    /// Pair increments above this certify a kink.
    pub kink_threshold: f64,
    /// Certified-adjacent-pair increments at or below this indicate a
    /// critical point rather than a derivative jump.
    pub critical_threshold: f64,
    /// Minimum `|f_j|` for trusting the sign of `f'(jh)`.
    pub sign_floor: f64,
    /// Smallest guaranteed-detectable jump, `2h * jump_threshold * (1+1/kappa)`;
    /// informational.
    pub p_min: f64,
}

impl Thresholds {
    /// Thresholds for `policy` with exceedance factor `kappa`.
    ///
    /// Fails unless the flag threshold clears the actual smooth-region
    /// ceiling `m1 + delta/h` (guaranteeing zero false jump flags). For the
    /// smooth and fractional policies any `kappa > 1` does; the linear
    /// policy needs `kappa > 3` because its `epsilon` is 0 while `delta/h`
    /// is `2*m1`.
    pub fn new(policy: &StepPolicy, kappa: f64) -> Result<Self, DetectError> {
        if !kappa.is_finite() || kappa <= 1.0 {
            return Err(DetectError::InvalidThresholds(format!(
                "jump factor {kappa} must be finite and > 1"
            )));
        }
        let m1 = policy.m1();
        let eps = policy.epsilon();
        let jump_threshold = kappa * (m1 + 0.5 * eps);
        let ceiling = m1 + policy.delta() / policy.h();
        if jump_threshold <= ceiling {
            return Err(DetectError::InvalidThresholds(format!(
                "jump threshold {jump_threshold} does not clear the smooth ceiling {ceiling}"
            )));
        }
        Ok(Thresholds {
            jump_factor: kappa,
            jump_threshold,
            kink_threshold: KINK_FACTOR * eps,
            critical_threshold: eps,
            sign_floor: eps,
            p_min: 2.0 * policy.h() * jump_threshold * (1.0 + 1.0 / kappa),
        })
    }
}

/// Indices `j` (1-based grid nodes) whose `|f_j|` exceeds the jump threshold.
pub fn flag_jump_nodes(table: &[DerivativeEstimate], th: &Thresholds) -> Vec<usize> {
    table
        .iter()
        .enumerate()
        .filter(|(_, e)| e.value.abs() > th.jump_threshold)
        .map(|(i, _)| i + 1)
        .collect()
}

/// A maximal run of consecutive flagged nodes, treated as one candidate jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlagRun {
    /// First flagged node of the run.
    pub start: usize,
    /// Last flagged node of the run (inclusive).
    pub end: usize,
    /// Node with the largest `|f_j|` in the run (smallest index on ties).
    pub representative: usize,
}

/// Merges sorted flags into maximal runs. Adjacent intervals overlap by
/// construction, so a single jump can flag two consecutive nodes; the run
/// reports the hull and the strongest node.
pub fn merge_flags(flags: &[usize], table: &[DerivativeEstimate]) -> Vec<FlagRun> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < flags.len() {
        let start = flags[i];
        let mut end = start;
        while i + 1 < flags.len() && flags[i + 1] == end + 1 {
            i += 1;
            end = flags[i];
        }
        let representative = (start..=end)
            .max_by(|&a, &b| {
                table[a - 1]
                    .value
                    .abs()
                    .partial_cmp(&table[b - 1].value.abs())
                    .unwrap()
                    .then(b.cmp(&a)) // ties: smaller index wins
            })
            .unwrap();
        runs.push(FlagRun { start, end, representative });
        i += 1;
    }
    runs
}

/// Jump size across the discontinuity inside node `j`'s interval:
/// the raw increment of the noisy data over that interval.
///
/// Returns `(size, bound)`: `|size - p| <= bound` always, where the bound is
/// `2*delta + 2*m1*h` (smooth/fractional) or `2*delta + 4*m1*h = 4*delta`
/// (linear, at its prescribed step).
pub fn estimate_jump<S: SignalSource + ?Sized>(
    src: &S,
    j: usize,
    policy: &StepPolicy,
) -> (f64, f64) {
    let h = policy.h();
    let x = j as f64 * h;
    let size = src.eval(x + h) - src.eval(x - h);
    let bound = match policy.class().kind() {
        SmoothnessKind::Linear { m1 } => 2.0 * policy.delta() + 4.0 * m1 * h,
        _ => 2.0 * policy.delta() + 2.0 * policy.m1() * h,
    };
    (size, bound)
}

/// `f_{j+1} - f_j` for the pair with lower node `j`.
fn pair_increment(table: &[DerivativeEstimate], j: usize) -> f64 {
    table[j].value - table[j - 1].value
}

/// Signed derivative-jump estimate for a kink at pair `(j, j+1)`:
/// `2*(f_{j+1} - f_j)`, with guaranteed magnitude error `7*epsilon`.
pub fn estimate_derivative_jump(
    table: &[DerivativeEstimate],
    pair: (usize, usize),
    policy: &StepPolicy,
) -> (f64, f64) {
    debug_assert_eq!(pair.1, pair.0 + 1, "pairs are adjacent nodes");
    (2.0 * pair_increment(table, pair.0), 7.0 * policy.epsilon())
}

/// Classifies kinks and critical points on the nodes left eligible after
/// jump exclusion.
///
/// Nodes inside jump runs and their immediate neighbors are excluded first
/// (the kink analysis presumes the function is continuous on its window).
/// Pairs whose increment exceeds the kink threshold become kink events,
/// merged across consecutive pairs with the strongest pair as representative.
/// Certified sign changes elsewhere become critical points, except that an
/// adjacent certified pair with increment above `critical_threshold` is a
/// kink whose derivative jump slipped under the kink threshold.
pub fn classify_kinks(
    table: &[DerivativeEstimate],
    jump_runs: &[FlagRun],
    th: &Thresholds,
    policy: &StepPolicy,
) -> Vec<Event> {
    let n = table.len();
    let h = policy.h();
    if n < 2 {
        return Vec::new();
    }

    // Node exclusion: jump runs plus a one-node collar.
    let mut excluded = vec![false; n + 1]; // 1-based
    for run in jump_runs {
        let lo = run.start.saturating_sub(1).max(1);
        let hi = (run.end + 1).min(n);
        excluded[lo..=hi].fill(true);
    }
    let value = |j: usize| table[j - 1].value;
    let pair_ok = |j: usize| !excluded[j] && !excluded[j + 1];

    // Pass 1: pairs whose increment certifies a kink, merged into runs.
    let fired: Vec<usize> =
        (1..n).filter(|&j| pair_ok(j) && pair_increment(table, j).abs() > th.kink_threshold).collect();
    let mut events = Vec::new();
    let mut pair_blocked = vec![false; n + 1]; // pairs indexed by lower node
    let mut i = 0;
    while i < fired.len() {
        let start = fired[i];
        let mut end = start;
        while i + 1 < fired.len() && fired[i + 1] == end + 1 {
            i += 1;
            end = fired[i];
        }
        let rep = (start..=end)
            .max_by(|&a, &b| {
                pair_increment(table, a)
                    .abs()
                    .partial_cmp(&pair_increment(table, b).abs())
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        // Hull of the windows (jh-h, jh+2h) over the run.
        let interval = (start as f64 * h - h, end as f64 * h + 2.0 * h);
        let (size, bound) = estimate_derivative_jump(table, (rep, rep + 1), policy);
        let mut ev = Event::new(EventKind::Kink, interval);
        ev.size = Some(size);
        ev.size_error_bound = Some(bound);
        ev.diagnostics = (start..=end + 1).map(value).collect();
        events.push(ev);
        let blocked_lo = start.saturating_sub(1).max(1);
        let blocked_hi = (end + 1).min(n - 1);
        pair_blocked[blocked_lo..=blocked_hi].fill(true);
        i += 1;
    }

    // Pass 2: certified sign changes away from jumps and kink runs.
    let certified: Vec<usize> =
        (1..=n).filter(|&j| value(j).abs() > th.sign_floor).collect();
    for w in certified.windows(2) {
        let (l, r) = (w[0], w[1]);
        if value(l) * value(r) >= 0.0 {
            continue;
        }
        if (l..=r).any(|j| excluded[j]) || (l..r).any(|p| pair_blocked[p]) {
            continue;
        }
        let ev = if r == l + 1 {
            let inc = pair_increment(table, l);
            let interval = (l as f64 * h, r as f64 * h);
            if inc.abs() <= th.critical_threshold {
                let mut ev = Event::new(EventKind::CriticalPoint, interval);
                ev.diagnostics = vec![value(l), value(r)];
                ev
            } else {
                let (size, bound) = estimate_derivative_jump(table, (l, r), policy);
                let mut ev = Event::new(EventKind::Kink, interval);
                ev.size = Some(size);
                ev.size_error_bound = Some(bound);
                ev.diagnostics = vec![value(l), value(r)];
                ev
            }
        } else {
            // The certified flanks bracket a flat vertex region; every pair
            // between them stayed below the kink threshold.
            let mut ev = Event::new(EventKind::CriticalPoint, (l as f64 * h, r as f64 * h));
            ev.diagnostics = (l..=r).map(value).collect();
            ev
        };
        events.push(ev);
    }

    events
}

/// Options for [`detect_with_options`].
#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    /// Exceedance factor for jump flags.
    pub kappa: f64,
    /// Slope-confidence parameter for the linear variant.
    pub t: f64,
    /// Fail with `ModeUnsupportedKinks` instead of silently skipping kink
    /// classification when the class is linear.
    pub require_kinks: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions { kappa: DEFAULT_JUMP_FACTOR, t: 10.0, require_kinks: false }
    }
}

/// Full pipeline with default options: policy, grid, derivative table, jump
/// flagging and merging, jump sizes, kink/critical classification, masking,
/// report assembly.
pub fn detect<S: SignalSource + ?Sized>(
    src: &S,
    class: SmoothnessClass,
) -> Result<DetectionReport, DetectError> {
    detect_with_options(src, class, &DetectOptions::default())
}

/// See [`detect`]. The noise bound is taken from the source.
pub fn detect_with_options<S: SignalSource + ?Sized>(
    src: &S,
    class: SmoothnessClass,
    opts: &DetectOptions,
) -> Result<DetectionReport, DetectError> {
    let kinks_enabled = !class.is_linear();
    if opts.require_kinks && !kinks_enabled {
        return Err(DetectError::ModeUnsupportedKinks);
    }
    let delta = src.delta();
    let policy = make_step_policy_with_t(class, delta, opts.t)?;
    let grid = DetectionGrid::new(policy.h())?;
    let th = Thresholds::new(&policy, opts.kappa)?;

    let table = derivative_table(src, &grid, &policy);
    let flags = flag_jump_nodes(&table, &th);
    let runs = merge_flags(&flags, &table);

    let mut events: Vec<Event> = Vec::new();
    for run in &runs {
        let (size, bound) = estimate_jump(src, run.representative, &policy);
        let interval = (grid.node_x(run.start) - grid.h(), grid.node_x(run.end) + grid.h());
        let mut ev = Event::new(EventKind::Jump, interval);
        ev.size = Some(size);
        ev.size_error_bound = Some(bound);
        ev.diagnostics = (run.start..=run.end).map(|j| table[j - 1].value).collect();
        events.push(ev);
    }
    if kinks_enabled {
        events.extend(classify_kinks(&table, &runs, &th, &policy));
    }
    events.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());

    // The reported derivative table: the detection grid for smooth and
    // fractional classes, the wide slope grid for linear (the detection step
    // there amplifies noise by 2*m1 and is useless as a derivative).
    let (report_grid, report_table) = match policy.slope_step() {
        Some(hs) => {
            let g = DetectionGrid::new(hs)?;
            let t = derivative_table(src, &g, &policy);
            (g, t)
        }
        None => (grid, table),
    };

    let mut derivative = Vec::new();
    let mut masked_nodes = Vec::new();
    for j in report_grid.nodes() {
        let (lo, hi) = report_grid.interval(j);
        let hit = events.iter().find(|e| e.interval.0 < hi && lo < e.interval.1);
        match hit {
            Some(e) => masked_nodes.push(MaskedNode {
                node: j,
                x: report_grid.node_x(j),
                reason: match e.kind {
                    EventKind::Jump => MaskReason::JumpNeighborhood,
                    EventKind::Kink => MaskReason::KinkNeighborhood,
                    EventKind::CriticalPoint => MaskReason::CriticalNeighborhood,
                },
            }),
            None => derivative.push((report_grid.node_x(j), report_table[j - 1].value)),
        }
    }
    debug_assert_eq!(derivative.len() + masked_nodes.len(), report_grid.j_max());
    debug_assert!(events.windows(2).all(|w| w[0].interval.1 <= w[1].interval.0 + 1e-12));

    let params = ReportParams {
        delta,
        class,
        h: policy.h(),
        epsilon: policy.epsilon(),
        table_step: report_grid.h(),
        slope_step: policy.slope_step(),
        jump_factor: th.jump_factor,
        jump_threshold: th.jump_threshold,
        kink_threshold: th.kink_threshold,
        critical_threshold: th.critical_threshold,
        sign_floor: th.sign_floor,
        p_min: th.p_min,
        kinks_enabled,
    };
    Ok(DetectionReport { derivative, events, params, masked_nodes })
}

/// Result of [`refine_jump_location`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedBracket {
    pub lo: f64,
    pub hi: f64,
    /// True when the query resolution, not the requested width, stopped the
    /// refinement.
    pub floor_reached: bool,
}

impl RefinedBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Narrows a bracket known to contain exactly one jump of `f` down to
/// `max(target_width, 4 * query resolution)`.
///
/// Each round covers the bracket with three half-overlapping windows and
/// keeps the intersection of those whose increment exceeds `2*delta +
/// 2*m1*h` (`h` the window half-width). That threshold is the ceiling of a
/// smooth increment, so a passing window certifies containment. A jump is admissible once
/// `|p|` clears `4*delta` plus the smooth drift, which is why brackets whose
/// overall increment stays at or below `4*delta + m1*width` are rejected as
/// `NotRefinable` up front. `m2` is accepted for parity with the
/// classification pipeline; the window test uses the slope form, which stays
/// valid as the window shrinks.
pub fn refine_jump_location<S: SignalSource + ?Sized>(
    src: &S,
    bracket: (f64, f64),
    delta: f64,
    m1: f64,
    _m2: f64,
    target_width: f64,
) -> Result<RefinedBracket, DetectError> {
    let (mut lo, mut hi) = bracket;
    if !(lo >= 0.0 && hi <= 1.0 && lo < hi) {
        return Err(DetectError::InvalidRefinement(format!(
            "bracket ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1"
        )));
    }
    if !target_width.is_finite() || target_width <= 0.0 {
        return Err(DetectError::InvalidRefinement(format!(
            "target width {target_width} must be positive"
        )));
    }
    if !delta.is_finite() || delta <= 0.0 || !m1.is_finite() || m1 < 0.0 {
        return Err(DetectError::InvalidRefinement(
            "delta must be positive and m1 nonnegative".into(),
        ));
    }
    let resolution = src.resolution();
    let stop = target_width.max(4.0 * resolution);

    // Detectability floor: below 4*delta the windowed test can never
    // separate a jump from noise.
    let first = (src.eval(hi) - src.eval(lo)).abs();
    if first <= 4.0 * delta + m1 * (hi - lo) {
        return Err(DetectError::NotRefinable(format!(
            "bracket increment {first} does not clear the detectability floor {}",
            4.0 * delta + m1 * (hi - lo)
        )));
    }

    while hi - lo > stop {
        let w = hi - lo;
        let half = w / 4.0;
        let windows =
            [(lo, lo + 2.0 * half), (lo + half, lo + 3.0 * half), (lo + 2.0 * half, hi)];
        let mut new_lo = f64::NEG_INFINITY;
        let mut new_hi = f64::INFINITY;
        let mut passed = false;
        for &(a, b) in &windows {
            let inc = (src.eval(b) - src.eval(a)).abs();
            if inc > 2.0 * delta + m1 * (b - a) {
                passed = true;
                new_lo = new_lo.max(a);
                new_hi = new_hi.min(b);
            }
        }
        if !passed {
            return Err(DetectError::NotRefinable(format!(
                "no window of width {} certifies the jump (size too small relative to the noise floor)",
                2.0 * half
            )));
        }
        (lo, hi) = (new_lo, new_hi);
    }
    Ok(RefinedBracket { lo, hi, floor_reached: stop > target_width })
}
