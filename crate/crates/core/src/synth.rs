//! Synthetic piecewise-smooth test signals with exact ground truth.
//!
//! A [`PieceSpec`] lists breakpoints, one smooth primitive per segment, and a
//! join flag per interior breakpoint (jump of declared size, kink of declared
//! derivative jump, or smooth join). Building it yields an exact evaluator
//! plus a [`GroundTruth`] with every feature location and size and the true
//! derivative bounds, all computed analytically. Noise wrappers inject
//! sup-norm-bounded noise deterministically, so arbitrary query points
//! (including refinement queries) answer consistently.

use crate::model::{EventKind, SignalSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Tolerance for declared-vs-computed sizes in a [`PieceSpec`].
const DECL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid piece spec: {0}")]
    InvalidSpec(String),
    #[error("corpus constraints infeasible: {0}")]
    ConstraintsInfeasible(String),
}

/// A smooth primitive on one segment, in global coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Piece {
    Affine { slope: f64, intercept: f64 },
    /// `c0 + c1*x + c2*x^2 + c3*x^3`
    Poly { coeffs: [f64; 4] },
    /// `amplitude * sin(frequency*x + phase)`
    Sine { amplitude: f64, frequency: f64, phase: f64 },
}

impl Piece {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Piece::Affine { slope, intercept } => slope * x + intercept,
            Piece::Poly { coeffs: [c0, c1, c2, c3] } => ((c3 * x + c2) * x + c1) * x + c0,
            Piece::Sine { amplitude, frequency, phase } => {
                amplitude * (frequency * x + phase).sin()
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Piece::Affine { slope, .. } => slope,
            Piece::Poly { coeffs: [_, c1, c2, c3] } => (3.0 * c3 * x + 2.0 * c2) * x + c1,
            Piece::Sine { amplitude, frequency, phase } => {
                amplitude * frequency * (frequency * x + phase).cos()
            }
        }
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        match *self {
            Piece::Affine { .. } => 0.0,
            Piece::Poly { coeffs: [_, _, c2, c3] } => 6.0 * c3 * x + 2.0 * c2,
            Piece::Sine { amplitude, frequency, phase } => {
                -amplitude * frequency * frequency * (frequency * x + phase).sin()
            }
        }
    }

    /// `sup |f'|` over `[lo, hi]`, analytic.
    fn sup_derivative(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Piece::Affine { slope, .. } => slope.abs(),
            Piece::Poly { coeffs: [_, _, c2, c3] } => {
                let mut m = self.derivative(lo).abs().max(self.derivative(hi).abs());
                // f' is quadratic; its extremum sits where f'' = 0.
                if c3 != 0.0 {
                    let xs = -c2 / (3.0 * c3);
                    if xs > lo && xs < hi {
                        m = m.max(self.derivative(xs).abs());
                    }
                }
                m
            }
            Piece::Sine { amplitude, frequency, phase } => {
                let aw = (amplitude * frequency).abs();
                aw * sup_abs_cos(frequency * lo + phase, frequency * hi + phase)
            }
        }
    }

    /// `sup |f''|` over `[lo, hi]`, analytic.
    fn sup_second_derivative(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Piece::Affine { .. } => 0.0,
            Piece::Poly { .. } => {
                self.second_derivative(lo).abs().max(self.second_derivative(hi).abs())
            }
            Piece::Sine { amplitude, frequency, phase } => {
                let aw2 = (amplitude * frequency * frequency).abs();
                aw2 * sup_abs_sin(frequency * lo + phase, frequency * hi + phase)
            }
        }
    }

    /// Interior zeros of `f'` where the sign changes.
    fn critical_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match *self {
            Piece::Affine { .. } => {}
            Piece::Poly { coeffs: [_, c1, c2, c3] } => {
                // f'(x) = 3*c3*x^2 + 2*c2*x + c1
                let (qa, qb, qc) = (3.0 * c3, 2.0 * c2, c1);
                if qa == 0.0 {
                    if qb != 0.0 {
                        out.push(-qc / qb);
                    }
                } else {
                    let disc = qb * qb - 4.0 * qa * qc;
                    if disc > 0.0 {
                        let s = disc.sqrt();
                        out.push((-qb - s) / (2.0 * qa));
                        out.push((-qb + s) / (2.0 * qa));
                    }
                    // disc == 0 touches zero without a sign change
                }
            }
            Piece::Sine { frequency, phase, amplitude } => {
                if amplitude != 0.0 && frequency != 0.0 {
                    // cos(frequency*x + phase) = 0 at pi/2 + k*pi
                    use std::f64::consts::PI;
                    let (alpha, beta) = ordered(frequency * lo + phase, frequency * hi + phase);
                    let k_lo = ((alpha - PI / 2.0) / PI).ceil() as i64;
                    let k_hi = ((beta - PI / 2.0) / PI).floor() as i64;
                    for k in k_lo..=k_hi {
                        out.push((PI / 2.0 + k as f64 * PI - phase) / frequency);
                    }
                }
            }
        }
        out.retain(|&x| x > lo && x < hi);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `max |cos|` over the phase interval.
fn sup_abs_cos(a: f64, b: f64) -> f64 {
    use std::f64::consts::PI;
    let (alpha, beta) = ordered(a, b);
    if (alpha / PI).ceil() <= (beta / PI).floor() {
        1.0
    } else {
        alpha.cos().abs().max(beta.cos().abs())
    }
}

/// `max |sin|` over the phase interval.
fn sup_abs_sin(a: f64, b: f64) -> f64 {
    use std::f64::consts::PI;
    let (alpha, beta) = ordered(a, b);
    if ((alpha - PI / 2.0) / PI).ceil() <= ((beta - PI / 2.0) / PI).floor() {
        1.0
    } else {
        alpha.sin().abs().max(beta.sin().abs())
    }
}

/// How two adjacent pieces meet at an interior breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Join {
    /// `f` jumps by `size = f(b+0) - f(b-0)`.
    Jump { size: f64 },
    /// `f` continuous, `f'` jumps by `slope_jump = f'(b+0) - f'(b-0)`.
    Kink { slope_jump: f64 },
    /// Value and slope continuous (curvature may change within the budget).
    Smooth,
}

/// A piecewise-smooth signal on `[0,1]` with declared feature sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceSpec {
    /// `0 = b_0 < b_1 < ... < b_n = 1`
    pub breakpoints: Vec<f64>,
    /// One per segment `[b_i, b_{i+1}]`.
    pub pieces: Vec<Piece>,
    /// One per interior breakpoint `b_1 .. b_{n-1}`.
    pub joins: Vec<Join>,
}

/// An exact feature with its true location and size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthEvent {
    pub kind: EventKind,
    pub location: f64,
    /// Jump size `p` for jumps, derivative jump `P` for kinks, 0 for
    /// critical points.
    pub size: f64,
}

/// Everything a test needs to grade a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub events: Vec<TruthEvent>,
    /// `sup |f'|` off breakpoints, analytic.
    pub m1_true: f64,
    /// `sup |f''|` off breakpoints, analytic.
    pub m2_true: f64,
}

impl GroundTruth {
    pub fn jumps(&self) -> impl Iterator<Item = &TruthEvent> {
        self.events.iter().filter(|e| e.kind == EventKind::Jump)
    }
    pub fn kinks(&self) -> impl Iterator<Item = &TruthEvent> {
        self.events.iter().filter(|e| e.kind == EventKind::Kink)
    }
    pub fn critical_points(&self) -> impl Iterator<Item = &TruthEvent> {
        self.events.iter().filter(|e| e.kind == EventKind::CriticalPoint)
    }
}

/// Exact evaluator for a validated [`PieceSpec`].
///
/// Values at breakpoints follow the right-limit convention
/// `f(b) = f(b+0)`; the detector never relies on values exactly at
/// discontinuities.
#[derive(Debug, Clone)]
pub struct ExactSignal {
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
}

impl ExactSignal {
    fn segment(&self, x: f64) -> usize {
        // First segment whose right end is strictly above x; right-limit
        // convention puts x == b on the segment starting at b.
        let n = self.pieces.len();
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        idx.saturating_sub(1).min(n - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.pieces[self.segment(x)].value(x)
    }

    /// One-sided (right-limit) derivative.
    pub fn derivative(&self, x: f64) -> f64 {
        self.pieces[self.segment(x)].derivative(x)
    }

    /// One-sided (right-limit) second derivative.
    pub fn second_derivative(&self, x: f64) -> f64 {
        self.pieces[self.segment(x)].second_derivative(x)
    }
}

/// Validates the spec and returns the exact evaluator plus ground truth.
pub fn build_signal(spec: &PieceSpec) -> Result<(ExactSignal, GroundTruth), SynthError> {
    let nb = spec.breakpoints.len();
    if nb < 2 {
        return Err(SynthError::InvalidSpec("need at least breakpoints 0 and 1".into()));
    }
    if spec.pieces.len() != nb - 1 {
        return Err(SynthError::InvalidSpec(format!(
            "{} pieces do not fit {} breakpoints",
            spec.pieces.len(),
            nb
        )));
    }
    if spec.joins.len() != nb - 2 {
        return Err(SynthError::InvalidSpec(format!(
            "{} joins do not fit {} interior breakpoints",
            spec.joins.len(),
            nb - 2
        )));
    }
    if spec.breakpoints[0].abs() > DECL_TOL || (spec.breakpoints[nb - 1] - 1.0).abs() > DECL_TOL {
        return Err(SynthError::InvalidSpec("breakpoints must span exactly [0,1]".into()));
    }
    for w in spec.breakpoints.windows(2) {
        if w[1] <= w[0] {
            return Err(SynthError::InvalidSpec(format!(
                "breakpoints not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
    }
    if let Some(Piece::Sine { frequency, .. }) =
        spec.pieces.iter().find(|p| matches!(p, Piece::Sine { frequency, .. } if *frequency == 0.0))
    {
        return Err(SynthError::InvalidSpec(format!("sine frequency {frequency} must be nonzero")));
    }

    let mut events = Vec::new();
    for (i, join) in spec.joins.iter().enumerate() {
        let b = spec.breakpoints[i + 1];
        let left = &spec.pieces[i];
        let right = &spec.pieces[i + 1];
        let p = right.value(b) - left.value(b);
        let slope_jump = right.derivative(b) - left.derivative(b);
        match *join {
            Join::Jump { size } => {
                if (p - size).abs() > DECL_TOL * size.abs().max(1.0) {
                    return Err(SynthError::InvalidSpec(format!(
                        "declared jump {size} at {b} but pieces give {p}"
                    )));
                }
                if size == 0.0 {
                    return Err(SynthError::InvalidSpec(format!("zero-size jump declared at {b}")));
                }
                events.push(TruthEvent { kind: EventKind::Jump, location: b, size: p });
            }
            Join::Kink { slope_jump: declared } => {
                if p.abs() > DECL_TOL {
                    return Err(SynthError::InvalidSpec(format!(
                        "kink at {b} must be value-continuous, got value gap {p}"
                    )));
                }
                if (slope_jump - declared).abs() > DECL_TOL * declared.abs().max(1.0) {
                    return Err(SynthError::InvalidSpec(format!(
                        "declared slope jump {declared} at {b} but pieces give {slope_jump}"
                    )));
                }
                if declared == 0.0 {
                    return Err(SynthError::InvalidSpec(format!("zero-size kink declared at {b}")));
                }
                events.push(TruthEvent { kind: EventKind::Kink, location: b, size: slope_jump });
            }
            Join::Smooth => {
                if p.abs() > DECL_TOL || slope_jump.abs() > DECL_TOL {
                    return Err(SynthError::InvalidSpec(format!(
                        "smooth join at {b} but value gap {p}, slope gap {slope_jump}"
                    )));
                }
            }
        }
    }

    let mut m1_true: f64 = 0.0;
    let mut m2_true: f64 = 0.0;
    for (i, piece) in spec.pieces.iter().enumerate() {
        let (lo, hi) = (spec.breakpoints[i], spec.breakpoints[i + 1]);
        m1_true = m1_true.max(piece.sup_derivative(lo, hi));
        m2_true = m2_true.max(piece.sup_second_derivative(lo, hi));
        for q in piece.critical_points(lo, hi) {
            events.push(TruthEvent { kind: EventKind::CriticalPoint, location: q, size: 0.0 });
        }
    }
    events.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());

    let signal =
        ExactSignal { breakpoints: spec.breakpoints.clone(), pieces: spec.pieces.clone() };
    Ok((signal, GroundTruth { events, m1_true, m2_true }))
}

/// How realized noise values are chosen (all bounded by `delta` in absolute
/// value; the declared bound is what detection guarantees are conditional on).
#[derive(Clone)]
pub enum NoiseModel {
    /// Independent value in `[-delta, delta]` per query point, a
    /// deterministic hash of `(seed, x)`.
    Uniform,
    /// `+delta` where the direction function returns true, else `-delta`.
    /// Used to realize worst cases exactly.
    Adversarial(Arc<dyn Fn(f64) -> bool + Send + Sync>),
    /// `+/-delta` alternating in blocks of two grid steps, so that the two
    /// endpoints of every central difference at step `h` get opposite signs.
    Checker { h: f64 },
    /// No realized noise (declared bound still applies downstream).
    Zero,
}

impl std::fmt::Debug for NoiseModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseModel::Uniform => write!(f, "Uniform"),
            NoiseModel::Adversarial(_) => write!(f, "Adversarial(..)"),
            NoiseModel::Checker { h } => write!(f, "Checker {{ h: {h} }}"),
            NoiseModel::Zero => write!(f, "Zero"),
        }
    }
}

/// A noisy view of an exact signal. Queries are deterministic in
/// `(seed, x)` and safe for concurrent use.
#[derive(Clone)]
pub struct NoisySource {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    delta: f64,
    model: NoiseModel,
    seed: u64,
}

impl std::fmt::Debug for NoisySource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NoisySource")
            .field("delta", &self.delta)
            .field("model", &self.model)
            .field("seed", &self.seed)
            .finish()
    }
}

/// Wraps the exact evaluator with bounded noise.
pub fn add_noise(signal: ExactSignal, delta: f64, model: NoiseModel, seed: u64) -> NoisySource {
    NoisySource { f: Arc::new(move |x| signal.value(x)), delta, model, seed }
}

impl NoisySource {
    /// Noise wrapper around an arbitrary exact evaluator.
    pub fn from_fn<F>(f: F, delta: f64, model: NoiseModel, seed: u64) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        NoisySource { f: Arc::new(f), delta, model, seed }
    }

    fn noise(&self, x: f64) -> f64 {
        if self.delta == 0.0 {
            return 0.0;
        }
        match &self.model {
            NoiseModel::Uniform => {
                let u = hash_unit(self.seed, x);
                (2.0 * u - 1.0) * self.delta
            }
            NoiseModel::Adversarial(dir) => {
                if dir(x) {
                    self.delta
                } else {
                    -self.delta
                }
            }
            NoiseModel::Checker { h } => {
                let k = (x / h).round() as i64;
                if k.rem_euclid(4) < 2 {
                    self.delta
                } else {
                    -self.delta
                }
            }
            NoiseModel::Zero => 0.0,
        }
    }
}

impl SignalSource for NoisySource {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x) + self.noise(x)
    }
    fn delta(&self) -> f64 {
        self.delta
    }
}

/// Deterministic hash of `(seed, x)` to `[0, 1)`.
fn hash_unit(seed: u64, x: f64) -> f64 {
    let mut z = seed ^ x.to_bits().wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Floors and caps the corpus generator must respect.
#[derive(Debug, Clone, Copy)]
pub struct CorpusConstraints {
    /// Minimum pairwise distance between features, and from the domain ends.
    pub min_separation: f64,
    /// Smallest jump magnitude `|p|`.
    pub p_min: f64,
    /// Smallest derivative-jump magnitude `|P|` at kinks.
    pub kink_min: f64,
    /// Slope budget: generated signals keep `sup |f'| <= m1_max`.
    pub m1_max: f64,
    /// Curvature budget: generated signals keep `sup |f''| <= m2_max`.
    pub m2_max: f64,
}

/// Reproducible corpus of piecewise-smooth signals: each entry mixes 0-3
/// jumps, 0-2 kinks and 0-2 critical points, pairwise separated by at least
/// `min_separation`, with sizes above the floors and derivative bounds below
/// the caps.
pub fn random_corpus(
    n: usize,
    seed: u64,
    c: &CorpusConstraints,
) -> Result<Vec<(PieceSpec, GroundTruth)>, SynthError> {
    check_constraints(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(generate_one(&mut rng, c)?);
    }
    Ok(out)
}

fn check_constraints(c: &CorpusConstraints) -> Result<(), SynthError> {
    if !c.min_separation.is_finite() || c.min_separation <= 0.0 {
        return Err(SynthError::ConstraintsInfeasible("min_separation must be > 0".into()));
    }
    if 2.0 * c.min_separation > 1.0 {
        return Err(SynthError::ConstraintsInfeasible(format!(
            "min_separation {} leaves no room for any feature in [0,1]",
            c.min_separation
        )));
    }
    if !c.p_min.is_finite() || c.p_min <= 0.0 || !c.kink_min.is_finite() || c.kink_min < 0.0 {
        return Err(SynthError::ConstraintsInfeasible("size floors must be positive".into()));
    }
    if !c.m1_max.is_finite() || c.m1_max <= 0.0 || !c.m2_max.is_finite() || c.m2_max < 0.0 {
        return Err(SynthError::ConstraintsInfeasible("derivative caps must be positive".into()));
    }
    if c.kink_min > 0.5 * c.m1_max {
        return Err(SynthError::ConstraintsInfeasible(format!(
            "kink floor {} exceeds half the slope budget {}",
            c.kink_min, c.m1_max
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Feat {
    Jump,
    Kink,
    Critical,
}

// One signal. All randomness comes from the shared stream, so a corpus is a
// pure function of (n, seed, constraints).
fn generate_one(
    rng: &mut ChaCha8Rng,
    c: &CorpusConstraints,
) -> Result<(PieceSpec, GroundTruth), SynthError> {
    let sep = c.min_separation;
    // Working bands stay below the caps so fp noise in the realized pieces
    // cannot tip the analytic sups over.
    let slope_band = 0.9 * c.m1_max;
    let curv_band = 0.9 * c.m2_max;

    let mut n_jump = rng.gen_range(0..=3usize);
    let mut n_kink = rng.gen_range(0..=2usize);
    let mut n_crit = rng.gen_range(0..=2usize);
    if c.m2_max == 0.0 {
        // No curvature budget: affine pieces only.
        n_crit = 0;
    }
    if c.kink_min == 0.0 {
        n_kink = 0;
    }
    // Drop features until the separation constraint is satisfiable.
    loop {
        let total = n_jump + n_kink + n_crit;
        if total == 0 || (total + 1) as f64 * sep <= 1.0 {
            break;
        }
        if n_crit > 0 {
            n_crit -= 1;
        } else if n_kink > 0 {
            n_kink -= 1;
        } else {
            n_jump -= 1;
        }
    }
    let total = n_jump + n_kink + n_crit;

    // Positions with pairwise and edge gaps >= sep: lay out the mandatory
    // gaps, then spread the leftover slack with sorted uniforms.
    let slack = 1.0 - (total + 1) as f64 * sep;
    let mut cuts: Vec<f64> = (0..total).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let positions: Vec<f64> =
        cuts.iter().enumerate().map(|(i, u)| (i + 1) as f64 * sep + u * slack).collect();

    // Feature kinds, shuffled, then repaired so no kink immediately precedes
    // a critical point (the host segment's entry slope would be pinned on
    // both sides at once).
    let mut kinds = Vec::with_capacity(total);
    kinds.extend(std::iter::repeat_n(Feat::Jump, n_jump));
    kinds.extend(std::iter::repeat_n(Feat::Kink, n_kink));
    kinds.extend(std::iter::repeat_n(Feat::Critical, n_crit));
    for i in (1..kinds.len()).rev() {
        let j = rng.gen_range(0..=i);
        kinds.swap(i, j);
    }
    let mut changed = true;
    while changed {
        changed = false;
        for i in 1..kinds.len() {
            if kinds[i] == Feat::Critical && kinds[i - 1] == Feat::Kink {
                kinds.swap(i, i - 1);
                changed = true;
            }
        }
    }

    let features: Vec<(f64, Feat)> = positions.into_iter().zip(kinds).collect();
    realize(rng, c, slope_band, curv_band, &features)
}

#[derive(Debug, Clone, Copy)]
enum PendingJoin {
    Start,
    Jump,
    Kink,
    Smooth,
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    l: f64,
    r: f64,
    vertex: Option<f64>,
    left_join: PendingJoin,
}

// Lay out segments between jump/kink breakpoints (critical points live in
// the interior of "host" segments, split by smooth joins when two share a
// gap), then realize quadratic pieces left to right tracking exit value and
// slope.
fn realize(
    rng: &mut ChaCha8Rng,
    c: &CorpusConstraints,
    slope_band: f64,
    curv_band: f64,
    features: &[(f64, Feat)],
) -> Result<(PieceSpec, GroundTruth), SynthError> {
    let mut segs: Vec<Seg> = Vec::new();
    let mut open = Seg { l: 0.0, r: 1.0, vertex: None, left_join: PendingJoin::Start };
    for &(pos, kind) in features {
        match kind {
            Feat::Jump | Feat::Kink => {
                open.r = pos;
                segs.push(open);
                let join = if kind == Feat::Jump { PendingJoin::Jump } else { PendingJoin::Kink };
                open = Seg { l: pos, r: 1.0, vertex: None, left_join: join };
            }
            Feat::Critical => {
                if let Some(q_prev) = open.vertex {
                    // Second critical in the same gap: split at the midpoint
                    // so each host holds exactly one vertex.
                    let mid = 0.5 * (q_prev + pos);
                    open.r = mid;
                    segs.push(open);
                    open =
                        Seg { l: mid, r: 1.0, vertex: Some(pos), left_join: PendingJoin::Smooth };
                } else {
                    open.vertex = Some(pos);
                }
            }
        }
    }
    segs.push(open);

    // A run of hosts linked by smooth joins shares one curvature magnitude
    // (the midpoint splits mirror it), so the cap must come from the whole
    // run's largest arm or a long trailing arm would overrun the slope band.
    let gamma_caps = host_chain_caps(&segs, slope_band, curv_band);

    let mut breakpoints = vec![0.0];
    let mut pieces: Vec<Piece> = Vec::new();
    let mut joins: Vec<Join> = Vec::new();

    // Exit state of the previous piece at the current breakpoint.
    let mut v_prev = rng.gen_range(-0.5..0.5);
    let mut s_prev = 0.0;

    for (idx, seg) in segs.iter().enumerate() {
        let len = seg.r - seg.l;
        let entry_v = match seg.left_join {
            PendingJoin::Jump => v_prev + sample_jump(rng, c),
            _ => v_prev,
        };
        let piece = match seg.vertex {
            Some(q) => {
                // Host segment: f'(x) = gamma * (x - q), crossing zero at q.
                let gamma = match seg.left_join {
                    PendingJoin::Smooth => s_prev / (seg.l - q),
                    PendingJoin::Kink => {
                        // Excluded by the kind-repair pass.
                        return Err(SynthError::ConstraintsInfeasible(
                            "kink directly before a critical point".into(),
                        ));
                    }
                    PendingJoin::Start | PendingJoin::Jump => {
                        let mag = rng.gen_range(0.5..0.95) * gamma_caps[idx];
                        if rng.gen::<bool>() {
                            mag
                        } else {
                            -mag
                        }
                    }
                };
                vertex_piece(seg.l, entry_v, q, gamma)
            }
            None => {
                let entry_s = match seg.left_join {
                    PendingJoin::Start | PendingJoin::Jump => {
                        let mag = rng.gen_range(0.2..0.8) * slope_band;
                        if rng.gen::<bool>() {
                            mag
                        } else {
                            -mag
                        }
                    }
                    PendingJoin::Kink => {
                        // Push the slope toward the opposite sign; the floor
                        // is respected and the result stays in the band.
                        let p_mag = rng.gen_range(1.05..1.6) * c.kink_min;
                        let d = if s_prev > 0.0 { -1.0 } else { 1.0 };
                        s_prev + d * p_mag
                    }
                    PendingJoin::Smooth => s_prev,
                };
                // Exit slope: stay on the entry's side of zero (no stray
                // critical points) and within curvature reach.
                let reach = 0.9 * curv_band * len;
                let sign = if entry_s >= 0.0 { 1.0 } else { -1.0 };
                let lo = (entry_s.abs() - reach).max(0.05 * entry_s.abs());
                let hi = (entry_s.abs() + reach).min(slope_band).max(lo);
                let exit_mag = if hi > lo { rng.gen_range(lo..hi) } else { lo };
                let curvature = if len > 0.0 { (sign * exit_mag - entry_s) / len } else { 0.0 };
                plain_piece(seg.l, entry_v, entry_s, curvature)
            }
        };

        if !pieces.is_empty() {
            // Declared sizes recomputed from the realized pieces so the
            // validator's 1e-12 check holds exactly.
            let b = seg.l;
            let prev = pieces.last().unwrap();
            let join = match seg.left_join {
                PendingJoin::Jump => Join::Jump { size: piece.value(b) - prev.value(b) },
                PendingJoin::Kink => {
                    Join::Kink { slope_jump: piece.derivative(b) - prev.derivative(b) }
                }
                PendingJoin::Smooth => Join::Smooth,
                PendingJoin::Start => unreachable!("start join only opens the first segment"),
            };
            joins.push(join);
            breakpoints.push(b);
        }
        v_prev = piece.value(seg.r);
        s_prev = piece.derivative(seg.r);
        pieces.push(piece);
    }
    breakpoints.push(1.0);

    let spec = PieceSpec { breakpoints, pieces, joins };
    let (_, truth) = build_signal(&spec)?;
    Ok((spec, truth))
}

fn host_chain_caps(segs: &[Seg], slope_band: f64, curv_band: f64) -> Vec<f64> {
    let mut caps = vec![0.0; segs.len()];
    let mut i = 0;
    while i < segs.len() {
        if segs[i].vertex.is_none() {
            i += 1;
            continue;
        }
        let mut j = i;
        let mut cap = curv_band;
        loop {
            let s = &segs[j];
            let q = s.vertex.unwrap();
            let max_arm = (q - s.l).max(s.r - q);
            cap = cap.min(slope_band / max_arm);
            let chained = j + 1 < segs.len()
                && segs[j + 1].vertex.is_some()
                && matches!(segs[j + 1].left_join, PendingJoin::Smooth);
            if chained {
                j += 1;
            } else {
                break;
            }
        }
        caps[i..=j].fill(cap);
        i = j + 1;
    }
    caps
}

fn sample_jump(rng: &mut ChaCha8Rng, c: &CorpusConstraints) -> f64 {
    let mag = rng.gen_range(1.05..2.0) * c.p_min;
    if rng.gen::<bool>() {
        mag
    } else {
        -mag
    }
}

// f(x) = entry_v + (gamma/2) * ((x-q)^2 - (l-q)^2): derivative crosses zero
// exactly at the vertex q.
fn vertex_piece(l: f64, entry_v: f64, q: f64, gamma: f64) -> Piece {
    let c2 = 0.5 * gamma;
    let c1 = -gamma * q;
    let c0 = entry_v - 0.5 * gamma * (l - q) * (l - q) + 0.5 * gamma * q * q;
    Piece::Poly { coeffs: [c0, c1, c2, 0.0] }
}

// f(x) = entry_v + entry_s*(x-l) + (curvature/2)*(x-l)^2
fn plain_piece(l: f64, entry_v: f64, entry_s: f64, curvature: f64) -> Piece {
    if curvature == 0.0 {
        return Piece::Affine { slope: entry_s, intercept: entry_v - entry_s * l };
    }
    let c2 = 0.5 * curvature;
    let c1 = entry_s - curvature * l;
    let c0 = entry_v - entry_s * l + 0.5 * curvature * l * l;
    Piece::Poly { coeffs: [c0, c1, c2, 0.0] }
}
