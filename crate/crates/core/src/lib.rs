//! Stable differentiation of noisy piecewise-smooth functions on `[0,1]`,
//! with detection of jumps of `f`, kinks of `f'`, and critical points, all
//! from sup-norm-bounded noisy point queries and without prior knowledge of
//! how many features there are or where.
//!
//! The estimator is a central difference whose step balances noise
//! amplification against truncation; every reported quantity carries a
//! worst-case error bound conditional only on the declared noise level and
//! derivative bounds. See [`detector::detect`] for the full pipeline and
//! [`synth`] for test-signal generation with exact ground truth.
//!
//! ```
//! use jumpscope::{detect, SmoothnessClass};
//! use jumpscope::synth::{add_noise, build_signal, Join, NoiseModel, Piece, PieceSpec};
//!
//! // A unit step at 0.5 on flat pieces, observed through noise within 5e-3.
//! let spec = PieceSpec {
//!     breakpoints: vec![0.0, 0.5, 1.0],
//!     pieces: vec![
//!         Piece::Affine { slope: 0.0, intercept: 0.0 },
//!         Piece::Affine { slope: 0.0, intercept: 1.0 },
//!     ],
//!     joins: vec![Join::Jump { size: 1.0 }],
//! };
//! let (signal, truth) = build_signal(&spec).unwrap();
//! let noisy = add_noise(signal, 5e-3, NoiseModel::Uniform, 7);
//!
//! let class = SmoothnessClass::smooth(1.0, 2.0).unwrap();
//! let report = detect(&noisy, class).unwrap();
//! let jump = &report.events[0];
//! assert!(jump.interval.0 < 0.5 && 0.5 <= jump.interval.1);
//! let p = truth.events[0].size;
//! assert!((jump.size.unwrap() - p).abs() <= jump.size_error_bound.unwrap());
//! ```

pub mod detector;
pub mod differentiator;
pub mod model;
pub mod synth;

pub use detector::{
    detect, detect_with_options, refine_jump_location, DetectError, DetectOptions, RefinedBracket,
    Thresholds,
};
pub use differentiator::{central_difference, derivative_table, error_bound, DerivativeEstimate};
pub use model::{
    make_step_policy, make_step_policy_with_t, DetectionGrid, DetectionReport, Event, EventKind,
    MaskReason, MaskedNode, ModelError, ReportParams, SampledGridSource, SignalSource,
    SmoothnessClass, SmoothnessKind, StepPolicy,
};
pub use synth::{
    add_noise, build_signal, random_corpus, CorpusConstraints, ExactSignal, GroundTruth, Join,
    NoiseModel, NoisySource, Piece, PieceSpec, SynthError, TruthEvent,
};
