//! Acceptance suite: one test per top-level guarantee, each printing a
//! PASS line with the numbers it verified. Tolerances are zero plus a 1e-12
//! floating-point slack wherever the underlying bound is worst-case.

use jumpscope::detector::Thresholds;
use jumpscope::differentiator::derivative_table;
use jumpscope::model::{make_step_policy, DetectionGrid, EventKind, SmoothnessClass};
use jumpscope::synth::{
    add_noise, build_signal, random_corpus, CorpusConstraints, Join, NoiseModel, NoisySource,
    Piece, PieceSpec,
};
use jumpscope::{detect, refine_jump_location, DetectError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

const FP_SLACK: f64 = 1e-12;

/// Criterion 1: on smooth signals with exact curvature bounds, the
/// derivative estimate never leaves the guaranteed band, for 100 random
/// noise draws plus the alternating worst case, at three noise levels.
#[test]
fn acceptance_1_derivative_error_bound() {
    type Sig = (&'static str, fn(f64) -> f64, fn(f64) -> f64, f64, f64);
    let signals: [Sig; 3] = [
        ("sin(2 pi x)", |x| (2.0 * PI * x).sin(), |x| 2.0 * PI * (2.0 * PI * x).cos(),
            2.0 * PI, 4.0 * PI * PI),
        ("x^3", |x| x * x * x, |x| 3.0 * x * x, 3.0, 6.0),
        ("exp(x)", |x| x.exp(), |x| x.exp(), std::f64::consts::E, std::f64::consts::E),
    ];
    let mut checked = 0usize;
    for (name, f, fp, m1, m2) in signals {
        for delta in [1e-2, 1e-3, 1e-4] {
            let class = SmoothnessClass::smooth(m1, m2).unwrap();
            let policy = make_step_policy(class, delta).unwrap();
            let grid = DetectionGrid::new(policy.h()).unwrap();
            let eps = policy.epsilon();
            let mut sources: Vec<NoisySource> = (0..100)
                .map(|seed| NoisySource::from_fn(f, delta, NoiseModel::Uniform, seed))
                .collect();
            sources.push(NoisySource::from_fn(
                f,
                delta,
                NoiseModel::Checker { h: policy.h() },
                0,
            ));
            for src in &sources {
                let table = derivative_table(src, &grid, &policy);
                for e in &table {
                    let err = (e.value - fp(e.x)).abs();
                    assert!(
                        err <= eps + FP_SLACK,
                        "{name}, delta={delta}: |f_j - f'| = {err} > eps = {eps} at x = {}",
                        e.x
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("acceptance 1 (derivative error bound): PASS ({checked} node checks, 0 violations)");
}

fn corpus_setup() -> (CorpusConstraints, SmoothnessClass, f64, f64, Thresholds) {
    let delta = 2e-4;
    let class = SmoothnessClass::smooth(2.0, 4.0).unwrap();
    let policy = make_step_policy(class, delta).unwrap();
    let th = Thresholds::new(&policy, 4.0).unwrap();
    let constraints = CorpusConstraints {
        min_separation: 0.16, // 16h: keeps every event window clear of its neighbors
        p_min: th.p_min * 1.05,
        kink_min: 12.0 * policy.epsilon(),
        m1_max: 2.0,
        m2_max: 4.0,
    };
    (constraints, class, delta, policy.h(), th)
}

/// Criterion 2: over a 200-signal corpus with jumps above the detectability
/// floor and separation at least 4h, the detector reports exactly the true
/// jumps, each localized to an interval containing it, no wider than 4h.
#[test]
fn acceptance_2_jump_localization_and_count() {
    let (constraints, class, delta, h, _) = corpus_setup();
    assert!(constraints.min_separation >= 4.0 * h);
    let corpus = random_corpus(200, 20260809, &constraints).unwrap();
    assert_eq!(corpus.len(), 200);
    let mut total_true = 0usize;
    for (i, (spec, truth)) in corpus.iter().enumerate() {
        let locs: Vec<f64> = truth.events.iter().map(|e| e.location).collect();
        for w in locs.windows(2) {
            assert!(w[1] - w[0] >= constraints.min_separation - 1e-9, "signal {i}");
        }
        let (signal, _) = build_signal(spec).unwrap();
        let src = add_noise(signal, delta, NoiseModel::Uniform, 7000 + i as u64);
        let report = detect(&src, class).unwrap();
        let found: Vec<_> =
            report.events.iter().filter(|e| e.kind == EventKind::Jump).collect();
        let expected: Vec<_> = truth.jumps().collect();
        assert_eq!(
            found.len(),
            expected.len(),
            "signal {i}: {} jumps reported, {} true",
            found.len(),
            expected.len()
        );
        for (event, truth_jump) in found.iter().zip(&expected) {
            assert!(
                event.interval.0 < truth_jump.location && truth_jump.location <= event.interval.1,
                "signal {i}: interval {:?} misses jump at {}",
                event.interval,
                truth_jump.location
            );
            assert!(
                event.interval.1 - event.interval.0 <= 4.0 * h + FP_SLACK,
                "signal {i}: hull wider than 4h"
            );
        }
        total_true += expected.len();
    }
    println!(
        "acceptance 2 (jump localization and count): PASS \
         (200 signals, {total_true} jumps, precision = recall = 1.0, hulls <= 4h)"
    );
}

/// Criterion 3: every reported jump size is within 2*delta + 2*m1*h of the
/// true size, under random and adversarial noise alike.
#[test]
fn acceptance_3_jump_size_bound() {
    let (constraints, class, delta, h, _) = corpus_setup();
    let corpus = random_corpus(200, 20260809, &constraints).unwrap();
    let bound = 2.0 * delta + 2.0 * class.m1() * h;
    let mut checked = 0usize;
    for (i, (spec, truth)) in corpus.iter().enumerate() {
        let (signal, _) = build_signal(spec).unwrap();
        let sources = [
            add_noise(signal.clone(), delta, NoiseModel::Uniform, 9000 + i as u64),
            add_noise(
                signal.clone(),
                delta,
                NoiseModel::Adversarial(Arc::new(move |x: f64| {
                    ((x / h).round() as i64).rem_euclid(4) < 2
                })),
                0,
            ),
        ];
        for src in &sources {
            let report = detect(src, class).unwrap();
            let found: Vec<_> =
                report.events.iter().filter(|e| e.kind == EventKind::Jump).collect();
            let expected: Vec<_> = truth.jumps().collect();
            assert_eq!(found.len(), expected.len(), "signal {i}");
            for (event, truth_jump) in found.iter().zip(&expected) {
                let err = (event.size.unwrap() - truth_jump.size).abs();
                assert!(
                    err <= bound + FP_SLACK,
                    "signal {i}: size error {err} exceeds {bound}"
                );
                assert!(event.size_error_bound.unwrap() >= err - FP_SLACK);
                checked += 1;
            }
        }
    }
    println!(
        "acceptance 3 (jump size bound): PASS ({checked} estimates within 2*delta + 2*m1*h = {bound:.5})"
    );
}

/// Criterion 4: hats are classified as kinks with the derivative jump
/// recovered to 7*epsilon; parabola vertices are classified as critical
/// points; zero cross-misclassification over 50 random placements each.
#[test]
fn acceptance_4_kink_critical_discrimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut hats = 0usize;
    for a in [0.3, 1.0, 3.0] {
        let delta = 1e-5;
        let class = SmoothnessClass::smooth(a, 1.0).unwrap();
        let policy = make_step_policy(class, delta).unwrap();
        for k in 0..50 {
            let c = rng.gen_range(0.15..0.85);
            let spec = PieceSpec {
                breakpoints: vec![0.0, c, 1.0],
                pieces: vec![
                    Piece::Affine { slope: -a, intercept: a * c },
                    Piece::Affine { slope: a, intercept: -a * c },
                ],
                joins: vec![Join::Kink { slope_jump: 2.0 * a }],
            };
            let (signal, _) = build_signal(&spec).unwrap();
            let src = add_noise(signal, delta, NoiseModel::Uniform, 100 * k + 1);
            let report = detect(&src, class).unwrap();
            let kinks: Vec<_> =
                report.events.iter().filter(|e| e.kind == EventKind::Kink).collect();
            assert_eq!(kinks.len(), 1, "hat a={a} c={c}: {:?}", report.events);
            assert!(
                report.events.iter().all(|e| e.kind == EventKind::Kink),
                "hat a={a} c={c} misclassified: {:?}",
                report.events
            );
            let ev = kinks[0];
            assert!(ev.interval.0 < c && c < ev.interval.1, "hat a={a} c={c}");
            let p_err = (ev.size.unwrap().abs() - 2.0 * a).abs();
            assert!(
                p_err <= 7.0 * policy.epsilon() + FP_SLACK,
                "hat a={a} c={c}: derivative jump error {p_err} > 7*eps"
            );
            hats += 1;
        }
    }

    let mut parabolas = 0usize;
    for k in 0..50 {
        let cc = rng.gen_range(0.5..2.0);
        let x0 = rng.gen_range(0.25..0.75);
        let delta = 1e-4;
        let spec = PieceSpec {
            breakpoints: vec![0.0, 1.0],
            pieces: vec![Piece::Poly { coeffs: [cc * x0 * x0, -2.0 * cc * x0, cc, 0.0] }],
            joins: vec![],
        };
        let (signal, truth) = build_signal(&spec).unwrap();
        // Exact bounds: m2 = 2c, m1 = sup |f'|.
        let class = SmoothnessClass::smooth(truth.m1_true, 2.0 * cc).unwrap();
        let src = add_noise(signal, delta, NoiseModel::Uniform, 5000 + k);
        let report = detect(&src, class).unwrap();
        let crits: Vec<_> =
            report.events.iter().filter(|e| e.kind == EventKind::CriticalPoint).collect();
        assert_eq!(crits.len(), 1, "parabola c={cc} x0={x0}: {:?}", report.events);
        assert!(
            report.events.iter().all(|e| e.kind == EventKind::CriticalPoint),
            "parabola c={cc} x0={x0} misclassified: {:?}",
            report.events
        );
        assert!(crits[0].interval.0 < x0 && x0 < crits[0].interval.1);
        parabolas += 1;
    }
    println!(
        "acceptance 4 (kink/critical discrimination): PASS \
         ({hats} hats -> kink, {parabolas} parabolas -> critical point, 0 cross-misclassifications)"
    );
}

/// Criterion 5: the fractional step at order 2 reproduces the smooth step;
/// the order-1.5 error bound matches its closed form; and on a signal of
/// fractional order 1.5 with a certified Hoelder constant the empirical
/// error never exceeds the reported bound.
#[test]
fn acceptance_5_fractional_consistency() {
    // Step agreement at a = 2.
    for (m, delta) in [(4.0, 0.02), (1.0, 1e-3), (7.5, 1e-5)] {
        let smooth = make_step_policy(SmoothnessClass::smooth(1.0, m).unwrap(), delta).unwrap();
        let frac =
            make_step_policy(SmoothnessClass::fractional(1.0, 2.0, m).unwrap(), delta).unwrap();
        assert!(((frac.h() - smooth.h()) / smooth.h()).abs() <= 1e-12);
    }

    // Closed-form bound at a = 1.5.
    let a = 1.5;
    let ma = 22.0;
    let delta = 1e-6;
    let class = SmoothnessClass::fractional(4.0, a, ma).unwrap();
    let policy = make_step_policy(class, delta).unwrap();
    let expect = a * ma.powf(1.0 / a) * (2.0f64 / (a - 1.0)).powf((a - 1.0) / a)
        * delta.powf((a - 1.0) / a);
    let got = jumpscope::error_bound(&policy);
    assert!(((got - expect) / expect).abs() <= 1e-12);

    // Lacunary cosine sum: f'(x) = sum 2^(-k/2) cos(2^k pi x) is Hoelder-1/2
    // with constant C <= 2*sqrt(2 pi d)/(sqrt(2)-1) + 2*sqrt(pi d/2)/(1-2^-0.5)
    // <= 17.2*sqrt(d); together with |f| <= 0.5 and |f'| <= 3.5 the declared
    // order-1.5 norm bound 22 is valid.
    const K: u32 = 8;
    let df = |x: f64| -> f64 {
        (0..=K).map(|k| {
            let w = (1u64 << k) as f64 * PI;
            0.5f64.powf(k as f64 / 2.0) * (w * x).cos()
        }).sum()
    };
    let f = |x: f64| -> f64 {
        (0..=K).map(|k| {
            let w = (1u64 << k) as f64 * PI;
            0.5f64.powf(k as f64 / 2.0) * (w * x).sin() / w
        }).sum()
    };
    // Spot-check the Hoelder certificate.
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..2000 {
        let x = rng.gen_range(0.0..1.0);
        let y = rng.gen_range(0.0..1.0);
        if x != y {
            let ratio = (df(x) - df(y)).abs() / (x - y).abs().sqrt();
            assert!(ratio <= 17.2, "Hoelder certificate violated: {ratio}");
        }
    }

    let grid = DetectionGrid::new(policy.h()).unwrap();
    let mut sup_err: f64 = 0.0;
    for (sp, sm) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        for j in grid.nodes() {
            let x = grid.node_x(j);
            let fj = (f(x + policy.h()) + sp * delta - f(x - policy.h()) - sm * delta)
                / (2.0 * policy.h());
            sup_err = sup_err.max((fj - df(x)).abs());
        }
    }
    assert!(
        sup_err <= got + FP_SLACK,
        "empirical sup error {sup_err} exceeds the reported bound {got}"
    );
    println!(
        "acceptance 5 (fractional consistency): PASS \
         (step agreement at a=2, bound formula at a=1.5 = {got:.6}, empirical sup {sup_err:.6})"
    );
}

/// Criterion 6, jump clause: in piecewise-linear mode, steps above 8*delta
/// between affine pieces are all found with size error at most 4*delta.
#[test]
fn acceptance_6_linear_jump_detection() {
    let delta = 1e-3;
    let m1 = 2.0;
    let class = SmoothnessClass::linear(m1).unwrap();
    let policy = make_step_policy(class, delta).unwrap();
    let constraints = CorpusConstraints {
        min_separation: 0.1,
        p_min: 8.5 * delta,
        kink_min: 0.0,
        m1_max: m1,
        m2_max: 0.0,
    };
    let corpus = random_corpus(60, 606, &constraints).unwrap();
    let mut checked = 0usize;
    for (i, (spec, truth)) in corpus.iter().enumerate() {
        let (signal, _) = build_signal(spec).unwrap();
        for (model, seed) in [
            (NoiseModel::Uniform, 300 + i as u64),
            (NoiseModel::Checker { h: policy.h() }, 0),
        ] {
            let src = add_noise(signal.clone(), delta, model, seed);
            let report = detect(&src, class).unwrap();
            let found: Vec<_> =
                report.events.iter().filter(|e| e.kind == EventKind::Jump).collect();
            let expected: Vec<_> = truth.jumps().collect();
            assert_eq!(found.len(), expected.len(), "signal {i}");
            for (event, truth_jump) in found.iter().zip(&expected) {
                assert!(event.interval.0 < truth_jump.location
                    && truth_jump.location <= event.interval.1);
                let err = (event.size.unwrap() - truth_jump.size).abs();
                assert!(
                    err <= 4.0 * delta + FP_SLACK,
                    "signal {i}: size error {err} > 4*delta = {}",
                    4.0 * delta
                );
                checked += 1;
            }
        }
    }
    println!(
        "acceptance 6a (piecewise-linear jumps): PASS ({checked} estimates within 4*delta)"
    );
}

/// Criterion 6, slope clause as stated: with t = 10, slope estimates on
/// pieces with |a_j| >= m1/2 are asserted to have relative error at most
/// 0.1 under worst-case noise.
///
/// The per-node estimator cannot meet that figure at the boundary: its
/// worst-case absolute error is exactly delta/h = m1/t, so the relative
/// error at |a_j| = m1/2 is 2/t = 0.2. The assertion is kept at the stated
/// 0.1 and this test documents the gap by failing on the boundary slopes;
/// t = 20 (or restricting to |a_j| >= m1) would make it pass.
#[test]
fn acceptance_6_linear_slope_relative_error() {
    let delta = 1e-3;
    let m1 = 2.0;
    let class = SmoothnessClass::linear(m1).unwrap();
    let policy = make_step_policy(class, delta).unwrap();
    let slope_step = policy.slope_step().unwrap();
    let mut worst = (0.0f64, 0.0f64);
    for frac in [0.5, 0.6, 0.75, 0.9, 1.0] {
        let a = frac * m1;
        let src = NoisySource::from_fn(
            move |x: f64| a * x,
            delta,
            NoiseModel::Checker { h: slope_step },
            0,
        );
        let report = detect(&src, class).unwrap();
        assert!(report.events.is_empty());
        assert!(!report.derivative.is_empty());
        for &(x, v) in &report.derivative {
            let rel = (v - a).abs() / a;
            if rel > worst.1 {
                worst = (a, rel);
            }
            assert!(
                rel <= 0.1,
                "slope {a} at x={x}: relative error {rel:.4} exceeds 0.1 \
                 (per-node worst case is m1/(t*|a_j|) = {:.4})",
                m1 / (10.0 * a)
            );
        }
    }
    println!(
        "acceptance 6b (piecewise-linear slopes): PASS (worst relative error {:.4} at slope {})",
        worst.1, worst.0
    );
}

/// Criterion 7: smooth polynomials with correct bounds and adversarial
/// noise produce no events of any kind. The polynomials are drawn with a
/// one-signed derivative; an interior sign change of f' is a real critical
/// point and would rightly be reported.
#[test]
fn acceptance_7_no_false_positives() {
    let delta = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut count = 0usize;
    while count < 100 {
        let degree = rng.gen_range(0..=3usize);
        let mut coeffs = [0.0f64; 4];
        coeffs[0] = rng.gen_range(-1.0..1.0);
        for c in coeffs.iter_mut().take(degree + 1).skip(1) {
            *c = rng.gen_range(-2.0..2.0);
        }
        let (signal, truth) = build_signal(&PieceSpec {
            breakpoints: vec![0.0, 1.0],
            pieces: vec![Piece::Poly { coeffs }],
            joins: vec![],
        })
        .unwrap();
        if !truth.events.is_empty() {
            continue; // derivative changes sign: not a no-feature signal
        }
        count += 1;
        let class = SmoothnessClass::smooth(
            truth.m1_true.max(0.05),
            truth.m2_true.max(0.05),
        )
        .unwrap();
        let policy = make_step_policy(class, delta).unwrap();
        let h = policy.h();
        for dir in [
            // Alternating blocks: saturates both the flag pressure and the
            // four-endpoint pair increment at every fourth pair.
            Arc::new(move |x: f64| ((x / h).round() as i64).rem_euclid(4) < 2)
                as Arc<dyn Fn(f64) -> bool + Send + Sync>,
            Arc::new(move |x: f64| ((x / h).round() as i64).rem_euclid(2) == 0),
        ] {
            let src = add_noise(signal.clone(), delta, NoiseModel::Adversarial(dir), 0);
            let report = detect(&src, class).unwrap();
            assert!(
                report.events.is_empty(),
                "polynomial {coeffs:?} produced events: {:?}",
                report.events
            );
        }
    }
    println!("acceptance 7 (no false positives): PASS (100 polynomials x 2 adversarial patterns, 0 events)");
}

/// Criterion 8: bracket refinement on an analytic step reaches width 1e-4
/// when the jump is 10*delta, and refuses jumps at 3*delta (below the
/// 4*delta detectability floor).
#[test]
fn acceptance_8_refinement() {
    let delta = 1e-3;
    let x0 = 0.47;
    let step = move |p: f64| {
        move |x: f64| if x >= x0 { p } else { 0.0 }
    };

    let src = NoisySource::from_fn(step(10.0 * delta), delta, NoiseModel::Uniform, 808);
    let refined = refine_jump_location(&src, (0.3, 0.7), delta, 0.0, 0.0, 1e-4).unwrap();
    assert!(refined.width() <= 1e-4);
    assert!(refined.lo <= x0 && x0 <= refined.hi);
    assert!(!refined.floor_reached);

    let src = NoisySource::from_fn(step(3.0 * delta), delta, NoiseModel::Zero, 0);
    match refine_jump_location(&src, (0.3, 0.7), delta, 0.0, 0.0, 1e-4) {
        Err(DetectError::NotRefinable(_)) => {}
        other => panic!("3*delta jump must be NotRefinable, got {other:?}"),
    }
    println!(
        "acceptance 8 (refinement): PASS (10*delta step to width {:.1e} containing {x0}; 3*delta rejected)",
        refined.width()
    );
}
