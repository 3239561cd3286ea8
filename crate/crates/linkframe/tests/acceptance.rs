//! Acceptance suite: every release-gating behavior, one test per criterion,
//! each printing a PASS line (run with `cargo test --test acceptance --
//! --nocapture` to see them).

use linkframe::crossings::link_by_crossings;
use linkframe::curve::{
    example_pair, segment_distance, Curve, CurvePair, ExampleId, PolygonalCurve, Vec3,
};
use linkframe::exact::{link_exact, segment_pair_link, symmetry_report};
use linkframe::quadrature::{epsilon_sweep, link_numeric, pair_integrand, QuadratureConfig};
use linkframe::wilson::wilson_from_curves;
use nalgebra::Rotation3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn random_point(rng: &mut ChaCha8Rng, half_extent: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-half_extent..half_extent),
        rng.gen_range(-half_extent..half_extent),
        rng.gen_range(-half_extent..half_extent),
    )
}

fn random_quad(rng: &mut ChaCha8Rng) -> PolygonalCurve {
    loop {
        let verts: Vec<Vec3> = (0..4).map(|_| random_point(rng, 2.0)).collect();
        if let Ok(poly) = PolygonalCurve::new(verts) {
            return poly;
        }
    }
}

/// Disjoint random quadrilateral pair, vertices uniform in [-2,2]^3,
/// rejection-sampled for a minimum separation above 0.05.
fn random_disjoint_pair(rng: &mut ChaCha8Rng) -> (PolygonalCurve, PolygonalCurve) {
    loop {
        let a = random_quad(rng);
        let b = random_quad(rng);
        let sep = linkframe::curve::min_separation(
            &Curve::Polygonal(a.clone()),
            &Curve::Polygonal(b.clone()),
        );
        if sep > 0.05 {
            return (a, b);
        }
    }
}

fn random_circle(rng: &mut ChaCha8Rng) -> linkframe::ParametricCurve {
    loop {
        let normal = random_point(rng, 1.0);
        if normal.norm() < 1e-3 {
            continue;
        }
        let center = random_point(rng, 2.0);
        let radius = rng.gen_range(0.5..1.5);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        if let Ok(c) = linkframe::curve::circle(center, radius, normal, phase) {
            return c;
        }
    }
}

fn random_circle_pair(rng: &mut ChaCha8Rng) -> CurvePair {
    loop {
        let pair = CurvePair::new(
            Curve::Parametric(random_circle(rng)),
            Curve::Parametric(random_circle(rng)),
        );
        if pair.min_separation() > 0.1 {
            return pair;
        }
    }
}

#[test]
fn criterion_1_framing_zero() {
    let start = Instant::now();
    let pair = example_pair(ExampleId::FramingZero).unwrap();
    let est = link_numeric(&pair, &QuadratureConfig::default()).unwrap();
    assert!(est.value.abs() < 1e-6, "|value| = {}", est.value.abs());
    assert_eq!(est.rounded, 0);
    assert!(est.confident);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "PASS criterion 1: offset-circle pair links 0 (value {:.2e}, {:?})",
        est.value, elapsed
    );
}

#[test]
fn criterion_2_framing_one_epsilon_sweep() {
    let start = Instant::now();
    let eps = [1.0, 0.5, 0.1, 0.05];
    let estimates = epsilon_sweep(&eps, &QuadratureConfig::default()).unwrap();
    for (e, est) in eps.iter().zip(&estimates) {
        assert_eq!(est.rounded, 1, "epsilon {e}: value {}", est.value);
        assert!(est.confident, "epsilon {e} not confident");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "PASS criterion 2: threaded-circle pair links 1 for epsilon {eps:?} ({elapsed:?})"
    );
}

#[test]
fn criterion_3_framing_negative_two_three_ways() {
    let pair = example_pair(ExampleId::FramingNegTwo).unwrap();
    let pa = pair.first.as_exact_polygon().unwrap();
    let pb = pair.second.as_exact_polygon().unwrap();

    let exact = link_exact(&pa, &pb).unwrap();
    assert!(
        (exact.value + 2.0).abs() < 1e-9,
        "exact value {}",
        exact.value
    );

    let quad = link_numeric(&pair, &QuadratureConfig::default()).unwrap();
    assert_eq!(quad.rounded, -2);
    assert!(quad.confident);

    let crossings = link_by_crossings(&pa, &pb).unwrap();
    assert_eq!(crossings.rounded, -2);
    assert_eq!(crossings.value, -2.0);

    let report = symmetry_report(&pa, &pb).unwrap();
    assert!(
        report.classes.len() <= 4,
        "expected at most 4 classes, got {:?}",
        report.class_sizes()
    );
    let minus_eight_pi = -8.0 * std::f64::consts::PI;
    assert!(
        (report.total - minus_eight_pi).abs() < 1e-8,
        "contribution total {} vs -8pi",
        report.total
    );
    println!(
        "PASS criterion 3: rectangle pair links -2 by all methods (exact {:.12}, classes {:?}, total {:.9})",
        exact.value,
        report.class_sizes(),
        report.total
    );
}

#[test]
fn criterion_4_twist_ledger_and_placement() {
    let cfg = QuadratureConfig::default();
    let circle = linkframe::curve::circle(Vec3::zeros(), 1.0, Vec3::z(), 0.0).unwrap();
    let ribbon = linkframe::framing::blackboard_framing(&circle, 0.1).unwrap();
    for n in -3..=3 {
        let est = ribbon.add_twists(n).framing_number(&cfg).unwrap();
        assert_eq!(est.rounded, n, "uniform twist ledger at n = {n}");
        // localized twists in two different windows give the same integer
        for center in [1.0, std::f64::consts::PI] {
            let windowed = ribbon
                .twist_placement_invariance(n, center, 1.5, &cfg)
                .unwrap();
            assert_eq!(windowed.rounded, n, "windowed twist at n = {n}, center {center}");
        }
    }
    println!("PASS criterion 4: framing equals the twist count for n in -3..=3, uniform or windowed");
}

#[test]
fn criterion_5_oracle_equivalence_on_random_pairs() {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4C4B_0005);
    let mut worst_gap = 0.0f64;
    for case in 0..200 {
        let (pa, pb) = random_disjoint_pair(&mut rng);
        let exact = link_exact(&pa, &pb).unwrap();
        let cross = link_by_crossings(&pa, &pb).unwrap();
        let pair = CurvePair::new(Curve::Polygonal(pa), Curve::Polygonal(pb));
        let quad = link_numeric(&pair, &cfg)
            .unwrap_or_else(|e| panic!("case {case}: quadrature failed: {e}"));
        assert_eq!(exact.rounded, cross.rounded, "case {case}");
        assert_eq!(exact.rounded, quad.rounded, "case {case}");
        let gap = (exact.value - quad.value).abs();
        assert!(
            gap <= quad.abs_error_bound,
            "case {case}: |exact - quadrature| = {gap:.3e} exceeds bound {:.3e}",
            quad.abs_error_bound
        );
        worst_gap = worst_gap.max(gap);
    }
    println!(
        "PASS criterion 5: 200/200 random polygon pairs agree across all three methods (worst exact-vs-quadrature gap {worst_gap:.3e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_6_segment_kernel_vs_trapezoid_oracle() {
    /// 2048x2048 trapezoid quadrature of the Gauss kernel over one segment
    /// pair, written from the kernel definition; fully independent of the
    /// closed-form path.
    fn trapezoid_oracle(p1: Vec3, p2: Vec3, q1: Vec3, q2: Vec3) -> f64 {
        const N: usize = 2048;
        let a = p2 - p1;
        let b = q2 - q1;
        let cr = a.cross(&b);
        let mut sum = 0.0;
        for i in 0..=N {
            let wi = if i == 0 || i == N { 0.5 } else { 1.0 };
            let x = p1 + a * (i as f64 / N as f64);
            let mut row = 0.0;
            for j in 0..=N {
                let wj = if j == 0 || j == N { 0.5 } else { 1.0 };
                let y = q1 + b * (j as f64 / N as f64);
                let w = x - y;
                let r2 = w.norm_squared();
                row += wj * cr.dot(&w) / (r2 * r2.sqrt());
            }
            sum += wi * row;
        }
        sum / (N as f64 * N as f64)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x4C4B_0006);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 50 {
        // unit-scale segments kept well apart so the trapezoid rule itself
        // resolves the kernel to well below the 1e-7 gate
        let p1 = random_point(&mut rng, 1.5);
        let p2 = p1 + random_point(&mut rng, 1.0);
        let q1 = random_point(&mut rng, 1.5);
        let q2 = q1 + random_point(&mut rng, 1.0);
        if (p2 - p1).norm() < 0.3 || (q2 - q1).norm() < 0.3 {
            continue;
        }
        if segment_distance(p1, p2, q1, q2) < 0.75 {
            continue;
        }
        let exact = segment_pair_link(p1, p2, q1, q2).unwrap();
        let brute = trapezoid_oracle(p1, p2, q1, q2);
        let gap = (exact - brute).abs();
        assert!(gap < 1e-7, "pair {done}: gap {gap:.3e}");
        worst = worst.max(gap);
        done += 1;
    }
    println!("PASS criterion 6: 50/50 segment pairs match the 2048^2 trapezoid oracle (worst gap {worst:.3e})");
}

#[test]
fn criterion_7_integrand_identity_on_offset_circles() {
    let pair = example_pair(ExampleId::FramingZero).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4C4B_0007);
    for _ in 0..100 {
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = rng.gen_range(0.0..std::f64::consts::TAU);
        let closed_form = (t - s).sin() / (3.0 - 2.0 * (t - s).cos()).powf(1.5)
            / (4.0 * std::f64::consts::PI);
        let assembled = pair_integrand(&pair, t, s).unwrap();
        assert!(
            (assembled - closed_form).abs() < 1e-12,
            "integrand mismatch at ({t}, {s})"
        );
    }
    println!("PASS criterion 7: assembled integrand matches sin(t-s)/(3-2cos(t-s))^(3/2)/(4pi) at 100 points");
}

#[test]
fn criterion_8_wilson_loop_phases() {
    let cfg = QuadratureConfig::default();
    let cases = [
        (ExampleId::FramingZero, 0i64),
        (ExampleId::FramingOne { epsilon: 1.0 }, 1),
        (ExampleId::FramingNegTwo, -2),
    ];
    for (id, lk) in cases {
        for k in 1i64..=3 {
            let pair = example_pair(id).unwrap();
            let w = wilson_from_curves(&pair, k, &cfg).unwrap();
            assert_eq!(w.lk, lk);
            let angle = std::f64::consts::TAU * lk as f64 / k as f64;
            assert!((w.re - angle.cos()).abs() < 1e-12, "{id:?} k={k}");
            assert!((w.im - angle.sin()).abs() < 1e-12, "{id:?} k={k}");
        }
    }
    // periodicity and conjugation hold exactly
    for lk in -6i64..=6 {
        for k in [1i64, 2, 3, 5, 7, -4] {
            let w = linkframe::wilson::wilson_expectation(lk, k).unwrap();
            let shifted = linkframe::wilson::wilson_expectation(lk + k, k).unwrap();
            assert_eq!(w.re.to_bits(), shifted.re.to_bits());
            assert_eq!(w.im.to_bits(), shifted.im.to_bits());
            let conj = linkframe::wilson::wilson_expectation(-lk, k).unwrap();
            assert_eq!(w.re, conj.re);
            assert_eq!(w.im, -conj.im);
        }
    }
    println!("PASS criterion 8: Wilson phases match exp(2 pi i lk / k); periodicity and conjugation exact");
}

#[test]
fn criterion_9_invariance_suite() {
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4C4B_0009);

    // orientation antisymmetry, argument symmetry, rigid-motion invariance
    // for the quadrature on random circle pairs
    for case in 0..20 {
        let pair = random_circle_pair(&mut rng);
        let base = link_numeric(&pair, &cfg).unwrap();

        let reversed = CurvePair::new(pair.first.clone(), pair.second.reversed());
        let neg = link_numeric(&reversed, &cfg).unwrap();
        assert!(
            (base.value + neg.value).abs() <= 2.0 * (base.abs_error_bound + neg.abs_error_bound),
            "antisymmetry case {case}"
        );

        let swapped = CurvePair::new(pair.second.clone(), pair.first.clone());
        let sym = link_numeric(&swapped, &cfg).unwrap();
        assert!(
            (base.value - sym.value).abs() <= 2.0 * (base.abs_error_bound + sym.abs_error_bound),
            "symmetry case {case}"
        );

        let rot = Rotation3::from_euler_angles(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let shift = random_point(&mut rng, 5.0);
        let moved = CurvePair::new(
            pair.first.transformed(&rot, shift),
            pair.second.transformed(&rot, shift),
        );
        let rigid = link_numeric(&moved, &cfg).unwrap();
        assert!(
            (base.value - rigid.value).abs()
                <= 2.0 * (base.abs_error_bound + rigid.abs_error_bound),
            "rigid motion case {case}"
        );
    }

    // exact orientation antisymmetry and scale invariance on polygon pairs
    for case in 0..20 {
        let (pa, pb) = random_disjoint_pair(&mut rng);
        let base = link_exact(&pa, &pb).unwrap();
        let neg = link_exact(&pa, &pb.reversed()).unwrap();
        assert!(
            (base.value + neg.value).abs() <= 1e-12,
            "exact antisymmetry case {case}"
        );
        for factor in [1e3, 1e-3] {
            let scaled = link_exact(&pa.scaled(factor), &pb.scaled(factor)).unwrap();
            assert!(
                (base.value - scaled.value).abs() <= 1e-9,
                "scale case {case} factor {factor}"
            );
        }
    }
    println!("PASS criterion 9: antisymmetry, symmetry, rigid-motion, and scale invariance over 20 seeded instances each");
}
