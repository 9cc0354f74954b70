use delta_core::count_oracle;
use delta_core::hull_engine::{upper_hull, HullPoint};
use delta_core::textgen::{generate, GenKind, GenSpec};
use delta_core::{DeltaStream, EngineKind, Rational, StepKind};

/// Per-character chain work allowed on the worst-case engine, in units of
/// `(log2 n)^2` tree-node visits.
const CHAIN_STEPS_PER_LOG_SQUARED: f64 = 4.0;

fn special_texts() -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for kind in GenKind::ALL {
        for (n, sigma) in [(1, 2), (64, 2), (257, 3), (400, 4)] {
            let text = generate(&GenSpec::new(kind, n, sigma, 11).with_pattern(&b"abaab"[..])).unwrap();
            out.push((format!("{kind} n={n} sigma={sigma}"), text));
        }
    }
    out.push(("bytes".into(), (0..=255u8).chain(0..=255u8).collect()));
    out
}

#[test]
fn maximizing_length_is_the_largest_maximizer() {
    for (name, text) in special_texts() {
        let profiles = count_oracle::prefix_profiles(&text);
        for kind in EngineKind::ALL {
            let mut s = DeltaStream::new(kind);
            for (i, &b) in text.iter().enumerate() {
                let r = s.push(b).unwrap();
                let p = &profiles[i];
                assert_eq!((r.delta, r.maximizing_length), (p.delta, p.k_tilde), "{name} {kind} prefix {}", i + 1);
                assert_eq!(r.alpha, p.alpha, "{name} {kind} prefix {}", i + 1);
            }
        }
    }
}

#[test]
fn snapshot_hull_is_upper_hull_of_points() {
    let text = generate(&GenSpec::random(200, 2, 200)).unwrap();
    for kind in EngineKind::ALL {
        let mut s = DeltaStream::new(kind);
        for (i, &b) in text.iter().enumerate() {
            s.push(b).unwrap();
            if i % 17 != 16 && i != 199 {
                continue;
            }
            let snap = s.snapshot().unwrap();
            let pts: Vec<HullPoint> = snap.points.iter().map(|&[k, c]| HullPoint::new(k as i64, c as i64)).collect();
            let hull: Vec<usize> = upper_hull(&pts).iter().map(|p| p.x as usize).collect();
            assert_eq!(snap.hull, hull, "{kind} at {}", i + 1);
            assert!(snap.hull.contains(&snap.tangency_k));
            let [k, c] = snap.points[snap.tangency_k - 1];
            assert_eq!(Rational::new(c as i64, k as i64), snap.delta);
        }
    }
}

#[test]
fn step_kinds_follow_alpha() {
    let text = generate(&GenSpec::random(3_000, 3, 4)).unwrap();
    let mut s = DeltaStream::new(EngineKind::Amortized);
    let mut prev = 0;
    let mut r = 0;
    for &b in &text {
        let rep = s.push(b).unwrap();
        let expect = if rep.alpha == r + 1 {
            StepKind::Extend
        } else if rep.alpha == prev + 1 {
            StepKind::Increment
        } else {
            StepKind::Pullback
        };
        assert_eq!(rep.step_kind, expect);
        assert!(rep.alpha <= prev + 1);
        if expect == StepKind::Extend {
            r += 1;
        }
        assert_eq!(s.r(), r);
        prev = rep.alpha;
    }
}

#[test]
fn fibonacci_prefixes_stay_small() {
    let text = generate(&GenSpec::new(GenKind::Fibonacci, 2_000, 2, 0)).unwrap();
    let mut s = DeltaStream::new(EngineKind::Amortized);
    let last = *s.extend_from(&text).unwrap().last().unwrap();
    let oracle = count_oracle::profile(&text[..500]).unwrap();
    eprintln!("fibonacci: delta(2000) = {} ({:.4}), oracle delta(500) = {}", last.delta, last.delta_float, oracle.delta);
    let mut t = DeltaStream::new(EngineKind::Oracle);
    assert_eq!(t.extend_from(&text[..500]).unwrap()[499].delta, oracle.delta);
}

#[test]
fn unary_stream_only_extends() {
    let mut s = DeltaStream::new(EngineKind::Worstcase);
    let reports = s.extend_from(&[b'z'; 300]).unwrap();
    assert!(reports.iter().all(|r| r.step_kind == StepKind::Extend && r.delta == Rational::ONE));
    assert_eq!(s.stats().pullbacks, 0);
    assert_eq!(s.r(), 300);
}

#[test]
fn large_random_stream_engines_agree() {
    let n = 200_000;
    let text = generate(&GenSpec::random(n, 2, 31)).unwrap();
    let mut a = DeltaStream::new(EngineKind::Amortized);
    let mut w = DeltaStream::new(EngineKind::Worstcase);
    for &b in &text {
        let (x, y) = (a.push(b).unwrap(), w.push(b).unwrap());
        assert_eq!((x.delta, x.maximizing_length), (y.delta, y.maximizing_length), "at {}", x.position);
    }
    assert!(a.stats().total_distance <= n as u64);
    assert_eq!(a.reconstructed_counts(), w.reconstructed_counts());
}

#[test]
fn worstcase_structural_work_per_character() {
    let n: usize = 1_000_000;
    for spec in [GenSpec::random(n, 2, 1_000_000), GenSpec::new(GenKind::Fibonacci, n, 2, 0)] {
        let text = generate(&spec).unwrap();
        let mut s = DeltaStream::new(EngineKind::Worstcase);
        let mut max_steps = 0u64;
        let mut max_nodes = 0usize;
        let mut rebuilds = 0;
        for &b in &text {
            s.push(b).unwrap();
            let c = s.counters().tree.unwrap();
            if c.rebuilds != rebuilds {
                // capacity doubling: counted separately
                rebuilds = c.rebuilds;
                continue;
            }
            max_steps = max_steps.max(c.chain_steps_last);
            max_nodes = max_nodes.max(c.nodes_touched_last);
        }
        let log = (n as f64).log2();
        let r = s.r();
        eprintln!(
            "{} n={n}: R={r}, max chain steps/char {max_steps} = {:.2} (log2 n)^2, max nodes touched {max_nodes}, rebuilds {rebuilds}",
            spec.kind,
            max_steps as f64 / (log * log)
        );
        assert!(max_steps as f64 <= CHAIN_STEPS_PER_LOG_SQUARED * log * log);
        assert!(max_nodes <= 2 * r.next_power_of_two().trailing_zeros() as usize + 4);
    }
}
