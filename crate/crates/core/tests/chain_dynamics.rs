mod common;

use common::*;
use proptest::prelude::*;
use tempora::dynamics::SegmentKind;
use tempora::{
    chain_integral, chain_mvt_find_c, chain_substitution, delta_derivative, derive_scale,
    inverse_derivative, simulate, SimOptions, TimeScale,
};

fn scales() -> Vec<TimeScale> {
    vec![
        integers(-3.0, 3.0),
        reals(-1.0, 1.0),
        q_scale(2.0, 0.25, 8.0),
        pab(1.0, 1.0, 0.0, 3.0),
        running_scale(),
    ]
}

fn derivative_of(p: &Poly) -> Poly {
    Poly(p.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chain_forms_agree(f in poly_strategy(), slope in 0.2f64..3.0, shift in -2.0f64..2.0) {
        let fp = derivative_of(&f);
        let fe = |x: f64| f.eval(x);
        let fpe = |x: f64| fp.eval(x);
        let g = |t: f64| slope * t + shift;
        for ts in scales() {
            for t in ts.kappa_upper().unwrap().sample(3) {
                let composite = |s: f64| fe(g(s));
                let direct = delta_derivative(&ts, &composite, t).unwrap().value().unwrap();
                let integral = chain_integral(&ts, &fpe, &g, t).unwrap();
                let subst = chain_substitution(&ts, &fe, &g, t).unwrap();
                prop_assert!(rel(integral, direct) <= 1e-5, "integral at {}: {} vs {}", t, integral, direct);
                prop_assert!(rel(subst, direct) <= 1e-5, "substitution at {}: {} vs {}", t, subst, direct);

                let sigma = ts.sigma(t).unwrap();
                match chain_mvt_find_c(&ts, &fe, &fpe, &g, t) {
                    Ok(c) => {
                        prop_assert!(t <= c && c <= sigma);
                        if sigma > t {
                            let r = fpe(g(c)) * slope - direct;
                            prop_assert!(r.abs() <= 1e-9 * (1.0 + direct.abs()), "residual {} at {}", r, t);
                        }
                    }
                    Err(e) => prop_assert!(false, "mvt at {}: {}", t, e),
                }
            }
        }
    }

    #[test]
    fn inverse_times_slope_is_one(a in 0.2f64..3.0, b in 0.0f64..1.0, c in -1.0f64..1.0) {
        let g = |t: f64| a * t + b * t * t * t + c;
        for ts in scales() {
            for t in ts.kappa_upper().unwrap().sample(3) {
                let inv = inverse_derivative(&ts, &g, t).unwrap();
                let dg = delta_derivative(&ts, &g, t).unwrap().value().unwrap();
                prop_assert!((inv * dg - 1.0).abs() <= 1e-6, "t = {}: {} * {}", t, inv, dg);
            }
        }
    }
}

#[test]
fn derived_scale_preserves_structure() {
    let g = |t: f64| 3.0 * t + 0.1 * t * t * t - 1.0;
    for ts in scales() {
        let d = derive_scale(&ts, &g).unwrap();
        assert_eq!(d.image.components().len(), ts.components().len());
        for (b, i) in ts.components().iter().zip(d.image.components()) {
            assert_eq!(b.is_point(), i.is_point());
        }
        // kappa points of the base map onto kappa points of the image
        let base_k = ts.kappa_upper().unwrap();
        let image_k = d.image.kappa_upper().unwrap();
        assert_eq!(base_k.components().len(), image_k.components().len());
        for t in ts.sample(2) {
            assert_eq!(
                base_k.contains(t),
                image_k.contains(g(t)),
                "t = {t}"
            );
            assert_eq!(d.image.sigma(g(t)).unwrap(), g(ts.sigma(t).unwrap()));
        }
    }
}

fn linear(_: f64, x: &[f64]) -> Vec<f64> {
    vec![0.7 * x[0]]
}

#[test]
fn same_path_reproduces_both_limits() {
    // ODE on an interval
    let r = reals(0.0, 2.0);
    let traj = simulate(&r, &linear, 0.0, &[1.0], 2.0, &SimOptions::default()).unwrap();
    let exact = (0.7f64 * 2.0).exp();
    assert!(rel(traj.last().unwrap().x[0], exact) <= 1e-6);
    assert!(traj.segments.iter().all(|s| s.kind == SegmentKind::Dense));

    // recursion on the integers
    let z = integers(0.0, 10.0);
    let traj = simulate(&z, &linear, 0.0, &[1.0], 10.0, &SimOptions::default()).unwrap();
    let mut x = 1.0;
    for s in &traj.samples[1..] {
        x += 0.7 * x;
        assert_eq!(s.x[0], x);
    }
}

#[test]
fn scattered_transitions_follow_the_recursion() {
    let f = |t: f64, x: &[f64]| vec![x[0].sin() + 0.3 * t];
    let ts = running_scale();
    let traj = simulate(&ts, &f, 0.0, &[0.5], 11.0, &SimOptions::default()).unwrap();
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mu = ts.mu(a.t).unwrap();
        if mu > 0.0 {
            assert_eq!(b.t, ts.sigma(a.t).unwrap());
            assert_eq!(b.x[0], a.x[0] + mu * f(a.t, &a.x)[0]);
        }
    }
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]));
    assert!(times.iter().all(|&t| ts.contains(t)));
}

#[test]
fn refinement_keeps_scattered_transitions() {
    let f = |_: f64, x: &[f64]| vec![-0.5 * x[0] + 1.0];
    let ts = pab(1.0, 1.0, 0.0, 5.0);
    let coarse = simulate(&ts, &f, 0.0, &[2.0], 5.0, &SimOptions { h: Some(0.1) }).unwrap();
    let fine = simulate(&ts, &f, 0.0, &[2.0], 5.0, &SimOptions { h: Some(0.01) }).unwrap();
    let jumps = |traj: &tempora::Trajectory| -> Vec<(f64, f64)> {
        traj.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Scattered)
            .map(|s| (s.t_start, s.t_end))
            .collect()
    };
    assert_eq!(jumps(&coarse), jumps(&fine));
    assert_eq!(jumps(&coarse), vec![(1.0, 2.0), (3.0, 4.0)]);
    for traj in [&coarse, &fine] {
        for w in traj.samples.windows(2) {
            if ts.mu(w[0].t).unwrap() > 0.0 {
                assert_eq!(w[1].x[0], w[0].x[0] + 1.0 * f(w[0].t, &w[0].x)[0]);
            }
        }
    }
}

#[test]
fn step_halving_is_fourth_order() {
    let f = |_: f64, x: &[f64]| vec![x[0]];
    let r = reals(0.0, 1.0);
    let err = |h: f64| {
        let traj = simulate(&r, &f, 0.0, &[1.0], 1.0, &SimOptions { h: Some(h) }).unwrap();
        (traj.last().unwrap().x[0] - std::f64::consts::E).abs()
    };
    let ratio = err(1.0 / 16.0) / err(1.0 / 32.0);
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}
