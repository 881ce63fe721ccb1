#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use rand::Rng;
use tempora::{Component, TimeScale};

pub const RUNNING: &str = "{0} U [1,3] U {4} U {5} U [8,9] U {11}";

/// Golden cases: file stem and command line.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("point_isolated", &["point", RUNNING, "4"]),
    ("point_dense", &["point", RUNNING, "2"]),
    ("point_gap", &["point", RUNNING, "3.5"]),
    ("point_window_edge", &["point", "Z @[0,9]", "9"]),
    ("deriv_delta_z", &["deriv", "delta", "Z @[0,9]", "t^2", "3"]),
    ("deriv_nabla_z", &["deriv", "nabla", "Z @[0,9]", "t^2", "3"]),
    ("deriv_delta_r", &["deriv", "delta", "R @[0,3]", "t^2", "1.5"]),
    ("deriv_kink", &["deriv", "delta", "R @[-1,1]", "abs(t)", "0"]),
    ("deriv_not_in_kappa", &["deriv", "delta", "Z @[0,9]", "t", "9"]),
    ("deriv_product", &["deriv", "delta", "qZ(2) @[1,64]", "t^2", "4", "--rule", "product", "--g", "t+1"]),
    ("plot_scale_svg", &["plot", "scale", RUNNING, "--format", "svg"]),
    ("plot_sigma_svg", &["plot", "sigma", "P(1,1) @[0,5]", "--format", "svg"]),
    ("plot_mu_ascii", &["plot", "mu", "P(1,1) @[0,5]", "--format", "ascii"]),
    ("plot_scale_ascii", &["scale", "plot", "scale", RUNNING, "--format", "ascii"]),
    ("simulate_z", &["simulate", "Z @[0,3]", "--ode", "x", "--t0", "0", "--x0", "1", "--t-end", "3"]),
    (
        "simulate_pab_csv",
        &[
            "simulate", "P(1,1) @[0,2]", "--ode", "x", "--t0", "0", "--x0", "1", "--t-end", "2", "--h", "1/8",
            "--format", "csv",
        ],
    ),
    ("scale_parse_bad", &["scale", "parse", "[3,1]"]),
];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs the binary; returns stdout and the exit code.
pub fn run_bin(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_tempora"))
        .args(args)
        .env_remove("TEMPORA_TOL")
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

/// Golden file body: the exit code on the first line, then stdout.
pub fn golden_body(args: &[&str]) -> Vec<u8> {
    let (stdout, code) = run_bin(args);
    let mut body = format!("exit {code}\n").into_bytes();
    body.extend(stdout);
    body
}

/// A random canonical scale: up to 8 components separated by real gaps, with
/// bounds that are sometimes round and sometimes arbitrary doubles.
pub fn random_scale<R: Rng>(rng: &mut R) -> TimeScale {
    let n = rng.gen_range(1..=8);
    let mut x: f64 = rng.gen_range(-50.0..50.0);
    let mut raw = Vec::with_capacity(n);
    fn value<R: Rng>(rng: &mut R, v: f64) -> f64 {
        match rng.gen_range(0..3) {
            0 => (v * 1000.0).round() / 1000.0,
            1 => (v * 3.0).round() / 3.0,
            _ => v,
        }
    }
    for _ in 0..n {
        let lo = value(rng, x);
        if rng.gen_bool(0.5) {
            raw.push(Component::point(lo));
            x = lo;
        } else {
            let len = rng.gen_range(0.01..5.0);
            let hi = value(rng, lo + len).max(lo);
            raw.push(Component::interval(lo, hi).expect("ordered bounds"));
            x = hi;
        }
        x += rng.gen_range(0.01..5.0);
    }
    TimeScale::canonicalize(raw).expect("nonempty")
}
