#![allow(dead_code)]

use proptest::prelude::*;
use tempora::{Component, ScaleGenerator, TimeScale};

/// `{0, 4, 5, 11} U [1,3] U [8,9]`.
pub fn running_scale() -> TimeScale {
    TimeScale::canonicalize([
        Component::point(0.0),
        Component::Interval { a: 1.0, b: 3.0 },
        Component::point(4.0),
        Component::point(5.0),
        Component::Interval { a: 8.0, b: 9.0 },
        Component::point(11.0),
    ])
    .unwrap()
}

pub fn gen(g: ScaleGenerator, lo: f64, hi: f64) -> TimeScale {
    TimeScale::materialize(&g, lo, hi).unwrap()
}

pub fn integers(lo: f64, hi: f64) -> TimeScale {
    gen(ScaleGenerator::Integers, lo, hi)
}

pub fn reals(lo: f64, hi: f64) -> TimeScale {
    gen(ScaleGenerator::Reals, lo, hi)
}

pub fn q_scale(q: f64, lo: f64, hi: f64) -> TimeScale {
    gen(ScaleGenerator::QPower { q, include_zero: false }, lo, hi)
}

pub fn pab(a: f64, b: f64, lo: f64, hi: f64) -> TimeScale {
    gen(ScaleGenerator::PeriodicPab { a, b }, lo, hi)
}

/// Dense polynomial, coefficients in increasing degree.
#[derive(Debug, Clone)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

pub fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5.0f64..5.0, 1..=5).prop_map(Poly)
}

/// Random canonical scale: alternating gaps and components, every gap at
/// least `0.01` wide.
pub fn scale_strategy() -> impl Strategy<Value = TimeScale> {
    let piece = (0.01f64..3.0, prop::option::of(0.01f64..3.0));
    (-10.0f64..10.0, prop::collection::vec(piece, 1..8)).prop_map(|(start, pieces)| {
        let mut x = start;
        let mut comps = Vec::new();
        for (gap, len) in pieces {
            x += gap;
            match len {
                Some(len) => {
                    comps.push(Component::Interval { a: x, b: x + len });
                    x += len;
                }
                None => comps.push(Component::point(x)),
            }
        }
        TimeScale::canonicalize(comps).unwrap()
    })
}
