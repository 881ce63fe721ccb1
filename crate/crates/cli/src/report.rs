use serde::{Serialize, Serializer};

/// JSON number that prints integral values without a fractional part
/// (`5` rather than `5.0`); everything else keeps the shortest round-trip form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

const EXACT_INT: f64 = 9_007_199_254_740_992.0; // 2^53

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() && v.fract() == 0.0 && v.abs() <= EXACT_INT {
            s.serialize_i64(v as i64)
        } else {
            s.serialize_f64(v)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointReport {
    pub sigma: Num,
    pub rho: Num,
    pub mu: Num,
    pub nu: Num,
    pub class: &'static str,
    /// Present (and true) when the point sits on the edge of a generator
    /// window, where the truncated scale may classify it differently from the
    /// infinite one.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub window_edge: bool,
}
