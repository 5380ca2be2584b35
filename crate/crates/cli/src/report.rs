//! Machine-readable run report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use fockbell::bell::{BellVerdict, CorrelationTensor};
use fockbell::SchemeResult64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scheme: String,
    /// Nonzero amplitudes keyed by bitstring (`H` = 0, `V` = 1), as `[re, im]`.
    pub register: BTreeMap<String, [f64; 2]>,
    pub probability: f64,
    /// Per-party `[φ¹, φ²]` in radians.
    pub settings: Option<[[f64; 2]; 4]>,
    /// Sixteen coefficients in `k₁k₂k₃k₄` row-major order.
    pub q_tensor: Option<Vec<f64>>,
    pub lhv_sum: Option<f64>,
    pub violated: Option<bool>,
    pub margin: Option<f64>,
    pub critical_visibility: Option<f64>,
    pub version: String,
}

/// Rounds to 9 significant digits; magnitudes below 1e-15 become exactly zero.
pub fn fmt9(x: f64) -> f64 {
    if x.abs() < 1e-15 {
        return 0.0;
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    rounded + 0.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellSection {
    pub tensor: CorrelationTensor<f64>,
    pub verdict: BellVerdict<f64>,
    pub critical_visibility: Option<f64>,
}

impl Report {
    pub fn new(scheme: &str, result: &SchemeResult64, bell: Option<&BellSection>) -> Self {
        let reg = &result.register;
        let register = reg
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| (reg.bitstring(i), [fmt9(a.re), fmt9(a.im)]))
            .filter(|(_, [re, im])| *re != 0.0 || *im != 0.0)
            .collect();
        Report {
            scheme: scheme.to_string(),
            register,
            probability: fmt9(result.success_probability),
            settings: bell.map(|b| b.tensor.settings().pairs().map(|p| p.map(fmt9))),
            q_tensor: bell.map(|b| b.tensor.coefficients().iter().map(|&q| fmt9(q)).collect()),
            lhv_sum: bell.map(|b| fmt9(b.verdict.sum)),
            violated: bell.map(|b| b.verdict.violated),
            margin: bell.map(|b| fmt9(b.verdict.margin)),
            critical_visibility: bell.and_then(|b| b.critical_visibility.map(fmt9)),
            version: VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scheme:      {}", self.scheme);
        let _ = writeln!(out, "probability: {}", self.probability);
        let _ = writeln!(out, "register:");
        for (bits, [re, im]) in &self.register {
            let _ = writeln!(out, "  {bits}  {re:+} {im:+}i");
        }
        if let (Some(sum), Some(violated), Some(margin)) =
            (self.lhv_sum, self.violated, self.margin)
        {
            if let Some(settings) = &self.settings {
                let _ = writeln!(out, "settings (rad):");
                for (x, [p1, p2]) in settings.iter().enumerate() {
                    let _ = writeln!(out, "  party {}: {p1} {p2}", x + 1);
                }
            }
            if let Some(q) = &self.q_tensor {
                let _ = writeln!(out, "q tensor:");
                for (k, v) in q.iter().enumerate() {
                    let idx: String = (0..4)
                        .map(|x| if (k >> (3 - x)) & 1 == 0 { '1' } else { '2' })
                        .collect();
                    let _ = writeln!(out, "  q{idx} = {v:+}");
                }
            }
            let _ = writeln!(out, "sum |q|:     {sum}");
            let _ = writeln!(out, "violated:    {violated} (margin {margin})");
            match self.critical_visibility {
                Some(v) => {
                    let _ = writeln!(out, "critical visibility: {v}");
                }
                None => {
                    let _ = writeln!(out, "critical visibility: undefined");
                }
            }
        }
        let _ = writeln!(out, "version:     {}", self.version);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn nine_significant_digits() {
        assert_eq!(fmt9(std::f64::consts::FRAC_1_SQRT_2), 0.707106781);
        assert_eq!(fmt9(1.0 / 24.0), 0.0416666667);
        assert_eq!(fmt9(-1e-17), 0.0);
        assert!(fmt9(-1e-17).is_sign_positive());
        assert_eq!(fmt9(2.2627416997969525), 2.2627417);
    }
}
