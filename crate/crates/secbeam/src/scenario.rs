//! Network description, solver configuration, and config-file ingestion.
//!
//! A scenario is immutable once validated; every solver treats it as shared
//! read-only data. Power quantities are linear everywhere inside the library —
//! the only dB value is `total_power_db` in the config document, converted once
//! at load time via [`db_to_linear`]. `noise_power` (N0) is an independent
//! linear knob defaulting to 1.0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How much is known about the eavesdropper channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EveCsi {
    /// Exact complex gains `beta0`, `beta` are known.
    Perfect,
    /// Only the variances `sigma2_beta0`, `sigma2_beta` are known; the solver
    /// optimizes the Jensen lower-bound surrogate.
    Statistical,
}

/// Complex channel gains of the two-hop network plus eavesdropper statistics.
///
/// Index conventions: `gamma[i]` source→relay i, `alpha[i]` relay i→destination,
/// `beta0[j]` source→eavesdropper j, `beta[j][i]` relay i→eavesdropper j.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelScenario {
    /// N, number of relays.
    pub n_relays: usize,
    /// J, number of non-colluding eavesdroppers (0 allowed).
    pub n_eves: usize,
    /// Source→destination gain.
    #[serde(with = "cpx")]
    pub alpha0: Complex64,
    /// Source→eavesdropper gains, length J (unused and may be empty in
    /// statistical mode).
    #[serde(with = "cpx_vec", default)]
    pub beta0: Vec<Complex64>,
    /// Source→relay gains, length N.
    #[serde(with = "cpx_vec")]
    pub gamma: Vec<Complex64>,
    /// Relay→destination gains, length N.
    #[serde(with = "cpx_vec")]
    pub alpha: Vec<Complex64>,
    /// Relay→eavesdropper gains, J rows of length N (unused and may be empty
    /// in statistical mode).
    #[serde(with = "cpx_mat", default)]
    pub beta: Vec<Vec<Complex64>>,
    /// N0, linear noise power at every receiver.
    #[serde(default = "default_noise_power")]
    pub noise_power: f64,
    pub eve_csi: EveCsi,
    /// Var(beta0[j]), length J; required in statistical mode.
    #[serde(default)]
    pub sigma2_beta0: Vec<f64>,
    /// Var(beta[j][i]), J rows of length N; required in statistical mode.
    #[serde(default)]
    pub sigma2_beta: Vec<Vec<f64>>,
}

/// Optimization parameters. Everything except `total_power_db` and
/// `public_rate` has a sensible default.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Total power budget P_T in dB; linear P_T = 10^(dB/10).
    pub total_power_db: f64,
    /// R0, required rate of the non-secret message in bits/channel use.
    #[serde(default)]
    pub public_rate: f64,
    /// M, number of discrete power-split steps (P_m = m·P_T/M, m = 0..M-1).
    #[serde(default = "default_power_steps")]
    pub power_steps: usize,
    /// Bisection tolerance on the secrecy rate, in bits.
    #[serde(default = "default_bisect_tol")]
    pub secrecy_bisect_tol: f64,
    /// Convergence tolerance handed to the cone kernel.
    #[serde(default = "default_sdp_tol")]
    pub sdp_tol: f64,
    /// Require the non-secret message to be decodable at every eavesdropper
    /// as well (the suboptimal beamforming variant; perfect CSI only).
    #[serde(default)]
    pub eve_must_decode_public: bool,
    /// Sample count for the Monte-Carlo ergodic-rate estimator.
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    /// Seed for Gaussian rounding and the MC estimator.
    #[serde(default)]
    pub rng_seed: u64,
    /// Also try m = M (hand the whole budget to the secret message). The
    /// discretization deliberately stops at m = M-1 by default; this flag
    /// exposes the obvious extension.
    #[serde(default, rename = "include_m_equals_M")]
    pub include_m_equals_m: bool,
}

/// Top-level config document: `{ "scenario": {..}, "solve": {..} }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigDoc {
    pub scenario: ChannelScenario,
    pub solve: SolveConfig,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn default_noise_power() -> f64 {
    1.0
}
fn default_power_steps() -> usize {
    50
}
fn default_bisect_tol() -> f64 {
    1e-6
}
fn default_sdp_tol() -> f64 {
    1e-8
}
fn default_mc_samples() -> usize {
    100_000
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field,
        reason: reason.into(),
    }
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

impl ChannelScenario {
    /// Checks every structural invariant; no solver accepts an unvalidated
    /// scenario.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n_relays == 0 {
            return Err(invalid("n_relays", "must be positive"));
        }
        if !(self.noise_power.is_finite() && self.noise_power > 0.0) {
            return Err(invalid("noise_power", "must be positive"));
        }
        if !(self.alpha0.re.is_finite() && self.alpha0.im.is_finite()) {
            return Err(invalid("alpha0", "must be finite"));
        }
        if self.gamma.len() != self.n_relays {
            return Err(invalid(
                "gamma",
                format!("expected {} entries, got {}", self.n_relays, self.gamma.len()),
            ));
        }
        if self.alpha.len() != self.n_relays {
            return Err(invalid(
                "alpha",
                format!("expected {} entries, got {}", self.n_relays, self.alpha.len()),
            ));
        }
        if !all_finite(&self.gamma) || !all_finite(&self.alpha) {
            return Err(invalid("gamma/alpha", "must be finite"));
        }
        let j = self.n_eves;
        let check_mat = |mat: &[Vec<Complex64>], field: &'static str| -> Result<(), ScenarioError> {
            if mat.len() != j {
                return Err(invalid(field, format!("expected {} rows, got {}", j, mat.len())));
            }
            for row in mat {
                if row.len() != self.n_relays {
                    return Err(invalid(
                        field,
                        format!("expected rows of {} entries, got {}", self.n_relays, row.len()),
                    ));
                }
                if !all_finite(row) {
                    return Err(invalid(field, "must be finite"));
                }
            }
            Ok(())
        };
        match self.eve_csi {
            EveCsi::Perfect => {
                if self.beta0.len() != j {
                    return Err(invalid(
                        "beta0",
                        format!("expected {} entries, got {}", j, self.beta0.len()),
                    ));
                }
                if !all_finite(&self.beta0) {
                    return Err(invalid("beta0", "must be finite"));
                }
                check_mat(&self.beta, "beta")?;
            }
            EveCsi::Statistical => {
                // beta0/beta are unused here and may be absent, but if present
                // they must still be dimensionally consistent.
                if !self.beta0.is_empty() && self.beta0.len() != j {
                    return Err(invalid("beta0", "must be empty or length n_eves"));
                }
                if !self.beta.is_empty() {
                    check_mat(&self.beta, "beta")?;
                }
                if self.sigma2_beta0.len() != j {
                    return Err(invalid(
                        "sigma2_beta0",
                        format!("expected {} entries, got {}", j, self.sigma2_beta0.len()),
                    ));
                }
                if !self.sigma2_beta0.iter().all(|&s| s.is_finite() && s > 0.0) {
                    return Err(invalid("sigma2_beta0", "variances must be positive"));
                }
                if self.sigma2_beta.len() != j {
                    return Err(invalid(
                        "sigma2_beta",
                        format!("expected {} rows, got {}", j, self.sigma2_beta.len()),
                    ));
                }
                for row in &self.sigma2_beta {
                    if row.len() != self.n_relays {
                        return Err(invalid("sigma2_beta", "rows must have n_relays entries"));
                    }
                    if !row.iter().all(|&s| s.is_finite() && s > 0.0) {
                        return Err(invalid("sigma2_beta", "variances must be positive"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !self.total_power_db.is_finite() {
            return Err(invalid("total_power_db", "must be finite"));
        }
        if !(self.public_rate.is_finite() && self.public_rate >= 0.0) {
            return Err(invalid("public_rate", "must be nonnegative"));
        }
        if self.power_steps == 0 {
            return Err(invalid("power_steps", "must be at least 1"));
        }
        if !(self.secrecy_bisect_tol.is_finite() && self.secrecy_bisect_tol > 0.0) {
            return Err(invalid("secrecy_bisect_tol", "must be positive"));
        }
        if !(self.sdp_tol.is_finite() && self.sdp_tol > 0.0) {
            return Err(invalid("sdp_tol", "must be positive"));
        }
        if self.mc_samples == 0 {
            return Err(invalid("mc_samples", "must be positive"));
        }
        Ok(())
    }

    /// Linear total power budget P_T.
    pub fn total_power(&self) -> f64 {
        db_to_linear(self.total_power_db)
    }
}

/// 10^(x/10).
pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

/// Parses and validates a JSON config document.
///
/// Parse errors carry serde's line/column context; validation errors name the
/// violated field.
pub fn load_scenario(text: &str) -> Result<(ChannelScenario, SolveConfig), ScenarioError> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    doc.scenario.validate()?;
    doc.solve.validate()?;
    validate_pair(&doc.scenario, &doc.solve)?;
    Ok((doc.scenario, doc.solve))
}

/// Cross-field checks that need both sections of the document. Callers that
/// mutate a loaded scenario or config (e.g. CLI overrides) must re-run this.
pub fn validate_pair(sc: &ChannelScenario, cfg: &SolveConfig) -> Result<(), ScenarioError> {
    if cfg.eve_must_decode_public && sc.eve_csi == EveCsi::Statistical {
        return Err(invalid(
            "eve_must_decode_public",
            "requires perfect eavesdropper CSI (the everyone-decodes rows need channel \
             realizations, not variances)",
        ));
    }
    Ok(())
}

/// The bundled N=2, J=3 reference scenario (6 dB budget, R0 = 0.2).
pub fn paper_n2j3() -> ConfigDoc {
    let text = include_str!("../data/paper_n2j3.json");
    let doc: ConfigDoc = serde_json::from_str(text).expect("bundled scenario parses");
    doc.scenario.validate().expect("bundled scenario is valid");
    doc.solve.validate().expect("bundled config is valid");
    doc
}

/// Complex numbers serialize as two-element arrays `[re, im]`.
mod cpx {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod cpx_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

mod cpx_mat {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Complex64>>, D::Error> {
        let raw = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bundled_scenario_parses_with_paper_gains() {
        let doc = paper_n2j3();
        let sc = &doc.scenario;
        assert_eq!(sc.n_relays, 2);
        assert_eq!(sc.n_eves, 3);
        assert_eq!(sc.gamma[0], Complex64::new(-1.3136, 0.3534));
        assert_eq!(sc.alpha0, Complex64::new(0.3039, 0.5128));
        assert_eq!(sc.beta[2][1], Complex64::new(-0.5092, 0.2570));
        assert_eq!(sc.sigma2_beta0, vec![0.01, 0.04, 0.09]);
        assert_eq!(doc.solve.power_steps, 50);
        assert_eq!(doc.solve.public_rate, 0.2);
    }

    #[test]
    fn j0_scenario_is_valid() {
        let text = r#"{
            "scenario": {
                "n_relays": 2, "n_eves": 0,
                "alpha0": [0.3, 0.5],
                "gamma": [[1.0, 0.0], [0.5, -0.5]],
                "alpha": [[0.2, 0.1], [-0.3, 0.4]],
                "eve_csi": "perfect"
            },
            "solve": { "total_power_db": 6.0 }
        }"#;
        let (sc, cfg) = load_scenario(text).unwrap();
        assert_eq!(sc.n_eves, 0);
        assert_eq!(sc.noise_power, 1.0);
        assert_eq!(cfg.public_rate, 0.0);
        assert_eq!(cfg.power_steps, 50);
    }

    #[test]
    fn zero_noise_rejected() {
        let text = r#"{
            "scenario": {
                "n_relays": 1, "n_eves": 0,
                "alpha0": [0.3, 0.5],
                "gamma": [[1.0, 0.0]],
                "alpha": [[0.2, 0.1]],
                "noise_power": 0.0,
                "eve_csi": "perfect"
            },
            "solve": { "total_power_db": 6.0 }
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("noise_power"));
    }

    #[test]
    fn statistical_mode_requires_variances() {
        let text = r#"{
            "scenario": {
                "n_relays": 1, "n_eves": 1,
                "alpha0": [0.3, 0.5],
                "gamma": [[1.0, 0.0]],
                "alpha": [[0.2, 0.1]],
                "eve_csi": "statistical"
            },
            "solve": { "total_power_db": 6.0 }
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("sigma2_beta0"));
    }

    #[test]
    fn eve_decode_public_rejected_in_statistical_mode() {
        let doc = paper_n2j3();
        let mut text_doc = doc.clone();
        text_doc.scenario.eve_csi = EveCsi::Statistical;
        text_doc.solve.eve_must_decode_public = true;
        let text = serde_json::to_string(&text_doc).unwrap();
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("eve_must_decode_public"));
    }

    #[test]
    fn parse_error_reports_position() {
        let err = load_scenario("{ \"scenario\": { }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "missing location in: {msg}");
    }

    #[test]
    fn db_to_linear_examples() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert!((db_to_linear(6.0) - 3.9810717055349722).abs() < 1e-12);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let doc = paper_n2j3();
        let text = serde_json::to_string(&doc).unwrap();
        let (sc, cfg) = load_scenario(&text).unwrap();
        assert_eq!(sc.alpha0.re.to_bits(), doc.scenario.alpha0.re.to_bits());
        for (a, b) in sc.beta.iter().flatten().zip(doc.scenario.beta.iter().flatten()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(cfg.total_power_db.to_bits(), doc.solve.total_power_db.to_bits());
        assert_eq!(cfg.secrecy_bisect_tol.to_bits(), doc.solve.secrecy_bisect_tol.to_bits());
    }

    proptest! {
        #[test]
        fn random_scenarios_round_trip(
            re in proptest::collection::vec(-10.0f64..10.0, 9),
            noise in 1e-3f64..10.0,
        ) {
            let sc = ChannelScenario {
                n_relays: 2,
                n_eves: 1,
                alpha0: Complex64::new(re[0], re[1]),
                beta0: vec![Complex64::new(re[2], re[3])],
                gamma: vec![Complex64::new(re[4], re[5]), Complex64::new(re[6], re[7])],
                alpha: vec![Complex64::new(re[8], re[0]), Complex64::new(re[1], re[2])],
                beta: vec![vec![Complex64::new(re[3], re[4]), Complex64::new(re[5], re[6])]],
                noise_power: noise,
                eve_csi: EveCsi::Perfect,
                sigma2_beta0: vec![],
                sigma2_beta: vec![],
            };
            let doc = ConfigDoc {
                scenario: sc,
                solve: SolveConfig {
                    total_power_db: re[7],
                    public_rate: 0.2,
                    power_steps: 50,
                    secrecy_bisect_tol: 1e-6,
                    sdp_tol: 1e-8,
                    eve_must_decode_public: false,
                    mc_samples: 1000,
                    rng_seed: 7,
                    include_m_equals_m: false,
                },
            };
            let text = serde_json::to_string(&doc).unwrap();
            let (sc2, cfg2) = load_scenario(&text).unwrap();
            prop_assert_eq!(sc2.alpha0.re.to_bits(), doc.scenario.alpha0.re.to_bits());
            prop_assert_eq!(sc2.alpha0.im.to_bits(), doc.scenario.alpha0.im.to_bits());
            prop_assert_eq!(sc2.noise_power.to_bits(), doc.scenario.noise_power.to_bits());
            prop_assert_eq!(cfg2.total_power_db.to_bits(), doc.solve.total_power_db.to_bits());
            for (a, b) in sc2.gamma.iter().zip(doc.scenario.gamma.iter()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
