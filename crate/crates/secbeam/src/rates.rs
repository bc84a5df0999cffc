//! Every information-rate expression and decode constraint of the model,
//! as pure functions over a [`ChannelScenario`].
//!
//! All rates are in bits per channel use and carry the 1/2 pre-log factor of
//! the two-hop protocol. Quadratic forms are evaluated through their rank-one
//! structure `|⟨row, ψ⟩|²` instead of forming N×N matrices; the statistical
//! mode replaces eavesdropper forms by their variance surrogates
//! `σ²_{β0j}` and `ψ*Λ_jψ`.

use crate::scenario::{ChannelScenario, EveCsi, SolveConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `Σ_i row_i ψ_i` — the row-vector/column-vector product in forms like
/// `ψ*β*βψ = |βψ|²`.
pub fn row_dot(row: &[Complex64], psi: &[Complex64]) -> Complex64 {
    row.iter().zip(psi).map(|(r, p)| r * p).sum()
}

/// `‖v‖²`.
pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn half_log2_1p(snr: f64) -> f64 {
    0.5 * (1.0 + snr).log2()
}

/// Effective eavesdropper-j channel: the scalar direct-link term `e` and the
/// relay-side quadratic form, which is rank-one under perfect CSI and diagonal
/// under statistical CSI.
#[derive(Debug, Clone)]
pub(crate) enum EveChannel {
    Rank1 { e: f64, row: Vec<Complex64> },
    Diag { e: f64, var: Vec<f64> },
}

impl EveChannel {
    pub fn e(&self) -> f64 {
        match self {
            EveChannel::Rank1 { e, .. } | EveChannel::Diag { e, .. } => *e,
        }
    }

    /// `ψ*B_jψ` (= `|β_jψ|²` or `ψ*Λ_jψ`).
    pub fn quad(&self, psi: &[Complex64]) -> f64 {
        match self {
            EveChannel::Rank1 { row, .. } => row_dot(row, psi).norm_sqr(),
            EveChannel::Diag { var, .. } => {
                var.iter().zip(psi).map(|(s, p)| s * p.norm_sqr()).sum()
            }
        }
    }

    /// `B_j` as an explicit Hermitian matrix for the cone kernel.
    pub fn matrix(&self, n: usize) -> DMatrix<Complex64> {
        match self {
            EveChannel::Rank1 { row, .. } => {
                DMatrix::from_fn(n, n, |r, c| row[r].conj() * row[c])
            }
            EveChannel::Diag { var, .. } => {
                DMatrix::from_fn(n, n, |r, c| {
                    if r == c {
                        Complex64::new(var[r], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            }
        }
    }
}

/// The per-eavesdropper channels in the representation the active CSI mode
/// prescribes.
pub(crate) fn eve_channels(sc: &ChannelScenario) -> Vec<EveChannel> {
    match sc.eve_csi {
        EveCsi::Perfect => (0..sc.n_eves)
            .map(|j| EveChannel::Rank1 {
                e: sc.beta0[j].norm_sqr(),
                row: sc.beta[j].clone(),
            })
            .collect(),
        EveCsi::Statistical => (0..sc.n_eves)
            .map(|j| EveChannel::Diag {
                e: sc.sigma2_beta0[j],
                var: sc.sigma2_beta[j].clone(),
            })
            .collect(),
    }
}

/// `A = α*α` as an explicit Hermitian matrix for the cone kernel.
pub(crate) fn dest_matrix(sc: &ChannelScenario) -> DMatrix<Complex64> {
    let n = sc.n_relays;
    DMatrix::from_fn(n, n, |r, c| sc.alpha[r].conj() * sc.alpha[c])
}

/// Rate of the non-secret message at relay i, secret signal treated as noise:
/// `½log2(1 + Ps0|γi|²/(N0 + Ps1|γi|²))`.
pub fn relay_public_rate(sc: &ChannelScenario, i: usize, ps0: f64, ps1: f64) -> f64 {
    let g = sc.gamma[i].norm_sqr();
    half_log2_1p(ps0 * g / (sc.noise_power + ps1 * g))
}

/// Rate of the non-secret message at the destination, combining the direct
/// and relayed observations with the secret signal as interference on each:
/// `½log2(1 + Ps0|α0|²/(N0+Ps1|α0|²) + |αφ|²/(N0+|αψ|²))`.
pub fn dest_public_rate(
    sc: &ChannelScenario,
    ps0: f64,
    ps1: f64,
    phi: &[Complex64],
    psi: &[Complex64],
) -> f64 {
    let a0 = sc.alpha0.norm_sqr();
    let direct = ps0 * a0 / (sc.noise_power + ps1 * a0);
    let relayed =
        row_dot(&sc.alpha, phi).norm_sqr() / (sc.noise_power + row_dot(&sc.alpha, psi).norm_sqr());
    half_log2_1p(direct + relayed)
}

/// Rate of the secret message at relay i after cancelling the decoded
/// non-secret part: `½log2(1 + Ps1|γi|²/N0)`.
pub fn relay_secret_rate(sc: &ChannelScenario, i: usize, ps1: f64) -> f64 {
    half_log2_1p(ps1 * sc.gamma[i].norm_sqr() / sc.noise_power)
}

/// Rate of the secret message at the destination:
/// `½log2(1 + (Ps1|α0|² + |αψ|²)/N0)`.
pub fn dest_secret_rate(sc: &ChannelScenario, ps1: f64, psi: &[Complex64]) -> f64 {
    let s = ps1 * sc.alpha0.norm_sqr() + row_dot(&sc.alpha, psi).norm_sqr();
    half_log2_1p(s / sc.noise_power)
}

/// Rate of the secret message at eavesdropper j (pessimistic: the
/// eavesdropper knows the non-secret symbol). Under statistical CSI this is
/// the Jensen surrogate with `|β0j|² → σ²_{β0j}` and `β_j*β_j → Λ_j`.
pub fn eve_secret_rate(sc: &ChannelScenario, j: usize, ps1: f64, psi: &[Complex64]) -> f64 {
    let ch = match sc.eve_csi {
        EveCsi::Perfect => EveChannel::Rank1 {
            e: sc.beta0[j].norm_sqr(),
            row: sc.beta[j].clone(),
        },
        EveCsi::Statistical => EveChannel::Diag {
            e: sc.sigma2_beta0[j],
            var: sc.sigma2_beta[j].clone(),
        },
    };
    half_log2_1p((ps1 * ch.e() + ch.quad(psi)) / sc.noise_power)
}

/// Rate of the non-secret message at eavesdropper j, secret signal treated
/// as noise on both hops (the everyone-decodes variant's constraint).
pub fn eve_public_rate(
    sc: &ChannelScenario,
    j: usize,
    ps0: f64,
    ps1: f64,
    phi: &[Complex64],
    psi: &[Complex64],
) -> f64 {
    let ch = match sc.eve_csi {
        EveCsi::Perfect => EveChannel::Rank1 {
            e: sc.beta0[j].norm_sqr(),
            row: sc.beta[j].clone(),
        },
        EveCsi::Statistical => EveChannel::Diag {
            e: sc.sigma2_beta0[j],
            var: sc.sigma2_beta[j].clone(),
        },
    };
    let direct = ps0 * ch.e() / (sc.noise_power + ps1 * ch.e());
    let relayed = ch.quad(phi) / (sc.noise_power + ch.quad(psi));
    half_log2_1p(direct + relayed)
}

/// Worst-case secrecy rate `max(0, R_D − max_j R_Ej)`; the destination rate
/// itself when there is no eavesdropper.
pub fn secrecy_objective(sc: &ChannelScenario, ps1: f64, psi: &[Complex64]) -> f64 {
    let rd = dest_secret_rate(sc, ps1, psi);
    if sc.n_eves == 0 {
        return rd;
    }
    let worst = (0..sc.n_eves)
        .map(|j| eve_secret_rate(sc, j, ps1, psi))
        .fold(f64::NEG_INFINITY, f64::max);
    (rd - worst).max(0.0)
}

/// The full power/beamformer tuple a solution is judged by.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub ps0: f64,
    pub ps1: f64,
    pub phi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
}

impl Allocation {
    pub fn zero(n: usize) -> Self {
        Allocation {
            ps0: 0.0,
            ps1: 0.0,
            phi: vec![Complex64::new(0.0, 0.0); n],
            psi: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn total_power(&self) -> f64 {
        self.ps0 + self.ps1 + norm2(&self.phi) + norm2(&self.psi)
    }
}

/// Every rate of the network at one allocation.
#[derive(Debug, Clone)]
pub struct RateReport {
    pub relay_public_rates: Vec<f64>,
    pub dest_public_rate: f64,
    pub relay_secret_rates: Vec<f64>,
    pub dest_secret_rate: f64,
    pub eve_secret_rates: Vec<f64>,
    pub eve_public_rates: Vec<f64>,
    pub secrecy_rate: f64,
}

pub fn rate_report(sc: &ChannelScenario, alloc: &Allocation) -> RateReport {
    RateReport {
        relay_public_rates: (0..sc.n_relays)
            .map(|i| relay_public_rate(sc, i, alloc.ps0, alloc.ps1))
            .collect(),
        dest_public_rate: dest_public_rate(sc, alloc.ps0, alloc.ps1, &alloc.phi, &alloc.psi),
        relay_secret_rates: (0..sc.n_relays)
            .map(|i| relay_secret_rate(sc, i, alloc.ps1))
            .collect(),
        dest_secret_rate: dest_secret_rate(sc, alloc.ps1, &alloc.psi),
        eve_secret_rates: (0..sc.n_eves)
            .map(|j| eve_secret_rate(sc, j, alloc.ps1, &alloc.psi))
            .collect(),
        eve_public_rates: (0..sc.n_eves)
            .map(|j| eve_public_rate(sc, j, alloc.ps0, alloc.ps1, &alloc.phi, &alloc.psi))
            .collect(),
        secrecy_rate: secrecy_objective(sc, alloc.ps1, &alloc.psi),
    }
}

/// One failed constraint: its name and the (negative) slack.
#[derive(Debug, Clone)]
pub struct Violation {
    pub constraint: String,
    pub slack: f64,
}

/// Absolute slack tolerance on rates and powers for constraint audits.
pub const CONSTRAINT_TOL: f64 = 1e-7;

/// Audits an allocation against every constraint of the joint problem:
/// public decodability at relays and destination, relay decodability of the
/// secret message, power nonnegativity, the total budget, and (when the
/// everyone-decodes variant is on) public decodability at each eavesdropper.
/// Violations are data, not errors; the list is empty iff all slacks clear
/// `-CONSTRAINT_TOL`.
pub fn check_constraints(
    sc: &ChannelScenario,
    cfg: &SolveConfig,
    alloc: &Allocation,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut check = |name: String, slack: f64| {
        if slack < -CONSTRAINT_TOL {
            out.push(Violation {
                constraint: name,
                slack,
            });
        }
    };
    let r0 = cfg.public_rate;
    for i in 0..sc.n_relays {
        check(
            format!("relay_public_rate[{i}] >= R0"),
            relay_public_rate(sc, i, alloc.ps0, alloc.ps1) - r0,
        );
    }
    check(
        "dest_public_rate >= R0".into(),
        dest_public_rate(sc, alloc.ps0, alloc.ps1, &alloc.phi, &alloc.psi) - r0,
    );
    let rd = dest_secret_rate(sc, alloc.ps1, &alloc.psi);
    for i in 0..sc.n_relays {
        check(
            format!("relay_secret_rate[{i}] >= dest_secret_rate"),
            relay_secret_rate(sc, i, alloc.ps1) - rd,
        );
    }
    check("ps0 >= 0".into(), alloc.ps0);
    check("ps1 >= 0".into(), alloc.ps1);
    check(
        "total_power <= P_T".into(),
        cfg.total_power() - alloc.total_power(),
    );
    if cfg.eve_must_decode_public {
        for j in 0..sc.n_eves {
            check(
                format!("eve_public_rate[{j}] >= R0"),
                eve_public_rate(sc, j, alloc.ps0, alloc.ps1, &alloc.phi, &alloc.psi) - r0,
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::paper_n2j3;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn paper_scenario() -> ChannelScenario {
        paper_n2j3().scenario
    }

    fn unit_alpha_conj(sc: &ChannelScenario) -> Vec<Complex64> {
        let na = norm2(&sc.alpha).sqrt();
        sc.alpha.iter().map(|a| a.conj() / na).collect()
    }

    #[test]
    fn relay_public_rate_matches_reference() {
        let sc = paper_scenario();
        assert_relative_eq!(
            relay_public_rate(&sc, 0, 1.0, 0.0),
            0.7555914363080238,
            max_relative = 1e-12
        );
        assert_eq!(relay_public_rate(&sc, 0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn relay_secret_rate_matches_reference() {
        let sc = paper_scenario();
        assert_relative_eq!(
            relay_secret_rate(&sc, 1, 2.0),
            1.0938456360244597,
            max_relative = 1e-12
        );
    }

    #[test]
    fn dest_public_rate_matches_reference() {
        let sc = paper_scenario();
        let phi_u = unit_alpha_conj(&sc);
        let zero = vec![Complex64::new(0.0, 0.0); 2];
        assert_relative_eq!(
            dest_public_rate(&sc, 0.0, 0.0, &phi_u, &zero),
            0.3949258400939036,
            max_relative = 1e-12
        );
    }

    #[test]
    fn dest_secret_rate_matches_reference() {
        let sc = paper_scenario();
        let psi = unit_alpha_conj(&sc);
        assert_relative_eq!(
            dest_secret_rate(&sc, 1.0, &psi),
            0.5297523172558303,
            max_relative = 1e-12
        );
    }

    #[test]
    fn eve_secret_rate_matches_reference() {
        let sc = paper_scenario();
        let e1 = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert_relative_eq!(
            eve_secret_rate(&sc, 0, 1.0, &e1),
            0.26171812898563707,
            max_relative = 1e-12
        );
    }

    #[test]
    fn statistical_eve_rate_is_jensen_surrogate() {
        let mut sc = paper_scenario();
        sc.eve_csi = EveCsi::Statistical;
        let zero = vec![Complex64::new(0.0, 0.0); 2];
        assert_relative_eq!(
            eve_secret_rate(&sc, 0, 1.0, &zero),
            0.007177646488535027,
            max_relative = 1e-12
        );
    }

    #[test]
    fn secrecy_objective_clamps_and_degenerates() {
        let sc = paper_scenario();
        let zero = vec![Complex64::new(0.0, 0.0); 2];
        assert_eq!(secrecy_objective(&sc, 0.0, &zero), 0.0);

        let mut no_eves = sc.clone();
        no_eves.n_eves = 0;
        no_eves.beta0.clear();
        no_eves.beta.clear();
        let psi = unit_alpha_conj(&sc);
        assert_eq!(
            secrecy_objective(&no_eves, 1.0, &psi),
            dest_secret_rate(&no_eves, 1.0, &psi)
        );

        let mut silent = sc.clone();
        silent.n_eves = 1;
        silent.beta0 = vec![Complex64::new(0.0, 0.0)];
        silent.beta = vec![vec![Complex64::new(0.0, 0.0); 2]];
        assert_eq!(
            secrecy_objective(&silent, 1.0, &psi),
            dest_secret_rate(&silent, 1.0, &psi)
        );
    }

    #[test]
    fn check_constraints_flags_public_rates_without_power() {
        let doc = paper_n2j3();
        let zero = Allocation::zero(2);
        let mut cfg = doc.solve.clone();
        cfg.public_rate = 0.0;
        assert!(check_constraints(&doc.scenario, &cfg, &zero).is_empty());
        cfg.public_rate = 0.2;
        let violations = check_constraints(&doc.scenario, &cfg, &zero);
        let names: Vec<_> = violations.iter().map(|v| v.constraint.as_str()).collect();
        assert!(names.contains(&"dest_public_rate >= R0"));
        assert!(names.iter().any(|n| n.starts_with("relay_public_rate")));
        assert_eq!(violations.len(), 3);
    }

    proptest! {
        #[test]
        fn psi_phase_invariance(theta in 0.0f64..std::f64::consts::TAU, ps1 in 0.0f64..5.0) {
            let sc = paper_scenario();
            let psi: Vec<Complex64> = vec![
                Complex64::new(0.4, -0.2),
                Complex64::new(-0.1, 0.7),
            ];
            let rot = Complex64::from_polar(1.0, theta);
            let psi_rot: Vec<Complex64> = psi.iter().map(|z| z * rot).collect();
            prop_assert!((dest_secret_rate(&sc, ps1, &psi) - dest_secret_rate(&sc, ps1, &psi_rot)).abs() < 1e-12);
            for j in 0..sc.n_eves {
                prop_assert!((eve_secret_rate(&sc, j, ps1, &psi) - eve_secret_rate(&sc, j, ps1, &psi_rot)).abs() < 1e-12);
            }
            prop_assert!((secrecy_objective(&sc, ps1, &psi) - secrecy_objective(&sc, ps1, &psi_rot)).abs() < 1e-12);
        }

        #[test]
        fn rates_monotone_in_own_and_interfering_power(
            p_lo in 0.0f64..3.0, p_hi in 3.0f64..10.0, interf in 0.0f64..5.0
        ) {
            let sc = paper_scenario();
            prop_assert!(relay_secret_rate(&sc, 0, p_hi) >= relay_secret_rate(&sc, 0, p_lo));
            prop_assert!(relay_public_rate(&sc, 0, p_hi, interf) >= relay_public_rate(&sc, 0, p_lo, interf));
            // more interference from the secret signal never helps the public one
            prop_assert!(relay_public_rate(&sc, 0, p_lo, p_hi) <= relay_public_rate(&sc, 0, p_lo, p_lo));
            let zero = vec![Complex64::new(0.0, 0.0); 2];
            prop_assert!(dest_secret_rate(&sc, p_hi, &zero) >= dest_secret_rate(&sc, p_lo, &zero));
        }
    }
}
