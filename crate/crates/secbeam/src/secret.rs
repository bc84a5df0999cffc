//! Problem 1: secret-message power and relay weights for a fixed secret-side
//! budget `P_m`.
//!
//! The secrecy ratio `t = 2^{2Rs}` is bisected geometrically. Feasibility of a
//! ratio is decided by a max-slack semidefinite relaxation over `Ψ = ψψ*`:
//!
//! ```text
//! maximize σ   s.t.  (t·B̃_j − Ã)•Ψ + (t·ẽ_j − ã₀)·Ps1 + σ ≤ 1    ∀j
//!                    Ã•Ψ + (ã₀ − γ̃_i)·Ps1 ≤ 0                     ∀i
//!                    tr Ψ + Ps1 ≤ P_m,   Ψ ⪰ 0,  Ps1, σ ≥ 0
//! ```
//!
//! (tildes divide by N₀). The zero allocation always attains `σ = 1`, and a
//! ratio `t` is achievable iff `σ* ≥ t`, so the bisection needs no separate
//! feasibility phase. At the final ratio a minimum-power extraction resolve
//! picks the least-power optimizer, and a rank-one beamformer is recovered
//! from its principal direction or, when the relaxation is genuinely
//! higher-rank, by Gaussian randomization.

use crate::cone::{self, ConeProgram, ConeStatus, Sense};
use crate::rates::{self, EveChannel};
use crate::scenario::{ChannelScenario, SolveConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

const MAX_BISECT_ITERS: usize = 60;
const RANK1_DEFECT_TOL: f64 = 1e-6;
const RANDOMIZATION_SAMPLES: usize = 200;

/// Outcome of Problem 1 at one secret-side budget.
#[derive(Debug, Clone)]
pub struct SecretAllocation {
    pub ps1: f64,
    pub psi: Vec<Complex64>,
    /// Worst-case secrecy rate of the recovered rank-one solution,
    /// re-evaluated from the rate formulas and clamped at zero.
    pub secrecy_rate: f64,
    /// Rank-one defect `λ₂/λ₁` of the relaxation optimizer.
    pub rank1_defect: f64,
    pub bisect_iters: usize,
    /// True when the re-evaluated objective was negative and clamped.
    pub clamped: bool,
    /// Certified-feasible secrecy rate of the relaxation, `½log₂ t_lo`.
    pub relax_rate: f64,
}

impl SecretAllocation {
    fn zero(n: usize) -> Self {
        SecretAllocation {
            ps1: 0.0,
            psi: vec![Complex64::new(0.0, 0.0); n],
            secrecy_rate: 0.0,
            rank1_defect: 0.0,
            bisect_iters: 0,
            clamped: false,
            relax_rate: 0.0,
        }
    }
}

/// Normalized problem data shared by every ratio solve.
struct P1Data {
    n: usize,
    a_tilde: DMatrix<Complex64>,
    a0_tilde: f64,
    gamma_tilde: Vec<f64>,
    /// `(ẽ_j, B̃_j)`; a single all-zero virtual eavesdropper when J = 0.
    eves: Vec<(f64, DMatrix<Complex64>)>,
}

impl P1Data {
    fn new(sc: &ChannelScenario) -> Self {
        let n = sc.n_relays;
        let n0 = sc.noise_power;
        let a_tilde = rates::dest_matrix(sc) / Complex64::new(n0, 0.0);
        let a0_tilde = sc.alpha0.norm_sqr() / n0;
        let gamma_tilde = sc.gamma.iter().map(|g| g.norm_sqr() / n0).collect();
        let mut eves: Vec<(f64, DMatrix<Complex64>)> = rates::eve_channels(sc)
            .iter()
            .map(|ch| (ch.e() / n0, ch.matrix(n) / Complex64::new(n0, 0.0)))
            .collect();
        if eves.is_empty() {
            eves.push((0.0, DMatrix::zeros(n, n)));
        }
        P1Data {
            n,
            a_tilde,
            a0_tilde,
            gamma_tilde,
            eves,
        }
    }

    /// Max-slack program for ratio `t`; scalars are `[Ps1, σ]`.
    fn slack_program(&self, t: f64, p_m: f64) -> ConeProgram {
        let mut prog = ConeProgram::new(self.n, 2);
        prog.obj_coeffs = vec![0.0, -1.0];
        for (e, b) in &self.eves {
            prog.constrain(
                b * Complex64::new(t, 0.0) - &self.a_tilde,
                vec![t * e - self.a0_tilde, 1.0],
                Sense::Le,
                1.0,
            );
        }
        for g in &self.gamma_tilde {
            prog.constrain(
                self.a_tilde.clone(),
                vec![self.a0_tilde - g, 0.0],
                Sense::Le,
                0.0,
            );
        }
        prog.constrain(DMatrix::identity(self.n, self.n), vec![1.0, 0.0], Sense::Le, p_m);
        prog
    }

    /// Minimum-power extraction at a ratio already known feasible;
    /// the single scalar is `Ps1`.
    fn extraction_program(&self, t: f64, p_m: f64) -> ConeProgram {
        let mut prog = ConeProgram::new(self.n, 1);
        prog.obj_mat = DMatrix::identity(self.n, self.n);
        prog.obj_coeffs = vec![1.0];
        for (e, b) in &self.eves {
            prog.constrain(
                b * Complex64::new(t, 0.0) - &self.a_tilde,
                vec![t * e - self.a0_tilde],
                Sense::Le,
                1.0 - t,
            );
        }
        for g in &self.gamma_tilde {
            prog.constrain(self.a_tilde.clone(), vec![self.a0_tilde - g], Sense::Le, 0.0);
        }
        prog.constrain(DMatrix::identity(self.n, self.n), vec![1.0], Sense::Le, p_m);
        prog
    }
}

/// `σ* − t` for the max-slack relaxation; the ratio `t` is feasible iff this
/// is nonnegative.
#[cfg(test)]
pub(crate) fn max_slack(sc: &ChannelScenario, p_m: f64, cfg: &SolveConfig, t: f64) -> Option<f64> {
    let data = P1Data::new(sc);
    let sol = cone::solve(&data.slack_program(t, p_m), cfg.sdp_tol);
    match sol.status {
        ConeStatus::Optimal => Some(-sol.objective_value - t),
        _ => None,
    }
}

/// Optimal value of the minimum-power extraction at ratio `t`.
#[cfg(test)]
pub(crate) fn extraction_power(
    sc: &ChannelScenario,
    p_m: f64,
    cfg: &SolveConfig,
    t: f64,
) -> Option<f64> {
    let data = P1Data::new(sc);
    let sol = cone::solve(&data.extraction_program(t, p_m), cfg.sdp_tol);
    match sol.status {
        ConeStatus::Optimal => Some(sol.objective_value),
        _ => None,
    }
}

/// Upper bound on the achievable ratio: the destination numerator can never
/// exceed the full budget through the best of the two hops, and every
/// eavesdropper denominator is at least one.
pub(crate) fn ratio_upper_bound(sc: &ChannelScenario, p_m: f64) -> f64 {
    let best_gain = sc
        .alpha0
        .norm_sqr()
        .max(rates::norm2(&sc.alpha));
    1.0 + p_m * best_gain / sc.noise_power
}

fn eve_channel_list(sc: &ChannelScenario) -> Vec<EveChannel> {
    rates::eve_channels(sc)
}

/// Scale `ψ` down (never up) so the relay-decode cap and the power budget
/// both hold for the given `Ps1`.
fn enforce_caps(sc: &ChannelScenario, ps1: f64, psi: &mut [Complex64], p_m: f64) {
    let gmin = sc
        .gamma
        .iter()
        .map(|g| g.norm_sqr())
        .fold(f64::INFINITY, f64::min);
    let cap = ps1 * (gmin - sc.alpha0.norm_sqr());
    let fwd = rates::row_dot(&sc.alpha, psi).norm_sqr();
    if fwd > 0.0 {
        if cap <= 0.0 {
            for z in psi.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
        } else if fwd > cap {
            let f = (cap / fwd).sqrt();
            for z in psi.iter_mut() {
                *z *= f;
            }
        }
    }
    let head = (p_m - ps1).max(0.0);
    let pw = rates::norm2(psi);
    if pw > head {
        let f = if head > 0.0 { (head / pw).sqrt() } else { 0.0 };
        for z in psi.iter_mut() {
            *z *= f;
        }
    }
}

/// Complex square-root factor `F` with `FF* = Ψ` (clamping tiny negative
/// eigenvalues), for sampling `ψ = F·g`, `g ~ CN(0, I)`.
fn psd_factor(psi_mat: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = psi_mat.clone().symmetric_eigen();
    let n = psi_mat.nrows();
    let mut f = DMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k].max(0.0);
        let s = lam.sqrt();
        for r in 0..n {
            f[(r, k)] = eig.eigenvectors[(r, k)] * Complex64::new(s, 0.0);
        }
    }
    f
}

pub fn solve_problem1(sc: &ChannelScenario, p_m: f64, cfg: &SolveConfig) -> SecretAllocation {
    solve_problem1_salted(sc, p_m, cfg, 0)
}

pub(crate) fn solve_problem1_salted(
    sc: &ChannelScenario,
    p_m: f64,
    cfg: &SolveConfig,
    salt: u64,
) -> SecretAllocation {
    let n = sc.n_relays;
    if p_m <= 0.0 {
        return SecretAllocation::zero(n);
    }
    let data = P1Data::new(sc);

    let mut t_lo = 1.0f64;
    let mut t_hi = ratio_upper_bound(sc, p_m).max(1.0 + 1e-9);
    let mut best: Option<(DMatrix<Complex64>, f64)> = None;
    let mut iters = 0usize;
    while 0.5 * (t_hi / t_lo).log2() > cfg.secrecy_bisect_tol && iters < MAX_BISECT_ITERS {
        iters += 1;
        let t_mid = (t_lo * t_hi).sqrt();
        let sol = cone::solve(&data.slack_program(t_mid, p_m), cfg.sdp_tol);
        let feasible = sol.status == ConeStatus::Optimal && -sol.objective_value >= t_mid;
        if feasible {
            t_lo = t_mid;
            best = Some((sol.psd_matrix, sol.scalars[0]));
        } else {
            t_hi = t_mid;
        }
    }

    // prefer the minimum-power optimizer at the certified ratio
    let extraction = cone::solve(&data.extraction_program(t_lo, p_m), cfg.sdp_tol);
    let (psi_mat, ps1) = if extraction.status == ConeStatus::Optimal {
        (extraction.psd_matrix, extraction.scalars[0])
    } else if let Some((m, p)) = best {
        (m, p)
    } else {
        return SecretAllocation {
            bisect_iters: iters,
            ..SecretAllocation::zero(n)
        };
    };
    let ps1 = ps1.max(0.0).min(p_m);

    let (u, _lam, defect) = cone::principal_direction(&psi_mat);
    let trace = psi_mat.diagonal().iter().map(|z| z.re).sum::<f64>().max(0.0);
    let scale = trace.sqrt();
    let mut candidates: Vec<Vec<Complex64>> = Vec::new();
    candidates.push(u.iter().map(|z| z * Complex64::new(scale, 0.0)).collect());
    if defect > RANK1_DEFECT_TOL {
        let f = psd_factor(&psi_mat);
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.rng_seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for _ in 0..RANDOMIZATION_SAMPLES {
            let g: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect();
            let psi: Vec<Complex64> = (0..n)
                .map(|r| (0..n).map(|c| f[(r, c)] * g[c]).sum())
                .collect();
            candidates.push(psi);
        }
    }

    let eves = eve_channel_list(sc);
    let mut best_psi = vec![Complex64::new(0.0, 0.0); n];
    let mut best_obj = f64::NEG_INFINITY;
    for mut psi in candidates {
        enforce_caps(sc, ps1, &mut psi, p_m);
        let obj = secrecy_value(sc, &eves, ps1, &psi);
        if obj > best_obj {
            best_obj = obj;
            best_psi = psi;
        }
    }

    let dest = rates::dest_secret_rate(sc, ps1, &best_psi);
    let raw = if sc.n_eves == 0 {
        dest
    } else {
        dest - (0..sc.n_eves)
            .map(|j| rates::eve_secret_rate(sc, j, ps1, &best_psi))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let clamped = raw < 0.0;
    SecretAllocation {
        ps1,
        psi: best_psi,
        secrecy_rate: raw.max(0.0),
        rank1_defect: defect,
        bisect_iters: iters,
        clamped,
        relax_rate: 0.5 * t_lo.log2(),
    }
}

/// Worst-case secrecy objective without re-deriving the eavesdropper list.
fn secrecy_value(sc: &ChannelScenario, eves: &[EveChannel], ps1: f64, psi: &[Complex64]) -> f64 {
    let n0 = sc.noise_power;
    let dest = 1.0 + (ps1 * sc.alpha0.norm_sqr() + rates::row_dot(&sc.alpha, psi).norm_sqr()) / n0;
    let worst = eves
        .iter()
        .map(|ch| 1.0 + (ps1 * ch.e() + ch.quad(psi)) / n0)
        .fold(1.0f64, f64::max);
    0.5 * (dest / worst).log2()
}
