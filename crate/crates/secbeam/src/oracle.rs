//! Independent cross-checks for the two optimizers: dense grid searches that
//! share nothing with the cone kernel, and a Monte-Carlo estimate of the
//! ergodic eavesdropper rates behind the statistical-CSI surrogate.

use crate::public::PublicEnv;
use crate::rates;
use crate::scenario::{ChannelScenario, EveCsi, SolveConfig};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const P1_POWER_POINTS: usize = 64;
const P1_RADIUS_POINTS: usize = 32;
const P1_PHASE_POINTS: usize = 360;
const P1_REFINE_ROUNDS: usize = 2;
const P2_X_POINTS: usize = 2000;
const P2_REFINE_ROUNDS: usize = 2;

#[derive(Debug, Clone)]
pub struct GridOutcome {
    pub rs: f64,
    pub ps1: f64,
    pub psi: Vec<Complex64>,
}

/// Direction-reduced evaluation data: with `ψ = r1·u1 + r2·e^{iθ}·u2` every
/// quadratic form becomes `r1²q11 + r2²q22 + 2r1r2·Re(q12·e^{iθ})`.
struct ReducedEve {
    e: f64,
    q11: f64,
    q22: f64,
    q12: Complex64,
}

struct ReducedProblem {
    n0: f64,
    a0sq: f64,
    /// `‖α‖²`; the destination form is `r1²·anorm2` because `α ⊥ u2`.
    anorm2: f64,
    /// `min_i |γ_i|² − |α0|²`, the relay-decode headroom per unit `Ps1`.
    headroom: f64,
    eves: Vec<ReducedEve>,
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
}

impl ReducedProblem {
    fn new(sc: &ChannelScenario) -> Self {
        let n = sc.n_relays;
        assert!(
            n <= 2,
            "the grid oracle only supports one or two relays (got {n})"
        );
        let anorm2 = rates::norm2(&sc.alpha);
        let na = anorm2.sqrt();
        let (u1, u2) = if na > 0.0 {
            let u1: Vec<Complex64> = sc.alpha.iter().map(|a| a.conj() / na).collect();
            let u2 = if n == 2 {
                vec![-sc.alpha[1] / na, sc.alpha[0] / na]
            } else {
                Vec::new()
            };
            (u1, u2)
        } else {
            let mut u1 = vec![Complex64::new(0.0, 0.0); n];
            u1[0] = Complex64::new(1.0, 0.0);
            let u2 = if n == 2 {
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
            } else {
                Vec::new()
            };
            (u1, u2)
        };
        let eves = rates::eve_channels(sc)
            .iter()
            .map(|ch| {
                let (q11, q22, q12) = match ch {
                    rates::EveChannel::Rank1 { row, .. } => {
                        let c1 = rates::row_dot(row, &u1);
                        let c2 = if n == 2 {
                            rates::row_dot(row, &u2)
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        (c1.norm_sqr(), c2.norm_sqr(), c1.conj() * c2)
                    }
                    rates::EveChannel::Diag { var, .. } => {
                        let q11: f64 = var.iter().zip(&u1).map(|(s, u)| s * u.norm_sqr()).sum();
                        let q22: f64 = if n == 2 {
                            var.iter().zip(&u2).map(|(s, u)| s * u.norm_sqr()).sum()
                        } else {
                            0.0
                        };
                        let q12: Complex64 = if n == 2 {
                            var.iter()
                                .zip(u1.iter().zip(&u2))
                                .map(|(s, (a, b))| a.conj() * b * Complex64::new(*s, 0.0))
                                .sum()
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        (q11, q22, q12)
                    }
                };
                ReducedEve {
                    e: ch.e(),
                    q11,
                    q22,
                    q12,
                }
            })
            .collect();
        let gmin = sc
            .gamma
            .iter()
            .map(|g| g.norm_sqr())
            .fold(f64::INFINITY, f64::min);
        ReducedProblem {
            n0: sc.noise_power,
            a0sq: sc.alpha0.norm_sqr(),
            anorm2,
            headroom: gmin - sc.alpha0.norm_sqr(),
            eves,
            u1,
            u2,
        }
    }

    /// Secrecy objective at a reduced point, in one pass and two logarithms.
    fn objective(&self, ps1: f64, r1: f64, r2: f64, cos_t: f64, sin_t: f64) -> f64 {
        let dest = 1.0 + (ps1 * self.a0sq + r1 * r1 * self.anorm2) / self.n0;
        let mut worst = 1.0f64;
        for ev in &self.eves {
            let cross = ev.q12.re * cos_t - ev.q12.im * sin_t;
            let quad = r1 * r1 * ev.q11 + r2 * r2 * ev.q22 + 2.0 * r1 * r2 * cross;
            let e = 1.0 + (ps1 * ev.e + quad) / self.n0;
            if e > worst {
                worst = e;
            }
        }
        let rs = 0.5 * (dest / worst).log2();
        rs.max(0.0)
    }

    fn r1_cap(&self, ps1: f64) -> f64 {
        if self.anorm2 <= 0.0 {
            return 0.0;
        }
        ((ps1 * self.headroom).max(0.0) / self.anorm2).sqrt()
    }

    fn assemble(&self, r1: f64, r2: f64, cos_t: f64, sin_t: f64) -> Vec<Complex64> {
        let rot = Complex64::new(cos_t, sin_t) * r2;
        self.u1
            .iter()
            .enumerate()
            .map(|(i, u)| {
                u * Complex64::new(r1, 0.0)
                    + self.u2.get(i).copied().unwrap_or_default() * rot
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct P1Best {
    rs: f64,
    ps1: f64,
    r1: f64,
    r2: f64,
    theta_idx: usize,
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n == 0 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / n as f64
    }
}

/// Exhaustive search for Problem 1 over the reduced coordinates, followed by
/// window refinements around the incumbent. Deliberately reuses none of the
/// solver's machinery.
pub fn grid_problem1(sc: &ChannelScenario, p_m: f64) -> GridOutcome {
    let red = ReducedProblem::new(sc);
    let n = sc.n_relays;
    if p_m <= 0.0 {
        return GridOutcome {
            rs: 0.0,
            ps1: 0.0,
            psi: vec![Complex64::new(0.0, 0.0); n],
        };
    }
    let trig: Vec<(f64, f64)> = (0..P1_PHASE_POINTS)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / P1_PHASE_POINTS as f64;
            (t.cos(), t.sin())
        })
        .collect();

    // When every relay hears the secret worse than the destination's direct
    // link, the decode rows admit only Ps1 = 0 (and with it ψ ⊥ α).
    let ps1_max = if red.headroom >= 0.0 { p_m } else { 0.0 };
    let mut window: Option<(P1Best, f64, f64)> = None; // incumbent + (ps1, r) half-widths
    for _round in 0..=P1_REFINE_ROUNDS {
        let (ps1_lo, ps1_hi, r_half) = match &window {
            None => (0.0, ps1_max, f64::INFINITY),
            Some((best, wp, wr)) => (
                (best.ps1 - wp).max(0.0),
                (best.ps1 + wp).min(ps1_max),
                *wr,
            ),
        };
        let incumbent = window.map(|(b, _, _)| b);
        let scan = (0..=P1_POWER_POINTS)
            .into_par_iter()
            .map(|ip| {
                let ps1 = lerp(ps1_lo, ps1_hi, ip, P1_POWER_POINTS);
                let rem = (p_m - ps1).max(0.0);
                let r1_top = red.r1_cap(ps1).min(rem.sqrt());
                let (r1_lo, r1_hi) = match incumbent {
                    None => (0.0, r1_top),
                    Some(b) => {
                        let hi = (b.r1 + r_half).min(r1_top);
                        ((b.r1 - r_half).clamp(0.0, hi), hi)
                    }
                };
                let mut best = P1Best {
                    rs: -1.0,
                    ps1,
                    r1: 0.0,
                    r2: 0.0,
                    theta_idx: 0,
                };
                for i1 in 0..=P1_RADIUS_POINTS {
                    let r1 = lerp(r1_lo, r1_hi, i1, P1_RADIUS_POINTS);
                    let r2_top = (rem - r1 * r1).max(0.0).sqrt();
                    let (r2_lo, r2_hi) = match incumbent {
                        None => (0.0, r2_top),
                        Some(b) => {
                            let hi = (b.r2 + r_half).min(r2_top);
                            ((b.r2 - r_half).clamp(0.0, hi), hi)
                        }
                    };
                    for i2 in 0..=P1_RADIUS_POINTS {
                        let r2 = lerp(r2_lo, r2_hi, i2, P1_RADIUS_POINTS);
                        if n < 2 || r2 == 0.0 {
                            let rs = red.objective(ps1, r1, 0.0, 1.0, 0.0);
                            if rs > best.rs {
                                best = P1Best {
                                    rs,
                                    ps1,
                                    r1,
                                    r2: 0.0,
                                    theta_idx: 0,
                                };
                            }
                            if r2 == 0.0 {
                                continue;
                            }
                        }
                        for (k, (c, s)) in trig.iter().enumerate() {
                            let rs = red.objective(ps1, r1, r2, *c, *s);
                            if rs > best.rs {
                                best = P1Best {
                                    rs,
                                    ps1,
                                    r1,
                                    r2,
                                    theta_idx: k,
                                };
                            }
                        }
                    }
                }
                best
            })
            .collect::<Vec<_>>();
        let mut round_best = scan[0];
        for cand in &scan[1..] {
            if cand.rs > round_best.rs {
                round_best = *cand;
            }
        }
        let wp = (ps1_hi - ps1_lo) / P1_POWER_POINTS as f64;
        let wr = if r_half.is_finite() {
            2.0 * r_half / P1_RADIUS_POINTS as f64
        } else {
            p_m.sqrt() / P1_RADIUS_POINTS as f64
        };
        window = Some((round_best, wp, wr));
    }

    let (best, _, _) = window.unwrap();
    let (c, s) = trig_of(best.theta_idx);
    GridOutcome {
        rs: best.rs.max(0.0),
        ps1: best.ps1,
        psi: red.assemble(best.r1, best.r2, c, s),
    }
}

fn trig_of(idx: usize) -> (f64, f64) {
    let t = 2.0 * std::f64::consts::PI * idx as f64 / P1_PHASE_POINTS as f64;
    (t.cos(), t.sin())
}

/// Exhaustive minimum of `Ps0 + P_R0` for Problem 2 at a fixed direction:
/// scans `Ps0` at resolution `budget/2000` (plus refinements), computing the
/// exact cheapest `P_R0` for each candidate from the decode rows.
pub fn grid_problem2(
    sc: &ChannelScenario,
    r0: f64,
    budget: f64,
    ps1: f64,
    psi: &[Complex64],
    phi_u: &[Complex64],
    eve_decode: bool,
) -> Option<(f64, f64, f64)> {
    let env = PublicEnv::new(sc, r0, ps1, psi, eve_decode);
    if env.g <= 0.0 {
        return Some((0.0, 0.0, 0.0));
    }
    if !env.l_floor.is_finite() || budget <= 0.0 {
        return None;
    }
    let rows = env.rows(sc, phi_u);
    let y_needed = |x: f64| -> f64 {
        let mut y = 0.0f64;
        for row in &rows {
            let slack = row.c - row.a * x;
            if row.b > 1e-300 {
                y = y.max(slack / row.b);
            } else if slack > 1e-12 * (1.0 + row.c.abs()) {
                return f64::INFINITY;
            }
        }
        y
    };

    let mut best: Option<(f64, f64, f64)> = None;
    let mut lo = 0.0f64;
    let mut hi = budget;
    for _ in 0..=P2_REFINE_ROUNDS {
        for i in 0..=P2_X_POINTS {
            let x = lerp(lo, hi, i, P2_X_POINTS);
            let y = y_needed(x);
            if !y.is_finite() || x + y > budget + 1e-9 {
                continue;
            }
            let total = x + y;
            if best.map_or(true, |(t, _, _)| total < t) {
                best = Some((total, x, y));
            }
        }
        let (_, x_star, _) = best?;
        let step = (hi - lo) / P2_X_POINTS as f64;
        lo = (x_star - step).max(0.0);
        hi = (x_star + step).min(budget);
    }
    best
}

/// Draws a two-relay scenario with circularly-symmetric unit-variance
/// channels. Relay and relay-destination links are redrawn until they carry
/// at least some power so the instance is not numerically degenerate.
pub fn random_scenario<R: Rng>(rng: &mut R, n_eves: usize, csi: EveCsi) -> ChannelScenario {
    let n = 2usize;
    let draw = |rng: &mut R| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        ) * std::f64::consts::FRAC_1_SQRT_2
    };
    let draw_strong = |rng: &mut R| loop {
        let z = draw(rng);
        if z.norm() >= 0.25 {
            return z;
        }
    };
    let alpha0 = draw_strong(rng);
    // Relays sit close to the source, so the first hop is rarely the
    // bottleneck (and instances where it is still occur occasionally).
    let gamma: Vec<Complex64> = (0..n).map(|_| draw_strong(rng) * 3.0).collect();
    let alpha: Vec<Complex64> = (0..n).map(|_| draw_strong(rng)).collect();
    // Eavesdroppers get attenuated links (path loss relative to the intended
    // receiver), so instances with strictly positive secrecy are common.
    let strengths: Vec<f64> = (0..n_eves).map(|_| rng.gen_range(0.2..0.8)).collect();
    let beta0: Vec<Complex64> = strengths.iter().map(|s| draw(rng) * *s).collect();
    let beta: Vec<Vec<Complex64>> = strengths
        .iter()
        .map(|s| (0..n).map(|_| draw(rng) * *s).collect())
        .collect();
    let sigma2_beta0: Vec<f64> = strengths
        .iter()
        .map(|s| s * s * rng.gen_range(0.5..1.5))
        .collect();
    let sigma2_beta: Vec<Vec<f64>> = strengths
        .iter()
        .map(|s| (0..n).map(|_| s * s * rng.gen_range(0.5..1.5)).collect())
        .collect();
    let sc = ChannelScenario {
        n_relays: n,
        n_eves,
        alpha0,
        beta0,
        gamma,
        alpha,
        beta,
        noise_power: 1.0,
        eve_csi: csi,
        sigma2_beta0,
        sigma2_beta,
    };
    sc.validate().expect("random scenario is well formed");
    sc
}

/// Monte-Carlo estimate of the true ergodic objective under statistical CSI:
/// eavesdropper channels are drawn from their Rayleigh models and each
/// per-eavesdropper rate is averaged before the min over eavesdroppers.
#[derive(Debug, Clone)]
pub struct McEstimate {
    /// `R_D − max_j mean_j`, unclamped.
    pub objective: f64,
    pub eve_means: Vec<f64>,
    pub eve_stderrs: Vec<f64>,
    /// Index attaining the max mean, `None` when there is no eavesdropper.
    pub worst_j: Option<usize>,
    /// Standard error of the winning mean.
    pub stderr: f64,
}

pub fn mc_ergodic_objective(
    sc: &ChannelScenario,
    cfg: &SolveConfig,
    ps1: f64,
    psi: &[Complex64],
) -> McEstimate {
    assert!(
        sc.eve_csi == EveCsi::Statistical,
        "the ergodic Monte-Carlo check applies to statistical CSI"
    );
    let dest = rates::dest_secret_rate(sc, ps1, psi);
    let n = sc.n_relays;
    let samples = cfg.mc_samples;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.rng_seed);
    let mut means = Vec::with_capacity(sc.n_eves);
    let mut stderrs = Vec::with_capacity(sc.n_eves);
    for j in 0..sc.n_eves {
        let s0 = (sc.sigma2_beta0[j] / 2.0).sqrt();
        let srow: Vec<f64> = sc.sigma2_beta[j].iter().map(|v| (v / 2.0).sqrt()).collect();
        let mut sum = 0.0f64;
        let mut sumsq = 0.0f64;
        for _ in 0..samples {
            let b0 = Complex64::new(
                s0 * rng.sample::<f64, _>(StandardNormal),
                s0 * rng.sample::<f64, _>(StandardNormal),
            );
            let mut relayed = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let b = Complex64::new(
                    srow[i] * rng.sample::<f64, _>(StandardNormal),
                    srow[i] * rng.sample::<f64, _>(StandardNormal),
                );
                relayed += b * psi[i];
            }
            let rate = 0.5
                * (1.0 + (ps1 * b0.norm_sqr() + relayed.norm_sqr()) / sc.noise_power).log2();
            sum += rate;
            sumsq += rate * rate;
        }
        let mean = sum / samples as f64;
        let var = ((sumsq - samples as f64 * mean * mean) / (samples as f64 - 1.0)).max(0.0);
        means.push(mean);
        stderrs.push((var / samples as f64).sqrt());
    }
    let worst_j = (0..sc.n_eves).fold(None, |acc: Option<usize>, j| match acc {
        Some(k) if means[k] >= means[j] => Some(k),
        _ => Some(j),
    });
    let (objective, stderr) = match worst_j {
        Some(j) => (dest - means[j], stderrs[j]),
        None => (dest, 0.0),
    };
    McEstimate {
        objective,
        eve_means: means,
        eve_stderrs: stderrs,
        worst_j,
        stderr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::public::solve_problem2_dest;
    use crate::scenario::paper_n2j3;
    use crate::secret::solve_problem1;
    use approx::assert_abs_diff_eq;

    fn paper() -> (ChannelScenario, SolveConfig) {
        let doc = paper_n2j3();
        (doc.scenario, doc.solve)
    }

    #[test]
    fn grid_agrees_with_solver_on_paper_case() {
        let (sc, cfg) = paper();
        let solver = solve_problem1(&sc, 2.0, &cfg);
        let grid = grid_problem1(&sc, 2.0);
        assert_abs_diff_eq!(grid.rs, solver.secrecy_rate, epsilon = 2e-3);
        // the grid point itself satisfies the power budget and relay caps
        assert!(grid.ps1 + rates::norm2(&grid.psi) <= 2.0 + 1e-9);
    }

    #[test]
    fn grid_agrees_with_solver_statistical() {
        let (sc, cfg) = paper();
        let mut sc = sc;
        sc.eve_csi = EveCsi::Statistical;
        let solver = solve_problem1(&sc, 2.0, &cfg);
        let grid = grid_problem1(&sc, 2.0);
        assert_abs_diff_eq!(grid.rs, solver.secrecy_rate, epsilon = 2e-3);
    }

    #[test]
    fn grid_zero_budget() {
        let (sc, _) = paper();
        let grid = grid_problem1(&sc, 0.0);
        assert_eq!(grid.rs, 0.0);
        assert_eq!(grid.ps1, 0.0);
    }

    #[test]
    #[should_panic(expected = "one or two relays")]
    fn grid_refuses_three_relays() {
        let (sc, _) = paper();
        let mut sc = sc;
        sc.n_relays = 3;
        sc.gamma.push(Complex64::new(1.0, 0.0));
        sc.alpha.push(Complex64::new(1.0, 0.0));
        for row in sc.beta.iter_mut() {
            row.push(Complex64::new(0.1, 0.0));
        }
        for row in sc.sigma2_beta.iter_mut() {
            row.push(0.1);
        }
        grid_problem1(&sc, 1.0);
    }

    #[test]
    fn grid_objective_reevaluates_consistently() {
        let (sc, _) = paper();
        let grid = grid_problem1(&sc, 2.0);
        let direct = rates::secrecy_objective(&sc, grid.ps1, &grid.psi);
        assert_abs_diff_eq!(grid.rs, direct, epsilon = 1e-9);
    }

    #[test]
    fn vanishing_eve_variances_recover_the_eavesdropper_free_rate() {
        let (sc, cfg) = paper();
        let mut sc = sc;
        sc.eve_csi = EveCsi::Statistical;
        for v in sc.sigma2_beta0.iter_mut() {
            *v = 1e-12;
        }
        for row in sc.sigma2_beta.iter_mut() {
            for v in row.iter_mut() {
                *v = 1e-12;
            }
        }
        let mut sc_free = sc.clone();
        sc_free.n_eves = 0;
        sc_free.beta0.clear();
        sc_free.beta.clear();
        sc_free.sigma2_beta0.clear();
        sc_free.sigma2_beta.clear();
        let with_ghosts = solve_problem1(&sc, 2.0, &cfg);
        let free = solve_problem1(&sc_free, 2.0, &cfg);
        assert_abs_diff_eq!(with_ghosts.secrecy_rate, free.secrecy_rate, epsilon = 1e-4);
    }

    #[test]
    fn grid_p2_matches_closed_form() {
        let (sc, _) = paper();
        let budget = 10f64.powf(0.6);
        let dest = solve_problem2_dest(&sc, 0.2, budget, 0.0, &vec![Complex64::new(0.0, 0.0); 2]);
        let grid = grid_problem2(
            &sc,
            0.2,
            budget,
            0.0,
            &[Complex64::new(0.0, 0.0); 2],
            &dest.phi_u,
            false,
        )
        .expect("grid finds a point");
        assert!(grid.0 >= dest.total - 1e-9, "grid beat the exact LP");
        assert_abs_diff_eq!(grid.0, dest.total, epsilon = 1e-3);
    }

    #[test]
    fn grid_p2_zero_rate_and_dead_link() {
        let (sc, _) = paper();
        let psi = [Complex64::new(0.0, 0.0); 2];
        let phi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert_eq!(
            grid_problem2(&sc, 0.0, 1.0, 0.0, &psi, &phi, false),
            Some((0.0, 0.0, 0.0))
        );
        let mut dead = sc.clone();
        dead.gamma[0] = Complex64::new(0.0, 0.0);
        assert_eq!(grid_problem2(&dead, 0.2, 1.0, 0.0, &psi, &phi, false), None);
    }

    #[test]
    fn mc_estimate_brackets_the_surrogate() {
        let (sc, cfg) = paper();
        let mut sc = sc;
        sc.eve_csi = EveCsi::Statistical;
        let mut cfg = cfg;
        cfg.mc_samples = 20_000;
        let sol = solve_problem1(&sc, 2.0, &cfg);
        let mc = mc_ergodic_objective(&sc, &cfg, sol.ps1, &sol.psi);
        assert!(mc.stderr > 0.0);
        // Jensen's inequality: the surrogate under-reports the true objective
        assert!(
            mc.objective >= sol.secrecy_rate - 3.0 * mc.stderr,
            "mc {} vs surrogate {} (stderr {})",
            mc.objective,
            sol.secrecy_rate,
            mc.stderr
        );
        assert!(mc.objective <= sol.secrecy_rate + 0.1);
    }

    #[test]
    fn mc_is_deterministic_for_a_seed() {
        let (sc, cfg) = paper();
        let mut sc = sc;
        sc.eve_csi = EveCsi::Statistical;
        let mut cfg = cfg;
        cfg.mc_samples = 5_000;
        let psi = [Complex64::new(0.4, 0.1), Complex64::new(-0.2, 0.3)];
        let a = mc_ergodic_objective(&sc, &cfg, 1.0, &psi);
        let b = mc_ergodic_objective(&sc, &cfg, 1.0, &psi);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.worst_j, b.worst_j);
    }
}
