//! Problem 2: cheapest public-message powers `(Ps0, P_{R0})` and relay
//! direction `φ_u` that deliver the fixed public rate `R0` around a given
//! secret allocation.
//!
//! With `g = 2^{2R0} − 1` every decode condition is linear in the two powers
//! once the direction is fixed:
//!
//! ```text
//! Ps0 ≥ L                        (every relay decodes)
//! e·Ps0 + f_D·P_R0 ≥ g           (destination decodes)
//! e_j·Ps0 + f_j·P_R0 ≥ g   ∀j    (eavesdroppers decode, optional variant)
//! ```
//!
//! Destination-only service is solved in closed form at the matched-filter
//! direction `φ_u = α*/‖α‖`, which simultaneously maximizes the only
//! direction-dependent coefficient. The everyone-decodes variant needs a
//! compromise direction and goes through a three-stage pipeline: a
//! minimum-power semidefinite relaxation over `Φ = φφ*`, principal-direction
//! rounding, and an exact two-variable LP at the rounded direction.

use crate::cone::{self, ConeProgram, ConeStatus, Sense};
use crate::lp2d::{minimize_total, HalfPlane};
use crate::rates;
use crate::scenario::{ChannelScenario, EveCsi, SolveConfig};
use nalgebra::DMatrix;
use num_complex::Complex64;

const BUDGET_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublicVariant {
    DestOnly,
    EveDecode,
}

#[derive(Debug, Clone)]
pub struct PublicAllocation {
    pub feasible: bool,
    pub ps0: f64,
    pub pr0: f64,
    /// Unit-norm relay direction; the relay weights are `√P_R0·φ_u`.
    pub phi_u: Vec<Complex64>,
    pub total: f64,
    pub variant: PublicVariant,
    /// Rank-one defect of the stage-A relaxation (0 for the closed form).
    pub suboptimal_rank_defect: f64,
    /// Present when `feasible` is false.
    pub reason: Option<String>,
}

impl PublicAllocation {
    fn infeasible(variant: PublicVariant, phi_u: Vec<Complex64>, reason: &str) -> Self {
        PublicAllocation {
            feasible: false,
            ps0: 0.0,
            pr0: 0.0,
            phi_u,
            total: f64::INFINITY,
            variant,
            suboptimal_rank_defect: 0.0,
            reason: Some(reason.to_string()),
        }
    }

    fn trivial(variant: PublicVariant, phi_u: Vec<Complex64>) -> Self {
        PublicAllocation {
            feasible: true,
            ps0: 0.0,
            pr0: 0.0,
            phi_u,
            total: 0.0,
            variant,
            suboptimal_rank_defect: 0.0,
            reason: None,
        }
    }
}

/// Direction-independent pieces of the decode conditions.
pub(crate) struct PublicEnv {
    pub g: f64,
    /// Relay decode floor on `Ps0`; `+∞` when some relay link is dead.
    pub l_floor: f64,
    /// Destination direct-link coefficient `|α0|²/(N0 + Ps1|α0|²)`.
    pub e_dest: f64,
    /// Destination relayed-term denominator `N0 + |αψ|²`.
    pub d_dest: f64,
    /// Per-eavesdropper `(e_j, N0 + |β_jψ|²)`, populated only for the
    /// everyone-decodes variant.
    pub eves: Vec<(f64, f64)>,
}

impl PublicEnv {
    pub fn new(
        sc: &ChannelScenario,
        r0: f64,
        ps1: f64,
        psi: &[Complex64],
        eve_decode: bool,
    ) -> Self {
        let n0 = sc.noise_power;
        let g = (2.0f64).powf(2.0 * r0) - 1.0;
        let l_floor = sc
            .gamma
            .iter()
            .map(|gi| {
                let gsq = gi.norm_sqr();
                if gsq > 0.0 {
                    g * (n0 / gsq + ps1)
                } else if g > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0f64, f64::max);
        let a0 = sc.alpha0.norm_sqr();
        let e_dest = a0 / (n0 + ps1 * a0);
        let d_dest = n0 + rates::row_dot(&sc.alpha, psi).norm_sqr();
        let eves = if eve_decode {
            (0..sc.n_eves)
                .map(|j| {
                    let e0 = sc.beta0[j].norm_sqr();
                    (
                        e0 / (n0 + ps1 * e0),
                        n0 + rates::row_dot(&sc.beta[j], psi).norm_sqr(),
                    )
                })
                .collect()
        } else {
            Vec::new()
        };
        PublicEnv {
            g,
            l_floor,
            e_dest,
            d_dest,
            eves,
        }
    }

    /// Decode conditions as half-planes in `(Ps0, P_R0)` for a fixed unit
    /// direction.
    pub fn rows(&self, sc: &ChannelScenario, phi_u: &[Complex64]) -> Vec<HalfPlane> {
        let mut rows = vec![HalfPlane {
            a: 1.0,
            b: 0.0,
            c: self.l_floor,
        }];
        let f_dest = rates::row_dot(&sc.alpha, phi_u).norm_sqr() / self.d_dest;
        rows.push(HalfPlane {
            a: self.e_dest,
            b: f_dest,
            c: self.g,
        });
        for (j, (e_j, d_j)) in self.eves.iter().enumerate() {
            let f_j = rates::row_dot(&sc.beta[j], phi_u).norm_sqr() / d_j;
            rows.push(HalfPlane {
                a: *e_j,
                b: f_j,
                c: self.g,
            });
        }
        rows
    }

    /// Exact minimum `Ps0 + P_R0` at a fixed direction.
    pub fn min_total(&self, sc: &ChannelScenario, phi_u: &[Complex64]) -> Option<(f64, f64)> {
        if self.g <= 0.0 {
            return Some((0.0, 0.0));
        }
        if !self.l_floor.is_finite() {
            return None;
        }
        minimize_total(&self.rows(sc, phi_u))
    }
}

/// Matched-filter direction `α*/‖α‖`, or `e₀` when the relay-destination
/// links are all dead.
fn default_direction(sc: &ChannelScenario) -> Vec<Complex64> {
    let norm = rates::norm2(&sc.alpha).sqrt();
    if norm > 0.0 {
        sc.alpha.iter().map(|a| a.conj() / norm).collect()
    } else {
        let mut u = vec![Complex64::new(0.0, 0.0); sc.n_relays];
        if !u.is_empty() {
            u[0] = Complex64::new(1.0, 0.0);
        }
        u
    }
}

fn budget_check(mut alloc: PublicAllocation, budget: f64) -> PublicAllocation {
    if alloc.total > budget + BUDGET_TOL {
        alloc.feasible = false;
        alloc.reason = Some(format!(
            "minimum public power {:.6} exceeds remaining budget {:.6}",
            alloc.total, budget
        ));
    }
    alloc
}

/// Destination-only variant, closed form. The relayed coefficient is maximal
/// at the matched filter, so the LP degenerates to two candidate vertices:
/// the relay floor with the destination served by the relays, and the
/// destination served by the direct link alone.
pub fn solve_problem2_dest(
    sc: &ChannelScenario,
    r0: f64,
    budget: f64,
    ps1: f64,
    psi: &[Complex64],
) -> PublicAllocation {
    let phi_u = default_direction(sc);
    let env = PublicEnv::new(sc, r0, ps1, psi, false);
    if env.g <= 0.0 {
        return PublicAllocation::trivial(PublicVariant::DestOnly, phi_u);
    }
    if !env.l_floor.is_finite() {
        return PublicAllocation::infeasible(
            PublicVariant::DestOnly,
            phi_u,
            "a relay-source link is dead, so no power lets every relay decode",
        );
    }
    let l = env.l_floor;
    let e = env.e_dest;
    let f = rates::norm2(&sc.alpha) / env.d_dest;
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    if env.g - e * l <= 0.0 {
        candidates.push((l, 0.0));
    } else if f > 0.0 {
        candidates.push((l, (env.g - e * l) / f));
    }
    if e > 0.0 {
        candidates.push((l.max(env.g / e), 0.0));
    }
    let best = candidates
        .into_iter()
        .min_by(|a, b| (a.0 + a.1).partial_cmp(&(b.0 + b.1)).unwrap());
    let (ps0, pr0) = match best {
        Some(v) => v,
        None => {
            return PublicAllocation::infeasible(
                PublicVariant::DestOnly,
                phi_u,
                "the destination is unreachable on both hops",
            )
        }
    };
    budget_check(
        PublicAllocation {
            feasible: true,
            ps0,
            pr0,
            phi_u,
            total: ps0 + pr0,
            variant: PublicVariant::DestOnly,
            suboptimal_rank_defect: 0.0,
            reason: None,
        },
        budget,
    )
}

/// Everyone-decodes variant: SDR over `Φ = φφ*`, principal-direction
/// rounding, then the exact two-variable LP at the rounded direction.
pub fn solve_problem2_eve(
    sc: &ChannelScenario,
    r0: f64,
    budget: f64,
    ps1: f64,
    psi: &[Complex64],
    sdp_tol: f64,
) -> PublicAllocation {
    assert!(
        sc.eve_csi == EveCsi::Perfect,
        "the everyone-decodes variant needs per-eavesdropper channel realizations"
    );
    if sc.n_eves == 0 {
        return solve_problem2_dest(sc, r0, budget, ps1, psi);
    }
    let n = sc.n_relays;
    let env = PublicEnv::new(sc, r0, ps1, psi, true);
    if env.g <= 0.0 {
        return PublicAllocation::trivial(PublicVariant::EveDecode, default_direction(sc));
    }
    if !env.l_floor.is_finite() {
        return PublicAllocation::infeasible(
            PublicVariant::EveDecode,
            default_direction(sc),
            "a relay-source link is dead, so no power lets every relay decode",
        );
    }

    // stage A: minimum-power relaxation; the scalar is Ps0
    let mut prog = ConeProgram::new(n, 1);
    prog.obj_mat = DMatrix::identity(n, n);
    prog.obj_coeffs = vec![1.0];
    prog.constrain(DMatrix::zeros(n, n), vec![1.0], Sense::Ge, env.l_floor);
    prog.constrain(
        rates::dest_matrix(sc) / Complex64::new(env.d_dest, 0.0),
        vec![env.e_dest],
        Sense::Ge,
        env.g,
    );
    for (j, (e_j, d_j)) in env.eves.iter().enumerate() {
        let b = DMatrix::from_fn(n, n, |r, c| sc.beta[j][r].conj() * sc.beta[j][c]);
        prog.constrain(b / Complex64::new(*d_j, 0.0), vec![*e_j], Sense::Ge, env.g);
    }
    prog.constrain(DMatrix::identity(n, n), vec![1.0], Sense::Le, budget);
    let relaxed = cone::solve(&prog, sdp_tol);

    let (phi_u, defect, reason) = match relaxed.status {
        ConeStatus::Infeasible => {
            return PublicAllocation::infeasible(
                PublicVariant::EveDecode,
                default_direction(sc),
                "no public allocation serves every receiver within the remaining budget",
            );
        }
        ConeStatus::Optimal => {
            let (u, lam, defect) = cone::principal_direction(&relaxed.psd_matrix);
            if lam > 1e-12 {
                (u, defect, None)
            } else {
                (default_direction(sc), 0.0, None)
            }
        }
        ConeStatus::MaxIter => (
            default_direction(sc),
            0.0,
            Some("relaxation stalled; fell back to the matched-filter direction".to_string()),
        ),
    };

    // stage C: exact powers at the rounded direction
    let (ps0, pr0) = match env.min_total(sc, &phi_u) {
        Some(v) => v,
        None => {
            return PublicAllocation::infeasible(
                PublicVariant::EveDecode,
                phi_u,
                "some receiver is unreachable at the rounded direction",
            )
        }
    };
    let mut alloc = budget_check(
        PublicAllocation {
            feasible: true,
            ps0,
            pr0,
            phi_u,
            total: ps0 + pr0,
            variant: PublicVariant::EveDecode,
            suboptimal_rank_defect: defect,
            reason: None,
        },
        budget,
    );
    if alloc.feasible {
        alloc.reason = reason;
    }
    alloc
}

/// Variant dispatch on the configured service set.
pub fn solve_problem2(
    sc: &ChannelScenario,
    cfg: &SolveConfig,
    budget: f64,
    ps1: f64,
    psi: &[Complex64],
) -> PublicAllocation {
    if cfg.eve_must_decode_public {
        solve_problem2_eve(sc, cfg.public_rate, budget, ps1, psi, cfg.sdp_tol)
    } else {
        solve_problem2_dest(sc, cfg.public_rate, budget, ps1, psi)
    }
}
