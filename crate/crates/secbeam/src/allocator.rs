//! Two-stage power split: sweep the secret-side budget over the grid
//! `P_m = m·P_T/M`, solve Problem 1 at each candidate, and keep the largest
//! `m` whose leftover `P_T − P_m` still supports the public rate through
//! Problem 2. Because the secrecy rate is nondecreasing in the secret budget,
//! the first feasible step of the descent is the optimum of the grid.

use crate::public::{solve_problem2, PublicAllocation};
use crate::rates::{self, Allocation, RateReport};
use crate::scenario::{ChannelScenario, SolveConfig};
use crate::secret::{solve_problem1_salted, SecretAllocation};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    /// No split of the budget sustains the public rate, not even giving
    /// the public message everything.
    PublicInfeasible,
}

/// One visited step of the budget descent.
#[derive(Debug, Clone)]
pub struct MStep {
    pub m: usize,
    pub p_m: f64,
    pub rs: f64,
    pub public_total: f64,
    pub public_feasible: bool,
}

#[derive(Debug, Clone)]
pub struct FullSolution {
    pub status: SolveStatus,
    pub m_star: Option<usize>,
    pub p_m: f64,
    pub secret: SecretAllocation,
    pub public: PublicAllocation,
    pub rates: RateReport,
    pub trace: Vec<MStep>,
}

impl FullSolution {
    pub fn allocation(&self) -> Allocation {
        Allocation {
            ps0: self.public.ps0,
            ps1: self.secret.ps1,
            phi: scaled_phi(&self.public),
            psi: self.secret.psi.clone(),
        }
    }
}

fn scaled_phi(public: &PublicAllocation) -> Vec<Complex64> {
    let s = Complex64::new(public.pr0.max(0.0).sqrt(), 0.0);
    public.phi_u.iter().map(|z| z * s).collect()
}

pub fn allocate(sc: &ChannelScenario, cfg: &SolveConfig) -> FullSolution {
    let p_t = cfg.total_power();
    let m_count = cfg.power_steps;
    let m_top = if cfg.include_m_equals_m { m_count } else { m_count - 1 };

    let mut trace = Vec::new();
    let mut last_attempt: Option<(SecretAllocation, PublicAllocation)> = None;
    for m in (0..=m_top).rev() {
        let p_m = m as f64 * p_t / m_count as f64;
        let secret = solve_problem1_salted(sc, p_m, cfg, m as u64);
        let public = solve_problem2(sc, cfg, p_t - p_m, secret.ps1, &secret.psi);
        trace.push(MStep {
            m,
            p_m,
            rs: secret.secrecy_rate,
            public_total: public.total,
            public_feasible: public.feasible,
        });
        if public.feasible {
            let solution = FullSolution {
                status: SolveStatus::Solved,
                m_star: Some(m),
                p_m,
                rates: rates::rate_report(
                    sc,
                    &Allocation {
                        ps0: public.ps0,
                        ps1: secret.ps1,
                        phi: scaled_phi(&public),
                        psi: secret.psi.clone(),
                    },
                ),
                secret,
                public,
                trace,
            };
            debug_assert!(
                rates::check_constraints(sc, cfg, &solution.allocation()).is_empty(),
                "accepted allocation violates constraints: {:?}",
                rates::check_constraints(sc, cfg, &solution.allocation())
            );
            return solution;
        }
        last_attempt = Some((secret, public));
    }

    let (_, public) = last_attempt.expect("descent visits at least m = 0");
    let zero_secret = solve_problem1_salted(sc, 0.0, cfg, 0);
    let zero_alloc = Allocation::zero(sc.n_relays);
    FullSolution {
        status: SolveStatus::PublicInfeasible,
        m_star: None,
        p_m: 0.0,
        secret: zero_secret,
        public,
        rates: rates::rate_report(sc, &zero_alloc),
        trace,
    }
}

/// Diagnostic: recomputes Problem 1 on the whole grid and checks the secrecy
/// rate never drops as the secret budget grows (within bisection slack).
pub fn verify_monotone(sc: &ChannelScenario, cfg: &SolveConfig) -> bool {
    let p_t = cfg.total_power();
    let m_count = cfg.power_steps;
    let m_top = if cfg.include_m_equals_m { m_count } else { m_count - 1 };
    let rates: Vec<f64> = (0..=m_top)
        .into_par_iter()
        .map(|m| {
            let p_m = m as f64 * p_t / m_count as f64;
            solve_problem1_salted(sc, p_m, cfg, m as u64).secrecy_rate
        })
        .collect();
    let slack = 2.0 * cfg.secrecy_bisect_tol + 1e-6;
    rates.windows(2).all(|w| w[1] >= w[0] - slack)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    PowerDb,
    PublicRate,
}

impl SweepAxis {
    pub fn column_name(self) -> &'static str {
        match self {
            SweepAxis::PowerDb => "power_db",
            SweepAxis::PublicRate => "public_rate",
        }
    }
}

/// One sweep point, ready for CSV serialization.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub axis_value: f64,
    pub rs: f64,
    pub m_star: Option<usize>,
    pub feasible: bool,
    pub ps0: f64,
    pub ps1: f64,
    pub pr0: f64,
    pub psi_norm2: f64,
}

/// Solves the full two-stage problem at `points` equispaced axis values.
/// Points are independent and run on the global thread pool; the output
/// order matches the axis order regardless of scheduling.
pub fn sweep(
    sc: &ChannelScenario,
    cfg: &SolveConfig,
    axis: SweepAxis,
    from: f64,
    to: f64,
    points: usize,
) -> Vec<SweepRow> {
    let values: Vec<f64> = if points <= 1 {
        vec![from]
    } else {
        (0..points)
            .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
            .collect()
    };
    values
        .into_par_iter()
        .map(|value| {
            let mut point_cfg = cfg.clone();
            match axis {
                SweepAxis::PowerDb => point_cfg.total_power_db = value,
                SweepAxis::PublicRate => point_cfg.public_rate = value,
            }
            let sol = allocate(sc, &point_cfg);
            let feasible = sol.status == SolveStatus::Solved;
            SweepRow {
                axis,
                axis_value: value,
                rs: if feasible { sol.secret.secrecy_rate } else { 0.0 },
                m_star: sol.m_star,
                feasible,
                ps0: if feasible { sol.public.ps0 } else { 0.0 },
                ps1: if feasible { sol.secret.ps1 } else { 0.0 },
                pr0: if feasible { sol.public.pr0 } else { 0.0 },
                psi_norm2: if feasible { rates::norm2(&sol.secret.psi) } else { 0.0 },
            }
        })
        .collect()
}
