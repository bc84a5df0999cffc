//! Primal-dual interior-point method for small dense cone programs over
//! `S_+^d × R_+^p` in the standard equality form
//!
//! ```text
//! minimize   ⟨C, S⟩ + c·w
//! s.t.       ⟨A_k, S⟩ + a_k·w = b_k,   S ⪰ 0,  w ≥ 0.
//! ```
//!
//! Infeasible start, Nesterov–Todd scaling on the PSD block, Mehrotra-style
//! predictor plus centering step, Schur-complement normal equations solved by
//! Cholesky with a tiny deterministic ridge escalation. The iteration schedule
//! is fixed and free of randomized pivoting, so identical inputs produce
//! bit-identical outputs.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

/// One equality row `⟨mat, S⟩ + vec·w = b`.
#[derive(Debug, Clone)]
pub struct RealRow {
    pub mat: DMatrix<f64>,
    pub vec: Vec<f64>,
    pub b: f64,
}

/// The real standard-form program.
#[derive(Debug, Clone)]
pub struct RealForm {
    pub d: usize,
    pub p: usize,
    pub c_mat: DMatrix<f64>,
    pub c_vec: Vec<f64>,
    pub rows: Vec<RealRow>,
}

#[derive(Debug, Clone)]
pub struct IpmOutcome {
    pub converged: bool,
    pub s_mat: DMatrix<f64>,
    pub w: Vec<f64>,
    pub y: Vec<f64>,
    pub z_mat: DMatrix<f64>,
    pub v: Vec<f64>,
    pub iters: usize,
    pub pfeas: f64,
    pub dfeas: f64,
    pub relgap: f64,
    pub pobj: f64,
    pub dobj: f64,
}

fn max_abs_mat(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for r in 0..n {
        for c in (r + 1)..n {
            let avg = 0.5 * (m[(r, c)] + m[(c, r)]);
            m[(r, c)] = avg;
            m[(c, r)] = avg;
        }
    }
}

/// Largest step `α` with `S + α·dS ⪰ 0`, given the Cholesky factor of `S`.
fn max_step_psd(chol: &Cholesky<f64, Dyn>, ds: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let y = match l.solve_lower_triangular(ds) {
        Some(y) => y,
        None => return 0.0,
    };
    // L⁻¹ dS L⁻ᵀ = (L⁻¹ (L⁻¹ dS)ᵀ)ᵀ because dS is symmetric
    let mut t = match l.solve_lower_triangular(&y.transpose()) {
        Some(t) => t,
        None => return 0.0,
    };
    symmetrize(&mut t);
    let eig = SymmetricEigen::new(t);
    let lam_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if lam_min >= -1e-300 {
        f64::INFINITY
    } else {
        -1.0 / lam_min
    }
}

fn max_step_orthant(w: &[f64], dw: &[f64]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (wi, di) in w.iter().zip(dw) {
        if *di < 0.0 {
            alpha = alpha.min(-wi / di);
        }
    }
    alpha
}

fn cholesky_ridged(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(ch) = Cholesky::new(m.clone()) {
        return Some(ch);
    }
    let base = 1.0 + max_abs_mat(m);
    let mut ridge = 1e-14 * base;
    for _ in 0..8 {
        let mut damped = m.clone();
        for i in 0..m.nrows() {
            damped[(i, i)] += ridge;
        }
        if let Some(ch) = Cholesky::new(damped) {
            return Some(ch);
        }
        ridge *= 100.0;
    }
    None
}

struct Iterate {
    s: DMatrix<f64>,
    w: Vec<f64>,
    y: Vec<f64>,
    z: DMatrix<f64>,
    v: Vec<f64>,
}

pub fn solve_ipm(form: &RealForm, tol: f64, max_iter: usize) -> IpmOutcome {
    let d = form.d;
    let p = form.p;
    let m = form.rows.len();
    let nu = (d + p) as f64;

    let b_scale = 1.0 + form.rows.iter().fold(0.0f64, |acc, r| acc.max(r.b.abs()));
    let data_scale = 1.0
        + form
            .rows
            .iter()
            .fold(
                max_abs_mat(&form.c_mat).max(max_abs(&form.c_vec)),
                |acc, r| acc.max(max_abs_mat(&r.mat)).max(max_abs(&r.vec)),
            );

    let eta_p = b_scale;
    let eta_d = data_scale;
    let mut it = Iterate {
        s: DMatrix::identity(d, d) * eta_p,
        w: vec![eta_p; p],
        y: vec![0.0; m],
        z: DMatrix::identity(d, d) * eta_d,
        v: vec![eta_d; p],
    };

    let outcome = |it: &Iterate, iters: usize, converged: bool, metrics: (f64, f64, f64, f64, f64)| {
        let (pfeas, dfeas, relgap, pobj, dobj) = metrics;
        IpmOutcome {
            converged,
            s_mat: it.s.clone(),
            w: it.w.clone(),
            y: it.y.clone(),
            z_mat: it.z.clone(),
            v: it.v.clone(),
            iters,
            pfeas,
            dfeas,
            relgap,
            pobj,
            dobj,
        }
    };

    let mut last_metrics = (f64::INFINITY, f64::INFINITY, f64::INFINITY, 0.0, 0.0);

    for iter in 0..max_iter {
        // residuals
        let mut rp = vec![0.0; m];
        for (k, row) in form.rows.iter().enumerate() {
            let mut lhs = super::embed::frob(&row.mat, &it.s);
            for i in 0..p {
                lhs += row.vec[i] * it.w[i];
            }
            rp[k] = row.b - lhs;
        }
        let mut rd_mat = form.c_mat.clone() - &it.z;
        for (k, row) in form.rows.iter().enumerate() {
            rd_mat -= &row.mat * it.y[k];
        }
        let mut rd_vec = vec![0.0; p];
        for i in 0..p {
            let mut acc = form.c_vec[i] - it.v[i];
            for (k, row) in form.rows.iter().enumerate() {
                acc -= row.vec[i] * it.y[k];
            }
            rd_vec[i] = acc;
        }
        let gap = super::embed::frob(&it.s, &it.z)
            + it.w.iter().zip(&it.v).map(|(a, b)| a * b).sum::<f64>();
        let pobj = super::embed::frob(&form.c_mat, &it.s)
            + form.c_vec.iter().zip(&it.w).map(|(a, b)| a * b).sum::<f64>();
        let dobj = form.rows.iter().zip(&it.y).map(|(r, yk)| r.b * yk).sum::<f64>();

        let pfeas = max_abs(&rp) / b_scale;
        let dfeas = max_abs_mat(&rd_mat).max(max_abs(&rd_vec)) / data_scale;
        let relgap = gap / (1.0 + pobj.abs() + dobj.abs());
        last_metrics = (pfeas, dfeas, relgap, pobj, dobj);

        if !(pfeas.is_finite() && dfeas.is_finite() && relgap.is_finite()) {
            return outcome(&it, iter, false, last_metrics);
        }
        if pfeas <= tol && dfeas <= tol && relgap <= tol {
            return outcome(&it, iter, true, last_metrics);
        }
        if nu == 0.0 {
            // no cone variables at all: nothing more the IPM can improve
            return outcome(&it, iter, pfeas <= tol && dfeas <= tol, last_metrics);
        }
        let mu = gap / nu;

        // NT scaling of the PSD block; θ scaling of the orthant
        let (chol_s, w_scale, waw): (Option<Cholesky<f64, Dyn>>, Option<DMatrix<f64>>, Vec<DMatrix<f64>>) =
            if d > 0 {
                let chol_s = match Cholesky::new(it.s.clone()) {
                    Some(c) => c,
                    None => return outcome(&it, iter, false, last_metrics),
                };
                let ls = chol_s.l();
                let mut g = &ls.transpose() * &it.z * &ls;
                symmetrize(&mut g);
                let eig = SymmetricEigen::new(g);
                if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
                    return outcome(&it, iter, false, last_metrics);
                }
                let mut g_inv_sqrt = DMatrix::zeros(d, d);
                for (idx, &lam) in eig.eigenvalues.iter().enumerate() {
                    let q = eig.eigenvectors.column(idx);
                    let scale = 1.0 / lam.sqrt();
                    for r in 0..d {
                        for c in 0..d {
                            g_inv_sqrt[(r, c)] += scale * q[r] * q[c];
                        }
                    }
                }
                let mut w_mat = &ls * &g_inv_sqrt * ls.transpose();
                symmetrize(&mut w_mat);
                let waw: Vec<DMatrix<f64>> = form
                    .rows
                    .iter()
                    .map(|row| {
                        let mut x = &w_mat * &row.mat * &w_mat;
                        symmetrize(&mut x);
                        x
                    })
                    .collect();
                (Some(chol_s), Some(w_mat), waw)
            } else {
                (None, None, form.rows.iter().map(|_| DMatrix::zeros(0, 0)).collect())
            };
        let theta: Vec<f64> = it.w.iter().zip(&it.v).map(|(w, v)| w / v).collect();

        // Schur complement
        let mut schur = DMatrix::zeros(m, m);
        for k in 0..m {
            for l in k..m {
                let mut acc = if d > 0 {
                    super::embed::frob(&form.rows[k].mat, &waw[l])
                } else {
                    0.0
                };
                for i in 0..p {
                    acc += theta[i] * form.rows[k].vec[i] * form.rows[l].vec[i];
                }
                schur[(k, l)] = acc;
                schur[(l, k)] = acc;
            }
        }
        let chol_m = match cholesky_ridged(&schur) {
            Some(c) => c,
            None => return outcome(&it, iter, false, last_metrics),
        };

        let w_rd_w: Option<DMatrix<f64>> = w_scale.as_ref().map(|wm| {
            let mut x = wm * &rd_mat * wm;
            symmetrize(&mut x);
            x
        });

        // one Newton solve for a given complementarity target
        let solve_direction = |rc_mat: &DMatrix<f64>, rc_vec: &[f64]| {
            let mut rhs = DVector::zeros(m);
            for k in 0..m {
                let mut q = 0.0;
                if d > 0 {
                    q += super::embed::frob(
                        &form.rows[k].mat,
                        &(rc_mat - w_rd_w.as_ref().unwrap()),
                    );
                }
                for i in 0..p {
                    q += form.rows[k].vec[i] * (rc_vec[i] - theta[i] * rd_vec[i]);
                }
                rhs[k] = rp[k] - q;
            }
            let dy = chol_m.solve(&rhs);
            let mut dz = rd_mat.clone();
            for k in 0..m {
                dz -= &form.rows[k].mat * dy[k];
            }
            let mut ds = if d > 0 {
                let mut x = rc_mat - w_rd_w.as_ref().unwrap();
                for k in 0..m {
                    x += &waw[k] * dy[k];
                }
                x
            } else {
                DMatrix::zeros(0, 0)
            };
            symmetrize(&mut ds);
            symmetrize(&mut dz);
            let mut dv = vec![0.0; p];
            let mut dw = vec![0.0; p];
            for i in 0..p {
                let mut acc = rd_vec[i];
                for k in 0..m {
                    acc -= form.rows[k].vec[i] * dy[k];
                }
                dv[i] = acc;
                dw[i] = rc_vec[i] - theta[i] * acc;
            }
            (ds, dw, dy, dz, dv)
        };

        let step_lengths = |ds: &DMatrix<f64>, dw: &[f64], dz: &DMatrix<f64>, dv: &[f64]| {
            let mut ap = max_step_orthant(&it.w, dw);
            let mut ad = max_step_orthant(&it.v, dv);
            if let Some(cs) = &chol_s {
                ap = ap.min(max_step_psd(cs, ds));
            }
            if d > 0 {
                if let Some(cz) = Cholesky::new(it.z.clone()) {
                    ad = ad.min(max_step_psd(&cz, dz));
                } else {
                    ad = 0.0;
                }
            }
            ((0.99 * ap).min(1.0), (0.99 * ad).min(1.0))
        };

        // predictor (affine scaling)
        let rc_mat_aff = if d > 0 { -&it.s } else { DMatrix::zeros(0, 0) };
        let rc_vec_aff: Vec<f64> = it.w.iter().map(|w| -w).collect();
        let (ds_a, dw_a, _dy_a, dz_a, dv_a) = solve_direction(&rc_mat_aff, &rc_vec_aff);
        let (ap_a, ad_a) = step_lengths(&ds_a, &dw_a, &dz_a, &dv_a);
        let mut gap_aff = 0.0;
        if d > 0 {
            let s_trial = &it.s + &ds_a * ap_a;
            let z_trial = &it.z + &dz_a * ad_a;
            gap_aff += super::embed::frob(&s_trial, &z_trial);
        }
        for i in 0..p {
            gap_aff += (it.w[i] + ap_a * dw_a[i]) * (it.v[i] + ad_a * dv_a[i]);
        }
        let mu_aff = (gap_aff / nu).max(0.0);
        let sigma = (mu_aff / mu).powi(3).clamp(1e-8, 0.999);

        // corrector (recentered) step, reusing the factored Schur complement
        let target = sigma * mu;
        let rc_mat = if d > 0 {
            let z_inv = Cholesky::new(it.z.clone())
                .map(|c| c.inverse())
                .unwrap_or_else(|| DMatrix::identity(d, d));
            let mut x = z_inv * target - &it.s;
            symmetrize(&mut x);
            x
        } else {
            DMatrix::zeros(0, 0)
        };
        let rc_vec: Vec<f64> = it
            .w
            .iter()
            .zip(&it.v)
            .map(|(w, v)| target / v - w)
            .collect();
        let (ds, dw, dy, dz, dv) = solve_direction(&rc_mat, &rc_vec);
        let (ap, ad) = step_lengths(&ds, &dw, &dz, &dv);

        if ap < 1e-12 && ad < 1e-12 {
            return outcome(&it, iter, false, last_metrics);
        }

        if d > 0 {
            it.s += &ds * ap;
            it.z += &dz * ad;
            symmetrize(&mut it.s);
            symmetrize(&mut it.z);
        }
        for i in 0..p {
            it.w[i] += ap * dw[i];
            it.v[i] += ad * dv[i];
        }
        for k in 0..m {
            it.y[k] += ad * dy[k];
        }
    }

    let converged = last_metrics.0 <= tol && last_metrics.1 <= tol && last_metrics.2 <= tol;
    outcome(&it, max_iter, converged, last_metrics)
}
