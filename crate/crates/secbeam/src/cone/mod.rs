//! Small dense cone programs over a complex PSD block and nonnegative
//! scalars:
//!
//! ```text
//! minimize   ⟨C, Ψ⟩ + c·w
//! s.t.       ⟨A_k, Ψ⟩ + a_k·w  {≤,≥,=}  b_k     (k = 1..m)
//!            Ψ ⪰ 0 (Hermitian, n×n),  w ≥ 0,
//! ```
//!
//! with `⟨A, B⟩ = Re tr(AB)`. Complex Hermitian data are embedded into real
//! symmetric matrices of twice the dimension for the interior-point core and
//! projected back on extraction. Infeasibility is certified by a phase-1
//! slack-minimization pass whose dual multipliers form a Farkas certificate.

pub mod embed;
pub mod ipm;

use embed::{embed_herm, herm_inner, unembed_avg};
use ipm::{solve_ipm, RealForm, RealRow};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub const MAX_PSD_DIM: usize = 32;
pub const MAX_CONSTRAINTS: usize = 64;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct ConeConstraint {
    pub mat: DMatrix<Complex64>,
    pub coeffs: Vec<f64>,
    pub rhs: f64,
    pub sense: Sense,
}

#[derive(Debug, Clone)]
pub struct ConeProgram {
    pub psd_dim: usize,
    pub n_scalars: usize,
    pub obj_mat: DMatrix<Complex64>,
    pub obj_coeffs: Vec<f64>,
    pub constraints: Vec<ConeConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeStatus {
    Optimal,
    Infeasible,
    MaxIter,
}

#[derive(Debug, Clone, Copy)]
pub struct KktResiduals {
    pub primal_feas: f64,
    pub dual_feas: f64,
    pub duality_gap: f64,
}

#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub status: ConeStatus,
    pub psd_matrix: DMatrix<Complex64>,
    pub scalars: Vec<f64>,
    pub objective_value: f64,
    pub kkt: KktResiduals,
    /// Farkas multipliers, one per constraint (≥ 0 on ≤ rows, ≤ 0 on ≥ rows,
    /// free on = rows), present exactly when `status == Infeasible`.
    pub certificate: Option<Vec<f64>>,
}

impl ConeProgram {
    pub fn new(psd_dim: usize, n_scalars: usize) -> Self {
        ConeProgram {
            psd_dim,
            n_scalars,
            obj_mat: DMatrix::zeros(psd_dim, psd_dim),
            obj_coeffs: vec![0.0; n_scalars],
            constraints: Vec::new(),
        }
    }

    pub fn constrain(
        &mut self,
        mat: DMatrix<Complex64>,
        coeffs: Vec<f64>,
        sense: Sense,
        rhs: f64,
    ) {
        self.constraints.push(ConeConstraint {
            mat,
            coeffs,
            rhs,
            sense,
        });
    }

    fn validate(&self) {
        assert!(self.psd_dim <= MAX_PSD_DIM, "psd_dim exceeds {MAX_PSD_DIM}");
        assert!(
            self.constraints.len() <= MAX_CONSTRAINTS,
            "too many constraints (limit {MAX_CONSTRAINTS})"
        );
        assert_hermitian(&self.obj_mat, self.psd_dim, "objective matrix");
        assert_eq!(self.obj_coeffs.len(), self.n_scalars, "objective coefficient count");
        for (k, c) in self.constraints.iter().enumerate() {
            assert_hermitian(&c.mat, self.psd_dim, "constraint matrix");
            assert_eq!(
                c.coeffs.len(),
                self.n_scalars,
                "constraint {k} scalar coefficient count"
            );
        }
    }
}

fn assert_hermitian(m: &DMatrix<Complex64>, dim: usize, what: &str) {
    assert_eq!(m.nrows(), dim, "{what} row count");
    assert_eq!(m.ncols(), dim, "{what} column count");
    let scale = 1.0 + m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    for r in 0..dim {
        for c in 0..dim {
            let diff = (m[(r, c)] - m[(c, r)].conj()).norm();
            assert!(diff <= 1e-12 * scale, "{what} is not Hermitian at ({r},{c})");
        }
    }
}

/// Embedded data matrix: `⟨T(A)/2, T(X)⟩_F = ⟨A, X⟩`.
fn half_embed(mat: &DMatrix<Complex64>, psd_dim: usize) -> DMatrix<f64> {
    if psd_dim == 0 {
        DMatrix::zeros(0, 0)
    } else {
        embed_herm(mat) * 0.5
    }
}

/// Equality standard form for phase 2: one slack per inequality row.
fn phase2_form(prog: &ConeProgram) -> RealForm {
    let d = if prog.psd_dim == 0 { 0 } else { 2 * prog.psd_dim };
    let n_ineq = prog
        .constraints
        .iter()
        .filter(|c| c.sense != Sense::Eq)
        .count();
    let p = prog.n_scalars + n_ineq;
    let mut c_vec = vec![0.0; p];
    c_vec[..prog.n_scalars].copy_from_slice(&prog.obj_coeffs);
    let mut rows = Vec::with_capacity(prog.constraints.len());
    let mut slack = prog.n_scalars;
    for c in &prog.constraints {
        let mut vec = vec![0.0; p];
        vec[..prog.n_scalars].copy_from_slice(&c.coeffs);
        match c.sense {
            Sense::Le => {
                vec[slack] = 1.0;
                slack += 1;
            }
            Sense::Ge => {
                vec[slack] = -1.0;
                slack += 1;
            }
            Sense::Eq => {}
        }
        rows.push(RealRow {
            mat: half_embed(&c.mat, prog.psd_dim),
            vec,
            b: c.rhs,
        });
    }
    RealForm {
        d,
        p,
        c_mat: half_embed(&prog.obj_mat, prog.psd_dim),
        c_vec,
        rows,
    }
}

/// `≤`-only view of the constraints: `sign·(⟨A_k,Ψ⟩ + a_k·w) ≤ sign·b_k`,
/// with equality rows split into a `+`/`−` pair.
struct LeRow {
    source: usize,
    sign: f64,
}

fn le_rows(prog: &ConeProgram) -> Vec<LeRow> {
    let mut out = Vec::new();
    for (k, c) in prog.constraints.iter().enumerate() {
        match c.sense {
            Sense::Le => out.push(LeRow { source: k, sign: 1.0 }),
            Sense::Ge => out.push(LeRow { source: k, sign: -1.0 }),
            Sense::Eq => {
                out.push(LeRow { source: k, sign: 1.0 });
                out.push(LeRow { source: k, sign: -1.0 });
            }
        }
    }
    out
}

/// Phase 1: minimize τ ≥ 0 subject to every `≤` row relaxed by τ. Scalar
/// layout is `[user scalars…, τ, slacks…]`.
fn phase1_form(prog: &ConeProgram, map: &[LeRow]) -> RealForm {
    let d = if prog.psd_dim == 0 { 0 } else { 2 * prog.psd_dim };
    let tau = prog.n_scalars;
    let p = prog.n_scalars + 1 + map.len();
    let mut c_vec = vec![0.0; p];
    c_vec[tau] = 1.0;
    let mut rows = Vec::with_capacity(map.len());
    for (r, le) in map.iter().enumerate() {
        let src = &prog.constraints[le.source];
        let mut vec = vec![0.0; p];
        for i in 0..prog.n_scalars {
            vec[i] = le.sign * src.coeffs[i];
        }
        vec[tau] = -1.0;
        vec[tau + 1 + r] = 1.0;
        rows.push(RealRow {
            mat: half_embed(&src.mat, prog.psd_dim) * le.sign,
            vec,
            b: le.sign * src.rhs,
        });
    }
    RealForm {
        d,
        p,
        c_mat: DMatrix::zeros(d, d),
        c_vec,
        rows,
    }
}

fn extract_primal(prog: &ConeProgram, out: &ipm::IpmOutcome) -> (DMatrix<Complex64>, Vec<f64>, f64) {
    let psi = if prog.psd_dim == 0 {
        DMatrix::zeros(0, 0)
    } else {
        unembed_avg(&out.s_mat)
    };
    let scalars = out.w[..prog.n_scalars].to_vec();
    let mut obj = herm_inner(&prog.obj_mat, &psi);
    for i in 0..prog.n_scalars {
        obj += prog.obj_coeffs[i] * scalars[i];
    }
    (psi, scalars, obj)
}

pub fn solve(prog: &ConeProgram, tol: f64) -> ConeSolution {
    prog.validate();
    let form = phase2_form(prog);
    let out = solve_ipm(&form, tol, MAX_ITER);
    let kkt2 = KktResiduals {
        primal_feas: out.pfeas,
        dual_feas: out.dfeas,
        duality_gap: out.relgap,
    };
    if out.converged {
        let (psi, scalars, objective) = extract_primal(prog, &out);
        let slack = 1e-5 * (1.0 + out.pobj.abs() + out.dobj.abs());
        assert!(
            out.pobj >= out.dobj - slack,
            "weak duality violated: primal {} < dual {}",
            out.pobj,
            out.dobj
        );
        return ConeSolution {
            status: ConeStatus::Optimal,
            psd_matrix: psi,
            scalars,
            objective_value: objective,
            kkt: kkt2,
            certificate: None,
        };
    }

    let map = le_rows(prog);
    let p1_form = phase1_form(prog, &map);
    let p1 = solve_ipm(&p1_form, tol, MAX_ITER);
    let b_inf = prog
        .constraints
        .iter()
        .fold(0.0f64, |acc, c| acc.max(c.rhs.abs()));
    let threshold = 100.0 * tol * (1.0 + b_inf);
    if p1.converged && p1.pobj > threshold {
        let mut cert = vec![0.0; prog.constraints.len()];
        for (r, le) in map.iter().enumerate() {
            cert[le.source] += le.sign * (-p1.y[r]).max(0.0);
        }
        let cb: f64 = cert
            .iter()
            .zip(&prog.constraints)
            .map(|(nu, c)| nu * c.rhs)
            .sum();
        if cb < 0.0 {
            for nu in cert.iter_mut() {
                *nu /= -cb;
            }
        } else {
            let m = cert.iter().fold(0.0f64, |acc, nu| acc.max(nu.abs()));
            if m > 0.0 {
                for nu in cert.iter_mut() {
                    *nu /= m;
                }
            }
        }
        return ConeSolution {
            status: ConeStatus::Infeasible,
            psd_matrix: DMatrix::zeros(prog.psd_dim, prog.psd_dim),
            scalars: vec![0.0; prog.n_scalars],
            objective_value: f64::NAN,
            kkt: KktResiduals {
                primal_feas: p1.pfeas,
                dual_feas: p1.dfeas,
                duality_gap: p1.relgap,
            },
            certificate: Some(cert),
        };
    }

    let (psi, scalars, objective) = extract_primal(prog, &out);
    ConeSolution {
        status: ConeStatus::MaxIter,
        psd_matrix: psi,
        scalars,
        objective_value: objective,
        kkt: kkt2,
        certificate: None,
    }
}

/// Checks that `cert` is a valid Farkas certificate of infeasibility:
/// correct sign pattern, `Σ ν_k A_k ⪰ 0`, `Σ ν_k a_k ≥ 0`, `ν·b < 0`.
pub fn verify_certificate(prog: &ConeProgram, cert: &[f64]) -> bool {
    if cert.len() != prog.constraints.len() {
        return false;
    }
    let nu_inf = cert.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if nu_inf == 0.0 {
        return false;
    }
    let sign_tol = 1e-9 * (1.0 + nu_inf);
    for (nu, c) in cert.iter().zip(&prog.constraints) {
        match c.sense {
            Sense::Le if *nu < -sign_tol => return false,
            Sense::Ge if *nu > sign_tol => return false,
            _ => {}
        }
    }
    if prog.psd_dim > 0 {
        let mut combo = DMatrix::zeros(prog.psd_dim, prog.psd_dim);
        for (nu, c) in cert.iter().zip(&prog.constraints) {
            combo += c.mat.clone() * Complex64::new(*nu, 0.0);
        }
        let scale = 1.0 + combo.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let eig = SymmetricEigen::new(embed_herm(&combo));
        let lam_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if lam_min < -1e-6 * scale {
            return false;
        }
    }
    for i in 0..prog.n_scalars {
        let mut acc = 0.0f64;
        let mut scale = 0.0f64;
        for (nu, c) in cert.iter().zip(&prog.constraints) {
            acc += nu * c.coeffs[i];
            scale = scale.max((nu * c.coeffs[i]).abs());
        }
        if acc < -1e-6 * (1.0 + scale) {
            return false;
        }
    }
    let cb: f64 = cert
        .iter()
        .zip(&prog.constraints)
        .map(|(nu, c)| nu * c.rhs)
        .sum();
    cb < 0.0
}

/// Leading eigenpair of a Hermitian matrix, plus the rank-one defect
/// (ratio of the second-largest distinct eigenvalue to the largest, both
/// taken from the complex spectrum). Returns a zero vector when the matrix
/// has no positive eigenvalue.
pub fn principal_direction(h: &DMatrix<Complex64>) -> (Vec<Complex64>, f64, f64) {
    let n = h.nrows();
    assert_eq!(h.ncols(), n, "principal_direction wants a square matrix");
    assert_hermitian(h, n, "principal_direction input");
    if n == 0 {
        return (Vec::new(), 0.0, 0.0);
    }
    let eig = SymmetricEigen::new(embed_herm(h));
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let lam1 = eig.eigenvalues[order[0]];
    if lam1 <= 0.0 {
        return (vec![Complex64::new(0.0, 0.0); n], lam1, 0.0);
    }
    // complex eigenvalues appear twice in the embedding; the third-largest
    // real eigenvalue is the second-largest complex one
    let defect = if n == 1 {
        0.0
    } else {
        (eig.eigenvalues[order[2]].max(0.0)) / lam1
    };

    let near_tol = 1e-12 * (1.0 + lam1.abs());
    let mut best: Option<Vec<Complex64>> = None;
    for &idx in &order {
        if lam1 - eig.eigenvalues[idx] > near_tol {
            break;
        }
        let col = eig.eigenvectors.column(idx);
        let cand: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(col[i], col[n + i]))
            .collect();
        let better = match &best {
            None => true,
            Some(b) => {
                let mut wins = false;
                for i in 0..n {
                    let d = cand[i].norm() - b[i].norm();
                    if d > 1e-12 {
                        wins = true;
                        break;
                    }
                    if d < -1e-12 {
                        break;
                    }
                }
                wins
            }
        };
        if better {
            best = Some(cand);
        }
    }
    let mut u = best.unwrap();
    // fix the global phase: first significantly nonzero entry real positive
    if let Some(pivot) = u.iter().position(|z| z.norm() > 1e-12) {
        let phase = u[pivot].conj() / u[pivot].norm();
        for z in u.iter_mut() {
            *z *= phase;
        }
        // clean the pivot's imaginary dust
        u[pivot] = Complex64::new(u[pivot].re.hypot(u[pivot].im), 0.0);
    }
    (u, lam1, defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity(n: usize) -> DMatrix<Complex64> {
        DMatrix::identity(n, n)
    }

    #[test]
    fn min_trace_with_floor() {
        // min tr Ψ s.t. tr Ψ ≥ 1 → 1
        let mut prog = ConeProgram::new(2, 0);
        prog.obj_mat = identity(2);
        prog.constrain(identity(2), vec![], Sense::Ge, 1.0);
        let sol = solve(&prog, 1e-9);
        assert_eq!(sol.status, ConeStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 1.0, epsilon = 1e-7);
        assert!(sol.kkt.primal_feas <= 1e-9);
        assert!(sol.kkt.duality_gap <= 1e-9);
        assert!(sol.certificate.is_none());
    }

    #[test]
    fn max_eigenvalue_by_sdp() {
        // max ⟨A, Ψ⟩ s.t. tr Ψ ≤ 1 equals λmax(A) = 2 for A = [[1, i], [-i, 1]]
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        let mut prog = ConeProgram::new(2, 0);
        prog.obj_mat = a.clone() * c(-1.0, 0.0);
        prog.constrain(identity(2), vec![], Sense::Le, 1.0);
        let sol = solve(&prog, 1e-9);
        assert_eq!(sol.status, ConeStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, -2.0, epsilon = 1e-6);
        // optimizer is (nearly) the rank-one projector onto the top eigenvector
        let (u, lam, defect) = principal_direction(&sol.psd_matrix);
        assert_abs_diff_eq!(lam, 1.0, epsilon = 1e-5);
        assert!(defect < 1e-5, "defect {defect}");
        let au: Vec<Complex64> = (0..2)
            .map(|r| a[(r, 0)] * u[0] + a[(r, 1)] * u[1])
            .collect();
        for r in 0..2 {
            assert!((au[r] - u[r] * c(2.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn mixed_scalars_and_psd() {
        // min 2·Ps + tr Ψ s.t. Ps ≥ 0.25, ⟨I,Ψ⟩ + Ps ≥ 1 → Ps = 0.25, trΨ = 0.75
        let mut prog = ConeProgram::new(2, 1);
        prog.obj_mat = identity(2);
        prog.obj_coeffs = vec![2.0];
        prog.constrain(DMatrix::zeros(2, 2), vec![1.0], Sense::Ge, 0.25);
        prog.constrain(identity(2), vec![1.0], Sense::Ge, 1.0);
        let sol = solve(&prog, 1e-9);
        assert_eq!(sol.status, ConeStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 1.25, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.scalars[0], 0.25, epsilon = 1e-6);
    }

    #[test]
    fn equality_row() {
        // min tr Ψ s.t. ⟨E00, Ψ⟩ = 0.5 → Ψ = diag(0.5, 0)
        let mut e00 = DMatrix::zeros(2, 2);
        e00[(0, 0)] = c(1.0, 0.0);
        let mut prog = ConeProgram::new(2, 0);
        prog.obj_mat = identity(2);
        prog.constrain(e00, vec![], Sense::Eq, 0.5);
        let sol = solve(&prog, 1e-9);
        assert_eq!(sol.status, ConeStatus::Optimal);
        assert_abs_diff_eq!(sol.objective_value, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.psd_matrix[(0, 0)].re, 0.5, epsilon = 1e-6);
        assert!(sol.psd_matrix[(1, 1)].re.abs() < 1e-6);
    }

    #[test]
    fn infeasible_is_certified() {
        // tr Ψ ≤ 1 and tr Ψ ≥ 2 cannot both hold
        let mut prog = ConeProgram::new(2, 0);
        prog.obj_mat = identity(2);
        prog.constrain(identity(2), vec![], Sense::Le, 1.0);
        prog.constrain(identity(2), vec![], Sense::Ge, 2.0);
        let sol = solve(&prog, 1e-8);
        assert_eq!(sol.status, ConeStatus::Infeasible);
        let cert = sol.certificate.expect("certificate");
        assert!(verify_certificate(&prog, &cert), "certificate rejected: {cert:?}");
        assert!(cert[0] >= 0.0 && cert[1] <= 0.0);
    }

    #[test]
    fn infeasible_scalar_system() {
        // w ≤ 1, w ≥ 3
        let mut prog = ConeProgram::new(0, 1);
        prog.obj_coeffs = vec![1.0];
        prog.constrain(DMatrix::zeros(0, 0), vec![1.0], Sense::Le, 1.0);
        prog.constrain(DMatrix::zeros(0, 0), vec![1.0], Sense::Ge, 3.0);
        let sol = solve(&prog, 1e-8);
        assert_eq!(sol.status, ConeStatus::Infeasible);
        assert!(verify_certificate(&prog, &sol.certificate.unwrap()));
    }

    #[test]
    fn certificate_rejects_wrong_vectors() {
        let mut prog = ConeProgram::new(2, 0);
        prog.obj_mat = identity(2);
        prog.constrain(identity(2), vec![], Sense::Le, 1.0);
        prog.constrain(identity(2), vec![], Sense::Ge, 2.0);
        assert!(!verify_certificate(&prog, &[0.0, 0.0]));
        assert!(!verify_certificate(&prog, &[1.0, 1.0])); // wrong sign on the ≥ row
        assert!(!verify_certificate(&prog, &[1.0])); // wrong length
        assert!(!verify_certificate(&prog, &[1.0, -0.25])); // ν·b = 0.5 > 0
    }

    #[test]
    fn principal_direction_recovers_rank_one() {
        let psi0 = [c(0.6, 0.0), c(0.0, 0.8)];
        let mut h = DMatrix::zeros(2, 2);
        for r in 0..2 {
            for col in 0..2 {
                h[(r, col)] = psi0[r] * psi0[col].conj();
            }
        }
        let (u, lam, defect) = principal_direction(&h);
        assert_abs_diff_eq!(lam, 1.0, epsilon = 1e-12);
        assert!(defect < 1e-12);
        // global phase fixed: first entry real positive
        assert!(u[0].im.abs() < 1e-12 && u[0].re > 0.0);
        assert_abs_diff_eq!(u[0].re, 0.6, epsilon = 1e-10);
        assert_abs_diff_eq!(u[1].im, 0.8, epsilon = 1e-10);
    }

    #[test]
    fn principal_direction_degenerate_cases() {
        let (u, lam, defect) = principal_direction(&DMatrix::from_diagonal_element(2, 2, c(0.0, 0.0)));
        assert_eq!(lam, 0.0);
        assert_eq!(defect, 0.0);
        assert!(u.iter().all(|z| z.norm() == 0.0));

        let mut d20 = DMatrix::zeros(2, 2);
        d20[(0, 0)] = c(2.0, 0.0);
        let (u, lam, defect) = principal_direction(&d20);
        assert_abs_diff_eq!(lam, 2.0, epsilon = 1e-14);
        assert!(defect.abs() < 1e-14);
        assert_abs_diff_eq!(u[0].re, 1.0, epsilon = 1e-12);
        assert!(u[1].norm() < 1e-12);

        // fully degenerate spectrum: convention picks e₁ with defect 1
        let (u, lam, defect) = principal_direction(&identity(2));
        assert_abs_diff_eq!(lam, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(defect, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[0].re, 1.0, epsilon = 1e-12);
        assert!(u[0].im.abs() < 1e-12 && u[1].norm() < 1e-12);

        let (u, lam, defect) = principal_direction(&DMatrix::from_element(1, 1, c(3.0, 0.0)));
        assert_abs_diff_eq!(lam, 3.0, epsilon = 1e-14);
        assert_eq!(defect, 0.0);
        assert_abs_diff_eq!(u[0].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn solve_is_deterministic() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.5, 0.0), c(0.2, 0.7), c(0.2, -0.7), c(0.9, 0.0)],
        );
        let mut prog = ConeProgram::new(2, 1);
        prog.obj_mat = identity(2);
        prog.obj_coeffs = vec![2.0];
        prog.constrain(a, vec![0.5], Sense::Ge, 1.0);
        prog.constrain(identity(2), vec![1.0], Sense::Le, 5.0);
        let s1 = solve(&prog, 1e-9);
        let s2 = solve(&prog, 1e-9);
        assert_eq!(s1.objective_value.to_bits(), s2.objective_value.to_bits());
        for (x, y) in s1.psd_matrix.iter().zip(s2.psd_matrix.iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
}
