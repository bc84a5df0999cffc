//! Exact minimum-total solver for 2-variable linear programs of the form
//!
//! ```text
//! minimize   x + y
//! s.t.       a_k·x + b_k·y ≥ c_k   (k = 1..K),   x ≥ 0,  y ≥ 0
//! ```
//!
//! by enumerating all pairwise intersections of constraint boundaries and the
//! axes — at most (K+2 choose 2) candidate vertices. `x + y` is bounded below
//! on the feasible set and the set contains no lines, so when it is nonempty
//! the minimum is attained at such a vertex.

/// One half-plane `a·x + b·y ≥ c`.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

const FEAS_TOL: f64 = 1e-9;

/// Minimizes `x + y` over the intersection of `cons` with the first quadrant.
/// Returns `None` when the system is infeasible. Ties between vertices break
/// toward smaller `x` for determinism.
pub fn minimize_total(cons: &[HalfPlane]) -> Option<(f64, f64)> {
    let mut lines: Vec<HalfPlane> = cons.to_vec();
    lines.push(HalfPlane { a: 1.0, b: 0.0, c: 0.0 });
    lines.push(HalfPlane { a: 0.0, b: 1.0, c: 0.0 });

    let feasible = |x: f64, y: f64| -> bool {
        x >= -FEAS_TOL
            && y >= -FEAS_TOL
            && cons.iter().all(|h| h.a * x + h.b * y >= h.c - FEAS_TOL)
    };

    let mut best: Option<(f64, f64)> = None;
    let mut consider = |x: f64, y: f64| {
        if !x.is_finite() || !y.is_finite() || !feasible(x, y) {
            return;
        }
        let (x, y) = (x.max(0.0), y.max(0.0));
        match best {
            None => best = Some((x, y)),
            Some((bx, by)) => {
                let t = x + y;
                let bt = bx + by;
                if t < bt - 1e-15 || (t <= bt + 1e-15 && x < bx) {
                    best = Some((x, y));
                }
            }
        }
    };

    for i in 0..lines.len() {
        for k in (i + 1)..lines.len() {
            let (h1, h2) = (lines[i], lines[k]);
            let det = h1.a * h2.b - h2.a * h1.b;
            let scale = (h1.a.abs() + h1.b.abs()) * (h2.a.abs() + h2.b.abs());
            if det.abs() <= 1e-14 * scale.max(1e-300) {
                continue;
            }
            consider(
                (h1.c * h2.b - h2.c * h1.b) / det,
                (h1.a * h2.c - h2.a * h1.c) / det,
            );
        }
    }
    best
}
