//! Complex Hermitian ↔ real symmetric embedding.
//!
//! A Hermitian `A = X + iY` maps to `T(A) = [[X, -Y], [Y, X]]`, which is
//! symmetric, has doubled trace, and is PSD iff `A` is. Frobenius products
//! satisfy `⟨T(A), T(B)⟩ = 2·tr(AB)`, so constraint data enter the real kernel
//! as `T(A)/2`. Every embedded matrix commutes with `J = [[0, -I], [I, 0]]`;
//! averaging a kernel iterate with its J-conjugate projects it back onto the
//! embedded subspace without changing any objective or constraint value.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `T(A)` for Hermitian `A` (2n×2n real symmetric).
pub fn embed_herm(a: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            out[(r, c)] = z.re;
            out[(r + n, c + n)] = z.re;
            out[(r, c + n)] = -z.im;
            out[(r + n, c)] = z.im;
        }
    }
    out
}

/// Recovers the Hermitian matrix from a (possibly roundoff-perturbed) kernel
/// iterate: J-average first, then read off `X + iY` and re-hermitianize.
pub fn unembed_avg(s: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = s.nrows() / 2;
    let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for r in 0..n {
        for c in 0..n {
            // J-conjugation swaps the diagonal blocks and swap-negates the
            // off-diagonal ones; averaging both orientations symmetrizes.
            let x = 0.5 * (s[(r, c)] + s[(r + n, c + n)]);
            let y = 0.5 * (s[(r + n, c)] - s[(r, c + n)]);
            out[(r, c)] = Complex64::new(x, y);
        }
    }
    // enforce exact Hermitian symmetry
    for r in 0..n {
        out[(r, r)] = Complex64::new(out[(r, r)].re, 0.0);
        for c in (r + 1)..n {
            let avg = 0.5 * (out[(r, c)] + out[(c, r)].conj());
            out[(r, c)] = avg;
            out[(c, r)] = avg.conj();
        }
    }
    out
}

/// Real Frobenius inner product.
pub fn frob(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// `Re tr(AB)` for complex matrices (equals `tr(AB)` when both are Hermitian).
pub fn herm_inner(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            acc += (a[(r, c)] * b[(c, r)]).re;
        }
    }
    acc
}
