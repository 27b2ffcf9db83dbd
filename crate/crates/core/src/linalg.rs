//! Small dense complex-matrix helpers and the independent matrix-exponential
//! oracle used to validate every closed-form propagator in this crate.
//!
//! The oracle deliberately shares no code with the axis-angle closed forms in
//! [`crate::subspace`]: it exponentiates a Hermitian generator by plain
//! scaling-and-squaring on a truncated Taylor series.

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`matrix_exp_oracle`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Largest element magnitude of a dynamic complex matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest element magnitude of the difference `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    max_abs(&(a - b))
}

/// max |H - H†| over all elements.
pub fn hermiticity_residual(m: &DMatrix<Complex64>) -> f64 {
    let mut residual: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            residual = residual.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    residual
}

/// max |U†U - I| over all elements.
pub fn unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let gram = m.adjoint() * m;
    let identity = DMatrix::<Complex64>::identity(n, n);
    max_abs(&(gram - identity))
}

/// exp(-i H t) for a Hermitian matrix `H`, computed by scaling-and-squaring
/// on a truncated Taylor series.
///
/// This is the verification path for all closed-form propagators and the
/// *only* path for the 3x3 atom-mediated kick propagator. Rejects
/// non-Hermitian input (residual above [`HERMITIAN_TOL`]).
pub fn matrix_exp_oracle(h: &DMatrix<Complex64>, t: f64) -> Result<DMatrix<Complex64>> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let residual = hermiticity_residual(h);
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian(residual));
    }
    let generator = h * Complex64::new(0.0, -t);
    Ok(exp_scaling_squaring(&generator))
}

/// exp(A) by repeated halving until ||A/2^s||_max <= 1/2, Taylor summation,
/// then s squarings.
fn exp_scaling_squaring(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let norm = max_abs(a) * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / Complex64::from(2f64.powi(squarings as i32));

    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=40u32 {
        term = (&term * &scaled) / Complex64::from(k as f64);
        sum += &term;
        if max_abs(&term) < 1e-22 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
pub fn hermitian_eigenvalues_2x2(m: &Matrix2<Complex64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)].norm_sqr();
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b).sqrt();
    [mean - radius, mean + radius]
}

/// Eigenvalues of a Hermitian 3x3 matrix, ascending, by the trigonometric
/// closed form for the characteristic cubic.
pub fn hermitian_eigenvalues_3x3(m: &Matrix3<Complex64>) -> [f64; 3] {
    let off = m[(0, 1)].norm_sqr() + m[(0, 2)].norm_sqr() + m[(1, 2)].norm_sqr();
    let d0 = m[(0, 0)].re;
    let d1 = m[(1, 1)].re;
    let d2 = m[(2, 2)].re;
    if off == 0.0 {
        let mut eig = [d0, d1, d2];
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return eig;
    }
    let q = (d0 + d1 + d2) / 3.0;
    let p2 = (d0 - q).powi(2) + (d1 - q).powi(2) + (d2 - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    let shifted = m - Matrix3::identity() * Complex64::from(q);
    let scaled = shifted / Complex64::from(p);
    // det of a Hermitian matrix is real; discard rounding in Im.
    let r = (scaled.determinant().re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let mid = 3.0 * q - hi - lo;
    [lo, mid, hi]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn dm(entries: [[Complex64; 2]; 2]) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[entries[0][0], entries[0][1], entries[1][0], entries[1][1]],
        )
    }

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn exp_of_zero_matrix_is_identity() {
        let h = DMatrix::<Complex64>::zeros(3, 3);
        let u = matrix_exp_oracle(&h, 1.7).unwrap();
        assert!(max_abs_diff(&u, &DMatrix::identity(3, 3)) < 1e-15);
    }

    #[test]
    fn exp_of_sigma_z_at_pi_is_minus_identity() {
        let sigma_z = dm([[ONE, ZERO], [ZERO, -ONE]]);
        let u = matrix_exp_oracle(&sigma_z, PI).unwrap();
        let minus_identity = dm([[-ONE, ZERO], [ZERO, -ONE]]);
        assert!(max_abs_diff(&u, &minus_identity) < 1e-14);
    }

    #[test]
    fn exp_of_sigma_x_half_pi_rotation() {
        // (omega/2) sigma_x with omega = 2, t = pi/2 -> -i sigma_x
        let h = dm([[ZERO, ONE], [ONE, ZERO]]);
        let u = matrix_exp_oracle(&h, PI / 2.0).unwrap();
        let minus_i = Complex64::new(0.0, -1.0);
        let expected = dm([[ZERO, minus_i], [minus_i, ZERO]]);
        assert!(max_abs_diff(&u, &expected) < 1e-14);
    }

    #[test]
    fn oracle_rejects_non_hermitian_input() {
        let h = dm([[ONE, ONE], [ZERO, ONE]]);
        match matrix_exp_oracle(&h, 1.0) {
            Err(Error::NotHermitian(r)) => assert!(r > 0.5),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn oracle_rejects_rectangular_input() {
        let h = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(
            matrix_exp_oracle(&h, 1.0),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn oracle_output_is_unitary_for_large_arguments() {
        // gamma ~ 1e6 over tau ~ 1e-5 exercises the squaring path.
        let h = dm([
            [ZERO, Complex64::from(3.2e5)],
            [Complex64::from(3.2e5), ZERO],
        ]);
        let u = matrix_exp_oracle(&h, 1e-5).unwrap();
        assert!(unitarity_residual(&u) < 1e-12);
    }

    #[test]
    fn eigenvalues_2x2_match_pauli_z() {
        let m = Matrix2::new(ONE, ZERO, ZERO, -ONE);
        let eig = hermitian_eigenvalues_2x2(&m);
        assert!((eig[0] + 1.0).abs() < 1e-15 && (eig[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_3x3_match_known_spectrum() {
        // H with g = 1 hopping and gamma = 2 exchange; spectrum is {0, ±sqrt(5)}.
        let m = Matrix3::new(
            ZERO,
            ONE,
            ZERO,
            ONE,
            ZERO,
            Complex64::from(2.0),
            ZERO,
            Complex64::from(2.0),
            ZERO,
        );
        let eig = hermitian_eigenvalues_3x3(&m);
        let s5 = 5f64.sqrt();
        assert!((eig[0] + s5).abs() < 1e-12);
        assert!(eig[1].abs() < 1e-12);
        assert!((eig[2] - s5).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_3x3_diagonal_path() {
        let m = Matrix3::new(
            Complex64::from(0.3),
            ZERO,
            ZERO,
            ZERO,
            Complex64::from(-1.5),
            ZERO,
            ZERO,
            ZERO,
            Complex64::from(0.9),
        );
        let eig = hermitian_eigenvalues_3x3(&m);
        assert_eq!(eig, [-1.5, 0.3, 0.9]);
    }
}
