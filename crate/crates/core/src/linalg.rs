//! Small dense complex linear algebra used by the Newton operator and the
//! condition number.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub(crate) fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian product `<x, y> = sum x_j conj(y_j)`.
pub fn hermitian_dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// Orthonormal basis of the complement of `z` (a unit vector), as the last `n`
/// columns of the Householder reflection sending `z` to a multiple of `e_0`.
pub fn complement_basis(z: &[Complex64]) -> DMatrix<Complex64> {
    let m = z.len();
    let phase = if z[0].norm() > 0.0 {
        z[0] / z[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let beta = -phase * vec_norm(z);
    let mut v: Vec<Complex64> = z.to_vec();
    v[0] -= beta;
    let vv: f64 = v.iter().map(|c| c.norm_sqr()).sum();
    let mut basis = DMatrix::from_element(m, m - 1, zero());
    for col in 1..m {
        let scale = v[col].conj() * (2.0 / vv);
        for row in 0..m {
            let id = if row == col { 1.0 } else { 0.0 };
            basis[(row, col - 1)] = Complex64::new(id, 0.0) - v[row] * scale;
        }
    }
    basis
}

/// Smallest and largest singular values.
pub fn singular_extremes(a: &DMatrix<Complex64>) -> (f64, f64) {
    let sv = a.clone().singular_values();
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    (min, max)
}

/// Solves `a x = b` through the SVD; `None` when `sigma_min <= rel_tol * sigma_max`.
pub fn svd_solve(a: &DMatrix<Complex64>, b: &[Complex64], rel_tol: f64) -> Option<Vec<Complex64>> {
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > rel_tol * max) || !min.is_finite() {
        return None;
    }
    let u = svd.u.as_ref()?;
    let v_t = svd.v_t.as_ref()?;
    let rhs = DVector::from_column_slice(b);
    let mut y = u.adjoint() * rhs;
    for (yi, s) in y.iter_mut().zip(sv.iter()) {
        *yi /= *s;
    }
    let x = v_t.adjoint() * y;
    Some(x.iter().cloned().collect())
}

/// Reduces a Hermitian matrix to Hermitian tridiagonal form by a sequence of
/// Householder similarity transformations.
pub fn hermitian_tridiagonal(g: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = g.nrows();
    assert_eq!(n, g.ncols());
    let mut t = g.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| t[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vv: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        // H = I - 2 v v^* / (v^* v) acting on rows/cols k+1..n
        let mut h = DMatrix::<Complex64>::identity(n, n);
        for (a, va) in v.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                h[(k + 1 + a, k + 1 + b)] -= va * vb.conj() * (2.0 / vv);
            }
        }
        t = &h * &t * &h;
    }
    t
}

/// Maximum column sum of absolute values.
pub fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complement_is_orthonormal_and_orthogonal() {
        let mut z = vec![c(0.3, -0.2), c(0.1, 0.7), c(-0.5, 0.2)];
        let nz = vec_norm(&z);
        z.iter_mut().for_each(|x| *x /= nz);
        let b = complement_basis(&z);
        let gram = b.adjoint() * &b;
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - c(want, 0.0)).norm() < 1e-14);
            }
            let col: Vec<_> = b.column(i).iter().cloned().collect();
            assert!(hermitian_dot(&col, &z).norm() < 1e-14);
        }
    }

    #[test]
    fn complement_with_zero_leading_coordinate() {
        let z = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let b = complement_basis(&z);
        assert!((b[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(b[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn tridiagonal_preserves_spectrum_norm() {
        let a = DMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.1 - 0.4, (i as f64 - j as f64) * 0.2));
        let g = a.adjoint() * &a;
        let t = hermitian_tridiagonal(&g);
        for i in 0..4usize {
            for j in 0..4 {
                if i.abs_diff(j) > 1 {
                    assert!(t[(i, j)].norm() < 1e-12, "entry ({i},{j}) = {}", t[(i, j)]);
                }
            }
        }
        let (_, smax_g) = singular_extremes(&g);
        let (_, smax_t) = singular_extremes(&t);
        assert!((smax_g - smax_t).abs() < 1e-12 * smax_g);
    }

    #[test]
    fn svd_solve_rejects_singular() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        assert!(svd_solve(&a, &[c(1.0, 0.0), c(0.0, 0.0)], 1e-14).is_none());
        let b = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 4.0)]);
        let x = svd_solve(&b, &[c(1.0, 0.0), c(1.0, 0.0)], 1e-14).unwrap();
        assert!((x[0] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(0.0, -0.25)).norm() < 1e-15);
    }
}
