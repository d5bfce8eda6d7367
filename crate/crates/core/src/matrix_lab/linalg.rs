use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Sweep budget of the Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to the full norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Domain("eigenvalues need a square matrix".into()));
    }
    let mut m = a.clone();
    let total = m.norm();
    let off = |m: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > JACOBI_TOLERANCE * total {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::JacobiNonConvergence(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Singular values of `x`, i.e. the eigenvalues of `|x| = (xᵀx)^{1/2}`, ascending.
pub fn singular_values(x: &DMatrix<f64>) -> Result<Vec<f64>> {
    let mut sv: Vec<f64> = x
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::NonConvergence { iterations: 0, residuals: [f64::NAN; 2] })?
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(f64::total_cmp);
    Ok(sv)
}

/// `‖x‖_p = τ(|x|^p)^{1/p}` with `τ = (1/N) Tr`.
pub fn nc_lp_norm(x: &DMatrix<f64>, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("Lp norm needs p >= 1, got {p}")));
    }
    let sv = singular_values(x)?;
    Ok(lp_from_singular_values(&sv, p))
}

pub(crate) fn lp_from_singular_values(sv: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return sv.iter().copied().fold(0.0, f64::max);
    }
    let mean = sv.iter().map(|s| s.powf(p)).sum::<f64>() / sv.len() as f64;
    mean.powf(1.0 / p)
}

/// Operator norm, the largest singular value.
pub fn operator_norm(x: &DMatrix<f64>) -> Result<f64> {
    Ok(singular_values(x)?.last().copied().unwrap_or(0.0))
}

/// `(1/N) Tr(a b)` without forming the product.
pub fn normalized_trace_of_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s / n as f64
}

pub fn normalized_trace(a: &DMatrix<f64>) -> f64 {
    a.trace() / a.nrows() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal_norms() {
        let id = DMatrix::<f64>::identity(5, 5);
        for p in [1.0, 2.0, 3.5] {
            assert!((nc_lp_norm(&id, p).unwrap() - 1.0).abs() < 1e-14);
        }
        let mut d = DMatrix::<f64>::zeros(3, 3);
        d[(0, 0)] = 3.0;
        assert!((nc_lp_norm(&d, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(nc_lp_norm(&d, 0.5).is_err());
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0]);
        let ev = symmetric_eigenvalues(&m).unwrap();
        let s = std::f64::consts::SQRT_2;
        for (got, want) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn two_norm_matches_trace() {
        let x = DMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + if i == j { 0.5 } else { 0.0 });
        let x = &x + x.transpose();
        let lhs = nc_lp_norm(&x, 2.0).unwrap().powi(2);
        let rhs = normalized_trace_of_product(&x, &x);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
        assert!((normalized_trace(&(&x * &x)) - rhs).abs() < 1e-12 * rhs);
        let op = operator_norm(&x).unwrap();
        let ev = symmetric_eigenvalues(&x).unwrap();
        assert!((op - ev[0].abs().max(ev[5].abs())).abs() < 1e-10);
    }
}
