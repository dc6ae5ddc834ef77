use nalgebra::DMatrix;

/// Off-diagonal of the Jacobi matrix of the orthonormal Legendre polynomials:
/// `s p_k = beta_{k+1} p_{k+1} + beta_k p_{k-1}`.
fn jacobi_beta(k: usize) -> f64 {
    let k = k as f64;
    k / ((2.0 * k - 1.0) * (2.0 * k + 1.0)).sqrt()
}

/// Galerkin matrices of `M` and of multiplication by `t^2` in the basis
/// `v_k(t) = sqrt((2k+1)/(2a)) P_k(t/a)`, `k < n`.
///
/// `M` is diagonal with `k(k+1)/a^2`. The `t^2` matrix is `a^2 X^2` with `X` the
/// Legendre Jacobi matrix; both entries are closed forms, no quadrature.
pub fn galerkin_matrices(n: usize, a: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut m = DMatrix::zeros(n, n);
    let mut q = DMatrix::zeros(n, n);
    let a2 = a * a;
    for k in 0..n {
        m[(k, k)] = (k * (k + 1)) as f64 / a2;
        let b0 = if k == 0 { 0.0 } else { jacobi_beta(k) };
        let b1 = jacobi_beta(k + 1);
        q[(k, k)] = a2 * (b0 * b0 + b1 * b1);
        if k + 2 < n {
            let v = a2 * b1 * jacobi_beta(k + 2);
            q[(k, k + 2)] = v;
            q[(k + 2, k)] = v;
        }
    }
    (m, q)
}
